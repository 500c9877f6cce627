//! Arbitrary-precision integer matrices and Smith-normal-form based
//! kernel / cokernel / solve primitives.
//!
//! Everything downstream (character tables, module presentations, cohomology)
//! reduces to the handful of lattice operations in this file, so they are
//! written for exactness and auditability rather than speed: dense storage,
//! `BigInt` entries, no modular shortcuts.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Dense integer matrix, row-major, entries of arbitrary precision.
///
/// Matrices are immutable values as far as the public API is concerned:
/// every operation returns fresh data.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.at(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, entries }
    }

    /// Build from `i64` rows; panics if the row lengths are ragged.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        debug_assert!(i < self.rows && j < self.cols);
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| -self.at(i, j))
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j) * c)
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        IntMatrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j) + other.at(i, j))
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        let cur = out.at(i, j) + a * b;
                        out.set(i, j, cur);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j) * &v[j]).sum())
            .collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "row count mismatch");
        IntMatrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols { self.at(i, j).clone() } else { other.at(i, j - self.cols).clone() }
        })
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols, "column count mismatch");
        IntMatrix::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows { self.at(i, j).clone() } else { other.at(i - self.rows, j).clone() }
        })
    }

    pub fn block_diag(blocks: &[&IntMatrix]) -> IntMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = IntMatrix::zero(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.at(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Kronecker (tensor) product, with the row-major index convention
    /// `(i1, i2) -> i1 * other.rows + i2`.
    pub fn kronecker(&self, other: &IntMatrix) -> IntMatrix {
        IntMatrix::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            let (i1, i2) = (i / other.rows, i % other.rows);
            let (j1, j2) = (j / other.cols, j % other.cols);
            self.at(i1, j1) * other.at(i2, j2)
        })
    }

    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> IntMatrix {
        IntMatrix::from_fn(row_idx.len(), col_idx.len(), |i, j| {
            self.at(row_idx[i], col_idx[j]).clone()
        })
    }

    pub fn from_columns(rows: usize, cols: &[Vec<BigInt>]) -> IntMatrix {
        assert!(cols.iter().all(|c| c.len() == rows), "column length mismatch");
        IntMatrix::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
    }

    /// Exact determinant via fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.entries.clone();
        let idx = |i: usize, j: usize| i * n + j;
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[idx(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[idx(i, k)].is_zero()) {
                    Some(i) => {
                        for j in 0..n {
                            a.swap(idx(k, j), idx(i, j));
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[idx(i, j)] * &a[idx(k, k)] - &a[idx(i, k)] * &a[idx(k, j)]) / &prev;
                    a[idx(i, j)] = v;
                }
                a[idx(i, k)] = BigInt::zero();
            }
            prev = a[idx(k, k)].clone();
        }
        sign * a[idx(n - 1, n - 1)].clone()
    }
}

/// Serde adapter: torsion orders as decimal strings, so JSON reports and
/// scenario files stay human-readable at any magnitude.
mod decimal_integers {
    use num_bigint::BigInt;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};
    use std::str::FromStr;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for t in v {
            seq.serialize_element(&t.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let strings: Vec<String> = Vec::deserialize(d)?;
        strings
            .iter()
            .map(|s| BigInt::from_str(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Invariants of a finitely generated abelian group: `Z^free_rank + sum Z/d_i`
/// with `d_1 | d_2 | ...`, each `d_i >= 2`.
#[derive(Clone, PartialEq, Eq, Debug, serde::Serialize, serde::Deserialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    #[serde(with = "decimal_integers")]
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    pub fn free(rank: usize) -> Self {
        AbelianInvariants { free_rank: rank, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Invariants of the direct sum of two groups (merge + re-normalize the
    /// divisibility chain via prime-power multiset bookkeeping is overkill:
    /// we re-run SNF on a diagonal matrix instead, which is tiny).
    pub fn direct_sum(&self, other: &AbelianInvariants) -> AbelianInvariants {
        let tors: Vec<BigInt> = self.torsion.iter().chain(other.torsion.iter()).cloned().collect();
        let n = tors.len();
        let mut d = IntMatrix::zero(n, n);
        for (i, t) in tors.iter().enumerate() {
            d.set(i, i, t.clone());
        }
        let mut inv = cokernel_invariants(&d);
        inv.free_rank = self.free_rank + other.free_rank;
        inv
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.free_rank)
            });
        }
        for t in &self.torsion {
            parts.push(format!("Z/{}", t));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Result of `smith_normal_form`: unimodular `u`, `v` with `u * m * v = d`,
/// `d` diagonal with a divisibility chain along the diagonal.
///
/// `u_inv` is the exact inverse of `u`, tracked during elimination; several
/// consumers (presentation compression, preimage transport) need it and
/// recomputing an inverse after the fact would be wasteful.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
}

impl SmithDecomposition {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        let n = self.d.rows().min(self.d.cols());
        (0..n).filter(|&i| !self.d.at(i, i).is_zero()).count()
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d.at(i, i).clone()).collect()
    }
}

/// Smith normal form over Z.
///
/// Pivoting picks the nonzero entry of minimal absolute value in the
/// remaining block, which keeps intermediate entry growth tolerable without
/// compromising exactness.
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut u_inv = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    // Row op on d and u: row_i += c * row_j; u_inv gets the inverse column op.
    fn row_add(d: &mut IntMatrix, u: &mut IntMatrix, u_inv: &mut IntMatrix, i: usize, j: usize, c: &BigInt) {
        for k in 0..d.cols() {
            let val = d.at(i, k) + c * d.at(j, k);
            d.set(i, k, val);
        }
        for k in 0..u.cols() {
            let val = u.at(i, k) + c * u.at(j, k);
            u.set(i, k, val);
        }
        // (E_{ij}(c))^{-1} = E_{ij}(-c); u_inv tracks u^{-1} = product of
        // inverses applied on the right, i.e. a column operation.
        for k in 0..u_inv.rows() {
            let val = u_inv.at(k, j) - c * u_inv.at(k, i);
            u_inv.set(k, j, val);
        }
    }

    fn row_swap(d: &mut IntMatrix, u: &mut IntMatrix, u_inv: &mut IntMatrix, i: usize, j: usize) {
        for k in 0..d.cols() {
            let (a, b) = (d.at(i, k).clone(), d.at(j, k).clone());
            d.set(i, k, b);
            d.set(j, k, a);
        }
        for k in 0..u.cols() {
            let (a, b) = (u.at(i, k).clone(), u.at(j, k).clone());
            u.set(i, k, b);
            u.set(j, k, a);
        }
        for k in 0..u_inv.rows() {
            let (a, b) = (u_inv.at(k, i).clone(), u_inv.at(k, j).clone());
            u_inv.set(k, i, b);
            u_inv.set(k, j, a);
        }
    }

    fn row_negate(d: &mut IntMatrix, u: &mut IntMatrix, u_inv: &mut IntMatrix, i: usize) {
        for k in 0..d.cols() {
            let val = -d.at(i, k);
            d.set(i, k, val);
        }
        for k in 0..u.cols() {
            let val = -u.at(i, k);
            u.set(i, k, val);
        }
        for k in 0..u_inv.rows() {
            let val = -u_inv.at(k, i);
            u_inv.set(k, i, val);
        }
    }

    fn col_add(d: &mut IntMatrix, v: &mut IntMatrix, j: usize, i: usize, c: &BigInt) {
        for k in 0..d.rows() {
            let val = d.at(k, j) + c * d.at(k, i);
            d.set(k, j, val);
        }
        for k in 0..v.rows() {
            let val = v.at(k, j) + c * v.at(k, i);
            v.set(k, j, val);
        }
    }

    fn col_swap(d: &mut IntMatrix, v: &mut IntMatrix, i: usize, j: usize) {
        for k in 0..d.rows() {
            let (a, b) = (d.at(k, i).clone(), d.at(k, j).clone());
            d.set(k, i, b);
            d.set(k, j, a);
        }
        for k in 0..v.rows() {
            let (a, b) = (v.at(k, i).clone(), v.at(k, j).clone());
            v.set(k, i, b);
            v.set(k, j, a);
        }
    }

    let n = rows.min(cols);
    let mut t = 0;
    while t < n {
        // Find minimal-absolute-value nonzero pivot in the trailing block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !d.at(i, j).is_zero() {
                    let better = match pivot {
                        None => true,
                        Some((pi, pj)) => d.at(i, j).abs() < d.at(pi, pj).abs(),
                    };
                    if better {
                        pivot = Some((i, j));
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        if pi != t {
            row_swap(&mut d, &mut u, &mut u_inv, t, pi);
        }
        if pj != t {
            col_swap(&mut d, &mut v, t, pj);
        }

        // Clear row and column t; restart if a reduction leaves a remainder
        // smaller than the pivot (the new minimal entry becomes the pivot).
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !d.at(i, t).is_zero() {
                    let q = exact_or_nearest_quotient(d.at(i, t), d.at(t, t));
                    row_add(&mut d, &mut u, &mut u_inv, i, t, &-q);
                    if !d.at(i, t).is_zero() {
                        // Remainder is strictly smaller: promote it to pivot.
                        row_swap(&mut d, &mut u, &mut u_inv, t, i);
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !d.at(t, j).is_zero() {
                    let q = exact_or_nearest_quotient(d.at(t, j), d.at(t, t));
                    col_add(&mut d, &mut v, j, t, &-q);
                    if !d.at(t, j).is_zero() {
                        col_swap(&mut d, &mut v, t, j);
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }

        // Enforce divisibility: if some trailing entry is not divisible by
        // the pivot, fold its row in and redo this pivot position.
        let mut redo = false;
        'scan: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(d.at(i, j) % d.at(t, t)).is_zero() {
                    let one = BigInt::one();
                    row_add(&mut d, &mut u, &mut u_inv, t, i, &one);
                    redo = true;
                    break 'scan;
                }
            }
        }
        if redo {
            continue;
        }
        if d.at(t, t).is_negative() {
            row_negate(&mut d, &mut u, &mut u_inv, t);
        }
        t += 1;
    }

    debug_assert!(u.mul(m).mul(&v) == d, "SNF identity violated");
    debug_assert!(u.mul(&u_inv) == IntMatrix::identity(rows), "u inverse drifted");
    SmithDecomposition { u, d, v, u_inv }
}

/// Floor-free quotient used in SNF reduction: returns q such that
/// `|a - q*b|` is minimized (ties toward the representative with `|r| <= |b|/2`).
fn exact_or_nearest_quotient(a: &BigInt, b: &BigInt) -> BigInt {
    debug_assert!(!b.is_zero());
    let (q, r) = a.div_rem(b);
    if (&r * 2u8).abs() > b.abs() {
        if (r.is_negative()) == (b.is_negative()) { q + 1 } else { q - 1 }
    } else {
        q
    }
}

pub fn rank(m: &IntMatrix) -> usize {
    smith_normal_form(m).rank()
}

/// Z-basis of the kernel lattice `{x : m x = 0}` as matrix columns.
///
/// The kernel of an integral matrix is a direct summand of Z^cols, and the
/// trailing columns of the SNF column transform are exactly such a basis.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    let idx: Vec<usize> = (r..m.cols()).collect();
    let all_rows: Vec<usize> = (0..m.cols()).collect();
    snf.v.submatrix(&all_rows, &idx)
}

/// Invariants of `Z^rows / im(m)`.
pub fn cokernel_invariants(m: &IntMatrix) -> AbelianInvariants {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    let torsion: Vec<BigInt> =
        snf.diagonal().into_iter().take(r).filter(|d| d > &BigInt::one()).collect();
    AbelianInvariants { free_rank: m.rows() - r, torsion }
}

/// Solve `m x = b` over Z; `None` when no integral solution exists.
pub fn solve_integer(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), m.rows(), "rhs length mismatch");
    let snf = smith_normal_form(m);
    let ub = snf.u.mul_vec(b);
    let r = snf.rank();
    let mut y = vec![BigInt::zero(); m.cols()];
    for (i, ubi) in ub.iter().enumerate() {
        if i < r {
            let di = snf.d.at(i, i);
            let (q, rem) = ubi.div_rem(di);
            if !rem.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !ubi.is_zero() {
            return None;
        }
    }
    Some(snf.v.mul_vec(&y))
}

/// Z-basis (as columns) of the lattice spanned by the columns of `m`,
/// obtained by unimodular column reduction (column-style Hermite form).
pub fn column_span_basis(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    // span(m) = span(u_inv * d): columns of u_inv scaled by the diagonal.
    let r = snf.rank();
    let cols: Vec<Vec<BigInt>> = (0..r)
        .map(|j| {
            let dj = snf.d.at(j, j);
            (0..m.rows()).map(|i| snf.u_inv.at(i, j) * dj).collect()
        })
        .collect();
    IntMatrix::from_columns(m.rows(), &cols)
}

/// Is `b` in the lattice spanned by the columns of `m`?
pub fn in_column_span(m: &IntMatrix, b: &[BigInt]) -> bool {
    solve_integer(m, b).is_some()
}

/// Z-basis of the preimage lattice `{x : m x in span(l)}` (columns).
///
/// Computed as the x-part of ker[m | -l]; that projection is surjective onto
/// the preimage, and running it through `column_span_basis` recovers a basis.
pub fn preimage_basis(m: &IntMatrix, l: &IntMatrix) -> IntMatrix {
    assert_eq!(m.rows(), l.rows(), "ambient rank mismatch");
    let stacked = m.hstack(&l.neg());
    let ker = kernel_basis(&stacked);
    let x_rows: Vec<usize> = (0..m.cols()).collect();
    let all_cols: Vec<usize> = (0..ker.cols()).collect();
    let x_part = ker.submatrix(&x_rows, &all_cols);
    column_span_basis(&x_part)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(m: &IntMatrix) -> SmithDecomposition {
        let snf = smith_normal_form(m);
        assert_eq!(snf.u.mul(m).mul(&snf.v), snf.d, "u*m*v != d");
        assert_eq!(snf.u.determinant().abs(), BigInt::one(), "u not unimodular");
        assert_eq!(snf.v.determinant().abs(), BigInt::one(), "v not unimodular");
        let diag = snf.diagonal();
        for w in diag.windows(2) {
            if !w[0].is_zero() && !w[1].is_zero() {
                assert!((&w[1] % &w[0]).is_zero(), "divisibility chain broken: {:?}", diag);
            } else {
                assert!(w[1].is_zero() || !w[0].is_zero(), "zero before nonzero on diagonal");
            }
        }
        // Off-diagonal must vanish.
        for i in 0..snf.d.rows() {
            for j in 0..snf.d.cols() {
                if i != j {
                    assert!(snf.d.at(i, j).is_zero());
                }
            }
        }
        snf
    }

    #[test]
    fn snf_two_by_two() {
        // Oracle: [[2,4],[6,8]] has invariant factors 2, 4
        // (gcd of entries is 2; gcd of 2x2 minors is 2*8-4*6 = -8, so d2 = 8/2 = 4).
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        let snf = check_snf(&m);
        assert_eq!(snf.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn snf_identity_and_zero() {
        let id = IntMatrix::identity(4);
        let snf = check_snf(&id);
        assert_eq!(snf.d, id);

        let z = IntMatrix::zero(2, 3);
        let snf = check_snf(&z);
        assert!(snf.d.is_zero());
        assert_eq!(snf.rank(), 0);
    }

    #[test]
    fn kernel_rank_one() {
        let m = IntMatrix::from_rows(&[vec![1, 1]]);
        let k = kernel_basis(&m);
        assert_eq!(k.cols(), 1);
        // basis vector is (1,-1) up to sign
        let (a, b) = (k.at(0, 0).clone(), k.at(1, 0).clone());
        assert_eq!(a, -b);
        assert_eq!(a.abs(), BigInt::one());
    }

    #[test]
    fn kernel_invertible() {
        let m = IntMatrix::from_rows(&[vec![1, 2, 0], vec![0, 1, 0], vec![3, 0, 1]]);
        assert_eq!(kernel_basis(&m).cols(), 0);
    }

    #[test]
    fn kernel_symmetric_rank_one() {
        // Oracle: [[2,-2],[-2,2]] * (1,1)^T = 0 and the matrix has rank 1.
        let m = IntMatrix::from_rows(&[vec![2, -2], vec![-2, 2]]);
        let k = kernel_basis(&m);
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
        assert_eq!(k.at(0, 0), k.at(1, 0));
        assert_eq!(k.at(0, 0).abs(), BigInt::one());
    }

    #[test]
    fn cokernel_examples() {
        let m = IntMatrix::from_rows(&[vec![1, 0], vec![0, 2]]);
        let inv = cokernel_invariants(&m);
        assert_eq!(inv, AbelianInvariants { free_rank: 0, torsion: vec![BigInt::from(2)] });

        let no_relations = IntMatrix::zero(3, 0);
        assert_eq!(cokernel_invariants(&no_relations), AbelianInvariants::free(3));

        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 2]]);
        let inv = cokernel_invariants(&m);
        assert_eq!(inv.free_rank, 0);
        assert_eq!(inv.torsion, vec![BigInt::from(2), BigInt::from(2)]);
    }

    #[test]
    fn solve_examples() {
        let m = IntMatrix::from_rows(&[vec![2]]);
        assert_eq!(solve_integer(&m, &[BigInt::from(4)]), Some(vec![BigInt::from(2)]));
        assert_eq!(solve_integer(&m, &[BigInt::from(3)]), None);

        let id = IntMatrix::identity(2);
        assert_eq!(
            solve_integer(&id, &[BigInt::from(7), BigInt::from(-5)]),
            Some(vec![BigInt::from(7), BigInt::from(-5)])
        );
    }

    #[test]
    fn solve_underdetermined() {
        let m = IntMatrix::from_rows(&[vec![2, 3]]);
        let b = vec![BigInt::from(1)];
        let x = solve_integer(&m, &b).expect("2x+3y=1 solvable");
        assert_eq!(m.mul_vec(&x), b);
    }

    #[test]
    fn span_and_preimage() {
        // span{(2,0),(0,2),(1,1)} = {(a,b): a+b even}
        let m = IntMatrix::from_rows(&[vec![2, 0, 1], vec![0, 2, 1]]);
        let basis = column_span_basis(&m);
        assert_eq!(basis.cols(), 2);
        assert!(in_column_span(&basis, &[BigInt::from(1), BigInt::from(1)]));
        assert!(in_column_span(&basis, &[BigInt::from(2), BigInt::from(0)]));
        assert!(!in_column_span(&basis, &[BigInt::from(1), BigInt::from(0)]));

        // Preimage of the even lattice 2Z under x -> (x, x): all of Z... no:
        // (x,x) in 2Z^2 iff x even.
        let f = IntMatrix::from_rows(&[vec![1], vec![1]]);
        let l = IntMatrix::from_rows(&[vec![2, 0], vec![0, 2]]);
        let pre = preimage_basis(&f, &l);
        assert_eq!(pre.cols(), 1);
        assert_eq!(pre.at(0, 0).abs(), BigInt::from(2));
    }

    #[test]
    fn determinant_matches_snf_product() {
        let m = IntMatrix::from_rows(&[vec![-6, 111, -36], vec![5, -672, 210], vec![0, -255, 81]]);
        let det = m.determinant();
        let snf = check_snf(&m);
        let prod: BigInt = snf.diagonal().iter().product();
        assert_eq!(det.abs(), prod.abs());
    }

    #[test]
    fn snf_larger_oracle() {
        // Independent oracle: diag 1,3,21 from a published 4x4 example
        // (entry gcd 1, minor gcds 3 then 63, rank 3).
        let m = IntMatrix::from_rows(&[
            vec![-6, 111, -36, 6],
            vec![5, -672, 210, 74],
            vec![0, -255, 81, 24],
            vec![-7, 255, -81, -10],
        ]);
        let snf = check_snf(&m);
        assert_eq!(
            snf.diagonal(),
            vec![BigInt::from(1), BigInt::from(3), BigInt::from(21), BigInt::zero()]
        );
    }

    #[test]
    fn invariants_serialize_as_decimal_and_round_trip() {
        let v = AbelianInvariants {
            free_rank: 2,
            torsion: vec![BigInt::from(4), BigInt::from(12)],
        };
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, r#"{"free_rank":2,"torsion":["4","12"]}"#);
        let back: AbelianInvariants = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
    }
}
