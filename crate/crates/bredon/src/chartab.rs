//! Exact character tables of finite groups.
//!
//! The construction follows Dixon's method (J. D. Dixon, "High speed
//! computation of group characters", Numer. Math. 10 (1967)): the central
//! characters are found as common eigenvectors of the class-sum structure
//! matrices over a prime field F_p with p = 1 (mod exponent), degrees and
//! character values are recovered mod p, and the values are then lifted to
//! exact cyclotomic numbers by discrete Fourier inversion of the power map.
//! Row orthogonality and the degree sum are verified exactly before a table
//! is returned, so a successfully constructed table is self-certifying.

use crate::cyclotomic::Cyclotomic;
use crate::group::{conjugacy_classes, ConjugacyClasses, FiniteGroup, GroupHom};
use crate::matrix::IntMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CharTabError {
    #[error("group order {order} exceeds the character-table bound {bound}")]
    OrderExceedsBound { order: usize, bound: usize },
}

/// Default largest group order for which tables are computed.
pub const DEFAULT_ORDER_BOUND: usize = 128;

// ---------------------------------------------------------------------------
// small prime-field helpers (p < 2^31, values in u64)
// ---------------------------------------------------------------------------

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn invmod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    powmod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest prime p with p = 1 (mod m) and p^2 > 4n. Such p never divides
/// n because every prime factor of a group order divides the exponent m,
/// while p > m.
fn dixon_prime(m: u64, n: u64) -> u64 {
    let mut p = m + 1;
    loop {
        if p * p > 4 * n && is_prime(p) {
            return p;
        }
        p += m;
    }
}

fn primitive_root(p: u64) -> u64 {
    let mut factors = Vec::new();
    let mut m = p - 1;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            factors.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..p)
        .find(|&w| factors.iter().all(|&q| powmod(w, (p - 1) / q, p) != 1))
        .expect("every prime has a primitive root")
}

/// Basis of the nullspace of a square matrix over F_p.
fn nullspace_mod_p(mat: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = mat.len();
    let mut a: Vec<Vec<u64>> = mat.to_vec();
    let mut pivot_col_of_row: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if let Some(r) = (row..n).find(|&r| a[r][col] % p != 0) {
            a.swap(row, r);
            let inv = invmod(a[row][col], p);
            for c in 0..n {
                a[row][c] = a[row][c] * inv % p;
            }
            for r2 in 0..n {
                if r2 != row && a[r2][col] % p != 0 {
                    let f = a[r2][col];
                    for c in 0..n {
                        a[r2][c] = (a[r2][c] + p - f * a[row][c] % p) % p;
                    }
                }
            }
            pivot_col_of_row.push(col);
            row += 1;
        }
    }
    let pivot_cols: Vec<usize> = pivot_col_of_row.clone();
    let free_cols: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free_cols {
        let mut v = vec![0u64; n];
        v[fc] = 1;
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = (p - a[r][fc] % p) % p;
        }
        basis.push(v);
    }
    basis
}

/// Solve B x = c where the columns of `basis` are linearly independent
/// vectors of length n; `c` must lie in their span.
fn coords_in_basis(basis: &[Vec<u64>], c: &[u64], p: u64) -> Vec<u64> {
    let n = c.len();
    let d = basis.len();
    // augmented matrix [B | c], n rows, d+1 cols
    let mut a: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut row: Vec<u64> = basis.iter().map(|b| b[i] % p).collect();
            row.push(c[i] % p);
            row
        })
        .collect();
    let mut row = 0;
    let mut pivot_rows = vec![usize::MAX; d];
    for col in 0..d {
        if let Some(r) = (row..n).find(|&r| a[r][col] != 0) {
            a.swap(row, r);
            let inv = invmod(a[row][col], p);
            for cc in 0..=d {
                a[row][cc] = a[row][cc] * inv % p;
            }
            for r2 in 0..n {
                if r2 != row && a[r2][col] != 0 {
                    let f = a[r2][col];
                    for cc in 0..=d {
                        a[r2][cc] = (a[r2][cc] + p - f * a[row][cc] % p) % p;
                    }
                }
            }
            pivot_rows[col] = row;
            row += 1;
        }
    }
    (0..d).map(|col| a[pivot_rows[col]][d]).collect()
}

fn mat_vec_mod_p(mat: &[Vec<u64>], v: &[u64], p: u64) -> Vec<u64> {
    mat.iter()
        .map(|row| row.iter().zip(v).fold(0u64, |acc, (&a, &b)| (acc + a * b) % p))
        .collect()
}

// ---------------------------------------------------------------------------
// the table
// ---------------------------------------------------------------------------

/// The exact character table of a finite group. Row 0 is the trivial
/// character; the remaining rows are sorted by degree, then by the
/// lexicographic order of their cyclotomic coefficient vectors at the
/// group exponent, so the table is deterministic for a fixed group table.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub group: Arc<FiniteGroup>,
    pub classes: ConjugacyClasses,
    pub exponent: usize,
    /// rows[s][j] = value of irreducible character s on conjugacy class j
    pub rows: Vec<Vec<Cyclotomic>>,
    pub degrees: Vec<u64>,
}

impl CharacterTable {
    pub fn n_irreps(&self) -> usize {
        self.rows.len()
    }

    pub fn n_classes(&self) -> usize {
        self.classes.classes.len()
    }

    pub fn value(&self, irrep: usize, class: usize) -> &Cyclotomic {
        &self.rows[irrep][class]
    }

    pub fn value_at(&self, irrep: usize, element: u16) -> &Cyclotomic {
        &self.rows[irrep][self.classes.class_of[element as usize]]
    }

    /// Inner product of two class functions given by their values per class:
    /// (1/|G|) sum_j |C_j| a_j conj(b_j).
    pub fn inner_product(&self, a: &[Cyclotomic], b: &[Cyclotomic]) -> Cyclotomic {
        let mut acc = Cyclotomic::zero();
        for (j, class) in self.classes.classes.iter().enumerate() {
            let term = a[j].mul(&b[j].conj());
            acc = acc.add(&term.scale(&BigRational::from_integer(BigInt::from(class.len()))));
        }
        acc.scale(&BigRational::new(BigInt::one(), BigInt::from(self.group.order())))
    }

    /// Decompose a class function into irreducible multiplicities; `None`
    /// if any inner product fails to be a rational integer (i.e. the input
    /// is not a virtual character).
    pub fn decompose(&self, values: &[Cyclotomic]) -> Option<Vec<BigInt>> {
        // Fast path: the input is literally one of the rows, so its
        // multiplicity vector is a standard basis vector (rows are
        // orthonormal, hence linearly independent). Products of low-degree
        // characters land here constantly; the scan bails on the first
        // mismatching class, so misses cost little.
        'rows: for s in 0..self.n_irreps() {
            for (j, v) in values.iter().enumerate() {
                if self.rows[s][j] != *v {
                    continue 'rows;
                }
            }
            let mut mult = vec![BigInt::zero(); self.n_irreps()];
            mult[s] = BigInt::one();
            return Some(mult);
        }
        (0..self.n_irreps())
            .map(|s| self.inner_product(values, &self.rows[s]).as_integer())
            .collect()
    }

    /// Multiplicity vector of the pointwise product of two rows; always
    /// succeeds for genuine characters.
    pub fn product_multiplicities(&self, r: usize, s: usize) -> Vec<BigInt> {
        let prod: Vec<Cyclotomic> = (0..self.n_classes())
            .map(|j| self.rows[r][j].mul(&self.rows[s][j]))
            .collect();
        self.decompose(&prod).expect("product of characters is a character")
    }
}

/// Deterministic row order shared by every table constructor: the trivial
/// character first, then ascending degree, ties broken by the lexicographic
/// order of the rows' coefficient vectors at the exponent level.
fn canonical_order(rows: &[Vec<Cyclotomic>], degrees: &[u64], exponent: usize) -> Vec<usize> {
    let k = rows.len();
    let mut order: Vec<usize> = (0..k).collect();
    let one = Cyclotomic::one();
    let trivial = order
        .iter()
        .position(|&s| rows[s].iter().all(|v| *v == one))
        .expect("trivial character must appear");
    order.swap(0, trivial);
    let sort_key = |s: usize| -> (u64, Vec<Vec<BigRational>>) {
        (degrees[s], rows[s].iter().map(|v| v.coeff_vector_at(exponent)).collect())
    };
    order[1..].sort_by(|&s1, &s2| sort_key(s1).cmp(&sort_key(s2)));
    order
}

/// Compute the character table; fails if the order exceeds `bound`
/// (use [`DEFAULT_ORDER_BOUND`] unless configured otherwise).
pub fn character_table(
    group: &Arc<FiniteGroup>,
    bound: usize,
) -> Result<CharacterTable, CharTabError> {
    let n = group.order();
    if n > bound {
        return Err(CharTabError::OrderExceedsBound { order: n, bound });
    }
    let classes = conjugacy_classes(group);
    let k = classes.classes.len();
    let m = group.exponent() as u64;
    let p = dixon_prime(m, n as u64);

    // structure matrices: (a_i)[j][k] = a_{ijk}, where
    // K_i K_j = sum_k a_{ijk} K_k in the center of the group algebra
    let mut a = vec![vec![vec![0u64; k]; k]; k];
    for (i, ci) in classes.classes.iter().enumerate() {
        for (j, cj) in classes.classes.iter().enumerate() {
            let mut counts = vec![0u64; k];
            for &x in ci {
                for &y in cj {
                    counts[classes.class_of[group.mul(x, y) as usize]] += 1;
                }
            }
            for (kk, cnt) in counts.into_iter().enumerate() {
                let size = classes.classes[kk].len() as u64;
                debug_assert_eq!(cnt % size, 0);
                a[i][j][kk] = (cnt / size) % p;
            }
        }
    }

    // split F_p^k into common eigenspaces of all structure matrices
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..k)
        .map(|i| {
            let mut v = vec![0u64; k];
            v[i] = 1;
            v
        })
        .collect()];
    for i in 0..k {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mut next_spaces = Vec::new();
        for space in spaces {
            if space.len() == 1 {
                next_spaces.push(space);
                continue;
            }
            let d = space.len();
            // restriction x of a_i to this invariant subspace: columns are
            // coordinates of a_i * basis vector in the basis
            let images: Vec<Vec<u64>> =
                space.iter().map(|v| mat_vec_mod_p(&a[i], v, p)).collect();
            let cols: Vec<Vec<u64>> =
                images.iter().map(|img| coords_in_basis(&space, img, p)).collect();
            let x: Vec<Vec<u64>> = (0..d).map(|r| (0..d).map(|c| cols[c][r]).collect()).collect();
            // split by eigenvalues, scanning F_p; total eigenspace dim is d
            let mut found = 0;
            let mut lambda = 0;
            let mut pieces = Vec::new();
            while found < d && lambda < p {
                let shifted: Vec<Vec<u64>> = (0..d)
                    .map(|r| {
                        (0..d)
                            .map(|c| if r == c { (x[r][c] + p - lambda) % p } else { x[r][c] })
                            .collect()
                    })
                    .collect();
                let null = nullspace_mod_p(&shifted, p);
                if !null.is_empty() {
                    found += null.len();
                    let sub: Vec<Vec<u64>> = null
                        .iter()
                        .map(|coeffs| {
                            let mut v = vec![0u64; k];
                            for (c, b) in coeffs.iter().zip(space.iter()) {
                                for (vi, bi) in v.iter_mut().zip(b.iter()) {
                                    *vi = (*vi + c * bi) % p;
                                }
                            }
                            v
                        })
                        .collect();
                    pieces.push(sub);
                }
                lambda += 1;
            }
            debug_assert_eq!(found, d, "structure matrix not diagonalizable over F_p");
            next_spaces.extend(pieces);
        }
        spaces = next_spaces;
    }
    debug_assert!(spaces.iter().all(|s| s.len() == 1));

    // normalized central characters: omega[s][j], with omega = 1 on the
    // identity class
    let id_class = classes.class_of[group.identity() as usize];
    let omegas: Vec<Vec<u64>> = spaces
        .into_iter()
        .map(|space| {
            let v = &space[0];
            let norm = invmod(v[id_class], p);
            v.iter().map(|&x| x * norm % p).collect()
        })
        .collect();

    // inverse-class map and class sizes
    let inv_class: Vec<usize> = (0..k)
        .map(|j| classes.class_of[group.inv(classes.reps[j]) as usize])
        .collect();
    let sizes: Vec<u64> = classes.classes.iter().map(|c| c.len() as u64).collect();

    // degrees: d^2 = |G| / sum_j omega_j omega_{j*} / |C_j|  (mod p),
    // with d the unique representative in 1..=sqrt(|G|)
    let mut degrees = Vec::with_capacity(k);
    for omega in &omegas {
        let mut t = 0u64;
        for j in 0..k {
            t = (t + omega[j] * omega[inv_class[j]] % p * invmod(sizes[j], p)) % p;
        }
        let d2 = n as u64 % p * invmod(t, p) % p;
        let d = (1..=n as u64)
            .take_while(|d| d * d <= n as u64)
            .find(|d| d * d % p == d2)
            .expect("degree not recovered; impossible for a valid group");
        degrees.push(d);
    }

    // character values mod p per class: chi(g_j) = d * omega_j / |C_j|
    let chi_mod_p: Vec<Vec<u64>> = omegas
        .iter()
        .zip(&degrees)
        .map(|(omega, &d)| {
            (0..k).map(|j| d % p * omega[j] % p * invmod(sizes[j], p) % p).collect()
        })
        .collect();

    // lift to exact cyclotomic values by Fourier inversion of the power map
    let w = primitive_root(p);
    let z = powmod(w, (p - 1) / m, p); // fixed primitive m-th root of 1 mod p
    let mut rows: Vec<Vec<Cyclotomic>> = Vec::with_capacity(k);
    for chi in &chi_mod_p {
        let mut row = Vec::with_capacity(k);
        for j in 0..k {
            let g = classes.reps[j];
            let e = group.element_order(g) as u64;
            let theta = powmod(z, m / e, p); // primitive e-th root mod p
            // classes of the powers of g
            let power_class: Vec<usize> = (0..e)
                .map(|i| classes.class_of[group.pow(g, i as usize) as usize])
                .collect();
            let mut value = Cyclotomic::zero();
            let e_inv = invmod(e % p, p);
            for l in 0..e {
                let mut s = 0u64;
                for i in 0..e {
                    // theta^{-il}, using -1 = e-1 modulo the order of theta
                    let t = powmod(theta, (e - 1) * i % e * l % e, p);
                    s = (s + chi[power_class[i as usize]] * t) % p;
                }
                let a_l = s * e_inv % p; // multiplicity of zeta_e^l, in [0, p)
                if a_l != 0 {
                    let root = Cyclotomic::root_of_unity(e as usize, l as usize);
                    value = value
                        .add(&root.scale(&BigRational::from_integer(BigInt::from(a_l))));
                }
            }
            row.push(value);
        }
        rows.push(row);
    }

    // deterministic ordering: trivial character first, then by degree and
    // by lexicographic coefficient vectors at the exponent level
    let exponent = m as usize;
    let order = canonical_order(&rows, &degrees, exponent);
    let rows: Vec<Vec<Cyclotomic>> = order.iter().map(|&s| rows[s].clone()).collect();
    let degrees: Vec<u64> = order.iter().map(|&s| degrees[s]).collect();

    let table = CharacterTable { group: Arc::clone(group), classes, exponent, rows, degrees };

    // self-certification: degree sum and exact row orthogonality
    let dsum: u64 = table.degrees.iter().map(|d| d * d).sum();
    assert_eq!(dsum as usize, n, "sum of squared degrees must equal the group order");
    for r in 0..k {
        assert_eq!(
            table.rows[r][id_class].as_integer(),
            Some(BigInt::from(table.degrees[r])),
            "identity value must equal the degree"
        );
        // the inner product is conjugate-symmetric and 0 and 1 are fixed by
        // conjugation, so the upper triangle decides the full check
        for s in r..k {
            let ip = table.inner_product(&table.rows[r], &table.rows[s]);
            let expected =
                if r == s { Cyclotomic::one() } else { Cyclotomic::zero() };
            assert_eq!(ip, expected, "row orthogonality failed at ({}, {})", r, s);
        }
    }
    Ok(table)
}

/// Character table of a group that the two given homomorphisms identify
/// with the direct product of their targets: the pair map
/// x -> (p1(x), p2(x)) must be bijective, which is checked. Each row is the
/// pointwise product of one row from each factor table, indexed so that the
/// value at x is chi_i(p1(x)) * psi_j(p2(x)).
///
/// Correctness is inherited from the factor tables rather than re-verified:
/// summing a product of factor characters over the group factors through
/// the two projections, so the inner product of two product rows is the
/// product of the factor inner products — exactly the Kronecker delta. The
/// rows are genuine characters (a pointwise product of characters is the
/// character of the tensor product), pairwise orthonormal, and there are
/// as many of them as the group has conjugacy classes, which is asserted.
/// The result uses the same deterministic row order as [`character_table`],
/// so the two constructors produce identical tables on product groups.
pub fn product_character_table(
    p1: &GroupHom,
    p2: &GroupHom,
    left: &CharacterTable,
    right: &CharacterTable,
) -> Result<CharacterTable, CharTabError> {
    let group = &p1.source;
    assert!(Arc::ptr_eq(group, &p2.source), "projections must share a source group");
    assert!(Arc::ptr_eq(&p1.target, &left.group), "left table must describe the first target");
    assert!(Arc::ptr_eq(&p2.target, &right.group), "right table must describe the second target");
    let n = group.order();
    assert_eq!(
        n,
        left.group.order() * right.group.order(),
        "source order must be the product of the factor orders"
    );
    // A homomorphism into the direct product with distinct pairs on a group
    // of the product order is an isomorphism; everything below leans on it.
    {
        let mut seen = std::collections::HashSet::with_capacity(n);
        for x in 0..n as u16 {
            assert!(
                seen.insert((p1.apply(x), p2.apply(x))),
                "the pair of projections must separate the elements"
            );
        }
    }

    let classes = conjugacy_classes(group);
    let k = classes.classes.len();
    assert_eq!(
        k,
        left.n_classes() * right.n_classes(),
        "a product group has one conjugacy class per pair of factor classes"
    );

    let mut rows: Vec<Vec<Cyclotomic>> = Vec::with_capacity(k);
    let mut degrees: Vec<u64> = Vec::with_capacity(k);
    for i in 0..left.n_irreps() {
        for j in 0..right.n_irreps() {
            let row: Vec<Cyclotomic> = classes
                .reps
                .iter()
                .map(|&rep| {
                    left.value_at(i, p1.apply(rep)).mul(right.value_at(j, p2.apply(rep)))
                })
                .collect();
            rows.push(row);
            degrees.push(left.degrees[i] * right.degrees[j]);
        }
    }

    let exponent = group.exponent();
    let order = canonical_order(&rows, &degrees, exponent);
    let rows: Vec<Vec<Cyclotomic>> = order.iter().map(|&s| rows[s].clone()).collect();
    let degrees: Vec<u64> = order.iter().map(|&s| degrees[s]).collect();

    let table = CharacterTable { group: Arc::clone(group), classes, exponent, rows, degrees };
    let dsum: u64 = table.degrees.iter().map(|d| d * d).sum();
    assert_eq!(dsum as usize, n, "sum of squared degrees must equal the group order");
    let id_class = table.classes.class_of[group.identity() as usize];
    for r in 0..k {
        assert_eq!(
            table.rows[r][id_class].as_integer(),
            Some(BigInt::from(table.degrees[r])),
            "identity value must equal the degree"
        );
    }
    Ok(table)
}

/// The matrix of restriction along a group homomorphism f: H -> G, acting
/// on representation rings: column s holds the multiplicities of the
/// H-irreducibles in chi_s . f. Shape: (H-irreps) x (G-irreps).
pub fn restriction_matrix(
    f: &GroupHom,
    source_table: &CharacterTable,
    target_table: &CharacterTable,
) -> IntMatrix {
    debug_assert!(Arc::ptr_eq(&f.source, &source_table.group) || f.source == source_table.group);
    debug_assert!(Arc::ptr_eq(&f.target, &target_table.group) || f.target == target_table.group);
    let h_irreps = source_table.n_irreps();
    let g_irreps = target_table.n_irreps();
    let mut out = IntMatrix::zero(h_irreps, g_irreps);
    for s in 0..g_irreps {
        // values of chi_s . f as a class function on H
        let values: Vec<Cyclotomic> = source_table
            .classes
            .reps
            .iter()
            .map(|&h| target_table.value_at(s, f.apply(h)).clone())
            .collect();
        let mults = source_table
            .decompose(&values)
            .expect("restriction of a character is a character");
        for (t, mult) in mults.into_iter().enumerate() {
            debug_assert!(!mult.is_negative());
            out.set(t, s, mult);
        }
    }
    out
}
