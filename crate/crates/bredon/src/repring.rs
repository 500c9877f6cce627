//! Representation rings and their twisted analogues.
//!
//! `RepRing` packages a character table with the ring structure constants
//! (chi_i chi_j decomposed into irreducibles). A cocycle alpha on G yields
//! a central extension G_alpha; the span of the extension's irreducibles on
//! which the central generator acts by the fixed primitive root of unity is
//! the twisted representation group R_alpha(G), a module over R(G).

use crate::chartab::{character_table, restriction_matrix, CharTabError, CharacterTable};
use crate::cocycle::{Cocycle, CocycleError};
use crate::cyclotomic::Cyclotomic;
use crate::group::{FiniteGroup, GroupError, GroupHom};
use crate::matrix::IntMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RepError {
    #[error(transparent)]
    CharTab(#[from] CharTabError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
    #[error("a class-function decomposition was not integral (internal table inconsistency)")]
    NonIntegralDecomposition,
}

/// The representation ring R(G): character table plus structure constants.
#[derive(Clone, Debug)]
pub struct RepRing {
    pub group: Arc<FiniteGroup>,
    pub table: CharacterTable,
    /// structure[i][j] = multiplicity vector of chi_i * chi_j
    pub structure: Vec<Vec<Vec<BigInt>>>,
}

impl RepRing {
    pub fn rank(&self) -> usize {
        self.table.n_irreps()
    }

    /// Matrix of multiplication by basis element i acting on coefficient
    /// vectors: column j holds the decomposition of chi_i * chi_j.
    pub fn mult_matrix(&self, i: usize) -> IntMatrix {
        let n = self.rank();
        let mut m = IntMatrix::zero(n, n);
        for j in 0..n {
            for k in 0..n {
                m.set(k, j, self.structure[i][j][k].clone());
            }
        }
        m
    }

    /// Matrix of multiplication by an arbitrary ring element.
    pub fn mult_matrix_of(&self, coeffs: &[BigInt]) -> IntMatrix {
        let n = self.rank();
        let mut m = IntMatrix::zero(n, n);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(&self.mult_matrix(i).scale(c));
            }
        }
        m
    }
}

/// Build R(G), verifying non-negativity, symmetry, and unitality of the
/// structure constants.
pub fn rep_ring(group: &Arc<FiniteGroup>, bound: usize) -> Result<RepRing, RepError> {
    let table = character_table(group, bound)?;
    let n = table.n_irreps();
    let mut structure = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mults = table.product_multiplicities(i, j);
            if mults.iter().any(|m| m.is_negative()) {
                return Err(RepError::NonIntegralDecomposition);
            }
            structure[i][j] = mults.clone();
            structure[j][i] = mults;
        }
    }
    // the trivial character (row 0) is the unit
    for j in 0..n {
        for k in 0..n {
            let expected = if j == k { BigInt::one() } else { BigInt::zero() };
            debug_assert_eq!(structure[0][j][k], expected);
        }
    }
    Ok(RepRing { group: Arc::clone(group), table, structure })
}

/// Matrix of the ring homomorphism f*: R(G) -> R(H) induced by f: H -> G,
/// verified to be unital and multiplicative against both rings' structure
/// constants.
pub fn ring_hom_from_group_hom(
    f: &GroupHom,
    source_ring: &RepRing, // R(H)
    target_ring: &RepRing, // R(G)
) -> IntMatrix {
    let m = restriction_matrix(f, &source_ring.table, &target_ring.table);
    // unital: the trivial character pulls back to the trivial character
    debug_assert_eq!(m.column(0), {
        let mut e0 = vec![BigInt::zero(); source_ring.rank()];
        e0[0] = BigInt::one();
        e0
    });
    // multiplicative: f*(chi_i chi_j) = f*(chi_i) f*(chi_j)
    #[cfg(debug_assertions)]
    for i in 0..target_ring.rank() {
        for j in 0..=i {
            let lhs = m.mul_vec(&target_ring.structure[i][j]);
            let fi = m.column(i);
            let fj = m.column(j);
            let rhs = source_ring.mult_matrix_of(&fi).mul_vec(&fj);
            debug_assert_eq!(lhs, rhs, "pullback not multiplicative at ({}, {})", i, j);
        }
    }
    m
}

/// A central extension 1 -> Z/n -> G_alpha -> G -> 1 realized on element
/// pairs (g, j) with index g*n + j and product
/// (g, i)(h, j) = (gh, alpha(g,h) + i + j).
pub struct CentralExtension {
    pub base: Arc<FiniteGroup>,
    pub cocycle: Cocycle,
    pub total: Arc<FiniteGroup>,
    pub projection: GroupHom,
    /// the distinguished central generator (identity_of_G, 1)
    pub sigma: u16,
}

pub fn central_extension(cocycle: &Cocycle) -> Result<CentralExtension, RepError> {
    cocycle.validate()?;
    let g = &cocycle.group;
    let n = cocycle.modulus;
    let order = g.order() * n;
    let idx = |elem: u16, j: usize| elem as usize * n + j;
    let mut mul = vec![0u16; order * order];
    for a in 0..g.order() as u16 {
        for i in 0..n {
            for b in 0..g.order() as u16 {
                for j in 0..n {
                    let c = g.mul(a, b);
                    let k = (cocycle.value(a, b) as usize + i + j) % n;
                    mul[idx(a, i) * order + idx(b, j)] = idx(c, k) as u16;
                }
            }
        }
    }
    let labels = (0..g.order() as u16)
        .flat_map(|a| (0..n).map(move |j| (a, j)))
        .map(|(a, j)| if j == 0 { format!("({},1)", g.label(a)) } else { format!("({},s{})", g.label(a), j) })
        .collect();
    let total = Arc::new(FiniteGroup::from_table(
        mul,
        labels,
        format!("{}~{}", g.name(), n),
    )?);
    let projection = GroupHom {
        source: Arc::clone(&total),
        target: Arc::clone(g),
        images: (0..order).map(|x| (x / n) as u16).collect(),
    };
    let sigma = idx(g.identity(), 1 % n) as u16;
    // sigma is central of order n and generates the projection kernel
    debug_assert_eq!(total.element_order(sigma), if n == 1 { 1 } else { n });
    debug_assert!((0..order as u16).all(|x| total.mul(sigma, x) == total.mul(x, sigma)));
    Ok(CentralExtension { base: Arc::clone(g), cocycle: cocycle.clone(), total, projection, sigma })
}

/// The twisted representation group R_alpha(G) as a module over R(G):
/// basis = irreducibles of G_alpha where sigma acts by the scalar
/// zeta_n = e^(2 pi i / n), with the R(G)-action by inflate-and-multiply.
pub struct TwistedRepModule {
    pub extension: CentralExtension,
    pub ext_table: CharacterTable,
    /// indices (into ext_table rows) of the weight-one irreducibles
    pub basis: Vec<usize>,
    /// one rank x rank matrix per irreducible of G
    pub action: Vec<IntMatrix>,
}

impl TwistedRepModule {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

pub fn twisted_rep_group(
    base_table: &CharacterTable,
    cocycle: &Cocycle,
    bound: usize,
) -> Result<TwistedRepModule, RepError> {
    let extension = central_extension(cocycle)?;
    let ext_table = character_table(&extension.total, bound)?;
    let mut basis = weight_one_indices(&ext_table, extension.sigma, cocycle.modulus);
    order_weight_one_basis(&ext_table, &extension, base_table, &mut basis);
    // R(G)-action: rho . tau = (rho . projection) * tau inside R(G_alpha)
    let rank = basis.len();
    let mut action = Vec::with_capacity(base_table.n_irreps());
    for i in 0..base_table.n_irreps() {
        let mut mat = IntMatrix::zero(rank, rank);
        for (col, &t) in basis.iter().enumerate() {
            let values: Vec<Cyclotomic> = ext_table
                .classes
                .reps
                .iter()
                .map(|&x| {
                    let inflated = base_table.value_at(i, extension.projection.apply(x));
                    inflated.mul(ext_table.value_at(t, x))
                })
                .collect();
            let mults =
                ext_table.decompose(&values).ok_or(RepError::NonIntegralDecomposition)?;
            // weight is additive, so the product decomposes purely into
            // weight-one irreducibles
            for (s, mult) in mults.iter().enumerate() {
                if let Some(row) = basis.iter().position(|&b| b == s) {
                    mat.set(row, col, mult.clone());
                } else {
                    debug_assert!(mult.is_zero(), "product left the weight-one block");
                }
            }
        }
        action.push(mat);
    }
    // the unit of R(G) acts as the identity
    debug_assert_eq!(action[0], IntMatrix::identity(rank));
    Ok(TwistedRepModule { extension, ext_table, basis, action })
}

/// Canonical order for the weight-one basis, mirroring the plain table's
/// row order through the values on the canonical lifts (g, 0): the
/// character whose lift values are constant comes first, the rest sort by
/// degree and then lexicographically by those values. For the zero cocycle
/// this reproduces the order of R(G) exactly, so trivially twisted data
/// matches the untwisted system matrix for matrix.
fn order_weight_one_basis(
    ext_table: &CharacterTable,
    extension: &CentralExtension,
    base_table: &CharacterTable,
    basis: &mut [usize],
) {
    let n = extension.cocycle.modulus;
    let g_reps = &base_table.classes.reps;
    let lift_values: Vec<Vec<Cyclotomic>> = basis
        .iter()
        .map(|&s| {
            g_reps
                .iter()
                .map(|&g| ext_table.value_at(s, (g as usize * n) as u16).clone())
                .collect()
        })
        .collect();
    let mut level = base_table.exponent;
    for row in &lift_values {
        for v in row {
            level = num_integer::lcm(level, v.level());
        }
    }
    let mut keyed: Vec<(bool, u64, Vec<Vec<BigRational>>, usize)> = basis
        .iter()
        .zip(&lift_values)
        .map(|(&s, row)| {
            let nonconstant = row.iter().any(|v| *v != row[0]);
            let coeffs = row.iter().map(|v| v.coeff_vector_at(level)).collect();
            (nonconstant, ext_table.degrees[s], coeffs, s)
        })
        .collect();
    keyed.sort();
    for (slot, entry) in basis.iter_mut().zip(&keyed) {
        *slot = entry.3;
    }
}

/// Indices of the irreducibles where the central element sigma of order n
/// acts by the scalar zeta_n (equivalently chi(sigma) = chi(1) zeta_n).
fn weight_one_indices(table: &CharacterTable, sigma: u16, modulus: usize) -> Vec<usize> {
    let zeta = Cyclotomic::root_of_unity(modulus, 1 % modulus);
    (0..table.n_irreps())
        .filter(|&s| {
            let at_sigma = table.value_at(s, sigma);
            let expected = table.rows[s][0].mul(&zeta); // chi(1) * zeta
            *at_sigma == expected
        })
        .collect()
}

/// Restriction of twisted representation groups along f: H -> G, where the
/// cocycle on H must equal the pullback of the cocycle on G on the nose.
/// f lifts to the extensions by (h, j) -> (f(h), j); the returned matrix
/// maps source coefficients (on G's twisted basis) to target coefficients
/// (on H's twisted basis), mirroring `restriction_matrix`.
pub fn twisted_restriction_matrix(
    f: &GroupHom,
    source: &TwistedRepModule, // over H
    target: &TwistedRepModule, // over G
) -> Result<IntMatrix, RepError> {
    debug_assert!(f.source == source.extension.base && f.target == target.extension.base);
    debug_assert_eq!(source.extension.cocycle, target.extension.cocycle.transport(f));
    let n = source.extension.cocycle.modulus;
    let lift_images: Vec<u16> = (0..source.extension.total.order())
        .map(|x| {
            let h = source.extension.projection.images[x];
            let j = x % n;
            (f.apply(h) as usize * n + j) as u16
        })
        .collect();
    let lift = GroupHom::new(
        Arc::clone(&source.extension.total),
        Arc::clone(&target.extension.total),
        lift_images,
    )?;
    let full = restriction_matrix(&lift, &source.ext_table, &target.ext_table);
    // cut down to the weight-one blocks; weight-one restricts to weight-one
    let mut out = IntMatrix::zero(source.rank(), target.rank());
    for (col, &t) in target.basis.iter().enumerate() {
        for s in 0..source.ext_table.n_irreps() {
            let v = full.at(s, t);
            if let Some(row) = source.basis.iter().position(|&b| b == s) {
                out.set(row, col, v.clone());
            } else {
                debug_assert!(v.is_zero(), "weight-one restriction left the block");
            }
        }
    }
    Ok(out)
}
