//! Equivariant cell complexes over a control group, coefficient systems,
//! cochain complexes, and their cohomology.
//!
//! A complex is pure local data: one stabilizer per cell orbit with a
//! structure map to the control group, and incidence lists with integer
//! coefficients and attaching homomorphisms. The ambient (possibly
//! infinite) group is never materialized. Cochains in degree n form the
//! direct sum of the coefficient values over the n-cell orbits, as modules
//! over the representation ring of the control group.

use crate::chartab::restriction_matrix;
use crate::cocycle::Cocycle;
use crate::group::{pullback_subgroup, FiniteGroup, GroupError, GroupHom};
use crate::matrix::{AbelianInvariants, IntMatrix};
use crate::repring::{
    rep_ring, twisted_rep_group, twisted_restriction_matrix, RepError, RepRing,
    TwistedRepModule,
};
use crate::rmod::{homology_at, BaseRing, RMod, RModError, RModMap};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::HashMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("group-theoretic failure: {0}")]
    Group(#[from] GroupError),
    #[error("representation-theoretic failure: {0}")]
    Rep(#[from] RepError),
    #[error("module failure: {0}")]
    Module(#[from] RModError),
    #[error("incidence in dimension {dim}, cell {cell} points at missing target {target}")]
    BadIncidenceTarget { dim: usize, cell: usize, target: usize },
    #[error("attaching hom in dimension {dim}, cell {cell}, incidence {incidence} is not injective")]
    AttachingHomNotInjective { dim: usize, cell: usize, incidence: usize },
    #[error(
        "attaching hom in dimension {dim}, cell {cell}, incidence {incidence} does not commute with the structure maps to the control group"
    )]
    FamilyIncompatible { dim: usize, cell: usize, incidence: usize },
    #[error("cell in dimension {dim} at index {cell} has a structure map from the wrong group")]
    WrongStructureMap { dim: usize, cell: usize },
    #[error("differential does not square to zero between degrees {degree} and {degree_plus_two}")]
    DifferentialSquare { degree: usize, degree_plus_two: usize },
    #[error(
        "cocycle mismatch along incidence {incidence} of dimension-{dim} cell {cell}: the transported cocycle of the target differs from the cell's own"
    )]
    CocycleIncompatible { dim: usize, cell: usize, incidence: usize },
    #[error("coefficient system was built for complex '{expected}', got '{actual}'")]
    Provenance { expected: String, actual: String },
    #[error("product factors must share the control group")]
    ControlMismatch,
    #[error("coefficient system shape does not match the complex")]
    ShapeMismatch,
}

/// One orbit of cells: an abstract stabilizer and its map to the control
/// group.
#[derive(Clone)]
pub struct CellOrbit {
    pub stabilizer: Arc<FiniteGroup>,
    pub to_control: GroupHom,
}

/// One incidence of an n-cell orbit onto an (n-1)-cell orbit.
#[derive(Clone)]
pub struct Incidence {
    pub target: usize,
    pub coefficient: i64,
    /// injective attaching hom from the n-cell stabilizer into the target
    /// stabilizer, commuting with the structure maps
    pub hom: GroupHom,
}

/// Bookkeeping for complexes built by [`product_complex`]: which factor
/// cells each product cell came from.
#[derive(Clone)]
pub struct ProductMeta {
    pub left: String,
    pub right: String,
    /// per dimension, per cell: (p, q, left cell index, right cell index)
    pub pairs: Vec<Vec<(usize, usize, usize, usize)>>,
}

/// An equivariant cell complex over a control group, as local data.
#[derive(Clone)]
pub struct GCWComplex {
    pub name: String,
    pub control: Arc<FiniteGroup>,
    /// cells[n] = the n-cell orbits
    pub cells: Vec<Vec<CellOrbit>>,
    /// incidences[n][c] = boundary data of the c-th n-cell (empty for n=0)
    pub incidences: Vec<Vec<Vec<Incidence>>>,
    pub product_meta: Option<ProductMeta>,
}

impl GCWComplex {
    pub fn dimension(&self) -> usize {
        self.cells.len().saturating_sub(1)
    }

    pub fn validate(&self) -> Result<(), ComplexError> {
        if self.incidences.len() != self.cells.len() {
            return Err(ComplexError::ShapeMismatch);
        }
        for (n, orbits) in self.cells.iter().enumerate() {
            if self.incidences[n].len() != orbits.len() {
                return Err(ComplexError::ShapeMismatch);
            }
            for (c, orbit) in orbits.iter().enumerate() {
                if orbit.to_control.source != orbit.stabilizer
                    || orbit.to_control.target != self.control
                {
                    return Err(ComplexError::WrongStructureMap { dim: n, cell: c });
                }
                for (k, inc) in self.incidences[n][c].iter().enumerate() {
                    if n == 0 || inc.target >= self.cells[n - 1].len() {
                        return Err(ComplexError::BadIncidenceTarget {
                            dim: n,
                            cell: c,
                            target: inc.target,
                        });
                    }
                    let target_orbit = &self.cells[n - 1][inc.target];
                    if inc.hom.source != orbit.stabilizer
                        || inc.hom.target != target_orbit.stabilizer
                    {
                        return Err(ComplexError::FamilyIncompatible {
                            dim: n,
                            cell: c,
                            incidence: k,
                        });
                    }
                    if !inc.hom.is_injective() {
                        return Err(ComplexError::AttachingHomNotInjective {
                            dim: n,
                            cell: c,
                            incidence: k,
                        });
                    }
                    // family compatibility: to_control = to_control . hom
                    let composite = inc.hom.then(&target_orbit.to_control);
                    if composite.images != orbit.to_control.images {
                        return Err(ComplexError::FamilyIncompatible {
                            dim: n,
                            cell: c,
                            incidence: k,
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// How a single cell's coefficient value was produced; kept so restriction
/// maps along incidences can be assembled in the right character tables.
pub enum CellValue {
    Plain(RepRing),
    Twisted(TwistedRepModule),
}

/// A coefficient system on a complex: one module over R(control) per cell
/// orbit, plus the contravariant restriction matrix along each incidence
/// (from the value on the incidence target to the value on the cell).
#[derive(Clone, Debug)]
pub struct CoeffSystem {
    pub base: Arc<BaseRing>,
    pub control_ring: RepRing,
    /// values[n][c], aligned with the complex's cells
    pub values: Vec<Vec<RMod>>,
    /// restrictions[n][c][k], aligned with the complex's incidences
    pub restrictions: Vec<Vec<Vec<IntMatrix>>>,
    /// name of the complex the system was built for
    pub provenance: String,
}

impl CoeffSystem {
    fn matches(&self, x: &GCWComplex) -> Result<(), ComplexError> {
        if self.provenance != x.name {
            return Err(ComplexError::Provenance {
                expected: self.provenance.clone(),
                actual: x.name.clone(),
            });
        }
        let shapes_ok = self.values.len() == x.cells.len()
            && self
                .values
                .iter()
                .zip(&x.cells)
                .all(|(v, c)| v.len() == c.len())
            && self
                .restrictions
                .iter()
                .zip(&x.incidences)
                .all(|(r, i)| r.len() == i.len() && r.iter().zip(i).all(|(a, b)| a.len() == b.len()));
        if shapes_ok {
            Ok(())
        } else {
            Err(ComplexError::ShapeMismatch)
        }
    }
}

/// The representation-ring coefficient system: value R(stabilizer) at each
/// cell, restriction along each attaching hom.
pub fn coeff_system_reps(x: &GCWComplex, bound: usize) -> Result<CoeffSystem, ComplexError> {
    x.validate()?;
    let control_ring = rep_ring(&x.control, bound)?;
    let base = BaseRing::from_rep_ring(&control_ring);
    let mut rings: Vec<Vec<RepRing>> = Vec::new();
    let mut values: Vec<Vec<RMod>> = Vec::new();
    for orbits in &x.cells {
        let mut ring_row = Vec::new();
        let mut value_row = Vec::new();
        for orbit in orbits {
            let ring = rep_ring(&orbit.stabilizer, bound)?;
            let res = restriction_matrix(&orbit.to_control, &ring.table, &control_ring.table);
            let mult: Vec<IntMatrix> = (0..ring.rank()).map(|i| ring.mult_matrix(i)).collect();
            value_row.push(RMod::from_algebra_action(&base, ring.rank(), &mult, &res));
            ring_row.push(ring);
        }
        rings.push(ring_row);
        values.push(value_row);
    }
    let mut restrictions: Vec<Vec<Vec<IntMatrix>>> = Vec::new();
    for (n, per_cell) in x.incidences.iter().enumerate() {
        let mut row = Vec::new();
        for (c, incs) in per_cell.iter().enumerate() {
            let mut mats = Vec::new();
            for inc in incs {
                let source_ring = &rings[n][c];
                let target_ring = &rings[n - 1][inc.target];
                mats.push(restriction_matrix(&inc.hom, &source_ring.table, &target_ring.table));
            }
            row.push(mats);
        }
        restrictions.push(row);
    }
    Ok(CoeffSystem {
        base,
        control_ring,
        values,
        restrictions,
        provenance: x.name.clone(),
    })
}

/// The twisted coefficient system: one cocycle per cell orbit, with
/// on-the-nose compatibility (the target's cocycle transported along each
/// attaching hom must equal the cell's own cocycle).
pub fn coeff_system_twisted(
    x: &GCWComplex,
    cocycles: &[Vec<Cocycle>],
    bound: usize,
) -> Result<CoeffSystem, ComplexError> {
    x.validate()?;
    if cocycles.len() != x.cells.len()
        || cocycles.iter().zip(&x.cells).any(|(a, b)| a.len() != b.len())
    {
        return Err(ComplexError::ShapeMismatch);
    }
    for (n, per_cell) in x.incidences.iter().enumerate() {
        for (c, incs) in per_cell.iter().enumerate() {
            for (k, inc) in incs.iter().enumerate() {
                let transported = cocycles[n - 1][inc.target].transport(&inc.hom);
                if transported != cocycles[n][c] {
                    return Err(ComplexError::CocycleIncompatible { dim: n, cell: c, incidence: k });
                }
            }
        }
    }
    let control_ring = rep_ring(&x.control, bound)?;
    let base = BaseRing::from_rep_ring(&control_ring);
    let mut twisted: Vec<Vec<TwistedRepModule>> = Vec::new();
    let mut values: Vec<Vec<RMod>> = Vec::new();
    for (n, orbits) in x.cells.iter().enumerate() {
        let mut tw_row = Vec::new();
        let mut value_row = Vec::new();
        for (c, orbit) in orbits.iter().enumerate() {
            let ring = rep_ring(&orbit.stabilizer, bound)?;
            let res = restriction_matrix(&orbit.to_control, &ring.table, &control_ring.table);
            let tw = twisted_rep_group(&ring.table, &cocycles[n][c], bound)?;
            value_row.push(RMod::from_algebra_action(&base, tw.rank(), &tw.action, &res));
            tw_row.push(tw);
        }
        twisted.push(tw_row);
        values.push(value_row);
    }
    let mut restrictions: Vec<Vec<Vec<IntMatrix>>> = Vec::new();
    for (n, per_cell) in x.incidences.iter().enumerate() {
        let mut row = Vec::new();
        for (c, incs) in per_cell.iter().enumerate() {
            let mut mats = Vec::new();
            for inc in incs {
                let m = twisted_restriction_matrix(
                    &inc.hom,
                    &twisted[n][c],
                    &twisted[n - 1][inc.target],
                )?;
                mats.push(m);
            }
            row.push(mats);
        }
        restrictions.push(row);
    }
    Ok(CoeffSystem {
        base,
        control_ring,
        values,
        restrictions,
        provenance: x.name.clone(),
    })
}

/// A cochain complex of modules over the control ring: deltas[n] maps
/// degree n to degree n+1, and consecutive composites vanish.
pub struct CochainComplex {
    pub modules: Vec<RMod>,
    pub deltas: Vec<RModMap>,
}

impl CochainComplex {
    pub fn z_ranks(&self) -> Vec<AbelianInvariants> {
        self.modules.iter().map(|m| m.z_invariants()).collect()
    }
}

/// Assemble the Bredon cochain complex of a complex with coefficients:
/// C^n = direct sum over n-cell orbits, differential blocks = incidence
/// coefficient times restriction matrix. Certifies delta-squared = 0.
pub fn cochain_complex(x: &GCWComplex, m: &CoeffSystem) -> Result<CochainComplex, ComplexError> {
    m.matches(x)?;
    let mut modules: Vec<RMod> = Vec::new();
    let mut offsets: Vec<Vec<usize>> = Vec::new();
    for row in &m.values {
        let mut offs = Vec::with_capacity(row.len());
        let mut total = 0usize;
        for v in row {
            offs.push(total);
            total += v.gens();
        }
        offsets.push(offs);
        modules.push(RMod::direct_sum(&m.base, row)?);
    }
    let mut deltas: Vec<RModMap> = Vec::new();
    for n in 0..x.dimension() {
        // delta_n : C^n -> C^{n+1}, rows indexed by (n+1)-cells
        let mut matrix = IntMatrix::zero(modules[n + 1].gens(), modules[n].gens());
        for (c, incs) in x.incidences[n + 1].iter().enumerate() {
            for (k, inc) in incs.iter().enumerate() {
                let block = &m.restrictions[n + 1][c][k];
                let coeff = BigInt::from(inc.coefficient);
                if coeff.is_zero() {
                    continue;
                }
                let (r0, c0) = (offsets[n + 1][c], offsets[n][inc.target]);
                for i in 0..block.rows() {
                    for j in 0..block.cols() {
                        let add = block.at(i, j) * &coeff;
                        if !add.is_zero() {
                            let cur = matrix.at(r0 + i, c0 + j).clone();
                            matrix.set(r0 + i, c0 + j, cur + add);
                        }
                    }
                }
            }
        }
        let map = RModMap::new(modules[n].clone(), modules[n + 1].clone(), matrix)?;
        deltas.push(map);
    }
    for n in 0..deltas.len().saturating_sub(1) {
        if !deltas[n].then(&deltas[n + 1]).is_zero_map() {
            return Err(ComplexError::DifferentialSquare { degree: n, degree_plus_two: n + 2 });
        }
    }
    Ok(CochainComplex { modules, deltas })
}

/// Graded module: one value per degree within range, zero outside.
#[derive(Clone, Debug)]
pub struct GradedRMod {
    pub base: Arc<BaseRing>,
    pub degrees: Vec<RMod>,
}

impl GradedRMod {
    pub fn invariants(&self) -> Vec<AbelianInvariants> {
        self.degrees.iter().map(|m| m.z_invariants()).collect()
    }

    /// The module in a given degree, defaulting to zero outside range.
    pub fn at(&self, n: usize) -> RMod {
        self.degrees.get(n).cloned().unwrap_or_else(|| RMod::zero(&self.base))
    }

    /// Drop trailing zero degrees (presentation-level, after reduction).
    pub fn trimmed(mut self) -> GradedRMod {
        while self.degrees.len() > 1 && self.degrees.last().map_or(false, |m| m.is_zero()) {
            self.degrees.pop();
        }
        self
    }
}

/// Cohomology of the assembled cochain complex, degree by degree, in
/// reduced presentation.
pub fn cohomology(x: &GCWComplex, m: &CoeffSystem) -> Result<GradedRMod, ComplexError> {
    let cc = cochain_complex(x, m)?;
    Ok(cohomology_of(&cc, &m.base))
}

pub fn cohomology_of(cc: &CochainComplex, base: &Arc<BaseRing>) -> GradedRMod {
    let dim = cc.modules.len() - 1;
    let mut degrees = Vec::with_capacity(dim + 1);
    for n in 0..=dim {
        let incoming = if n == 0 {
            RModMap::zero(RMod::zero(base), cc.modules[0].clone())
        } else {
            cc.deltas[n - 1].clone()
        };
        let outgoing = if n == dim {
            RModMap::zero(cc.modules[dim].clone(), RMod::zero(base))
        } else {
            cc.deltas[n].clone()
        };
        degrees.push(homology_at(&incoming, &outgoing));
    }
    GradedRMod { base: Arc::clone(base), degrees }
}

/// Index lookup for pullback elements: the element list of a pullback
/// group is the lexicographically sorted list of compatible pairs, exposed
/// through its two projections.
fn pullback_pair_index(pr1: &GroupHom, pr2: &GroupHom) -> HashMap<(u16, u16), u16> {
    let mut map = HashMap::new();
    for e in 0..pr1.source.order() as u16 {
        map.insert((pr1.images[e as usize], pr2.images[e as usize]), e);
    }
    map
}

struct ProductCellData {
    orbit: CellOrbit,
    pr1: GroupHom,
    pr2: GroupHom,
}

/// The product complex of two complexes over the same control group:
/// cells are pairs with additive dimension, stabilizers are pullbacks of
/// the factor stabilizers over the control group, and incidences follow
/// the Leibniz rule with the sign (-1)^p on second-factor boundaries.
pub fn product_complex(x: &GCWComplex, y: &GCWComplex) -> Result<GCWComplex, ComplexError> {
    if x.control != y.control {
        return Err(ComplexError::ControlMismatch);
    }
    x.validate()?;
    y.validate()?;
    let dim = x.dimension() + y.dimension();
    // build cell data and the (p, q, i, j) -> flat index map
    let mut data: Vec<Vec<ProductCellData>> = (0..=dim).map(|_| Vec::new()).collect();
    let mut pairs: Vec<Vec<(usize, usize, usize, usize)>> = (0..=dim).map(|_| Vec::new()).collect();
    let mut index: HashMap<(usize, usize, usize, usize), usize> = HashMap::new();
    for n in 0..=dim {
        for p in 0..=n.min(x.dimension()) {
            let q = n - p;
            if q > y.dimension() {
                continue;
            }
            for (i, e) in x.cells[p].iter().enumerate() {
                for (j, f) in y.cells[q].iter().enumerate() {
                    let (stab, pr1, pr2) = pullback_subgroup(&e.to_control, &f.to_control)?;
                    let to_control = pr1.then(&e.to_control);
                    index.insert((p, q, i, j), data[n].len());
                    pairs[n].push((p, q, i, j));
                    data[n].push(ProductCellData {
                        orbit: CellOrbit { stabilizer: stab, to_control },
                        pr1,
                        pr2,
                    });
                }
            }
        }
    }
    // incidences via the Leibniz rule
    let mut incidences: Vec<Vec<Vec<Incidence>>> = (0..=dim).map(|_| Vec::new()).collect();
    for n in 0..=dim {
        for (flat, &(p, q, i, j)) in pairs[n].iter().enumerate() {
            let mut incs: Vec<Incidence> = Vec::new();
            let source = &data[n][flat];
            if p >= 1 {
                for inc in &x.incidences[p][i] {
                    let tflat = index[&(p - 1, q, inc.target, j)];
                    let target_cell = &data[n - 1][tflat];
                    let hom = induced_pullback_hom(source, target_cell, &inc.hom, None)?;
                    incs.push(Incidence { target: tflat, coefficient: inc.coefficient, hom });
                }
            }
            if q >= 1 {
                let sign = if p % 2 == 0 { 1 } else { -1 };
                for inc in &y.incidences[q][j] {
                    let tflat = index[&(p, q - 1, i, inc.target)];
                    let target_cell = &data[n - 1][tflat];
                    let hom = induced_pullback_hom(source, target_cell, &inc.hom, Some(()))?;
                    incs.push(Incidence {
                        target: tflat,
                        coefficient: sign * inc.coefficient,
                        hom,
                    });
                }
            }
            incidences[n].push(incs);
        }
    }
    let cells: Vec<Vec<CellOrbit>> = data
        .into_iter()
        .map(|row| row.into_iter().map(|d| d.orbit).collect())
        .collect();
    let product = GCWComplex {
        name: format!("{} x {}", x.name, y.name),
        control: Arc::clone(&x.control),
        cells,
        incidences,
        product_meta: Some(ProductMeta { left: x.name.clone(), right: y.name.clone(), pairs }),
    };
    product.validate()?;
    Ok(product)
}

/// The hom between pullback stabilizers induced by an attaching hom on one
/// factor (the other coordinate fixed): (a, b) -> (phi(a), b) for the first
/// factor (side = None) or (a, b) -> (a, phi(b)) for the second.
fn induced_pullback_hom(
    source: &ProductCellData,
    target: &ProductCellData,
    phi: &GroupHom,
    second_side: Option<()>,
) -> Result<GroupHom, ComplexError> {
    let lookup = pullback_pair_index(&target.pr1, &target.pr2);
    let images: Vec<u16> = (0..source.pr1.source.order() as u16)
        .map(|e| {
            let a = source.pr1.images[e as usize];
            let b = source.pr2.images[e as usize];
            let pair = match second_side {
                None => (phi.apply(a), b),
                Some(()) => (a, phi.apply(b)),
            };
            *lookup
                .get(&pair)
                .expect("image pair lies in the target pullback by family compatibility")
        })
        .collect();
    Ok(GroupHom::new(
        Arc::clone(&source.pr1.source),
        Arc::clone(&target.pr1.source),
        images,
    )?)
}
