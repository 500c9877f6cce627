//! Exact equivariant cohomology for proper actions.
//!
//! The crate is layered bottom-up:
//!
//! * [`matrix`] — integer matrices, Smith normal form, kernels, cokernels,
//!   and exact solvers; every homology computation reduces to these.
//! * [`group`] — finite groups as multiplication tables, homomorphisms,
//!   conjugacy classes, and pullback (fiber-product) subgroups.
//! * [`cyclotomic`] — exact arithmetic in cyclotomic fields, the value
//!   domain of characters.
//! * [`chartab`] — self-certifying character tables.
//! * [`repring`] — representation rings, restriction maps, and their
//!   twisted analogues built from central extensions classified by cocycles.
//! * [`cocycle`] — normalized 2-cocycles with cyclic coefficients,
//!   coboundary shifts, and transport along homomorphisms.
//! * [`rmod`] — finitely presented modules over a representation ring:
//!   kernels, cokernels, tensor products, free presentations, and Tor.
//! * [`complex`] — equivariant cell structures, the cochain complexes they
//!   induce, their cohomology, and binary product structures.
//! * [`kunneth`] — the product formula assembling the cohomology of a
//!   product structure from its factors, with an exact obstruction check.
//! * [`pullback_iso`] — certification that restriction identifies the
//!   representation ring of a fiber product with the tensor product of the
//!   factor rings over the base.
//! * [`scenario`] — the shipped computation scenarios, scenario files, and
//!   the reporting layer used by the command-line interface.

pub mod chartab;
pub mod cocycle;
pub mod cyclotomic;
pub mod group;
pub mod kunneth;
pub mod matrix;
pub mod pullback_iso;
pub mod repring;
pub mod complex;
pub mod rmod;
pub mod scenario;
