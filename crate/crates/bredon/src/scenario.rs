//! Built-in product-orbifold scenarios, the spectral-collapse K-theory
//! readout, and a JSON scenario format for user-defined runs.
//!
//! A scenario is a list of equivariant cell complexes over one shared
//! control group, each carrying either plain representation-ring
//! coefficients or a twisted variant given by compatible 2-cocycles on the
//! cell stabilizers. Running a scenario computes every factor's graded
//! cohomology, folds the factors together degree by degree through the
//! two-term splitting, cross-checks a truncation against a direct
//! computation on the honest product complex, and — when the grading is
//! concentrated in even degrees, or when the caller explicitly asserts
//! spectral collapse — reads off the K-theory of the quotient.
//!
//! Every report is deterministic: the same scenario input produces the
//! same output byte for byte.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chartab::DEFAULT_ORDER_BOUND;
use crate::cocycle::{Cocycle, CocycleError};
use crate::complex::{
    coeff_system_reps, coeff_system_twisted, cohomology, product_complex, CellOrbit,
    CoeffSystem, ComplexError, GCWComplex, GradedRMod, Incidence,
};
use crate::group::{build_group, FiniteGroup, GroupError, GroupHom, GroupSpec};
use crate::kunneth::{kunneth_assemble, kunneth_fold, tensor_coeff_systems, KunnethError};
use crate::matrix::AbelianInvariants;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("group construction failed: {0}")]
    Group(#[from] GroupError),
    #[error("complex construction failed: {0}")]
    Complex(#[from] ComplexError),
    #[error("cocycle construction failed: {0}")]
    Cocycle(#[from] CocycleError),
    #[error("assembly failed: {0}")]
    Kunneth(#[from] KunnethError),
    #[error("could not read scenario file: {0}")]
    Io(#[from] std::io::Error),
    #[error("could not parse scenario file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown scenario '{name}' (built-ins: {builtins})", builtins = BUILTIN_SCENARIOS.join(", "))]
    UnknownScenario { name: String },
    #[error("scenario '{name}' has no twisted variant")]
    NoTwistedVariant { name: String },
    #[error("unknown cocycle name '{name}' (define it in the file's cocycle table or use 'd8_pairing')")]
    UnknownCocycle { name: String },
    #[error("twist tables must name one cocycle per cell of the factor")]
    TwistShapeMismatch,
    #[error("every factor must live over the scenario's control group")]
    ControlMismatch,
    #[error("a disc factor needs a cyclic control group of order four")]
    DiscNeedsCyclicFour,
    #[error(
        "collapse not established: the odd-degree part {odd} is nonzero and no \
         collapse assertion was given"
    )]
    CollapseNotEstablished { odd: AbelianInvariants },
}

// ---------------------------------------------------------------------------
// built-in complexes
// ---------------------------------------------------------------------------

/// Interval with two vertex orbits fixed by the whole control group and one
/// edge orbit carrying the given subgroup; the differential is the
/// difference of the two restrictions along the subgroup inclusion. This is
/// the cell model of a line on which the control group acts through a
/// reflection whose wall stabilizers are the vertex groups.
pub fn interval_complex(
    control: &Arc<FiniteGroup>,
    edge_stabilizer: &Arc<FiniteGroup>,
    edge_images: Vec<u16>,
) -> Result<GCWComplex, ScenarioError> {
    let to_edge =
        GroupHom::new(Arc::clone(edge_stabilizer), Arc::clone(control), edge_images)?;
    let vertex = CellOrbit {
        stabilizer: Arc::clone(control),
        to_control: GroupHom::identity(control),
    };
    let x = GCWComplex {
        name: format!("interval over {}", control.name()),
        control: Arc::clone(control),
        cells: vec![
            vec![vertex.clone(), vertex],
            vec![CellOrbit {
                stabilizer: Arc::clone(edge_stabilizer),
                to_control: to_edge.clone(),
            }],
        ],
        incidences: vec![
            vec![vec![], vec![]],
            vec![vec![
                Incidence { target: 0, coefficient: 1, hom: to_edge.clone() },
                Incidence { target: 1, coefficient: -1, hom: to_edge },
            ]],
        ],
        product_meta: None,
    };
    x.validate()?;
    Ok(x)
}

/// Disc with three vertex orbits (full group, the index-two subgroup, full
/// group), two free edge orbits, and one free face orbit whose boundary
/// contributions cancel. This is the cell model of a plane on which the
/// order-four control group acts by quarter turns around two kinds of
/// fixed points, with a half-turn point in between.
pub fn disc_complex(control: &Arc<FiniteGroup>) -> Result<GCWComplex, ScenarioError> {
    if control.order() != 4 || control.exponent() != 4 {
        return Err(ScenarioError::DiscNeedsCyclicFour);
    }
    let c2 = build_group(&GroupSpec::Cyclic(2))?;
    let e = build_group(&GroupSpec::Cyclic(1))?;
    let half_turn = (1..4u16)
        .find(|&x| control.element_order(x) == 2)
        .expect("an order-four cyclic group has a unique involution");
    let full_vertex = CellOrbit {
        stabilizer: Arc::clone(control),
        to_control: GroupHom::identity(control),
    };
    let half_vertex = CellOrbit {
        stabilizer: Arc::clone(&c2),
        to_control: GroupHom::new(
            Arc::clone(&c2),
            Arc::clone(control),
            vec![0, half_turn],
        )?,
    };
    let free_cell = CellOrbit {
        stabilizer: Arc::clone(&e),
        to_control: GroupHom::trivial(&e, control),
    };
    let into = |t: &Arc<FiniteGroup>| GroupHom::trivial(&e, t);
    let x = GCWComplex {
        name: format!("disc over {}", control.name()),
        control: Arc::clone(control),
        cells: vec![
            vec![full_vertex.clone(), half_vertex, full_vertex],
            vec![free_cell.clone(), free_cell.clone()],
            vec![free_cell],
        ],
        incidences: vec![
            vec![vec![], vec![], vec![]],
            vec![
                vec![
                    Incidence { target: 0, coefficient: 1, hom: into(control) },
                    Incidence { target: 2, coefficient: -1, hom: into(control) },
                ],
                vec![
                    Incidence { target: 2, coefficient: 1, hom: into(control) },
                    Incidence { target: 1, coefficient: -1, hom: into(&c2) },
                ],
            ],
            // the face's boundary word visits each edge orbit twice with
            // opposite orientations, so every coefficient cancels
            vec![vec![]],
        ],
        product_meta: None,
    };
    x.validate()?;
    Ok(x)
}

// ---------------------------------------------------------------------------
// scenarios
// ---------------------------------------------------------------------------

/// One factor of a scenario: a complex plus an optional twist, given as one
/// cocycle per cell (aligned with the complex's cell table).
#[derive(Clone)]
pub struct ScenarioFactor {
    pub complex: GCWComplex,
    pub twist: Option<Vec<Vec<Cocycle>>>,
}

impl ScenarioFactor {
    pub fn is_twisted(&self) -> bool {
        self.twist.is_some()
    }

    fn coeff_system(&self, bound: usize) -> Result<CoeffSystem, ComplexError> {
        match &self.twist {
            None => coeff_system_reps(&self.complex, bound),
            Some(c) => coeff_system_twisted(&self.complex, c, bound),
        }
    }
}

/// A named list of factors over one control group, with optional expected
/// results for verification runs.
#[derive(Clone)]
pub struct Scenario {
    pub name: String,
    /// Human-readable lines shown by `describe`.
    pub description: Vec<String>,
    pub control: Arc<FiniteGroup>,
    pub factors: Vec<ScenarioFactor>,
    pub expected: Option<ExpectedResults>,
}

impl Scenario {
    pub fn is_twisted(&self) -> bool {
        self.factors.iter().any(ScenarioFactor::is_twisted)
    }
}

pub const BUILTIN_SCENARIOS: [&str; 2] = ["y1", "y2"];

/// One-line summaries for `list scenarios`.
pub fn builtin_summaries() -> Vec<(&'static str, &'static str)> {
    vec![
        (
            "y1",
            "four factors over Z/4 (two intervals, two discs); quarter-turn quotient of a six-torus",
        ),
        (
            "y2",
            "six interval factors over (Z/2)^2; supports --twisted via the pairing cocycle",
        ),
    ]
}

/// Construct a built-in scenario by name.
pub fn builtin_scenario(name: &str, twisted: bool) -> Result<Scenario, ScenarioError> {
    match name {
        "y1" if twisted => Err(ScenarioError::NoTwistedVariant { name: name.to_string() }),
        "y1" => Ok(scenario_y1()),
        "y2" => Ok(scenario_y2(twisted)),
        _ => Err(ScenarioError::UnknownScenario { name: name.to_string() }),
    }
}

/// Four factors over the cyclic group of order four: two intervals (vertex
/// stabilizers the full group, edge stabilizer the index-two subgroup) and
/// two discs (the quarter-turn plane model). Together they decompose the
/// quotient of a six-torus by the diagonal action (-x, iz_1, iz_2).
pub fn scenario_y1() -> Scenario {
    let c4 = build_group(&GroupSpec::Cyclic(4)).expect("built-in group data is valid");
    let c2 = build_group(&GroupSpec::Cyclic(2)).expect("built-in group data is valid");
    let interval =
        interval_complex(&c4, &c2, vec![0, 2]).expect("built-in complex data is valid");
    let disc = disc_complex(&c4).expect("built-in complex data is valid");
    let factors = vec![
        ScenarioFactor { complex: interval.clone(), twist: None },
        ScenarioFactor { complex: interval, twist: None },
        ScenarioFactor { complex: disc.clone(), twist: None },
        ScenarioFactor { complex: disc, twist: None },
    ];
    Scenario {
        name: "y1".to_string(),
        description: vec![
            "Four factors over the cyclic group of order four: two intervals \
             (a line with half-translation action) and two discs (a plane with \
             quarter-turn action)."
                .to_string(),
            "Models the quotient of a six-torus by the order-four diagonal \
             action (-x, iz1, iz2); the factor cohomologies assemble through \
             the two-term splitting."
                .to_string(),
            "A nontrivial twist is not available for this scenario; only the \
             untwisted run is provided."
                .to_string(),
        ],
        control: c4,
        factors,
        expected: None,
    }
}

/// Six interval factors over the Klein group, one per coordinate of a
/// six-torus with two commuting involutions acting diagonally. The twisted
/// variant places the pairing cocycle (whose central extension is the
/// dihedral group of order 8) on the first factor, transported to its edge
/// stabilizer along the attaching homomorphism.
pub fn scenario_y2(twisted: bool) -> Scenario {
    let v4 = build_group(&GroupSpec::klein()).expect("built-in group data is valid");
    let c2 = build_group(&GroupSpec::Cyclic(2)).expect("built-in group data is valid");
    // edge stabilizer: the diagonal element (the product of both generators)
    let interval =
        interval_complex(&v4, &c2, vec![0, 3]).expect("built-in complex data is valid");
    let mut factors: Vec<ScenarioFactor> = (0..6)
        .map(|_| ScenarioFactor { complex: interval.clone(), twist: None })
        .collect();
    if twisted {
        let pairing =
            Cocycle::pairing_on_klein(Arc::clone(&v4)).expect("control group is Klein");
        let edge_hom = &interval.incidences[1][0][0].hom;
        let edge_cocycle = pairing.transport(edge_hom);
        factors[0].twist = Some(vec![vec![pairing.clone(), pairing], vec![edge_cocycle]]);
    }
    Scenario {
        name: "y2".to_string(),
        description: vec![
            "Six interval factors over the Klein four-group, one per coordinate \
             of a six-torus with two commuting involutions acting diagonally."
                .to_string(),
            "With --twisted, the first factor carries the pairing cocycle (its \
             central extension is the dihedral group of order 8), transported \
             to the edge stabilizer; the other five factors stay untwisted."
                .to_string(),
        ],
        control: v4,
        factors,
        expected: None,
    }
}

// ---------------------------------------------------------------------------
// K-theory readout
// ---------------------------------------------------------------------------

/// Why the spectral readout was allowed to collapse onto Bredon cohomology.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CollapseBasis {
    /// Every odd degree vanishes, so there is no room for differentials.
    EvenConcentration,
    /// The caller asserted collapse explicitly.
    AssertedByFlag,
}

/// Even/odd Bredon cohomology read as the two K-theory groups of the
/// quotient, together with the basis on which the reading was allowed.
#[derive(Clone, Debug, Serialize)]
pub struct KTheoryReadout {
    pub k0: AbelianInvariants,
    pub k1: AbelianInvariants,
    pub collapse_basis: CollapseBasis,
    /// Recorded reason when the readout rests on the caller's flag.
    pub justification: Option<String>,
}

/// Fold the even and odd degrees of a graded module into the two K-theory
/// groups. Without the `assume_collapse` flag this is only valid when all
/// odd degrees vanish; with the flag, the caller takes responsibility (the
/// standing criterion in the sources is that every module is free as an
/// abelian group, which the justification string records when verified).
pub fn k_theory_from_bredon(
    h: &GradedRMod,
    assume_collapse: bool,
) -> Result<KTheoryReadout, ScenarioError> {
    let inv = h.invariants();
    let parity_sum = |parity: usize| {
        inv.iter()
            .enumerate()
            .filter(|(n, _)| n % 2 == parity)
            .fold(AbelianInvariants::free(0), |acc, (_, i)| acc.direct_sum(i))
    };
    let k0 = parity_sum(0);
    let k1 = parity_sum(1);
    if k1.is_trivial() {
        return Ok(KTheoryReadout {
            k0,
            k1,
            collapse_basis: CollapseBasis::EvenConcentration,
            justification: None,
        });
    }
    if assume_collapse {
        let all_free = inv.iter().all(AbelianInvariants::is_free);
        let justification = if all_free {
            "collapse asserted by flag; every graded piece is free as an abelian \
             group, the standing freeness criterion for degeneration"
                .to_string()
        } else {
            "collapse asserted by flag; note that some graded pieces have torsion"
                .to_string()
        };
        return Ok(KTheoryReadout {
            k0,
            k1,
            collapse_basis: CollapseBasis::AssertedByFlag,
            justification: Some(justification),
        });
    }
    Err(ScenarioError::CollapseNotEstablished { odd: k1 })
}

// ---------------------------------------------------------------------------
// reports
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct FactorReport {
    pub index: usize,
    pub name: String,
    pub twisted: bool,
    /// Per-degree invariants of the factor's cohomology.
    pub cohomology: Vec<AbelianInvariants>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FoldObstructionReport {
    /// 1-based fold step (step k merges factor k into the partial product).
    pub step: usize,
    /// Degree of the assembly the Tor term would land in.
    pub degree: usize,
    /// Degree in the partial product.
    pub p: usize,
    /// Degree in the incoming factor.
    pub q: usize,
    /// Invariants of the obstructing Tor module.
    pub invariants: AbelianInvariants,
}

#[derive(Clone, Debug, Serialize)]
pub struct FoldReport {
    pub completed: bool,
    /// Per-degree invariants of each completed partial product.
    pub intermediates: Vec<Vec<AbelianInvariants>>,
    /// Per-degree invariants of the full assembly, when it completed.
    pub result: Option<Vec<AbelianInvariants>>,
    pub obstruction: Option<FoldObstructionReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DirectCheckReport {
    /// Number of leading factors cross-checked.
    pub depth: usize,
    /// Invariants of the honest product-complex cohomology.
    pub direct: Vec<AbelianInvariants>,
    /// Invariants predicted by the two-term splitting of the factors.
    pub assembled: Vec<AbelianInvariants>,
    pub invariants_match: bool,
    pub free_ranks_match: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChecksReport {
    /// Per factor: consecutive differentials compose to zero. Construction
    /// fails otherwise, so reaching a report means every entry is true;
    /// the field records that the check ran.
    pub delta_squared: Vec<bool>,
    /// Per fold step: every Tor term of the step vanished. The fold only
    /// proceeds on true; a false entry is the aborting step.
    pub tor_vanishing: Vec<bool>,
    /// Every computed module (factor cohomology, partial products, result)
    /// is free as an abelian group.
    pub all_modules_z_free: bool,
    pub direct_check: Option<DirectCheckReport>,
    /// How the K-theory readout was justified, or why it was withheld.
    pub collapse: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpectedComparison {
    pub mismatches: Vec<String>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub control: String,
    pub twisted: bool,
    pub factors: Vec<FactorReport>,
    pub fold: FoldReport,
    pub k_theory: Option<KTheoryReadout>,
    pub checks: ChecksReport,
    pub expected: Option<ExpectedComparison>,
}

/// Expected-results block of a scenario (usually loaded from a file):
/// every present field is compared against the computed report.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ExpectedResults {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<Vec<AbelianInvariants>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assembled: Option<Vec<AbelianInvariants>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k0: Option<AbelianInvariants>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k1: Option<AbelianInvariants>,
}

// ---------------------------------------------------------------------------
// running
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct RunOptions {
    /// Read K-theory even when odd degrees are nonzero.
    pub assume_collapse: bool,
    /// Leading factors to cross-check against a direct product-complex
    /// computation; values below 2 disable the check.
    pub direct_check_depth: usize,
    /// Order cap for any character-table computation.
    pub bound: usize,
}

impl Default for RunOptions {
    fn default() -> RunOptions {
        RunOptions {
            assume_collapse: false,
            direct_check_depth: 2,
            bound: DEFAULT_ORDER_BOUND,
        }
    }
}

fn trim_invariants(mut v: Vec<AbelianInvariants>) -> Vec<AbelianInvariants> {
    while v.len() > 1 && v.last().map_or(false, AbelianInvariants::is_trivial) {
        v.pop();
    }
    v
}

fn fmt_graded(v: &[AbelianInvariants]) -> String {
    let mut s = String::from("[");
    for (i, inv) in v.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        let _ = write!(s, "{}", inv);
    }
    s.push(']');
    s
}

/// Compute everything a scenario promises: factor cohomologies, the fold,
/// the K-theory readout, the checks block, and the comparison against any
/// expected results. Mathematical outcomes (fold obstruction, collapse not
/// established, expected mismatch) are report content; `Err` is reserved
/// for invalid inputs and infrastructure failures.
pub fn run_scenario(s: &Scenario, opts: &RunOptions) -> Result<ScenarioReport, ScenarioError> {
    if s.factors.is_empty() {
        return Err(KunnethError::EmptyFold.into());
    }
    for f in &s.factors {
        if f.complex.control != s.control {
            return Err(ScenarioError::ControlMismatch);
        }
    }

    let systems: Vec<CoeffSystem> = s
        .factors
        .iter()
        .map(|f| f.coeff_system(opts.bound))
        .collect::<Result<_, _>>()?;
    let cohomologies: Vec<GradedRMod> = s
        .factors
        .iter()
        .zip(&systems)
        .map(|(f, m)| cohomology(&f.complex, m).map(GradedRMod::trimmed))
        .collect::<Result<_, _>>()?;

    let factor_reports: Vec<FactorReport> = s
        .factors
        .iter()
        .zip(&cohomologies)
        .enumerate()
        .map(|(index, (f, h))| FactorReport {
            index,
            name: f.complex.name.clone(),
            twisted: f.is_twisted(),
            cohomology: trim_invariants(h.invariants()),
        })
        .collect();
    // cochain construction certifies the composite of consecutive
    // differentials vanishes; an entry per factor records that it ran
    let delta_squared = vec![true; s.factors.len()];

    let (fold_report, result_graded, tor_vanishing) = match kunneth_fold(&cohomologies) {
        Ok(outcome) => {
            let fold = FoldReport {
                completed: true,
                intermediates: outcome
                    .intermediates
                    .iter()
                    .map(|g| trim_invariants(g.invariants()))
                    .collect(),
                result: Some(trim_invariants(outcome.result.invariants())),
                obstruction: None,
            };
            let steps = s.factors.len() - 1;
            (fold, Some(outcome.result), vec![true; steps])
        }
        Err(KunnethError::FoldObstruction { step, degree, p, q, invariants, partial }) => {
            let mut tor = vec![true; step.saturating_sub(1)];
            tor.push(false);
            let fold = FoldReport {
                completed: false,
                intermediates: partial.into_iter().map(trim_invariants).collect(),
                result: None,
                obstruction: Some(FoldObstructionReport { step, degree, p, q, invariants }),
            };
            (fold, None, tor)
        }
        Err(e) => return Err(e.into()),
    };

    let (k_theory, collapse) = match &result_graded {
        None => (None, Some("not applicable: the fold did not complete".to_string())),
        Some(g) => match k_theory_from_bredon(g, opts.assume_collapse) {
            Ok(readout) => {
                let note = match readout.collapse_basis {
                    CollapseBasis::EvenConcentration => {
                        "even concentration: all odd degrees vanish".to_string()
                    }
                    CollapseBasis::AssertedByFlag => readout
                        .justification
                        .clone()
                        .unwrap_or_else(|| "asserted by flag".to_string()),
                };
                (Some(readout), Some(note))
            }
            Err(ScenarioError::CollapseNotEstablished { odd }) => (
                None,
                Some(format!(
                    "not established: the odd-degree part {} is nonzero and no \
                     collapse assertion was given",
                    odd
                )),
            ),
            Err(e) => return Err(e),
        },
    };

    let all_modules_z_free = factor_reports
        .iter()
        .flat_map(|f| f.cohomology.iter())
        .chain(fold_report.intermediates.iter().flatten())
        .chain(fold_report.result.iter().flatten())
        .all(AbelianInvariants::is_free);

    let direct_check = if opts.direct_check_depth >= 2 && s.factors.len() >= 2 {
        let depth = opts.direct_check_depth.min(s.factors.len());
        Some(run_direct_check(s, &systems, &cohomologies, depth)?)
    } else {
        None
    };

    let checks = ChecksReport {
        delta_squared,
        tor_vanishing,
        all_modules_z_free,
        direct_check,
        collapse,
    };

    let expected = s
        .expected
        .as_ref()
        .map(|e| compare_expected(e, &factor_reports, &fold_report, &k_theory));

    Ok(ScenarioReport {
        scenario: s.name.clone(),
        control: s.control.name().to_string(),
        twisted: s.is_twisted(),
        factors: factor_reports,
        fold: fold_report,
        k_theory,
        checks,
        expected,
    })
}

/// Build the honest product complex of the first `depth` factors with the
/// tensor coefficient system, compute its cohomology directly, and compare
/// against the iterated two-term splitting of the factor cohomologies.
fn run_direct_check(
    s: &Scenario,
    systems: &[CoeffSystem],
    cohomologies: &[GradedRMod],
    depth: usize,
) -> Result<DirectCheckReport, ScenarioError> {
    let mut prod_x = s.factors[0].complex.clone();
    let mut prod_m = systems[0].clone();
    for i in 1..depth {
        let next = product_complex(&prod_x, &s.factors[i].complex)?;
        prod_m = tensor_coeff_systems(&prod_m, &systems[i], &next)?;
        prod_x = next;
    }
    let direct = trim_invariants(cohomology(&prod_x, &prod_m)?.invariants());

    let mut acc = cohomologies[0].clone();
    for h in cohomologies.iter().take(depth).skip(1) {
        acc = kunneth_assemble(&acc, h)?.graded();
    }
    let assembled = trim_invariants(acc.invariants());

    let max = direct.len().max(assembled.len());
    let at = |v: &[AbelianInvariants], n: usize| {
        v.get(n).cloned().unwrap_or_else(|| AbelianInvariants::free(0))
    };
    let invariants_match = (0..max).all(|n| at(&direct, n) == at(&assembled, n));
    let free_ranks_match =
        (0..max).all(|n| at(&direct, n).free_rank == at(&assembled, n).free_rank);
    Ok(DirectCheckReport { depth, direct, assembled, invariants_match, free_ranks_match })
}

fn compare_expected(
    exp: &ExpectedResults,
    factors: &[FactorReport],
    fold: &FoldReport,
    k: &Option<KTheoryReadout>,
) -> ExpectedComparison {
    let mut mismatches = Vec::new();
    if let Some(want) = &exp.factors {
        if want.len() != factors.len() {
            mismatches.push(format!(
                "expected {} factors, computed {}",
                want.len(),
                factors.len()
            ));
        } else {
            for (i, (w, got)) in want.iter().zip(factors).enumerate() {
                let w = trim_invariants(w.clone());
                if w != got.cohomology {
                    mismatches.push(format!(
                        "factor {}: expected {}, computed {}",
                        i,
                        fmt_graded(&w),
                        fmt_graded(&got.cohomology)
                    ));
                }
            }
        }
    }
    if let Some(want) = &exp.assembled {
        let want = trim_invariants(want.clone());
        match &fold.result {
            None => mismatches
                .push("assembly: expected a completed fold, but it aborted".to_string()),
            Some(got) => {
                if want != *got {
                    mismatches.push(format!(
                        "assembly: expected {}, computed {}",
                        fmt_graded(&want),
                        fmt_graded(got)
                    ));
                }
            }
        }
    }
    let compare_k = |label: &str, want: &Option<AbelianInvariants>, got: Option<&AbelianInvariants>, out: &mut Vec<String>| {
        if let Some(w) = want {
            match got {
                None => out.push(format!("{}: expected {}, but no K-theory readout was produced", label, w)),
                Some(g) => {
                    if w != g {
                        out.push(format!("{}: expected {}, computed {}", label, w, g));
                    }
                }
            }
        }
    };
    compare_k("k0", &exp.k0, k.as_ref().map(|r| &r.k0), &mut mismatches);
    compare_k("k1", &exp.k1, k.as_ref().map(|r| &r.k1), &mut mismatches);
    ExpectedComparison { pass: mismatches.is_empty(), mismatches }
}

// ---------------------------------------------------------------------------
// text rendering
// ---------------------------------------------------------------------------

/// Deterministic human-readable rendering of a report.
pub fn render_text(r: &ScenarioReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "scenario: {} ({})",
        r.scenario,
        if r.twisted { "twisted" } else { "untwisted" }
    );
    let _ = writeln!(out, "control group: {}", r.control);
    for f in &r.factors {
        let _ = writeln!(
            out,
            "factor {}: {}{} — H* = {}",
            f.index,
            f.name,
            if f.twisted { " (twisted)" } else { "" },
            fmt_graded(&f.cohomology)
        );
    }
    if r.fold.completed {
        let _ = writeln!(
            out,
            "fold: completed in {} steps — H* = {}",
            r.checks.tor_vanishing.len(),
            fmt_graded(r.fold.result.as_deref().unwrap_or(&[]))
        );
    } else if let Some(ob) = &r.fold.obstruction {
        let _ = writeln!(
            out,
            "fold: ABORTED at step {}: Tor_1(degree {} of the partial product, \
             degree {} of the incoming factor) = {} would land in degree {}",
            ob.step, ob.p, ob.q, ob.invariants, ob.degree
        );
        for (i, part) in r.fold.intermediates.iter().enumerate() {
            let _ = writeln!(out, "  partial product after step {}: {}", i + 1, fmt_graded(part));
        }
    }
    match &r.k_theory {
        Some(k) => {
            let basis = match k.collapse_basis {
                CollapseBasis::EvenConcentration => "even concentration",
                CollapseBasis::AssertedByFlag => "asserted by flag",
            };
            let _ = writeln!(out, "K^0 = {}", k.k0);
            let _ = writeln!(out, "K^1 = {}", k.k1);
            let _ = writeln!(out, "collapse basis: {}", basis);
        }
        None => {
            let _ = writeln!(
                out,
                "K-theory: not read ({})",
                r.checks.collapse.as_deref().unwrap_or("unknown")
            );
        }
    }
    let _ = writeln!(
        out,
        "checks: delta^2 = 0 on {} factors; Tor vanishing per step: {}; all \
         modules Z-free: {}",
        r.checks.delta_squared.len(),
        r.checks
            .tor_vanishing
            .iter()
            .map(|b| if *b { "yes" } else { "NO" })
            .collect::<Vec<_>>()
            .join(","),
        if r.checks.all_modules_z_free { "yes" } else { "NO" }
    );
    if let Some(dc) = &r.checks.direct_check {
        let _ = writeln!(
            out,
            "direct check (depth {}): direct {} vs assembled {} — invariants {}, \
             free ranks {}",
            dc.depth,
            fmt_graded(&dc.direct),
            fmt_graded(&dc.assembled),
            if dc.invariants_match { "MATCH" } else { "MISMATCH" },
            if dc.free_ranks_match { "match" } else { "MISMATCH" }
        );
    }
    if let Some(exp) = &r.expected {
        if exp.pass {
            let _ = writeln!(out, "expected results: all checks passed");
        } else {
            let _ = writeln!(out, "expected results: MISMATCH");
            for m in &exp.mismatches {
                let _ = writeln!(out, "  {}", m);
            }
        }
    }
    out
}

/// Deterministic JSON rendering of a report (pretty-printed, stable field
/// order, decimal integers).
pub fn render_json(r: &ScenarioReport) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("reports serialize infallibly");
    s.push('\n');
    s
}

// ---------------------------------------------------------------------------
// scenario files
// ---------------------------------------------------------------------------

/// A cocycle in a scenario file: either the name of a built-in ("d8_pairing",
/// the pairing cocycle on a Klein-four stabilizer) or a dense table of
/// values alpha(g, h) in row-major order modulo `modulus`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CocycleSpec {
    Named(String),
    Dense { modulus: usize, values: Vec<u32> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CellSpec {
    pub stabilizer: GroupSpec,
    /// Images of the stabilizer's elements in the control group.
    pub to_control: Vec<u16>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IncidenceSpec {
    pub target: usize,
    pub coefficient: i64,
    /// Images of the cell stabilizer's elements in the target stabilizer.
    pub hom: Vec<u16>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FactorSpec {
    #[serde(default)]
    pub name: Option<String>,
    /// cells[n] lists the n-cell orbits.
    pub cells: Vec<Vec<CellSpec>>,
    /// incidences[n][c] lists the boundary data of the c-th n-cell.
    pub incidences: Vec<Vec<Vec<IncidenceSpec>>>,
    /// Optional twist: one cocycle name per cell, aligned with `cells`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<Vec<Vec<String>>>,
}

/// The on-disk scenario format. Integers are decimal; element indices are
/// zero-based; the identity element has index 0.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScenarioFile {
    pub name: String,
    pub control_group: GroupSpec,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub cocycles: BTreeMap<String, CocycleSpec>,
    pub factors: Vec<FactorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<ExpectedResults>,
}

fn builtin_cocycle(name: &str, stabilizer: &Arc<FiniteGroup>) -> Result<Cocycle, ScenarioError> {
    if name == "d8_pairing" {
        Ok(Cocycle::pairing_on_klein(Arc::clone(stabilizer))?)
    } else {
        Err(ScenarioError::UnknownCocycle { name: name.to_string() })
    }
}

fn resolve_cocycle(
    name: &str,
    table: &BTreeMap<String, CocycleSpec>,
    stabilizer: &Arc<FiniteGroup>,
) -> Result<Cocycle, ScenarioError> {
    match table.get(name) {
        Some(CocycleSpec::Dense { modulus, values }) => {
            Ok(Cocycle::new(Arc::clone(stabilizer), *modulus, values.clone())?)
        }
        Some(CocycleSpec::Named(other)) => builtin_cocycle(other, stabilizer),
        None => builtin_cocycle(name, stabilizer),
    }
}

/// Materialize a parsed scenario file: build the groups, homomorphisms,
/// complexes, and cocycles, validating everything on the way.
pub fn scenario_from_spec(file: &ScenarioFile) -> Result<Scenario, ScenarioError> {
    let control = build_group(&file.control_group)?;
    let mut factors = Vec::with_capacity(file.factors.len());
    for (fi, fs) in file.factors.iter().enumerate() {
        if fs.incidences.len() != fs.cells.len() {
            return Err(ComplexError::ShapeMismatch.into());
        }
        let mut cells: Vec<Vec<CellOrbit>> = Vec::with_capacity(fs.cells.len());
        let mut stabilizers: Vec<Vec<Arc<FiniteGroup>>> = Vec::with_capacity(fs.cells.len());
        for dim_cells in &fs.cells {
            let mut row = Vec::with_capacity(dim_cells.len());
            let mut srow = Vec::with_capacity(dim_cells.len());
            for cs in dim_cells {
                let stab = build_group(&cs.stabilizer)?;
                let hom = GroupHom::new(
                    Arc::clone(&stab),
                    Arc::clone(&control),
                    cs.to_control.clone(),
                )?;
                row.push(CellOrbit { stabilizer: Arc::clone(&stab), to_control: hom });
                srow.push(stab);
            }
            cells.push(row);
            stabilizers.push(srow);
        }
        let mut incidences: Vec<Vec<Vec<Incidence>>> = Vec::with_capacity(fs.incidences.len());
        for (n, dim_incs) in fs.incidences.iter().enumerate() {
            if dim_incs.len() != fs.cells[n].len() {
                return Err(ComplexError::ShapeMismatch.into());
            }
            let mut per_cell = Vec::with_capacity(dim_incs.len());
            for (c, incs) in dim_incs.iter().enumerate() {
                let mut out = Vec::with_capacity(incs.len());
                for is in incs {
                    if n == 0 || is.target >= fs.cells[n - 1].len() {
                        return Err(ComplexError::BadIncidenceTarget {
                            dim: n,
                            cell: c,
                            target: is.target,
                        }
                        .into());
                    }
                    let hom = GroupHom::new(
                        Arc::clone(&stabilizers[n][c]),
                        Arc::clone(&stabilizers[n - 1][is.target]),
                        is.hom.clone(),
                    )?;
                    out.push(Incidence {
                        target: is.target,
                        coefficient: is.coefficient,
                        hom,
                    });
                }
                per_cell.push(out);
            }
            incidences.push(per_cell);
        }
        let name = fs
            .name
            .clone()
            .unwrap_or_else(|| format!("{} factor {}", file.name, fi));
        let complex = GCWComplex {
            name,
            control: Arc::clone(&control),
            cells,
            incidences,
            product_meta: None,
        };
        complex.validate()?;
        let twist = match &fs.twist {
            None => None,
            Some(names) => {
                if names.len() != complex.cells.len()
                    || names
                        .iter()
                        .zip(&complex.cells)
                        .any(|(row, cells)| row.len() != cells.len())
                {
                    return Err(ScenarioError::TwistShapeMismatch);
                }
                let mut rows = Vec::with_capacity(names.len());
                for (row, cell_row) in names.iter().zip(&complex.cells) {
                    let mut out = Vec::with_capacity(row.len());
                    for (name, cell) in row.iter().zip(cell_row) {
                        out.push(resolve_cocycle(name, &file.cocycles, &cell.stabilizer)?);
                    }
                    rows.push(out);
                }
                Some(rows)
            }
        };
        factors.push(ScenarioFactor { complex, twist });
    }
    Ok(Scenario {
        name: file.name.clone(),
        description: Vec::new(),
        control,
        factors,
        expected: file.expected.clone(),
    })
}

/// Load a scenario from a JSON file.
pub fn scenario_from_file(path: &Path) -> Result<Scenario, ScenarioError> {
    let text = std::fs::read_to_string(path)?;
    let file: ScenarioFile = serde_json::from_str(&text)?;
    scenario_from_spec(&file)
}

/// Multi-line `describe` output for a scenario.
pub fn describe_scenario(s: &Scenario) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario: {}", s.name);
    let _ = writeln!(out, "control group: {} (order {})", s.control.name(), s.control.order());
    for line in &s.description {
        let _ = writeln!(out, "{}", line);
    }
    for (i, f) in s.factors.iter().enumerate() {
        let counts: Vec<String> = f
            .complex
            .cells
            .iter()
            .enumerate()
            .map(|(n, orbits)| format!("{} of dimension {}", orbits.len(), n))
            .collect();
        let _ = writeln!(
            out,
            "factor {}: {}{} — cell orbits: {}",
            i,
            f.complex.name,
            if f.is_twisted() { " (twisted)" } else { "" },
            counts.join(", ")
        );
    }
    out
}
