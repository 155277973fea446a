//! Linear programming over deterministic ontic spaces.
//!
//! Response functions over a fixed finite measurement set are convex
//! mixtures of deterministic outcome assignments, so searching over models
//! with one ontic state per assignment loses no generality and turns the
//! otherwise bilinear overlap-maximization problem into a linear program.
//!
//! Entry points:
//!
//! - [`deterministic_lambda_space`] — the assignment space itself;
//! - [`lp_max_symmetric_overlap`] — how much two epistemic states may
//!   overlap while reproducing the Born statistics of a measurement set;
//! - [`lp_born_vertex_model`] — a Born-reproducing model picked by an
//!   arbitrary linear objective (used to sample random valid models);
//! - [`pbr_contradiction`] — the two-copy product-preparation harness: the
//!   entangled four-outcome measurement assigns Born probability zero to one
//!   product preparation per outcome, which is incompatible with any shared
//!   weight between the single-system distributions; certified by an
//!   exact-rational LP.
//! - [`simplex_solve`] / [`simplex_solve_exact`] — the underlying solver;
//! - [`oracle`] — independent brute-force vertex enumeration used by the
//!   test suites to cross-check the simplex path.

pub mod oracle;
mod simplex;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{born_probability, pbr_basis, tensor_product, Measurement, PureState};
use crate::ontology::{
    EpistemicState, OnticSpace, OntologicalModel, Preparation, ResponseTable,
};

pub use simplex::ITERATION_LIMIT;

/// Hard cap on the deterministic assignment space.
pub const ASSIGNMENT_CAP: u128 = 1_000_000;

/// Denominator bound and tolerance used when reading floating-point
/// coefficients as exact rationals.
const SNAP_MAX_DENOMINATOR: u64 = 1 << 20;
const SNAP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    /// The relation after multiplying both sides by -1.
    pub fn flip(self) -> Self {
        match self {
            Relation::Le => Relation::Ge,
            Relation::Ge => Relation::Le,
            Relation::Eq => Relation::Eq,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Constraint {
    pub coefficients: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VarBound {
    NonNegative,
    Free,
}

/// `maximize objective . x` subject to the constraints and variable bounds.
#[derive(Debug, Clone, Serialize)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<VarBound>,
}

impl LinearProgram {
    /// A program whose variables are all non-negative.
    pub fn non_negative(objective: Vec<f64>, constraints: Vec<Constraint>) -> Self {
        let bounds = vec![VarBound::NonNegative; objective.len()];
        Self {
            objective,
            constraints,
            bounds,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.objective.len();
        if self.bounds.len() != n {
            return Err(Error::MalformedProgram(format!(
                "{} bounds for {n} variables",
                self.bounds.len()
            )));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coefficients.len() != n {
                return Err(Error::MalformedProgram(format!(
                    "constraint {i} has {} coefficients for {n} variables",
                    c.coefficients.len()
                )));
            }
            if !c.rhs.is_finite() || c.coefficients.iter().any(|x| !x.is_finite()) {
                return Err(Error::MalformedProgram(format!(
                    "constraint {i} has non-finite entries"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, Serialize)]
pub struct LpSolution {
    pub status: LpStatus,
    pub objective: Option<f64>,
    pub values: Option<Vec<f64>>,
}

/// Objective, constraints, and the mirror-column map for free variables.
type ExpandedProgram<S> = (Vec<S>, Vec<(Vec<S>, Relation, S)>, Vec<Option<usize>>);

fn expand<S: simplex::LpScalar>(
    lp: &LinearProgram,
    conv: &dyn Fn(f64) -> S,
) -> ExpandedProgram<S> {
    let n = lp.objective.len();
    let free: Vec<usize> = lp
        .bounds
        .iter()
        .enumerate()
        .filter(|(_, b)| **b == VarBound::Free)
        .map(|(i, _)| i)
        .collect();
    let mut mirror = vec![None; n];
    let mut objective: Vec<S> = lp.objective.iter().map(|x| conv(*x)).collect();
    for (k, &i) in free.iter().enumerate() {
        mirror[i] = Some(n + k);
        objective.push(conv(-lp.objective[i]));
    }
    let constraints = lp
        .constraints
        .iter()
        .map(|c| {
            let mut coeffs: Vec<S> = c.coefficients.iter().map(|x| conv(*x)).collect();
            for &i in &free {
                coeffs.push(conv(-c.coefficients[i]));
            }
            (coeffs, c.relation, conv(c.rhs))
        })
        .collect();
    (objective, constraints, mirror)
}

fn finish<S: simplex::LpScalar>(
    solution: simplex::GenericSolution<S>,
    mirror: &[Option<usize>],
) -> LpSolution {
    match solution {
        simplex::GenericSolution::Optimal { objective, values } => {
            let mapped = mirror
                .iter()
                .enumerate()
                .map(|(i, m)| match m {
                    Some(j) => values[i].clone() - values[*j].clone(),
                    None => values[i].clone(),
                })
                .map(|v| v.to_f64())
                .collect();
            LpSolution {
                status: LpStatus::Optimal,
                objective: Some(objective.to_f64()),
                values: Some(mapped),
            }
        }
        simplex::GenericSolution::Infeasible => LpSolution {
            status: LpStatus::Infeasible,
            objective: None,
            values: None,
        },
        simplex::GenericSolution::Unbounded => LpSolution {
            status: LpStatus::Unbounded,
            objective: None,
            values: None,
        },
    }
}

/// Two-phase simplex in floating point (Bland's rule, 1e-9 tolerances).
pub fn simplex_solve(lp: &LinearProgram) -> Result<LpSolution> {
    lp.validate()?;
    let (objective, constraints, mirror) = expand::<f64>(lp, &|x| x);
    Ok(finish(simplex::solve(&objective, &constraints)?, &mirror))
}

/// Two-phase simplex in exact rational arithmetic.
///
/// Each floating-point coefficient is read as the nearest rational with
/// denominator at most 2^20 when one lies within 1e-9 (recovering intended
/// values such as 1/2 from representation noise), and as its exact binary
/// rational otherwise. Feasibility verdicts are exact for the resulting
/// program.
pub fn simplex_solve_exact(lp: &LinearProgram) -> Result<LpSolution> {
    lp.validate()?;
    let conv = |x: f64| -> BigRational {
        snap_to_rational(x, SNAP_MAX_DENOMINATOR, SNAP_TOL)
            .unwrap_or_else(|| BigRational::from_float(x).expect("finite coefficient"))
    };
    let (objective, constraints, mirror) = expand::<BigRational>(lp, &conv);
    Ok(finish(simplex::solve(&objective, &constraints)?, &mirror))
}

/// Best rational approximation of `x` with denominator at most
/// `max_denominator`, provided it lands within `tol`; `None` otherwise.
pub fn snap_to_rational(x: f64, max_denominator: u64, tol: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let negative = x < 0.0;
    let target = x.abs();
    let mut a = target.floor();
    let mut rem = target - a;
    let (mut h_prev, mut h): (i128, i128) = (1, a as i128);
    let (mut k_prev, mut k): (i128, i128) = (0, 1);
    for _ in 0..64 {
        if rem.abs() < f64::EPSILON {
            break;
        }
        let next = 1.0 / rem;
        a = next.floor();
        rem = next - a;
        let h_new = (a as i128).saturating_mul(h).saturating_add(h_prev);
        let k_new = (a as i128).saturating_mul(k).saturating_add(k_prev);
        if k_new as u128 > max_denominator as u128 {
            break;
        }
        (h_prev, h) = (h, h_new);
        (k_prev, k) = (k, k_new);
    }
    let approx = h as f64 / k as f64;
    if (approx - target).abs() <= tol {
        let numer = if negative { -h } else { h };
        Some(BigRational::new(BigInt::from(numer), BigInt::from(k)))
    } else {
        None
    }
}

/// The deterministic assignment space of a measurement list: one ontic state
/// per function from measurements to outcomes, labeled like `Z=0;X=+`.
#[derive(Debug, Clone)]
pub struct AssignmentSpace {
    pub space: OnticSpace,
    /// `assignments[lambda][k]` = outcome index of measurement `k`.
    pub assignments: Vec<Vec<usize>>,
}

/// Enumerates deterministic outcome assignments, first measurement most
/// significant. Rejected beyond [`ASSIGNMENT_CAP`] states.
pub fn deterministic_lambda_space(meas: &[Measurement]) -> Result<AssignmentSpace> {
    if meas.is_empty() {
        return Err(Error::MalformedProgram(
            "deterministic space needs at least one measurement".into(),
        ));
    }
    let mut seen = std::collections::HashSet::new();
    for m in meas {
        if !seen.insert(m.label().to_string()) {
            return Err(Error::DuplicateLabel {
                kind: "measurement",
                label: m.label().to_string(),
            });
        }
    }
    let radices: Vec<usize> = meas.iter().map(|m| m.effects().len()).collect();
    let size: u128 = radices.iter().map(|r| *r as u128).product();
    if size > ASSIGNMENT_CAP {
        return Err(Error::AssignmentSpaceTooLarge {
            size,
            cap: ASSIGNMENT_CAP,
        });
    }
    let size = size as usize;
    let mut assignments = Vec::with_capacity(size);
    let mut labels = Vec::with_capacity(size);
    for index in 0..size {
        let mut digits = vec![0usize; radices.len()];
        let mut rest = index;
        for k in (0..radices.len()).rev() {
            digits[k] = rest % radices[k];
            rest /= radices[k];
        }
        let label = meas
            .iter()
            .zip(&digits)
            .map(|(m, &d)| format!("{}={}", m.label(), m.effects()[d].0))
            .collect::<Vec<_>>()
            .join(";");
        labels.push(label);
        assignments.push(digits);
    }
    Ok(AssignmentSpace {
        space: OnticSpace::new(labels)?,
        assignments,
    })
}

/// Builds the preparation-independent model whose responses are the
/// indicator tables of a deterministic assignment space.
fn assignment_model(
    name: impl Into<String>,
    asg: &AssignmentSpace,
    preps: &[PureState],
    weights: &[Vec<f64>],
    meas: &[Measurement],
) -> Result<OntologicalModel> {
    let mut seen = std::collections::HashSet::new();
    for p in preps {
        if !seen.insert(p.label().to_string()) {
            return Err(Error::DuplicateLabel {
                kind: "preparation",
                label: p.label().to_string(),
            });
        }
    }
    let preparations = preps
        .iter()
        .zip(weights)
        .map(|(p, w)| Preparation {
            state: p.clone(),
            epistemic: EpistemicState::new(p.label(), w.clone()),
        })
        .collect();
    let responses = meas
        .iter()
        .enumerate()
        .map(|(k, m)| {
            let rows = asg
                .assignments
                .iter()
                .map(|digits| {
                    let mut row = vec![0.0; m.effects().len()];
                    row[digits[k]] = 1.0;
                    row
                })
                .collect();
            ResponseTable {
                measurement: m.label().to_string(),
                preparation: None,
                rows,
            }
        })
        .collect();
    Ok(OntologicalModel {
        name: name.into(),
        space: asg.space.clone(),
        preparations,
        measurements: meas.to_vec(),
        responses,
        psi_dependent: false,
    })
}

fn check_dims(states: &[&PureState], meas: &[Measurement]) -> Result<()> {
    let Some(dim) = states.first().map(|s| s.dim()) else {
        return Ok(());
    };
    for s in states {
        if s.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: s.dim(),
            });
        }
    }
    for m in meas {
        if m.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: m.dim(),
            });
        }
    }
    Ok(())
}

/// Appends the Born-reproduction rows of one preparation: for every
/// measurement and outcome, the weight its assignment class receives must
/// equal the Born probability (within `tol` when positive, exactly when 0).
fn push_born_constraints(
    constraints: &mut Vec<Constraint>,
    n_vars: usize,
    offset: usize,
    asg: &AssignmentSpace,
    prep: &PureState,
    meas: &[Measurement],
    tol: f64,
) -> Result<()> {
    for (k, m) in meas.iter().enumerate() {
        for (s, (outcome, _)) in m.effects().iter().enumerate() {
            let born = born_probability(prep, m, &[outcome])?;
            let mut coefficients = vec![0.0; n_vars];
            for (lambda, digits) in asg.assignments.iter().enumerate() {
                if digits[k] == s {
                    coefficients[offset + lambda] = 1.0;
                }
            }
            if tol <= 0.0 {
                constraints.push(Constraint {
                    coefficients,
                    relation: Relation::Eq,
                    rhs: born,
                });
            } else {
                constraints.push(Constraint {
                    coefficients: coefficients.clone(),
                    relation: Relation::Le,
                    rhs: born + tol,
                });
                constraints.push(Constraint {
                    coefficients,
                    relation: Relation::Ge,
                    rhs: born - tol,
                });
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolutionStatus {
    Optimal,
    Infeasible,
}

/// Result of the maximum-overlap search.
#[derive(Debug, Clone, Serialize)]
pub struct OverlapSolution {
    pub status: SolutionStatus,
    /// Maximum symmetric overlap; 0 when infeasible.
    pub value: f64,
    pub preparations: (String, String),
    pub lambda_labels: Vec<String>,
    /// Maximizing weights per preparation (psi first), empty when infeasible.
    pub weights: Vec<Vec<f64>>,
    pub born_tolerance: f64,
    pub exact: bool,
}

/// The overlap-maximization program over the deterministic space of `meas`:
/// variables are the two weight vectors and per-lambda minimum trackers.
fn overlap_program(
    psi: &PureState,
    phi: &PureState,
    meas: &[Measurement],
    tol: f64,
    asg: &AssignmentSpace,
) -> Result<LinearProgram> {
    let count = asg.space.size();
    let n_vars = 3 * count;
    let mut objective = vec![0.0; n_vars];
    for v in objective.iter_mut().skip(2 * count) {
        *v = 1.0;
    }

    let mut constraints = Vec::new();
    for offset in [0, count] {
        let mut coefficients = vec![0.0; n_vars];
        for c in coefficients.iter_mut().skip(offset).take(count) {
            *c = 1.0;
        }
        constraints.push(Constraint {
            coefficients,
            relation: Relation::Eq,
            rhs: 1.0,
        });
    }
    push_born_constraints(&mut constraints, n_vars, 0, asg, psi, meas, tol)?;
    push_born_constraints(&mut constraints, n_vars, count, asg, phi, meas, tol)?;
    // m_lambda <= p(lambda|psi) and m_lambda <= p(lambda|phi).
    for lambda in 0..count {
        for offset in [0, count] {
            let mut coefficients = vec![0.0; n_vars];
            coefficients[2 * count + lambda] = 1.0;
            coefficients[offset + lambda] = -1.0;
            constraints.push(Constraint {
                coefficients,
                relation: Relation::Le,
                rhs: 0.0,
            });
        }
    }
    Ok(LinearProgram::non_negative(objective, constraints))
}

/// Zeroes the sub-tolerance negatives floating-point pivoting leaves behind;
/// anything below the solver's feasibility tolerance stays (and will fail
/// validation, as it should).
fn clean_weights(values: &[f64]) -> Vec<f64> {
    values
        .iter()
        .map(|&v| if (-1e-9..0.0).contains(&v) { 0.0 } else { v })
        .collect()
}

fn overlap_solution_from(
    lp_solution: LpSolution,
    psi: &PureState,
    phi: &PureState,
    asg: &AssignmentSpace,
    tol: f64,
    exact: bool,
) -> Result<OverlapSolution> {
    let count = asg.space.size();
    let preparations = (psi.label().to_string(), phi.label().to_string());
    let lambda_labels = asg.space.labels().to_vec();
    match lp_solution.status {
        LpStatus::Optimal => {
            let values = lp_solution.values.expect("optimal solutions carry values");
            Ok(OverlapSolution {
                status: SolutionStatus::Optimal,
                value: lp_solution.objective.expect("optimal solutions carry a value"),
                preparations,
                lambda_labels,
                weights: vec![
                    clean_weights(&values[..count]),
                    clean_weights(&values[count..2 * count]),
                ],
                born_tolerance: tol,
                exact,
            })
        }
        LpStatus::Infeasible => Ok(OverlapSolution {
            status: SolutionStatus::Infeasible,
            value: 0.0,
            preparations,
            lambda_labels,
            weights: Vec::new(),
            born_tolerance: tol,
            exact,
        }),
        LpStatus::Unbounded => Err(Error::Numerics(
            "overlap program cannot be unbounded: the objective is a sub-probability".into(),
        )),
    }
}

/// Maximum symmetric overlap two epistemic states can have while reproducing
/// the Born statistics of `meas` over the deterministic assignment space.
/// `Infeasible` means the measurement set admits no deterministic-lambda
/// model at tolerance `tol`.
pub fn lp_max_symmetric_overlap(
    psi: &PureState,
    phi: &PureState,
    meas: &[Measurement],
    tol: f64,
) -> Result<OverlapSolution> {
    check_dims(&[psi, phi], meas)?;
    let asg = deterministic_lambda_space(meas)?;
    let lp = overlap_program(psi, phi, meas, tol, &asg)?;
    overlap_solution_from(simplex_solve(&lp)?, psi, phi, &asg, tol, false)
}

/// [`lp_max_symmetric_overlap`] in exact rational arithmetic.
pub fn lp_max_symmetric_overlap_exact(
    psi: &PureState,
    phi: &PureState,
    meas: &[Measurement],
    tol: f64,
) -> Result<OverlapSolution> {
    check_dims(&[psi, phi], meas)?;
    let asg = deterministic_lambda_space(meas)?;
    let lp = overlap_program(psi, phi, meas, tol, &asg)?;
    overlap_solution_from(simplex_solve_exact(&lp)?, psi, phi, &asg, tol, true)
}

/// Rebuilds the ontological model an optimal [`OverlapSolution`] describes:
/// the solution weights over the deterministic space with indicator
/// responses.
pub fn solution_to_model(
    solution: &OverlapSolution,
    psi: &PureState,
    phi: &PureState,
    meas: &[Measurement],
) -> Result<OntologicalModel> {
    if solution.status != SolutionStatus::Optimal {
        return Err(Error::Numerics(
            "only optimal overlap solutions induce a model".into(),
        ));
    }
    let asg = deterministic_lambda_space(meas)?;
    if asg.space.labels() != solution.lambda_labels.as_slice() {
        return Err(Error::MalformedProgram(
            "measurement list does not match the solution's assignment space".into(),
        ));
    }
    assignment_model(
        "lp_overlap_solution",
        &asg,
        &[psi.clone(), phi.clone()],
        &solution.weights,
        meas,
    )
}

/// Finds Born-reproducing weights for `preps` over the deterministic space
/// by maximizing an arbitrary objective (one coefficient per preparation and
/// ontic state, preparation-major), and assembles the resulting model.
/// `None` when the Born constraints are infeasible.
pub fn lp_born_vertex_model(
    preps: &[PureState],
    meas: &[Measurement],
    tol: f64,
    objective: &[f64],
) -> Result<Option<OntologicalModel>> {
    let refs: Vec<&PureState> = preps.iter().collect();
    check_dims(&refs, meas)?;
    let asg = deterministic_lambda_space(meas)?;
    let count = asg.space.size();
    let n_vars = preps.len() * count;
    if objective.len() != n_vars {
        return Err(Error::MalformedProgram(format!(
            "objective has {} coefficients for {n_vars} weight variables",
            objective.len()
        )));
    }
    let mut constraints = Vec::new();
    for (i, prep) in preps.iter().enumerate() {
        let mut coefficients = vec![0.0; n_vars];
        for c in coefficients.iter_mut().skip(i * count).take(count) {
            *c = 1.0;
        }
        constraints.push(Constraint {
            coefficients,
            relation: Relation::Eq,
            rhs: 1.0,
        });
        push_born_constraints(&mut constraints, n_vars, i * count, &asg, prep, meas, tol)?;
    }
    let lp = LinearProgram::non_negative(objective.to_vec(), constraints);
    let solution = simplex_solve(&lp)?;
    match solution.status {
        LpStatus::Optimal => {
            let values = solution.values.expect("optimal solutions carry values");
            let weights: Vec<Vec<f64>> = (0..preps.len())
                .map(|i| clean_weights(&values[i * count..(i + 1) * count]))
                .collect();
            Ok(Some(assignment_model("lp_vertex", &asg, preps, &weights, meas)?))
        }
        LpStatus::Infeasible => Ok(None),
        LpStatus::Unbounded => Err(Error::Numerics(
            "Born polytope is bounded; unbounded status indicates a malformed program".into(),
        )),
    }
}

/// One joint preparation paired with the outcome it never triggers.
#[derive(Debug, Clone, Serialize)]
pub struct ZeroOutcome {
    pub preparation: String,
    pub outcome: String,
    pub born_probability: f64,
}

/// Outcome of the two-copy product harness.
#[derive(Debug, Clone, Serialize)]
pub struct PBRCertificate {
    pub preparation_pair: (String, String),
    pub overlap_q: f64,
    pub exact: bool,
    /// Maximum symmetric overlap of the two single-system distributions.
    pub max_symmetric_overlap: f64,
    /// The shared ontic state carrying the overlap.
    pub witness_lambda: String,
    pub zero_outcomes: Vec<ZeroOutcome>,
    pub joint_lp_status: SolutionStatus,
    pub conclusion: String,
}

/// Runs the product-preparation contradiction for the pair {|0>, |+>}.
///
/// Verifies that each of the four joint preparations assigns Born
/// probability zero (<= 1e-12) to its paired outcome of the entangled
/// basis, then asks the joint LP whether any response table over the product
/// ontic space can reproduce those statistics when the single-system
/// distributions overlap with weight at least `overlap_q`. Preparation
/// independence enters as literal product weights. With `exact` set, both
/// stages run in exact rational arithmetic, so the infeasibility verdict
/// does not rest on rounding.
pub fn pbr_contradiction(overlap_q: f64, exact: bool) -> Result<PBRCertificate> {
    if !(overlap_q > 0.0 && overlap_q <= 1.0) {
        return Err(Error::Numerics(format!(
            "overlap_q must lie in (0, 1], got {overlap_q}"
        )));
    }
    let zero = crate::hilbert::standard::ket0();
    let plus = crate::hilbert::standard::plus();
    let meas = [
        crate::hilbert::standard::z_basis(),
        crate::hilbert::standard::x_basis(),
    ];
    let basis = pbr_basis();
    let joint_preps = [
        tensor_product(&zero, &zero),
        tensor_product(&zero, &plus),
        tensor_product(&plus, &zero),
        tensor_product(&plus, &plus),
    ];

    let mut zero_outcomes = Vec::with_capacity(4);
    for (k, prep) in joint_preps.iter().enumerate() {
        let outcome = basis.effects()[k].0.clone();
        let p = born_probability(prep, &basis, &[&outcome])?;
        if p > 1e-12 {
            return Err(Error::Numerics(format!(
                "expected zero Born probability for ({}, {outcome}), got {p}",
                prep.label()
            )));
        }
        zero_outcomes.push(ZeroOutcome {
            preparation: prep.label().to_string(),
            outcome,
            born_probability: p,
        });
    }

    let single = if exact {
        lp_max_symmetric_overlap_exact(&zero, &plus, &meas, 0.0)?
    } else {
        lp_max_symmetric_overlap(&zero, &plus, &meas, 0.0)?
    };
    if single.status != SolutionStatus::Optimal {
        return Err(Error::Numerics(
            "single-system Born constraints are unexpectedly infeasible".into(),
        ));
    }
    let witness_index = (0..single.lambda_labels.len())
        .max_by(|&a, &b| {
            let ma = single.weights[0][a].min(single.weights[1][a]);
            let mb = single.weights[0][b].min(single.weights[1][b]);
            ma.partial_cmp(&mb).unwrap()
        })
        .expect("assignment space is nonempty");
    let witness_lambda = single.lambda_labels[witness_index].clone();

    let joint_lp_status = if single.value + 1e-12 < overlap_q {
        // No Born-reproducing pair of distributions reaches the hypothesized
        // overlap in the first place.
        SolutionStatus::Infeasible
    } else {
        joint_response_status(&single, &joint_preps, &basis, exact)?
    };

    let conclusion = format!(
        "single-system distributions over the deterministic space share symmetric overlap \
         {:.6}; any lambda* carrying weight >= q = {overlap_q} under both gives the pair \
         (lambda*, lambda*) weight >= q^2 = {:.6} under all four product preparations by \
         preparation independence; the four zero Born probabilities then force every \
         response entry at that pair to zero, contradicting response normalization. Joint \
         response LP: {}.",
        single.value,
        overlap_q * overlap_q,
        match joint_lp_status {
            SolutionStatus::Infeasible => "infeasible, as the argument requires",
            SolutionStatus::Optimal => "unexpectedly feasible",
        },
    );

    Ok(PBRCertificate {
        preparation_pair: (zero.label().to_string(), plus.label().to_string()),
        overlap_q,
        exact,
        max_symmetric_overlap: single.value,
        witness_lambda,
        zero_outcomes,
        joint_lp_status,
        conclusion,
    })
}

/// Feasibility of a joint response table over product weights: variables are
/// response probabilities per (lambda pair, outcome); rows must normalize
/// and reproduce the joint Born statistics of the entangled basis under all
/// four product preparations.
fn joint_response_status(
    single: &OverlapSolution,
    joint_preps: &[PureState; 4],
    basis: &Measurement,
    exact: bool,
) -> Result<SolutionStatus> {
    let count = single.lambda_labels.len();
    let pairs = count * count;
    let n_outcomes = basis.effects().len();
    let n_vars = pairs * n_outcomes;

    let mut constraints = Vec::with_capacity(pairs + 4 * n_outcomes);
    for pair in 0..pairs {
        let mut coefficients = vec![0.0; n_vars];
        for s in 0..n_outcomes {
            coefficients[pair * n_outcomes + s] = 1.0;
        }
        constraints.push(Constraint {
            coefficients,
            relation: Relation::Eq,
            rhs: 1.0,
        });
    }
    let factor_indices = [(0, 0), (0, 1), (1, 0), (1, 1)];
    for (prep, (x, y)) in joint_preps.iter().zip(factor_indices) {
        for (s, (outcome, _)) in basis.effects().iter().enumerate() {
            let born = born_probability(prep, basis, &[outcome])?;
            let mut coefficients = vec![0.0; n_vars];
            for i in 0..count {
                for j in 0..count {
                    let weight = single.weights[x][i] * single.weights[y][j];
                    coefficients[(i * count + j) * n_outcomes + s] = weight;
                }
            }
            constraints.push(Constraint {
                coefficients,
                relation: Relation::Eq,
                rhs: born,
            });
        }
    }
    let lp = LinearProgram::non_negative(vec![0.0; n_vars], constraints);
    let solution = if exact {
        simplex_solve_exact(&lp)?
    } else {
        simplex_solve(&lp)?
    };
    Ok(match solution.status {
        LpStatus::Infeasible => SolutionStatus::Infeasible,
        _ => SolutionStatus::Optimal,
    })
}
