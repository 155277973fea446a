//! Ontological models: ontic spaces, epistemic states, response tables, and
//! validation against the Born rule.
//!
//! An ontological model pairs every preparation (a pure state) with a
//! probability distribution over a finite ontic space, and every measurement
//! with a response table giving outcome probabilities per ontic state. The
//! model reproduces quantum theory when, for every preparation, measurement
//! and outcome set, the response average over the epistemic state equals the
//! Born probability.
//!
//! Data-quality defects (broken normalization, negative weights, missing
//! tables) are reported as [`Violation`]s by [`validate_model`], not raised
//! as errors: a violating model is data to inspect, not a failure.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{born_probability, Measurement, PureState};

/// Default support threshold: an ontic state belongs to a support iff its
/// weight exceeds this. Classification results must be insensitive to the
/// choice (exercised in tests with 1e-9 as well).
pub const EPS_SUPP: f64 = 1e-12;

/// Normalization tolerance for weights and response rows.
pub const PROB_TOL: f64 = 1e-9;

/// A finite, labeled ontic state space.
#[derive(Debug, Clone, PartialEq)]
pub struct OnticSpace {
    labels: Vec<String>,
}

impl OnticSpace {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for label in &labels {
            if !seen.insert(label.clone()) {
                return Err(Error::DuplicateLabel {
                    kind: "ontic state",
                    label: label.clone(),
                });
            }
        }
        Ok(Self { labels })
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, idx: usize) -> &str {
        &self.labels[idx]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// A probability distribution over the ontic space, assigned to one
/// preparation.
#[derive(Debug, Clone, PartialEq)]
pub struct EpistemicState {
    /// Label of the preparation this distribution belongs to.
    pub preparation: String,
    /// One weight per ontic state, in space order.
    pub weights: Vec<f64>,
}

impl EpistemicState {
    pub fn new(preparation: impl Into<String>, weights: Vec<f64>) -> Self {
        Self {
            preparation: preparation.into(),
            weights,
        }
    }

    /// Indices of ontic states with weight above `eps_supp`.
    pub fn support(&self, eps_supp: f64) -> Vec<usize> {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| **w > eps_supp)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Response probabilities of one measurement: a row per ontic state, a
/// column per outcome. `preparation` is set on preparation-dependent tables
/// only.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseTable {
    pub measurement: String,
    pub preparation: Option<String>,
    pub rows: Vec<Vec<f64>>,
}

/// A preparation: the quantum state and its epistemic state.
#[derive(Debug, Clone, PartialEq)]
pub struct Preparation {
    pub state: PureState,
    pub epistemic: EpistemicState,
}

/// A full ontological model over one finite ontic space.
#[derive(Debug, Clone, PartialEq)]
pub struct OntologicalModel {
    pub name: String,
    pub space: OnticSpace,
    pub preparations: Vec<Preparation>,
    pub measurements: Vec<Measurement>,
    pub responses: Vec<ResponseTable>,
    /// True when response tables are indexed by preparation as well.
    pub psi_dependent: bool,
}

impl OntologicalModel {
    pub fn preparation(&self, label: &str) -> Option<&Preparation> {
        self.preparations
            .iter()
            .find(|p| p.state.label() == label)
    }

    pub fn measurement(&self, label: &str) -> Option<&Measurement> {
        self.measurements.iter().find(|m| m.label() == label)
    }

    /// The response table for a measurement; for preparation-dependent
    /// models the table of the given preparation.
    pub fn response_table(&self, measurement: &str, preparation: Option<&str>) -> Option<&ResponseTable> {
        self.responses.iter().find(|t| {
            t.measurement == measurement && t.preparation.as_deref() == preparation
        })
    }

    fn dim(&self) -> Option<usize> {
        self.preparations
            .first()
            .map(|p| p.state.dim())
            .or_else(|| self.measurements.first().map(|m| m.dim()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    NegativeWeight,
    WeightSum,
    EmptySupport,
    NegativeResponse,
    RowSum,
    Shape,
    MissingTable,
    UnexpectedTable,
    UnknownReference,
    DuplicateLabel,
    DimensionMismatch,
}

/// One invariant breach, with where it happened and how large it is.
#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub location: String,
    pub magnitude: f64,
}

/// Result of [`validate_model`]: empty iff the model is valid.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every model invariant: non-negativity and normalization of each
/// epistemic state and each response row, nonempty supports, referential
/// integrity of labels, table coverage, and dimension consistency.
pub fn validate_model(model: &OntologicalModel) -> ValidationReport {
    let mut violations = Vec::new();
    let size = model.space.size();
    let dim = model.dim();

    let mut push = |kind: ViolationKind, location: String, magnitude: f64| {
        violations.push(Violation {
            kind,
            location,
            magnitude,
        });
    };

    let mut seen_preps = std::collections::HashSet::new();
    for prep in &model.preparations {
        let label = prep.state.label();
        if !seen_preps.insert(label.to_string()) {
            push(
                ViolationKind::DuplicateLabel,
                format!("preparation `{label}`"),
                0.0,
            );
        }
        if prep.epistemic.preparation != label {
            push(
                ViolationKind::UnknownReference,
                format!(
                    "epistemic state of `{label}` is labeled `{}`",
                    prep.epistemic.preparation
                ),
                0.0,
            );
        }
        if let Some(d) = dim {
            if prep.state.dim() != d {
                push(
                    ViolationKind::DimensionMismatch,
                    format!("preparation `{label}` has dim {}", prep.state.dim()),
                    (prep.state.dim() as f64 - d as f64).abs(),
                );
            }
        }
        let weights = &prep.epistemic.weights;
        if weights.len() != size {
            push(
                ViolationKind::Shape,
                format!(
                    "preparation `{label}` has {} weights for {size} ontic states",
                    weights.len()
                ),
                (weights.len() as f64 - size as f64).abs(),
            );
            continue;
        }
        for (i, w) in weights.iter().enumerate() {
            if *w < 0.0 {
                push(
                    ViolationKind::NegativeWeight,
                    format!("p({}|{label})", model.space.label(i)),
                    -w,
                );
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > PROB_TOL {
            push(
                ViolationKind::WeightSum,
                format!("weights of `{label}` sum to {sum}"),
                (sum - 1.0).abs(),
            );
        }
        if prep.epistemic.support(EPS_SUPP).is_empty() {
            push(
                ViolationKind::EmptySupport,
                format!("preparation `{label}` has empty support"),
                0.0,
            );
        }
    }

    let mut seen_meas = std::collections::HashSet::new();
    for meas in &model.measurements {
        if !seen_meas.insert(meas.label().to_string()) {
            push(
                ViolationKind::DuplicateLabel,
                format!("measurement `{}`", meas.label()),
                0.0,
            );
        }
        if let Some(d) = dim {
            if meas.dim() != d {
                push(
                    ViolationKind::DimensionMismatch,
                    format!("measurement `{}` has dim {}", meas.label(), meas.dim()),
                    (meas.dim() as f64 - d as f64).abs(),
                );
            }
        }
    }

    for table in &model.responses {
        let Some(meas) = model.measurement(&table.measurement) else {
            push(
                ViolationKind::UnknownReference,
                format!("response table for unknown measurement `{}`", table.measurement),
                0.0,
            );
            continue;
        };
        if let Some(prep) = &table.preparation {
            if model.preparation(prep).is_none() {
                push(
                    ViolationKind::UnknownReference,
                    format!(
                        "response table ({}, {prep}) references an unknown preparation",
                        table.measurement
                    ),
                    0.0,
                );
            }
            if !model.psi_dependent {
                push(
                    ViolationKind::UnexpectedTable,
                    format!(
                        "preparation-indexed table ({}, {prep}) in a preparation-independent model",
                        table.measurement
                    ),
                    0.0,
                );
            }
        } else if model.psi_dependent {
            push(
                ViolationKind::UnexpectedTable,
                format!(
                    "unindexed response table for `{}` in a preparation-dependent model",
                    table.measurement
                ),
                0.0,
            );
        }
        if table.rows.len() != size {
            push(
                ViolationKind::Shape,
                format!(
                    "table for `{}` has {} rows for {size} ontic states",
                    table.measurement,
                    table.rows.len()
                ),
                (table.rows.len() as f64 - size as f64).abs(),
            );
            continue;
        }
        let n_outcomes = meas.effects().len();
        for (i, row) in table.rows.iter().enumerate() {
            let lambda = model.space.label(i);
            if row.len() != n_outcomes {
                push(
                    ViolationKind::Shape,
                    format!(
                        "row ({lambda}, {}) has {} entries for {n_outcomes} outcomes",
                        table.measurement,
                        row.len()
                    ),
                    (row.len() as f64 - n_outcomes as f64).abs(),
                );
                continue;
            }
            for (s, v) in row.iter().enumerate() {
                if *v < 0.0 {
                    push(
                        ViolationKind::NegativeResponse,
                        format!(
                            "response ({lambda}, {}, outcome {})",
                            table.measurement,
                            meas.effects()[s].0
                        ),
                        -v,
                    );
                }
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > PROB_TOL {
                push(
                    ViolationKind::RowSum,
                    format!("row ({lambda}, {}) sums to {sum}", table.measurement),
                    (sum - 1.0).abs(),
                );
            }
        }
    }

    // Table coverage.
    for meas in &model.measurements {
        if model.psi_dependent {
            for prep in &model.preparations {
                if model
                    .response_table(meas.label(), Some(prep.state.label()))
                    .is_none()
                {
                    push(
                        ViolationKind::MissingTable,
                        format!(
                            "no response table for ({}, {})",
                            meas.label(),
                            prep.state.label()
                        ),
                        0.0,
                    );
                }
            }
        } else {
            let count = model
                .responses
                .iter()
                .filter(|t| t.measurement == meas.label() && t.preparation.is_none())
                .count();
            if count == 0 {
                push(
                    ViolationKind::MissingTable,
                    format!("no response table for `{}`", meas.label()),
                    0.0,
                );
            } else if count > 1 {
                push(
                    ViolationKind::UnexpectedTable,
                    format!("{count} response tables for `{}`", meas.label()),
                    (count - 1) as f64,
                );
            }
        }
    }

    ValidationReport {
        valid: violations.is_empty(),
        violations,
    }
}

/// The model's prediction for an outcome set: the response average
/// `sum_lambda A(S|lambda) p(lambda|psi)`, using the preparation-indexed
/// table when the model is preparation-dependent.
pub fn predicted_probability(
    model: &OntologicalModel,
    prep: &str,
    meas: &str,
    outcomes: &[&str],
) -> Result<f64> {
    let preparation = model.preparation(prep).ok_or_else(|| Error::UnknownLabel {
        kind: "preparation",
        label: prep.to_string(),
    })?;
    let measurement = model.measurement(meas).ok_or_else(|| Error::UnknownLabel {
        kind: "measurement",
        label: meas.to_string(),
    })?;
    let prep_index = model.psi_dependent.then_some(prep);
    let table = model
        .response_table(meas, prep_index)
        .ok_or_else(|| Error::UnknownLabel {
            kind: "response table",
            label: format!("({meas}, {prep})"),
        })?;
    let mut outcome_indices = Vec::with_capacity(outcomes.len());
    for outcome in outcomes {
        outcome_indices.push(measurement.outcome_index(outcome).ok_or_else(|| {
            Error::UnknownLabel {
                kind: "outcome",
                label: outcome.to_string(),
            }
        })?);
    }
    let mut total = 0.0;
    for (weight, row) in preparation.epistemic.weights.iter().zip(&table.rows) {
        let response: f64 = outcome_indices.iter().map(|&s| row[s]).sum();
        total += weight * response;
    }
    Ok(total)
}

/// Where and by how much a model deviates most from the Born rule.
#[derive(Debug, Clone, Serialize)]
pub struct ReproductionReport {
    pub max_deviation: f64,
    pub worst: Option<WorstCase>,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct WorstCase {
    pub preparation: String,
    pub measurement: String,
    pub outcome: String,
}

/// Compares `predicted_probability` with the Born probability over all
/// preparations, measurements and single outcomes; passes iff the largest
/// deviation is within `tol`.
pub fn check_born_reproduction(model: &OntologicalModel, tol: f64) -> Result<ReproductionReport> {
    let mut max_deviation: f64 = 0.0;
    let mut worst = None;
    for prep in &model.preparations {
        for meas in &model.measurements {
            for (outcome, _) in meas.effects() {
                let predicted =
                    predicted_probability(model, prep.state.label(), meas.label(), &[outcome])?;
                let born = born_probability(&prep.state, meas, &[outcome])?;
                let deviation = (predicted - born).abs();
                if deviation > max_deviation {
                    max_deviation = deviation;
                    worst = Some(WorstCase {
                        preparation: prep.state.label().to_string(),
                        measurement: meas.label().to_string(),
                        outcome: outcome.clone(),
                    });
                }
            }
        }
    }
    Ok(ReproductionReport {
        max_deviation,
        worst,
        tol,
        pass: max_deviation <= tol,
    })
}
