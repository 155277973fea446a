//! The JSON model interchange format.
//!
//! One document describes one ontological model. Complex numbers are
//! two-element `[re, im]` arrays, response matrices are row-major with one
//! row per ontic state (in `ontic_labels` order) and one column per outcome
//! (in effect order). Parsing and re-serializing a document is stable:
//! numbers survive byte-exactly.

use ontoscope_core::nalgebra::DMatrix;
use ontoscope_core::num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use ontoscope_core::hilbert::{Measurement, PureState};
use ontoscope_core::ontology::{
    EpistemicState, OnticSpace, OntologicalModel, Preparation, ResponseTable,
};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub schema_version: String,
    pub dim: usize,
    pub ontic_labels: Vec<String>,
    pub preparations: Vec<PreparationDoc>,
    pub measurements: Vec<MeasurementDoc>,
    pub responses: Vec<ResponseDoc>,
    pub psi_dependent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreparationDoc {
    pub label: String,
    /// Complex amplitudes as [re, im] pairs, length = dim.
    pub amplitudes: Vec<[f64; 2]>,
    /// Epistemic weights, one per ontic label.
    pub weights: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementDoc {
    pub label: String,
    pub effects: Vec<EffectDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectDoc {
    pub outcome: String,
    /// dim x dim complex matrix, entries as [re, im].
    pub matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseDoc {
    pub measurement: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preparation: Option<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Why a syntactically well-formed document does not describe a model.
#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("unsupported schema version `{0}` (this build reads version {SCHEMA_VERSION})")]
    Version(String),
    #[error("{0}")]
    Structure(String),
    #[error(transparent)]
    Core(#[from] ontoscope_core::Error),
}

impl ModelDocument {
    pub fn from_model(model: &OntologicalModel) -> Result<Self, SchemaError> {
        let dim = model
            .preparations
            .first()
            .map(|p| p.state.dim())
            .or_else(|| model.measurements.first().map(|m| m.dim()))
            .ok_or_else(|| {
                SchemaError::Structure("model has neither preparations nor measurements".into())
            })?;
        let preparations = model
            .preparations
            .iter()
            .map(|p| PreparationDoc {
                label: p.state.label().to_string(),
                amplitudes: p.state.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
                weights: p.epistemic.weights.clone(),
            })
            .collect();
        let measurements = model
            .measurements
            .iter()
            .map(|m| MeasurementDoc {
                label: m.label().to_string(),
                effects: m
                    .effects()
                    .iter()
                    .map(|(outcome, op)| EffectDoc {
                        outcome: outcome.clone(),
                        matrix: (0..op.nrows())
                            .map(|i| (0..op.ncols()).map(|j| [op[(i, j)].re, op[(i, j)].im]).collect())
                            .collect(),
                    })
                    .collect(),
            })
            .collect();
        let responses = model
            .responses
            .iter()
            .map(|t| ResponseDoc {
                measurement: t.measurement.clone(),
                preparation: t.preparation.clone(),
                rows: t.rows.clone(),
            })
            .collect();
        Ok(Self {
            schema_version: SCHEMA_VERSION.to_string(),
            dim,
            ontic_labels: model.space.labels().to_vec(),
            preparations,
            measurements,
            responses,
            psi_dependent: model.psi_dependent,
        })
    }

    /// Builds the model, enforcing the hilbert-level invariants (state
    /// normalization, effect positivity and completeness) strictly.
    /// Weight and response-row defects are left for `validate_model`.
    pub fn into_model(&self, name: impl Into<String>) -> Result<OntologicalModel, SchemaError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(SchemaError::Version(self.schema_version.clone()));
        }
        let space = OnticSpace::new(self.ontic_labels.clone())?;
        let mut preparations = Vec::with_capacity(self.preparations.len());
        for p in &self.preparations {
            if p.amplitudes.len() != self.dim {
                return Err(SchemaError::Structure(format!(
                    "preparation `{}` has {} amplitudes for dim {}",
                    p.label,
                    p.amplitudes.len(),
                    self.dim
                )));
            }
            let amplitudes = p
                .amplitudes
                .iter()
                .map(|[re, im]| Complex64::new(*re, *im))
                .collect();
            preparations.push(Preparation {
                state: PureState::new(&p.label, amplitudes)?,
                epistemic: EpistemicState::new(&p.label, p.weights.clone()),
            });
        }
        let mut measurements = Vec::with_capacity(self.measurements.len());
        for m in &self.measurements {
            let mut effects = Vec::with_capacity(m.effects.len());
            for e in &m.effects {
                if e.matrix.len() != self.dim || e.matrix.iter().any(|row| row.len() != self.dim) {
                    return Err(SchemaError::Structure(format!(
                        "effect `{}` of `{}` is not a {dim}x{dim} matrix",
                        e.outcome,
                        m.label,
                        dim = self.dim
                    )));
                }
                let flat: Vec<Complex64> = e
                    .matrix
                    .iter()
                    .flat_map(|row| row.iter().map(|[re, im]| Complex64::new(*re, *im)))
                    .collect();
                effects.push((
                    e.outcome.clone(),
                    DMatrix::from_row_slice(self.dim, self.dim, &flat),
                ));
            }
            measurements.push(Measurement::new(&m.label, self.dim, effects)?);
        }
        let responses = self
            .responses
            .iter()
            .map(|t| ResponseTable {
                measurement: t.measurement.clone(),
                preparation: t.preparation.clone(),
                rows: t.rows.clone(),
            })
            .collect();
        Ok(OntologicalModel {
            name: name.into(),
            space,
            preparations,
            measurements,
            responses,
            psi_dependent: self.psi_dependent,
        })
    }
}
