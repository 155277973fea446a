//! Canonical ontological-model constructors and demonstration scenarios.
//!
//! The zoo spans every classification branch:
//!
//! - [`beltrametti_bugajski`] — the wavefunction *is* the ontic state
//!   (psi-ontic, psi-complete);
//! - [`psi_supplemented_one_to_many`] — each wavefunction spreads over a
//!   private block of ontic states (psi-ontic, supplemented);
//! - [`kochen_specker_qubit`] — the classic overlapping-support qubit model
//!   on the Bloch sphere (psi-epistemic, and epistemic in the broad
//!   response-function sense);
//! - [`psi_dependent_uniform`] — uniform distributions over a shared ontic
//!   space with preparation-indexed response tables (psi-epistemic by
//!   overlap, yet every response equals its Born value).
//!
//! [`elitzur_vaidman_demo`] simulates interaction-free bomb detection in a
//! balanced Mach–Zehnder interferometer, the standard example of the
//! destructive interference that non-negative ontic probabilities have to
//! answer for.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{born_probability, inner_product, Measurement, PureState};
use crate::ontology::{
    EpistemicState, OnticSpace, OntologicalModel, Preparation, ResponseTable,
};

/// Dot products smaller than this count as lying on a hemisphere boundary.
const BOUNDARY_EPS: f64 = 1e-12;

/// A finite quadrature grid on the unit sphere.
#[derive(Debug, Clone)]
pub struct SphereGrid {
    /// Unit Bloch vectors.
    pub points: Vec<[f64; 3]>,
    /// Quadrature weights, summing to the sphere area 4*pi.
    pub weights: Vec<f64>,
}

impl SphereGrid {
    /// Fibonacci-spiral lattice with `n` equally weighted points: latitudes
    /// at equal-area midpoints, longitudes advancing by the golden angle.
    pub fn fibonacci(n: usize) -> Self {
        assert!(n > 0, "grid needs at least one point");
        let golden_angle = std::f64::consts::PI * (3.0 - 5.0_f64.sqrt());
        let mut points = Vec::with_capacity(n);
        for i in 0..n {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden_angle * i as f64;
            points.push([r * phi.cos(), r * phi.sin(), z]);
        }
        let w = 4.0 * std::f64::consts::PI / n as f64;
        Self {
            points,
            weights: vec![w; n],
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn check_common_dim(preps: &[PureState], meas: &[Measurement]) -> Result<usize> {
    let dim = preps
        .first()
        .map(|p| p.dim())
        .or_else(|| meas.first().map(|m| m.dim()))
        .ok_or(Error::EmptyState)?;
    for p in preps {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: p.dim(),
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
    Ok(dim)
}

fn check_distinct_labels(preps: &[PureState]) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for p in preps {
        if !seen.insert(p.label().to_string()) {
            return Err(Error::DuplicateLabel {
                kind: "preparation",
                label: p.label().to_string(),
            });
        }
    }
    Ok(())
}

/// Born probabilities of every outcome of `meas` on `state`, in outcome order.
fn born_row(state: &PureState, meas: &Measurement) -> Result<Vec<f64>> {
    meas.effects()
        .iter()
        .map(|(outcome, _)| born_probability(state, meas, &[outcome]))
        .collect()
}

/// The model whose ontic states are the quantum states themselves: one
/// lambda per preparation, carrying all of its weight, with response rows
/// equal to the Born values. Reproduces the Born rule to machine precision
/// and classifies psi-ontic / psi-complete.
///
/// Rejects duplicate labels and preparations that coincide up to phase: two
/// preparations mapping to one ontic state would break completeness.
pub fn beltrametti_bugajski(
    preps: &[PureState],
    meas: &[Measurement],
) -> Result<OntologicalModel> {
    check_common_dim(preps, meas)?;
    check_distinct_labels(preps)?;
    for i in 0..preps.len() {
        for j in (i + 1)..preps.len() {
            let overlap = inner_product(&preps[i], &preps[j])?.norm();
            if overlap >= 1.0 - 1e-12 {
                return Err(Error::IndistinctPreparations {
                    a: preps[i].label().to_string(),
                    b: preps[j].label().to_string(),
                    overlap,
                });
            }
        }
    }

    let space = OnticSpace::new(
        preps
            .iter()
            .map(|p| format!("lambda_{}", p.label()))
            .collect(),
    )?;
    let preparations = preps
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut weights = vec![0.0; preps.len()];
            weights[i] = 1.0;
            Preparation {
                state: p.clone(),
                epistemic: EpistemicState::new(p.label(), weights),
            }
        })
        .collect();
    let responses = meas
        .iter()
        .map(|m| {
            let rows = preps.iter().map(|p| born_row(p, m)).collect::<Result<_>>()?;
            Ok(ResponseTable {
                measurement: m.label().to_string(),
                preparation: None,
                rows,
            })
        })
        .collect::<Result<_>>()?;

    Ok(OntologicalModel {
        name: "beltrametti_bugajski".into(),
        space,
        preparations,
        measurements: meas.to_vec(),
        responses,
        psi_dependent: false,
    })
}

/// The overlapping-support qubit model on a discretized Bloch sphere.
///
/// Ontic states are grid points. A preparation with Bloch vector `n` weights
/// point `lambda` by `(n . lambda) * w(lambda)` on its hemisphere and zero
/// elsewhere, normalized. A projective measurement responds deterministically:
/// the outcome whose effect Bloch vector shares a hemisphere with `lambda`,
/// with boundary ties broken toward the lexicographically first outcome.
///
/// Born reproduction is limited by the grid resolution (empirically ~1/n for
/// the Fibonacci lattice); any pair of non-orthogonal preparations has
/// overlapping supports, so the model classifies psi-epistemic.
pub fn kochen_specker_qubit(
    preps: &[PureState],
    meas: &[Measurement],
    grid: &SphereGrid,
) -> Result<OntologicalModel> {
    let dim = check_common_dim(preps, meas)?;
    if dim != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: dim,
        });
    }
    check_distinct_labels(preps)?;
    for m in meas {
        if !m.is_rank_one_projective() {
            return Err(Error::NotProjective {
                label: m.label().to_string(),
                reason: "effects are not rank-1 projectors".into(),
            });
        }
    }

    let space = OnticSpace::new((0..grid.len()).map(|i| format!("p{i}")).collect())?;

    let preparations = preps
        .iter()
        .map(|p| {
            let n = p.bloch_vector()?;
            let mut weights: Vec<f64> = grid
                .points
                .iter()
                .zip(&grid.weights)
                .map(|(pt, w)| {
                    let d = dot(n, *pt);
                    if d > BOUNDARY_EPS {
                        d * w
                    } else {
                        0.0
                    }
                })
                .collect();
            let total: f64 = weights.iter().sum();
            if total <= 0.0 {
                return Err(Error::Numerics(format!(
                    "grid has no points on the support hemisphere of `{}`",
                    p.label()
                )));
            }
            for w in &mut weights {
                *w /= total;
            }
            Ok(Preparation {
                state: p.clone(),
                epistemic: EpistemicState::new(p.label(), weights),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let responses = meas
        .iter()
        .map(|m| {
            let axes = m.effect_bloch_vectors()?;
            let tie_break = m
                .outcome_labels()
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| a.cmp(b))
                .map(|(i, _)| i)
                .expect("measurement has outcomes");
            let rows = grid
                .points
                .iter()
                .map(|pt| {
                    let mut row = vec![0.0; axes.len()];
                    let hit = axes.iter().position(|axis| dot(*axis, *pt) > BOUNDARY_EPS);
                    row[hit.unwrap_or(tie_break)] = 1.0;
                    row
                })
                .collect();
            Ok(ResponseTable {
                measurement: m.label().to_string(),
                preparation: None,
                rows,
            })
        })
        .collect::<Result<_>>()?;

    Ok(OntologicalModel {
        name: format!("kochen_specker_n{}", grid.len()),
        space,
        preparations,
        measurements: meas.to_vec(),
        responses,
        psi_dependent: false,
    })
}

/// Uniform epistemic states with preparation-indexed response tables.
///
/// With `shared` set, every preparation is uniform over one common ontic
/// space of `support_size` states — maximal overlap — and the table for
/// (measurement, preparation) has each row equal to that preparation's Born
/// values, so the Born rule holds exactly while the response functions carry
/// all the preparation dependence. Without `shared`, each preparation gets
/// its own private block of `support_size` states.
pub fn psi_dependent_uniform(
    preps: &[PureState],
    meas: &[Measurement],
    support_size: usize,
    shared: bool,
) -> Result<OntologicalModel> {
    if support_size == 0 {
        return Err(Error::Numerics("support_size must be >= 1".into()));
    }
    check_common_dim(preps, meas)?;
    check_distinct_labels(preps)?;

    let (space, weight_for): (OnticSpace, Box<dyn Fn(usize) -> Vec<f64>>) = if shared {
        let space = OnticSpace::new((0..support_size).map(|j| format!("u{j}")).collect())?;
        let uniform = vec![1.0 / support_size as f64; support_size];
        (space, Box::new(move |_| uniform.clone()))
    } else {
        let labels = preps
            .iter()
            .flat_map(|p| (0..support_size).map(move |j| format!("u_{}_{j}", p.label())))
            .collect();
        let space = OnticSpace::new(labels)?;
        let total = preps.len() * support_size;
        (
            space,
            Box::new(move |prep_idx| {
                let mut w = vec![0.0; total];
                for j in 0..support_size {
                    w[prep_idx * support_size + j] = 1.0 / support_size as f64;
                }
                w
            }),
        )
    };

    let preparations: Vec<Preparation> = preps
        .iter()
        .enumerate()
        .map(|(i, p)| Preparation {
            state: p.clone(),
            epistemic: EpistemicState::new(p.label(), weight_for(i)),
        })
        .collect();

    let size = space.size();
    let mut responses = Vec::new();
    for m in meas {
        for p in preps {
            let row = born_row(p, m)?;
            responses.push(ResponseTable {
                measurement: m.label().to_string(),
                preparation: Some(p.label().to_string()),
                rows: vec![row; size],
            });
        }
    }

    Ok(OntologicalModel {
        name: "psi_dependent_uniform".into(),
        space,
        preparations,
        measurements: meas.to_vec(),
        responses,
        psi_dependent: true,
    })
}

/// Splits each preparation's ontic state into `copies` equally weighted
/// private copies: supports stay pairwise disjoint but are no longer
/// singletons, so the model classifies psi-ontic / supplemented one-to-many
/// (for `copies >= 2`). Rows equal the owning preparation's Born values, so
/// Born reproduction stays exact.
pub fn psi_supplemented_one_to_many(
    preps: &[PureState],
    meas: &[Measurement],
    copies: usize,
) -> Result<OntologicalModel> {
    if copies == 0 {
        return Err(Error::Numerics("copies must be >= 1".into()));
    }
    check_common_dim(preps, meas)?;
    check_distinct_labels(preps)?;

    let labels = preps
        .iter()
        .flat_map(|p| (0..copies).map(move |k| format!("lambda_{}_{k}", p.label())))
        .collect();
    let space = OnticSpace::new(labels)?;
    let total = preps.len() * copies;

    let preparations = preps
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut weights = vec![0.0; total];
            for k in 0..copies {
                weights[i * copies + k] = 1.0 / copies as f64;
            }
            Preparation {
                state: p.clone(),
                epistemic: EpistemicState::new(p.label(), weights),
            }
        })
        .collect();

    let responses = meas
        .iter()
        .map(|m| {
            let mut rows = Vec::with_capacity(total);
            for p in preps {
                let row = born_row(p, m)?;
                for _ in 0..copies {
                    rows.push(row.clone());
                }
            }
            Ok(ResponseTable {
                measurement: m.label().to_string(),
                preparation: None,
                rows,
            })
        })
        .collect::<Result<_>>()?;

    Ok(OntologicalModel {
        name: "psi_supplemented_one_to_many".into(),
        space,
        preparations,
        measurements: meas.to_vec(),
        responses,
        psi_dependent: false,
    })
}

/// Outcome probabilities of the bomb-detector interferometer run.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct InterferometerOutcome {
    /// Photon absorbed by the bomb.
    pub explode: f64,
    /// Detector on the constructive port.
    pub bright: f64,
    /// Detector on the destructive port — a click here with a live bomb is
    /// an interaction-free detection.
    pub dark: f64,
}

/// Balanced Mach–Zehnder interferometer as a three-mode unitary process:
/// two path modes plus one absorbed mode. With no bomb the photon always
/// exits the bright port; a live bomb in the lower arm absorbs with
/// probability 1/2 and otherwise erases the interference, splitting the rest
/// evenly between bright and dark ports.
pub fn elitzur_vaidman_demo(bomb_present: bool) -> InterferometerOutcome {
    // Mode amplitudes: [upper path, lower path, absorbed].
    let mut modes = [1.0_f64, 0.0, 0.0];

    let beamsplit = |m: &mut [f64; 3]| {
        let (u, l) = (m[0], m[1]);
        m[0] = (u + l) * std::f64::consts::FRAC_1_SQRT_2;
        m[1] = (u - l) * std::f64::consts::FRAC_1_SQRT_2;
    };

    beamsplit(&mut modes);
    if bomb_present {
        modes.swap(1, 2);
    }
    beamsplit(&mut modes);

    InterferometerOutcome {
        explode: modes[2] * modes[2],
        bright: modes[0] * modes[0],
        dark: modes[1] * modes[1],
    }
}

/// The standard model zoo over preparations {|0>, |+>} and measurements
/// {Z, X}, jointly covering all four classification outcomes.
pub fn standard_zoo(ks_grid_size: usize) -> Vec<OntologicalModel> {
    use crate::hilbert::standard::{ket0, plus, x_basis, z_basis};
    let preps = [ket0(), plus()];
    let meas = [z_basis(), x_basis()];
    let grid = SphereGrid::fibonacci(ks_grid_size);
    vec![
        beltrametti_bugajski(&preps, &meas).expect("standard preparations are distinct"),
        kochen_specker_qubit(&preps, &meas, &grid).expect("Z and X are projective"),
        psi_supplemented_one_to_many(&preps, &meas, 3).expect("valid fixture"),
        psi_dependent_uniform(&preps, &meas, 4, true).expect("valid fixture"),
    ]
}
