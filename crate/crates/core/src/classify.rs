//! Overlap computation and model classification.
//!
//! Two notions of epistemicity are computed side by side:
//!
//! - the support-overlap criterion: a model is psi-epistemic iff some pair
//!   of distinct preparations has intersecting supports, and psi-ontic
//!   (complete or supplemented) otherwise;
//! - the broader response-function criterion: a model is epistemic in the
//!   wider sense iff some response value on a preparation's support differs
//!   from the Born probability, making the Born probability a weighted
//!   average over ontic states the preparation does not distinguish.
//!
//! The directed overlap `delta(psi, phi) = sum_{lambda in supp psi} p(lambda|phi)`
//! is bounded by `|<psi|phi>|^2` for preparation-independent Born-reproducing
//! models; the audit checks that bound pairwise and flags (rather than
//! rejects) preparation-dependent models, whose response tables are not
//! constrained the same way.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{born_probability, inner_product};
use crate::ontology::{OntologicalModel, EPS_SUPP};

/// Default tolerance for the response-vs-Born comparison. Deliberately looser
/// than machine precision so grid-quadrature noise in the epistemic weights
/// cannot fire the criterion, yet far below the O(1) gap between indicator
/// responses and non-deterministic Born values.
pub const TOL_EQ6: f64 = 1e-6;

/// Default slack for the overlap bound check.
pub const BOUND_TOL: f64 = 1e-9;

/// Knobs for classification; `Default` gives the documented values.
#[derive(Debug, Clone, Copy)]
pub struct ClassifyOptions {
    /// Support threshold: lambda is in a support iff its weight exceeds this.
    pub eps_supp: f64,
    /// Response-vs-Born tolerance for the broad epistemic criterion.
    pub tol_eq6: f64,
    /// Slack allowed on `delta <= |<psi|phi>|^2`.
    pub bound_tol: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            eps_supp: EPS_SUPP,
            tol_eq6: TOL_EQ6,
            bound_tol: BOUND_TOL,
        }
    }
}

/// Overlap measures for one unordered preparation pair.
#[derive(Debug, Clone, Serialize)]
pub struct OverlapReport {
    pub psi: String,
    pub phi: String,
    /// sum over supp(psi) of p(lambda|phi).
    pub delta_psi_phi: f64,
    /// sum over supp(phi) of p(lambda|psi).
    pub delta_phi_psi: f64,
    /// sum over lambda of min(p(lambda|psi), p(lambda|phi)).
    pub symmetric_overlap: f64,
    /// |<psi|phi>|^2.
    pub born_overlap: f64,
    /// Both delta directions within `bound_tol` of the Born overlap bound.
    pub bound_satisfied: bool,
    /// Copied from the model; the bound derivation does not apply to
    /// preparation-dependent response tables, so violations there are
    /// informational.
    pub psi_dependent: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    PsiEpistemic,
    PsiOntic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OnticSubcategory {
    /// Every support is a singleton and every ontic state is some
    /// preparation's: the wavefunction is the ontic state.
    PsiComplete,
    /// Singleton supports, but the ontic space holds more than the
    /// wavefunctions (some lambda unused).
    PsiSupplementedOneToOne,
    /// Some preparation spreads over several private ontic states.
    PsiSupplementedOneToMany,
}

/// A pair of preparations and an ontic state they share.
#[derive(Debug, Clone, Serialize)]
pub struct OverlapWitness {
    pub pair: (String, String),
    pub lambda: String,
}

/// A response entry differing from the Born probability on a support.
#[derive(Debug, Clone, Serialize)]
pub struct Eq6Witness {
    pub preparation: String,
    pub measurement: String,
    pub outcomes: Vec<String>,
    pub lambda: String,
    pub response: f64,
    pub born: f64,
    pub deviation: f64,
}

/// Verdicts of both criteria, with witnesses.
#[derive(Debug, Clone, Serialize)]
pub struct HSClassification {
    pub verdict: Verdict,
    pub subcategory: Option<OnticSubcategory>,
    pub witness: Option<OverlapWitness>,
    pub eq6: bool,
    pub eq6_witness: Option<Eq6Witness>,
    pub psi_dependent: bool,
}

/// Classification plus the pairwise overlap table.
#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub classification: HSClassification,
    pub overlaps: Vec<OverlapReport>,
}

fn preparation_index(model: &OntologicalModel, label: &str) -> Result<usize> {
    model
        .preparations
        .iter()
        .position(|p| p.state.label() == label)
        .ok_or_else(|| Error::UnknownLabel {
            kind: "preparation",
            label: label.to_string(),
        })
}

/// Directed overlap `delta = sum_{lambda in supp(psi)} p(lambda|phi)`:
/// the weight phi's distribution places on psi's support. Asymmetric; zero
/// iff the supports are disjoint at `eps_supp`.
pub fn support_overlap_delta(
    model: &OntologicalModel,
    psi: &str,
    phi: &str,
    eps_supp: f64,
) -> Result<f64> {
    let pi = preparation_index(model, psi)?;
    let qi = preparation_index(model, phi)?;
    let psi_weights = &model.preparations[pi].epistemic.weights;
    let phi_weights = &model.preparations[qi].epistemic.weights;
    Ok(psi_weights
        .iter()
        .zip(phi_weights)
        .filter(|(wp, _)| **wp > eps_supp)
        .map(|(_, wq)| wq)
        .sum())
}

/// `sum_lambda min(p(lambda|psi), p(lambda|phi))`: symmetric, zero iff the
/// supports are disjoint, one iff the distributions coincide.
pub fn symmetric_overlap(model: &OntologicalModel, psi: &str, phi: &str) -> Result<f64> {
    let pi = preparation_index(model, psi)?;
    let qi = preparation_index(model, phi)?;
    let psi_weights = &model.preparations[pi].epistemic.weights;
    let phi_weights = &model.preparations[qi].epistemic.weights;
    Ok(psi_weights
        .iter()
        .zip(phi_weights)
        .map(|(a, b)| a.min(*b))
        .sum())
}

/// The broad epistemic criterion: true iff some response entry on a
/// preparation's support deviates from the Born probability by more than
/// `tol_eq6`, scanning all preparations, measurements and single outcomes.
/// The witness is the maximizing tuple. Preparation-dependent models are
/// read through their preparation-indexed tables.
pub fn eq6_broad_epistemic(
    model: &OntologicalModel,
    opts: &ClassifyOptions,
) -> Result<(bool, Option<Eq6Witness>)> {
    let mut best: Option<Eq6Witness> = None;
    for prep in &model.preparations {
        let support = prep.epistemic.support(opts.eps_supp);
        for meas in &model.measurements {
            let prep_index = model.psi_dependent.then(|| prep.state.label());
            let table = model
                .response_table(meas.label(), prep_index)
                .ok_or_else(|| Error::UnknownLabel {
                    kind: "response table",
                    label: format!("({}, {})", meas.label(), prep.state.label()),
                })?;
            for (idx, (outcome, _)) in meas.effects().iter().enumerate() {
                let born = born_probability(&prep.state, meas, &[outcome])?;
                for &lambda in &support {
                    let response = table.rows[lambda][idx];
                    let deviation = (response - born).abs();
                    if deviation > opts.tol_eq6
                        && best.as_ref().is_none_or(|b| deviation > b.deviation)
                    {
                        best = Some(Eq6Witness {
                            preparation: prep.state.label().to_string(),
                            measurement: meas.label().to_string(),
                            outcomes: vec![outcome.clone()],
                            lambda: model.space.label(lambda).to_string(),
                            response,
                            born,
                            deviation,
                        });
                    }
                }
            }
        }
    }
    Ok((best.is_some(), best))
}

/// Support-overlap classification, with the broad criterion evaluated
/// alongside. Needs at least two preparations.
pub fn classify_hs(model: &OntologicalModel, opts: &ClassifyOptions) -> Result<HSClassification> {
    if model.preparations.len() < 2 {
        return Err(Error::TooFewPreparations {
            count: model.preparations.len(),
        });
    }

    let supports: Vec<Vec<usize>> = model
        .preparations
        .iter()
        .map(|p| p.epistemic.support(opts.eps_supp))
        .collect();

    let mut witness = None;
    'outer: for i in 0..supports.len() {
        for j in (i + 1)..supports.len() {
            let set: std::collections::HashSet<usize> = supports[i].iter().copied().collect();
            if let Some(&lambda) = supports[j].iter().find(|l| set.contains(l)) {
                witness = Some(OverlapWitness {
                    pair: (
                        model.preparations[i].state.label().to_string(),
                        model.preparations[j].state.label().to_string(),
                    ),
                    lambda: model.space.label(lambda).to_string(),
                });
                break 'outer;
            }
        }
    }

    let (eq6, eq6_witness) = eq6_broad_epistemic(model, opts)?;

    let (verdict, subcategory) = if witness.is_some() {
        (Verdict::PsiEpistemic, None)
    } else {
        let all_singletons = supports.iter().all(|s| s.len() == 1);
        let sub = if all_singletons {
            let used: std::collections::HashSet<usize> =
                supports.iter().flatten().copied().collect();
            if used.len() == model.space.size() {
                OnticSubcategory::PsiComplete
            } else {
                OnticSubcategory::PsiSupplementedOneToOne
            }
        } else {
            OnticSubcategory::PsiSupplementedOneToMany
        };
        (Verdict::PsiOntic, Some(sub))
    };

    Ok(HSClassification {
        verdict,
        subcategory,
        witness,
        eq6,
        eq6_witness,
        psi_dependent: model.psi_dependent,
    })
}

/// One [`OverlapReport`] per unordered preparation pair: both delta
/// directions, the symmetric overlap, the Born overlap, and the bound check.
///
/// Callers are expected to have validated the model and confirmed Born
/// reproduction at the tolerance appropriate to it; on anything else the
/// bound has no reason to hold.
pub fn overlap_bound_audit(
    model: &OntologicalModel,
    opts: &ClassifyOptions,
) -> Result<Vec<OverlapReport>> {
    let mut reports = Vec::new();
    for i in 0..model.preparations.len() {
        for j in (i + 1)..model.preparations.len() {
            let a = &model.preparations[i];
            let b = &model.preparations[j];
            let psi = a.state.label();
            let phi = b.state.label();
            let delta_psi_phi = support_overlap_delta(model, psi, phi, opts.eps_supp)?;
            let delta_phi_psi = support_overlap_delta(model, phi, psi, opts.eps_supp)?;
            let symmetric = symmetric_overlap(model, psi, phi)?;
            let born_overlap = inner_product(&a.state, &b.state)?.norm_sqr();
            let bound_satisfied = delta_psi_phi <= born_overlap + opts.bound_tol
                && delta_phi_psi <= born_overlap + opts.bound_tol;
            reports.push(OverlapReport {
                psi: psi.to_string(),
                phi: phi.to_string(),
                delta_psi_phi,
                delta_phi_psi,
                symmetric_overlap: symmetric,
                born_overlap,
                bound_satisfied,
                psi_dependent: model.psi_dependent,
            });
        }
    }
    Ok(reports)
}

/// Classification and overlap table in one bundle.
pub fn classification_report(
    model: &OntologicalModel,
    opts: &ClassifyOptions,
) -> Result<ClassificationReport> {
    Ok(ClassificationReport {
        classification: classify_hs(model, opts)?,
        overlaps: overlap_bound_audit(model, opts)?,
    })
}

/// CSV rendering of an overlap table, one row per unordered pair.
pub fn overlap_csv(reports: &[OverlapReport]) -> String {
    let mut out = String::from("psi,phi,delta_psi_phi,delta_phi_psi,symmetric,born_overlap,bound_ok\n");
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.psi,
            r.phi,
            r.delta_psi_phi,
            r.delta_phi_psi,
            r.symmetric_overlap,
            r.born_overlap,
            r.bound_satisfied
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::standard::{ket0, ket1, plus, x_basis, z_basis};
    use crate::hilbert::PureState;
    use crate::models::{
        beltrametti_bugajski, kochen_specker_qubit, psi_dependent_uniform,
        psi_supplemented_one_to_many, SphereGrid,
    };
    use crate::ontology::{validate_model, EpistemicState, ResponseTable};

    fn bb_model() -> crate::ontology::OntologicalModel {
        beltrametti_bugajski(&[ket0(), plus()], &[z_basis(), x_basis()]).unwrap()
    }

    fn ks_model(n: usize) -> crate::ontology::OntologicalModel {
        let grid = SphereGrid::fibonacci(n);
        kochen_specker_qubit(&[ket0(), plus()], &[z_basis(), x_basis()], &grid).unwrap()
    }

    /// Midpoint-rule integral of p(lambda|phi) over the hemisphere supporting
    /// psi: an oracle for the directed overlap that shares nothing with the
    /// Fibonacci-grid model construction.
    fn quadrature_delta(n_psi: [f64; 3], n_phi: [f64; 3]) -> f64 {
        let steps_theta = 2000;
        let steps_phi = 2000;
        let d_theta = std::f64::consts::PI / steps_theta as f64;
        let d_phi = std::f64::consts::TAU / steps_phi as f64;
        let mut total = 0.0;
        for i in 0..steps_theta {
            let theta = (i as f64 + 0.5) * d_theta;
            let (sin_t, cos_t) = theta.sin_cos();
            for j in 0..steps_phi {
                let phi = (j as f64 + 0.5) * d_phi;
                let point = [sin_t * phi.cos(), sin_t * phi.sin(), cos_t];
                let in_support =
                    point[0] * n_psi[0] + point[1] * n_psi[1] + point[2] * n_psi[2] > 0.0;
                if !in_support {
                    continue;
                }
                let density =
                    (point[0] * n_phi[0] + point[1] * n_phi[1] + point[2] * n_phi[2]).max(0.0)
                        / std::f64::consts::PI;
                total += density * sin_t * d_theta * d_phi;
            }
        }
        total
    }

    #[test]
    fn delta_zero_for_disjoint_singletons() {
        let model = bb_model();
        let d = support_overlap_delta(&model, "0", "+", EPS_SUPP).unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    fn delta_of_a_preparation_with_itself_is_one() {
        for model in [bb_model(), ks_model(2000)] {
            for prep in &model.preparations {
                let label = prep.state.label();
                let d = support_overlap_delta(&model, label, label, EPS_SUPP).unwrap();
                assert!((d - 1.0).abs() < 1e-9, "{}: delta = {d}", model.name);
            }
        }
    }

    #[test]
    fn ks_delta_matches_quadrature_oracle() {
        let model = ks_model(20_000);
        let d = support_overlap_delta(&model, "0", "+", EPS_SUPP).unwrap();
        assert!(d > 0.0 && d <= 0.5 + 1e-3, "delta = {d}");
        let oracle = quadrature_delta([0.0, 0.0, 1.0], [1.0, 0.0, 0.0]);
        // The oracle integral evaluates to |<0|+>|^2 = 1/2 analytically.
        assert!((oracle - 0.5).abs() < 1e-4, "oracle = {oracle}");
        assert!((d - oracle).abs() < 1e-3, "grid {d} vs oracle {oracle}");
        // And the reverse direction.
        let d_rev = support_overlap_delta(&model, "+", "0", EPS_SUPP).unwrap();
        let oracle_rev = quadrature_delta([1.0, 0.0, 0.0], [0.0, 0.0, 1.0]);
        assert!((d_rev - oracle_rev).abs() < 1e-3);
    }

    #[test]
    fn symmetric_overlap_trivial_cases() {
        let model = bb_model();
        assert_eq!(symmetric_overlap(&model, "0", "+").unwrap(), 0.0);
        assert!((symmetric_overlap(&model, "0", "0").unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn symmetric_overlap_min_sum() {
        // Hand-built two-preparation model over three ontic states with
        // weights (0.5, 0.5, 0) and (0, 0.5, 0.5).
        let space = crate::ontology::OnticSpace::new(vec!["a".into(), "b".into(), "c".into()]).unwrap();
        let trivial = crate::hilbert::Measurement::new(
            "T",
            2,
            vec![("t".into(), nalgebra::DMatrix::identity(2, 2))],
        )
        .unwrap();
        let model = crate::ontology::OntologicalModel {
            name: "min_sum".into(),
            space,
            preparations: vec![
                crate::ontology::Preparation {
                    state: ket0(),
                    epistemic: EpistemicState::new("0", vec![0.5, 0.5, 0.0]),
                },
                crate::ontology::Preparation {
                    state: ket1(),
                    epistemic: EpistemicState::new("1", vec![0.0, 0.5, 0.5]),
                },
            ],
            measurements: vec![trivial],
            responses: vec![ResponseTable {
                measurement: "T".into(),
                preparation: None,
                rows: vec![vec![1.0]; 3],
            }],
            psi_dependent: false,
        };
        assert!((symmetric_overlap(&model, "0", "1").unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn bb_classifies_psi_complete() {
        let c = classify_hs(&bb_model(), &ClassifyOptions::default()).unwrap();
        assert_eq!(c.verdict, Verdict::PsiOntic);
        assert_eq!(c.subcategory, Some(OnticSubcategory::PsiComplete));
        assert!(c.witness.is_none());
        assert!(!c.eq6);
        assert!(c.eq6_witness.is_none());
    }

    #[test]
    fn ks_classifies_psi_epistemic_with_witness() {
        let c = classify_hs(&ks_model(5_000), &ClassifyOptions::default()).unwrap();
        assert_eq!(c.verdict, Verdict::PsiEpistemic);
        assert!(c.subcategory.is_none());
        let witness = c.witness.unwrap();
        assert_eq!(witness.pair, ("0".to_string(), "+".to_string()));
        assert!(c.eq6);
        let w = c.eq6_witness.unwrap();
        // Indicator responses differ from a non-deterministic Born value by
        // exactly the larger Born weight; for these states that is 1/2.
        assert!((w.deviation - 0.5).abs() < 1e-9, "deviation {}", w.deviation);
    }

    #[test]
    fn one_to_many_fixture_classifies_supplemented() {
        let model =
            psi_supplemented_one_to_many(&[ket0(), plus()], &[z_basis(), x_basis()], 3).unwrap();
        assert!(validate_model(&model).is_valid());
        let c = classify_hs(&model, &ClassifyOptions::default()).unwrap();
        assert_eq!(c.verdict, Verdict::PsiOntic);
        assert_eq!(c.subcategory, Some(OnticSubcategory::PsiSupplementedOneToMany));
        assert!(!c.eq6);
    }

    #[test]
    fn unused_lambda_classifies_one_to_one() {
        // A BB-style model with one dangling ontic state: supports stay
        // singletons but the map onto the space is not onto.
        let mut model = bb_model();
        let mut labels: Vec<String> = model.space.labels().to_vec();
        labels.push("spare".into());
        model.space = crate::ontology::OnticSpace::new(labels).unwrap();
        for prep in &mut model.preparations {
            prep.epistemic.weights.push(0.0);
        }
        for table in &mut model.responses {
            let outcomes = table.rows[0].len();
            table.rows.push(vec![1.0 / outcomes as f64; outcomes]);
        }
        assert!(validate_model(&model).is_valid());
        let c = classify_hs(&model, &ClassifyOptions::default()).unwrap();
        assert_eq!(c.verdict, Verdict::PsiOntic);
        assert_eq!(c.subcategory, Some(OnticSubcategory::PsiSupplementedOneToOne));
    }

    #[test]
    fn single_preparation_is_rejected() {
        let mut model = bb_model();
        model.preparations.pop();
        assert!(matches!(
            classify_hs(&model, &ClassifyOptions::default()),
            Err(crate::error::Error::TooFewPreparations { .. })
        ));
    }

    #[test]
    fn psi_dependent_uniform_is_epistemic_without_eq6() {
        let model =
            psi_dependent_uniform(&[ket0(), plus()], &[z_basis(), x_basis()], 4, true).unwrap();
        let c = classify_hs(&model, &ClassifyOptions::default()).unwrap();
        assert_eq!(c.verdict, Verdict::PsiEpistemic);
        assert!(!c.eq6, "rows equal Born values, the criterion must not fire");
        assert!(c.psi_dependent);
        assert!((symmetric_overlap(&model, "0", "+").unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eq6_witness_on_ks_is_an_interior_indicator() {
        let model = ks_model(5_000);
        let (fired, witness) = eq6_broad_epistemic(&model, &ClassifyOptions::default()).unwrap();
        assert!(fired);
        let w = witness.unwrap();
        assert!(w.response == 0.0 || w.response == 1.0);
        assert!((w.born - 0.5).abs() < 1e-9);
    }

    #[test]
    fn audit_bb_bound_holds() {
        let reports = overlap_bound_audit(&bb_model(), &ClassifyOptions::default()).unwrap();
        assert_eq!(reports.len(), 1);
        let r = &reports[0];
        assert_eq!(r.delta_psi_phi, 0.0);
        assert_eq!(r.delta_phi_psi, 0.0);
        assert!((r.born_overlap - 0.5).abs() < 1e-9);
        assert!(r.bound_satisfied);
    }

    #[test]
    fn audit_ks_bound_holds_at_grid_tolerance() {
        let model = ks_model(20_000);
        let opts = ClassifyOptions {
            bound_tol: 1e-3,
            ..ClassifyOptions::default()
        };
        let reports = overlap_bound_audit(&model, &opts).unwrap();
        assert!(reports.iter().all(|r| r.bound_satisfied));
    }

    #[test]
    fn audit_flags_psi_dependent_bound_violation() {
        let model =
            psi_dependent_uniform(&[ket0(), plus()], &[z_basis(), x_basis()], 4, true).unwrap();
        let reports = overlap_bound_audit(&model, &ClassifyOptions::default()).unwrap();
        let r = &reports[0];
        assert!((r.delta_psi_phi - 1.0).abs() < 1e-12);
        assert!(!r.bound_satisfied);
        assert!(r.psi_dependent, "violation must carry the annotation");
    }

    #[test]
    fn orthogonal_pair_has_zero_overlap_in_born_reproducing_models() {
        // |0> and |1> live on opposite hemispheres of the KS sphere.
        let grid = SphereGrid::fibonacci(2_000);
        let model =
            kochen_specker_qubit(&[ket0(), ket1()], &[z_basis(), x_basis()], &grid).unwrap();
        let reports = overlap_bound_audit(&model, &ClassifyOptions::default()).unwrap();
        let r = &reports[0];
        assert!(r.born_overlap < 1e-12);
        assert!(r.delta_psi_phi <= 1e-9 && r.delta_phi_psi <= 1e-9);
        assert!(r.bound_satisfied);
    }

    #[test]
    fn verdicts_stable_under_support_threshold() {
        for model in [
            bb_model(),
            ks_model(5_000),
            psi_supplemented_one_to_many(&[ket0(), plus()], &[z_basis(), x_basis()], 3).unwrap(),
            psi_dependent_uniform(&[ket0(), plus()], &[z_basis(), x_basis()], 4, true).unwrap(),
        ] {
            let tight = classify_hs(
                &model,
                &ClassifyOptions {
                    eps_supp: 1e-12,
                    ..ClassifyOptions::default()
                },
            )
            .unwrap();
            let loose = classify_hs(
                &model,
                &ClassifyOptions {
                    eps_supp: 1e-9,
                    ..ClassifyOptions::default()
                },
            )
            .unwrap();
            assert_eq!(tight.verdict, loose.verdict, "{}", model.name);
            assert_eq!(tight.subcategory, loose.subcategory, "{}", model.name);
            assert_eq!(tight.eq6, loose.eq6, "{}", model.name);
        }
    }

    #[test]
    fn ontic_models_have_no_overlap_in_any_measure() {
        // Disjoint supports make every overlap measure vanish together.
        for model in [
            bb_model(),
            psi_supplemented_one_to_many(&[ket0(), plus()], &[z_basis(), x_basis()], 3).unwrap(),
        ] {
            let c = classify_hs(&model, &ClassifyOptions::default()).unwrap();
            assert_eq!(c.verdict, Verdict::PsiOntic, "{}", model.name);
            for r in overlap_bound_audit(&model, &ClassifyOptions::default()).unwrap() {
                assert_eq!(r.delta_psi_phi, 0.0, "{}", model.name);
                assert_eq!(r.delta_phi_psi, 0.0, "{}", model.name);
                assert_eq!(r.symmetric_overlap, 0.0, "{}", model.name);
            }
        }
    }

    #[test]
    fn symmetric_overlap_never_exceeds_either_delta() {
        for model in [ks_model(2_000), bb_model()] {
            let reports = overlap_bound_audit(&model, &ClassifyOptions::default()).unwrap();
            for r in &reports {
                assert!(r.symmetric_overlap <= r.delta_psi_phi + 1e-12);
                assert!(r.symmetric_overlap <= r.delta_phi_psi + 1e-12);
            }
        }
    }

    #[test]
    fn overlap_csv_has_one_row_per_pair() {
        let third = PureState::new("t", vec![(0.8f64).into(), (0.6f64).into()]).unwrap();
        let model =
            beltrametti_bugajski(&[ket0(), plus(), third], &[z_basis(), x_basis()]).unwrap();
        let reports = overlap_bound_audit(&model, &ClassifyOptions::default()).unwrap();
        let csv = overlap_csv(&reports);
        let lines: Vec<&str> = csv.trim_end().lines().collect();
        assert_eq!(lines.len(), 1 + 3);
        assert_eq!(
            lines[0],
            "psi,phi,delta_psi_phi,delta_phi_psi,symmetric,born_overlap,bound_ok"
        );
        assert!(lines[1].starts_with("0,+,"));
    }
}
