//! Finite-dimensional quantum states, measurements, and Born probabilities.
//!
//! States are unit vectors in C^d, measurements are finite collections of
//! effect operators summing to the identity. Everything is an immutable
//! value; all operations are pure.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute tolerance for normalization and operator identities.
pub const NORM_TOL: f64 = 1e-9;

/// A pure quantum state: a unit-norm complex amplitude vector.
///
/// States whose squared norm is within [`NORM_TOL`] of 1 are silently
/// renormalized (this absorbs serialization rounding); anything further off
/// is rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    label: String,
    amplitudes: DVector<Complex64>,
}

impl PureState {
    pub fn new(label: impl Into<String>, amplitudes: Vec<Complex64>) -> Result<Self> {
        let label = label.into();
        if amplitudes.is_empty() {
            return Err(Error::EmptyState);
        }
        let mut amplitudes = DVector::from_vec(amplitudes);
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() >= NORM_TOL {
            return Err(Error::NotNormalized { label, norm_sq });
        }
        if norm_sq != 1.0 {
            amplitudes /= Complex64::from(norm_sq.sqrt());
        }
        Ok(Self { label, amplitudes })
    }

    /// The computational basis state |k> in dimension `dim`, labeled `e{k}`.
    pub fn basis_state(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index out of range");
        let mut amps = vec![Complex64::ZERO; dim];
        amps[k] = Complex64::ONE;
        Self::new(format!("e{k}"), amps).expect("basis state is normalized")
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    /// Same state with a different label.
    pub fn relabeled(&self, label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            amplitudes: self.amplitudes.clone(),
        }
    }

    /// Bloch vector (<sigma_x>, <sigma_y>, <sigma_z>) of a qubit state.
    pub fn bloch_vector(&self) -> Result<[f64; 3]> {
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                actual: self.dim(),
            });
        }
        let a0 = self.amplitudes[0];
        let a1 = self.amplitudes[1];
        let c = a0.conj() * a1;
        Ok([2.0 * c.re, 2.0 * c.im, a0.norm_sqr() - a1.norm_sqr()])
    }
}

/// `<a|b>` with conjugation on the first argument.
pub fn inner_product(a: &PureState, b: &PureState) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            actual: b.dim(),
        });
    }
    Ok(a.amplitudes.dotc(&b.amplitudes))
}

/// `|a> (x) |b>` with amplitudes in lexicographic index order (a-index major).
pub fn tensor_product(a: &PureState, b: &PureState) -> PureState {
    let mut amps = Vec::with_capacity(a.dim() * b.dim());
    for i in 0..a.dim() {
        for j in 0..b.dim() {
            amps.push(a.amplitudes[i] * b.amplitudes[j]);
        }
    }
    PureState::new(format!("{}⊗{}", a.label, b.label), amps)
        .expect("tensor product of unit states is a unit state")
}

/// A finite-outcome measurement: labeled effect operators summing to identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    label: String,
    dim: usize,
    effects: Vec<(String, DMatrix<Complex64>)>,
}

impl Measurement {
    /// Validates hermiticity, positive semidefiniteness (eigenvalues >= -1e-9)
    /// and completeness (effects sum to the identity within 1e-9 entrywise).
    pub fn new(
        label: impl Into<String>,
        dim: usize,
        effects: Vec<(String, DMatrix<Complex64>)>,
    ) -> Result<Self> {
        let label = label.into();
        if effects.is_empty() {
            return Err(Error::InvalidMeasurement {
                label,
                reason: "no outcomes".into(),
            });
        }
        let mut seen = std::collections::HashSet::new();
        for (outcome, op) in &effects {
            if !seen.insert(outcome.clone()) {
                return Err(Error::DuplicateLabel {
                    kind: "outcome",
                    label: outcome.clone(),
                });
            }
            if op.nrows() != dim || op.ncols() != dim {
                return Err(Error::InvalidMeasurement {
                    label,
                    reason: format!(
                        "effect `{outcome}` is {}x{}, expected {dim}x{dim}",
                        op.nrows(),
                        op.ncols()
                    ),
                });
            }
            let herm_defect = (op - op.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
            if herm_defect > NORM_TOL {
                return Err(Error::InvalidMeasurement {
                    label,
                    reason: format!("effect `{outcome}` is not Hermitian (defect {herm_defect:.3e})"),
                });
            }
            let min_eig = op
                .clone()
                .symmetric_eigen()
                .eigenvalues
                .iter()
                .copied()
                .fold(f64::INFINITY, f64::min);
            if min_eig < -NORM_TOL {
                return Err(Error::InvalidMeasurement {
                    label,
                    reason: format!("effect `{outcome}` has negative eigenvalue {min_eig:.3e}"),
                });
            }
        }
        let mut sum = DMatrix::<Complex64>::zeros(dim, dim);
        for (_, op) in &effects {
            sum += op;
        }
        let id = DMatrix::<Complex64>::identity(dim, dim);
        let defect = (&sum - &id).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if defect > NORM_TOL {
            return Err(Error::InvalidMeasurement {
                label,
                reason: format!("effects do not sum to identity (defect {defect:.3e})"),
            });
        }
        Ok(Self { label, dim, effects })
    }

    /// Projective measurement built from an orthonormal family of states.
    pub fn projective(label: impl Into<String>, basis: &[(&str, &PureState)]) -> Result<Self> {
        let label = label.into();
        let dim = basis.first().map(|(_, s)| s.dim()).unwrap_or(0);
        let effects = basis
            .iter()
            .map(|(outcome, state)| {
                let v = state.amplitudes();
                (outcome.to_string(), v * v.adjoint())
            })
            .collect();
        Self::new(label, dim, effects)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn effects(&self) -> &[(String, DMatrix<Complex64>)] {
        &self.effects
    }

    pub fn outcome_labels(&self) -> Vec<&str> {
        self.effects.iter().map(|(o, _)| o.as_str()).collect()
    }

    pub fn outcome_index(&self, outcome: &str) -> Option<usize> {
        self.effects.iter().position(|(o, _)| o == outcome)
    }

    /// True when every effect is a rank-1 projector (E^2 = E, tr E = 1).
    pub fn is_rank_one_projective(&self) -> bool {
        self.effects.iter().all(|(_, op)| {
            let idem = (op * op - op).iter().map(|z| z.norm()).fold(0.0, f64::max);
            let trace: Complex64 = op.diagonal().iter().sum();
            idem <= NORM_TOL && (trace.re - 1.0).abs() <= NORM_TOL && trace.im.abs() <= NORM_TOL
        })
    }

    /// Bloch vector Tr(E sigma) of each effect of a qubit measurement.
    pub fn effect_bloch_vectors(&self) -> Result<Vec<[f64; 3]>> {
        if self.dim != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                actual: self.dim,
            });
        }
        Ok(self
            .effects
            .iter()
            .map(|(_, op)| {
                let x = (op[(0, 1)] + op[(1, 0)]).re;
                let y = ((op[(1, 0)] - op[(0, 1)]) * Complex64::i()).re;
                let z = (op[(0, 0)] - op[(1, 1)]).re;
                [x, y, z]
            })
            .collect())
    }
}

/// Born probability of observing an outcome in `outcomes` when measuring `m`
/// on `psi`: the sum over the selected effects of `<psi|E|psi>`.
pub fn born_probability(psi: &PureState, m: &Measurement, outcomes: &[&str]) -> Result<f64> {
    if psi.dim() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            actual: psi.dim(),
        });
    }
    let mut p = 0.0;
    for outcome in outcomes {
        let idx = m.outcome_index(outcome).ok_or_else(|| Error::UnknownLabel {
            kind: "outcome",
            label: outcome.to_string(),
        })?;
        let op = &m.effects[idx].1;
        p += psi.amplitudes().dotc(&(op * psi.amplitudes())).re;
    }
    Ok(p.clamp(0.0, 1.0))
}

/// Ready-made qubit states and measurements.
pub mod standard {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn qubit(label: &str, a0: Complex64, a1: Complex64) -> PureState {
        PureState::new(label, vec![a0, a1]).expect("standard state is normalized")
    }

    pub fn ket0() -> PureState {
        qubit("0", Complex64::ONE, Complex64::ZERO)
    }

    pub fn ket1() -> PureState {
        qubit("1", Complex64::ZERO, Complex64::ONE)
    }

    pub fn plus() -> PureState {
        qubit("+", FRAC_1_SQRT_2.into(), FRAC_1_SQRT_2.into())
    }

    pub fn minus() -> PureState {
        qubit("-", FRAC_1_SQRT_2.into(), (-FRAC_1_SQRT_2).into())
    }

    pub fn ket_i() -> PureState {
        qubit("i", FRAC_1_SQRT_2.into(), Complex64::new(0.0, FRAC_1_SQRT_2))
    }

    pub fn ket_minus_i() -> PureState {
        qubit("-i", FRAC_1_SQRT_2.into(), Complex64::new(0.0, -FRAC_1_SQRT_2))
    }

    /// cos(theta)|0> + sin(theta)|1>, theta in radians.
    pub fn rotated(label: impl Into<String>, theta: f64) -> PureState {
        PureState::new(label, vec![theta.cos().into(), theta.sin().into()])
            .expect("rotated state is normalized")
    }

    pub fn z_basis() -> Measurement {
        Measurement::projective("Z", &[("0", &ket0()), ("1", &ket1())])
            .expect("Z basis is projective")
    }

    pub fn x_basis() -> Measurement {
        Measurement::projective("X", &[("+", &plus()), ("-", &minus())])
            .expect("X basis is projective")
    }

    pub fn y_basis() -> Measurement {
        Measurement::projective("Y", &[("i", &ket_i()), ("-i", &ket_minus_i())])
            .expect("Y basis is projective")
    }
}

/// The four-outcome entangled measurement used by the two-copy product
/// harness: each basis vector is orthogonal to exactly one of
/// |00>, |0+>, |+0>, |++>.
pub fn pbr_basis() -> Measurement {
    use standard::{ket0, ket1, minus, plus};
    let sqrt_half = Complex64::from(std::f64::consts::FRAC_1_SQRT_2);

    let superpose = |label: &str, u: &PureState, v: &PureState| -> PureState {
        let amps = (u.amplitudes() + v.amplitudes()).map(|z| z * sqrt_half);
        PureState::new(label, amps.iter().copied().collect())
            .expect("superposition of orthogonal unit states is a unit state")
    };

    let xi1 = superpose(
        "xi1",
        &tensor_product(&ket0(), &ket1()),
        &tensor_product(&ket1(), &ket0()),
    );
    let xi2 = superpose(
        "xi2",
        &tensor_product(&ket0(), &minus()),
        &tensor_product(&ket1(), &plus()),
    );
    let xi3 = superpose(
        "xi3",
        &tensor_product(&plus(), &ket1()),
        &tensor_product(&minus(), &ket0()),
    );
    let xi4 = superpose(
        "xi4",
        &tensor_product(&plus(), &minus()),
        &tensor_product(&minus(), &plus()),
    );

    Measurement::projective(
        "PBR",
        &[("xi1", &xi1), ("xi2", &xi2), ("xi3", &xi3), ("xi4", &xi4)],
    )
    .expect("the four entangled vectors are orthonormal")
}

#[cfg(test)]
mod tests {
    use super::standard::*;
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inner_product_identity_case() {
        let ip = inner_product(&ket0(), &ket0()).unwrap();
        assert_eq!(ip, Complex64::ONE);
    }

    #[test]
    fn inner_product_orthogonal_basis_states() {
        let ip = inner_product(&plus(), &minus()).unwrap();
        assert!(ip.norm() < 1e-12);
    }

    #[test]
    #[allow(clippy::approx_constant)] // the 8-digit value is the documented expectation
    fn inner_product_ket0_with_plus() {
        let ip = inner_product(&ket0(), &plus()).unwrap();
        assert!((ip.re - 0.70710678).abs() < 1e-8);
        assert!(ip.im.abs() < 1e-12);
    }

    #[test]
    fn inner_product_rejects_dimension_mismatch() {
        let pair = tensor_product(&ket0(), &ket0());
        assert!(matches!(
            inner_product(&ket0(), &pair),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn born_eigenstate_is_certain() {
        let p = born_probability(&ket0(), &z_basis(), &["0"]).unwrap();
        assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn born_plus_under_z_is_half() {
        let p = born_probability(&plus(), &z_basis(), &["0"]).unwrap();
        assert!((p - 0.5).abs() < 1e-12);
    }

    #[test]
    fn born_amplitude_squared() {
        // 0.6|0> + 0.8|1>, outcome "1": |0.8|^2 = 0.64.
        let psi = PureState::new("psi", vec![c(0.6, 0.0), c(0.8, 0.0)]).unwrap();
        let p = born_probability(&psi, &z_basis(), &["1"]).unwrap();
        assert!((p - 0.64).abs() < 1e-12);
    }

    #[test]
    fn born_rejects_unknown_outcome() {
        assert!(matches!(
            born_probability(&ket0(), &z_basis(), &["2"]),
            Err(Error::UnknownLabel { .. })
        ));
    }

    #[test]
    fn tensor_of_basis_states() {
        let t = tensor_product(&ket0(), &ket0());
        let amps: Vec<f64> = t.amplitudes().iter().map(|z| z.re).collect();
        assert_eq!(amps, vec![1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn tensor_plus_with_ket0() {
        let t = tensor_product(&plus(), &ket0());
        let expected = [
            std::f64::consts::FRAC_1_SQRT_2,
            0.0,
            std::f64::consts::FRAC_1_SQRT_2,
            0.0,
        ];
        for (amp, want) in t.amplitudes().iter().zip(expected) {
            assert!((amp.re - want).abs() < 1e-12 && amp.im.abs() < 1e-12);
        }
    }

    #[test]
    fn state_rejects_bad_normalization() {
        assert!(matches!(
            PureState::new("bad", vec![c(0.5, 0.0), c(0.5, 0.0)]),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn state_absorbs_tiny_rounding() {
        let eps = 1e-12;
        let s = PureState::new("ok", vec![c((0.5f64 + eps).sqrt(), 0.0), c(0.5f64.sqrt(), 0.0)])
            .unwrap();
        let norm_sq: f64 = s.amplitudes().iter().map(|z| z.norm_sqr()).sum();
        assert!((norm_sq - 1.0).abs() < 1e-12);
    }

    #[test]
    fn measurement_rejects_non_identity_sum() {
        let half = DMatrix::from_diagonal_element(2, 2, Complex64::from(0.5));
        let err = Measurement::new("bad", 2, vec![("a".into(), half)]);
        assert!(matches!(err, Err(Error::InvalidMeasurement { .. })));
    }

    #[test]
    fn measurement_rejects_negative_effect() {
        let e0 = DMatrix::from_diagonal(&DVector::from_vec(vec![
            Complex64::from(1.5),
            Complex64::from(0.5),
        ]));
        let e1 = DMatrix::from_diagonal(&DVector::from_vec(vec![
            Complex64::from(-0.5),
            Complex64::from(0.5),
        ]));
        let err = Measurement::new("bad", 2, vec![("a".into(), e0), ("b".into(), e1)]);
        assert!(matches!(err, Err(Error::InvalidMeasurement { .. })));
    }

    #[test]
    fn pbr_vector_orthogonal_to_its_preparation() {
        let m = pbr_basis();
        let xi1 = &m.effects()[0].1;
        let prep = tensor_product(&ket0(), &ket0());
        let p = prep.amplitudes().dotc(&(xi1 * prep.amplitudes())).re;
        assert!(p.abs() < 1e-24);
    }

    #[test]
    fn pbr_effects_sum_to_identity() {
        let m = pbr_basis();
        let mut sum = DMatrix::<Complex64>::zeros(4, 4);
        for (_, op) in m.effects() {
            sum += op;
        }
        let defect = (&sum - DMatrix::identity(4, 4))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(defect < 1e-12);
    }

    #[test]
    fn pbr_effects_are_orthonormal_projectors() {
        let m = pbr_basis();
        assert!(m.is_rank_one_projective());
        // Gram matrix of the basis vectors is the identity iff E_i E_j = 0
        // for i != j and each E_i is a rank-1 projector.
        for i in 0..4 {
            for j in 0..4 {
                if i == j {
                    continue;
                }
                let prod = &m.effects()[i].1 * &m.effects()[j].1;
                let defect = prod.iter().map(|z| z.norm()).fold(0.0, f64::max);
                assert!(defect < 1e-12, "E{i} E{j} defect {defect}");
            }
        }
    }

    #[test]
    fn bloch_vectors_of_standard_states() {
        assert_eq!(ket0().bloch_vector().unwrap(), [0.0, 0.0, 1.0]);
        let b = plus().bloch_vector().unwrap();
        assert!((b[0] - 1.0).abs() < 1e-12 && b[1].abs() < 1e-12 && b[2].abs() < 1e-12);
    }

    fn arb_state(dim: usize) -> impl Strategy<Value = PureState> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim).prop_filter_map(
            "norm too small",
            move |parts| {
                let norm_sq: f64 = parts.iter().map(|(re, im)| re * re + im * im).sum();
                if norm_sq < 1e-3 {
                    return None;
                }
                let norm = norm_sq.sqrt();
                let amps = parts
                    .iter()
                    .map(|(re, im)| Complex64::new(re / norm, im / norm))
                    .collect();
                PureState::new("rand", amps).ok()
            },
        )
    }

    proptest! {
        #[test]
        fn born_probabilities_sum_to_one(psi in arb_state(2)) {
            for m in [z_basis(), x_basis(), y_basis()] {
                let outcomes = m.outcome_labels();
                let total = born_probability(&psi, &m, &outcomes).unwrap();
                prop_assert!((total - 1.0).abs() < 1e-9);
            }
        }

        #[test]
        fn born_invariant_under_global_phase(psi in arb_state(2), theta in 0.0..std::f64::consts::TAU) {
            let phase = Complex64::from_polar(1.0, theta);
            let rotated = PureState::new(
                "rot",
                psi.amplitudes().iter().map(|a| a * phase).collect(),
            ).unwrap();
            for m in [z_basis(), x_basis()] {
                for outcome in m.outcome_labels() {
                    let p0 = born_probability(&psi, &m, &[outcome]).unwrap();
                    let p1 = born_probability(&rotated, &m, &[outcome]).unwrap();
                    prop_assert!((p0 - p1).abs() < 1e-12);
                }
            }
        }

        #[test]
        fn born_additive_over_disjoint_outcomes(psi in arb_state(4)) {
            let m = pbr_basis();
            let p12 = born_probability(&psi, &m, &["xi1", "xi2"]).unwrap();
            let p1 = born_probability(&psi, &m, &["xi1"]).unwrap();
            let p2 = born_probability(&psi, &m, &["xi2"]).unwrap();
            prop_assert!((p12 - p1 - p2).abs() < 1e-12);
        }

        #[test]
        fn tensor_is_entrywise_product(a in arb_state(2), b in arb_state(3)) {
            let t = tensor_product(&a, &b);
            prop_assert_eq!(t.dim(), 6);
            let norm_sq: f64 = t.amplitudes().iter().map(|z| z.norm_sqr()).sum();
            prop_assert!((norm_sq - 1.0).abs() < 1e-9);
            for i in 0..2 {
                for j in 0..3 {
                    let got = t.amplitudes()[i * 3 + j];
                    let want = a.amplitudes()[i] * b.amplitudes()[j];
                    prop_assert!((got - want).norm() < 1e-12);
                }
            }
        }
    }
}
