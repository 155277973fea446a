//! Workbench for ontological (hidden-variable) models of finite-dimensional
//! quantum systems.
//!
//! The crate has five layers:
//!
//! - [`hilbert`] — pure states, measurements, Born probabilities;
//! - [`ontology`] — ontic spaces, epistemic states, response tables, and
//!   validation of ontological models against the Born rule;
//! - [`classify`] — support overlaps, the psi-ontic/psi-epistemic taxonomy,
//!   and the broader response-function epistemicity criterion;
//! - [`models`] — canonical model constructors (Beltrametti–Bugajski,
//!   Kochen–Specker qubit, preparation-dependent uniform models) and an
//!   interferometer demo;
//! - [`optimize`] — a linear-programming engine over deterministic ontic
//!   spaces: maximum-overlap search, feasibility certification, and the
//!   two-copy product-preparation contradiction harness.

pub mod classify;
pub mod error;
pub mod hilbert;
pub mod models;
pub mod ontology;
pub mod optimize;

pub use error::{Error, Result};

// The public API speaks these crates' types (DMatrix, Complex64, ...).
pub use nalgebra;
pub use num_complex;
