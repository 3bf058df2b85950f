//! Exact simulator and benchmark harness for the five-qubit quantum
//! error-correcting code.
//!
//! The crate constructs the code from its four stabilizer generators,
//! synthesizes the encode/decode/correct networks, applies parameterized
//! depolarizing noise, and evaluates four error-correction benchmark goals
//! via entanglement fidelity. Two independent engines are provided: a dense
//! density-matrix simulator and a symbolic Pauli-propagation engine; for
//! every Pauli-channel noise configuration both are exact and must agree.
//!
//! Conventions used throughout:
//!
//! - Qubits are numbered `1..=n`; bit `k - 1` of an X/Z mask refers to qubit `k`.
//! - Qubit 1 is the most significant bit of a computational-basis index.
//! - `|1⟩` is the eigenvector of Z with eigenvalue −1.
//! - A qubit with both X and Z components set denotes Y, stored as `i·X·Z`
//!   with the factor `i` absorbed into the tracked phase.

pub mod benchmark;
pub mod code;
pub mod dense;
mod error;
pub mod fidelity;
pub mod linalg;
pub mod noise;
pub mod pauli;
#[doc(hidden)]
pub mod testutil;

pub use benchmark::{
    encoded_curve, evaluate_goals, find_crossover, polarization_histogram, run_error_grid,
    unencoded_curve, BenchmarkReport, Engine, ExperimentRecord, GoalResult, HistogramBin,
    Pipeline, VerificationSummary,
};
pub use code::{StabilizerCode, Sign, Syndrome};
pub use dense::{BellState, Cardinal, DensityMatrix, KrausChannel, StateVector};
pub use error::{Error, Result};
pub use fidelity::{
    reference_entanglement_fidelity, six_state_entanglement_fidelity, transfer_coefficient,
    transfer_entanglement_fidelity, EstimatorMethod, FidelityEstimate,
};
pub use linalg::Matrix;
pub use noise::{NoiseSpec, PauliChannel, PlacedChannel};
pub use pauli::{Axis, Pauli, PauliString, Phase};

/// Largest supported register size.
pub const MAX_QUBITS: usize = 8;

/// Tolerance for state invariants: norms, traces, unitarity, Hermiticity.
pub const STATE_TOL: f64 = 1e-10;

/// Agreement tolerance between engines and between fidelity estimators.
pub const ENGINE_TOL: f64 = 1e-9;

/// Channel probability normalization tolerance.
pub const PROB_TOL: f64 = 1e-12;

/// Density-matrix eigenvalue floor allowed by floating-point round-off.
pub const EIGENVALUE_FLOOR: f64 = -1e-9;

/// Checks that `value` lies in `[0, 1]` up to `tol`, then clamps it exactly.
pub(crate) fn clamp_unit(value: f64, tol: f64) -> Result<f64> {
    if !value.is_finite() || value < -tol || value > 1.0 + tol {
        return Err(Error::Numeric(format!(
            "value {value} outside [0, 1] beyond tolerance {tol}"
        )));
    }
    Ok(value.clamp(0.0, 1.0))
}
