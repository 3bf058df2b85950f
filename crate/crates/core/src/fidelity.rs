//! Three independent estimators of entanglement fidelity, plus the
//! polarization transfer coefficients linking them.
//!
//! A "process" is any callback from an input density matrix to an output
//! density matrix, so the estimators work identically for raw channels and
//! for full encode/noise/decode/correct pipelines, whichever engine produced
//! them. Every estimate carries the method that produced it.

use crate::dense::{fidelity_pure, BellState, Cardinal, DensityMatrix, StateVector};
use crate::pauli::Axis;
use crate::{clamp_unit, Error, Result, ENGINE_TOL};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Which estimator produced a fidelity value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimatorMethod {
    SixState,
    Transfer,
    Reference,
}

impl fmt::Display for EstimatorMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EstimatorMethod::SixState => "six-state",
            EstimatorMethod::Transfer => "transfer",
            EstimatorMethod::Reference => "reference",
        };
        write!(f, "{s}")
    }
}

/// An entanglement-fidelity estimate tagged with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityEstimate {
    pub value: f64,
    pub method: EstimatorMethod,
    pub inputs_used: String,
}

/// Entanglement fidelity from the fidelities of the six cardinal pure
/// states: `(F₀ + F₁ + F₊ + F₋ + F₊ᵢ + F₋ᵢ)/4 − 1/2`.
pub fn six_state_entanglement_fidelity<P>(process: P) -> Result<FidelityEstimate>
where
    P: Fn(&DensityMatrix) -> Result<DensityMatrix>,
{
    let mut sum = 0.0;
    for cardinal in Cardinal::ALL {
        let input = cardinal.state();
        let output = process(&input.to_density())?;
        if output.n() != 1 {
            return Err(Error::DimensionMismatch(output.n(), 1));
        }
        sum += fidelity_pure(&input, &output)?;
    }
    Ok(FidelityEstimate {
        value: clamp_unit(sum / 4.0 - 0.5, ENGINE_TOL)?,
        method: EstimatorMethod::SixState,
        inputs_used: "six cardinal pure states".to_string(),
    })
}

/// Preserved polarization along one axis: `P(E,u) = tr(σᵤ·E(σᵤ))/2`,
/// evaluated by linearity from the two eigenstates of `σᵤ`.
pub fn transfer_coefficient<P>(process: P, axis: Axis) -> Result<f64>
where
    P: Fn(&DensityMatrix) -> Result<DensityMatrix>,
{
    let (plus, minus) = match axis {
        Axis::X => (Cardinal::Plus, Cardinal::Minus),
        Axis::Y => (Cardinal::PlusI, Cardinal::MinusI),
        Axis::Z => (Cardinal::Zero, Cardinal::One),
    };
    let sigma = axis.pauli().matrix();
    let out_plus = process(&plus.state().to_density())?;
    let out_minus = process(&minus.state().to_density())?;
    let value = 0.5 * (out_plus.expectation(&sigma)? - out_minus.expectation(&sigma)?);
    if value.abs() > 1.0 + ENGINE_TOL {
        return Err(Error::InvalidPolarization(value));
    }
    Ok(value.clamp(-1.0, 1.0))
}

/// Entanglement fidelity from the three transfer coefficients:
/// `(Pₓ + P_y + P_z + 1)/4`.
pub fn transfer_entanglement_fidelity(px: f64, py: f64, pz: f64) -> Result<FidelityEstimate> {
    for v in [px, py, pz] {
        if !v.is_finite() || v.abs() > 1.0 + ENGINE_TOL {
            return Err(Error::InvalidPolarization(v));
        }
    }
    Ok(FidelityEstimate {
        value: clamp_unit((px + py + pz + 1.0) / 4.0, ENGINE_TOL)?,
        method: EstimatorMethod::Transfer,
        inputs_used: "x/y/z transfer coefficients".to_string(),
    })
}

/// The oracle estimator: survival of a maximally entangled state between
/// the data qubit and an appended, untouched reference qubit.
///
/// `process` receives an `(n+1)`-qubit state and must act only on the first
/// `n` qubits; `ones` lists the qubits initialized to `|1⟩`.
pub fn reference_entanglement_fidelity<P>(
    n: usize,
    data_qubit: usize,
    ones: &[usize],
    process: P,
) -> Result<FidelityEstimate>
where
    P: Fn(&DensityMatrix) -> Result<DensityMatrix>,
{
    reference_entanglement_fidelity_with(BellState::PhiPlus, n, data_qubit, ones, process)
}

/// [`reference_entanglement_fidelity`] with an explicit Bell variant; the
/// result does not depend on the choice.
pub fn reference_entanglement_fidelity_with<P>(
    variant: BellState,
    n: usize,
    data_qubit: usize,
    ones: &[usize],
    process: P,
) -> Result<FidelityEstimate>
where
    P: Fn(&DensityMatrix) -> Result<DensityMatrix>,
{
    let input = StateVector::bell_with_reference(n, data_qubit, ones, variant)?;
    let output = process(&input.to_density())?;
    if output.n() != n + 1 {
        return Err(Error::DimensionMismatch(output.n(), n + 1));
    }
    let reduced = output.partial_trace(&[data_qubit, n + 1])?;
    let value = fidelity_pure(&variant.state(), &reduced)?;
    Ok(FidelityEstimate {
        value,
        method: EstimatorMethod::Reference,
        inputs_used: format!("Bell pair (data qubit {data_qubit}, reference qubit {})", n + 1),
    })
}
