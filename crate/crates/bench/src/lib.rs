//! Shared fixtures for the criterion benchmarks.

use qec5::{NoiseSpec, StabilizerCode};

pub fn code() -> StabilizerCode {
    StabilizerCode::five_qubit()
}

pub fn depolarizing(p: f64) -> NoiseSpec {
    NoiseSpec::Depolarizing { p }
}
