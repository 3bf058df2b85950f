//! Seeded random fixtures shared by unit, integration, and bench code.
//!
//! Not part of the public API surface.

use crate::dense::{DensityMatrix, KrausChannel, StateVector};
use crate::linalg::{Matrix, C_ZERO};
use num_complex::Complex64;
use rand::Rng;

/// Standard-normal sample via Box-Muller.
pub fn normal(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.random::<f64>().max(1e-12);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn gaussian_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(normal(rng), normal(rng))
}

/// Haar-ish random unitary: Gaussian matrix orthonormalized column by column.
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> Matrix {
    let mut cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| (0..dim).map(|_| gaussian_complex(rng)).collect())
        .collect();
    for i in 0..dim {
        // Two passes of Gram-Schmidt for numerical safety.
        for _ in 0..2 {
            for j in 0..i {
                let proj: Complex64 = cols[j]
                    .iter()
                    .zip(&cols[i])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let earlier = cols[j].clone();
                for (dst, src) in cols[i].iter_mut().zip(&earlier) {
                    *dst -= proj * src;
                }
            }
        }
        let norm: f64 = cols[i].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in cols[i].iter_mut() {
            *z /= norm;
        }
    }
    Matrix::from_fn(dim, |r, c| cols[c][r])
}

/// Random pure state.
pub fn random_state(n: usize, rng: &mut impl Rng) -> StateVector {
    let dim = 1usize << n;
    let mut amps: Vec<Complex64> = (0..dim).map(|_| gaussian_complex(rng)).collect();
    let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for a in amps.iter_mut() {
        *a /= norm;
    }
    StateVector::from_amplitudes(n, amps).expect("normalized by construction")
}

/// Random mixed state as a convex mixture of a few random pure states.
pub fn random_density(n: usize, rng: &mut impl Rng) -> DensityMatrix {
    let dim = 1usize << n;
    let parts = 3;
    let mut weights: Vec<f64> = (0..parts).map(|_| rng.random::<f64>() + 0.1).collect();
    let total: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w /= total;
    }
    let mut m = Matrix::zeros(dim);
    for w in weights {
        let psi = random_state(n, rng);
        let outer = Matrix::from_fn(dim, |r, c| {
            psi.amplitudes()[r] * psi.amplitudes()[c].conj()
        });
        m = m.add(&outer.scale(Complex64::new(w, 0.0)));
    }
    DensityMatrix::from_matrix(n, m).expect("convex mixture of pure states")
}

/// Random CPTP channel on n qubits via a Stinespring dilation with one
/// ancilla qubit: completeness is exact by unitarity.
pub fn random_channel(n: usize, rng: &mut impl Rng) -> KrausChannel {
    let dim = 1usize << n;
    let big = random_unitary(2 * dim, rng);
    let mut ops = Vec::with_capacity(2);
    for anc_out in 0..2 {
        let mut k = Matrix::zeros(dim);
        for a in 0..dim {
            for b in 0..dim {
                k[(a, b)] = big[(2 * a + anc_out, 2 * b)];
            }
        }
        ops.push(k);
    }
    KrausChannel::new(n, ops).expect("Stinespring blocks are complete")
}

/// Random unitary channel (single Kraus operator).
pub fn random_unitary_channel(n: usize, rng: &mut impl Rng) -> KrausChannel {
    let dim = 1usize << n;
    KrausChannel::new(n, vec![random_unitary(dim, rng)]).expect("unitary channel")
}

/// Zero matrix helper for tests that build operators entry by entry.
pub fn zeros(dim: usize) -> Matrix {
    Matrix::from_fn(dim, |_, _| C_ZERO)
}
