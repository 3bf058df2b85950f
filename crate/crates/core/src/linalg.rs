//! Small dense complex matrices for exact few-qubit simulation.
//!
//! Everything in this crate is sized for at most `2^8 × 2^8`, so plain
//! row-major storage with straightforward loops is used throughout.

use num_complex::Complex64;
use std::fmt;
use std::ops::{Index, IndexMut};

pub(crate) const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix in row-major order.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Matrix {
            dim,
            data: vec![C_ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Matrix::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C_ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Matrix::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions must match");
        let d = self.dim;
        let mut out = Matrix::zeros(d);
        for r in 0..d {
            for k in 0..d {
                let a = self.data[r * d + k];
                if a == C_ZERO {
                    continue;
                }
                for c in 0..d {
                    out.data[r * d + c] += a * rhs.data[k * d + c];
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim);
        let mut out = self.clone();
        for (o, r) in out.data.iter_mut().zip(&rhs.data) {
            *o += r;
        }
        out
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim);
        let mut out = self.clone();
        for (o, r) in out.data.iter_mut().zip(&rhs.data) {
            *o -= r;
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> Matrix {
        let mut out = self.clone();
        for o in out.data.iter_mut() {
            *o *= factor;
        }
        out
    }

    pub fn adjoint(&self) -> Matrix {
        let d = self.dim;
        Matrix::from_fn(d, |r, c| self.data[c * d + r].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    /// Kronecker product; `self` supplies the most significant index block.
    pub fn kron(&self, rhs: &Matrix) -> Matrix {
        let (da, db) = (self.dim, rhs.dim);
        let d = da * db;
        let mut out = Matrix::zeros(d);
        for ra in 0..da {
            for ca in 0..da {
                let a = self.data[ra * da + ca];
                if a == C_ZERO {
                    continue;
                }
                for rb in 0..db {
                    for cb in 0..db {
                        out.data[(ra * db + rb) * d + (ca * db + cb)] = a * rhs.data[rb * db + cb];
                    }
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.dim, v.len());
        let d = self.dim;
        (0..d)
            .map(|r| {
                self.data[r * d..(r + 1) * d]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// `U · self · U†`.
    pub fn conjugated_by(&self, u: &Matrix) -> Matrix {
        u.mul(self).mul(&u.adjoint())
    }

    pub fn max_abs_diff(&self, rhs: &Matrix) -> f64 {
        assert_eq!(self.dim, rhs.dim);
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry of `U†U − I`.
    pub fn unitarity_deviation(&self) -> f64 {
        self.adjoint()
            .mul(self)
            .max_abs_diff(&Matrix::identity(self.dim))
    }

    /// Largest entry of `A − A†`.
    pub fn hermiticity_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations,
    /// returned in ascending order.
    pub fn eigenvalues_hermitian(&self) -> Vec<f64> {
        let d = self.dim;
        let mut a = self.clone();
        let scale = 1.0 + self.frobenius_norm();
        for _sweep in 0..100 {
            let mut off = 0.0f64;
            for p in 0..d {
                for q in (p + 1)..d {
                    off += a.data[p * d + q].norm_sqr();
                }
            }
            if off.sqrt() <= 1e-14 * scale {
                break;
            }
            for p in 0..d {
                for q in (p + 1)..d {
                    let apq = a.data[p * d + q];
                    let abs = apq.norm();
                    if abs <= 1e-300 {
                        continue;
                    }
                    // Phase-rotate column/row q so the (p, q) entry is real.
                    let w = apq / abs;
                    let wc = w.conj();
                    for r in 0..d {
                        a.data[r * d + q] *= wc;
                    }
                    for c in 0..d {
                        a.data[q * d + c] *= w;
                    }
                    let b = a.data[p * d + q].re;
                    if b.abs() <= 1e-300 {
                        continue;
                    }
                    let app = a.data[p * d + p].re;
                    let aqq = a.data[q * d + q].re;
                    let tau = (aqq - app) / (2.0 * b);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    for r in 0..d {
                        let tp = a.data[r * d + p];
                        let tq = a.data[r * d + q];
                        a.data[r * d + p] = c * tp - s * tq;
                        a.data[r * d + q] = s * tp + c * tq;
                    }
                    for col in 0..d {
                        let tp = a.data[p * d + col];
                        let tq = a.data[q * d + col];
                        a.data[p * d + col] = c * tp - s * tq;
                        a.data[q * d + col] = s * tp + c * tq;
                    }
                }
            }
        }
        let mut eig: Vec<f64> = (0..d).map(|i| a.data[i * d + i].re).collect();
        eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
        eig
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.dim + c]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix({}x{})", self.dim, self.dim)
    }
}

/// Plain-text grid of complex entries, meant for debug dumps.
impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.dim {
            for c in 0..self.dim {
                let z = self[(r, c)];
                if c > 0 {
                    write!(f, "  ")?;
                }
                write!(f, "{:+.4}{:+.4}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_multiplication() {
        let id = Matrix::identity(4);
        let m = Matrix::from_fn(4, |r, cidx| c(r as f64, cidx as f64));
        assert_eq!(id.mul(&m).max_abs_diff(&m), 0.0);
        assert_eq!(m.mul(&id).max_abs_diff(&m), 0.0);
    }

    #[test]
    fn kron_dimensions_and_entries() {
        let x = Matrix::from_fn(2, |r, cidx| if r != cidx { C_ONE } else { C_ZERO });
        let z = Matrix::from_fn(2, |r, cidx| {
            if r == cidx {
                c(if r == 0 { 1.0 } else { -1.0 }, 0.0)
            } else {
                C_ZERO
            }
        });
        let xz = x.kron(&z);
        assert_eq!(xz.dim(), 4);
        // X⊗Z maps |10⟩ -> |00⟩ with +1 and |11⟩ -> |01⟩ with −1.
        assert_eq!(xz[(0, 2)], c(1.0, 0.0));
        assert_eq!(xz[(1, 3)], c(-1.0, 0.0));
    }

    #[test]
    fn jacobi_diagonal_is_fixed_point() {
        let m = Matrix::from_fn(3, |r, cidx| {
            if r == cidx {
                c(r as f64 + 1.0, 0.0)
            } else {
                C_ZERO
            }
        });
        let eig = m.eigenvalues_hermitian();
        assert!((eig[0] - 1.0).abs() < 1e-12);
        assert!((eig[1] - 2.0).abs() < 1e-12);
        assert!((eig[2] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn jacobi_complex_two_by_two() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let mut m = Matrix::zeros(2);
        m[(0, 0)] = c(2.0, 0.0);
        m[(0, 1)] = c(0.0, 1.0);
        m[(1, 0)] = c(0.0, -1.0);
        m[(1, 1)] = c(2.0, 0.0);
        let eig = m.eigenvalues_hermitian();
        assert!((eig[0] - 1.0).abs() < 1e-12);
        assert!((eig[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn jacobi_matches_power_sums() {
        // Moments tr(A^k) are an implementation-independent oracle.
        let mut m = Matrix::zeros(5);
        let mut seed = 12345u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) as f64) / (u32::MAX as f64) - 0.5
        };
        for r in 0..5 {
            for cidx in 0..5 {
                m[(r, cidx)] = c(next(), next());
            }
        }
        let h = m.add(&m.adjoint()).scale(c(0.5, 0.0));
        let eig = h.eigenvalues_hermitian();
        let mut pow = Matrix::identity(5);
        for k in 1..=4 {
            pow = pow.mul(&h);
            let moment: f64 = eig.iter().map(|l| l.powi(k)).sum();
            assert!(
                (pow.trace().re - moment).abs() < 1e-9,
                "moment {k} mismatch"
            );
        }
    }
}
