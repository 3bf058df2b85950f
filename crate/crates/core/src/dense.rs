//! Exact state-vector and density-matrix simulation for small registers.
//!
//! Basis ordering: qubit 1 is the most significant bit of a
//! computational-basis index, so `|q1 q2 … qn⟩` has index
//! `Σ qk · 2^(n-k)`. `|1⟩` is the −1 eigenvector of Z.

use crate::linalg::{Matrix, C_ONE, C_ZERO};
use crate::{clamp_unit, Error, Result, EIGENVALUE_FLOOR, MAX_QUBITS, STATE_TOL};
use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

/// Value of qubit `qubit` in basis index `index` of an `n`-qubit register.
pub(crate) fn basis_bit(n: usize, index: usize, qubit: usize) -> bool {
    (index >> (n - qubit)) & 1 == 1
}

fn check_qubit_count(n: usize) -> Result<usize> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::UnsupportedQubitCount(n));
    }
    Ok(1usize << n)
}

fn check_targets(n: usize, targets: &[usize]) -> Result<()> {
    if targets.is_empty() {
        return Err(Error::EmptyKeep);
    }
    for (i, &q) in targets.iter().enumerate() {
        if q == 0 || q > n {
            return Err(Error::QubitOutOfRange { qubit: q, n });
        }
        if targets[..i].contains(&q) {
            return Err(Error::DuplicateQubit(q));
        }
    }
    Ok(())
}

/// Embeds a k-qubit operator into an n-qubit register; `targets[j]` is the
/// qubit acted on by the operator's (j+1)-th tensor factor.
pub fn embed(op: &Matrix, n: usize, targets: &[usize]) -> Result<Matrix> {
    check_qubit_count(n)?;
    check_targets(n, targets)?;
    let k = targets.len();
    if op.dim() != 1 << k {
        return Err(Error::DimensionMismatch(op.dim(), 1 << k));
    }
    let dim = 1usize << n;
    let nontarget_mask: usize = (0..n)
        .map(|pos| 1usize << pos)
        .filter(|mask| !targets.iter().any(|&q| 1usize << (n - q) == *mask))
        .sum();
    let sub_index = |full: usize| -> usize {
        targets
            .iter()
            .enumerate()
            .map(|(j, &q)| ((full >> (n - q)) & 1) << (k - 1 - j))
            .sum()
    };
    let mut out = Matrix::zeros(dim);
    for a in 0..dim {
        let sa = sub_index(a);
        for b in 0..dim {
            if a & nontarget_mask != b & nontarget_mask {
                continue;
            }
            out[(a, b)] = op[(sa, sub_index(b))];
        }
    }
    Ok(out)
}

fn ensure_unitary(u: &Matrix) -> Result<()> {
    let dev = u.unitarity_deviation();
    if dev > STATE_TOL {
        return Err(Error::NotUnitary(dev));
    }
    Ok(())
}

/// Partial trace at the raw matrix level; `keep` must be strictly ascending.
pub(crate) fn partial_trace_matrix(m: &Matrix, n: usize, keep: &[usize]) -> Result<Matrix> {
    if keep.is_empty() {
        return Err(Error::EmptyKeep);
    }
    if !keep.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::KeepNotAscending);
    }
    check_targets(n, keep)?;
    let dim = 1usize << n;
    if m.dim() != dim {
        return Err(Error::DimensionMismatch(m.dim(), dim));
    }
    let k = keep.len();
    let keep_mask: usize = keep.iter().map(|&q| 1usize << (n - q)).sum();
    let env_mask = (dim - 1) & !keep_mask;
    let kept_index = |full: usize| -> usize {
        keep.iter()
            .enumerate()
            .map(|(j, &q)| ((full >> (n - q)) & 1) << (k - 1 - j))
            .sum()
    };
    let mut out = Matrix::zeros(1 << k);
    for a in 0..dim {
        let ka = kept_index(a);
        for b in 0..dim {
            if a & env_mask != b & env_mask {
                continue;
            }
            out[(ka, kept_index(b))] += m[(a, b)];
        }
    }
    Ok(out)
}

/// The six cardinal single-qubit states: Z, X, and Y eigenstates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cardinal {
    Zero,
    One,
    Plus,
    Minus,
    PlusI,
    MinusI,
}

impl Cardinal {
    pub const ALL: [Cardinal; 6] = [
        Cardinal::Zero,
        Cardinal::One,
        Cardinal::Plus,
        Cardinal::Minus,
        Cardinal::PlusI,
        Cardinal::MinusI,
    ];

    /// Amplitudes on `(|0⟩, |1⟩)`.
    pub fn amplitudes(self) -> (Complex64, Complex64) {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        match self {
            Cardinal::Zero => (C_ONE, C_ZERO),
            Cardinal::One => (C_ZERO, C_ONE),
            Cardinal::Plus => (h, h),
            Cardinal::Minus => (h, -h),
            Cardinal::PlusI => (h, Complex64::new(0.0, FRAC_1_SQRT_2)),
            Cardinal::MinusI => (h, Complex64::new(0.0, -FRAC_1_SQRT_2)),
        }
    }

    pub fn state(self) -> StateVector {
        let (a, b) = self.amplitudes();
        StateVector::from_amplitudes(1, vec![a, b]).expect("cardinal states are normalized")
    }
}

/// Two-qubit maximally entangled basis states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PhiPlus,
        BellState::PhiMinus,
        BellState::PsiPlus,
        BellState::PsiMinus,
    ];

    /// `(data bit, reference bit, amplitude)` entries of the state.
    fn terms(self) -> [(usize, usize, Complex64); 2] {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        match self {
            BellState::PhiPlus => [(0, 0, h), (1, 1, h)],
            BellState::PhiMinus => [(0, 0, h), (1, 1, -h)],
            BellState::PsiPlus => [(0, 1, h), (1, 0, h)],
            BellState::PsiMinus => [(0, 1, h), (1, 0, -h)],
        }
    }

    /// The plain two-qubit state vector (qubit 1 = data, qubit 2 = reference).
    pub fn state(self) -> StateVector {
        let mut amps = vec![C_ZERO; 4];
        for (a, b, c) in self.terms() {
            amps[(a << 1) | b] = c;
        }
        StateVector::from_amplitudes(2, amps).expect("Bell states are normalized")
    }
}

/// A pure n-qubit state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        let dim = check_qubit_count(n)?;
        if amps.len() != dim {
            return Err(Error::DimensionMismatch(amps.len(), dim));
        }
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > STATE_TOL {
            return Err(Error::Numeric(format!(
                "state norm² is {norm_sq}, expected 1"
            )));
        }
        Ok(StateVector { n, amps })
    }

    /// Computational-basis state with the given index.
    pub fn computational(n: usize, index: usize) -> Result<Self> {
        let dim = check_qubit_count(n)?;
        if index >= dim {
            return Err(Error::DimensionMismatch(index, dim));
        }
        let mut amps = vec![C_ZERO; dim];
        amps[index] = C_ONE;
        Ok(StateVector { n, amps })
    }

    /// Product state: `data_qubit` carries `data`, qubits in `ones` start in
    /// `|1⟩`, everything else in `|0⟩`.
    pub fn embed_data(
        n: usize,
        data_qubit: usize,
        data: Cardinal,
        ones: &[usize],
    ) -> Result<Self> {
        let dim = check_qubit_count(n)?;
        check_targets(n, &[data_qubit])?;
        check_targets(n, ones)?;
        if ones.contains(&data_qubit) {
            return Err(Error::DuplicateQubit(data_qubit));
        }
        let base: usize = ones.iter().map(|&q| 1usize << (n - q)).sum();
        let (a0, a1) = data.amplitudes();
        let mut amps = vec![C_ZERO; dim];
        amps[base] = a0;
        amps[base | (1 << (n - data_qubit))] = a1;
        StateVector::from_amplitudes(n, amps)
    }

    /// Maximally entangled state between `data_qubit` and an appended
    /// reference qubit (qubit `n + 1`); qubits in `ones` start in `|1⟩`,
    /// the rest in `|0⟩`.
    pub fn bell_with_reference(
        n: usize,
        data_qubit: usize,
        ones: &[usize],
        variant: BellState,
    ) -> Result<Self> {
        check_qubit_count(n + 1)?;
        check_targets(n, &[data_qubit])?;
        if !ones.is_empty() {
            check_targets(n, ones)?;
        }
        if ones.contains(&data_qubit) {
            return Err(Error::DuplicateQubit(data_qubit));
        }
        let total = n + 1;
        let base: usize = ones.iter().map(|&q| 1usize << (total - q)).sum();
        let mut amps = vec![C_ZERO; 1 << total];
        for (d, r, c) in variant.terms() {
            amps[base | (d << (total - data_qubit)) | r] = c;
        }
        StateVector::from_amplitudes(total, amps)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n != other.n {
            return Err(Error::QubitCountMismatch(self.n, other.n));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Applies a unitary on the listed target qubits.
    pub fn apply_unitary(&self, u: &Matrix, targets: &[usize]) -> Result<StateVector> {
        ensure_unitary(u)?;
        let full = embed(u, self.n, targets)?;
        Ok(StateVector {
            n: self.n,
            amps: full.matvec(&self.amps),
        })
    }

    pub fn to_density(&self) -> DensityMatrix {
        let d = self.amps.len();
        let m = Matrix::from_fn(d, |r, c| self.amps[r] * self.amps[c].conj());
        DensityMatrix { n: self.n, m }
    }
}

/// A (possibly mixed) n-qubit state.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    m: Matrix,
}

impl DensityMatrix {
    /// Wraps a matrix after checking dimension, Hermiticity, and trace.
    /// Positivity is only checked by [`DensityMatrix::validate`].
    pub fn from_matrix(n: usize, m: Matrix) -> Result<Self> {
        let dim = check_qubit_count(n)?;
        if m.dim() != dim {
            return Err(Error::DimensionMismatch(m.dim(), dim));
        }
        let herm = m.hermiticity_deviation();
        if herm > STATE_TOL {
            return Err(Error::Numeric(format!(
                "density matrix deviates from Hermitian by {herm:.3e}"
            )));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::Numeric(format!("density matrix trace is {tr}")));
        }
        Ok(DensityMatrix { n, m })
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        psi.to_density()
    }

    pub fn maximally_mixed(n: usize) -> Result<Self> {
        let dim = check_qubit_count(n)?;
        let m = Matrix::identity(dim).scale(Complex64::new(1.0 / dim as f64, 0.0));
        Ok(DensityMatrix { n, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    /// Full invariant check: Hermitian and unit trace within `1e-10`,
    /// eigenvalues above the round-off floor.
    pub fn validate(&self) -> Result<()> {
        let herm = self.m.hermiticity_deviation();
        if herm > STATE_TOL {
            return Err(Error::Numeric(format!(
                "Hermiticity deviation {herm:.3e}"
            )));
        }
        let tr = self.m.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::Numeric(format!("trace is {tr}")));
        }
        let eig = self.m.eigenvalues_hermitian();
        if let Some(min) = eig.first() {
            if *min < EIGENVALUE_FLOOR {
                return Err(Error::Numeric(format!("negative eigenvalue {min:.3e}")));
            }
        }
        Ok(())
    }

    pub fn apply_unitary(&self, u: &Matrix, targets: &[usize]) -> Result<DensityMatrix> {
        ensure_unitary(u)?;
        let full = embed(u, self.n, targets)?;
        Ok(DensityMatrix {
            n: self.n,
            m: self.m.conjugated_by(&full),
        })
    }

    /// `ρ → Σ K ρ K†`.
    pub fn apply_channel(&self, ch: &KrausChannel) -> Result<DensityMatrix> {
        if ch.n != self.n {
            return Err(Error::QubitCountMismatch(ch.n, self.n));
        }
        Ok(DensityMatrix {
            n: self.n,
            m: ch.apply_to_matrix(&self.m),
        })
    }

    /// Reduced state on `keep` (strictly ascending qubit list).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let m = partial_trace_matrix(&self.m, self.n, keep)?;
        Ok(DensityMatrix { n: keep.len(), m })
    }

    /// Real expectation value `tr(op·ρ)` of a Hermitian observable.
    pub fn expectation(&self, op: &Matrix) -> Result<f64> {
        if op.dim() != self.m.dim() {
            return Err(Error::DimensionMismatch(op.dim(), self.m.dim()));
        }
        let val = op.mul(&self.m).trace();
        if val.im.abs() > 1e-8 {
            return Err(Error::Numeric(format!(
                "expectation has imaginary part {:.3e}",
                val.im
            )));
        }
        Ok(val.re)
    }
}

/// Pure-state fidelity `⟨ψ|ρ|ψ⟩`.
pub fn fidelity_pure(psi: &StateVector, rho: &DensityMatrix) -> Result<f64> {
    if psi.n != rho.n {
        return Err(Error::QubitCountMismatch(psi.n, rho.n));
    }
    let mut val = C_ZERO;
    let d = psi.amps.len();
    for a in 0..d {
        for b in 0..d {
            val += psi.amps[a].conj() * rho.m[(a, b)] * psi.amps[b];
        }
    }
    if val.im.abs() > 1e-8 {
        return Err(Error::Numeric(format!(
            "fidelity has imaginary part {:.3e}",
            val.im
        )));
    }
    clamp_unit(val.re, STATE_TOL)
}

/// A completely positive trace-preserving map in operator-sum form.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    n: usize,
    ops: Vec<Matrix>,
}

impl KrausChannel {
    pub fn new(n: usize, ops: Vec<Matrix>) -> Result<Self> {
        let dim = check_qubit_count(n)?;
        if ops.is_empty() {
            return Err(Error::IncompleteKraus(1.0));
        }
        for op in &ops {
            if op.dim() != dim {
                return Err(Error::DimensionMismatch(op.dim(), dim));
            }
        }
        let mut sum = Matrix::zeros(dim);
        for op in &ops {
            sum = sum.add(&op.adjoint().mul(op));
        }
        let dev = sum.max_abs_diff(&Matrix::identity(dim));
        if dev > STATE_TOL {
            return Err(Error::IncompleteKraus(dev));
        }
        Ok(KrausChannel { n, ops })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let dim = check_qubit_count(n)?;
        Ok(KrausChannel {
            n,
            ops: vec![Matrix::identity(dim)],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn operators(&self) -> &[Matrix] {
        &self.ops
    }

    /// Linear extension of the map to arbitrary matrices.
    pub fn apply_to_matrix(&self, m: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(m.dim());
        for k in &self.ops {
            out = out.add(&m.conjugated_by(k));
        }
        out
    }

    /// `self ∘ other`: applies `other` first.
    pub fn compose(&self, other: &KrausChannel) -> Result<KrausChannel> {
        if self.n != other.n {
            return Err(Error::QubitCountMismatch(self.n, other.n));
        }
        let mut ops = Vec::with_capacity(self.ops.len() * other.ops.len());
        for a in &self.ops {
            for b in &other.ops {
                ops.push(a.mul(b));
            }
        }
        KrausChannel::new(self.n, ops)
    }

    /// Entanglement fidelity `Σ |tr K|² / d²` with respect to a maximally
    /// entangled input on the full register.
    pub fn entanglement_fidelity(&self) -> f64 {
        let d = (1usize << self.n) as f64;
        self.ops.iter().map(|k| k.trace().norm_sqr()).sum::<f64>() / (d * d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::depolarize_qubit;
    use crate::pauli::Pauli;
    use crate::testutil;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_unitary_leaves_state() {
        let psi = StateVector::computational(3, 5).unwrap();
        let out = psi.apply_unitary(&Matrix::identity(2), &[2]).unwrap();
        assert_eq!(out, psi);
    }

    #[test]
    fn bit_flip_on_second_qubit() {
        // |00000⟩ → |01000⟩: qubit 2 occupies the 2^3 position.
        let psi = StateVector::computational(5, 0).unwrap();
        let out = psi
            .apply_unitary(&Pauli::X.matrix(), &[2])
            .unwrap();
        assert_eq!(out.amplitudes()[0b01000], C_ONE);
    }

    #[test]
    fn unitary_then_adjoint_restores() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u = testutil::random_unitary(8, &mut rng);
        let psi = testutil::random_state(3, &mut rng);
        let there = psi.apply_unitary(&u, &[1, 2, 3]).unwrap();
        let back = there.apply_unitary(&u.adjoint(), &[1, 2, 3]).unwrap();
        let overlap = psi.inner(&back).unwrap().norm();
        assert!((overlap - 1.0).abs() < 1e-10);
    }

    #[test]
    fn non_unitary_rejected() {
        let mut m = Matrix::identity(2);
        m[(0, 0)] = Complex64::new(2.0, 0.0);
        let psi = StateVector::computational(2, 0).unwrap();
        assert!(matches!(
            psi.apply_unitary(&m, &[1]),
            Err(Error::NotUnitary(_))
        ));
    }

    #[test]
    fn bad_targets_rejected() {
        let psi = StateVector::computational(2, 0).unwrap();
        assert!(psi.apply_unitary(&Matrix::identity(2), &[3]).is_err());
        assert!(psi
            .apply_unitary(&Matrix::identity(4), &[1, 1])
            .is_err());
    }

    #[test]
    fn identity_channel_preserves_state() {
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        let out = rho.apply_channel(&KrausChannel::identity(2).unwrap()).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn full_depolarization_gives_maximally_mixed() {
        let ch = depolarize_qubit(1, 1, 1.0)
            .unwrap()
            .to_kraus()
            .unwrap();
        let rho = Cardinal::Plus.state().to_density();
        let out = rho.apply_channel(&ch).unwrap();
        let mixed = DensityMatrix::maximally_mixed(1).unwrap();
        assert!(out.matrix().max_abs_diff(mixed.matrix()) < 1e-12);
    }

    #[test]
    fn composed_depolarizations_merge() {
        // Two depolarizations of strength p equal one of strength p(2−p).
        let p = 0.3;
        let one = depolarize_qubit(1, 1, p).unwrap().to_kraus().unwrap();
        let twice = one.compose(&one).unwrap();
        let merged = depolarize_qubit(1, 1, p * (2.0 - p))
            .unwrap()
            .to_kraus()
            .unwrap();
        // Compare as maps on a matrix basis.
        for idx in 0..4 {
            let basis = Matrix::from_fn(2, |r, c| {
                if (r, c) == (idx / 2, idx % 2) {
                    C_ONE
                } else {
                    C_ZERO
                }
            });
            let a = twice.apply_to_matrix(&basis);
            let b = merged.apply_to_matrix(&basis);
            assert!(a.max_abs_diff(&b) < 1e-12);
        }
    }

    #[test]
    fn partial_trace_of_product_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = testutil::random_density(1, &mut rng);
        let b = testutil::random_density(1, &mut rng);
        let joint = DensityMatrix::from_matrix(2, a.matrix().kron(b.matrix())).unwrap();
        let reduced = joint.partial_trace(&[1]).unwrap();
        assert!(reduced.matrix().max_abs_diff(a.matrix()) < 1e-12);
    }

    #[test]
    fn partial_trace_of_bell_is_mixed() {
        let bell = BellState::PhiPlus.state().to_density();
        for keep in [[1], [2]] {
            let reduced = bell.partial_trace(&keep).unwrap();
            let mixed = DensityMatrix::maximally_mixed(1).unwrap();
            assert!(reduced.matrix().max_abs_diff(mixed.matrix()) < 1e-12);
        }
    }

    #[test]
    fn partial_trace_preserves_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..5 {
            let rho = testutil::random_density(3, &mut rng);
            let reduced = rho.partial_trace(&[2, 3]).unwrap();
            assert!((reduced.matrix().trace().re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_keep_rejected() {
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        assert!(matches!(rho.partial_trace(&[]), Err(Error::EmptyKeep)));
    }

    #[test]
    fn fidelity_of_matching_pure_state_is_one() {
        let psi = Cardinal::PlusI.state();
        assert!((fidelity_pure(&psi, &psi.to_density()).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn fidelity_against_maximally_mixed_is_half() {
        let mixed = DensityMatrix::maximally_mixed(1).unwrap();
        for c in Cardinal::ALL {
            assert!((fidelity_pure(&c.state(), &mixed).unwrap() - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn fidelity_under_depolarization() {
        // |0⟩ through depolarization p has fidelity 1 − p/2.
        let p = 0.42;
        let ch = depolarize_qubit(1, 1, p).unwrap().to_kraus().unwrap();
        let rho = Cardinal::Zero.state().to_density().apply_channel(&ch).unwrap();
        let f = fidelity_pure(&Cardinal::Zero.state(), &rho).unwrap();
        assert!((f - (1.0 - p / 2.0)).abs() < 1e-12);
    }

    #[test]
    fn bell_with_reference_reduces_to_mixed() {
        let psi = StateVector::bell_with_reference(5, 2, &[1, 3, 4, 5], BellState::PhiPlus).unwrap();
        assert_eq!(psi.n(), 6);
        let norm: f64 = psi.amplitudes().iter().map(|a| a.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        let rho = psi.to_density();
        let mixed = DensityMatrix::maximally_mixed(1).unwrap();
        for keep in [[2], [6]] {
            let reduced = rho.partial_trace(&keep).unwrap();
            assert!(reduced.matrix().max_abs_diff(mixed.matrix()) < 1e-12);
        }
    }

    #[test]
    fn channels_preserve_density_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let rho = testutil::random_density(2, &mut rng);
            let ch = testutil::random_channel(2, &mut rng);
            let out = rho.apply_channel(&ch).unwrap();
            out.validate().unwrap();
        }
    }

    #[test]
    fn partial_trace_commutes_with_kept_qubit_channels() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..5 {
            let rho = testutil::random_density(3, &mut rng);
            let local = testutil::random_channel(1, &mut rng);
            let embedded = KrausChannel::new(
                3,
                local
                    .operators()
                    .iter()
                    .map(|k| embed(k, 3, &[2]).unwrap())
                    .collect(),
            )
            .unwrap();
            let a = rho.apply_channel(&embedded).unwrap().partial_trace(&[2]).unwrap();
            let b = rho.partial_trace(&[2]).unwrap().apply_channel(&local).unwrap();
            assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-10);
        }
    }

    #[test]
    fn kraus_completeness_enforced() {
        let half = Matrix::identity(2).scale(Complex64::new(0.5, 0.0));
        assert!(matches!(
            KrausChannel::new(1, vec![half]),
            Err(Error::IncompleteKraus(_))
        ));
    }

    #[test]
    fn density_validation_catches_bad_trace() {
        let m = Matrix::identity(2);
        assert!(DensityMatrix::from_matrix(1, m).is_err());
    }
}
