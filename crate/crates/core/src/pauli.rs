//! Exact symbolic algebra of n-qubit Pauli products with phase tracking.
//!
//! A [`PauliString`] is stored in the canonical form `i^k · X^x · Z^z` where
//! `x` and `z` are bitmasks (bit `k - 1` is qubit `k`) and the phase exponent
//! tracks every factor of `i` produced by reordering. A qubit with both the
//! X and Z bit set denotes Y, since `Y = i·X·Z`; the extra `i` lives in the
//! tracked phase, which keeps the symbolic and dense paths in exact agreement.

use crate::linalg::{Matrix, C_ONE};
use crate::{Error, Result, MAX_QUBITS};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Fourth roots of unity, represented as the exponent of `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    One,
    I,
    MinusOne,
    MinusI,
}

impl Phase {
    pub fn exponent(self) -> u8 {
        match self {
            Phase::One => 0,
            Phase::I => 1,
            Phase::MinusOne => 2,
            Phase::MinusI => 3,
        }
    }

    pub fn from_exponent(k: u8) -> Self {
        match k % 4 {
            0 => Phase::One,
            1 => Phase::I,
            2 => Phase::MinusOne,
            _ => Phase::MinusI,
        }
    }

    pub fn inverse(self) -> Phase {
        Phase::from_exponent(4 - self.exponent())
    }

    pub fn value(self) -> Complex64 {
        match self {
            Phase::One => Complex64::new(1.0, 0.0),
            Phase::I => Complex64::new(0.0, 1.0),
            Phase::MinusOne => Complex64::new(-1.0, 0.0),
            Phase::MinusI => Complex64::new(0.0, -1.0),
        }
    }

    /// True for ±1, the phases a Hermitian Pauli product may carry.
    pub fn is_real(self) -> bool {
        matches!(self, Phase::One | Phase::MinusOne)
    }

    fn token(self) -> &'static str {
        match self {
            Phase::One => "+",
            Phase::I => "+i",
            Phase::MinusOne => "-",
            Phase::MinusI => "-i",
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;

    // Multiplying powers of i adds their exponents mod 4.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, other: Phase) -> Phase {
        Phase::from_exponent(self.exponent() + other.exponent())
    }
}

/// Single-qubit Pauli label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn x_bit(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    pub fn z_bit(self) -> bool {
        matches!(self, Pauli::Z | Pauli::Y)
    }

    /// Group product of labels, ignoring phase.
    pub fn mul_label(self, other: Pauli) -> Pauli {
        Pauli::from_bits(self.x_bit() ^ other.x_bit(), self.z_bit() ^ other.z_bit())
    }

    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// The exact 2×2 matrix (including the `i` in Y).
    pub fn matrix(self) -> Matrix {
        let mut m = Matrix::zeros(2);
        match self {
            Pauli::I => {
                m[(0, 0)] = C_ONE;
                m[(1, 1)] = C_ONE;
            }
            Pauli::X => {
                m[(0, 1)] = C_ONE;
                m[(1, 0)] = C_ONE;
            }
            Pauli::Y => {
                m[(0, 1)] = Complex64::new(0.0, -1.0);
                m[(1, 0)] = Complex64::new(0.0, 1.0);
            }
            Pauli::Z => {
                m[(0, 0)] = C_ONE;
                m[(1, 1)] = Complex64::new(-1.0, 0.0);
            }
        }
        m
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Polarization axis for transfer-coefficient measurements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn pauli(self) -> Pauli {
        match self {
            Axis::X => Pauli::X,
            Axis::Y => Pauli::Y,
            Axis::Z => Pauli::Z,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        };
        write!(f, "{s}")
    }
}

/// An n-qubit Pauli product with exact phase.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x_bits: u16,
    z_bits: u16,
    phase: Phase,
}

impl PauliString {
    pub fn new(n: usize, x_bits: u16, z_bits: u16, phase: Phase) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::UnsupportedQubitCount(n));
        }
        let mask = (1u16 << n) - 1;
        if x_bits & !mask != 0 || z_bits & !mask != 0 {
            return Err(Error::QubitOutOfRange {
                qubit: 16 - (x_bits | z_bits).leading_zeros() as usize,
                n,
            });
        }
        Ok(PauliString {
            n,
            x_bits,
            z_bits,
            phase,
        })
    }

    pub fn identity(n: usize) -> Self {
        PauliString::new(n, 0, 0, Phase::One).expect("valid qubit count")
    }

    /// A single Pauli on one qubit, identity elsewhere.
    pub fn single(n: usize, qubit: usize, label: Pauli) -> Result<Self> {
        if qubit == 0 || qubit > n {
            return Err(Error::QubitOutOfRange { qubit, n });
        }
        let bit = 1u16 << (qubit - 1);
        let (x, z) = (label.x_bit(), label.z_bit());
        let phase = if label == Pauli::Y { Phase::I } else { Phase::One };
        PauliString::new(
            n,
            if x { bit } else { 0 },
            if z { bit } else { 0 },
            phase,
        )
    }

    /// Product of single-qubit labels on distinct qubits.
    pub fn from_ops(n: usize, ops: &[(usize, Pauli)]) -> Result<Self> {
        let mut acc = PauliString::identity(n);
        for &(qubit, label) in ops {
            acc = acc.mul(&PauliString::single(n, qubit, label)?)?;
        }
        Ok(acc)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_bits(&self) -> u16 {
        self.x_bits
    }

    pub fn z_bits(&self) -> u16 {
        self.z_bits
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    /// The label on one qubit, ignoring the overall phase.
    pub fn label_at(&self, qubit: usize) -> Pauli {
        let bit = 1u16 << (qubit - 1);
        Pauli::from_bits(self.x_bits & bit != 0, self.z_bits & bit != 0)
    }

    pub fn is_identity(&self) -> bool {
        self.x_bits == 0 && self.z_bits == 0 && self.phase == Phase::One
    }

    /// True when the X/Z pattern is trivial regardless of phase.
    pub fn has_identity_pattern(&self) -> bool {
        self.x_bits == 0 && self.z_bits == 0
    }

    /// True iff the operator equals its own adjoint. With Y stored as
    /// `i·X·Z`, a product with an odd number of Y factors is Hermitian
    /// exactly when its tracked phase is ±i.
    pub fn is_hermitian(&self) -> bool {
        let y_count = (self.x_bits & self.z_bits).count_ones() as u8;
        self.phase.exponent() % 2 == y_count % 2
    }

    /// The Hermitian representative of a pattern with positive display
    /// phase: `i^(#Y mod 2) · X^x · Z^z`.
    pub fn hermitian_pattern(n: usize, x_bits: u16, z_bits: u16) -> Result<Self> {
        let y_count = ((x_bits & z_bits).count_ones() % 2) as u8;
        PauliString::new(n, x_bits, z_bits, Phase::from_exponent(y_count))
    }

    /// Index of the X/Z pattern in `0..4^n`, ignoring phase.
    pub fn pattern_index(&self) -> usize {
        ((self.x_bits as usize) << self.n) | self.z_bits as usize
    }

    pub fn from_pattern_index(n: usize, index: usize) -> Result<Self> {
        let mask = (1usize << n) - 1;
        PauliString::new(n, (index >> n) as u16, (index & mask) as u16, Phase::One)
    }

    /// Operator product with exact phase.
    pub fn mul(&self, other: &PauliString) -> Result<PauliString> {
        if self.n != other.n {
            return Err(Error::QubitCountMismatch(self.n, other.n));
        }
        // Moving Z^z1 across X^x2 flips a sign per overlapping qubit.
        let swaps = (self.z_bits & other.x_bits).count_ones() as u8;
        let k = self.phase.exponent() + other.phase.exponent() + 2 * (swaps & 1);
        Ok(PauliString {
            n: self.n,
            x_bits: self.x_bits ^ other.x_bits,
            z_bits: self.z_bits ^ other.z_bits,
            phase: Phase::from_exponent(k),
        })
    }

    /// True iff `self·other == other·self`, by symplectic inner product parity.
    pub fn commutes_with(&self, other: &PauliString) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::QubitCountMismatch(self.n, other.n));
        }
        let overlap = (self.x_bits & other.z_bits).count_ones()
            + (self.z_bits & other.x_bits).count_ones();
        Ok(overlap.is_multiple_of(2))
    }

    /// Number of qubits on which the product acts non-trivially.
    pub fn weight(&self) -> usize {
        (self.x_bits | self.z_bits).count_ones() as usize
    }

    /// The exact `2^n × 2^n` tensor-product matrix including phase.
    pub fn to_matrix(&self) -> Matrix {
        let mut m = Matrix::from_fn(1, |_, _| C_ONE);
        for qubit in 1..=self.n {
            let bit = 1u16 << (qubit - 1);
            let x = self.x_bits & bit != 0;
            let z = self.z_bits & bit != 0;
            // Canonical factor is X^x·Z^z, not Y; the Y phase is tracked globally.
            let factor = match (x, z) {
                (false, false) => Matrix::identity(2),
                (true, false) => Pauli::X.matrix(),
                (false, true) => Pauli::Z.matrix(),
                (true, true) => {
                    let mut f = Matrix::zeros(2);
                    f[(0, 1)] = Complex64::new(-1.0, 0.0);
                    f[(1, 0)] = C_ONE;
                    f
                }
            };
            m = m.kron(&factor);
        }
        m.scale(self.phase.value())
    }

    /// Parses the rendering produced by [`fmt::Display`], e.g. `+X1·Z2·X3·Z4`.
    pub fn parse_with_n(s: &str, n: usize) -> Result<Self> {
        let err = |reason: &str| Error::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let t = s.trim();
        let mut rest = t;
        let mut display_exp = 0u8;
        if let Some(r) = rest.strip_prefix('-') {
            display_exp = 2;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        }
        if let Some(r) = rest.strip_prefix('i') {
            display_exp += 1;
            rest = r;
        }
        if rest.is_empty() {
            return Err(err("missing Pauli factors"));
        }
        let mut x_bits = 0u16;
        let mut z_bits = 0u16;
        let mut y_count = 0u8;
        if rest != "I" {
            for factor in rest.split('·') {
                let mut chars = factor.chars();
                let letter = chars.next().ok_or_else(|| err("empty factor"))?;
                let qubit: usize = chars
                    .as_str()
                    .parse()
                    .map_err(|_| err("factor needs a qubit number"))?;
                if qubit == 0 || qubit > n {
                    return Err(Error::QubitOutOfRange { qubit, n });
                }
                let bit = 1u16 << (qubit - 1);
                if (x_bits | z_bits) & bit != 0 {
                    return Err(err("duplicate qubit in factor list"));
                }
                match letter {
                    'X' => x_bits |= bit,
                    'Z' => z_bits |= bit,
                    'Y' => {
                        x_bits |= bit;
                        z_bits |= bit;
                        y_count += 1;
                    }
                    'I' => {}
                    _ => return Err(err("factor letter must be one of I, X, Y, Z")),
                }
            }
        }
        PauliString::new(
            n,
            x_bits,
            z_bits,
            Phase::from_exponent(display_exp + y_count),
        )
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let y_count = (self.x_bits & self.z_bits).count_ones() as u8;
        let display = Phase::from_exponent(self.phase.exponent() + 4 - (y_count % 4));
        write!(f, "{}", display.token())?;
        if self.has_identity_pattern() {
            return write!(f, "I");
        }
        let mut first = true;
        for qubit in 1..=self.n {
            let label = self.label_at(qubit);
            if label == Pauli::I {
                continue;
            }
            if !first {
                write!(f, "·")?;
            }
            write!(f, "{}{}", label.letter(), qubit)?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({}, n={})", self, self.n)
    }
}

/// Infers the qubit count from the largest qubit mentioned.
impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut n = 1usize;
        for piece in s.trim().split('·') {
            let digits: String = piece.chars().filter(|c| c.is_ascii_digit()).collect();
            if let Ok(q) = digits.parse::<usize>() {
                n = n.max(q);
            }
        }
        PauliString::parse_with_n(s, n)
    }
}

/// Identity followed by X, Y, Z on each qubit in ascending order; the
/// canonical enumeration of all errors the five-qubit code corrects.
pub fn correctable_errors(n: usize) -> Result<Vec<PauliString>> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::UnsupportedQubitCount(n));
    }
    let mut out = Vec::with_capacity(3 * n + 1);
    out.push(PauliString::identity(n));
    for qubit in 1..=n {
        for label in [Pauli::X, Pauli::Y, Pauli::Z] {
            out.push(PauliString::single(n, qubit, label)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::StabilizerCode;
    use proptest::prelude::*;

    fn pauli_strategy(n: usize) -> impl Strategy<Value = PauliString> {
        let mask = (1u16 << n) - 1;
        (0..=mask, 0..=mask, 0u8..4).prop_map(move |(x, z, k)| {
            PauliString::new(n, x, z, Phase::from_exponent(k)).unwrap()
        })
    }

    #[test]
    fn x_times_z_on_same_qubit_is_minus_i_y() {
        let x = PauliString::single(3, 2, Pauli::X).unwrap();
        let z = PauliString::single(3, 2, Pauli::Z).unwrap();
        let product = x.mul(&z).unwrap();
        let y = PauliString::single(3, 2, Pauli::Y).unwrap();
        assert_eq!(product, y.mul(&PauliString::new(3, 0, 0, Phase::MinusI).unwrap()).unwrap());
        assert_eq!(product.to_string(), "-iY2");
    }

    #[test]
    fn identity_is_neutral() {
        let id = PauliString::identity(5);
        for p in correctable_errors(5).unwrap() {
            assert_eq!(id.mul(&p).unwrap(), p);
            assert_eq!(p.mul(&id).unwrap(), p);
        }
    }

    #[test]
    fn generator_product_matches_matrix_oracle() {
        let [g1, _, g3, _] = StabilizerCode::standard_generators();
        let product = g1.mul(&g3).unwrap();
        // Independently frozen value, checked below against the dense oracle.
        assert_eq!(product.to_string(), "+X2·X3·X4·Y5");
        assert_eq!(product.weight(), 4);
        let oracle = g1.to_matrix().mul(&g3.to_matrix());
        assert!(product.to_matrix().max_abs_diff(&oracle) < 1e-12);
    }

    #[test]
    fn single_x_anticommutes_with_second_generator() {
        let [_, g2, _, _] = StabilizerCode::standard_generators();
        let x1 = PauliString::single(5, 1, Pauli::X).unwrap();
        assert!(!x1.commutes_with(&g2).unwrap());
        // Dense commutator oracle.
        let (a, b) = (x1.to_matrix(), g2.to_matrix());
        let comm = a.mul(&b).sub(&b.mul(&a));
        assert!(comm.frobenius_norm() > 1.0);
    }

    #[test]
    fn generators_commute_pairwise() {
        let gens = StabilizerCode::standard_generators();
        for a in &gens {
            for b in &gens {
                assert!(a.commutes_with(b).unwrap());
            }
        }
    }

    #[test]
    fn weights() {
        assert_eq!(PauliString::identity(5).weight(), 0);
        for g in StabilizerCode::standard_generators() {
            assert_eq!(g.weight(), 4);
        }
        let p = PauliString::from_ops(5, &[(1, Pauli::X), (3, Pauli::Y)]).unwrap();
        assert_eq!(p.weight(), 2);
    }

    #[test]
    fn to_matrix_single_x() {
        let x = PauliString::single(1, 1, Pauli::X).unwrap().to_matrix();
        assert_eq!(x[(0, 1)], Complex64::new(1.0, 0.0));
        assert_eq!(x[(1, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(x[(0, 0)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn to_matrix_zz_is_diagonal() {
        let zz = PauliString::from_ops(2, &[(1, Pauli::Z), (2, Pauli::Z)])
            .unwrap()
            .to_matrix();
        for (i, want) in [1.0, -1.0, -1.0, 1.0].iter().enumerate() {
            assert_eq!(zz[(i, i)], Complex64::new(*want, 0.0));
        }
    }

    #[test]
    fn generator_matrix_squares_to_identity() {
        let [_, _, _, g4] = StabilizerCode::standard_generators();
        let m = g4.to_matrix();
        assert!(m.mul(&m).max_abs_diff(&Matrix::identity(32)) < 1e-12);
    }

    #[test]
    fn correctable_error_enumeration() {
        let errors = correctable_errors(5).unwrap();
        assert_eq!(errors.len(), 16);
        assert!(errors.iter().all(|e| e.weight() <= 1));
        assert_eq!(errors[0], PauliString::identity(5));
        assert_eq!(errors[1].to_string(), "+X1");
        assert_eq!(errors[2].to_string(), "+Y1");
        assert_eq!(errors[3].to_string(), "+Z1");
        assert_eq!(errors[15].to_string(), "+Z5");
        assert_eq!(correctable_errors(1).unwrap().len(), 4);
    }

    #[test]
    fn rendering_round_trips() {
        let p = PauliString::from_ops(5, &[(1, Pauli::X), (2, Pauli::Z), (3, Pauli::X), (4, Pauli::Z)])
            .unwrap();
        assert_eq!(p.to_string(), "+X1·Z2·X3·Z4");
        let parsed: PauliString = "+X1·Z2·X3·Z4".parse().unwrap();
        assert_eq!(parsed.n(), 4);
        assert_eq!(PauliString::parse_with_n("+X1·Z2·X3·Z4", 5).unwrap(), p);
        assert_eq!(PauliString::parse_with_n("-iY2", 3).unwrap().to_string(), "-iY2");
        assert_eq!(PauliString::parse_with_n("+I", 5).unwrap(), PauliString::identity(5));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(PauliString::parse_with_n("+Q1", 5).is_err());
        assert!(PauliString::parse_with_n("+X9", 5).is_err());
        assert!(PauliString::parse_with_n("+X1·Z1", 5).is_err());
        assert!(PauliString::parse_with_n("", 5).is_err());
    }

    #[test]
    fn size_mismatch_is_rejected() {
        let a = PauliString::identity(4);
        let b = PauliString::identity(5);
        assert!(a.mul(&b).is_err());
        assert!(a.commutes_with(&b).is_err());
    }

    proptest! {
        #[test]
        fn multiplication_is_associative(
            a in pauli_strategy(5),
            b in pauli_strategy(5),
            c in pauli_strategy(5),
        ) {
            let left = a.mul(&b).unwrap().mul(&c).unwrap();
            let right = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn squares_are_plus_or_minus_identity(a in pauli_strategy(5)) {
            let sq = a.mul(&a).unwrap();
            prop_assert!(sq.has_identity_pattern());
            prop_assert!(sq.phase().is_real());
        }

        #[test]
        fn multiplication_matches_dense(a in pauli_strategy(3), b in pauli_strategy(3)) {
            let symbolic = a.mul(&b).unwrap().to_matrix();
            let dense = a.to_matrix().mul(&b.to_matrix());
            prop_assert!(symbolic.max_abs_diff(&dense) < 1e-12);
        }

        #[test]
        fn commutation_matches_dense(a in pauli_strategy(3), b in pauli_strategy(3)) {
            let (ma, mb) = (a.to_matrix(), b.to_matrix());
            let comm = ma.mul(&mb).sub(&mb.mul(&ma));
            let dense_commutes = comm.frobenius_norm() < 1e-9;
            prop_assert_eq!(a.commutes_with(&b).unwrap(), dense_commutes);
        }

        #[test]
        fn display_parse_round_trip(a in pauli_strategy(5)) {
            let parsed = PauliString::parse_with_n(&a.to_string(), 5).unwrap();
            prop_assert_eq!(parsed, a);
        }
    }
}
