//! Constructors for every error process the benchmark exercises: explicit
//! Pauli injection, independent and single-qubit depolarization, the
//! adversarial worst-case search, syndrome-independent implementation noise,
//! and Pauli twirling.
//!
//! Depolarization follows the convention `ρ → (1−p)ρ + p·I/2`, decomposed as
//! identity with probability `1 − 3p/4` and each of X, Y, Z with `p/4`; this
//! is the convention under which an unencoded qubit's entanglement fidelity
//! is exactly `1 − 3p/4`.

use crate::dense::KrausChannel;
use crate::linalg::Matrix;
use crate::pauli::{Pauli, PauliString, Phase};
use crate::{Error, Result, MAX_QUBITS, PROB_TOL};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A mixture of Pauli conjugations: `ρ → Σ pᵢ Pᵢ ρ Pᵢ†`.
///
/// Terms are stored phase-free (the phase cancels in conjugation), merged by
/// pattern, sorted by pattern index, with zero-probability terms dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliChannel {
    n: usize,
    terms: Vec<(f64, PauliString)>,
}

impl PauliChannel {
    pub fn new(n: usize, terms: Vec<(f64, PauliString)>) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::UnsupportedQubitCount(n));
        }
        let mut merged: BTreeMap<usize, f64> = BTreeMap::new();
        let mut total = 0.0;
        for (p, pauli) in terms {
            if pauli.n() != n {
                return Err(Error::QubitCountMismatch(pauli.n(), n));
            }
            if !(0.0..=1.0 + PROB_TOL).contains(&p) {
                return Err(Error::InvalidProbability(p));
            }
            total += p;
            *merged.entry(pauli.pattern_index()).or_insert(0.0) += p;
        }
        if (total - 1.0).abs() > PROB_TOL {
            return Err(Error::ChannelNotNormalized(total));
        }
        let terms = merged
            .into_iter()
            .filter(|(_, p)| *p > 0.0)
            .map(|(idx, p)| {
                (
                    p,
                    PauliString::from_pattern_index(n, idx).expect("index in range"),
                )
            })
            .collect();
        Ok(PauliChannel { n, terms })
    }

    pub fn identity(n: usize) -> Result<Self> {
        PauliChannel::new(n, vec![(1.0, PauliString::identity(n))])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn is_identity(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].1.has_identity_pattern()
    }

    /// Probability mass on a given X/Z pattern.
    pub fn probability_of(&self, pattern: &PauliString) -> f64 {
        let idx = pattern.pattern_index();
        self.terms
            .iter()
            .find(|(_, t)| t.pattern_index() == idx)
            .map(|(p, _)| *p)
            .unwrap_or(0.0)
    }

    /// Entanglement fidelity of a Pauli channel: the identity-term weight.
    pub fn entanglement_fidelity(&self) -> f64 {
        self.probability_of(&PauliString::identity(self.n))
    }

    /// Marginal label weights `[I, X, Y, Z]` seen by one qubit.
    pub fn label_weights_at(&self, qubit: usize) -> Result<[f64; 4]> {
        if qubit == 0 || qubit > self.n {
            return Err(Error::QubitOutOfRange { qubit, n: self.n });
        }
        let mut out = [0.0; 4];
        for (p, t) in &self.terms {
            let slot = match t.label_at(qubit) {
                Pauli::I => 0,
                Pauli::X => 1,
                Pauli::Y => 2,
                Pauli::Z => 3,
            };
            out[slot] += p;
        }
        Ok(out)
    }

    /// `self ∘ other` (applies `other` first); probabilities convolve over
    /// the Pauli group.
    pub fn compose(&self, other: &PauliChannel) -> Result<PauliChannel> {
        if self.n != other.n {
            return Err(Error::QubitCountMismatch(self.n, other.n));
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (pa, a) in &self.terms {
            for (pb, b) in &other.terms {
                terms.push((pa * pb, a.mul(b)?.with_phase(Phase::One)));
            }
        }
        PauliChannel::new(self.n, terms)
    }

    /// Operator-sum form with `√p · P` Kraus operators.
    pub fn to_kraus(&self) -> Result<KrausChannel> {
        let ops = self
            .terms
            .iter()
            .map(|(p, t)| t.to_matrix().scale(Complex64::new(p.sqrt(), 0.0)))
            .collect();
        KrausChannel::new(self.n, ops)
    }

    /// Samples one term; the Monte Carlo primitive behind the seeded
    /// sampling mode.
    pub fn sample_term(&self, rng: &mut impl Rng) -> &PauliString {
        let mut draw: f64 = rng.random();
        for (p, t) in &self.terms {
            if draw < *p {
                return t;
            }
            draw -= p;
        }
        &self.terms.last().expect("channel has terms").1
    }
}

/// Depolarization of a single qubit inside an n-qubit register.
pub fn depolarize_qubit(n: usize, qubit: usize, p: f64) -> Result<PauliChannel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let mut terms = vec![(1.0 - 0.75 * p, PauliString::identity(n))];
    for label in [Pauli::X, Pauli::Y, Pauli::Z] {
        terms.push((p / 4.0, PauliString::single(n, qubit, label)?));
    }
    PauliChannel::new(n, terms)
}

/// Independent depolarization of every qubit with the same probability.
pub fn independent_depolarizing(n: usize, p: f64) -> Result<PauliChannel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::UnsupportedQubitCount(n));
    }
    let stay = 1.0 - 0.75 * p;
    let flip = p / 4.0;
    let mut terms = Vec::with_capacity(1 << (2 * n));
    for idx in 0..1usize << (2 * n) {
        let pattern = PauliString::from_pattern_index(n, idx)?;
        let w = pattern.weight() as i32;
        let prob = stay.powi(n as i32 - w) * flip.powi(w);
        if prob > 0.0 {
            terms.push((prob, pattern));
        }
    }
    PauliChannel::new(n, terms)
}

/// Chooses a qubit uniformly and depolarizes it completely.
pub fn random_single_qubit_depolarizing(n: usize) -> Result<PauliChannel> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::UnsupportedQubitCount(n));
    }
    let mut terms = vec![(0.25, PauliString::identity(n))];
    let each = 1.0 / (4.0 * n as f64);
    for qubit in 1..=n {
        for label in [Pauli::X, Pauli::Y, Pauli::Z] {
            terms.push((each, PauliString::single(n, qubit, label)?));
        }
    }
    PauliChannel::new(n, terms)
}

/// Deterministically applies one Pauli product.
pub fn pauli_injection(p: &PauliString) -> PauliChannel {
    PauliChannel::new(p.n(), vec![(1.0, p.with_phase(Phase::One))])
        .expect("single unit-probability term")
}

/// Syndrome-independent noise on the data qubit with entanglement fidelity
/// `fe`, i.e. depolarization of strength `4(1−fe)/3`.
pub fn implementation_noise(fe: f64) -> Result<PauliChannel> {
    if !(0.25..=1.0).contains(&fe) {
        return Err(Error::InvalidImplementationFidelity(fe));
    }
    depolarize_qubit(1, 1, 4.0 * (1.0 - fe) / 3.0)
}

fn trace_product(a: &Matrix, b: &Matrix) -> Complex64 {
    let d = a.dim();
    let mut acc = Complex64::new(0.0, 0.0);
    for r in 0..d {
        for c in 0..d {
            acc += a[(r, c)] * b[(c, r)];
        }
    }
    acc
}

/// Averages conjugation by all Pauli products, yielding the Pauli channel
/// with the same diagonal in the Pauli basis (and the same entanglement
/// fidelity) as the input.
pub fn pauli_twirl(ch: &KrausChannel) -> Result<PauliChannel> {
    let n = ch.n();
    let d = (1usize << n) as f64;
    let mut terms = Vec::with_capacity(1 << (2 * n));
    for idx in 0..1usize << (2 * n) {
        let pattern = PauliString::from_pattern_index(n, idx)?;
        let pm = pattern.to_matrix();
        let mut weight = 0.0;
        for k in ch.operators() {
            weight += trace_product(&pm, k).norm_sqr();
        }
        terms.push((weight / (d * d), pattern));
    }
    PauliChannel::new(n, terms)
}

/// Evenly spaced depolarization strengths spanning `[0, 1]`; the standard
/// guard grid for the adversarial search uses 101 points. Full strength is
/// worst for any fidelity-monotone pipeline, so the grid only matters for
/// non-monotone implementations.
pub fn strength_grid(points: usize) -> Vec<f64> {
    if points < 2 {
        return vec![1.0];
    }
    (0..points)
        .map(|i| i as f64 / (points - 1) as f64)
        .collect()
}

/// Result of the adversarial single-qubit depolarization search.
#[derive(Debug, Clone)]
pub struct DemonicOutcome {
    pub qubit: usize,
    pub strength: f64,
    pub fidelity: f64,
    pub channel: PauliChannel,
}

/// Searches qubit indices (and optionally a strength grid, default full
/// strength) for the single-qubit depolarization minimizing the evaluated
/// entanglement fidelity. Deterministic: the first minimizer in
/// (qubit, strength) order wins.
pub fn demonic<F>(n: usize, strengths: Option<&[f64]>, mut evaluate: F) -> Result<DemonicOutcome>
where
    F: FnMut(&PauliChannel) -> Result<f64>,
{
    let full = [1.0];
    let grid = strengths.unwrap_or(&full);
    if grid.is_empty() {
        return Err(Error::NoSamples);
    }
    let mut best: Option<DemonicOutcome> = None;
    for qubit in 1..=n {
        for &strength in grid {
            let channel = depolarize_qubit(n, qubit, strength)?;
            let fidelity = evaluate(&channel)?;
            let better = match &best {
                None => true,
                Some(b) => fidelity < b.fidelity,
            };
            if better {
                best = Some(DemonicOutcome {
                    qubit,
                    strength,
                    fidelity,
                    channel,
                });
            }
        }
    }
    best.ok_or(Error::NoSamples)
}

/// A channel acting on a subset of a larger register; `targets[j]` is the
/// register qubit played by the channel's qubit `j + 1`.
#[derive(Debug, Clone)]
pub struct PlacedChannel {
    pub targets: Vec<usize>,
    pub channel: PauliChannel,
}

impl PlacedChannel {
    pub fn full(channel: PauliChannel) -> Self {
        let targets = (1..=channel.n()).collect();
        PlacedChannel { targets, channel }
    }

    pub fn at(qubit: usize, channel: PauliChannel) -> Self {
        PlacedChannel {
            targets: vec![qubit],
            channel,
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.targets.len() != self.channel.n() {
            return Err(Error::DimensionMismatch(
                self.targets.len(),
                self.channel.n(),
            ));
        }
        for (i, &q) in self.targets.iter().enumerate() {
            if q == 0 || q > n {
                return Err(Error::QubitOutOfRange { qubit: q, n });
            }
            if self.targets[..i].contains(&q) {
                return Err(Error::DuplicateQubit(q));
            }
        }
        Ok(())
    }

    /// Pattern index of a term embedded into the n-qubit register.
    pub(crate) fn embedded_pattern_index(&self, term: &PauliString, n: usize) -> usize {
        let mut x = 0u16;
        let mut z = 0u16;
        for (j, &q) in self.targets.iter().enumerate() {
            if (term.x_bits() >> j) & 1 == 1 {
                x |= 1 << (q - 1);
            }
            if (term.z_bits() >> j) & 1 == 1 {
                z |= 1 << (q - 1);
            }
        }
        ((x as usize) << n) | z as usize
    }

    /// Kraus form embedded into the n-qubit register.
    pub fn to_kraus_embedded(&self, n: usize) -> Result<KrausChannel> {
        self.validate(n)?;
        let local = self.channel.to_kraus()?;
        let ops = local
            .operators()
            .iter()
            .map(|k| crate::dense::embed(k, n, &self.targets))
            .collect::<Result<Vec<_>>>()?;
        KrausChannel::new(n, ops)
    }
}

/// Probability distribution over n-qubit Pauli patterns produced by a
/// sequence of placed channels; entry `i` is the pattern with index `i`.
pub(crate) fn pattern_distribution(n: usize, placed: &[PlacedChannel]) -> Result<Vec<f64>> {
    let size = 1usize << (2 * n);
    let mut dist = vec![0.0; size];
    dist[0] = 1.0;
    for pc in placed {
        pc.validate(n)?;
        let terms: Vec<(f64, usize)> = pc
            .channel
            .terms()
            .iter()
            .map(|(p, t)| (*p, pc.embedded_pattern_index(t, n)))
            .collect();
        let mut next = vec![0.0; size];
        for (idx, &mass) in dist.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            for &(p, tidx) in &terms {
                next[idx ^ tidx] += mass * p;
            }
        }
        dist = next;
    }
    Ok(dist)
}

/// Serializable description of a noise configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NoiseSpec {
    /// No extra noise beyond the injected grid error.
    None,
    /// Independent depolarization of every qubit with probability `p`.
    Depolarizing { p: f64 },
    /// Depolarization of one chosen qubit.
    DepolarizeQubit { qubit: usize, p: f64 },
    /// Uniformly random qubit choice followed by full depolarization.
    RandomSingleQubit,
    /// Deterministic injection of a Pauli product (text rendering).
    Inject { pauli: String },
}

impl NoiseSpec {
    /// The noise as a sequence of placed channels; independent
    /// depolarization factors into per-qubit stages.
    pub fn placed(&self, n: usize) -> Result<Vec<PlacedChannel>> {
        match self {
            NoiseSpec::None => Ok(vec![]),
            NoiseSpec::Depolarizing { p } => (1..=n)
                .map(|q| Ok(PlacedChannel::at(q, depolarize_qubit(1, 1, *p)?)))
                .collect(),
            NoiseSpec::DepolarizeQubit { qubit, p } => {
                if *qubit == 0 || *qubit > n {
                    return Err(Error::QubitOutOfRange { qubit: *qubit, n });
                }
                Ok(vec![PlacedChannel::at(*qubit, depolarize_qubit(1, 1, *p)?)])
            }
            NoiseSpec::RandomSingleQubit => Ok(vec![PlacedChannel::full(
                random_single_qubit_depolarizing(n)?,
            )]),
            NoiseSpec::Inject { pauli } => {
                let p = PauliString::parse_with_n(pauli, n)?;
                Ok(vec![PlacedChannel::full(pauli_injection(&p))])
            }
        }
    }

    /// The noise as one full-width Pauli channel.
    pub fn channel(&self, n: usize) -> Result<PauliChannel> {
        match self {
            NoiseSpec::None => PauliChannel::identity(n),
            NoiseSpec::Depolarizing { p } => independent_depolarizing(n, *p),
            NoiseSpec::DepolarizeQubit { qubit, p } => depolarize_qubit(n, *qubit, *p),
            NoiseSpec::RandomSingleQubit => random_single_qubit_depolarizing(n),
            NoiseSpec::Inject { pauli } => {
                Ok(pauli_injection(&PauliString::parse_with_n(pauli, n)?))
            }
        }
    }
}
