//! Benchmark orchestration: the 16-error experiment grid, goal evaluation,
//! fidelity curves with their crossover, randomized stabilizer verification,
//! and the polarization histogram.
//!
//! Two engines drive the same pipeline. The dense engine evolves operators
//! through the 32- or 64-dimensional register; the Pauli engine propagates
//! error patterns symbolically through the encoder tableau and convolves
//! channel mixtures over the Pauli group. Every pipeline element is a
//! Clifford or a Pauli channel, so both engines are exact and must agree to
//! [`crate::ENGINE_TOL`].

use crate::code::StabilizerCode;
use crate::dense::{embed, partial_trace_matrix, DensityMatrix};
use crate::fidelity::transfer_entanglement_fidelity;
use crate::linalg::{Matrix, C_ZERO};
use crate::noise::{
    implementation_noise, pattern_distribution, pauli_injection, NoiseSpec, PauliChannel,
    PlacedChannel,
};
use crate::pauli::{correctable_errors, Axis, Pauli, PauliString};
use crate::{Error, Result, ENGINE_TOL};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

/// Implementation-fidelity threshold for beating the unencoded qubit under
/// independent depolarization.
pub const GOAL1_THRESHOLD: f64 = 0.97;
/// Unencoded optimum under depolarization of one uniformly chosen qubit.
pub const GOAL2_THRESHOLD: f64 = 0.85;
/// Minimum fidelity certifying that some entanglement survives.
pub const GOAL3_THRESHOLD: f64 = 0.5;
/// Unencoded optimum against the adversarial single-qubit depolarization.
pub const GOAL4_THRESHOLD: f64 = 0.25;

/// Which simulation engine produces the report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Dense,
    Pauli,
    Both,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Engine::Dense => "dense",
            Engine::Pauli => "pauli",
            Engine::Both => "both",
        };
        write!(f, "{s}")
    }
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "dense" => Ok(Engine::Dense),
            "pauli" => Ok(Engine::Pauli),
            "both" => Ok(Engine::Both),
            other => Err(Error::Parse {
                input: other.to_string(),
                reason: "expected dense, pauli, or both".to_string(),
            }),
        }
    }
}

/// One polarization measurement of the experiment grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub error: String,
    pub axis: Axis,
    pub polarization: f64,
}

/// Per-error entanglement fidelity derived from three polarizations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorFidelity {
    pub error: String,
    pub fidelity: f64,
}

/// Verdict for one benchmark goal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoalResult {
    pub goal: u8,
    pub description: String,
    pub measured: f64,
    pub threshold: f64,
    pub margin: f64,
    pub passed: bool,
}

/// Complete outcome of an experiment grid run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub engine: Engine,
    pub fe: f64,
    pub noise: NoiseSpec,
    pub seed: u64,
    pub records: Vec<ExperimentRecord>,
    pub per_error_fidelity: Vec<ErrorFidelity>,
    pub aggregate_e2: f64,
    pub goals: Vec<GoalResult>,
}

impl BenchmarkReport {
    /// Builds a report from raw records, recomputing every derived field.
    pub fn from_records(
        engine: Engine,
        fe: f64,
        noise: NoiseSpec,
        seed: u64,
        records: Vec<ExperimentRecord>,
    ) -> Result<Self> {
        let per_error_fidelity = derive_fidelities(&records)?;
        let aggregate_e2 = aggregate_e2(&per_error_fidelity)?;
        let goals = evaluate_goals(&per_error_fidelity)?;
        Ok(BenchmarkReport {
            engine,
            fe,
            noise,
            seed,
            records,
            per_error_fidelity,
            aggregate_e2,
            goals,
        })
    }

    /// The 48 records as CSV with columns `error,axis,polarization`.
    pub fn records_csv(&self) -> String {
        records_csv(&self.records)
    }
}

/// CSV rendering of grid records; fixed column order, `.` decimal separator.
pub fn records_csv(records: &[ExperimentRecord]) -> String {
    let mut out = String::from("error,axis,polarization\n");
    for r in records {
        out.push_str(&format!("{},{},{}\n", r.error, r.axis, r.polarization));
    }
    out
}

fn identity_label() -> String {
    PauliString::identity(5).to_string()
}

/// Groups the 48 records into 16 per-error fidelities via the transfer
/// formula; tolerant of record order, strict about completeness.
pub fn derive_fidelities(records: &[ExperimentRecord]) -> Result<Vec<ErrorFidelity>> {
    let mut by_key: HashMap<(String, Axis), f64> = HashMap::new();
    for r in records {
        if by_key.insert((r.error.clone(), r.axis), r.polarization).is_some() {
            return Err(Error::InvalidReport(format!(
                "duplicate record for error {} axis {}",
                r.error, r.axis
            )));
        }
    }
    let canonical = correctable_errors(5)?;
    if by_key.len() != canonical.len() * 3 {
        return Err(Error::InvalidReport(format!(
            "expected {} records, found {}",
            canonical.len() * 3,
            by_key.len()
        )));
    }
    let mut out = Vec::with_capacity(canonical.len());
    for error in &canonical {
        let label = error.to_string();
        let mut pol = [0.0; 3];
        for (i, axis) in Axis::ALL.iter().enumerate() {
            pol[i] = *by_key.get(&(label.clone(), *axis)).ok_or_else(|| {
                Error::InvalidReport(format!("missing record for error {label} axis {axis}"))
            })?;
        }
        let fidelity = transfer_entanglement_fidelity(pol[0], pol[1], pol[2])?.value;
        out.push(ErrorFidelity {
            error: label,
            fidelity,
        });
    }
    Ok(out)
}

/// Aggregate fidelity under depolarization of one uniformly chosen qubit:
/// `(1/4)·F(identity) + (1/20)·Σ F(single-qubit errors)`.
pub fn aggregate_e2(per_error: &[ErrorFidelity]) -> Result<f64> {
    let id = identity_label();
    let mut f_identity = None;
    let mut rest = 0.0;
    let mut count = 0;
    for ef in per_error {
        if ef.error == id {
            f_identity = Some(ef.fidelity);
        } else {
            rest += ef.fidelity;
            count += 1;
        }
    }
    let f_identity =
        f_identity.ok_or_else(|| Error::InvalidReport("missing identity row".to_string()))?;
    if count != 15 {
        return Err(Error::InvalidReport(format!(
            "expected 15 single-qubit error rows, found {count}"
        )));
    }
    Ok(0.25 * f_identity + 0.05 * rest)
}

/// Scores the four benchmark goals from the per-error fidelities.
pub fn evaluate_goals(per_error: &[ErrorFidelity]) -> Result<Vec<GoalResult>> {
    let id = identity_label();
    let lookup: HashMap<&str, f64> = per_error
        .iter()
        .map(|ef| (ef.error.as_str(), ef.fidelity))
        .collect();
    let f_identity = *lookup
        .get(id.as_str())
        .ok_or_else(|| Error::InvalidReport("missing identity row".to_string()))?;
    let agg = aggregate_e2(per_error)?;

    // The adversary fully depolarizes its chosen qubit, a uniform mixture
    // of identity and the three Paulis there.
    let mut demonic_min = f64::INFINITY;
    for qubit in 1..=5 {
        let mut sum = f_identity;
        for letter in ['X', 'Y', 'Z'] {
            let label = format!("+{letter}{qubit}");
            sum += *lookup.get(label.as_str()).ok_or_else(|| {
                Error::InvalidReport(format!("missing record for error {label}"))
            })?;
        }
        demonic_min = demonic_min.min(0.25 * sum);
    }

    let entries = [
        (
            1u8,
            "implied implementation fidelity beats the independent-depolarization crossover requirement",
            f_identity,
            GOAL1_THRESHOLD,
        ),
        (
            2,
            "encoded storage beats the best unencoded qubit under random single-qubit depolarization",
            agg,
            GOAL2_THRESHOLD,
        ),
        (
            3,
            "some entanglement survives random single-qubit depolarization",
            agg,
            GOAL3_THRESHOLD,
        ),
        (
            4,
            "encoded storage beats unencoded against the adversarial single-qubit depolarization",
            demonic_min,
            GOAL4_THRESHOLD,
        ),
    ];
    Ok(entries
        .into_iter()
        .map(|(goal, description, measured, threshold)| GoalResult {
            goal,
            description: description.to_string(),
            measured,
            threshold,
            margin: measured - threshold,
            passed: measured > threshold,
        })
        .collect())
}

fn label_slot(p: Pauli) -> usize {
    ((p.x_bit() as usize) << 1) | p.z_bit() as usize
}

fn slot_sign(slot: usize, axis: Axis) -> f64 {
    // Conjugating σᵤ by a Pauli label preserves it iff the label is the
    // identity or σᵤ itself.
    if slot == 0 || slot == label_slot(axis.pauli()) {
        1.0
    } else {
        -1.0
    }
}

/// The storage pipeline: encode, apply noise stages, decode, correct,
/// then syndrome-independent implementation noise on the data qubit.
pub struct Pipeline<'c> {
    code: &'c StabilizerCode,
    stages: Vec<PlacedChannel>,
    impl_fidelity: f64,
    impl_noise: PauliChannel,
}

impl<'c> Pipeline<'c> {
    pub fn new(code: &'c StabilizerCode, fe: f64) -> Result<Self> {
        Ok(Pipeline {
            code,
            stages: Vec::new(),
            impl_fidelity: fe,
            impl_noise: implementation_noise(fe)?,
        })
    }

    pub fn with_noise_spec(code: &'c StabilizerCode, fe: f64, noise: &NoiseSpec) -> Result<Self> {
        let mut pipeline = Pipeline::new(code, fe)?;
        for placed in noise.placed(code.n())? {
            pipeline.add_stage(placed)?;
        }
        Ok(pipeline)
    }

    pub fn add_stage(&mut self, placed: PlacedChannel) -> Result<()> {
        placed.validate(self.code.n())?;
        self.stages.push(placed);
        Ok(())
    }

    /// Prepends a deterministic Pauli error to the evolution.
    pub fn inject(&mut self, error: &PauliString) -> Result<()> {
        if error.n() != self.code.n() {
            return Err(Error::QubitCountMismatch(error.n(), self.code.n()));
        }
        self.stages.insert(0, PlacedChannel::full(pauli_injection(error)));
        Ok(())
    }

    pub fn implementation_fidelity(&self) -> f64 {
        self.impl_fidelity
    }

    // ---- dense engine ----

    /// Runs the full pipeline on an n-qubit operator (n = 5 or 5+reference);
    /// every step is linear, so inputs need not be states.
    fn dense_apply(&self, input: &Matrix, n: usize) -> Result<Matrix> {
        let all: Vec<usize> = (1..=self.code.n()).collect();
        let mut m = input.conjugated_by(&embed(self.code.encoder(), n, &all)?);
        for placed in &self.stages {
            m = placed.to_kraus_embedded(n)?.apply_to_matrix(&m);
        }
        m = m.conjugated_by(&embed(&self.code.decoder(), n, &all)?);
        m = m.conjugated_by(&embed(self.code.correction_unitary(), n, &all)?);
        let impl_placed = PlacedChannel::at(self.code.data_qubit(), self.impl_noise.clone());
        m = impl_placed.to_kraus_embedded(n)?.apply_to_matrix(&m);
        Ok(m)
    }

    /// Embeds a 2×2 operator on the data qubit with syndromes in `|1⟩⟨1|`.
    fn embed_data_operator(&self, op: &Matrix) -> Matrix {
        let n = self.code.n();
        let dim = 1usize << n;
        let data = self.code.data_qubit();
        let syndromes = self.code.syndrome_qubits();
        Matrix::from_fn(dim, |a, b| {
            let fixed = |idx: usize| {
                syndromes
                    .iter()
                    .all(|&q| crate::dense::basis_bit(n, idx, q))
            };
            if !fixed(a) || !fixed(b) {
                return C_ZERO;
            }
            let da = usize::from(crate::dense::basis_bit(n, a, data));
            let db = usize::from(crate::dense::basis_bit(n, b, data));
            op[(da, db)]
        })
    }

    /// The pipeline as a one-qubit process (dense engine).
    pub fn process_data(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.n() != 1 {
            return Err(Error::DimensionMismatch(rho.n(), 1));
        }
        let input = self.embed_data_operator(rho.matrix());
        let output = self.dense_apply(&input, self.code.n())?;
        let reduced = partial_trace_matrix(&output, self.code.n(), &[self.code.data_qubit()])?;
        DensityMatrix::from_matrix(1, reduced)
    }

    /// The pipeline acting on the code qubits of a register with one extra
    /// (reference) qubit appended.
    pub fn process_with_reference(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let n = self.code.n() + 1;
        if rho.n() != n {
            return Err(Error::DimensionMismatch(rho.n(), n));
        }
        let output = self.dense_apply(rho.matrix(), n)?;
        DensityMatrix::from_matrix(n, output)
    }

    /// Transfer coefficient by the dense engine: pushes `σᵤ` itself through
    /// the linear pipeline.
    pub fn polarization_dense(&self, axis: Axis) -> Result<f64> {
        let sigma = axis.pauli().matrix();
        let input = self.embed_data_operator(&sigma);
        let output = self.dense_apply(&input, self.code.n())?;
        let reduced = partial_trace_matrix(&output, self.code.n(), &[self.code.data_qubit()])?;
        let value = sigma.mul(&reduced).trace();
        if value.im.abs() > 1e-8 {
            return Err(Error::Numeric(format!(
                "polarization has imaginary part {:.3e}",
                value.im
            )));
        }
        let value = value.re / 2.0;
        if value.abs() > 1.0 + ENGINE_TOL {
            return Err(Error::InvalidPolarization(value));
        }
        Ok(value.clamp(-1.0, 1.0))
    }

    // ---- Pauli engine ----

    /// End-to-end logical label distribution `[I, X, Y, Z]` (slot order
    /// I, Z, X, Y by symplectic bits), including implementation noise.
    fn label_slots(&self) -> Result<[f64; 4]> {
        let n = self.code.n();
        let dist = pattern_distribution(n, &self.stages)?;
        let table = self.code.action_table();
        let mut q = [0.0f64; 4];
        for (idx, &mass) in dist.iter().enumerate() {
            if mass != 0.0 {
                q[label_slot(table[idx])] += mass;
            }
        }
        let mut r = [0.0f64; 4];
        for (p, t) in self.impl_noise.terms() {
            r[label_slot(t.label_at(1))] += p;
        }
        let mut out = [0.0f64; 4];
        for (i, qi) in q.iter().enumerate() {
            for (j, rj) in r.iter().enumerate() {
                out[i ^ j] += qi * rj;
            }
        }
        Ok(out)
    }

    /// Label distribution in `[I, X, Y, Z]` order.
    pub fn label_distribution(&self) -> Result<[f64; 4]> {
        let slots = self.label_slots()?;
        Ok([
            slots[label_slot(Pauli::I)],
            slots[label_slot(Pauli::X)],
            slots[label_slot(Pauli::Y)],
            slots[label_slot(Pauli::Z)],
        ])
    }

    /// Transfer coefficient by the Pauli engine.
    pub fn polarization_pauli(&self, axis: Axis) -> Result<f64> {
        let slots = self.label_slots()?;
        Ok((0..4).map(|s| slots[s] * slot_sign(s, axis)).sum())
    }

    /// Entanglement fidelity by the Pauli engine: the identity-label weight.
    pub fn fidelity_pauli(&self) -> Result<f64> {
        Ok(self.label_slots()?[0])
    }

    // ---- engine dispatch ----

    pub fn polarization(&self, axis: Axis, engine: Engine) -> Result<f64> {
        match engine {
            Engine::Dense => self.polarization_dense(axis),
            Engine::Pauli => self.polarization_pauli(axis),
            Engine::Both => {
                let dense = self.polarization_dense(axis)?;
                let pauli = self.polarization_pauli(axis)?;
                if (dense - pauli).abs() > ENGINE_TOL {
                    return Err(Error::EngineMismatch {
                        error: "unlabeled".to_string(),
                        axis: axis.to_string(),
                        dense,
                        pauli,
                    });
                }
                Ok(pauli)
            }
        }
    }

    /// Entanglement fidelity via the transfer formula.
    pub fn entanglement_fidelity(&self, engine: Engine) -> Result<f64> {
        let px = self.polarization(Axis::X, engine)?;
        let py = self.polarization(Axis::Y, engine)?;
        let pz = self.polarization(Axis::Z, engine)?;
        Ok(transfer_entanglement_fidelity(px, py, pz)?.value)
    }

    /// Seeded Monte Carlo estimate of the entanglement fidelity, sampling
    /// one term per noise stage per shot. The exact engines are the default;
    /// this exists for parity with sampled experimental statistics.
    pub fn monte_carlo_fidelity(&self, shots: usize, seed: u64) -> Result<VerificationSummary> {
        if shots == 0 {
            return Err(Error::NoSamples);
        }
        let n = self.code.n();
        let table = self.code.action_table();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut hits = 0usize;
        for _ in 0..shots {
            let mut pattern = 0usize;
            for placed in &self.stages {
                let term = placed.channel.sample_term(&mut rng);
                pattern ^= placed.embedded_pattern_index(term, n);
            }
            let mut slot = label_slot(table[pattern]);
            slot ^= label_slot(self.impl_noise.sample_term(&mut rng).label_at(1));
            if slot == 0 {
                hits += 1;
            }
        }
        let mean = hits as f64 / shots as f64;
        let var = mean * (1.0 - mean) / shots as f64;
        Ok(VerificationSummary {
            mean,
            half_width: 1.96 * var.sqrt(),
            samples: shots,
            seed: Some(seed),
            exhaustive: false,
        })
    }
}

/// Runs the 16-error × 3-axis grid and assembles the report.
pub fn run_error_grid(
    code: &StabilizerCode,
    fe: f64,
    noise: &NoiseSpec,
    engine: Engine,
    seed: u64,
) -> Result<BenchmarkReport> {
    let errors = correctable_errors(code.n())?;
    let mut records = Vec::with_capacity(errors.len() * 3);
    for error in &errors {
        let mut pipeline = Pipeline::with_noise_spec(code, fe, noise)?;
        pipeline.inject(error)?;
        for axis in Axis::ALL {
            let polarization = pipeline.polarization(axis, engine).map_err(|e| match e {
                Error::EngineMismatch {
                    axis, dense, pauli, ..
                } => Error::EngineMismatch {
                    error: error.to_string(),
                    axis,
                    dense,
                    pauli,
                },
                other => other,
            })?;
            records.push(ExperimentRecord {
                error: error.to_string(),
                axis,
                polarization,
            });
        }
    }
    BenchmarkReport::from_records(engine, fe, noise.clone(), seed, records)
}

/// Entanglement fidelity of an unencoded qubit under independent
/// depolarization: the straight line `1 − 3p/4`.
pub fn unencoded_curve(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    Ok(1.0 - 0.75 * p)
}

/// Entanglement fidelity of the encoded pipeline under independent
/// depolarization `p` with syndrome-independent implementation fidelity
/// `fe`; closed form of the exact channel composition.
pub fn encoded_curve(p: f64, fe: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    if !(0.25..=1.0).contains(&fe) {
        return Err(Error::InvalidImplementationFidelity(fe));
    }
    let a = 4.0 * fe * (p - 1.0).powi(3) * (-2.0 - 6.0 * p + 3.0 * p * p);
    let b = p * p * (15.0 - 25.0 * p + 15.0 * p * p - 3.0 * p * p * p);
    Ok((a + b) / 8.0)
}

/// Gap below which curves that never change sign still count as meeting:
/// at the threshold implementation fidelity the encoded curve osculates the
/// unencoded line (closest approach ≈ 5e-8) instead of crossing it.
pub const CURVE_MEET_TOL: f64 = 1e-6;

/// First meeting point of the encoded and unencoded curves on (0, 1).
///
/// A sign change is located by a grid scan and bisected to 1e-8. When the
/// curves only osculate, the point of closest approach is returned provided
/// the gap is within [`CURVE_MEET_TOL`]. `None` when the encoded curve
/// stays clearly below the line.
pub fn find_crossover(fe: f64) -> Result<Option<f64>> {
    if !(fe > 0.25 && fe <= 1.0) {
        return Err(Error::InvalidImplementationFidelity(fe));
    }
    let h = |p: f64| -> Result<f64> { Ok(encoded_curve(p, fe)? - unencoded_curve(p)?) };
    let steps = 1000usize;
    let grid: Vec<f64> = (1..steps).map(|i| i as f64 / steps as f64).collect();
    let values: Vec<f64> = grid.iter().map(|&p| h(p)).collect::<Result<_>>()?;

    for i in 1..grid.len() {
        if values[i - 1] == 0.0 {
            return Ok(Some(grid[i - 1]));
        }
        if values[i - 1] * values[i] < 0.0 {
            let (mut lo, mut hi) = (grid[i - 1], grid[i]);
            let mut h_lo = values[i - 1];
            while hi - lo > 1e-8 {
                let mid = 0.5 * (lo + hi);
                let h_mid = h(mid)?;
                if h_mid == 0.0 {
                    return Ok(Some(mid));
                }
                if h_lo * h_mid < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    h_lo = h_mid;
                }
            }
            return Ok(Some(0.5 * (lo + hi)));
        }
    }

    // No sign change: refine the closest approach and accept an osculation.
    let k = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).expect("finite gaps"))
        .map(|(i, _)| i)
        .expect("nonempty grid");
    let mut lo = grid[k.saturating_sub(1)];
    let mut hi = grid[(k + 1).min(grid.len() - 1)];
    for _ in 0..100 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if h(m1)? < h(m2)? {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    let peak = 0.5 * (lo + hi);
    if h(peak)? >= -CURVE_MEET_TOL {
        Ok(Some(peak))
    } else {
        Ok(None)
    }
}

/// Outcome of a randomized (or exhaustive) stabilizer verification run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationSummary {
    pub mean: f64,
    pub half_width: f64,
    pub samples: usize,
    pub seed: Option<u64>,
    pub exhaustive: bool,
}

fn verification_fidelity(
    pattern: usize,
    base: &[f64],
    table: &[Pauli],
    impl_slots: &[f64; 4],
) -> f64 {
    // Applying the expected residual to the output turns the question into
    // "does the realized label match the expected one".
    let expected = label_slot(table[pattern]);
    let mut q = [0.0f64; 4];
    for (idx, &mass) in base.iter().enumerate() {
        if mass != 0.0 {
            q[label_slot(table[idx ^ pattern])] += mass;
        }
    }
    (0..4).map(|s| q[s] * impl_slots[s ^ expected]).sum()
}

fn impl_slots(fe: f64) -> Result<[f64; 4]> {
    let impl_noise = implementation_noise(fe)?;
    let mut r = [0.0f64; 4];
    for (p, t) in impl_noise.terms() {
        r[label_slot(t.label_at(1))] += p;
    }
    Ok(r)
}

/// Uniformly samples Pauli products, applies each during the evolution,
/// undoes its expected residual on the output, and averages the resulting
/// entanglement fidelities. Each sample is evaluated exactly; randomness is
/// only in the choice of product.
pub fn randomized_verification(
    code: &StabilizerCode,
    fe: f64,
    noise: &NoiseSpec,
    samples: usize,
    seed: u64,
) -> Result<VerificationSummary> {
    if samples == 0 {
        return Err(Error::NoSamples);
    }
    let n = code.n();
    let base = pattern_distribution(n, &noise.placed(n)?)?;
    let table = code.action_table();
    let r = impl_slots(fe)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let patterns = 1usize << (2 * n);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        let pattern = rng.random_range(0..patterns);
        let f = verification_fidelity(pattern, &base, table, &r);
        sum += f;
        sum_sq += f * f;
    }
    let mean = sum / samples as f64;
    let half_width = if samples > 1 {
        let var = ((sum_sq - sum * sum / samples as f64) / (samples as f64 - 1.0)).max(0.0);
        1.96 * (var / samples as f64).sqrt()
    } else {
        0.0
    };
    Ok(VerificationSummary {
        mean,
        half_width,
        samples,
        seed: Some(seed),
        exhaustive: false,
    })
}

/// The same average taken exactly over all `4^n` Pauli products.
pub fn exhaustive_verification(
    code: &StabilizerCode,
    fe: f64,
    noise: &NoiseSpec,
) -> Result<VerificationSummary> {
    let n = code.n();
    let base = pattern_distribution(n, &noise.placed(n)?)?;
    let table = code.action_table();
    let r = impl_slots(fe)?;
    let patterns = 1usize << (2 * n);
    let mean = (0..patterns)
        .map(|pattern| verification_fidelity(pattern, &base, table, &r))
        .sum::<f64>()
        / patterns as f64;
    Ok(VerificationSummary {
        mean,
        half_width: 0.0,
        samples: patterns,
        seed: None,
        exhaustive: true,
    })
}

/// One histogram bar: count of polarizations in `[low, high)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub low: f64,
    pub high: f64,
    pub count: usize,
}

/// Bins record polarizations into intervals of the given width anchored at
/// zero. Values within 1e-9 of an upper edge snap upward, so a noiseless
/// grid lands in the bin starting exactly at 1.0.
pub fn polarization_histogram(
    records: &[ExperimentRecord],
    bin_width: f64,
) -> Result<Vec<HistogramBin>> {
    if !(bin_width.is_finite() && bin_width > 0.0) {
        return Err(Error::InvalidBinWidth(bin_width));
    }
    let mut counts: HashMap<i64, usize> = HashMap::new();
    for r in records {
        let k = (r.polarization / bin_width + 1e-9).floor() as i64;
        *counts.entry(k).or_insert(0) += 1;
    }
    let Some(&min) = counts.keys().min() else {
        return Ok(vec![]);
    };
    let max = *counts.keys().max().expect("nonempty");
    Ok((min..=max)
        .map(|k| HistogramBin {
            low: k as f64 * bin_width,
            high: (k + 1) as f64 * bin_width,
            count: counts.get(&k).copied().unwrap_or(0),
        })
        .collect())
}

/// CSV rendering of histogram bins: `bin_low,bin_high,count`.
pub fn histogram_csv(bins: &[HistogramBin]) -> String {
    let mut out = String::from("bin_low,bin_high,count\n");
    for b in bins {
        out.push_str(&format!("{},{},{}\n", b.low, b.high, b.count));
    }
    out
}

/// CSV rendering of curve samples: `p,unencoded,encoded`.
pub fn curve_csv(rows: &[(f64, f64, f64)]) -> String {
    let mut out = String::from("p,unencoded,encoded\n");
    for (p, unenc, enc) in rows {
        out.push_str(&format!("{p},{unenc},{enc}\n"));
    }
    out
}
