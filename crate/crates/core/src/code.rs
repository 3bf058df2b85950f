//! The five-qubit code: generators, encoder synthesis, syndrome decoding,
//! and the syndrome→correction table.
//!
//! The code space is one of the 16 joint eigenspaces of four commuting
//! weight-4 stabilizer generators. Qubit 2 carries the protected state;
//! qubits 1, 3, 4 and 5 are syndrome qubits initialized to `|1⟩`. The
//! encoder is synthesized as a Clifford tableau mapping the initial
//! stabilizer group (−Z on each syndrome qubit) onto the signed generators
//! and Z/X on the data qubit onto the logical operators, then realized as a
//! dense unitary and verified against the code-space projector.
//!
//! Syndrome bit `i` corresponds to the i-th generator in the standard
//! listing order, and is paired with syndrome qubit `[1, 3, 4, 5][i]`:
//! after decoding, an error that anticommutes with generator `i` flips that
//! qubit away from its initial `|1⟩`.

use crate::dense::basis_bit;
use crate::linalg::{Matrix, C_ZERO};
use crate::pauli::{correctable_errors, Pauli, PauliString, Phase};
use crate::{Error, Result, STATE_TOL};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

const N: usize = 5;
const DATA_QUBIT: usize = 2;
const SYNDROME_QUBITS: [usize; 4] = [1, 3, 4, 5];
const PATTERNS: usize = 1 << (2 * N);

/// Eigenvalue selector for one generator.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    fn phase(self) -> Phase {
        match self {
            Sign::Plus => Phase::One,
            Sign::Minus => Phase::MinusOne,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+1"),
            Sign::Minus => write!(f, "-1"),
        }
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+1" | "+" | "1" => Ok(Sign::Plus),
            "-1" | "-" => Ok(Sign::Minus),
            other => Err(Error::Parse {
                input: other.to_string(),
                reason: "expected +1 or -1".to_string(),
            }),
        }
    }
}

/// Four-bit syndrome; bit `i` is set iff the error anticommutes with
/// generator `i` (in standard listing order).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Syndrome(u8);

impl Syndrome {
    pub fn from_bits(bits: [bool; 4]) -> Self {
        let mut v = 0u8;
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v |= 1 << (3 - i);
            }
        }
        Syndrome(v)
    }

    pub fn from_index(index: usize) -> Result<Self> {
        if index >= 16 {
            return Err(Error::DimensionMismatch(index, 16));
        }
        Ok(Syndrome(index as u8))
    }

    pub fn bits(self) -> [bool; 4] {
        let mut out = [false; 4];
        for (i, b) in out.iter_mut().enumerate() {
            *b = (self.0 >> (3 - i)) & 1 == 1;
        }
        out
    }

    /// Packed value in `0..16` with the first generator as the high bit.
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_trivial(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl FromStr for Syndrome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.len() != 4 || !t.chars().all(|c| c == '0' || c == '1') {
            return Err(Error::Parse {
                input: s.to_string(),
                reason: "expected four syndrome bits".to_string(),
            });
        }
        let mut bits = [false; 4];
        for (i, c) in t.chars().enumerate() {
            bits[i] = c == '1';
        }
        Ok(Syndrome::from_bits(bits))
    }
}

/// Outcome of the exhaustive weight-≤2 anticommutation check.
#[derive(Debug, Clone)]
pub struct DistanceReport {
    pub checked: usize,
    pub violations: Vec<PauliString>,
}

impl DistanceReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Weight-1 and weight-2 Pauli products that commute with every listed
/// generator; an empty result certifies that all single-qubit errors are
/// detectable.
pub fn distance_violations(generators: &[PauliString]) -> (usize, Vec<PauliString>) {
    let labels = [Pauli::X, Pauli::Y, Pauli::Z];
    let mut checked = 0;
    let mut violations = Vec::new();
    let mut probe = |p: PauliString| {
        checked += 1;
        let detected = generators
            .iter()
            .any(|g| !p.commutes_with(g).expect("matching sizes"));
        if !detected {
            violations.push(p);
        }
    };
    for q in 1..=N {
        for l in labels {
            probe(PauliString::single(N, q, l).expect("valid"));
        }
    }
    for q1 in 1..=N {
        for q2 in (q1 + 1)..=N {
            for l1 in labels {
                for l2 in labels {
                    probe(PauliString::from_ops(N, &[(q1, l1), (q2, l2)]).expect("valid"));
                }
            }
        }
    }
    (checked, violations)
}

/// Signed symplectic basis images defining a Clifford conjugation map,
/// together with its inverse.
struct CliffordTableau {
    x_images: Vec<PauliString>,
    z_images: Vec<PauliString>,
    x_preimages: Vec<PauliString>,
    z_preimages: Vec<PauliString>,
}

fn symplectic_vec(p: &PauliString) -> u32 {
    (p.x_bits() as u32) | ((p.z_bits() as u32) << p.n())
}

/// Inverts an `m × m` GF(2) matrix given as columns packed into `u32`s.
fn gf2_invert(cols: &[u32], m: usize) -> Option<Vec<u32>> {
    let mut rows = vec![0u64; m];
    for (r, row) in rows.iter_mut().enumerate() {
        let mut v = 0u64;
        for (i, col) in cols.iter().enumerate() {
            if (col >> r) & 1 == 1 {
                v |= 1 << i;
            }
        }
        *row = v | (1 << (m + r));
    }
    for c in 0..m {
        let pivot = (c..m).find(|&r| (rows[r] >> c) & 1 == 1)?;
        rows.swap(c, pivot);
        for r in 0..m {
            if r != c && (rows[r] >> c) & 1 == 1 {
                rows[r] ^= rows[c];
            }
        }
    }
    let mut inv_cols = vec![0u32; m];
    for (j, col) in inv_cols.iter_mut().enumerate() {
        let mut v = 0u32;
        for (i, row) in rows.iter().enumerate() {
            if (row >> (m + j)) & 1 == 1 {
                v |= 1 << i;
            }
        }
        *col = v;
    }
    Some(inv_cols)
}

impl CliffordTableau {
    fn from_images(x_images: Vec<PauliString>, z_images: Vec<PauliString>) -> Result<Self> {
        let n = N;
        let fail = |generator: usize, reason: &str| Error::Synthesis {
            generator,
            reason: reason.to_string(),
        };
        for row in x_images.iter().chain(&z_images) {
            if !row.is_hermitian() {
                return Err(fail(0, "tableau image is not Hermitian"));
            }
        }
        // Canonical commutation relations must be preserved.
        for j in 0..n {
            for k in 0..n {
                let xz = x_images[j].commutes_with(&z_images[k])?;
                if xz != (j != k) {
                    return Err(fail(k + 1, "X/Z image pairing violated"));
                }
                if !x_images[j].commutes_with(&x_images[k])?
                    || !z_images[j].commutes_with(&z_images[k])?
                {
                    return Err(fail(k + 1, "image set is not symplectic"));
                }
            }
        }
        let basis: Vec<PauliString> = x_images.iter().chain(&z_images).copied().collect();
        let cols: Vec<u32> = basis.iter().map(symplectic_vec).collect();
        let inv = gf2_invert(&cols, 2 * n)
            .ok_or_else(|| fail(0, "tableau images do not span the Pauli group"))?;
        let mut preimages = Vec::with_capacity(2 * n);
        for (j, combo) in inv.iter().enumerate() {
            let mut prod = PauliString::identity(n);
            let mut x_mask = 0u16;
            let mut z_mask = 0u16;
            for (i, b) in basis.iter().enumerate() {
                if (combo >> i) & 1 == 1 {
                    prod = prod.mul(b)?;
                    if i < n {
                        x_mask |= 1 << i;
                    } else {
                        z_mask |= 1 << (i - n);
                    }
                }
            }
            // Basis element j is X_{j+1} for j < n, else Z_{j-n+1}; its
            // symplectic vector is the j-th unit vector either way.
            if symplectic_vec(&prod) != 1u32 << j {
                return Err(fail(0, "tableau inversion produced a wrong pattern"));
            }
            let preimage = PauliString::new(n, x_mask, z_mask, prod.phase().inverse())?;
            if !preimage.is_hermitian() {
                return Err(fail(0, "tableau inverse is not Hermitian"));
            }
            preimages.push(preimage);
        }
        let z_preimages = preimages.split_off(n);
        Ok(CliffordTableau {
            x_images,
            z_images,
            x_preimages: preimages,
            z_preimages,
        })
    }

    fn conjugate(rows_x: &[PauliString], rows_z: &[PauliString], p: &PauliString) -> PauliString {
        let mut acc = PauliString::identity(N).with_phase(p.phase());
        for (k, row) in rows_x.iter().enumerate() {
            if (p.x_bits() >> k) & 1 == 1 {
                acc = acc.mul(row).expect("matching sizes");
            }
        }
        for (k, row) in rows_z.iter().enumerate() {
            if (p.z_bits() >> k) & 1 == 1 {
                acc = acc.mul(row).expect("matching sizes");
            }
        }
        acc
    }

    /// `U P U†`.
    #[cfg(test)]
    fn image(&self, p: &PauliString) -> PauliString {
        Self::conjugate(&self.x_images, &self.z_images, p)
    }

    /// `U† P U`.
    fn preimage(&self, p: &PauliString) -> PauliString {
        Self::conjugate(&self.x_preimages, &self.z_preimages, p)
    }
}

/// The five-qubit code with synthesized encoder and correction table.
pub struct StabilizerCode {
    generators: [PauliString; 4],
    signs: [Sign; 4],
    logical_x: PauliString,
    logical_z: PauliString,
    tableau: CliffordTableau,
    correction: [Pauli; 16],
    action_table: Vec<Pauli>,
    encoder: Matrix,
    correction_unitary: Matrix,
}

impl StabilizerCode {
    /// The four weight-4 generators in standard listing order.
    pub fn standard_generators() -> [PauliString; 4] {
        let g = |ops: &[(usize, Pauli)]| PauliString::from_ops(N, ops).expect("valid generator");
        [
            g(&[(2, Pauli::Z), (3, Pauli::Y), (4, Pauli::Y), (5, Pauli::X)]),
            g(&[(1, Pauli::Z), (2, Pauli::Y), (3, Pauli::Y), (4, Pauli::X)]),
            g(&[(2, Pauli::Y), (3, Pauli::Z), (4, Pauli::Z), (5, Pauli::Z)]),
            g(&[(1, Pauli::X), (2, Pauli::Z), (3, Pauli::X), (4, Pauli::Z)]),
        ]
    }

    /// Builds the code in the default all-`+1` eigenspace.
    pub fn five_qubit() -> Self {
        StabilizerCode::with_signs([Sign::Plus; 4]).expect("standard construction succeeds")
    }

    /// Builds the code in the joint eigenspace selected by `signs`.
    pub fn with_signs(signs: [Sign; 4]) -> Result<Self> {
        let generators = Self::standard_generators();

        // Patterns reachable as generator subset products.
        let mut span = HashSet::with_capacity(16);
        for subset in 0u32..16 {
            let mut acc = PauliString::identity(N);
            for (i, g) in generators.iter().enumerate() {
                if (subset >> i) & 1 == 1 {
                    acc = acc.mul(g)?;
                }
            }
            span.insert(symplectic_vec(&acc));
        }

        // Logical operators by documented canonical scan: X-mask major,
        // Z-mask minor, first qualifying pattern wins.
        let mut logical_z = None;
        'outer_z: for x in 0u16..32 {
            for z in 0u16..32 {
                if x == 0 && z == 0 {
                    continue;
                }
                let cand = PauliString::hermitian_pattern(N, x, z)?;
                let commutes = generators
                    .iter()
                    .all(|g| cand.commutes_with(g).expect("sizes match"));
                if commutes && !span.contains(&symplectic_vec(&cand)) {
                    logical_z = Some(cand);
                    break 'outer_z;
                }
            }
        }
        let logical_z = logical_z.ok_or_else(|| Error::Synthesis {
            generator: 0,
            reason: "no logical Z candidate".to_string(),
        })?;
        let mut logical_x = None;
        'outer_x: for x in 0u16..32 {
            for z in 0u16..32 {
                let cand = PauliString::hermitian_pattern(N, x, z)?;
                let commutes = generators
                    .iter()
                    .all(|g| cand.commutes_with(g).expect("sizes match"));
                if commutes && !cand.commutes_with(&logical_z)? {
                    logical_x = Some(cand);
                    break 'outer_x;
                }
            }
        }
        let logical_x = logical_x.ok_or_else(|| Error::Synthesis {
            generator: 0,
            reason: "no logical X candidate".to_string(),
        })?;

        // Z images: the initial stabilizer of a syndrome qubit in |1⟩ is
        // −Z, so U Z U† = −s·g for its paired generator.
        let mut z_images = vec![PauliString::identity(N); N];
        let mut x_images = vec![PauliString::identity(N); N];
        for (i, &q) in SYNDROME_QUBITS.iter().enumerate() {
            let flip = signs[i].phase() * Phase::MinusOne;
            z_images[q - 1] = generators[i].with_phase(generators[i].phase() * flip);
        }
        z_images[DATA_QUBIT - 1] = logical_z;
        x_images[DATA_QUBIT - 1] = logical_x;

        // Complete the symplectic basis with one destabilizer per generator.
        for (i, &q) in SYNDROME_QUBITS.iter().enumerate() {
            let mut found = None;
            'scan: for x in 0u16..32 {
                for z in 0u16..32 {
                    let cand = PauliString::hermitian_pattern(N, x, z)?;
                    if cand.commutes_with(&z_images[q - 1])? {
                        continue;
                    }
                    let mut ok = cand.commutes_with(&x_images[DATA_QUBIT - 1])?;
                    for other in 1..=N {
                        if other == q {
                            continue;
                        }
                        ok = ok && cand.commutes_with(&z_images[other - 1])?;
                    }
                    for &prev in SYNDROME_QUBITS.iter().take(i) {
                        ok = ok && cand.commutes_with(&x_images[prev - 1])?;
                    }
                    if ok {
                        found = Some(cand);
                        break 'scan;
                    }
                }
            }
            x_images[q - 1] = found.ok_or_else(|| Error::Synthesis {
                generator: i + 1,
                reason: "no destabilizer completes the basis".to_string(),
            })?;
        }

        let tableau = CliffordTableau::from_images(x_images, z_images)?;

        // Correction table: push each correctable error through the decoder
        // and record the data-qubit residual under its syndrome.
        let errors = correctable_errors(N)?;
        let mut seen = [false; 16];
        let mut correction = [Pauli::I; 16];
        for e in &errors {
            let syndrome = syndrome_of_with(&generators, e)?;
            if seen[syndrome.index()] {
                return Err(Error::Synthesis {
                    generator: 0,
                    reason: format!("syndrome {syndrome} is not unique"),
                });
            }
            seen[syndrome.index()] = true;
            let pushed = tableau.preimage(e);
            correction[syndrome.index()] = pushed.label_at(DATA_QUBIT);
        }

        // Residual logical action for every Pauli pattern.
        let mut action_table = vec![Pauli::I; PATTERNS];
        for (idx, slot) in action_table.iter_mut().enumerate() {
            let p = PauliString::from_pattern_index(N, idx)?;
            let pushed = tableau.preimage(&p);
            let mut bits = [false; 4];
            for (i, &q) in SYNDROME_QUBITS.iter().enumerate() {
                bits[i] = (pushed.x_bits() >> (q - 1)) & 1 == 1;
            }
            let syndrome = Syndrome::from_bits(bits);
            *slot = correction[syndrome.index()].mul_label(pushed.label_at(DATA_QUBIT));
        }

        let encoder = build_encoder(&tableau)?;
        let correction_unitary = build_correction_unitary(&correction);

        let code = StabilizerCode {
            generators,
            signs,
            logical_x,
            logical_z,
            tableau,
            correction,
            action_table,
            encoder,
            correction_unitary,
        };
        code.verify_encoder()?;
        Ok(code)
    }

    fn verify_encoder(&self) -> Result<()> {
        let dev = self.encoder.unitarity_deviation();
        if dev > STATE_TOL {
            return Err(Error::Synthesis {
                generator: 0,
                reason: format!("encoder unitarity deviation {dev:.3e}"),
            });
        }
        let mapped = self.initial_projector().conjugated_by(&self.encoder);
        let target = self.codespace_projector();
        let diff = mapped.max_abs_diff(&target);
        if diff > STATE_TOL {
            return Err(Error::Synthesis {
                generator: 0,
                reason: format!("encoder misses the code-space projector by {diff:.3e}"),
            });
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        N
    }

    pub fn data_qubit(&self) -> usize {
        DATA_QUBIT
    }

    pub fn syndrome_qubits(&self) -> [usize; 4] {
        SYNDROME_QUBITS
    }

    pub fn generators(&self) -> &[PauliString; 4] {
        &self.generators
    }

    pub fn signs(&self) -> [Sign; 4] {
        self.signs
    }

    pub fn logical_x(&self) -> PauliString {
        self.logical_x
    }

    pub fn logical_z(&self) -> PauliString {
        self.logical_z
    }

    /// Syndrome of an arbitrary five-qubit error.
    pub fn syndrome_of(&self, error: &PauliString) -> Result<Syndrome> {
        syndrome_of_with(&self.generators, error)
    }

    /// Exhaustive check that all 105 weight-≤2 products are detectable.
    /// Weight 0 is excluded: the identity commutes with everything.
    pub fn verify_distance(&self) -> DistanceReport {
        let (checked, violations) = distance_violations(&self.generators);
        DistanceReport {
            checked,
            violations,
        }
    }

    /// The synthesized 32×32 encoding unitary.
    pub fn encoder(&self) -> &Matrix {
        &self.encoder
    }

    /// The decoder is the inverse (conjugate transpose) of the encoder.
    pub fn decoder(&self) -> Matrix {
        self.encoder.adjoint()
    }

    /// Data-qubit Pauli that restores the input for the given syndrome.
    pub fn correction_for(&self, syndrome: Syndrome) -> Pauli {
        self.correction[syndrome.index()]
    }

    /// Residual Pauli on the data qubit after decode and syndrome-conditioned
    /// correction, for an arbitrary error applied inside the code.
    pub fn logical_action(&self, p: &PauliString) -> Result<Pauli> {
        if p.n() != N {
            return Err(Error::QubitCountMismatch(p.n(), N));
        }
        Ok(self.action_table[p.pattern_index()])
    }

    /// Pushes an error through the decoder: `U† P U` with exact phase.
    pub fn decode_conjugate(&self, p: &PauliString) -> Result<PauliString> {
        if p.n() != N {
            return Err(Error::QubitCountMismatch(p.n(), N));
        }
        Ok(self.tableau.preimage(p))
    }

    pub(crate) fn action_table(&self) -> &[Pauli] {
        &self.action_table
    }

    /// The 32×32 unitary applying the tabulated correction to the data
    /// qubit, conditioned on the syndrome qubits' computational state.
    pub fn correction_unitary(&self) -> &Matrix {
        &self.correction_unitary
    }

    /// Projector onto the signed joint eigenspace of the generators.
    pub fn codespace_projector(&self) -> Matrix {
        let dim = 1 << N;
        let mut proj = Matrix::identity(dim);
        for (g, s) in self.generators.iter().zip(self.signs) {
            let signed = g.to_matrix().scale(Complex64::new(s.value(), 0.0));
            proj = proj.mul(&Matrix::identity(dim).add(&signed).scale(Complex64::new(0.5, 0.0)));
        }
        proj
    }

    /// Projector onto "syndrome qubits all `|1⟩`, data qubit arbitrary".
    pub fn initial_projector(&self) -> Matrix {
        let dim = 1 << N;
        Matrix::from_fn(dim, |r, c| {
            if r != c {
                return C_ZERO;
            }
            let ok = SYNDROME_QUBITS.iter().all(|&q| basis_bit(N, r, q));
            if ok {
                Complex64::new(1.0, 0.0)
            } else {
                C_ZERO
            }
        })
    }

    /// Plain-text code definition: one `sign generator` pair per line.
    pub fn to_text(&self) -> String {
        let mut out = String::from("# five-qubit code definition: sign and generator per line\n");
        for (g, s) in self.generators.iter().zip(self.signs) {
            out.push_str(&format!("{s} {g}\n"));
        }
        out
    }

    /// Parses the [`StabilizerCode::to_text`] format and rebuilds the code.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut signs = Vec::new();
        let mut gens = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let sign: Sign = parts
                .next()
                .ok_or_else(|| Error::Parse {
                    input: line.to_string(),
                    reason: "missing sign column".to_string(),
                })?
                .parse()?;
            let pauli = PauliString::parse_with_n(
                parts.next().ok_or_else(|| Error::Parse {
                    input: line.to_string(),
                    reason: "missing generator column".to_string(),
                })?,
                N,
            )?;
            signs.push(sign);
            gens.push(pauli);
        }
        if gens.len() != 4 {
            return Err(Error::Parse {
                input: text.to_string(),
                reason: format!("expected 4 generators, found {}", gens.len()),
            });
        }
        let standard = Self::standard_generators();
        if gens != standard {
            return Err(Error::Parse {
                input: text.to_string(),
                reason: "generators are not the five-qubit code in standard order".to_string(),
            });
        }
        StabilizerCode::with_signs([signs[0], signs[1], signs[2], signs[3]])
    }

    /// Correction table as CSV with columns `syndrome,correction`.
    pub fn correction_table_csv(&self) -> String {
        let mut out = String::from("syndrome,correction\n");
        for idx in 0..16 {
            let syndrome = Syndrome::from_index(idx).expect("in range");
            out.push_str(&format!("{},{}\n", syndrome, self.correction[idx].letter()));
        }
        out
    }

    #[cfg(test)]
    fn tableau(&self) -> &CliffordTableau {
        &self.tableau
    }
}

impl fmt::Debug for StabilizerCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "StabilizerCode(five-qubit, signs {:?})",
            self.signs.map(|s| s.to_string())
        )
    }
}

fn syndrome_of_with(generators: &[PauliString; 4], error: &PauliString) -> Result<Syndrome> {
    if error.n() != N {
        return Err(Error::QubitCountMismatch(error.n(), N));
    }
    let mut bits = [false; 4];
    for (i, g) in generators.iter().enumerate() {
        bits[i] = !error.commutes_with(g)?;
    }
    Ok(Syndrome::from_bits(bits))
}

/// Realizes the tableau as a dense unitary: pick the joint +1 eigenstate of
/// all Z images as the image of `|0…0⟩`, then generate the remaining columns
/// with X images.
fn build_encoder(tableau: &CliffordTableau) -> Result<Matrix> {
    let dim = 1usize << N;
    let mut proj = Matrix::identity(dim);
    for (k, zimg) in tableau.z_images.iter().enumerate() {
        let m = zimg.to_matrix();
        proj = proj.mul(&Matrix::identity(dim).add(&m).scale(Complex64::new(0.5, 0.0)));
        let _ = k;
    }
    let tr = proj.trace();
    if (tr.re - 1.0).abs() > 1e-8 || tr.im.abs() > 1e-8 {
        return Err(Error::Synthesis {
            generator: 0,
            reason: format!("joint eigenspace projector has trace {tr}"),
        });
    }
    // The projector is rank one; any non-null column is the eigenstate.
    let mut best_col = 0;
    let mut best_norm = 0.0f64;
    for c in 0..dim {
        let norm: f64 = (0..dim).map(|r| proj[(r, c)].norm_sqr()).sum();
        if norm > best_norm {
            best_norm = norm;
            best_col = c;
        }
    }
    let mut phi: Vec<Complex64> = (0..dim).map(|r| proj[(r, best_col)]).collect();
    let norm = phi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in phi.iter_mut() {
        *z /= norm;
    }
    // Canonical global phase: first significant entry real positive.
    if let Some(first) = phi.iter().find(|z| z.norm() > 1e-8) {
        let fix = first.conj() / first.norm();
        for z in phi.iter_mut() {
            *z *= fix;
        }
    }
    let x_mats: Vec<Matrix> = tableau.x_images.iter().map(|p| p.to_matrix()).collect();
    let mut u = Matrix::zeros(dim);
    for b in 0..dim {
        let mut v = phi.clone();
        for q in 1..=N {
            if basis_bit(N, b, q) {
                v = x_mats[q - 1].matvec(&v);
            }
        }
        for (r, z) in v.iter().enumerate() {
            u[(r, b)] = *z;
        }
    }
    Ok(u)
}

fn build_correction_unitary(correction: &[Pauli; 16]) -> Matrix {
    let dim = 1usize << N;
    let data_mask = 1usize << (N - DATA_QUBIT);
    let mut w = Matrix::zeros(dim);
    for a_in in 0..dim {
        let mut bits = [false; 4];
        for (i, &q) in SYNDROME_QUBITS.iter().enumerate() {
            // A syndrome bit shows up as a flip away from the initial |1⟩.
            bits[i] = !basis_bit(N, a_in, q);
        }
        let c = correction[Syndrome::from_bits(bits).index()].matrix();
        let d_in = usize::from(basis_bit(N, a_in, DATA_QUBIT));
        for d_out in 0..2 {
            let a_out = (a_in & !data_mask) | (d_out * data_mask);
            w[(a_out, a_in)] = c[(d_out, d_in)];
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::{fidelity_pure, Cardinal, StateVector};
    use crate::pauli::correctable_errors;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn standard_generators_are_frozen() {
        let gens = StabilizerCode::standard_generators();
        assert_eq!(gens[0].to_string(), "+Z2·Y3·Y4·X5");
        assert_eq!(gens[1].to_string(), "+Z1·Y2·Y3·X4");
        assert_eq!(gens[2].to_string(), "+Y2·Z3·Z4·Z5");
        assert_eq!(gens[3].to_string(), "+X1·Z2·X3·Z4");
        for g in &gens {
            assert_eq!(g.weight(), 4);
            assert!(g.is_hermitian());
        }
    }

    #[test]
    fn generators_commute_and_are_independent() {
        let gens = StabilizerCode::standard_generators();
        for a in &gens {
            for b in &gens {
                assert!(a.commutes_with(b).unwrap());
            }
        }
        // No nonempty subset multiplies to the identity pattern.
        for subset in 1u32..16 {
            let mut acc = PauliString::identity(5);
            for (i, g) in gens.iter().enumerate() {
                if (subset >> i) & 1 == 1 {
                    acc = acc.mul(g).unwrap();
                }
            }
            assert!(!acc.has_identity_pattern(), "subset {subset:#b} collapses");
        }
    }

    #[test]
    fn distance_property_holds() {
        let code = StabilizerCode::five_qubit();
        let report = code.verify_distance();
        assert_eq!(report.checked, 105);
        assert!(report.passed(), "violations: {:?}", report.violations);
    }

    #[test]
    fn dropping_a_generator_breaks_distance() {
        let gens = StabilizerCode::standard_generators();
        let (_, violations) = distance_violations(&gens[..3]);
        assert!(!violations.is_empty());
    }

    #[test]
    fn syndrome_examples() {
        let code = StabilizerCode::five_qubit();
        let id = PauliString::identity(5);
        assert!(code.syndrome_of(&id).unwrap().is_trivial());
        let x1 = PauliString::single(5, 1, Pauli::X).unwrap();
        assert_eq!(code.syndrome_of(&x1).unwrap().bits(), [false, true, false, false]);
        assert_eq!(code.syndrome_of(&x1).unwrap().to_string(), "0100");
    }

    #[test]
    fn sixteen_distinct_syndromes() {
        let code = StabilizerCode::five_qubit();
        let mut seen = HashSet::new();
        for e in correctable_errors(5).unwrap() {
            assert!(seen.insert(code.syndrome_of(&e).unwrap()));
        }
        assert_eq!(seen.len(), 16);
    }

    #[test]
    fn canonical_logical_operators() {
        let code = StabilizerCode::five_qubit();
        assert_eq!(code.logical_z().to_string(), "+Z1·Z3·Z4");
        assert_eq!(code.logical_x().to_string(), "+Y1·Z3·Z5");
        for g in code.generators() {
            assert!(code.logical_z().commutes_with(g).unwrap());
            assert!(code.logical_x().commutes_with(g).unwrap());
        }
        assert!(!code.logical_x().commutes_with(&code.logical_z()).unwrap());
    }

    #[test]
    fn tableau_round_trips() {
        let code = StabilizerCode::five_qubit();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let idx = rng.random_range(0..1024usize);
            let p = PauliString::from_pattern_index(5, idx).unwrap();
            let there = code.tableau().image(&p);
            let back = code.tableau().preimage(&there);
            assert_eq!(back, p);
        }
    }

    #[test]
    fn tableau_conjugation_matches_dense() {
        let code = StabilizerCode::five_qubit();
        let u = code.encoder();
        let ud = code.decoder();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let idx = rng.random_range(0..1024usize);
            let p = PauliString::from_pattern_index(5, idx).unwrap();
            let symbolic = code.tableau().preimage(&p).to_matrix();
            let dense = p.to_matrix().conjugated_by(&ud);
            assert!(symbolic.max_abs_diff(&dense) < 1e-10);
            let symbolic_fwd = code.tableau().image(&p).to_matrix();
            let dense_fwd = p.to_matrix().conjugated_by(u);
            assert!(symbolic_fwd.max_abs_diff(&dense_fwd) < 1e-10);
        }
    }

    #[test]
    fn encoder_is_unitary_and_maps_projectors() {
        for signs in all_sign_vectors() {
            let code = StabilizerCode::with_signs(signs).unwrap();
            assert!(code.encoder().unitarity_deviation() < 1e-10);
            let mapped = code.initial_projector().conjugated_by(code.encoder());
            assert!(mapped.max_abs_diff(&code.codespace_projector()) < 1e-10);
            let rank = code.codespace_projector().trace();
            assert!((rank.re - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn encoded_state_lies_in_codespace() {
        let code = StabilizerCode::five_qubit();
        let psi = StateVector::embed_data(5, 2, Cardinal::PlusI, &[1, 3, 4, 5]).unwrap();
        let enc = psi.apply_unitary(code.encoder(), &[1, 2, 3, 4, 5]).unwrap();
        let projected = code.codespace_projector().matvec(enc.amplitudes());
        let diff: f64 = projected
            .iter()
            .zip(enc.amplitudes())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(diff < 1e-10);
    }

    #[test]
    fn logical_codewords_are_orthogonal() {
        let code = StabilizerCode::five_qubit();
        let zero = StateVector::embed_data(5, 2, Cardinal::Zero, &[1, 3, 4, 5])
            .unwrap()
            .apply_unitary(code.encoder(), &[1, 2, 3, 4, 5])
            .unwrap();
        let one = StateVector::embed_data(5, 2, Cardinal::One, &[1, 3, 4, 5])
            .unwrap()
            .apply_unitary(code.encoder(), &[1, 2, 3, 4, 5])
            .unwrap();
        assert!(zero.inner(&one).unwrap().norm() < 1e-12);
    }

    #[test]
    fn decode_restores_data_and_syndromes() {
        let code = StabilizerCode::five_qubit();
        let all = [1, 2, 3, 4, 5];
        let input = StateVector::embed_data(5, 2, Cardinal::Plus, &[1, 3, 4, 5]).unwrap();
        let round =
            input
                .apply_unitary(code.encoder(), &all)
                .unwrap()
                .apply_unitary(&code.decoder(), &all)
                .unwrap();
        let overlap = input.inner(&round).unwrap();
        assert!((overlap.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn decode_reveals_syndrome_as_flips_from_ones() {
        let code = StabilizerCode::five_qubit();
        let all = [1, 2, 3, 4, 5];
        let x1 = PauliString::single(5, 1, Pauli::X).unwrap();
        let state = StateVector::embed_data(5, 2, Cardinal::Zero, &[1, 3, 4, 5])
            .unwrap()
            .apply_unitary(code.encoder(), &all)
            .unwrap()
            .apply_unitary(&x1.to_matrix(), &all)
            .unwrap()
            .apply_unitary(&code.decoder(), &all)
            .unwrap();
        // Syndrome (0,1,0,0) flips the qubit paired with generator 2,
        // which is syndrome qubit 3: expect |1⟩|0⟩(data)|0⟩|1⟩|1⟩.
        let rho = state.to_density();
        let syn = rho.partial_trace(&[1, 3, 4, 5]).unwrap();
        let expected = StateVector::computational(4, 0b1011).unwrap();
        assert!((fidelity_pure(&expected, &syn).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn correction_for_trivial_syndrome_is_identity() {
        let code = StabilizerCode::five_qubit();
        assert_eq!(code.correction_for(Syndrome::from_bits([false; 4])), Pauli::I);
    }

    #[test]
    fn full_pipeline_corrects_every_single_error() {
        let code = StabilizerCode::five_qubit();
        let all = [1, 2, 3, 4, 5];
        for error in correctable_errors(5).unwrap() {
            for input in [Cardinal::Zero, Cardinal::Plus, Cardinal::MinusI] {
                let out = StateVector::embed_data(5, 2, input, &[1, 3, 4, 5])
                    .unwrap()
                    .apply_unitary(code.encoder(), &all)
                    .unwrap()
                    .apply_unitary(&error.to_matrix(), &all)
                    .unwrap()
                    .apply_unitary(&code.decoder(), &all)
                    .unwrap()
                    .apply_unitary(code.correction_unitary(), &all)
                    .unwrap();
                let data = out.to_density().partial_trace(&[2]).unwrap();
                let f = fidelity_pure(&input.state(), &data).unwrap();
                assert!(
                    (f - 1.0).abs() < 1e-10,
                    "error {error} input {input:?} gives fidelity {f}"
                );
            }
        }
    }

    #[test]
    fn logical_action_examples() {
        let code = StabilizerCode::five_qubit();
        assert_eq!(code.logical_action(&PauliString::identity(5)).unwrap(), Pauli::I);
        for (i, g) in code.generators().iter().enumerate() {
            assert_eq!(
                code.logical_action(g).unwrap(),
                Pauli::I,
                "generator {} acts on the code space",
                i + 1
            );
        }
        let lx_g1 = code.logical_x().mul(&code.generators()[0]).unwrap();
        assert_eq!(code.logical_action(&lx_g1).unwrap(), Pauli::X);
        assert_eq!(code.logical_action(&code.logical_x()).unwrap(), Pauli::X);
        assert_eq!(code.logical_action(&code.logical_z()).unwrap(), Pauli::Z);
    }

    #[test]
    fn syndrome_from_tableau_matches_anticommutation() {
        let code = StabilizerCode::five_qubit();
        for idx in 0..1024 {
            let p = PauliString::from_pattern_index(5, idx).unwrap();
            let pushed = code.tableau().preimage(&p);
            let mut bits = [false; 4];
            for (i, &q) in SYNDROME_QUBITS.iter().enumerate() {
                bits[i] = (pushed.x_bits() >> (q - 1)) & 1 == 1;
            }
            assert_eq!(Syndrome::from_bits(bits), code.syndrome_of(&p).unwrap());
        }
    }

    #[test]
    fn logical_action_matches_dense_simulation() {
        let code = StabilizerCode::five_qubit();
        let all = [1, 2, 3, 4, 5];
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..200 {
            let idx = rng.random_range(0..1024usize);
            let p = PauliString::from_pattern_index(5, idx).unwrap();
            let action = code.logical_action(&p).unwrap();
            for input in [Cardinal::Zero, Cardinal::Plus, Cardinal::PlusI] {
                let out = StateVector::embed_data(5, 2, input, &[1, 3, 4, 5])
                    .unwrap()
                    .apply_unitary(code.encoder(), &all)
                    .unwrap()
                    .apply_unitary(&p.to_matrix(), &all)
                    .unwrap()
                    .apply_unitary(&code.decoder(), &all)
                    .unwrap()
                    .apply_unitary(code.correction_unitary(), &all)
                    .unwrap();
                let data = out.to_density().partial_trace(&[2]).unwrap();
                let expected = input
                    .state()
                    .apply_unitary(&action.matrix(), &[1])
                    .unwrap();
                let f = fidelity_pure(&expected, &data).unwrap();
                assert!(
                    (f - 1.0).abs() < 1e-9,
                    "pattern {p} action {action:?} input {input:?} fidelity {f}"
                );
            }
        }
    }

    #[test]
    fn text_format_round_trips() {
        let code = StabilizerCode::with_signs([Sign::Plus, Sign::Minus, Sign::Plus, Sign::Minus])
            .unwrap();
        let text = code.to_text();
        let parsed = StabilizerCode::from_text(&text).unwrap();
        assert_eq!(parsed.signs(), code.signs());
        assert_eq!(parsed.generators(), code.generators());
        assert!(StabilizerCode::from_text("+1 +X1·X2·X3·X4\n").is_err());
    }

    #[test]
    fn correction_table_csv_lists_all_syndromes() {
        let code = StabilizerCode::five_qubit();
        let csv = code.correction_table_csv();
        let lines: Vec<&str> = csv.trim().lines().collect();
        assert_eq!(lines[0], "syndrome,correction");
        assert_eq!(lines.len(), 17);
        assert!(lines[1].starts_with("0000,I"));
    }

    fn all_sign_vectors() -> Vec<[Sign; 4]> {
        (0u8..16)
            .map(|bits| {
                let mut signs = [Sign::Plus; 4];
                for (i, s) in signs.iter_mut().enumerate() {
                    if (bits >> i) & 1 == 1 {
                        *s = Sign::Minus;
                    }
                }
                signs
            })
            .collect()
    }

    #[test]
    fn every_eigenspace_corrects_single_errors() {
        for signs in all_sign_vectors() {
            let code = StabilizerCode::with_signs(signs).unwrap();
            let all = [1, 2, 3, 4, 5];
            let error = PauliString::single(5, 4, Pauli::Y).unwrap();
            let input = Cardinal::PlusI;
            let out = StateVector::embed_data(5, 2, input, &[1, 3, 4, 5])
                .unwrap()
                .apply_unitary(code.encoder(), &all)
                .unwrap()
                .apply_unitary(&error.to_matrix(), &all)
                .unwrap()
                .apply_unitary(&code.decoder(), &all)
                .unwrap()
                .apply_unitary(code.correction_unitary(), &all)
                .unwrap();
            let data = out.to_density().partial_trace(&[2]).unwrap();
            let f = fidelity_pure(&input.state(), &data).unwrap();
            assert!((f - 1.0).abs() < 1e-10, "signs {signs:?} fidelity {f}");
        }
    }
}
