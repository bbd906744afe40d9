//! Statevector simulation with deterministic branch enumeration, and the
//! brute-force equivalence check against the n-control Toffoli.
//!
//! Measurements are not sampled. A `MeasureH` forks the current state into
//! both outcomes, so a run returns every measurement branch together with
//! its unnormalized state; branch probability is the squared norm. Branches
//! whose probability falls below [`PRUNE_TOLERANCE`] are dropped. The
//! enumeration order is fixed (outcome 0 before outcome 1), so results are
//! bit-for-bit reproducible.
//!
//! States are dense vectors of `Complex64`. Computational basis inputs run
//! through an internal sparse representation that tracks the nonzero
//! support, which keeps basis-state verification cheap even at eighteen
//! qubits; the representation falls back to dense storage as soon as the
//! support grows past a fixed bound, so the dense semantics are unchanged.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::circuit::{Circuit, Clbit, GateKind, Instruction, Qubit, QubitRole};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Branches with probability below this are dropped during enumeration.
pub const PRUNE_TOLERANCE: f64 = 1e-14;

/// Sparse support bound; past this the state is stored densely.
const SPARSE_LIMIT: usize = 1024;

/// Squared-modulus floor for keeping a sparse entry. Rounding residue from
/// cancelling T phases sits near 1e-32; real amplitudes in any circuit this
/// crate builds stay above 1e-2 in modulus.
const RESIDUE_SQR: f64 = 1e-28;

// ---------------------------------------------------------------------------
// StateVector
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
enum Repr {
    Sparse(BTreeMap<usize, Complex64>),
    Dense(Vec<Complex64>),
}

/// Pure state over a fixed qubit register. Qubit `q` is bit `q` of the
/// basis index (qubit 0 is the least significant bit).
#[derive(Debug, Clone)]
pub struct StateVector {
    n: usize,
    repr: Repr,
}

impl StateVector {
    /// Computational basis state |index>.
    pub fn basis(n: usize, index: usize) -> Self {
        assert!(index < 1usize << n, "basis index out of range");
        let mut m = BTreeMap::new();
        m.insert(index, Complex64::new(1.0, 0.0));
        StateVector {
            n,
            repr: Repr::Sparse(m),
        }
    }

    /// Dense state from explicit amplitudes (length must be 2^n). The
    /// vector is taken as is; no normalization happens.
    pub fn from_dense(n: usize, amps: Vec<Complex64>) -> Self {
        assert_eq!(amps.len(), 1usize << n, "amplitude count must be 2^n");
        StateVector {
            n,
            repr: Repr::Dense(amps),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn norm_sqr(&self) -> f64 {
        match &self.repr {
            Repr::Sparse(m) => m.values().map(|v| v.norm_sqr()).sum(),
            Repr::Dense(v) => v.iter().map(|a| a.norm_sqr()).sum(),
        }
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        match &self.repr {
            Repr::Sparse(m) => m.get(&index).copied().unwrap_or(ZERO),
            Repr::Dense(v) => v[index],
        }
    }

    /// Full amplitude vector, length 2^n.
    pub fn to_dense(&self) -> Vec<Complex64> {
        match &self.repr {
            Repr::Sparse(m) => {
                let mut v = vec![ZERO; 1usize << self.n];
                for (&k, &a) in m {
                    v[k] = a;
                }
                v
            }
            Repr::Dense(v) => v.clone(),
        }
    }

    /// Nonzero amplitudes in index order.
    pub fn nonzero(&self) -> Vec<(usize, Complex64)> {
        match &self.repr {
            Repr::Sparse(m) => m.iter().map(|(&k, &v)| (k, v)).collect(),
            Repr::Dense(v) => v
                .iter()
                .enumerate()
                .filter(|(_, a)| a.norm_sqr() > 0.0)
                .map(|(k, &a)| (k, a))
                .collect(),
        }
    }

    fn densify(&mut self) {
        if let Repr::Sparse(m) = &self.repr {
            let mut v = vec![ZERO; 1usize << self.n];
            for (&k, &a) in m {
                v[k] = a;
            }
            self.repr = Repr::Dense(v);
        }
    }

    fn shrink_or_densify(&mut self) {
        if let Repr::Sparse(m) = &mut self.repr {
            m.retain(|_, v| v.norm_sqr() > RESIDUE_SQR);
            if m.len() > SPARSE_LIMIT {
                self.densify();
            }
        }
    }

    /// Apply one unitary instruction. Panics on `MeasureH` or `Reset`;
    /// those are branch-level operations handled by [`run_branches`].
    pub fn apply(&mut self, instr: &Instruction) {
        let q = &instr.qubits;
        match instr.kind {
            GateKind::X => self.x(q[0]),
            GateKind::H => self.h(q[0]),
            GateKind::S => self.phase(q[0], Complex64::new(0.0, 1.0)),
            GateKind::Sdg => self.phase(q[0], Complex64::new(0.0, -1.0)),
            GateKind::T => self.phase(q[0], Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2)),
            GateKind::Tdg => self.phase(q[0], Complex64::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2)),
            GateKind::Cx => self.cx(q[0], q[1]),
            GateKind::Cz => self.cz(q[0], q[1]),
            GateKind::MeasureH | GateKind::Reset => {
                panic!("{} is not unitary; use run_branches", instr.kind.name())
            }
        }
    }

    /// Apply a plain gate sequence.
    pub fn apply_all(&mut self, seq: &[Instruction]) {
        for instr in seq {
            self.apply(instr);
        }
    }

    fn x(&mut self, q: Qubit) {
        let bit = 1usize << q;
        match &mut self.repr {
            Repr::Sparse(m) => {
                let next: BTreeMap<usize, Complex64> =
                    m.iter().map(|(&k, &v)| (k ^ bit, v)).collect();
                *m = next;
            }
            Repr::Dense(v) => {
                for i in 0..v.len() {
                    if i & bit == 0 {
                        v.swap(i, i | bit);
                    }
                }
            }
        }
    }

    fn h(&mut self, q: Qubit) {
        let bit = 1usize << q;
        match &mut self.repr {
            Repr::Sparse(m) => {
                let mut next: BTreeMap<usize, Complex64> = BTreeMap::new();
                for (&k, &v) in m.iter() {
                    let base = k & !bit;
                    let s = v * FRAC_1_SQRT_2;
                    *next.entry(base).or_insert(ZERO) += s;
                    let e = next.entry(base | bit).or_insert(ZERO);
                    if k & bit == 0 {
                        *e += s;
                    } else {
                        *e -= s;
                    }
                }
                *m = next;
                self.shrink_or_densify();
            }
            Repr::Dense(v) => {
                let mut base = 0;
                while base < v.len() {
                    for i in base..base + bit {
                        let a = v[i];
                        let b = v[i + bit];
                        v[i] = (a + b) * FRAC_1_SQRT_2;
                        v[i + bit] = (a - b) * FRAC_1_SQRT_2;
                    }
                    base += bit << 1;
                }
            }
        }
    }

    fn phase(&mut self, q: Qubit, ph: Complex64) {
        let bit = 1usize << q;
        match &mut self.repr {
            Repr::Sparse(m) => {
                for (k, v) in m.iter_mut() {
                    if k & bit != 0 {
                        *v *= ph;
                    }
                }
            }
            Repr::Dense(v) => {
                let mut base = bit;
                while base < v.len() {
                    for a in &mut v[base..base + bit] {
                        *a *= ph;
                    }
                    base += bit << 1;
                }
            }
        }
    }

    fn cx(&mut self, c: Qubit, t: Qubit) {
        let cbit = 1usize << c;
        let tbit = 1usize << t;
        match &mut self.repr {
            Repr::Sparse(m) => {
                let next: BTreeMap<usize, Complex64> = m
                    .iter()
                    .map(|(&k, &v)| (if k & cbit != 0 { k ^ tbit } else { k }, v))
                    .collect();
                *m = next;
            }
            Repr::Dense(v) => {
                for i in 0..v.len() {
                    if i & cbit != 0 && i & tbit == 0 {
                        v.swap(i, i | tbit);
                    }
                }
            }
        }
    }

    fn cz(&mut self, a: Qubit, b: Qubit) {
        let mask = (1usize << a) | (1usize << b);
        match &mut self.repr {
            Repr::Sparse(m) => {
                for (k, v) in m.iter_mut() {
                    if k & mask == mask {
                        *v = -*v;
                    }
                }
            }
            Repr::Dense(v) => {
                for (i, amp) in v.iter_mut().enumerate() {
                    if i & mask == mask {
                        *amp = -*amp;
                    }
                }
            }
        }
    }

    /// Project qubit `q` onto computational value `m` without
    /// renormalizing. Returns the retained probability.
    pub fn project_z(&mut self, q: Qubit, m: u8) -> f64 {
        let bit = 1usize << q;
        let want = if m == 1 { bit } else { 0 };
        match &mut self.repr {
            Repr::Sparse(map) => {
                map.retain(|k, _| k & bit == want);
                map.values().map(|v| v.norm_sqr()).sum()
            }
            Repr::Dense(v) => {
                let mut p = 0.0;
                for (i, a) in v.iter_mut().enumerate() {
                    if i & bit == want {
                        p += a.norm_sqr();
                    } else {
                        *a = ZERO;
                    }
                }
                p
            }
        }
    }

    /// Amplitude at `index` plus the L2 distance to that single-term state:
    /// returns `(lambda, || self - lambda |index> ||)`.
    pub fn monomial_deviation(&self, index: usize) -> (Complex64, f64) {
        let lambda = self.amplitude(index);
        let rest = (self.norm_sqr() - lambda.norm_sqr()).max(0.0);
        (lambda, rest.sqrt())
    }

    /// L2 distance to `scale * expected`.
    pub fn scaled_deviation(&self, expected: &[Complex64], scale: Complex64) -> f64 {
        assert_eq!(expected.len(), 1usize << self.n);
        match &self.repr {
            Repr::Dense(v) => v
                .iter()
                .zip(expected)
                .map(|(a, e)| (a - scale * e).norm_sqr())
                .sum::<f64>()
                .sqrt(),
            Repr::Sparse(m) => {
                let mut total = 0.0;
                let mut covered = 0.0;
                for (&k, &a) in m {
                    total += (a - scale * expected[k]).norm_sqr();
                    covered += expected[k].norm_sqr();
                }
                let missing: f64 = expected.iter().map(|e| e.norm_sqr()).sum::<f64>() - covered;
                (total + scale.norm_sqr() * missing.max(0.0)).sqrt()
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Branch enumeration
// ---------------------------------------------------------------------------

/// One measurement branch: the recorded outcomes (indexed by classical
/// bit; `None` means never written) and the unnormalized final state.
#[derive(Debug, Clone)]
pub struct Branch {
    pub outcomes: Vec<Option<u8>>,
    pub state: StateVector,
}

impl Branch {
    /// Branch probability.
    pub fn probability(&self) -> f64 {
        self.state.norm_sqr()
    }

    /// Human-readable outcome signature, e.g. `c0=1`.
    pub fn outcome_label(&self) -> String {
        outcome_label(&self.outcomes)
    }
}

fn outcome_label(outcomes: &[Option<u8>]) -> String {
    let parts: Vec<String> = outcomes
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|b| format!("c{i}={b}")))
        .collect();
    if parts.is_empty() {
        "no measurements".to_string()
    } else {
        parts.join(",")
    }
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error("state has {state} qubits but the circuit register has {circuit}")]
    RegisterMismatch { state: usize, circuit: usize },
    #[error("instruction conditioned on classical bit {0} before any measurement wrote it")]
    ConditionBeforeWrite(Clbit),
}

/// Run a dynamic circuit on `initial`, enumerating every measurement
/// branch. Branch states are unnormalized; pruning drops branches whose
/// probability is below [`PRUNE_TOLERANCE`]. Enumeration is deterministic:
/// outcome 0 is explored before outcome 1 at each measurement.
pub fn run_branches(circuit: &Circuit, initial: StateVector) -> Result<Vec<Branch>, SimError> {
    if initial.num_qubits() != circuit.num_qubits() {
        return Err(SimError::RegisterMismatch {
            state: initial.num_qubits(),
            circuit: circuit.num_qubits(),
        });
    }
    let mut branches = vec![Branch {
        outcomes: vec![None; circuit.num_clbits()],
        state: initial,
    }];
    for instr in circuit.instructions() {
        let mut next: Vec<Branch> = Vec::with_capacity(branches.len());
        for mut branch in branches {
            if let Some((c, want)) = instr.condition {
                match branch.outcomes[c] {
                    None => return Err(SimError::ConditionBeforeWrite(c)),
                    Some(bit) if bit != want => {
                        next.push(branch);
                        continue;
                    }
                    _ => {}
                }
            }
            match instr.kind {
                GateKind::MeasureH => {
                    let q = instr.qubits[0];
                    let c = instr.clbit.expect("validated circuit");
                    branch.state.h(q);
                    for m in 0..2u8 {
                        let mut s = branch.state.clone();
                        let p = s.project_z(q, m);
                        if p > PRUNE_TOLERANCE {
                            let mut outcomes = branch.outcomes.clone();
                            outcomes[c] = Some(m);
                            next.push(Branch { outcomes, state: s });
                        }
                    }
                }
                GateKind::Reset => {
                    let q = instr.qubits[0];
                    for m in 0..2u8 {
                        let mut s = branch.state.clone();
                        let p = s.project_z(q, m);
                        if p > PRUNE_TOLERANCE {
                            if m == 1 {
                                s.x(q);
                            }
                            next.push(Branch {
                                outcomes: branch.outcomes.clone(),
                                state: s,
                            });
                        }
                    }
                }
                _ => {
                    branch.state.apply(instr);
                    next.push(branch);
                }
            }
        }
        branches = next;
    }
    Ok(branches)
}

/// Dense unitary of a plain gate sequence, column major:
/// `result[col][row]` is `<row|U|col>`. Intended for small registers.
pub fn unitary_of(seq: &[Instruction], num_qubits: usize) -> Vec<Vec<Complex64>> {
    (0..1usize << num_qubits)
        .map(|col| {
            let mut s = StateVector::basis(num_qubits, col);
            s.apply_all(seq);
            s.to_dense()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// CnX oracle
// ---------------------------------------------------------------------------

/// Index action of the n-control Toffoli: flip the bit at position
/// `target_bit` iff every bit of `control_mask` is set. This is its own
/// inverse.
pub fn cnx_index(index: usize, control_mask: usize, target_bit: usize) -> usize {
    if index & control_mask == control_mask {
        index ^ (1 << target_bit)
    } else {
        index
    }
}

/// Apply the oracle permutation to a dense state.
pub fn apply_cnx(amps: &[Complex64], control_mask: usize, target_bit: usize) -> Vec<Complex64> {
    let mut out = vec![ZERO; amps.len()];
    for (i, &a) in amps.iter().enumerate() {
        out[cnx_index(i, control_mask, target_bit)] = a;
    }
    out
}

// ---------------------------------------------------------------------------
// Verification against the oracle
// ---------------------------------------------------------------------------

/// Qubit positions of the synthesis register, read from a circuit role map.
#[derive(Debug, Clone)]
pub struct CnxLayout {
    pub controls: Vec<Qubit>,
    pub target: Qubit,
    pub ancilla: Option<Qubit>,
}

impl CnxLayout {
    pub fn from_circuit(circuit: &Circuit) -> Result<Self, VerifyError> {
        let roles = circuit.roles().ok_or(VerifyError::MissingRoles)?;
        let mut controls: Vec<(usize, Qubit)> = Vec::new();
        let mut target = None;
        let mut ancilla = None;
        for (q, role) in roles.iter().enumerate() {
            match role {
                QubitRole::Control(i) => controls.push((*i, q)),
                QubitRole::Target => {
                    if target.replace(q).is_some() {
                        return Err(VerifyError::BadRoles("more than one target".into()));
                    }
                }
                QubitRole::Ancilla => {
                    if ancilla.replace(q).is_some() {
                        return Err(VerifyError::BadRoles("more than one ancilla".into()));
                    }
                }
            }
        }
        controls.sort_unstable();
        for (expect, (got, _)) in (1..).zip(&controls) {
            if *got != expect {
                return Err(VerifyError::BadRoles(format!(
                    "control numbering is not 1..{}: found c{}",
                    controls.len(),
                    got
                )));
            }
        }
        let target = target.ok_or_else(|| VerifyError::BadRoles("no target".into()))?;
        Ok(CnxLayout {
            controls: controls.into_iter().map(|(_, q)| q).collect(),
            target,
            ancilla,
        })
    }

    pub fn n(&self) -> usize {
        self.controls.len()
    }

    /// Map an (n+1)-bit assignment `x` (control bits low, target bit at
    /// position n) plus an ancilla value to a full register index.
    fn embed(&self, x: usize, anc: u8) -> usize {
        let mut idx = 0;
        for (i, &q) in self.controls.iter().enumerate() {
            if x >> i & 1 == 1 {
                idx |= 1 << q;
            }
        }
        if x >> self.controls.len() & 1 == 1 {
            idx |= 1 << self.target;
        }
        if anc == 1 {
            idx |= 1 << self.ancilla.expect("ancilla value without ancilla qubit");
        }
        idx
    }

    /// Oracle action in the compact (n+1)-bit space.
    fn oracle_x(&self, x: usize) -> usize {
        let n = self.controls.len();
        let mask = (1usize << n) - 1;
        if x & mask == mask {
            x ^ (1 << n)
        } else {
            x
        }
    }
}

/// Knobs for [`verify_cnx`]. Defaults match the crate-wide verification
/// policy: exhaustive basis sweep up to ten controls, 256 sampled basis
/// states plus Haar-random states beyond that, tolerance 1e-10.
#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub tolerance: f64,
    pub seed: u64,
    pub exhaustive_limit: usize,
    pub basis_samples: usize,
    pub haar_samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            tolerance: 1e-10,
            seed: 7,
            exhaustive_limit: 10,
            basis_samples: 256,
            haar_samples: 20,
        }
    }
}

/// Successful verification summary.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub n: usize,
    pub exhaustive: bool,
    pub basis_inputs: usize,
    pub haar_inputs: usize,
    pub max_branches: usize,
    pub max_deviation: f64,
    /// Per-outcome branch amplitude, proven input-independent.
    pub outcome_phases: Vec<(String, Complex64)>,
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("circuit has no role map, cannot identify controls and target")]
    MissingRoles,
    #[error("bad role map: {0}")]
    BadRoles(String),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("{input}: branch [{outcome}] deviates from the target action by {deviation:.3e} (tolerance {tolerance:.1e})")]
    BranchMismatch {
        input: String,
        outcome: String,
        deviation: f64,
        tolerance: f64,
    },
    #[error("branch [{outcome}]: amplitude depends on the input ({deviation:.3e} between {first} and {second})")]
    PhaseDrift {
        outcome: String,
        first: String,
        second: String,
        deviation: f64,
    },
    #[error("{input}: branch probabilities sum to {total:.12} instead of 1")]
    ProbabilityLoss { input: String, total: f64 },
    #[error("{input}: branch [{outcome}] appeared here but on no basis input")]
    UnseenOutcome { input: String, outcome: String },
}

struct BranchRecord {
    outcomes: Vec<Option<u8>>,
    lambda: Complex64,
    deviation: f64,
}

struct InputRecord {
    label: String,
    total_probability: f64,
    branches: Vec<BranchRecord>,
}

fn check_basis_input(
    circuit: &Circuit,
    layout: &CnxLayout,
    x: usize,
) -> Result<InputRecord, VerifyError> {
    let label = format!("basis input {:#b}", x);
    let nq = circuit.num_qubits();
    let start = StateVector::basis(nq, layout.embed(x, 0));
    let branches = run_branches(circuit, start)?;
    let y = layout.oracle_x(x);
    let mut total = 0.0;
    let mut records = Vec::with_capacity(branches.len());
    // Every branch must return the ancilla to |0>, so the expected state is
    // a single basis vector independent of the measurement record.
    for b in &branches {
        total += b.probability();
        let (lambda, deviation) = b.state.monomial_deviation(layout.embed(y, 0));
        records.push(BranchRecord {
            outcomes: b.outcomes.clone(),
            lambda,
            deviation,
        });
    }
    Ok(InputRecord {
        label,
        total_probability: total,
        branches: records,
    })
}

fn check_haar_input(
    circuit: &Circuit,
    layout: &CnxLayout,
    sample: usize,
    psi: &[Complex64],
    phases: &BTreeMap<Vec<Option<u8>>, (Complex64, String)>,
    tolerance: f64,
) -> Result<(f64, usize), VerifyError> {
    let label = format!("haar input {sample}");
    let nq = circuit.num_qubits();
    let n = layout.n();
    let dim_x = 1usize << (n + 1);

    // Embed psi (over controls+target) into the full register, ancilla 0.
    let mut full = vec![ZERO; 1usize << nq];
    for x in 0..dim_x {
        full[layout.embed(x, 0)] = psi[x];
    }
    let branches = run_branches(circuit, StateVector::from_dense(nq, full))?;

    // Oracle-evolved reference in the compact space.
    let mut evolved = vec![ZERO; dim_x];
    for x in 0..dim_x {
        evolved[layout.oracle_x(x)] = psi[x];
    }

    // The ancilla ends in |0> for every branch, so one expected vector
    // serves all of them; only the branch phase lambda differs.
    let mut expected = vec![ZERO; 1usize << nq];
    for x in 0..dim_x {
        expected[layout.embed(x, 0)] = evolved[x];
    }

    let mut worst: f64 = 0.0;
    for b in &branches {
        let outcome = outcome_label(&b.outcomes);
        let (lambda, _) = phases
            .get(&b.outcomes)
            .ok_or_else(|| VerifyError::UnseenOutcome {
                input: label.clone(),
                outcome: outcome.clone(),
            })?;
        let deviation = b.state.scaled_deviation(&expected, *lambda);
        if deviation > tolerance {
            return Err(VerifyError::BranchMismatch {
                input: label,
                outcome,
                deviation,
                tolerance,
            });
        }
        worst = worst.max(deviation);
    }
    Ok((worst, branches.len()))
}

/// Sample a Haar-random pure state of dimension `dim`: i.i.d. complex
/// Gaussian amplitudes, normalized.
pub fn haar_state(dim: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..dim)
        .map(|_| {
            let u1: f64 = rng.gen();
            let u2: f64 = rng.gen();
            let r = (-2.0 * (1.0 - u1).ln()).sqrt();
            let (s, c) = (2.0 * std::f64::consts::PI * u2).sin_cos();
            Complex64::new(r * c, r * s)
        })
        .collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut v {
        *a /= norm;
    }
    v
}

/// Brute-force equivalence check of `circuit` against the n-control
/// Toffoli on its role-mapped register.
///
/// Basis phase: every (or, past the exhaustive limit, 256 sampled)
/// control+target basis state with the ancilla in |0> must come out as a
/// single basis state: the oracle image, the ancilla carrying the measured
/// value (|0> when nothing is measured), scaled by a per-outcome amplitude
/// that must not depend on the input. Haar phase: random superposition
/// inputs must map to the oracle image scaled by the same per-outcome
/// amplitudes. Either phase failing returns the offending input.
pub fn verify_cnx(circuit: &Circuit, opts: &VerifyOptions) -> Result<VerifyReport, VerifyError> {
    let layout = CnxLayout::from_circuit(circuit)?;
    let n = layout.n();
    let dim_x = 1usize << (n + 1);
    let tolerance = opts.tolerance;

    let exhaustive = n <= opts.exhaustive_limit;
    let inputs: Vec<usize> = if exhaustive {
        (0..dim_x).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        (0..opts.basis_samples)
            .map(|_| rng.gen_range(0..dim_x))
            .collect()
    };

    let records: Vec<Result<InputRecord, VerifyError>> = inputs
        .par_iter()
        .map(|&x| check_basis_input(circuit, &layout, x))
        .collect();

    let mut phases: BTreeMap<Vec<Option<u8>>, (Complex64, String)> = BTreeMap::new();
    let mut max_deviation: f64 = 0.0;
    let mut max_branches = 0;
    for record in records {
        let record = record?;
        if (record.total_probability - 1.0).abs() > tolerance {
            return Err(VerifyError::ProbabilityLoss {
                input: record.label,
                total: record.total_probability,
            });
        }
        max_branches = max_branches.max(record.branches.len());
        for b in record.branches {
            let outcome = outcome_label(&b.outcomes);
            if b.deviation > tolerance {
                return Err(VerifyError::BranchMismatch {
                    input: record.label,
                    outcome,
                    deviation: b.deviation,
                    tolerance,
                });
            }
            max_deviation = max_deviation.max(b.deviation);
            match phases.get(&b.outcomes) {
                None => {
                    phases.insert(b.outcomes, (b.lambda, record.label.clone()));
                }
                Some((reference, first)) => {
                    let drift = (b.lambda - reference).norm();
                    if drift > tolerance {
                        return Err(VerifyError::PhaseDrift {
                            outcome,
                            first: first.clone(),
                            second: record.label,
                            deviation: drift,
                        });
                    }
                    max_deviation = max_deviation.max(drift);
                }
            }
        }
    }

    // Haar-random superposition inputs, checked against the amplitudes
    // calibrated on basis inputs.
    let states: Vec<Vec<Complex64>> = (0..opts.haar_samples)
        .map(|j| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(1 + j as u64);
            haar_state(dim_x, &mut rng)
        })
        .collect();
    let haar_results: Vec<Result<(f64, usize), VerifyError>> = states
        .par_iter()
        .enumerate()
        .map(|(j, psi)| check_haar_input(circuit, &layout, j, psi, &phases, tolerance))
        .collect();
    for r in haar_results {
        let (dev, nb) = r?;
        max_deviation = max_deviation.max(dev);
        max_branches = max_branches.max(nb);
    }

    Ok(VerifyReport {
        n,
        exhaustive,
        basis_inputs: inputs.len(),
        haar_inputs: opts.haar_samples,
        max_branches,
        max_deviation,
        outcome_phases: phases
            .into_iter()
            .map(|(sig, (lambda, _))| (outcome_label(&sig), lambda))
            .collect(),
    })
}
