//! SWAP-test and cycle-test simulation, exact and shot-sampled, in two
//! independent implementations.
//!
//! The formula path evaluates p(0) directly from the trace-product invariant:
//! p(0) = (1 + Re Δ)/2 on the REAL branch and p(0) = (1 + Im Δ)/2 on the IMAG
//! branch. The gate-level path builds the joint state of control, ancillas,
//! and m qudit registers, runs H — controlled cycle — (P on IMAG) — H on the
//! control line, and reads p(0) by the Born rule; it exists to validate
//! circuit synthesis against the formula oracle.
//!
//! Conventions fixed here and relied on by the tests:
//! - The controlled cycle moves the content of register i to register i+1
//!   (mod m), so the register unitary satisfies Tr(W ρ_{i₁}⊗⋯⊗ρ_{i_m})
//!   = conj(Δ_{i₁…i_m}), and with the phase gate P = diag(1, i) on the
//!   control the outcome-0 probability lands on (1 + Im Δ)/2 exactly.
//! - State-vector layout: the control qubit is the most significant
//!   subsystem, then ancillas, then registers 1…m.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Binomial, Distribution};
use serde::Serialize;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::sim::SlotState;
use crate::states::{bargmann, StateTuple};

/// Which part of the invariant the interference measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Branch {
    Real,
    Imag,
}

/// One cycle-test configuration.
#[derive(Debug, Clone)]
pub struct CycleTestSpec {
    pub tuple: StateTuple,
    pub indices: Vec<usize>,
    pub branch: Branch,
    /// 0 means exact evaluation.
    pub shots: u64,
    pub seed: u64,
}

impl CycleTestSpec {
    pub fn new(tuple: StateTuple, indices: Vec<usize>, branch: Branch) -> Result<Self> {
        let spec = Self { tuple, indices, branch, shots: 0, seed: 0 };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_shots(mut self, shots: u64, seed: u64) -> Self {
        self.shots = shots;
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.indices.len() < 2 {
            return Err(Error::InvalidArgument(
                "a cycle test needs an index sequence of length >= 2".into(),
            ));
        }
        for &i in &self.indices {
            self.tuple.state(i)?;
        }
        Ok(())
    }

    fn invariant_part(&self) -> Result<f64> {
        let inv = bargmann(&self.tuple, &self.indices)?;
        Ok(match self.branch {
            Branch::Real => inv.value.re,
            Branch::Imag => inv.value.im,
        })
    }
}

/// Outcome of a cycle test.
#[derive(Debug, Clone, Serialize)]
pub struct CycleTestResult {
    pub p0_exact: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p0_estimate: Option<f64>,
    /// (n₀, n₁) with n₀ + n₁ = shots.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counts: Option<(u64, u64)>,
    /// 2·p0 - 1: Re Δ (REAL) or Im Δ (IMAG); from the estimate when sampled.
    pub implied_invariant_part: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
}

impl CycleTestResult {
    fn exact(p0: f64) -> Self {
        Self {
            p0_exact: p0,
            p0_estimate: None,
            counts: None,
            implied_invariant_part: 2.0 * p0 - 1.0,
            stderr: None,
        }
    }

    fn sampled(p0: f64, shots: u64, seed: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let n0 = Binomial::new(shots, p0.clamp(0.0, 1.0))
            .expect("probability validated")
            .sample(&mut rng);
        let estimate = n0 as f64 / shots as f64;
        Self {
            p0_exact: p0,
            p0_estimate: Some(estimate),
            counts: Some((n0, shots - n0)),
            implied_invariant_part: 2.0 * estimate - 1.0,
            stderr: Some((estimate * (1.0 - estimate) / shots as f64).sqrt()),
        }
    }
}

/// Exact outcome-0 probability from the trace-product invariant (the oracle
/// path). Requires `shots == 0`.
pub fn exact_probability(spec: &CycleTestSpec) -> Result<CycleTestResult> {
    spec.validate()?;
    if spec.shots != 0 {
        return Err(Error::InvalidArgument("exact_probability requires shots = 0".into()));
    }
    Ok(CycleTestResult::exact((1.0 + spec.invariant_part()?) / 2.0))
}

/// Shot-sampled outcome: counts are Binomial(shots, p0) drawn from a ChaCha12
/// stream seeded by `spec.seed`, so results are a deterministic function of
/// (seed, shots, p0).
pub fn sample(spec: &CycleTestSpec) -> Result<CycleTestResult> {
    spec.validate()?;
    if spec.shots == 0 {
        return Err(Error::InvalidArgument("sample requires shots >= 1".into()));
    }
    let p0 = (1.0 + spec.invariant_part()?) / 2.0;
    Ok(CycleTestResult::sampled(p0, spec.shots, spec.seed))
}

/// Runs the full interference circuit at gate level and reads p(0) by the
/// Born rule; mixed inputs are averaged over their eigendecompositions.
/// Samples counts on top of the gate-level probability when `shots > 0`.
pub fn gate_level_simulate(spec: &CycleTestSpec, circuit: &Circuit) -> Result<CycleTestResult> {
    let run = gate_level_run(spec, circuit)?;
    if spec.shots == 0 {
        Ok(CycleTestResult::exact(run.p0))
    } else {
        Ok(CycleTestResult::sampled(run.p0, spec.shots, spec.seed))
    }
}

/// Gate-level outcome with diagnostics.
#[derive(Debug, Clone)]
pub struct GateLevelRun {
    pub p0: f64,
    /// Probability weight on ancilla configurations other than |0…0⟩ after
    /// the full circuit, ensemble-averaged.
    pub ancilla_leak: f64,
}

pub fn gate_level_run(spec: &CycleTestSpec, circuit: &Circuit) -> Result<GateLevelRun> {
    spec.validate()?;
    let m = spec.indices.len();
    if circuit.n_registers != m {
        return Err(Error::CircuitMismatch(format!(
            "circuit has {} registers, spec needs {m}",
            circuit.n_registers
        )));
    }
    if circuit.n_control == 0 && circuit.n_ancilla > 0 {
        return Err(Error::CircuitMismatch(
            "uncontrolled circuits with ancillas are not supported".into(),
        ));
    }

    // Ensemble decomposition: each register contributes (weight, vector)
    // choices; pure-by-construction members contribute their amplitudes.
    let d = spec.tuple.dim();
    let mut register_choices: Vec<Vec<(f64, Vec<Complex64>)>> = Vec::with_capacity(m);
    for &i in &spec.indices {
        if let Some(p) = spec.tuple.pure_part(i)? {
            register_choices.push(vec![(1.0, p.amplitudes().iter().copied().collect())]);
        } else {
            let eig = spec.tuple.state(i)?.eigensystem();
            register_choices.push(
                eig.into_iter()
                    .filter(|(w, _)| *w > 1e-14)
                    .map(|(w, v)| (w, v.iter().copied().collect()))
                    .collect(),
            );
        }
    }

    let mut p0 = 0.0;
    let mut leak = 0.0;
    let mut selection = vec![0usize; m];
    loop {
        let weight: f64 = selection.iter().zip(&register_choices).map(|(&k, c)| c[k].0).product();
        if weight > 0.0 {
            let vectors: Vec<&[Complex64]> = selection
                .iter()
                .zip(&register_choices)
                .map(|(&k, c)| c[k].1.as_slice())
                .collect();
            let run = run_pure(spec, circuit, d, &vectors)?;
            p0 += weight * run.p0;
            leak += weight * run.ancilla_leak;
        }
        // advance the mixed-radix selection
        let mut pos = 0;
        loop {
            if pos == m {
                return Ok(GateLevelRun { p0, ancilla_leak: leak });
            }
            selection[pos] += 1;
            if selection[pos] < register_choices[pos].len() {
                break;
            }
            selection[pos] = 0;
            pos += 1;
        }
    }
}

/// Wire -> slot map. Slot order: the test's control qubit (slot 0, most
/// significant), then circuit ancillas, then registers; the slot layout is
/// the same whether the circuit carries its own control wire or gets
/// promoted.
fn wire_to_slot(circuit: &Circuit, wire: usize) -> usize {
    let m = circuit.n_registers;
    if wire <= m {
        circuit.n_ancilla + wire
    } else if wire == m + 1 && circuit.n_control == 1 {
        0
    } else {
        wire - m - 1
    }
}

fn run_pure(
    spec: &CycleTestSpec,
    circuit: &Circuit,
    d: usize,
    registers: &[&[Complex64]],
) -> Result<GateLevelRun> {
    let qubit0 = vec![Complex64::ONE, Complex64::ZERO];
    let mut factors: Vec<Vec<Complex64>> = Vec::new();
    factors.push(qubit0.clone()); // the test's control, slot 0
    for _ in 0..circuit.n_ancilla {
        factors.push(qubit0.clone());
    }
    for r in registers {
        if r.len() != d {
            return Err(Error::DimensionMismatch { expected: d, actual: r.len() });
        }
        factors.push(r.to_vec());
    }
    let mut state = SlotState::product(&factors)?;

    let control_slot = 0usize;
    state.hadamard(control_slot)?;

    let promote = circuit.n_control == 0;
    for gate in &circuit.gates {
        match *gate {
            Gate::Swap(a, b) if promote => {
                state.fredkin(control_slot, wire_to_slot(circuit, a), wire_to_slot(circuit, b))?
            }
            Gate::Swap(a, b) => state.swap(wire_to_slot(circuit, a), wire_to_slot(circuit, b))?,
            Gate::Fredkin(c, a, b) => state.fredkin(
                wire_to_slot(circuit, c),
                wire_to_slot(circuit, a),
                wire_to_slot(circuit, b),
            )?,
            Gate::Cnot(c, t) => {
                state.cnot(wire_to_slot(circuit, c), wire_to_slot(circuit, t))?
            }
            Gate::H(q) => state.hadamard(wire_to_slot(circuit, q))?,
            Gate::P(q) => state.phase(wire_to_slot(circuit, q), Complex64::I)?,
            Gate::Pdag(q) => state.phase(wire_to_slot(circuit, q), -Complex64::I)?,
        }
    }

    // The control content may have been parked elsewhere by chain swaps.
    let final_control_slot = match circuit.control_final_wire {
        Some(star) if circuit.n_control == 1 => wire_to_slot(circuit, star),
        _ => control_slot,
    };
    let ancilla_slots: Vec<usize> = (1..=circuit.n_ancilla).collect();
    let leak = state.weight_outside_zero(&ancilla_slots)?;

    if spec.branch == Branch::Imag {
        state.phase(final_control_slot, Complex64::I)?;
    }
    state.hadamard(final_control_slot)?;
    let p0 = state.prob_digit_zero(final_control_slot)?;
    Ok(GateLevelRun { p0, ancilla_leak: leak })
}
