//! Cycle-permutation circuits: synthesis, layering, verification, and text
//! emission.
//!
//! Wires are 1-based and fixed for a circuit: state registers occupy wires
//! 1..=m, the control qubit (when present) is wire m+1, and ancilla qubits
//! follow at m+2..=m+1+A. Wires are chain positions: a SWAP moves the
//! *contents* of two wires, so the control qubit can travel along a
//! nearest-neighbor chain while every gate stays local. The register
//! convention for the cycle (1 2 … m) is "the content of register i moves to
//! register i+1 (mod m)": basis labels (x₁,…,x_m) map to (x_m,x₁,…,x_{m-1}).

mod format;
mod synth;
mod verify;

pub use format::{emit_lines, emit_qasm, parse_lines, parse_qasm};
pub use synth::{
    controlled_nn_cycle, ghz_circuit, log_depth_cycle, nn_cycle, parallel_controlled_cycle,
};
pub use verify::{verify_permutation, VerifyReport};

use std::collections::HashMap;

use crate::error::{Error, Result};

/// A gate over 1-based wire labels; controls come first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    Swap(usize, usize),
    /// Controlled SWAP (control, target, target).
    Fredkin(usize, usize, usize),
    /// (control, target).
    Cnot(usize, usize),
    H(usize),
    /// P = diag(1, i).
    P(usize),
    /// P† = diag(1, -i).
    Pdag(usize),
}

impl Gate {
    pub fn operands(&self) -> Vec<usize> {
        match *self {
            Gate::Swap(a, b) => vec![a, b],
            Gate::Fredkin(c, a, b) => vec![c, a, b],
            Gate::Cnot(c, t) => vec![c, t],
            Gate::H(q) | Gate::P(q) | Gate::Pdag(q) => vec![q],
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Gate::Swap(..) => "SWAP",
            Gate::Fredkin(..) => "FREDKIN",
            Gate::Cnot(..) => "CNOT",
            Gate::H(_) => "H",
            Gate::P(_) => "P",
            Gate::Pdag(_) => "PDAG",
        }
    }
}

/// An ordered gate list over registers, an optional control, and ancillas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    pub n_registers: usize,
    /// 0 or 1.
    pub n_control: usize,
    pub n_ancilla: usize,
    pub gates: Vec<Gate>,
    /// Greedy-layering depth, recorded at synthesis.
    pub declared_depth: usize,
    /// Where the control content ends up (the star in the chain diagrams);
    /// equals the control wire when the circuit restores it.
    pub control_final_wire: Option<usize>,
}

impl Circuit {
    pub fn new(n_registers: usize, n_control: usize, n_ancilla: usize, gates: Vec<Gate>) -> Result<Self> {
        let control_final_wire = (n_control == 1).then(|| n_registers + 1);
        let mut c = Self { n_registers, n_control, n_ancilla, gates, declared_depth: 0, control_final_wire };
        c.declared_depth = c.depth();
        c.validate()?;
        Ok(c)
    }

    pub fn n_wires(&self) -> usize {
        self.n_registers + self.n_control + self.n_ancilla
    }

    /// The control's wire (m+1) when the circuit has one.
    pub fn control_wire(&self) -> Option<usize> {
        (self.n_control == 1).then(|| self.n_registers + 1)
    }

    pub fn ancilla_wires(&self) -> std::ops::RangeInclusive<usize> {
        let lo = self.n_registers + self.n_control + 1;
        lo..=self.n_wires()
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn swap_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Swap(..))).count()
    }

    pub fn cnot_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Cnot(..))).count()
    }

    /// Greedy ASAP layering depth: gates sharing any operand wire conflict.
    pub fn depth(&self) -> usize {
        depth_of(&self.gates)
    }

    /// Number of layers occupied by CNOT gates under greedy layering.
    pub fn cnot_layer_count(&self) -> usize {
        let mut busy: HashMap<usize, usize> = HashMap::new();
        let mut cnot_layers = std::collections::BTreeSet::new();
        for g in &self.gates {
            let layer = 1 + g.operands().iter().map(|w| busy.get(w).copied().unwrap_or(0)).max().unwrap_or(0);
            for w in g.operands() {
                busy.insert(w, layer);
            }
            if matches!(g, Gate::Cnot(..)) {
                cnot_layers.insert(layer);
            }
        }
        cnot_layers.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_control > 1 {
            return Err(Error::InvalidArgument("at most one control wire".into()));
        }
        let n = self.n_wires();
        for (k, g) in self.gates.iter().enumerate() {
            let ops = g.operands();
            for &w in &ops {
                if w == 0 || w > n {
                    return Err(Error::InvalidArgument(format!(
                        "gate {k}: wire {w} outside 1..={n}"
                    )));
                }
            }
            let mut sorted = ops.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != ops.len() {
                return Err(Error::InvalidArgument(format!("gate {k}: repeated operand")));
            }
        }
        if self.declared_depth != self.depth() {
            return Err(Error::InvalidArgument(format!(
                "declared depth {} does not match greedy layering {}",
                self.declared_depth,
                self.depth()
            )));
        }
        Ok(())
    }
}

pub(crate) fn depth_of(gates: &[Gate]) -> usize {
    let mut busy: HashMap<usize, usize> = HashMap::new();
    let mut depth = 0;
    for g in gates {
        let layer = 1 + g.operands().iter().map(|w| busy.get(w).copied().unwrap_or(0)).max().unwrap_or(0);
        for w in g.operands() {
            busy.insert(w, layer);
        }
        depth = depth.max(layer);
    }
    depth
}

/// The cycle (1 2 … m) as a content map: entry k-1 holds the register that
/// receives the content of register k.
pub fn cycle_permutation(m: usize) -> Vec<usize> {
    (1..=m).map(|k| k % m + 1).collect()
}

/// Composes permutations given as content maps: `after[before[k]]`.
pub fn compose_permutations(before: &[usize], after: &[usize]) -> Vec<usize> {
    before.iter().map(|&x| after[x - 1]).collect()
}

/// The cycle (a₁ a₂ … a_k) on n elements, as a content map.
pub fn cycle_on(n: usize, elements: &[usize]) -> Vec<usize> {
    let mut p: Vec<usize> = (1..=n).collect();
    for w in elements.windows(2) {
        p[w[0] - 1] = w[1];
    }
    if elements.len() > 1 {
        p[elements[elements.len() - 1] - 1] = elements[0];
    }
    p
}
