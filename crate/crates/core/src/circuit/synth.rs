//! Constructions of (controlled) cycle-permutation circuits and GHZ
//! preparation.
//!
//! Depth constants, with depth counted by greedy layering:
//! - `nn_cycle(m)`: exactly m-1 SWAPs, depth m-1 (optimal for a
//!   nearest-neighbor chain).
//! - `log_depth_cycle(m)`: m-1 SWAPs in depth ⌈log₂ m⌉ via halving.
//! - `controlled_nn_cycle(m)`: depth 2m-3 (m ≥ 3) on the chain
//!   registers 1..m plus control at wire m+1.
//! - `ghz_circuit(k)`: 1 Hadamard + k-1 CNOTs in ⌈log₂ k⌉ CNOT layers.
//! - `parallel_controlled_cycle(m)`: fan-out + promoted cycle + fan-out
//!   inverse, depth ≤ 2⌈log₂ w⌉ + ⌈log₂ m⌉ with w ≤ ⌈m/2⌉ the widest SWAP
//!   layer, so ≤ 3 log₂ m for m a power of two.

use super::{Circuit, Gate};
use crate::error::{Error, Result};

fn check_m(m: usize, min: usize) -> Result<()> {
    if m < min {
        return Err(Error::InvalidArgument(format!("need m >= {min}, got {m}")));
    }
    Ok(())
}

/// Nearest-neighbor decomposition of the cycle (1 2 … m): SWAP(m-1,m),
/// SWAP(m-2,m-1), …, SWAP(1,2), so basis labels (x₁,…,x_m) map to
/// (x_m,x₁,…,x_{m-1}).
pub fn nn_cycle(m: usize) -> Result<Circuit> {
    check_m(m, 2)?;
    let gates = (1..m).rev().map(|i| Gate::Swap(i, i + 1)).collect();
    Circuit::new(m, 0, 0, gates)
}

/// Divide-and-conquer decomposition: the cycle on a range splits into two
/// half-range cycles run in parallel followed by one transposition of the
/// range heads. Depth ⌈log₂ m⌉, m-1 SWAPs, arbitrary-range gates.
pub fn log_depth_cycle(m: usize) -> Result<Circuit> {
    check_m(m, 2)?;
    let layers = cycle_layers(1, m);
    Circuit::new(m, 0, 0, layers.into_iter().flatten().collect())
}

/// Layers (time-ordered) of the recursive cycle decomposition on the
/// inclusive wire range lo..=hi.
pub(crate) fn cycle_layers(lo: usize, hi: usize) -> Vec<Vec<Gate>> {
    let size = hi - lo + 1;
    if size < 2 {
        return Vec::new();
    }
    if size == 2 {
        return vec![vec![Gate::Swap(lo, hi)]];
    }
    let k = size.div_ceil(2);
    let left = cycle_layers(lo, lo + k - 1);
    let right = cycle_layers(lo + k, hi);
    let mut layers: Vec<Vec<Gate>> = Vec::with_capacity(left.len().max(right.len()) + 1);
    for idx in 0..left.len().max(right.len()) {
        let mut layer = Vec::new();
        if idx < left.len() {
            layer.extend_from_slice(&left[idx]);
        }
        if idx < right.len() {
            layer.extend_from_slice(&right[idx]);
        }
        layers.push(layer);
    }
    layers.push(vec![Gate::Swap(lo, lo + k)]);
    layers
}

/// Controlled cycle on a nearest-neighbor chain: registers at wires 1..m, the
/// control qubit entering at wire m+1. The control is swapped down the chain
/// between Fredkin applications and is left at wire 3 for m ≥ 3 (wire m+1 for
/// m = 2), recorded in `control_final_wire`.
pub fn controlled_nn_cycle(m: usize) -> Result<Circuit> {
    check_m(m, 2)?;
    let control_entry = m + 1;
    let mut gates = Vec::with_capacity(2 * m - 3);
    // Control sits at wire i+2 when the Fredkin on (i, i+1) fires.
    let mut control_at = control_entry;
    for i in (1..m).rev() {
        gates.push(Gate::Fredkin(control_at, i, i + 1));
        if i > 1 {
            gates.push(Gate::Swap(i + 1, control_at));
            control_at = i + 1;
        }
    }
    let mut c = Circuit::new(m, 1, 0, gates)?;
    c.control_final_wire = Some(control_at);
    Ok(c)
}

/// GHZ preparation on k qubits (wires 1..=k): H on wire 1, then CNOT layers
/// that reuse previously flipped qubits as controls, doubling per layer.
pub fn ghz_circuit(k: usize) -> Result<Circuit> {
    check_m(k, 1)?;
    let mut gates = vec![Gate::H(1)];
    gates.extend(fanout_layers(&(1..=k).collect::<Vec<_>>()).into_iter().flatten());
    Circuit::new(k, 0, 0, gates)
}

/// CNOT layers copying the first listed qubit's bit onto the rest, doubling
/// the flipped set each layer.
fn fanout_layers(qubits: &[usize]) -> Vec<Vec<Gate>> {
    let mut layers = Vec::new();
    let mut flipped = 1usize;
    while flipped < qubits.len() {
        let mut layer = Vec::new();
        let sources = flipped;
        for s in 0..sources {
            if flipped >= qubits.len() {
                break;
            }
            layer.push(Gate::Cnot(qubits[s], qubits[flipped]));
            flipped += 1;
        }
        layers.push(layer);
    }
    layers
}

/// Log-depth controlled cycle: a GHZ-branch fan-out from the control onto
/// ancillas, the log-depth cycle with each SWAP promoted to a Fredkin driven
/// by a distinct branch qubit (layer structure preserved), then the fan-out
/// undone so the ancillas return to |0…0⟩.
pub fn parallel_controlled_cycle(m: usize) -> Result<Circuit> {
    check_m(m, 4)?;
    let layers = cycle_layers(1, m);
    let width = layers.iter().map(Vec::len).max().unwrap_or(1);
    let control = m + 1;
    let n_ancilla = width - 1;
    // controllers[0] is the control itself; the rest are ancilla wires.
    let controllers: Vec<usize> =
        std::iter::once(control).chain((0..n_ancilla).map(|k| m + 2 + k)).collect();

    let fan = fanout_layers(&controllers);
    let mut gates: Vec<Gate> = fan.iter().flatten().copied().collect();
    for layer in &layers {
        for (slot, gate) in layer.iter().enumerate() {
            match *gate {
                Gate::Swap(a, b) => gates.push(Gate::Fredkin(controllers[slot], a, b)),
                _ => unreachable!("cycle layers contain only SWAPs"),
            }
        }
    }
    for layer in fan.iter().rev() {
        gates.extend(layer.iter().copied());
    }
    Circuit::new(m, 1, n_ancilla, gates)
}
