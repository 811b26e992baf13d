//! Exhaustive permutation verification by symbolic label tracking.
//!
//! Register wires carry opaque labels and bit wires (control, ancillas) carry
//! 0/1 values; SWAP and Fredkin act as label moves, so a single symbolic run
//! per control value covers every basis labeling at once. For controlled
//! circuits the control=0 run fixes the reference layout (the circuit may
//! relocate wires unconditionally, e.g. the chain construction parks the
//! control elsewhere); the realized permutation is read off the control=1 run
//! relative to that layout.

use super::{Circuit, Gate};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub pass: bool,
    /// Content map realized on register labels (1-based), when well defined.
    pub realized: Option<Vec<usize>>,
    pub expected: Vec<usize>,
    pub gate_count: usize,
    /// Depth recomputed by greedy layering.
    pub depth: usize,
    /// First offending basis label on mismatch.
    pub failure: Option<String>,
    /// Bit wires other than the control returned to 0 in every run.
    pub ancillas_restored: bool,
    /// The control bit survived at `control_final_wire` in every run.
    pub control_preserved: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sym {
    Bit(u8),
    Label(usize),
}

/// Runs the circuit on symbolic register labels with the control forced to
/// `bit`; returns final wire contents.
fn symbolic_run(circuit: &Circuit, bit: u8) -> Result<Vec<Sym>> {
    let n = circuit.n_wires();
    let mut wires: Vec<Sym> = Vec::with_capacity(n);
    for w in 1..=n {
        if w <= circuit.n_registers {
            wires.push(Sym::Label(w));
        } else if Some(w) == circuit.control_wire() {
            wires.push(Sym::Bit(bit));
        } else {
            wires.push(Sym::Bit(0));
        }
    }
    for (k, gate) in circuit.gates.iter().enumerate() {
        match *gate {
            Gate::Swap(a, b) => wires.swap(a - 1, b - 1),
            Gate::Fredkin(c, a, b) => match wires[c - 1] {
                Sym::Bit(1) => wires.swap(a - 1, b - 1),
                Sym::Bit(_) => {}
                Sym::Label(_) => {
                    return Err(Error::InvalidArgument(format!(
                        "gate {k}: fredkin control wire {c} holds a register"
                    )))
                }
            },
            Gate::Cnot(c, t) => match (wires[c - 1], wires[t - 1]) {
                (Sym::Bit(x), Sym::Bit(y)) => wires[t - 1] = Sym::Bit(x ^ y),
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "gate {k}: cnot touches a register wire"
                    )))
                }
            },
            Gate::H(_) | Gate::P(_) | Gate::Pdag(_) => {
                return Err(Error::InvalidArgument(format!(
                    "gate {k}: {} is not a permutation gate",
                    gate.kind()
                )))
            }
        }
    }
    Ok(wires)
}

/// Wire position of each register label after a run: entry k-1 is where label
/// k ended.
fn label_positions(circuit: &Circuit, wires: &[Sym]) -> Result<Vec<usize>> {
    let mut pos = vec![0usize; circuit.n_registers];
    for (idx, sym) in wires.iter().enumerate() {
        if let Sym::Label(l) = sym {
            pos[l - 1] = idx + 1;
        }
    }
    if pos.iter().any(|&p| p == 0) {
        return Err(Error::InvalidArgument("a register label vanished".into()));
    }
    Ok(pos)
}

fn bits_ok(circuit: &Circuit, wires: &[Sym], bit: u8) -> (bool, bool) {
    let control_ok = match circuit.control_final_wire {
        Some(star) => wires[star - 1] == Sym::Bit(bit),
        None => true,
    };
    let mut ancilla_ok = true;
    for (idx, sym) in wires.iter().enumerate() {
        if Some(idx + 1) == circuit.control_final_wire {
            continue;
        }
        if let Sym::Bit(b) = sym {
            if *b != 0 {
                ancilla_ok = false;
            }
        }
    }
    (control_ok, ancilla_ok)
}

/// Checks that the circuit realizes exactly `expected` on register labels
/// (per control value for controlled circuits).
pub fn verify_permutation(circuit: &Circuit, expected: &[usize]) -> Result<VerifyReport> {
    circuit.validate()?;
    if expected.len() != circuit.n_registers {
        return Err(Error::DimensionMismatch {
            expected: circuit.n_registers,
            actual: expected.len(),
        });
    }
    let (realized, control_preserved, ancillas_restored) = if circuit.n_control == 0 {
        let wires = symbolic_run(circuit, 0)?;
        let (c_ok, a_ok) = bits_ok(circuit, &wires, 0);
        (label_positions(circuit, &wires)?, c_ok, a_ok)
    } else {
        let base = symbolic_run(circuit, 0)?;
        let active = symbolic_run(circuit, 1)?;
        let (c0, a0) = bits_ok(circuit, &base, 0);
        let (c1, a1) = bits_ok(circuit, &active, 1);
        let base_pos = label_positions(circuit, &base)?;
        let active_pos = label_positions(circuit, &active)?;
        // label k sits where register pi(k) sits in the reference layout
        let mut realized = vec![0usize; circuit.n_registers];
        for k in 1..=circuit.n_registers {
            let dest = base_pos.iter().position(|&p| p == active_pos[k - 1]).ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "label {k} ended at wire {} outside the register layout",
                    active_pos[k - 1]
                ))
            })?;
            realized[k - 1] = dest + 1;
        }
        (realized, c0 && c1, a0 && a1)
    };

    let failure = realized.iter().zip(expected).enumerate().find_map(|(k, (got, want))| {
        (got != want).then(|| {
            format!("register label {} maps to {} but {} was expected", k + 1, got, want)
        })
    });
    let pass = failure.is_none() && control_preserved && ancillas_restored;
    Ok(VerifyReport {
        pass,
        realized: Some(realized),
        expected: expected.to_vec(),
        gate_count: circuit.gate_count(),
        depth: circuit.depth(),
        failure,
        ancillas_restored,
        control_preserved,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{cycle_permutation, nn_cycle};

    #[test]
    fn nn_cycle_passes() {
        let c = nn_cycle(4).unwrap();
        let r = verify_permutation(&c, &cycle_permutation(4)).unwrap();
        assert!(r.pass);
        assert_eq!(r.gate_count, 3);
        assert_eq!(r.depth, 3);
    }

    #[test]
    fn mutated_circuit_fails_with_offending_label() {
        let mut c = nn_cycle(4).unwrap();
        c.gates.pop();
        c.declared_depth = c.depth();
        let r = verify_permutation(&c, &cycle_permutation(4)).unwrap();
        assert!(!r.pass);
        let msg = r.failure.unwrap();
        assert!(msg.contains("register label"), "{msg}");
    }

    #[test]
    fn wrong_expected_length_is_an_error() {
        let c = nn_cycle(3).unwrap();
        assert!(verify_permutation(&c, &[1, 2]).is_err());
    }
}
