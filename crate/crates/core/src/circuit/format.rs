//! Circuit text formats.
//!
//! Line format, one gate per line with 1-based wire labels and `#` comments:
//!
//! ```text
//! circuit registers=3 control=1 ancillas=0 control_final=3
//! FREDKIN 4 2 3
//! SWAP 3 4
//! FREDKIN 3 1 2
//! ```
//!
//! The header carries the arity; `control_final` is present only for
//! controlled circuits. The QASM-like dialect uses registers `r` (state
//! registers), `c` (control), `a` (ancillas) and gates `h`, `s`/`sdg` for
//! P/P†, `swap`, `cswap`, `cx`; `swap`/`cswap` on `r` wires act on qudits of
//! the tuple dimension when consumed by the gate-level simulator.

use super::{Circuit, Gate};
use crate::error::{Error, Result};

/// Emits the line-based format.
pub fn emit_lines(circuit: &Circuit) -> String {
    let mut out = format!(
        "circuit registers={} control={} ancillas={}",
        circuit.n_registers, circuit.n_control, circuit.n_ancilla
    );
    if let Some(star) = circuit.control_final_wire {
        out.push_str(&format!(" control_final={star}"));
    }
    out.push('\n');
    for g in &circuit.gates {
        out.push_str(g.kind());
        for w in g.operands() {
            out.push_str(&format!(" {w}"));
        }
        out.push('\n');
    }
    out
}

/// Parses the line-based format.
pub fn parse_lines(text: &str) -> Result<Circuit> {
    let mut header: Option<(usize, usize, usize, Option<usize>)> = None;
    let mut gates = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::CircuitParse { line: lineno + 1, message };
        let mut tokens = line.split_whitespace();
        let head = tokens.next().unwrap();
        if header.is_none() {
            if head != "circuit" {
                return Err(parse_err(format!("expected circuit header, found {head:?}")));
            }
            let (mut m, mut nc, mut na, mut star) = (None, None, None, None);
            for tok in tokens {
                let (key, value) = tok
                    .split_once('=')
                    .ok_or_else(|| parse_err(format!("malformed header field {tok:?}")))?;
                let value: usize = value
                    .parse()
                    .map_err(|_| parse_err(format!("non-integer header value {value:?}")))?;
                match key {
                    "registers" => m = Some(value),
                    "control" => nc = Some(value),
                    "ancillas" => na = Some(value),
                    "control_final" => star = Some(value),
                    _ => return Err(parse_err(format!("unknown header field {key:?}"))),
                }
            }
            let m = m.ok_or_else(|| parse_err("header is missing registers=".into()))?;
            let nc = nc.ok_or_else(|| parse_err("header is missing control=".into()))?;
            let na = na.ok_or_else(|| parse_err("header is missing ancillas=".into()))?;
            header = Some((m, nc, na, star));
            continue;
        }
        let args: Vec<usize> = tokens
            .map(|t| t.parse::<usize>().map_err(|_| parse_err(format!("bad wire label {t:?}"))))
            .collect::<Result<_>>()?;
        let gate = match (head, args.as_slice()) {
            ("SWAP", [a, b]) => Gate::Swap(*a, *b),
            ("FREDKIN", [c, a, b]) => Gate::Fredkin(*c, *a, *b),
            ("CNOT", [c, t]) => Gate::Cnot(*c, *t),
            ("H", [q]) => Gate::H(*q),
            ("P", [q]) => Gate::P(*q),
            ("PDAG", [q]) => Gate::Pdag(*q),
            _ => return Err(parse_err(format!("unknown gate line {line:?}"))),
        };
        gates.push(gate);
    }
    let (m, nc, na, star) = header
        .ok_or(Error::CircuitParse { line: 1, message: "missing circuit header".into() })?;
    let mut circuit = Circuit::new(m, nc, na, gates)?;
    if let Some(star) = star {
        circuit.control_final_wire = Some(star);
    }
    Ok(circuit)
}

fn qasm_operand(circuit: &Circuit, wire: usize) -> String {
    if wire <= circuit.n_registers {
        format!("r[{}]", wire - 1)
    } else if Some(wire) == circuit.control_wire() {
        "c[0]".into()
    } else {
        format!("a[{}]", wire - circuit.n_registers - circuit.n_control - 1)
    }
}

/// Emits the QASM-like dialect.
pub fn emit_qasm(circuit: &Circuit) -> String {
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    out.push_str(&format!("qreg r[{}];\n", circuit.n_registers));
    if circuit.n_control == 1 {
        out.push_str("qreg c[1];\n");
    }
    if circuit.n_ancilla > 0 {
        out.push_str(&format!("qreg a[{}];\n", circuit.n_ancilla));
    }
    if let Some(star) = circuit.control_final_wire {
        out.push_str(&format!("// control_final={star}\n"));
    }
    for g in &circuit.gates {
        let ops: Vec<String> = g.operands().iter().map(|&w| qasm_operand(circuit, w)).collect();
        let name = match g {
            Gate::Swap(..) => "swap",
            Gate::Fredkin(..) => "cswap",
            Gate::Cnot(..) => "cx",
            Gate::H(_) => "h",
            Gate::P(_) => "s",
            Gate::Pdag(_) => "sdg",
        };
        out.push_str(&format!("{name} {};\n", ops.join(",")));
    }
    out
}

/// Parses the QASM-like dialect emitted by [`emit_qasm`].
pub fn parse_qasm(text: &str) -> Result<Circuit> {
    let mut sizes = std::collections::HashMap::new();
    let mut gates = Vec::new();
    let mut star = None;
    let mut body: Vec<(usize, String, Vec<(String, usize)>)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let parse_err = |message: String| Error::CircuitParse { line: lineno + 1, message };
        let line = raw.trim();
        if let Some(comment) = line.strip_prefix("//") {
            if let Some(v) = comment.trim().strip_prefix("control_final=") {
                star = Some(
                    v.parse::<usize>()
                        .map_err(|_| parse_err(format!("bad control_final value {v:?}")))?,
                );
            }
            continue;
        }
        if line.is_empty() || line.starts_with("OPENQASM") || line.starts_with("include") {
            continue;
        }
        let line = line
            .strip_suffix(';')
            .ok_or_else(|| parse_err("missing trailing semicolon".into()))?;
        if let Some(decl) = line.strip_prefix("qreg ") {
            let (name, rest) = decl
                .split_once('[')
                .ok_or_else(|| parse_err(format!("malformed qreg {decl:?}")))?;
            let size: usize = rest
                .strip_suffix(']')
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| parse_err(format!("malformed qreg size {rest:?}")))?;
            sizes.insert(name.trim().to_string(), size);
            continue;
        }
        let (name, ops) = line
            .split_once(' ')
            .ok_or_else(|| parse_err(format!("malformed gate line {line:?}")))?;
        let operands = ops
            .split(',')
            .map(|op| {
                let op = op.trim();
                let (reg, idx) = op
                    .split_once('[')
                    .ok_or_else(|| parse_err(format!("malformed operand {op:?}")))?;
                let idx: usize = idx
                    .strip_suffix(']')
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| parse_err(format!("malformed operand index {op:?}")))?;
                Ok((reg.to_string(), idx))
            })
            .collect::<Result<Vec<_>>>()?;
        body.push((lineno + 1, name.to_string(), operands));
    }
    let m = *sizes.get("r").ok_or(Error::CircuitParse {
        line: 1,
        message: "missing qreg r declaration".into(),
    })?;
    let nc = sizes.get("c").copied().unwrap_or(0);
    let na = sizes.get("a").copied().unwrap_or(0);
    let wire = |line: usize, reg: &str, idx: usize| -> Result<usize> {
        let base = match reg {
            "r" => 0,
            "c" => m,
            "a" => m + nc,
            _ => {
                return Err(Error::CircuitParse {
                    line,
                    message: format!("unknown register {reg:?}"),
                })
            }
        };
        Ok(base + idx + 1)
    };
    for (line, name, operands) in body {
        let ws: Vec<usize> =
            operands.iter().map(|(r, i)| wire(line, r, *i)).collect::<Result<_>>()?;
        let gate = match (name.as_str(), ws.as_slice()) {
            ("swap", [a, b]) => Gate::Swap(*a, *b),
            ("cswap", [c, a, b]) => Gate::Fredkin(*c, *a, *b),
            ("cx", [c, t]) => Gate::Cnot(*c, *t),
            ("h", [q]) => Gate::H(*q),
            ("s", [q]) => Gate::P(*q),
            ("sdg", [q]) => Gate::Pdag(*q),
            _ => {
                return Err(Error::CircuitParse {
                    line,
                    message: format!("unknown gate {name:?} with {} operands", ws.len()),
                })
            }
        };
        gates.push(gate);
    }
    let mut circuit = Circuit::new(m, nc, na, gates)?;
    if star.is_some() {
        circuit.control_final_wire = star;
    }
    Ok(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{
        controlled_nn_cycle, cycle_permutation, ghz_circuit, log_depth_cycle, nn_cycle,
        parallel_controlled_cycle, verify_permutation,
    };

    #[test]
    fn nn_m2_single_line() {
        let text = emit_lines(&nn_cycle(2).unwrap());
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "circuit registers=2 control=0 ancillas=0");
        assert_eq!(lines.next().unwrap(), "SWAP 1 2");
        assert!(lines.next().is_none());
    }

    #[test]
    fn lines_round_trip_all_families() {
        let circuits = vec![
            nn_cycle(7).unwrap(),
            log_depth_cycle(12).unwrap(),
            controlled_nn_cycle(5).unwrap(),
            ghz_circuit(6).unwrap(),
            parallel_controlled_cycle(8).unwrap(),
        ];
        for c in circuits {
            let parsed = parse_lines(&emit_lines(&c)).unwrap();
            assert_eq!(parsed, c);
        }
    }

    #[test]
    fn qasm_round_trip_and_verify() {
        for c in [controlled_nn_cycle(4).unwrap(), parallel_controlled_cycle(8).unwrap()] {
            let parsed = parse_qasm(&emit_qasm(&c)).unwrap();
            assert_eq!(parsed, c);
            let m = c.n_registers;
            assert!(verify_permutation(&parsed, &cycle_permutation(m)).unwrap().pass);
        }
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "# header comment\n\ncircuit registers=2 control=0 ancillas=0\n# gate\nSWAP 1 2 # trailing\n";
        let c = parse_lines(text).unwrap();
        assert_eq!(c.gates, vec![Gate::Swap(1, 2)]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_lines("circuit registers=2 control=0 ancillas=0\nSWAPP 1 2\n").unwrap_err();
        match err {
            Error::CircuitParse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
        assert!(parse_lines("SWAP 1 2\n").is_err());
    }
}
