use super::{Circuit, Gate};
use crate::error::{Error, Result};

/// Parses the circuit text format.
///
/// ```text
/// # comment
/// qubits 3
/// H 0
/// CNOT 0 2
/// ```
///
/// The header must be the first non-blank line. Qubit indices are 0-based
/// and gate names are case-insensitive. Layers are rebuilt by greedy packing.
pub fn parse_circuit(src: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (idx, raw) in src.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let mut tokens = line.split_whitespace();
        let head = tokens.next().expect("nonempty line has a token");
        let args = tokens
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| err(format!("`{t}` is not a qubit index")))
            })
            .collect::<Result<Vec<_>>>()?;

        let Some(c) = circuit.as_mut() else {
            if !head.eq_ignore_ascii_case("qubits") {
                return Err(err(format!("expected `qubits N` header, found `{head}`")));
            }
            let [n] = args[..] else {
                return Err(err("header takes exactly one count".into()));
            };
            circuit = Some(Circuit::new(n).map_err(|e| err(e.to_string()))?);
            continue;
        };

        let gate = match (head.to_ascii_uppercase().as_str(), &args[..]) {
            ("H", &[q]) => Gate::H(q),
            ("S", &[q]) => Gate::S(q),
            ("T", &[q]) => Gate::T(q),
            ("CNOT" | "CX", &[a, b]) => Gate::Cnot(a, b),
            ("SWAP", &[a, b]) => Gate::Swap(a, b),
            ("QUBITS", _) => return Err(err("duplicate `qubits` header".into())),
            ("H" | "S" | "T" | "CNOT" | "CX" | "SWAP", _) => {
                return Err(err(format!(
                    "wrong number of qubits for `{head}`: {}",
                    args.len()
                )))
            }
            _ => return Err(err(format!("unknown gate `{head}`"))),
        };
        c.push(gate).map_err(|e| err(e.to_string()))?;
    }
    circuit.ok_or(Error::Parse {
        line: 0,
        msg: "missing `qubits N` header".into(),
    })
}
