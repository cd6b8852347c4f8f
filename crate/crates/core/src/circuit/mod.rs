//! Circuit IR over the gate set {H, S, T, CNOT, SWAP}.
//!
//! Gates are packed greedily into layers as they are pushed: each gate lands
//! in the earliest layer after every layer that already touches one of its
//! qubits. The depth of a circuit is its number of layers.

mod random;
mod route;
mod text;

pub use random::{random_circuit, RandomCircuit};
pub use route::route_nearest_neighbor;
pub use text::parse_circuit;

use std::fmt;

use crate::error::{Error, Result};
use crate::f2linalg::BitVec;

/// Upper bound on the qubit count of any circuit value.
pub const MAX_QUBITS: usize = 1 << 16;

/// Flip probability of the `H·T·H` gadget: `|⟨1|HTH|0⟩|² = sin²(π/8) = (2 − √2)/4`.
pub const SINGLE_T_ETA: f64 = (2.0 - std::f64::consts::SQRT_2) / 4.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    S(usize),
    T(usize),
    /// `Cnot(control, target)`.
    Cnot(usize, usize),
    Swap(usize, usize),
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::S(_) => "S",
            Gate::T(_) => "T",
            Gate::Cnot(..) => "CNOT",
            Gate::Swap(..) => "SWAP",
        }
    }

    pub fn qubits(&self) -> impl Iterator<Item = usize> {
        let (a, b) = match *self {
            Gate::H(q) | Gate::S(q) | Gate::T(q) => (q, None),
            Gate::Cnot(a, b) | Gate::Swap(a, b) => (a, Some(b)),
        };
        std::iter::once(a).chain(b)
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cnot(..) | Gate::Swap(..))
    }

    pub fn is_clifford(&self) -> bool {
        !matches!(self, Gate::T(_))
    }

    /// Distance between the two qubits of a two-qubit gate, 0 otherwise.
    pub fn span(&self) -> usize {
        match *self {
            Gate::Cnot(a, b) | Gate::Swap(a, b) => a.abs_diff(b),
            _ => 0,
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::H(q) | Gate::S(q) | Gate::T(q) => write!(f, "{} {q}", self.name()),
            Gate::Cnot(a, b) | Gate::Swap(a, b) => write!(f, "{} {a} {b}", self.name()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Circuit {
    n: usize,
    layers: Vec<Vec<Gate>>,
    // First layer index each qubit is free from.
    frontier: Vec<usize>,
}

impl Circuit {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::TooLarge {
                what: "circuit",
                limit: MAX_QUBITS,
                got: n,
            });
        }
        Ok(Self {
            n,
            layers: Vec::new(),
            frontier: vec![0; n],
        })
    }

    pub fn from_gates(n: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        let mut c = Self::new(n)?;
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn layers(&self) -> &[Vec<Gate>] {
        &self.layers
    }

    /// Number of nonempty layers.
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        for q in gate.qubits() {
            if q >= self.n {
                return Err(Error::QubitOutOfRange {
                    qubit: q,
                    n: self.n,
                });
            }
        }
        if let Gate::Cnot(a, b) | Gate::Swap(a, b) = gate {
            if a == b {
                return Err(Error::RepeatedQubit(a));
            }
        }
        let layer = gate.qubits().map(|q| self.frontier[q]).max().unwrap_or(0);
        if layer == self.layers.len() {
            self.layers.push(Vec::new());
        }
        self.layers[layer].push(gate);
        for q in gate.qubits() {
            self.frontier[q] = layer + 1;
        }
        Ok(self)
    }

    /// Gates in execution order (layer by layer).
    pub fn gates(&self) -> impl Iterator<Item = &Gate> + '_ {
        self.layers.iter().flatten()
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn t_count(&self) -> usize {
        self.gates().filter(|g| matches!(g, Gate::T(_))).count()
    }

    pub fn is_clifford(&self) -> bool {
        self.gates().all(Gate::is_clifford)
    }

    /// Every two-qubit gate acts on neighbouring indices.
    pub fn is_nearest_neighbor(&self) -> bool {
        self.gates().all(|g| g.span() <= 1)
    }

    /// The same gates on a wider register; the extra wires stay idle.
    pub fn embed(&self, n: usize) -> Result<Circuit> {
        if n < self.n {
            return Err(Error::InvalidArgument(format!(
                "cannot embed {} qubits into {n}",
                self.n
            )));
        }
        Circuit::from_gates(n, self.gates().copied())
    }
}

impl PartialEq for Circuit {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.layers == other.layers
    }
}

impl Eq for Circuit {}

/// Greedy earliest-fit depth of `c`.
pub fn depth(c: &Circuit) -> usize {
    c.depth()
}

/// The circuit whose Born distribution is `P_(s,η,k) ⊗ T_pad`.
///
/// Qubits `0..k` carry `x` (each gets an `H`), qubit `k` receives
/// `CNOT(i, k)` for every `s_i = 1`, and with `noisy` the gadget `H·T·H` on
/// qubit `k` flips the parity bit with probability [`SINGLE_T_ETA`]. The
/// trailing `pad` qubits are left untouched.
pub fn parity_circuit(s: &BitVec, noisy: bool, pad: usize) -> Result<Circuit> {
    let k = s.len();
    if k == 0 {
        return Err(Error::InvalidArgument(
            "parity circuit needs at least one data bit".into(),
        ));
    }
    let mut c = Circuit::new(k + 1 + pad)?;
    for q in 0..k {
        c.push(Gate::H(q))?;
    }
    for i in s.iter_ones() {
        c.push(Gate::Cnot(i, k))?;
    }
    if noisy {
        c.push(Gate::H(k))?.push(Gate::T(k))?.push(Gate::H(k))?;
    }
    Ok(c)
}

impl fmt::Display for Circuit {
    /// The line-oriented text format understood by [`parse_circuit`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {}", self.n)?;
        for g in self.gates() {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}
