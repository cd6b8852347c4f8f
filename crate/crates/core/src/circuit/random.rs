use rand::seq::SliceRandom;
use rand::Rng;

use super::{Circuit, Gate};
use crate::error::Result;

/// Parameters for [`random_circuit`].
#[derive(Clone, Copy, Debug)]
pub struct RandomCircuit {
    pub qubits: usize,
    /// Number of generated layers; packing can only lower the final depth.
    pub layers: usize,
    pub allow_t: bool,
    pub nearest_neighbor: bool,
    /// Chance that a free qubit starts a two-qubit gate.
    pub two_qubit_rate: f64,
}

impl RandomCircuit {
    pub fn clifford(qubits: usize, layers: usize) -> Self {
        Self {
            qubits,
            layers,
            allow_t: false,
            nearest_neighbor: true,
            two_qubit_rate: 0.4,
        }
    }
}

/// Layered random circuit. Each layer visits the qubits once; a qubit either
/// pairs with a partner (its right neighbour in nearest-neighbour mode, a
/// random free qubit otherwise) under CNOT or SWAP, or receives a random
/// single-qubit gate, or idles.
pub fn random_circuit<R: Rng + ?Sized>(spec: &RandomCircuit, rng: &mut R) -> Result<Circuit> {
    let n = spec.qubits;
    let mut c = Circuit::new(n)?;
    let mut singles = vec![Gate::H as fn(usize) -> Gate, Gate::S];
    if spec.allow_t {
        singles.push(Gate::T);
    }
    for _ in 0..spec.layers {
        let mut order: Vec<usize> = (0..n).collect();
        if !spec.nearest_neighbor {
            order.shuffle(rng);
        }
        let mut used = vec![false; n];
        for idx in 0..n {
            let q = order[idx];
            if used[q] {
                continue;
            }
            used[q] = true;
            let partner = if spec.nearest_neighbor {
                Some(q + 1).filter(|&p| p < n && !used[p])
            } else {
                order[idx + 1..].iter().copied().find(|&p| !used[p])
            };
            match partner {
                Some(p) if rng.gen_bool(spec.two_qubit_rate) => {
                    used[p] = true;
                    let g = match rng.gen_range(0..3) {
                        0 => Gate::Cnot(q, p),
                        1 => Gate::Cnot(p, q),
                        _ => Gate::Swap(q, p),
                    };
                    c.push(g)?;
                }
                _ => {
                    // One extra slot for "idle".
                    let pick = rng.gen_range(0..=singles.len());
                    if let Some(make) = singles.get(pick) {
                        c.push(make(q))?;
                    }
                }
            }
        }
    }
    Ok(c)
}
