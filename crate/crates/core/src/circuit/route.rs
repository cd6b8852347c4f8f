use super::{Circuit, Gate};

/// Rewrites every two-qubit gate onto neighbouring wires.
///
/// A gate on qubits at distance `Δ > 1` becomes a ladder of `Δ − 1`
/// neighbouring SWAPs that walks the first operand next to the second, the
/// gate itself on the now-adjacent pair, and the mirrored ladder that walks
/// it back. Only SWAPs are added, so the T count is unchanged, and the
/// unitary is preserved exactly.
pub fn route_nearest_neighbor(c: &Circuit) -> Circuit {
    let mut out = Circuit::new(c.num_qubits()).expect("same width as a valid circuit");
    let mut emit = |g: Gate| {
        out.push(g).expect("routed gate stays in range");
    };
    for &gate in c.gates() {
        let (a, b) = match gate {
            Gate::Cnot(a, b) | Gate::Swap(a, b) if a.abs_diff(b) > 1 => (a, b),
            _ => {
                emit(gate);
                continue;
            }
        };
        // Positions the moving operand passes through, ending next to `b`.
        let path: Vec<usize> = if a < b {
            (a..b).collect()
        } else {
            (b + 1..=a).rev().collect()
        };
        let ladder: Vec<Gate> = path.windows(2).map(|w| Gate::Swap(w[0], w[1])).collect();
        let near = *path.last().expect("distance > 1 gives a nonempty path");
        for &s in &ladder {
            emit(s);
        }
        emit(match gate {
            Gate::Cnot(..) => Gate::Cnot(near, b),
            _ => Gate::Swap(near, b),
        });
        for &s in ladder.iter().rev() {
            emit(s);
        }
    }
    out
}
