use std::collections::HashSet;

use borncraft::affine::AffineSubspace;
use borncraft::circuit::{random_circuit, route_nearest_neighbor, Circuit, Gate, RandomCircuit};
use borncraft::f2linalg::BitVec;
use borncraft::stab::{simulate_clifford, StabTableau};
use borncraft::statevector::{circuit_unitary, sv_distribution, DenseDist};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Uniform on `a`, compared pointwise against the statevector probabilities.
fn assert_matches(a: &AffineSubspace, d: &DenseDist, what: &str) {
    let n = d.num_bits();
    let mass = 2f64.powi(-(a.dim() as i32));
    for (i, &p) in d.probs().iter().enumerate() {
        let x = BitVec::from_index(i as u64, n);
        let expected = if a.contains(&x).unwrap() { mass } else { 0.0 };
        assert!(
            (p - expected).abs() <= 1e-12,
            "{what}: P({x}) = {p}, tableau says {expected}"
        );
    }
}

fn check_clifford(c: &Circuit) {
    let support = simulate_clifford(c).unwrap().support();
    assert_matches(&support, &sv_distribution(c).unwrap(), &c.to_string());
}

/// Single-qubit unitary up to global phase, rounded for hashing.
fn phase_class(u: &DMatrix<Complex64>) -> Vec<(i64, i64)> {
    let pivot = u.iter().find(|z| z.norm() > 1e-9).copied().unwrap();
    let phase = pivot / pivot.norm();
    u.iter()
        .map(|z| {
            let w = z / phase;
            ((w.re * 1e6).round() as i64, (w.im * 1e6).round() as i64)
        })
        .collect()
}

#[test]
fn all_single_qubit_cliffords() {
    // Words in {H, S} up to length 8 reach the whole 24-element group.
    let mut classes = HashSet::new();
    let mut checked = 0;
    for len in 0..=8u32 {
        for word in 0u32..1 << len {
            let gates = (0..len).map(|i| {
                if word >> i & 1 == 1 {
                    Gate::H(0)
                } else {
                    Gate::S(0)
                }
            });
            let c = Circuit::from_gates(1, gates).unwrap();
            if classes.insert(phase_class(&circuit_unitary(&c).unwrap())) {
                check_clifford(&c);
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 24);
}

type OneQubit = fn(usize) -> Gate;

fn two_qubit_layers() -> Vec<Vec<Gate>> {
    let singles: [Option<OneQubit>; 3] = [None, Some(Gate::H), Some(Gate::S)];
    let mut layers = Vec::new();
    for a in singles {
        for b in singles {
            layers.push(a.map(|g| g(0)).into_iter().chain(b.map(|g| g(1))).collect());
        }
    }
    layers.push(vec![Gate::Cnot(0, 1)]);
    layers.push(vec![Gate::Cnot(1, 0)]);
    layers.push(vec![Gate::Swap(0, 1)]);
    layers
}

#[test]
fn every_two_qubit_circuit_up_to_depth_three() {
    let layers = two_qubit_layers();
    let mut count = 0;
    for a in &layers {
        for b in &layers {
            for c in &layers {
                let gates = a.iter().chain(b).chain(c).copied();
                check_clifford(&Circuit::from_gates(2, gates).unwrap());
                count += 1;
            }
        }
    }
    assert_eq!(count, 12 * 12 * 12);
}

#[test]
fn random_cliffords_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..500 {
        let n = rng.gen_range(1..=8);
        let spec = RandomCircuit {
            nearest_neighbor: i % 2 == 0,
            ..RandomCircuit::clifford(n, rng.gen_range(0..=20))
        };
        let c = random_circuit(&spec, &mut rng).unwrap();
        assert!(c.depth() <= 20 && c.is_clifford());
        check_clifford(&c);
    }
}

#[test]
fn tableau_samples_lie_in_support() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..50 {
        let c = random_circuit(&RandomCircuit::clifford(10, 12), &mut rng).unwrap();
        let t: StabTableau = simulate_clifford(&c).unwrap();
        let support = t.support();
        for _ in 0..20 {
            assert!(support.contains(&t.sample(&mut rng)).unwrap());
        }
    }
}

#[test]
fn large_clifford_stays_consistent() {
    // Far beyond the statevector limit: the support is still affine and sampled points lie in it.
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let c = random_circuit(&RandomCircuit::clifford(300, 40), &mut rng).unwrap();
    let t = simulate_clifford(&c).unwrap();
    assert!(t.stabilizers_commute());
    let support = t.support();
    for _ in 0..10 {
        assert!(support.contains(&t.sample(&mut rng)).unwrap());
    }
}

fn with_t(n: usize, layers: usize) -> RandomCircuit {
    RandomCircuit {
        qubits: n,
        layers,
        allow_t: true,
        nearest_neighbor: false,
        two_qubit_rate: 0.5,
    }
}

#[test]
fn routing_preserves_distributions() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..200 {
        let n = rng.gen_range(1..=8);
        let c = random_circuit(&with_t(n, rng.gen_range(1..=10)), &mut rng).unwrap();
        let routed = route_nearest_neighbor(&c);
        assert!(routed.is_nearest_neighbor());
        assert_eq!(routed.t_count(), c.t_count());
        let d = sv_distribution(&c)
            .unwrap()
            .tv(&sv_distribution(&routed).unwrap())
            .unwrap();
        assert!(d < 1e-10, "TV {d} after routing\n{c}");
    }
}

#[test]
fn unitaries_are_unitary() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..100 {
        let n = rng.gen_range(1..=6);
        let c = random_circuit(&with_t(n, rng.gen_range(0..=8)), &mut rng).unwrap();
        let u = circuit_unitary(&c).unwrap();
        let gram = u.adjoint() * &u;
        let dev = (gram - DMatrix::<Complex64>::identity(1 << n, 1 << n)).norm();
        assert!(dev < 1e-10, "‖U†U − I‖ = {dev}");
        // Column 0 is the output state.
        let probs: Vec<f64> = u.column(0).iter().map(|z| z.norm_sqr()).collect();
        let d = sv_distribution(&c).unwrap();
        for (p, q) in probs.iter().zip(d.probs()) {
            assert!((p - q).abs() < 1e-12);
        }
    }
}

#[test]
fn t_gates_rejected_by_tableau() {
    let c = Circuit::from_gates(2, [Gate::H(0), Gate::T(0)]).unwrap();
    assert!(simulate_clifford(&c).is_err());
    assert!(sv_distribution(&Circuit::new(21).unwrap()).is_err());
    assert!(circuit_unitary(&Circuit::new(11).unwrap()).is_err());
}
