use borncraft::circuit::{
    parity_circuit, random_circuit, route_nearest_neighbor, RandomCircuit, SINGLE_T_ETA,
};
use borncraft::dist::{tv, Dist, SampleOracle, StatMode, StatOracle};
use borncraft::f2linalg::BitVec;
use borncraft::harness::{self, parse_grid, span_probability, ExperimentSpec};
use borncraft::learn::{closure_learn, lpn_brute_force, split_labelled, sq_correlation_learner};
use borncraft::stab::simulate_clifford;
use borncraft::statevector::sv_distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn spec(name: &str, grid: &str, trials: u64, seed: u64) -> ExperimentSpec {
    ExperimentSpec {
        name: name.into(),
        grid: parse_grid(grid).unwrap(),
        trials,
        master_seed: seed,
    }
}

#[test]
fn recovery_rate_matches_span_probability() {
    // k samples leave k − 1 informative shifted vectors.
    let result = harness::run(&spec(
        "recovery-curve",
        r#"{"n": 10, "m": [3, 6], "k_extra": [0, 1, 2, 3, 4, 6]}"#,
        4000,
        7,
    ))
    .unwrap();
    assert_eq!(result.points.len(), 12);
    for p in &result.points {
        let m = p.params["m"].to_string().parse::<usize>().unwrap();
        let k = m + p.params["k_extra"].to_string().parse::<usize>().unwrap();
        let exact = span_probability(m, k - 1);
        let sigma = (exact * (1.0 - exact) / p.trials as f64).sqrt();
        assert!(
            (p.success_rate - exact).abs() <= 4.0 * sigma + 1e-12,
            "m={m} k={k}: rate {} vs {exact}",
            p.success_rate
        );
        assert_eq!(p.extra["exact_success"], exact);
        // Failures always learn a proper subspace of A.
        assert_eq!(p.extra["full_dim_failure"], 0.0);
        let mean_missing = 1.0 - p.success_rate;
        assert!(p.mean_tv >= 0.5 * mean_missing - 1e-12);
    }
}

#[test]
fn clifford_end_to_end() {
    let mut r = rng(21);
    let mut successes = 0;
    for _ in 0..100 {
        let n = r.gen_range(1..=16);
        let c = random_circuit(&RandomCircuit::clifford(n, r.gen_range(1..=30)), &mut r).unwrap();
        let truth = Dist::AffineUniform(simulate_clifford(&c).unwrap().support());
        let mut oracle = SampleOracle::new(truth.clone(), rng(r.gen()));
        let learned = closure_learn(&mut oracle, n, 0.01).unwrap();
        assert_eq!(oracle.queries() as usize, n + 7);
        let d = tv(&learned.to_dist(), &truth).unwrap();
        let Dist::AffineUniform(a) = &truth else {
            unreachable!()
        };
        // The learned set sits inside the support, so TV = 1 − 2^{dim − m}.
        assert_eq!(d, 1.0 - 2f64.powi(learned.dim() as i32 - a.dim() as i32));
        if d == 0.0 {
            successes += 1;
        }
    }
    assert!(successes >= 95, "{successes}/100");
}

#[test]
fn lpn_on_routed_single_t_samples() {
    let mut r = rng(31);
    let k = 8;
    for _ in 0..20 {
        let s: BitVec = BitVec::from_index(r.gen_range(0..1 << k), k);
        let c = route_nearest_neighbor(&parity_circuit(&s, true, 0).unwrap());
        assert_eq!(c.t_count(), 1);
        let d = Dist::Dense(sv_distribution(&c).unwrap());
        let mut oracle = SampleOracle::new(d, rng(r.gen()));
        let samples: Vec<_> = (0..2000)
            .map(|_| split_labelled(&oracle.sample()))
            .collect();
        assert_eq!(lpn_brute_force(&samples, k).unwrap(), s);
        let flips = samples.iter().filter(|(x, y)| x.dot(&s) != *y).count() as f64 / 2000.0;
        assert!(
            (flips - SINGLE_T_ETA).abs()
                < 5.0 * (SINGLE_T_ETA * (1.0 - SINGLE_T_ETA) / 2000.0).sqrt()
        );
    }
}

#[test]
fn correlation_learner_success_tracks_budget() {
    // Adversarial ±τ answers never push a wrong candidate above ½, so the
    // learner succeeds exactly when s is among the queried candidates.
    let k = 10;
    let budget = 64;
    let trials = 2000;
    let mut r = rng(41);
    let mut successes = 0;
    for _ in 0..trials {
        let s = BitVec::from_index(r.gen_range(0..1 << k), k);
        let d = Dist::noisy_parity(s.clone(), 0.0).unwrap();
        let mut oracle =
            StatOracle::new(d, 0.1, StatMode::Adversarial { seed: r.gen() }, rng(0)).unwrap();
        let found = sq_correlation_learner(&mut oracle, k, budget, &mut r).unwrap();
        assert!(oracle.queries() <= budget);
        match found {
            Some(t) => {
                assert_eq!(t, s);
                successes += 1;
            }
            None => assert_eq!(oracle.queries(), budget),
        }
    }
    let p = budget as f64 / (1u64 << k) as f64;
    let rate = successes as f64 / trials as f64;
    assert!((rate - p).abs() <= 4.0 * (p * (1.0 - p) / trials as f64).sqrt());
}

#[test]
fn experiments_are_reproducible() {
    let cases = [
        (
            "recovery-curve",
            r#"{"n": 12, "m": [4], "k_extra": [1, 3]}"#,
            300,
        ),
        (
            "t-noise",
            r#"{"k": 3, "pad": [0, 2], "routed": [0, 1], "draws": 500}"#,
            20,
        ),
        ("parity-tv", r#"{"k": 3, "eta": [0, 0.125]}"#, 1),
        ("sq-vs-sample", r#"{"k": 8, "budget": 16}"#, 100),
        ("opnorm-tv", r#"{"n": [2, 3], "layers": 3}"#, 20),
    ];
    for (name, grid, trials) in cases {
        let s = spec(name, grid, trials, 99);
        let a = harness::run(&s).unwrap().to_json();
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let b = single.install(|| harness::run(&s).unwrap().to_json());
        assert_eq!(a, b, "{name}");
        let other = harness::run(&spec(name, grid, trials, 100))
            .unwrap()
            .to_json();
        if name != "parity-tv" {
            assert_ne!(a, other, "{name} ignores the seed");
        }
        for p in harness::run(&s).unwrap().points {
            assert!((0.0..=1.0).contains(&p.success_rate));
            assert!(p.ci_lo <= p.success_rate && p.success_rate <= p.ci_hi);
        }
    }
}

#[test]
fn result_shapes() {
    let r = harness::run(&spec("parity-tv", r#"{"k": [2, 3], "eta": 0.25}"#, 5, 0)).unwrap();
    // Exhaustive: one trial per unordered pair.
    assert_eq!(
        r.points.iter().map(|p| p.trials).collect::<Vec<_>>(),
        vec![6, 28]
    );
    assert!(r
        .points
        .iter()
        .all(|p| p.success_rate == 1.0 && p.mean_tv == 0.25));
    let csv = r.to_csv();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("experiment,eta,k,trials,successes,success_rate"));
    assert!(lines[1].starts_with("parity-tv,0.25,2,6,6,1,"));

    let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(json["schema"], "result_v1");
    assert_eq!(json["experiment"], "parity-tv");
    assert_eq!(json["seed"], 0);
    for key in [
        "params",
        "success_rate",
        "ci_lo",
        "ci_hi",
        "mean_tv",
        "queries",
    ] {
        assert!(json["points"][0].get(key).is_some(), "{key}");
    }
    assert!(json.get("timestamp").is_none());

    let sq = harness::run(&spec("sq-vs-sample", r#"{"k": 6, "budget": 64}"#, 10, 0)).unwrap();
    let learners: Vec<String> = sq
        .points
        .iter()
        .map(|p| p.params["learner"].to_string())
        .collect();
    assert_eq!(learners, ["sq", "closure"]);
    // Budget covers all 2^6 candidates.
    assert_eq!(sq.points[0].success_rate, 1.0);
}

#[test]
fn infeasible_and_invalid_grids() {
    use borncraft::Error;
    let infeasible = [
        ("t-noise", r#"{"k": 20}"#),
        ("opnorm-tv", r#"{"n": 11}"#),
        ("parity-tv", r#"{"k": 9}"#),
        ("recovery-curve", r#"{"n": 4, "m": 5}"#),
    ];
    for (name, grid) in infeasible {
        assert!(
            matches!(
                harness::run(&spec(name, grid, 1, 0)),
                Err(Error::Infeasible(_))
            ),
            "{name} {grid}"
        );
    }
    let invalid = [
        ("recovery-curve", r#"{"k": 4, "k_extra": 1}"#),
        ("recovery-curve", r#"{"n": -3}"#),
        ("t-noise", r#"{"k": "six"}"#),
        ("parity-tv", r#"{"k": []}"#),
        ("sq-vs-sample", r#"{"tau": 1.5}"#),
    ];
    for (name, grid) in invalid {
        assert!(
            matches!(
                harness::run(&spec(name, grid, 1, 0)),
                Err(Error::InvalidArgument(_))
            ),
            "{name} {grid}"
        );
    }
}
