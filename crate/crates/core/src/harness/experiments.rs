use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{
    aggregate, span_probability, Experiment, ParamValue, Point, PointResult, PointRunner,
    TrialOutcome,
};
use crate::affine::{random_bits, AffineSubspace};
use crate::circuit::{
    parity_circuit, random_circuit, route_nearest_neighbor, Gate, RandomCircuit, SINGLE_T_ETA,
};
use crate::dist::{tv, tv_exact, Dist, SampleOracle, StatMode, StatOracle};
use crate::error::{Error, Result};
use crate::f2linalg::BitVec;
use crate::learn::{closure_from_samples, closure_learn, sq_correlation_learner};
use crate::statevector::{
    opnorm_tv_check, sv_distribution, MAX_STATEVECTOR_QUBITS, MAX_UNITARY_QUBITS,
};

pub static EXPERIMENTS: &[Experiment] = &[
    Experiment {
        name: "recovery-curve",
        params: &[
            ("n", "[16]"),
            ("m", "[4, 8, 12]"),
            ("k", ""),
            ("k_extra", "[0,1,2,3,4,5,6,7,8,9,10]"),
        ],
        exclusive: &[("k", "k_extra")],
        check: recovery_check,
        run_point: recovery_point,
    },
    Experiment {
        name: "t-noise",
        params: &[
            ("k", "[6]"),
            ("pad", "[0]"),
            ("routed", "[0]"),
            ("draws", "[10000]"),
        ],
        exclusive: &[],
        check: t_noise_check,
        run_point: t_noise_point,
    },
    Experiment {
        name: "parity-tv",
        params: &[("k", "[5]"), ("eta", "[0]")],
        exclusive: &[],
        check: parity_tv_check,
        run_point: parity_tv_point,
    },
    Experiment {
        name: "sq-vs-sample",
        params: &[
            ("k", "[16]"),
            ("budget", "[1000]"),
            ("tau", "[0.1]"),
            ("delta", "[0.0625]"),
        ],
        exclusive: &[],
        check: sq_check,
        run_point: sq_point,
    },
    Experiment {
        name: "opnorm-tv",
        params: &[("n", "[1, 2, 3, 4, 5, 6]"), ("layers", "[4]")],
        exclusive: &[],
        check: opnorm_check,
        run_point: opnorm_point,
    },
];

fn infeasible(msg: String) -> Error {
    Error::Infeasible(msg)
}

fn oracle_rng<R: Rng + ?Sized>(rng: &mut R) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(rng.gen())
}

fn recovery_k(p: &Point) -> Result<usize> {
    if p.has("k") {
        p.usize("k")
    } else {
        Ok(p.usize("m")? + p.usize("k_extra")?)
    }
}

fn recovery_check(p: &Point) -> Result<()> {
    let (n, m, k) = (p.usize("n")?, p.usize("m")?, recovery_k(p)?);
    if n == 0 || n > 64 {
        return Err(infeasible(format!(
            "recovery-curve needs 1 ≤ n ≤ 64, got {n}"
        )));
    }
    if m > n {
        return Err(infeasible(format!(
            "subspace dimension {m} exceeds n = {n}"
        )));
    }
    if k == 0 {
        return Err(Error::InvalidArgument(
            "recovery-curve needs k ≥ 1 samples".into(),
        ));
    }
    Ok(())
}

/// Random `A` of dimension `m` in `F₂ⁿ`, `k` samples of `U_A`, closure step.
fn recovery_point(r: &PointRunner<'_>) -> Result<Vec<PointResult>> {
    let p = r.point;
    let (n, m, k) = (p.usize("n")?, p.usize("m")?, recovery_k(p)?);
    let mut result = r.run(p, 0, |rng| {
        let a = AffineSubspace::random(n, m, rng)?;
        let truth = Dist::AffineUniform(a.clone());
        let mut oracle = SampleOracle::new(truth.clone(), oracle_rng(rng));
        let samples: Vec<BitVec> = (0..k).map(|_| oracle.sample()).collect();
        let learned = closure_from_samples(&samples)?;
        let success = learned.subspace.same_set(&a);
        let d = tv(&learned.to_dist(), &truth)?;
        Ok(TrialOutcome {
            success,
            tv: d,
            queries: oracle.queries(),
            metrics: vec![
                ("learned_dim", learned.dim() as f64),
                (
                    "full_dim_failure",
                    f64::from(!success && learned.dim() == m),
                ),
                ("success_tv_nonzero", f64::from(success && d != 0.0)),
            ],
        })
    })?;
    let bound = (1.0 - 2f64.powi(m as i32 - k as i32)).max(0.0);
    result.extra.insert("bound".into(), bound);
    result
        .extra
        .insert("exact_success".into(), span_probability(m, k - 1));
    Ok(vec![result])
}

fn t_noise_check(p: &Point) -> Result<()> {
    let (k, pad) = (p.usize("k")?, p.usize("pad")?);
    if k == 0 {
        return Err(Error::InvalidArgument("t-noise needs k ≥ 1".into()));
    }
    if k + 1 + pad > MAX_STATEVECTOR_QUBITS {
        return Err(infeasible(format!(
            "t-noise needs k + 1 + pad ≤ {MAX_STATEVECTOR_QUBITS} qubits, got {}",
            k + 1 + pad
        )));
    }
    Ok(())
}

/// Random secret `s`, statevector distribution of the single-T parity circuit
/// against `P_(s,η,k) ⊗ T_pad`, plus a Monte Carlo flip rate.
fn t_noise_point(r: &PointRunner<'_>) -> Result<Vec<PointResult>> {
    let p = r.point;
    let (k, pad, draws) = (p.usize("k")?, p.usize("pad")?, p.usize("draws")?);
    let routed = p.usize("routed")? != 0;
    let mut result = r.run(p, 0, |rng| {
        let s = random_bits(k, rng);
        let mut c = parity_circuit(&s, true, pad)?;
        if routed {
            c = route_nearest_neighbor(&c);
        }
        let sv = sv_distribution(&c)?;
        let parity = Dist::noisy_parity(s.clone(), SINGLE_T_ETA)?;
        let truth = if pad == 0 {
            parity
        } else {
            Dist::Product(vec![parity, Dist::trivial(pad)])
        };
        let n = k + 1 + pad;
        let mut max_dev = 0f64;
        let mut flip = 0.0;
        for (i, &prob) in sv.probs().iter().enumerate() {
            let z = BitVec::from_index(i as u64, n);
            max_dev = max_dev.max((prob - truth.eval(&z)?).abs());
            if z.get(k) != s.dot(&z.slice(0, k)) {
                flip += prob;
            }
        }
        let flips = (0..draws)
            .filter(|_| {
                let z = sv.sample(rng);
                z.get(k) != s.dot(&z.slice(0, k))
            })
            .count();
        let empirical = if draws == 0 {
            0.0
        } else {
            flips as f64 / draws as f64
        };
        Ok(TrialOutcome {
            success: max_dev <= 1e-12,
            tv: tv(&Dist::Dense(sv), &truth)?,
            queries: draws as u64,
            metrics: vec![
                ("max_abs_dev", max_dev),
                ("exact_flip", flip),
                ("empirical_flip", empirical),
                ("t_count", c.t_count() as f64),
            ],
        })
    })?;
    result.extra.insert("eta".into(), SINGLE_T_ETA);
    Ok(vec![result])
}

fn parity_tv_check(p: &Point) -> Result<()> {
    let (k, eta) = (p.usize("k")?, p.f64("eta")?);
    if k == 0 || k > 8 {
        return Err(infeasible(format!(
            "parity-tv enumerates all pairs and needs 1 ≤ k ≤ 8, got {k}"
        )));
    }
    if !(0.0..=0.5).contains(&eta) {
        return Err(Error::InvalidArgument(format!(
            "eta must lie in [0, 1/2], got {eta}"
        )));
    }
    Ok(())
}

/// Every pair `s < t` of secrets, exact rational TV against `(1 − 2η)/2`.
/// The pair list is exhaustive, so `--trials` does not apply.
fn parity_tv_point(r: &PointRunner<'_>) -> Result<Vec<PointResult>> {
    let p = r.point;
    let (k, eta) = (p.usize("k")?, p.f64("eta")?);
    let space = 1u64 << k;
    let dists = (0..space)
        .map(|i| Dist::noisy_parity(BitVec::from_index(i, k), eta))
        .collect::<Result<Vec<_>>>()?;
    let eta_exact = BigRational::from_float(eta).expect("eta is finite");
    let two = BigRational::from_integer(BigInt::from(2));
    let expected = (BigRational::one() - &two * eta_exact) / two;
    let pairs: Vec<(usize, usize)> = (0..dists.len())
        .flat_map(|i| (i + 1..dists.len()).map(move |j| (i, j)))
        .collect();
    let outcomes = pairs
        .par_iter()
        .map(|&(i, j)| {
            let d = tv_exact(&dists[i], &dists[j])?;
            Ok(TrialOutcome {
                success: d == expected,
                tv: d.to_f64().unwrap_or(f64::NAN),
                queries: 0,
                metrics: Vec::new(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let self_tv_zero = dists
        .par_iter()
        .map(|d| tv_exact(d, d).map(|v| v.is_zero()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|z| z);
    let mut result = aggregate(p, &outcomes);
    result
        .extra
        .insert("expected_tv".into(), expected.to_f64().unwrap_or(f64::NAN));
    result
        .extra
        .insert("self_tv_zero".into(), f64::from(self_tv_zero));
    Ok(vec![result])
}

fn sq_check(p: &Point) -> Result<()> {
    let k = p.usize("k")?;
    if k == 0 || k > 62 {
        return Err(infeasible(format!(
            "sq-vs-sample needs 1 ≤ k ≤ 62, got {k}"
        )));
    }
    let (tau, delta) = (p.f64("tau")?, p.f64("delta")?);
    if !(tau > 0.0 && tau < 1.0) || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "need tau, delta in (0, 1), got {tau}, {delta}"
        )));
    }
    p.usize("budget")?;
    Ok(())
}

/// The `η = 0` parity distribution `P_(s,0,k)` as an affine subspace of
/// `F₂^{k+1}`: directions `eᵢ + sᵢ·e_k`, offset zero.
fn parity_subspace(s: &BitVec) -> Result<AffineSubspace> {
    let k = s.len();
    let directions: Vec<BitVec> = (0..k)
        .map(|i| {
            let mut v = BitVec::unit(k + 1, i);
            v.set(k, s.get(i));
            v
        })
        .collect();
    AffineSubspace::from_spanning(BitVec::zeros(k + 1), &directions)
}

/// Correlation learner against an adversarial `Stat_τ` oracle next to the
/// closure learner with sample access, both on `P_(s,0,k)` for a random `s`.
/// One result point per learner, tagged by the `learner` parameter.
fn sq_point(r: &PointRunner<'_>) -> Result<Vec<PointResult>> {
    let p = r.point;
    let (k, budget) = (p.usize("k")?, p.usize("budget")? as u64);
    let (tau, delta) = (p.f64("tau")?, p.f64("delta")?);
    let sq_point = p.with("learner", ParamValue::Str("sq".into()));
    let sq = r.run(&sq_point, 0, |rng| {
        let s = random_bits(k, rng);
        let truth = Dist::noisy_parity(s.clone(), 0.0)?;
        let mode = StatMode::Adversarial { seed: rng.gen() };
        let mut oracle = StatOracle::new(truth.clone(), tau, mode, oracle_rng(rng))?;
        let found = sq_correlation_learner(&mut oracle, k, budget, rng)?;
        // Without a hypothesis the learner falls back to the uniform distribution.
        let hypothesis = match &found {
            Some(t) => Dist::noisy_parity(t.clone(), 0.0)?,
            None => Dist::uniform(k + 1),
        };
        Ok(TrialOutcome {
            success: found.as_ref() == Some(&s),
            tv: hypothesis_tv(&hypothesis, &s)?,
            queries: oracle.queries(),
            metrics: Vec::new(),
        })
    })?;
    let closure_point = p.with("learner", ParamValue::Str("closure".into()));
    let closure = r.run(&closure_point, r.trials, |rng| {
        let s = random_bits(k, rng);
        let truth = parity_subspace(&s)?;
        let mut oracle = SampleOracle::new(Dist::AffineUniform(truth.clone()), oracle_rng(rng));
        let learned = closure_learn(&mut oracle, k + 1, delta)?;
        Ok(TrialOutcome {
            success: learned.subspace.same_set(&truth),
            tv: tv(&learned.to_dist(), &Dist::AffineUniform(truth))?,
            queries: oracle.queries(),
            metrics: Vec::new(),
        })
    })?;
    Ok(vec![sq, closure])
}

/// TV between a hypothesis and `P_(s,0,k)`: both sides are affine uniform.
fn hypothesis_tv(h: &Dist, s: &BitVec) -> Result<f64> {
    let truth = Dist::AffineUniform(parity_subspace(s)?);
    let h = match h {
        Dist::NoisyParity(p) => Dist::AffineUniform(parity_subspace(p.secret())?),
        other => other.clone(),
    };
    tv(&h, &truth)
}

fn opnorm_check(p: &Point) -> Result<()> {
    let n = p.usize("n")?;
    if n == 0 || n > MAX_UNITARY_QUBITS {
        return Err(infeasible(format!(
            "opnorm-tv builds full unitaries and needs 1 ≤ n ≤ {MAX_UNITARY_QUBITS}, got {n}"
        )));
    }
    p.usize("layers")?;
    Ok(())
}

fn random_gate<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Gate {
    let q = rng.gen_range(0..n);
    let choices = if n >= 2 { 5 } else { 3 };
    match rng.gen_range(0..choices) {
        0 => Gate::H(q),
        1 => Gate::S(q),
        2 => Gate::T(q),
        c => {
            let mut other = rng.gen_range(0..n - 1);
            if other >= q {
                other += 1;
            }
            if c == 3 {
                Gate::Cnot(q, other)
            } else {
                Gate::Swap(q, other)
            }
        }
    }
}

/// A random Clifford+T circuit `U` and `W = G·U` for one extra random gate `G`.
fn opnorm_point(r: &PointRunner<'_>) -> Result<Vec<PointResult>> {
    let p = r.point;
    let (n, layers) = (p.usize("n")?, p.usize("layers")?);
    let spec = RandomCircuit {
        qubits: n,
        layers,
        allow_t: true,
        nearest_neighbor: false,
        two_qubit_rate: 0.4,
    };
    let result = r.run(p, 0, |rng| {
        let u = random_circuit(&spec, rng)?;
        let mut w = u.clone();
        w.push(random_gate(n, rng))?;
        let check = opnorm_tv_check(&u, &w)?;
        Ok(TrialOutcome {
            success: check.tv <= check.opnorm,
            tv: check.tv,
            queries: 0,
            metrics: vec![
                ("opnorm", check.opnorm),
                ("tv_over_opnorm", check.tv / check.opnorm),
            ],
        })
    })?;
    Ok(vec![result])
}
