//! Learners for circuit output distributions.
//!
//! [`closure_learn`] recovers an affine subspace from uniform samples by
//! shifting the samples onto the direction space and keeping a maximal
//! independent subset. [`sq_correlation_learner`] and [`lpn_brute_force`]
//! are the baselines used to contrast statistical-query and sample access on
//! parity distributions.

use std::time::Duration;

use rand::Rng;

use crate::affine::AffineSubspace;
use crate::dist::{tv, Dist, Query, SampleOracle, StatOracle};
use crate::error::{Error, Result};
use crate::f2linalg::{max_independent_subset, BitMatrix, BitVec};

pub const MAX_LPN_BITS: usize = 20;

/// Output of the closure learner: a parametrization `(R, t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LearnedAffine {
    pub subspace: AffineSubspace,
    pub samples_used: usize,
}

impl LearnedAffine {
    pub fn basis(&self) -> &BitMatrix {
        self.subspace.basis()
    }

    pub fn offset(&self) -> &BitVec {
        self.subspace.offset()
    }

    pub fn dim(&self) -> usize {
        self.subspace.dim()
    }

    /// Generator and evaluator of the learned distribution.
    pub fn to_dist(&self) -> Dist {
        Dist::AffineUniform(self.subspace.clone())
    }
}

/// `n + ⌈log₂(1/δ)⌉`.
pub fn closure_sample_count(n: usize, delta: f64) -> Result<usize> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "δ = {delta} outside (0, 1)"
        )));
    }
    Ok(n + (1.0 / delta).log2().ceil() as usize)
}

/// Draws `n + ⌈log₂(1/δ)⌉` samples from `U_A` and returns `(R, x₁)`.
///
/// Fails to recover `A` exactly when the shifted samples `xᵢ ⊕ x₁` do not
/// span the direction space. The shift makes the first one zero, so only
/// `k − 1` of the `k` draws carry direction information.
pub fn closure_learn(oracle: &mut SampleOracle, n: usize, delta: f64) -> Result<LearnedAffine> {
    if n == 0 {
        return Err(Error::InvalidArgument("closure learner needs n ≥ 1".into()));
    }
    if oracle.num_bits() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: oracle.num_bits(),
        });
    }
    let k = closure_sample_count(n, delta)?;
    let samples: Vec<BitVec> = (0..k).map(|_| oracle.sample()).collect();
    closure_from_samples(&samples)
}

/// Steps 2–5 of the closure learner on a fixed sample sequence.
pub fn closure_from_samples(samples: &[BitVec]) -> Result<LearnedAffine> {
    let anchor = samples.first().ok_or_else(|| {
        Error::InvalidArgument("closure learner needs at least one sample".into())
    })?;
    let n = anchor.len();
    let shifted = samples
        .iter()
        .map(|x| {
            if x.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: x.len(),
                });
            }
            Ok(x ^ anchor)
        })
        .collect::<Result<Vec<_>>>()?;
    let columns: Vec<BitVec> = max_independent_subset(&shifted)
        .into_iter()
        .map(|i| shifted[i].clone())
        .collect();
    let basis = BitMatrix::from_columns(n, &columns)?;
    Ok(LearnedAffine {
        subspace: AffineSubspace::new(basis, anchor.clone())?,
        samples_used: samples.len(),
    })
}

/// Queries correlations `φ_t(x, y) = (−1)^{y ⊕ t·x}` for up to `budget`
/// distinct candidates `t ∈ {0,1}^k`, in an order drawn from `order_rng`, and
/// returns the first `t` whose answer exceeds ½.
pub fn sq_correlation_learner<R: Rng + ?Sized>(
    oracle: &mut StatOracle,
    k: usize,
    budget: u64,
    order_rng: &mut R,
) -> Result<Option<BitVec>> {
    if oracle.num_bits() != k + 1 {
        return Err(Error::DimensionMismatch {
            expected: k + 1,
            got: oracle.num_bits(),
        });
    }
    if k >= 63 {
        return Err(Error::TooLarge {
            what: "correlation learner",
            limit: 62,
            got: k,
        });
    }
    let space = 1usize << k;
    let count = budget.min(space as u64) as usize;
    if count == 0 {
        return Ok(None);
    }
    for idx in rand::seq::index::sample(order_rng, space, count) {
        let t = BitVec::from_index(idx as u64, k);
        if oracle.query(&Query::correlation(&t))? > 0.5 {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// Splits a `(k + 1)`-bit sample into `(x, y)`.
pub fn split_labelled(z: &BitVec) -> (BitVec, bool) {
    let k = z.len() - 1;
    (z.slice(0, k), z.get(k))
}

/// The `t ∈ {0,1}^k` agreeing with the most labels `yᵢ = t·xᵢ`; ties go to
/// the lexicographically first string (entry 0 most significant).
pub fn lpn_brute_force(samples: &[(BitVec, bool)], k: usize) -> Result<BitVec> {
    if k > MAX_LPN_BITS {
        return Err(Error::TooLarge {
            what: "brute-force LPN",
            limit: MAX_LPN_BITS,
            got: k,
        });
    }
    let packed = samples
        .iter()
        .map(|(x, y)| {
            if x.len() != k {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    got: x.len(),
                });
            }
            Ok((x.to_index(), *y))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut best = (0u64, None::<usize>);
    for rank in 0..1u64 << k {
        // Lexicographic rank → mask with entry i at bit i.
        let mask = if k == 0 {
            0
        } else {
            rank.reverse_bits() >> (64 - k)
        };
        let agree = packed
            .iter()
            .filter(|(x, y)| ((x & mask).count_ones() & 1 == 1) == *y)
            .count();
        if best.1.is_none_or(|b| agree > b) {
            best = (mask, Some(agree));
        }
    }
    Ok(BitVec::from_index(best.0, k))
}

/// Outcome of one learning run scored against the truth.
#[derive(Clone, Debug, PartialEq)]
pub struct LearnReport {
    /// `tv_to_truth == 0`; `None` when no ground truth was available.
    pub success: Option<bool>,
    pub tv_to_truth: f64,
    pub queries: u64,
    pub wall_time: Duration,
}

impl LearnReport {
    pub fn score(learned: &Dist, truth: &Dist, queries: u64, wall_time: Duration) -> Result<Self> {
        let d = tv(learned, truth)?;
        Ok(Self {
            success: Some(d == 0.0),
            tv_to_truth: d,
            queries,
            wall_time,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::StatMode;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn bv(s: &str) -> BitVec {
        s.parse().unwrap()
    }

    #[test]
    fn point_subspace() {
        let t = bv("0110");
        let mut o = SampleOracle::new(Dist::PointMass(t.clone()), rng(0));
        let learned = closure_learn(&mut o, 4, 0.5).unwrap();
        assert_eq!(learned.dim(), 0);
        assert_eq!(learned.offset(), &t);
        assert_eq!(learned.to_dist().eval(&t).unwrap(), 1.0);
    }

    #[test]
    fn sample_count_formula() {
        assert_eq!(closure_sample_count(8, 1.0 / 16.0).unwrap(), 12);
        assert_eq!(closure_sample_count(10, 0.01).unwrap(), 17);
        let mut o = SampleOracle::new(Dist::uniform(8), rng(1));
        closure_learn(&mut o, 8, 1.0 / 16.0).unwrap();
        assert_eq!(o.queries(), 12);
        assert!(closure_learn(&mut o, 8, 0.0).is_err());
        assert!(closure_learn(&mut o, 8, 1.0).is_err());
        assert!(closure_learn(&mut o, 0, 0.5).is_err());
        assert!(closure_learn(&mut o, 7, 0.5).is_err());
    }

    #[test]
    fn recovers_small_line() {
        let a = AffineSubspace::from_spanning(bv("00"), &[bv("01")]).unwrap();
        let mut o = SampleOracle::new(Dist::AffineUniform(a.clone()), rng(2));
        let learned = closure_learn(&mut o, 2, 0.001).unwrap();
        assert!(learned.subspace.same_set(&a));
    }

    #[test]
    fn deterministic_given_samples() {
        let samples: Vec<BitVec> = ["1010", "1110", "0010", "1010", "0110"]
            .iter()
            .map(|s| bv(s))
            .collect();
        let a = closure_from_samples(&samples).unwrap();
        assert_eq!(a, closure_from_samples(&samples).unwrap());
        assert_eq!(a.basis_columns_for_test(), vec![bv("0100"), bv("1000")]);
        assert_eq!(a.offset(), &bv("1010"));
    }

    impl LearnedAffine {
        fn basis_columns_for_test(&self) -> Vec<BitVec> {
            self.subspace.basis_columns()
        }
    }

    #[test]
    fn correlation_learner_full_enumeration() {
        for seed in 0..20 {
            let mut r = rng(seed);
            let s = crate::affine::random_bits(4, &mut r);
            let d = Dist::noisy_parity(s.clone(), 0.0).unwrap();
            let mut o = StatOracle::new(d, 0.1, StatMode::Exact, rng(seed)).unwrap();
            assert_eq!(
                sq_correlation_learner(&mut o, 4, 16, &mut r).unwrap(),
                Some(s)
            );
            assert!(o.queries() <= 16);
        }
        let d = Dist::noisy_parity(bv("1111"), 0.0).unwrap();
        let mut o = StatOracle::new(d, 0.1, StatMode::Exact, rng(0)).unwrap();
        assert_eq!(
            sq_correlation_learner(&mut o, 4, 0, &mut rng(0)).unwrap(),
            None
        );
        assert_eq!(o.queries(), 0);
    }

    #[test]
    fn lpn_examples() {
        assert_eq!(lpn_brute_force(&[], 5).unwrap(), BitVec::zeros(5));
        assert!(lpn_brute_force(&[], 21).is_err());

        let s = bv("10110");
        let mut r = rng(3);
        let d = Dist::noisy_parity(s.clone(), 0.0).unwrap();
        let samples: Vec<_> = (0..10).map(|_| split_labelled(&d.sample(&mut r))).collect();
        let xs: Vec<_> = samples.iter().map(|(x, _)| x.clone()).collect();
        assert_eq!(
            crate::f2linalg::rank(&BitMatrix::from_rows(5, xs).unwrap()),
            5
        );
        assert_eq!(lpn_brute_force(&samples, 5).unwrap(), s);

        // Two candidates tie on a single sample with x = 10: t = 00 loses, 10 and 11 tie → 10.
        let one = [(bv("10"), true)];
        assert_eq!(lpn_brute_force(&one, 2).unwrap(), bv("10"));
    }
}
