//! Dense statevector simulation for small circuits, T gates included.
//!
//! Basis state index `i` corresponds to the bit string whose entry `q` is bit
//! `q` of `i`, matching [`BitVec::from_index`].

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::f2linalg::BitVec;

pub const MAX_STATEVECTOR_QUBITS: usize = 20;
pub const MAX_UNITARY_QUBITS: usize = 10;

const NORM_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct StateVector {
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn zero_state(n: usize) -> Result<Self> {
        guard("statevector", n, MAX_STATEVECTOR_QUBITS)?;
        Ok(Self::basis_state(n, 0))
    }

    fn basis_state(n: usize, index: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self { n, amplitudes }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn apply(&mut self, gate: Gate) -> Result<()> {
        for q in gate.qubits() {
            if q >= self.n {
                return Err(Error::QubitOutOfRange {
                    qubit: q,
                    n: self.n,
                });
            }
        }
        let amps = &mut self.amplitudes;
        match gate {
            Gate::H(q) => {
                let bit = 1 << q;
                let s = std::f64::consts::FRAC_1_SQRT_2;
                for i in (0..amps.len()).filter(|i| i & bit == 0) {
                    let (a, b) = (amps[i], amps[i | bit]);
                    amps[i] = (a + b) * s;
                    amps[i | bit] = (a - b) * s;
                }
            }
            Gate::S(q) => phase_where_set(amps, q, Complex64::new(0.0, 1.0)),
            Gate::T(q) => phase_where_set(
                amps,
                q,
                Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4),
            ),
            Gate::Cnot(c, t) => {
                let (cb, tb) = (1 << c, 1 << t);
                for i in (0..amps.len()).filter(|i| i & cb != 0 && i & tb == 0) {
                    amps.swap(i, i | tb);
                }
            }
            Gate::Swap(a, b) => {
                let (ab, bb) = (1 << a, 1 << b);
                for i in (0..amps.len()).filter(|i| i & ab != 0 && i & bb == 0) {
                    amps.swap(i, i ^ ab ^ bb);
                }
            }
        }
        Ok(())
    }

    pub fn run(&mut self, c: &Circuit) -> Result<()> {
        if c.num_qubits() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: c.num_qubits(),
            });
        }
        for layer in c.layers() {
            for &g in layer {
                self.apply(g)?;
            }
            debug_assert!((self.norm_sqr() - 1.0).abs() < NORM_TOLERANCE);
        }
        Ok(())
    }

    pub fn distribution(&self) -> DenseDist {
        let probs = self.amplitudes.iter().map(Complex64::norm_sqr).collect();
        DenseDist::new(self.n, probs).expect("unitary evolution keeps the state normalized")
    }
}

fn phase_where_set(amps: &mut [Complex64], q: usize, phase: Complex64) {
    let bit = 1 << q;
    for (i, a) in amps.iter_mut().enumerate() {
        if i & bit != 0 {
            *a *= phase;
        }
    }
}

fn guard(what: &'static str, n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::TooLarge {
            what,
            limit,
            got: n,
        });
    }
    Ok(())
}

/// An explicit probability table over `{0,1}ⁿ`.
#[derive(Clone, Debug)]
pub struct DenseDist {
    n: usize,
    probs: Vec<f64>,
    cumulative: Vec<f64>,
}

impl DenseDist {
    pub fn new(n: usize, probs: Vec<f64>) -> Result<Self> {
        guard("dense distribution", n, MAX_STATEVECTOR_QUBITS)?;
        if probs.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                got: probs.len(),
            });
        }
        if let Some(p) = probs.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::InvalidArgument(format!("invalid probability {p}")));
        }
        let cumulative: Vec<f64> = probs
            .iter()
            .scan(0.0, |acc, p| {
                *acc += p;
                Some(*acc)
            })
            .collect();
        let total = cumulative.last().copied().unwrap_or(0.0);
        if (total - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidArgument(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(Self {
            n,
            probs,
            cumulative,
        })
    }

    pub fn num_bits(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, x: &BitVec) -> f64 {
        assert_eq!(x.len(), self.n, "outcome length");
        self.probs[x.to_index() as usize]
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BitVec {
        let total = *self.cumulative.last().expect("table is never empty");
        let u = rng.gen::<f64>() * total;
        let mut idx = self.cumulative.partition_point(|&c| c <= u);
        // Never land on a zero-probability outcome because of rounding at the top.
        while idx >= self.probs.len() || self.probs[idx] == 0.0 {
            idx = idx.min(self.probs.len()) - 1;
        }
        BitVec::from_index(idx as u64, self.n)
    }

    /// `½ Σ |p(x) − q(x)|`.
    pub fn tv(&self, other: &DenseDist) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(0.5
            * self
                .probs
                .iter()
                .zip(&other.probs)
                .map(|(p, q)| (p - q).abs())
                .sum::<f64>())
    }
}

impl PartialEq for DenseDist {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.probs == other.probs
    }
}

/// Exact Born distribution `|⟨x|U|0ⁿ⟩|²` of `c`.
pub fn sv_distribution(c: &Circuit) -> Result<DenseDist> {
    let mut psi = StateVector::zero_state(c.num_qubits())?;
    psi.run(c)?;
    Ok(psi.distribution())
}

/// The `2ⁿ × 2ⁿ` unitary of `c`; column `k` is the circuit applied to `|k⟩`.
pub fn circuit_unitary(c: &Circuit) -> Result<DMatrix<Complex64>> {
    let n = c.num_qubits();
    guard("circuit unitary", n, MAX_UNITARY_QUBITS)?;
    let dim = 1 << n;
    let mut u = DMatrix::zeros(dim, dim);
    for k in 0..dim {
        let mut psi = StateVector::basis_state(n, k);
        psi.run(c)?;
        u.set_column(k, &nalgebra::DVector::from_column_slice(&psi.amplitudes));
    }
    Ok(u)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormCheck {
    /// Largest singular value of `U − W`.
    pub opnorm: f64,
    /// Total variation distance between the two Born distributions.
    pub tv: f64,
}

/// Operator-norm distance of two circuits' unitaries next to the TV distance
/// of their output distributions. No global phase is removed.
pub fn opnorm_tv_check(a: &Circuit, b: &Circuit) -> Result<NormCheck> {
    if a.num_qubits() != b.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: a.num_qubits(),
            got: b.num_qubits(),
        });
    }
    let u = circuit_unitary(a)?;
    let w = circuit_unitary(b)?;
    let opnorm = (u - w).singular_values().max();
    let tv = sv_distribution(a)?.tv(&sv_distribution(b)?)?;
    Ok(NormCheck { opnorm, tv })
}
