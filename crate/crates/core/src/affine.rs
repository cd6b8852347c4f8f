//! Affine subspaces `A = {R·b ⊕ t : b ∈ F₂^m}` of F₂ⁿ.

use rand::Rng;

use crate::error::{Error, Result};
use crate::f2linalg::{max_independent_subset, BitMatrix, BitVec, EchelonBasis};

/// An affine subspace with an independent direction basis.
///
/// `basis` is `n × m`: its columns are linearly independent and span the
/// direction space `L`, and `offset` is one point of `A`.
#[derive(Clone, Debug)]
pub struct AffineSubspace {
    basis: BitMatrix,
    offset: BitVec,
    directions: EchelonBasis,
}

impl AffineSubspace {
    /// Builds `A` from an `n × m` basis matrix with independent columns.
    pub fn new(basis: BitMatrix, offset: BitVec) -> Result<Self> {
        let n = basis.nrows();
        if offset.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: offset.len(),
            });
        }
        let mut directions = EchelonBasis::new(n);
        for c in basis.columns() {
            if !directions.insert(&c) {
                return Err(Error::InvalidArgument(
                    "basis columns are linearly dependent".into(),
                ));
            }
        }
        Ok(Self {
            basis,
            offset,
            directions,
        })
    }

    /// Builds `A = offset + span(spanning)`, keeping a maximal independent
    /// subset of `spanning` (greedy, input order) as the basis.
    pub fn from_spanning(offset: BitVec, spanning: &[BitVec]) -> Result<Self> {
        let n = offset.len();
        if let Some(bad) = spanning.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: bad.len(),
            });
        }
        let kept: Vec<BitVec> = max_independent_subset(spanning)
            .into_iter()
            .map(|i| spanning[i].clone())
            .collect();
        Self::new(BitMatrix::from_columns(n, &kept)?, offset)
    }

    pub fn point(offset: BitVec) -> Self {
        let n = offset.len();
        Self::new(BitMatrix::zeros(n, 0), offset).expect("empty basis is independent")
    }

    /// The whole space F₂ⁿ.
    pub fn full(n: usize) -> Self {
        Self::new(BitMatrix::identity(n), BitVec::zeros(n)).expect("identity is independent")
    }

    /// A uniformly random `m`-dimensional affine subspace of F₂ⁿ.
    pub fn random<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Self> {
        if m > n {
            return Err(Error::InvalidArgument(format!(
                "dimension {m} exceeds ambient dimension {n}"
            )));
        }
        let mut directions = EchelonBasis::new(n);
        let mut columns = Vec::with_capacity(m);
        while columns.len() < m {
            let v = random_bits(n, rng);
            if directions.insert(&v) {
                columns.push(v);
            }
        }
        Self::new(BitMatrix::from_columns(n, &columns)?, random_bits(n, rng))
    }

    /// Ambient dimension `n`.
    pub fn ambient_dim(&self) -> usize {
        self.offset.len()
    }

    /// Dimension `m`; the subspace has `2^m` points.
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &BitMatrix {
        &self.basis
    }

    pub fn offset(&self) -> &BitVec {
        &self.offset
    }

    pub fn basis_columns(&self) -> Vec<BitVec> {
        self.basis.columns()
    }

    pub fn contains(&self, x: &BitVec) -> Result<bool> {
        if x.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: x.len(),
            });
        }
        Ok(self.directions.contains(&(x ^ &self.offset)))
    }

    pub fn direction_contains(&self, v: &BitVec) -> bool {
        self.directions.contains(v)
    }

    /// `R·b ⊕ t`.
    pub fn element(&self, coefficients: &BitVec) -> Result<BitVec> {
        let mut x = self.basis.mul_vec(coefficients)?;
        x ^= &self.offset;
        Ok(x)
    }

    /// Uniform sample: `b` uniform in F₂^m, output `R·b ⊕ t`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BitVec {
        let b = random_bits(self.dim(), rng);
        self.element(&b).expect("coefficient length matches basis")
    }

    /// Every point of `A`, in the order of the coefficient integer `b`.
    pub fn points(&self) -> impl Iterator<Item = BitVec> + '_ {
        let columns = self.basis_columns();
        let m = self.dim();
        assert!(m < 64, "cannot enumerate a {m}-dimensional subspace");
        (0u64..1 << m).map(move |b| {
            let mut x = self.offset.clone();
            for (j, c) in columns.iter().enumerate() {
                if b >> j & 1 == 1 {
                    x ^= c;
                }
            }
            x
        })
    }

    /// Set equality of the two subspaces.
    pub fn same_set(&self, other: &AffineSubspace) -> bool {
        self.ambient_dim() == other.ambient_dim()
            && self.dim() == other.dim()
            && self.contains(&other.offset).unwrap_or(false)
            && other
                .basis_columns()
                .iter()
                .all(|c| self.directions.contains(c))
    }

    /// `log₂ |A ∩ B|`, or `None` when the intersection is empty.
    pub fn intersection_dim(&self, other: &AffineSubspace) -> Result<Option<usize>> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: other.ambient_dim(),
            });
        }
        // R_A·b ⊕ R_B·c = t_A ⊕ t_B is solvable iff the sets meet; then the
        // intersection is a coset of L_A ∩ L_B.
        let mut columns = self.basis_columns();
        columns.extend(other.basis_columns());
        let joint = BitMatrix::from_columns(self.ambient_dim(), &columns)?;
        let rhs = &self.offset ^ &other.offset;
        if joint.solve(&rhs)?.is_none() {
            return Ok(None);
        }
        Ok(Some(self.dim() + other.dim() - joint.rank()))
    }
}

impl PartialEq for AffineSubspace {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis && self.offset == other.offset
    }
}

pub fn random_bits<R: Rng + ?Sized>(len: usize, rng: &mut R) -> BitVec {
    let mut v = BitVec::zeros(len);
    for i in 0..len {
        if rng.gen::<bool>() {
            v.set(i, true);
        }
    }
    v
}
