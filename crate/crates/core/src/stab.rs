//! Stabilizer tableau simulation of Clifford circuits.
//!
//! The tableau holds `n` destabilizer rows followed by `n` stabilizer rows,
//! each a Pauli operator `(−1)^r · X^x Z^z`. Gate updates follow the usual
//! Aaronson–Gottesman rules. Only the ±1 sign is tracked; the output
//! distribution in the computational basis does not depend on the relative
//! phases of the amplitudes.

use rand::Rng;

use crate::affine::AffineSubspace;
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::f2linalg::{BitMatrix, BitVec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliRow {
    pub x: BitVec,
    pub z: BitVec,
    /// Sign bit: the row is `(−1)^sign · X^x Z^z`.
    pub sign: bool,
}

impl PauliRow {
    fn identity(n: usize) -> Self {
        Self {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
            sign: false,
        }
    }

    /// Whether the two Paulis commute (symplectic form is zero).
    pub fn commutes_with(&self, other: &PauliRow) -> bool {
        self.x.dot(&other.z) == self.z.dot(&other.x)
    }

    /// `self ← other · self`, with the sign of the product.
    ///
    /// Both operands must be Hermitian and commute, so the product is again
    /// `±` a Hermitian Pauli.
    fn absorb(&mut self, other: &PauliRow) {
        // Exponent of i picked up when multiplying single-qubit Paulis, summed mod 4.
        let mut phase: i32 = 2 * (self.sign as i32) + 2 * (other.sign as i32);
        for q in 0..self.x.len() {
            phase += g(other.x.get(q), other.z.get(q), self.x.get(q), self.z.get(q));
        }
        let phase = phase.rem_euclid(4);
        debug_assert!(
            phase == 0 || phase == 2,
            "product of commuting Paulis has an imaginary phase"
        );
        self.sign = phase == 2;
        self.x ^= &other.x;
        self.z ^= &other.z;
    }
}

/// Power of `i` in the product of single-qubit Paulis `X^x1 Z^z1 · X^x2 Z^z2`.
fn g(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
    let (x2, z2) = (x2 as i32, z2 as i32);
    match (x1, z1) {
        (false, false) => 0,
        (true, true) => z2 - x2,
        (true, false) => z2 * (2 * x2 - 1),
        (false, true) => x2 * (1 - 2 * z2),
    }
}

/// Destabilizer/stabilizer tableau of an `n`-qubit stabilizer state.
#[derive(Clone, Debug)]
pub struct StabTableau {
    n: usize,
    rows: Vec<PauliRow>,
}

impl StabTableau {
    /// Tableau of `|0ⁿ⟩`: destabilizers `X_i`, stabilizers `Z_i`.
    pub fn new(n: usize) -> Self {
        let mut rows = Vec::with_capacity(2 * n);
        for i in 0..n {
            let mut r = PauliRow::identity(n);
            r.x.set(i, true);
            rows.push(r);
        }
        for i in 0..n {
            let mut r = PauliRow::identity(n);
            r.z.set(i, true);
            rows.push(r);
        }
        Self { n, rows }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn destabilizers(&self) -> &[PauliRow] {
        &self.rows[..self.n]
    }

    pub fn stabilizers(&self) -> &[PauliRow] {
        &self.rows[self.n..]
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
        match gate {
            Gate::H(a) => {
                for r in &mut self.rows {
                    let (x, z) = (r.x.get(a), r.z.get(a));
                    r.sign ^= x & z;
                    r.x.set(a, z);
                    r.z.set(a, x);
                }
            }
            Gate::S(a) => {
                for r in &mut self.rows {
                    let (x, z) = (r.x.get(a), r.z.get(a));
                    r.sign ^= x & z;
                    r.z.set(a, z ^ x);
                }
            }
            Gate::Cnot(a, b) => {
                for r in &mut self.rows {
                    let (xa, za, xb, zb) = (r.x.get(a), r.z.get(a), r.x.get(b), r.z.get(b));
                    r.sign ^= xa & zb & !(xb ^ za);
                    r.x.set(b, xb ^ xa);
                    r.z.set(a, za ^ zb);
                }
            }
            Gate::Swap(a, b) => {
                for r in &mut self.rows {
                    r.x.swap_bits(a, b);
                    r.z.swap_bits(a, b);
                }
            }
            Gate::T(_) => return Err(Error::NonClifford(gate.to_string())),
        }
        debug_assert!(
            self.stabilizers_commute(),
            "tableau lost commutation after {gate}"
        );
        Ok(())
    }

    /// Stabilizer rows pairwise commute.
    pub fn stabilizers_commute(&self) -> bool {
        let s = self.stabilizers();
        s.iter()
            .enumerate()
            .all(|(i, a)| s[i + 1..].iter().all(|b| a.commutes_with(b)))
    }

    /// Computational-basis support of the stabilized state.
    ///
    /// The stabilizers are row-reduced on their X parts. Generators left with
    /// no X part read `(−1)^r Z^z`, which forces `⟨z, x⟩ = r` on every basis
    /// state in the support. The support is the solution set of those
    /// constraints, and the Born distribution is uniform on it.
    pub fn support(&self) -> AffineSubspace {
        let n = self.n;
        let mut gens: Vec<PauliRow> = self.stabilizers().to_vec();
        let mut next = 0;
        for col in 0..n {
            let Some(found) = (next..n).find(|&r| gens[r].x.get(col)) else {
                continue;
            };
            gens.swap(next, found);
            let pivot = gens[next].clone();
            for (r, row) in gens.iter_mut().enumerate() {
                if r != next && row.x.get(col) {
                    row.absorb(&pivot);
                }
            }
            next += 1;
        }
        let constraints = &gens[next..];
        debug_assert!(constraints.iter().all(|r| r.x.is_zero()));
        let matrix = BitMatrix::from_rows(n, constraints.iter().map(|r| r.z.clone()).collect())
            .expect("rows have length n");
        let rhs = BitVec::from_bools(&constraints.iter().map(|r| r.sign).collect::<Vec<_>>());
        let offset = matrix
            .solve(&rhs)
            .expect("dimensions agree")
            .expect("a stabilizer state has nonempty support");
        let directions = matrix.kernel_basis();
        let basis = BitMatrix::from_columns(n, &directions).expect("kernel vectors have length n");
        AffineSubspace::new(basis, offset).expect("kernel basis is independent")
    }

    /// One computational-basis measurement outcome.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BitVec {
        self.support().sample(rng)
    }
}

/// Runs a Clifford circuit on `|0ⁿ⟩`.
pub fn simulate_clifford(c: &Circuit) -> Result<StabTableau> {
    if let Some(g) = c.gates().find(|g| !g.is_clifford()) {
        return Err(Error::NonClifford(g.to_string()));
    }
    let mut t = StabTableau::new(c.num_qubits());
    for &g in c.gates() {
        t.apply(g)?;
    }
    Ok(t)
}
