//! Finite-rank lattices with an action of G = ℤ/2 and their Tate cohomology.

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{kernel_basis, smith_normal_form, IntMatrix};

/// A free ℤ-module with an involution `sigma` and a Tate twist parity.
///
/// The generator of G acts by `(-1)^twist * sigma`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GLattice {
    sigma: IntMatrix,
    twist: u8,
}

/// 𝔽₂-dimensions of `H^p(G, L)` for odd and even `p > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct TateRanks {
    pub h_odd: usize,
    pub h_even: usize,
}

impl TateRanks {
    /// Dimension of `H^p` for `p > 0`.
    pub fn degree(&self, p: usize) -> usize {
        assert!(p > 0, "Tate ranks are only recorded in positive degree");
        if p % 2 == 1 {
            self.h_odd
        } else {
            self.h_even
        }
    }
}

impl std::ops::Add for TateRanks {
    type Output = TateRanks;
    fn add(self, rhs: TateRanks) -> TateRanks {
        TateRanks {
            h_odd: self.h_odd + rhs.h_odd,
            h_even: self.h_even + rhs.h_even,
        }
    }
}

impl GLattice {
    pub fn new(sigma: IntMatrix, twist: u8) -> Result<Self> {
        if !sigma.is_square() {
            return Err(Error::Dimension(format!(
                "sigma is {}x{}",
                sigma.rows(),
                sigma.cols()
            )));
        }
        if twist > 1 {
            return Err(Error::OutOfRange(format!("twist {twist} is not a parity")));
        }
        if !(&sigma * &sigma).is_identity() {
            return Err(Error::NotInvolution);
        }
        Ok(Self { sigma, twist })
    }

    /// ℤ(k) for a parity `k`.
    pub fn trivial(twist: u8) -> Self {
        Self {
            sigma: IntMatrix::identity(1),
            twist: twist % 2,
        }
    }

    /// The regular representation ℤ[G].
    pub fn induced() -> Self {
        Self {
            sigma: IntMatrix::from_i64(&[[0, 1], [1, 0]]),
            twist: 0,
        }
    }

    /// `diag(1, -1)`: first cohomology of an elliptic curve with two real components.
    pub fn split_elliptic() -> Self {
        Self {
            sigma: IntMatrix::from_i64(&[[1, 0], [0, -1]]),
            twist: 0,
        }
    }

    /// The zero lattice.
    pub fn zero() -> Self {
        Self {
            sigma: IntMatrix::zeros(0, 0),
            twist: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.sigma.rows()
    }

    pub fn sigma(&self) -> &IntMatrix {
        &self.sigma
    }

    pub fn twist(&self) -> u8 {
        self.twist
    }

    /// The matrix by which the generator of G actually acts.
    pub fn action(&self) -> IntMatrix {
        if self.twist == 0 {
            self.sigma.clone()
        } else {
            -&self.sigma
        }
    }

    pub fn retwist(&self, k: i64) -> Self {
        Self {
            sigma: self.sigma.clone(),
            twist: ((self.twist as i64 + k).rem_euclid(2)) as u8,
        }
    }

    pub fn dual(&self) -> Self {
        Self {
            sigma: self.sigma.transpose(),
            twist: self.twist,
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.twist != other.twist {
            return Err(Error::TwistMismatch(self.twist, other.twist));
        }
        Ok(Self {
            sigma: self.sigma.block_diag(&other.sigma),
            twist: self.twist,
        })
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            sigma: self.sigma.kronecker(&other.sigma),
            twist: (self.twist + other.twist) % 2,
        }
    }

    /// `∧^q L` on lexicographically ordered `q`-subsets; the entry in row `I`,
    /// column `J` is the minor `det sigma[I, J]`.
    pub fn exterior_power(&self, q: usize) -> Result<Self> {
        let n = self.rank();
        if q > n {
            return Err(Error::OutOfRange(format!("exterior power {q} of rank {n}")));
        }
        let subsets = subsets(n, q);
        let m = subsets.len();
        let mut sigma = IntMatrix::zeros(m, m);
        for (a, rows) in subsets.iter().enumerate() {
            // Skip minors with an all-zero row; sigma is typically sparse.
            let live: Vec<bool> = (0..n)
                .map(|j| rows.iter().any(|&i| !self.sigma.get(i, j).is_zero()))
                .collect();
            for (b, cols) in subsets.iter().enumerate() {
                if cols.iter().any(|&j| !live[j]) {
                    continue;
                }
                let minor = self.sigma.submatrix(rows, cols).det();
                if !minor.is_zero() {
                    sigma.set(a, b, minor);
                }
            }
        }
        Ok(Self {
            sigma,
            twist: ((q as u64 * self.twist as u64) % 2) as u8,
        })
    }

    /// Basis (as columns) of the invariant sublattice `H^0(G, L)`.
    pub fn invariants(&self) -> IntMatrix {
        let s = &self.action() - &IntMatrix::identity(self.rank());
        kernel_basis(&s)
    }

    pub fn free_rank(&self) -> usize {
        self.invariants().cols()
    }
}

/// Lexicographically ordered `q`-element subsets of `0..n`.
pub fn subsets(n: usize, q: usize) -> Vec<Vec<usize>> {
    (0..n).combinations(q).collect()
}

/// `H^p(G, L)` for one parity of `p`, with an explicit 𝔽₂-coordinate map on cocycles.
///
/// For odd `p` the cocycles are `ker(1 + s)` and the coboundaries `im(1 - s)`;
/// even `p` swaps the signs.
#[derive(Clone, Debug)]
pub struct TateGroup {
    cocycle: IntMatrix,
    operator: IntMatrix,
    // rows of V^{-1} selecting kernel coordinates
    to_kernel: IntMatrix,
    // change of basis on kernel coordinates diagonalizing the coboundaries
    to_quotient: IntMatrix,
    torsion_rows: Vec<usize>,
}

impl TateGroup {
    pub fn new(lattice: &GLattice, odd: bool) -> Self {
        let n = lattice.rank();
        let s = lattice.action();
        let id = IntMatrix::identity(n);
        let (cocycle_op, boundary_op) = if odd {
            (&id + &s, &id - &s)
        } else {
            (&id - &s, &id + &s)
        };
        let snf = smith_normal_form(&cocycle_op);
        let r = snf.rank();
        let vinv = snf
            .v
            .inverse_unimodular()
            .expect("Smith transforms are unimodular");
        let kernel_rows: Vec<usize> = (r..n).collect();
        let all_cols: Vec<usize> = (0..n).collect();
        let to_kernel = vinv.submatrix(&kernel_rows, &all_cols);
        let boundaries = &to_kernel * &boundary_op;
        let bsnf = smith_normal_form(&boundaries);
        let factors = bsnf.invariant_factors();
        let k = kernel_rows.len();
        let mut torsion_rows = Vec::new();
        for i in 0..k {
            let d = factors.get(i).cloned().unwrap_or_else(BigInt::zero);
            if d.is_one() {
                continue;
            }
            // (1 - s)(1 + s) = 0 and 2 = (1 - s) + (1 + s) force d = 2.
            assert_eq!(d, BigInt::from(2), "Tate cohomology must be 2-torsion");
            torsion_rows.push(i);
        }
        Self {
            cocycle: cocycle_op,
            operator: boundary_op,
            to_kernel,
            to_quotient: bsnf.u,
            torsion_rows,
        }
    }

    pub fn dimension(&self) -> usize {
        self.torsion_rows.len()
    }

    pub fn is_cocycle(&self, v: &[BigInt]) -> bool {
        self.cocycle.mul_vec(v).iter().all(Zero::is_zero)
    }

    /// The coboundary operator `1 ∓ s`.
    pub fn boundary_operator(&self) -> &IntMatrix {
        &self.operator
    }

    /// 𝔽₂-coordinates of the class of a cocycle.
    pub fn class_of(&self, v: &[BigInt]) -> Result<Vec<u8>> {
        if v.len() != self.cocycle.cols() {
            return Err(Error::Dimension(format!(
                "vector of length {} for rank {}",
                v.len(),
                self.cocycle.cols()
            )));
        }
        if !self.is_cocycle(v) {
            return Err(Error::Postcondition("vector is not a cocycle".into()));
        }
        let coords = self.to_quotient.mul_vec(&self.to_kernel.mul_vec(v));
        Ok(self
            .torsion_rows
            .iter()
            .map(|&i| u8::from(coords[i].is_odd()))
            .collect())
    }
}

pub fn tate_cohomology(lattice: &GLattice) -> TateRanks {
    TateRanks {
        h_odd: TateGroup::new(lattice, true).dimension(),
        h_even: TateGroup::new(lattice, false).dimension(),
    }
}
