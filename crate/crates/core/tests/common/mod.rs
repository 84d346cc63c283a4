#![allow(dead_code)]

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use realhodge::matrix::modp;
use realhodge::polarization::{check_polarization, PolarizedLattice};
use realhodge::{GLattice, IntMatrix};

/// Indecomposable ℤ[G]-lattices used as building blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Block {
    Plus,
    Minus,
    Regular,
    Triangular,
}

impl Block {
    fn matrix(self) -> IntMatrix {
        match self {
            Block::Plus => IntMatrix::from_i64(&[[1]]),
            Block::Minus => IntMatrix::from_i64(&[[-1]]),
            Block::Regular => IntMatrix::from_i64(&[[0, 1], [1, 0]]),
            Block::Triangular => IntMatrix::from_i64(&[[1, 1], [0, -1]]),
        }
    }

    fn rank(self) -> usize {
        match self {
            Block::Plus | Block::Minus => 1,
            _ => 2,
        }
    }
}

pub struct RandomLattice {
    pub lattice: GLattice,
    pub blocks: Vec<Block>,
}

impl RandomLattice {
    /// `(h_odd, h_even)` read off the block decomposition.
    pub fn expected(&self) -> (usize, usize) {
        let plus = self.blocks.iter().filter(|b| **b == Block::Plus).count();
        let minus = self.blocks.iter().filter(|b| **b == Block::Minus).count();
        if self.lattice.twist() == 0 {
            (minus, plus)
        } else {
            (plus, minus)
        }
    }
}

fn elementary(n: usize, i: usize, j: usize, c: i64) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    m.set(i, j, BigInt::from(c));
    m
}

fn permutation<R: Rng>(rng: &mut R, n: usize) -> IntMatrix {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut m = IntMatrix::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        m.set(i, j, BigInt::one());
    }
    m
}

fn max_abs(m: &IntMatrix) -> i64 {
    m.entries()
        .iter()
        .map(|x| x.abs().to_i64().unwrap_or(i64::MAX))
        .max()
        .unwrap_or(0)
}

/// A random unimodular matrix built from `ops` elementary moves with entries
/// bounded by `bound`.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize, ops: usize, bound: i64) -> IntMatrix {
    let mut m = permutation(rng, n);
    if n < 2 {
        if rng.gen_bool(0.5) {
            m = m.scale(&BigInt::from(-1));
        }
        return m;
    }
    for _ in 0..ops {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let c = if rng.gen_bool(0.5) { 1 } else { -1 };
        let next = &m * &elementary(n, i, j, c);
        if max_abs(&next) <= bound {
            m = next;
        }
    }
    if rng.gen_bool(0.5) {
        let k = rng.gen_range(0..n);
        let mut d = IntMatrix::identity(n);
        d.set(k, k, BigInt::from(-1));
        m = &m * &d;
    }
    m
}

/// A random G-lattice of rank ≤ `max_rank` with σ-entries in {−1, 0, 1}.
pub fn random_lattice<R: Rng>(rng: &mut R, max_rank: usize) -> RandomLattice {
    let target = rng.gen_range(1..=max_rank);
    let mut blocks = Vec::new();
    let mut rank = 0;
    while rank < target {
        let choices: Vec<Block> = [Block::Plus, Block::Minus, Block::Regular, Block::Triangular]
            .into_iter()
            .filter(|b| rank + b.rank() <= target)
            .collect();
        let b = *choices.choose(rng).expect("rank-one blocks always fit");
        rank += b.rank();
        blocks.push(b);
    }
    let sigma = blocks
        .iter()
        .fold(IntMatrix::zeros(0, 0), |acc, b| acc.block_diag(&b.matrix()));
    // Conjugate while the entries stay in {−1, 0, 1}.
    let mut conj = sigma.clone();
    let ops = rng.gen_range(0..6);
    for _ in 0..ops {
        let p = random_unimodular(rng, rank, 1, 1);
        let pinv = p.inverse_unimodular().expect("unimodular");
        let next = &(&pinv * &conj) * &p;
        if max_abs(&next) <= 1 {
            conj = next;
        }
    }
    let twist = rng.gen_range(0..=1u8);
    RandomLattice {
        lattice: GLattice::new(conj, twist).expect("conjugate of an involution"),
        blocks,
    }
}

fn action_i64(l: &GLattice) -> Vec<Vec<i64>> {
    l.action()
        .to_rows()
        .iter()
        .map(|r| r.iter().map(|x| x.to_i64().expect("small entry")).collect())
        .collect()
}

fn mat_vec_mod(a: &[Vec<i64>], x: &[i64], m: i64) -> Vec<i64> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(u, v)| u * v).sum::<i64>().rem_euclid(m))
        .collect()
}

fn digits(mut k: usize, base: usize, n: usize) -> Vec<i64> {
    (0..n)
        .map(|_| {
            let d = k % base;
            k /= base;
            d as i64
        })
        .collect()
}

fn encode(v: &[i64], base: i64) -> u64 {
    v.iter().rev().fold(0u64, |acc, &d| acc * base as u64 + d as u64)
}

/// `|Z| / |B|` with `Z = {x mod p : (1 ± s)x ≡ 0 mod p²}` and
/// `B = {(1 ∓ s)x mod p}`, by enumeration.
pub fn brute_force_ratio(l: &GLattice, odd: bool, p: i64) -> (usize, usize) {
    let n = l.rank();
    let s = action_i64(l);
    let sign = if odd { 1 } else { -1 };
    let cocycle: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j) + sign * s[i][j]).collect())
        .collect();
    let boundary: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j) - sign * s[i][j]).collect())
        .collect();
    let p2 = p * p;
    let mut z = HashSet::new();
    for k in 0..(p2 as usize).pow(n as u32) {
        let x = digits(k, p2 as usize, n);
        if mat_vec_mod(&cocycle, &x, p2).iter().all(|&c| c == 0) {
            let red: Vec<i64> = x.iter().map(|v| v % p).collect();
            z.insert(encode(&red, p));
        }
    }
    let mut b = HashSet::new();
    for k in 0..(p as usize).pow(n as u32) {
        let x = digits(k, p as usize, n);
        b.insert(encode(&mat_vec_mod(&boundary, &x, p), p));
    }
    assert!(b.is_subset(&z), "coboundaries must be cocycles");
    (z.len(), b.len())
}

/// Tate ranks `(h_odd, h_even)` from the ℤ/4 enumeration.
pub fn z4_oracle(l: &GLattice) -> (usize, usize) {
    let h = |odd| {
        let (z, b) = brute_force_ratio(l, odd, 2);
        assert_eq!(z % b, 0);
        (z / b).trailing_zeros() as usize
    };
    (h(true), h(false))
}

/// Whether the ℤ/9 enumeration sees no 3-torsion in either degree.
pub fn z9_no_three_torsion(l: &GLattice) -> bool {
    [true, false].into_iter().all(|odd| {
        let (z, b) = brute_force_ratio(l, odd, 3);
        z == b
    })
}

const PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

fn principal_start<R: Rng>(rng: &mut R, g: usize) -> (IntMatrix, IntMatrix) {
    let n = 2 * g;
    let mut f = IntMatrix::zeros(n, n);
    for i in 0..g {
        f.set(i, i, BigInt::one());
        f.set(g + i, g + i, -BigInt::one());
        for j in i..g {
            let c = BigInt::from(rng.gen_range(-1..=1i64));
            f.set(i, g + j, c.clone());
            f.set(j, g + i, c);
        }
    }
    (f, realhodge::polarization::standard_symplectic(g))
}

/// Passes to the index-`p` sublattice cut out by a σ-eigencovector mod `p`.
fn sublattice<R: Rng>(rng: &mut R, sigma: &IntMatrix, form: &IntMatrix, p: u64) -> Option<(IntMatrix, IntMatrix)> {
    let n = sigma.rows();
    let mut signs = [1i64, -1];
    signs.shuffle(rng);
    for lambda in signs {
        let shifted = sigma.transpose().add_scalar(&BigInt::from(-lambda)).reduce_mod(p);
        let eigen = modp::kernel(&shifted, n, p);
        if eigen.is_empty() {
            continue;
        }
        let mut phi = vec![0u64; n];
        while phi.iter().all(|&x| x == 0) {
            for v in &eigen {
                let c = rng.gen_range(0..p);
                for (a, b) in phi.iter_mut().zip(v) {
                    *a = (*a + c * b) % p;
                }
            }
        }
        let i = phi.iter().position(|&x| x != 0).expect("nonzero");
        let inv = (1..p).find(|u| u * phi[i] % p == 1).expect("p is prime");
        let mut basis = IntMatrix::identity(n);
        for k in 0..n {
            if k != i {
                basis.set(i, k, -BigInt::from(phi[k] * inv % p));
            }
        }
        basis.set(i, i, BigInt::from(p));
        let new_sigma = (&(&basis.to_rational().inverse()? * &sigma.to_rational()) * &basis.to_rational())
            .to_integer()?;
        let new_form = &(&basis.transpose() * form) * &basis;
        return Some((new_sigma, new_form));
    }
    None
}

/// A random valid polarized lattice of dimension `g` and degree ≤ `max_degree`.
pub fn random_polarized<R: Rng>(rng: &mut R, g: usize, max_degree: u64) -> PolarizedLattice {
    let (mut sigma, mut form) = principal_start(rng, g);
    let mut degree = 1u64;
    loop {
        let p = *PRIMES.choose(rng).expect("nonempty");
        if degree * p > max_degree || rng.gen_bool(0.2) {
            break;
        }
        if let Some((s, f)) = sublattice(rng, &sigma, &form, p) {
            sigma = s;
            form = f;
            degree *= p;
        }
    }
    let n = 2 * g;
    let u = random_unimodular(rng, n, 2 * n, 2);
    let uinv = u.inverse_unimodular().expect("unimodular");
    let sigma = &(&uinv * &sigma) * &u;
    let form = &(&u.transpose() * &form) * &u;
    let lattice = GLattice::new(sigma, 0).expect("conjugate of an involution");
    let report = check_polarization(&lattice, &form);
    assert!(report.is_valid(), "generator produced {:?}", report.failures());
    let pl = PolarizedLattice::new(lattice, form).expect("valid polarization");
    assert_eq!(pl.degree(), BigInt::from(degree));
    pl
}

pub fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}
