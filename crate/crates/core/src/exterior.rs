//! Sparse elements of the exterior algebra on at most 64 generators.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::subsets;
use crate::matrix::IntMatrix;

/// An element of `∧(ℤ^n)`, stored as a map from generator bitmasks to coefficients.
///
/// Bit `i` of a key stands for `e_i`; monomials are ordered by increasing index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Multivector {
    generators: usize,
    terms: BTreeMap<u64, BigInt>,
}

fn mask_of(indices: &[usize]) -> u64 {
    indices.iter().fold(0u64, |m, &i| m | (1u64 << i))
}

/// Sign of `e_a ∧ e_b` relative to the sorted monomial `e_{a ∪ b}`.
fn wedge_sign(a: u64, b: u64) -> bool {
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> j >> 1).count_ones();
        rest &= rest - 1;
    }
    swaps % 2 == 1
}

impl Multivector {
    pub fn zero(generators: usize) -> Self {
        assert!(generators <= 64, "at most 64 generators are supported");
        Self {
            generators,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(generators: usize) -> Self {
        Self::monomial(generators, &[], BigInt::one())
    }

    pub fn generator(generators: usize, i: usize) -> Self {
        Self::monomial(generators, &[i], BigInt::one())
    }

    /// `c · e_{i_1} ∧ … ∧ e_{i_k}` for indices in any order.
    pub fn monomial(generators: usize, indices: &[usize], c: BigInt) -> Self {
        let mut out = Self::zero(generators);
        let mut v = Self::one_raw(generators);
        for &i in indices {
            assert!(i < generators, "generator {i} out of range");
            v = v.wedge(&Self::single(generators, 1u64 << i));
        }
        for (k, x) in v.terms {
            out.add_term(k, x * &c);
        }
        out
    }

    fn one_raw(generators: usize) -> Self {
        Self::single(generators, 0)
    }

    fn single(generators: usize, mask: u64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(mask, BigInt::one());
        Self { generators, terms }
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigInt)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn coefficient(&self, indices: &[usize]) -> BigInt {
        self.terms
            .get(&mask_of(indices))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, mask: u64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(mask).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&mask);
        }
    }

    /// Degree if all terms share one degree; the zero element has degree `None`.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|k| k.count_ones() as usize);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    pub fn component(&self, degree: usize) -> Self {
        Self {
            generators: self.generators,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.count_ones() as usize == degree)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.generators, other.generators);
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(*k, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigInt::one())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.generators);
        }
        Self {
            generators: self.generators,
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.generators, other.generators);
        let mut out = Self::zero(self.generators);
        for (&a, x) in &self.terms {
            for (&b, y) in &other.terms {
                if a & b != 0 {
                    continue;
                }
                let c = x * y;
                out.add_term(a | b, if wedge_sign(a, b) { -c } else { c });
            }
        }
        out
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::one(self.generators);
        for _ in 0..k {
            out = out.wedge(self);
        }
        out
    }

    /// Divides every coefficient by `d`, failing if any division is inexact.
    pub fn div_exact(&self, d: &BigInt) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (k, v) in &self.terms {
            let (q, r) = v.div_rem(d);
            if !r.is_zero() {
                return Err(Error::InexactDivision(format!("{v} by {d}")));
            }
            terms.insert(*k, q);
        }
        Ok(Self {
            generators: self.generators,
            terms,
        })
    }

    /// Image under the algebra map induced by `e_i ↦ Σ_j m[j][i] f_j`.
    pub fn pushforward(&self, m: &IntMatrix) -> Result<Self> {
        if m.cols() != self.generators {
            return Err(Error::Dimension(format!(
                "{}x{} map on {} generators",
                m.rows(),
                m.cols(),
                self.generators
            )));
        }
        let target = m.rows();
        let images: Vec<Self> = (0..self.generators)
            .map(|i| {
                let mut v = Self::zero(target);
                for j in 0..target {
                    v.add_term(1u64 << j, m.get(j, i).clone());
                }
                v
            })
            .collect();
        let mut out = Self::zero(target);
        for (&mask, c) in &self.terms {
            let mut img = Self::one(target).scale(c);
            let mut rest = mask;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                img = img.wedge(&images[i]);
                rest &= rest - 1;
            }
            out = out.add(&img);
        }
        Ok(out)
    }

    /// Coefficients in degree `q` on the lexicographic subset basis.
    pub fn to_vector(&self, q: usize) -> Vec<BigInt> {
        subsets(self.generators, q)
            .iter()
            .map(|s| self.coefficient(s))
            .collect()
    }

    pub fn from_vector(generators: usize, q: usize, v: &[BigInt]) -> Result<Self> {
        let basis = subsets(generators, q);
        if basis.len() != v.len() {
            return Err(Error::Dimension(format!(
                "vector of length {} in degree {q} on {generators} generators",
                v.len()
            )));
        }
        let mut out = Self::zero(generators);
        for (s, c) in basis.iter().zip(v) {
            out.add_term(mask_of(s), c.clone());
        }
        Ok(out)
    }

    /// Re-indexes generators: `e_i ↦ e_{map[i]}` in an algebra on `generators` letters.
    /// Terms involving a generator mapped to `None` are dropped.
    pub fn relabel(&self, generators: usize, map: &[Option<usize>]) -> Self {
        assert_eq!(map.len(), self.generators);
        let mut out = Self::zero(generators);
        for (&mask, c) in &self.terms {
            let mut idx = Vec::new();
            let mut rest = mask;
            let mut dropped = false;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                match map[i] {
                    Some(j) => idx.push(j),
                    None => dropped = true,
                }
                rest &= rest - 1;
            }
            if !dropped {
                out = out.add(&Self::monomial(generators, &idx, c.clone()));
            }
        }
        out
    }

    /// Sorted index lists with coefficients.
    pub fn to_sparse(&self) -> Vec<(Vec<usize>, BigInt)> {
        let mut v: Vec<(Vec<usize>, BigInt)> = self
            .terms
            .iter()
            .map(|(&mask, c)| ((0..64).filter(|i| mask >> i & 1 == 1).collect(), c.clone()))
            .collect();
        v.sort();
        v
    }
}
