//! Equivariant cohomology of real tori through the degenerate Hochschild–Serre
//! spectral sequence, real-locus component counts, and torsion budgets.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exterior::Multivector;
use crate::lattice::{tate_cohomology, GLattice, TateRanks};
use crate::matrix::IntMatrix;

/// Topological type of a real elliptic curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EllipticType {
    /// Connected real locus; `H¹ ≅ ℤ[G]`.
    Connected,
    /// Two real components; `H¹ ≅ ℤ ⊕ ℤ(1)`.
    Split,
}

impl EllipticType {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "connected" => Ok(Self::Connected),
            "split" => Ok(Self::Split),
            other => Err(Error::Parse(format!("unknown elliptic type {other:?}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Connected => "connected",
            Self::Split => "split",
        }
    }
}

/// `H¹(A(ℂ), ℤ)` of a complex torus of dimension `g` with its real structure.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RealTorus {
    g: usize,
    h1: GLattice,
}

impl RealTorus {
    /// Requires rank `2g`, twist 0, and trace 0 (the ±1 eigenspaces of an
    /// anti-holomorphic involution both have rank `g`).
    pub fn new(h1: GLattice) -> Result<Self> {
        let n = h1.rank();
        if n % 2 != 0 {
            return Err(Error::InvalidTorus(format!("odd rank {n}")));
        }
        if h1.twist() != 0 {
            return Err(Error::InvalidTorus("H^1 must carry twist 0".into()));
        }
        if h1.sigma().trace() != BigInt::from(0) {
            return Err(Error::InvalidTorus(format!(
                "involution has trace {}, expected 0",
                h1.sigma().trace()
            )));
        }
        Ok(Self { g: n / 2, h1 })
    }

    pub fn point() -> Self {
        Self {
            g: 0,
            h1: GLattice::zero(),
        }
    }

    pub fn elliptic(kind: EllipticType) -> Self {
        let h1 = match kind {
            EllipticType::Connected => GLattice::induced(),
            EllipticType::Split => GLattice::split_elliptic(),
        };
        Self { g: 1, h1 }
    }

    pub fn from_factors(factors: &[EllipticType]) -> Self {
        factors
            .iter()
            .fold(Self::point(), |acc, &f| acc.product(&Self::elliptic(f)))
    }

    pub fn product(&self, other: &Self) -> Self {
        Self {
            g: self.g + other.g,
            h1: self
                .h1
                .direct_sum(&other.h1)
                .expect("both factors carry twist 0"),
        }
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn h1(&self) -> &GLattice {
        &self.h1
    }
}

/// The graded lattice `⊕_q ∧^q H¹` with its cup product.
#[derive(Clone, Debug)]
pub struct CohomologyRing {
    torus: RealTorus,
    graded: Vec<GLattice>,
}

pub fn cohomology_ring(t: &RealTorus) -> CohomologyRing {
    let graded = (0..=t.h1.rank())
        .map(|q| t.h1.exterior_power(q).expect("q within rank"))
        .collect();
    CohomologyRing {
        torus: t.clone(),
        graded,
    }
}

impl CohomologyRing {
    pub fn torus(&self) -> &RealTorus {
        &self.torus
    }

    /// `H^q(A(ℂ), ℤ)` with twist 0.
    pub fn degree(&self, q: usize) -> Result<&GLattice> {
        self.graded
            .get(q)
            .ok_or_else(|| Error::OutOfRange(format!("degree {q} above {}", self.graded.len() - 1)))
    }

    pub fn total_rank(&self) -> usize {
        self.graded.iter().map(GLattice::rank).sum()
    }

    /// Cup product of coordinate vectors in degrees `p` and `q`.
    pub fn cup(&self, p: usize, x: &[BigInt], q: usize, y: &[BigInt]) -> Result<Vec<BigInt>> {
        let n = self.torus.h1.rank();
        if p + q > n {
            return Ok(Vec::new());
        }
        let a = Multivector::from_vector(n, p, x)?;
        let b = Multivector::from_vector(n, q, y)?;
        Ok(a.wedge(&b).to_vector(p + q))
    }
}

/// Graded pieces `H^p(G, H^{2k-p}(ℤ(k)))` of the Hochschild–Serre filtration on
/// `H^{2k}_G(A(ℂ), ℤ(k))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationProfile {
    pub degree: usize,
    pub twist: usize,
    /// `p ↦ dim_𝔽₂` for `p = 1..=2k`.
    pub ranks: BTreeMap<usize, usize>,
    /// Rank of `H^{2k}(A(ℂ), ℤ(k))^G`.
    pub free_rank: usize,
}

impl FiltrationProfile {
    pub fn torsion_dimension(&self) -> usize {
        self.ranks.values().sum()
    }
}

pub fn hs_profile(ring: &CohomologyRing, k: usize) -> Result<FiltrationProfile> {
    let n = ring.torus.h1.rank();
    if 2 * k > n {
        return Err(Error::OutOfRange(format!(
            "degree {} exceeds real dimension {n}",
            2 * k
        )));
    }
    let ranks = (1..=2 * k)
        .map(|p| {
            let piece = ring.graded[2 * k - p].retwist(k as i64);
            (p, tate_cohomology(&piece).degree(p))
        })
        .collect();
    let free_rank = ring.graded[2 * k].retwist(k as i64).free_rank();
    Ok(FiltrationProfile {
        degree: 2 * k,
        twist: k,
        ranks,
        free_rank,
    })
}

/// `dim_𝔽₂` of the torsion in `H^n_G(ℤ(k))` for the exterior algebra on any
/// G-lattice `h1`, assuming the spectral sequence degenerates.
pub fn hs_torsion_dimension(h1: &GLattice, n: usize, k: i64) -> Result<usize> {
    let mut total = 0;
    for p in 1..=n {
        let q = n - p;
        if q > h1.rank() {
            continue;
        }
        let piece = h1.exterior_power(q)?.retwist(k);
        total += tate_cohomology(&piece).degree(p);
    }
    Ok(total)
}

/// `|π₀(A(ℝ))| = |H¹(G, Λ)|` with `Λ = H^{2g-1}(A(ℂ), ℤ(g))`.
pub fn pi0_real_locus(t: &RealTorus) -> u64 {
    if t.g == 0 {
        return 1;
    }
    let lambda = t
        .h1
        .exterior_power(2 * t.g - 1)
        .expect("2g-1 within rank")
        .retwist(t.g as i64);
    1u64 << tate_cohomology(&lambda).h_odd
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// `dim H^i(A(ℝ), ℤ/2)`: the real locus is a disjoint union of `g`-tori.
pub fn real_locus_betti(t: &RealTorus, i: usize) -> Result<u64> {
    if i > t.g {
        return Err(Error::OutOfRange(format!("degree {i} above dimension {}", t.g)));
    }
    Ok(pi0_real_locus(t) * binomial(t.g, i))
}

/// `Σ_{p ≥ 1} dim H^{k-2p}(A(ℝ), ℤ/2)` for `k = g - 1`.
pub fn topological_correction(t: &RealTorus) -> u64 {
    if t.g < 1 {
        return 0;
    }
    let k = t.g - 1;
    (1..)
        .take_while(|p| 2 * p <= k)
        .map(|p| real_locus_betti(t, k - 2 * p).expect("degree within range"))
        .sum()
}

/// `dim_𝔽₂ H⁴_G(A(ℂ), ℤ(2))₀[2]` for a threefold.
pub fn hdg0_torsion_budget(t: &RealTorus) -> Result<u64> {
    if t.g != 3 {
        return Err(Error::InvalidTorus(format!(
            "torsion budget is defined for threefolds, got g = {}",
            t.g
        )));
    }
    let profile = hs_profile(&cohomology_ring(t), 2)?;
    let torsion = profile.torsion_dimension() as u64;
    let pi0 = pi0_real_locus(t);
    torsion
        .checked_sub(pi0)
        .ok_or_else(|| Error::Postcondition(format!("torsion {torsion} below |pi0| = {pi0}")))
}

/// One summand `H¹(G, H^i(a) ⊗ H^j(b)(k))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KunnethSummand {
    pub i: usize,
    pub j: usize,
    pub dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KunnethDecomposition {
    pub summands: Vec<KunnethSummand>,
    pub total: usize,
    /// `h_odd` of `H^n(a × b)(k)` computed directly.
    pub direct: usize,
}

pub fn kunneth_h_odd(a: &RealTorus, b: &RealTorus, n: usize, k: i64) -> Result<KunnethDecomposition> {
    let (ra, rb) = (a.h1.rank(), b.h1.rank());
    if n > ra + rb {
        return Err(Error::OutOfRange(format!("degree {n} above {}", ra + rb)));
    }
    let mut summands = Vec::new();
    for i in n.saturating_sub(rb)..=n.min(ra) {
        let j = n - i;
        let piece = a.h1.exterior_power(i)?.tensor(&b.h1.exterior_power(j)?).retwist(k);
        summands.push(KunnethSummand {
            i,
            j,
            dimension: tate_cohomology(&piece).h_odd,
        });
    }
    let total = summands.iter().map(|s| s.dimension).sum();
    let direct = tate_cohomology(&a.product(b).h1.exterior_power(n)?.retwist(k)).h_odd;
    Ok(KunnethDecomposition {
        summands,
        total,
        direct,
    })
}

/// `H¹` of a compact torus whose involution acts by `-1`.
pub fn antipodal_torus_h1(dim: usize) -> GLattice {
    GLattice::new(-&IntMatrix::identity(dim), 0).expect("-I is an involution")
}

pub fn tate_of_degree(ring: &CohomologyRing, q: usize, k: i64) -> Result<TateRanks> {
    Ok(tate_cohomology(&ring.degree(q)?.retwist(k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use EllipticType::{Connected, Split};

    #[test]
    fn ring_ranks() {
        let t = RealTorus::from_factors(&[Connected, Split, Split]);
        let r = cohomology_ring(&t);
        assert_eq!(r.degree(3).unwrap().rank(), 20);
        assert_eq!(r.total_rank(), 64);
        assert_eq!(r.degree(0).unwrap(), &GLattice::trivial(0));
        assert!(r.degree(7).is_err());
    }

    #[test]
    fn elliptic_cases() {
        let c = RealTorus::elliptic(Connected);
        assert_eq!(cohomology_ring(&c).degree(1).unwrap(), &GLattice::induced());
        let s = RealTorus::elliptic(Split);
        let h2 = cohomology_ring(&s).degree(2).unwrap().retwist(1);
        assert_eq!(h2.action(), IntMatrix::identity(1));
        for t in [c, s] {
            assert_eq!(hs_profile(&cohomology_ring(&t), 1).unwrap().free_rank, 1);
        }
    }

    #[test]
    fn profile_connected_threefold() {
        let t = RealTorus::from_factors(&[Connected; 3]);
        let p = hs_profile(&cohomology_ring(&t), 2).unwrap();
        assert_eq!(p.ranks, BTreeMap::from([(1, 0), (2, 0), (3, 0), (4, 1)]));
        assert_eq!(hdg0_torsion_budget(&t).unwrap(), 0);
        assert!(hs_profile(&cohomology_ring(&t), 4).is_err());
    }

    #[test]
    fn profile_split_threefold() {
        let t = RealTorus::from_factors(&[Split; 3]);
        let p = hs_profile(&cohomology_ring(&t), 2).unwrap();
        assert_eq!(p.ranks, BTreeMap::from([(1, 10), (2, 6), (3, 3), (4, 1)]));
        assert_eq!(p.torsion_dimension(), 20);
        assert_eq!(hdg0_torsion_budget(&t).unwrap(), 12);
        assert_eq!(p.torsion_dimension(), hs_torsion_dimension(t.h1(), 4, 2).unwrap());
    }

    #[test]
    fn antipodal_three_torus() {
        assert_eq!(hs_torsion_dimension(&antipodal_torus_h1(3), 4, 0).unwrap(), 8);
    }

    #[test]
    fn pi0_examples() {
        assert_eq!(pi0_real_locus(&RealTorus::from_factors(&[Connected; 3])), 1);
        assert_eq!(pi0_real_locus(&RealTorus::from_factors(&[Split; 3])), 8);
        assert_eq!(
            pi0_real_locus(&RealTorus::from_factors(&[Split, Connected, Connected])),
            2
        );
        assert_eq!(pi0_real_locus(&RealTorus::point()), 1);
    }

    #[test]
    fn betti_examples() {
        let c3 = RealTorus::from_factors(&[Connected; 3]);
        assert_eq!(real_locus_betti(&c3, 0).unwrap(), 1);
        let s3 = RealTorus::from_factors(&[Split; 3]);
        assert_eq!(real_locus_betti(&s3, 1).unwrap(), 24);
        let s2 = RealTorus::from_factors(&[Split; 2]);
        assert_eq!(real_locus_betti(&s2, 2).unwrap(), 4);
        assert!(real_locus_betti(&s2, 3).is_err());
        assert_eq!(topological_correction(&s3), 8);
    }

    #[test]
    fn budget_requires_threefold() {
        assert!(hdg0_torsion_budget(&RealTorus::elliptic(Split)).is_err());
    }

    #[test]
    fn rejects_bad_tori() {
        assert!(RealTorus::new(GLattice::trivial(0)).is_err());
        assert!(RealTorus::new(GLattice::induced().retwist(1)).is_err());
        let id = GLattice::new(IntMatrix::identity(2), 0).unwrap();
        assert!(RealTorus::new(id).is_err());
    }

    #[test]
    fn kunneth_examples() {
        let b = RealTorus::from_factors(&[Split, Connected]);
        let e = RealTorus::elliptic(Connected);
        let d = kunneth_h_odd(&b, &e, 3, 0).unwrap();
        let s21 = d.summands.iter().find(|s| s.i == 2 && s.j == 1).unwrap();
        assert_eq!(s21.dimension, 0);
        assert_eq!(d.total, d.direct);

        let e3 = RealTorus::from_factors(&[Split; 3]);
        let d = kunneth_h_odd(&e3, &RealTorus::point(), 3, 0).unwrap();
        assert_eq!(d.summands.len(), 1);
        assert_eq!(d.total, d.direct);
    }

    #[test]
    fn cup_product_degree_two() {
        let t = RealTorus::from_factors(&[Split]);
        let r = cohomology_ring(&t);
        let x = vec![BigInt::from(1), BigInt::from(0)];
        let y = vec![BigInt::from(0), BigInt::from(1)];
        assert_eq!(r.cup(1, &x, 1, &y).unwrap(), vec![BigInt::from(1)]);
        assert_eq!(r.cup(1, &y, 1, &x).unwrap(), vec![BigInt::from(-1)]);
    }
}
