//! Silhol types `(r, α)` of principally polarized real abelian varieties,
//! their normal forms, and the involution attached to a period matrix.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::cohomology::{pi0_real_locus, RealTorus};
use crate::error::{Error, Result};
use crate::lattice::GLattice;
use crate::matrix::{modp, IntMatrix, RatMatrix};
use crate::polarization::standard_symplectic;

/// `(r, α)`; `r = 0` carries `alpha = 0` and prints as `(0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RealType {
    pub g: usize,
    pub r: usize,
    pub alpha: u8,
}

impl RealType {
    pub fn new(g: usize, r: usize, alpha: u8) -> Result<Self> {
        let ok = match (r, alpha) {
            (0, 0) => true,
            (0, _) => false,
            (r, 1) => r <= g,
            (r, 2) => r <= g && r % 2 == 0,
            _ => false,
        };
        if !ok || g == 0 {
            return Err(Error::InvalidType(format!("(r, alpha) = ({r}, {alpha}) at g = {g}")));
        }
        Ok(Self { g, r, alpha })
    }

    pub fn label(&self) -> String {
        self.to_string()
    }

    /// Parses `(0)`, `(r,α)`, or a bare `r` when `r` is 0 or odd.
    pub fn parse(g: usize, s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = body.split(',').map(str::trim).collect();
        let num = |x: &str| -> Result<usize> {
            x.parse()
                .map_err(|_| Error::Parse(format!("bad type component {x:?}")))
        };
        match parts.as_slice() {
            [r] => {
                let r = num(r)?;
                Self::new(g, r, if r == 0 { 0 } else { 1 })
            }
            [r, a] => Self::new(g, num(r)?, num(a)? as u8),
            _ => Err(Error::Parse(format!("bad type {s:?}"))),
        }
    }
}

impl fmt::Display for RealType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.r == 0 {
            write!(f, "(0)")
        } else {
            write!(f, "({},{})", self.r, self.alpha)
        }
    }
}

pub fn enumerate_types(g: usize) -> Vec<RealType> {
    let mut out = vec![RealType { g, r: 0, alpha: 0 }];
    for r in 1..=g {
        out.push(RealType { g, r, alpha: 1 });
        if r % 2 == 0 {
            out.push(RealType { g, r, alpha: 2 });
        }
    }
    out
}

/// `M(τ)`: `I_r ⊕ 0` for `α = 1`, the antidiagonal `r × r` block for `α = 2`.
pub fn normal_form_matrix(t: &RealType) -> Result<IntMatrix> {
    let t = RealType::new(t.g, t.r, t.alpha)?;
    let mut m = IntMatrix::zeros(t.g, t.g);
    for i in 0..t.r {
        match t.alpha {
            1 => m.set(i, i, BigInt::one()),
            _ => m.set(i, t.r - 1 - i, BigInt::one()),
        }
    }
    Ok(m)
}

/// Type of a symmetric matrix from its reduction mod 2.
pub fn classify_type(m: &IntMatrix) -> Result<RealType> {
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let g = m.rows();
    let reduced = m.reduce_mod(2);
    let r = modp::rank(&reduced, 2);
    let even_diagonal = (0..g).all(|i| reduced[i][i] == 0);
    let alpha = match r {
        0 => 0,
        r if r % 2 == 0 && even_diagonal => 2,
        _ => 1,
    };
    RealType::new(g.max(1), r, alpha)
}

/// Integer part `M` and imaginary part `N` of a normalized period matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodData {
    g: usize,
    m: IntMatrix,
    n: RatMatrix,
}

impl PeriodData {
    pub fn new(m: IntMatrix, n: RatMatrix) -> Result<Self> {
        let g = m.rows();
        if !m.is_symmetric() {
            return Err(Error::InvalidPeriod("M is not symmetric".into()));
        }
        if n.rows() != g || n.cols() != g {
            return Err(Error::InvalidPeriod(format!("N is {}x{}, expected {g}x{g}", n.rows(), n.cols())));
        }
        if !n.is_positive_definite() {
            return Err(Error::InvalidPeriod("N is not symmetric positive definite".into()));
        }
        Ok(Self { g, m, n })
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn m(&self) -> &IntMatrix {
        &self.m
    }

    pub fn n(&self) -> &RatMatrix {
        &self.n
    }

    /// Entries of `½M + iN` as (real, imaginary) pairs.
    pub fn siegel_point(&self) -> Vec<Vec<(BigRational, BigRational)>> {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        (0..self.g)
            .map(|i| {
                (0..self.g)
                    .map(|j| {
                        (
                            BigRational::from_integer(self.m.get(i, j).clone()) * &half,
                            self.n.get(i, j).clone(),
                        )
                    })
                    .collect()
            })
            .collect()
    }
}

/// Type read off an involution `F` and alternating form `E` on `H₁`: the
/// mod-2 symmetric matrix `(F - 1)ᵗE`, classified up to congruence.
pub fn type_from_involution(f: &IntMatrix, e: &IntMatrix) -> Result<RealType> {
    let n = f.rows();
    if n % 2 != 0 || e.rows() != n {
        return Err(Error::Dimension(format!("involution of rank {n}")));
    }
    let q = &(&f.add_scalar(&-BigInt::one())).transpose() * e;
    let reduced = q.reduce_mod(2);
    let sym = IntMatrix::from_rows(
        reduced
            .iter()
            .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
            .collect(),
    )?;
    if !sym.is_symmetric() {
        return Err(Error::Postcondition("(F - 1)^t E is not symmetric mod 2".into()));
    }
    let t = classify_type(&sym)?;
    RealType::new(n / 2, t.r, t.alpha)
}

/// `F = [[I, M], [0, -I]]` on `H₁` in the period basis.
pub fn involution_from_period(pd: &PeriodData) -> Result<GLattice> {
    let g = pd.g;
    let mut f = IntMatrix::zeros(2 * g, 2 * g);
    for i in 0..g {
        f.set(i, i, BigInt::one());
        f.set(g + i, g + i, -BigInt::one());
        for j in 0..g {
            f.set(i, g + j, pd.m.get(i, j).clone());
        }
    }
    if !(&f * &f).is_identity() {
        return Err(Error::Postcondition("F^2 != I".into()));
    }
    let j = standard_symplectic(g);
    if &(&f.transpose() * &j) * &f != -&j {
        return Err(Error::Postcondition("F^t J F != -J".into()));
    }
    let expected = classify_type(&pd.m)?;
    let recovered = type_from_involution(&f, &j)?;
    if recovered != RealType::new(g, expected.r, expected.alpha)? {
        return Err(Error::Postcondition(format!(
            "involution has type {recovered}, period matrix has type {expected}"
        )));
    }
    GLattice::new(f, 0)
}

/// `H¹` of the torus attached to `(M, N)`.
pub fn torus_from_period(pd: &PeriodData) -> Result<RealTorus> {
    RealTorus::new(involution_from_period(pd)?.dual())
}

/// `TᵗM(τ)T ≡ M(τ) mod 2`.
pub fn gl_tau_member(t: &IntMatrix, ty: &RealType) -> Result<bool> {
    if !t.is_square() || t.rows() != ty.g {
        return Err(Error::Dimension(format!(
            "{}x{} matrix for g = {}",
            t.rows(),
            t.cols(),
            ty.g
        )));
    }
    if t.det().abs() != BigInt::one() {
        return Err(Error::NotUnimodular);
    }
    let m = normal_form_matrix(ty)?;
    Ok(congruent_mod_2(&(&(&t.transpose() * &m) * t), &m))
}

pub fn congruent_mod_2(a: &IntMatrix, b: &IntMatrix) -> bool {
    a.entries()
        .iter()
        .zip(b.entries())
        .all(|(x, y)| (x - y).is_even())
}

/// `|π₀(A(ℝ))|` for the normal form of every type, in enumeration order.
pub fn pi0_by_type(g: usize) -> Vec<(RealType, u64)> {
    enumerate_types(g)
        .into_iter()
        .map(|t| {
            let m = normal_form_matrix(&t).expect("enumerated types are valid");
            let pd = PeriodData::new(m, RatMatrix::identity(g)).expect("identity is positive");
            let torus = torus_from_period(&pd).expect("normal forms synthesize");
            (t, pi0_real_locus(&torus))
        })
        .collect()
}
