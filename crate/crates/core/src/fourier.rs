//! Cohomological Fourier transform between a torus `A` and its dual `Â`,
//! computed in the exterior algebra of `H¹(A × Â)`.
//!
//! Coordinates: `H¹(A)` has basis `e_0, …, e_{2g-1}` dual to the chosen basis of
//! `H₁(A) = Λ`, and `H¹(Â) = Λ` has basis `f_i` dual to `e_i`. In the product
//! algebra the `e_i` occupy generators `0..2g` and the `f_i` generators `2g..4g`.
//! The default orientation is the one for which `θ^g/g!` of the standard
//! principal polarization integrates to 1. A polarization in another basis may
//! induce the opposite orientation; see [`FourierConvention::for_polarization`].

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exterior::Multivector;
use crate::lattice::subsets;
use crate::matrix::IntMatrix;
use crate::polarization::PolarizedLattice;

/// Sign knobs. `orientation_flip` reverses the orientation of `A` relative to
/// the default one.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FourierConvention {
    pub orientation_flip: bool,
}

impl FourierConvention {
    /// The orientation induced by a polarization: the one in which
    /// `∫ θ^g/g! = |Pf(E)|` is positive.
    pub fn for_polarization(pl: &PolarizedLattice) -> Self {
        let pf = pl.pfaffian() * BigInt::from(orientation_sign(pl.g()));
        Self {
            orientation_flip: pf.is_negative(),
        }
    }
}

/// A class on `A × Â`; `g` is the dimension of `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductClass {
    pub g: usize,
    pub element: Multivector,
}

impl ProductClass {
    /// Twist parity carried by the degree-`2n` part of a Chern character.
    pub fn twist_of_degree(degree: usize) -> u8 {
        ((degree / 2) % 2) as u8
    }
}

fn factorial(k: usize) -> BigInt {
    (1..=k).map(BigInt::from).product()
}

/// `∫ e_0 ∧ … ∧ e_{2g-1}` in the standard orientation.
pub fn orientation_sign(g: usize) -> i64 {
    if (g * (g.saturating_sub(1)) / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `c₁(𝒫) = Σ_i e_i ∧ f_i` on `A × Â`.
pub fn poincare_c1(g: usize) -> ProductClass {
    ProductClass {
        g,
        element: pairing_class(g, 1),
    }
}

fn pairing_class(g: usize, sign: i64) -> Multivector {
    let n = 2 * g;
    let mut c = Multivector::zero(2 * n);
    for i in 0..n {
        c = c.add(&Multivector::monomial(2 * n, &[i, n + i], BigInt::from(sign)));
    }
    c
}

/// `ch = Σ_k c^k / k!`, with every division checked to be exact.
pub fn chern_character(c1: &Multivector) -> Result<Multivector> {
    let top = c1.generators() / 2;
    let mut ch = Multivector::one(c1.generators());
    let mut power = Multivector::one(c1.generators());
    for k in 1..=top {
        power = power.wedge(c1);
        if power.is_zero() {
            break;
        }
        ch = ch.add(&power.div_exact(&factorial(k))?);
    }
    Ok(ch)
}

/// `π₂∗(exp(c) · π₁^* x)` where `c` pairs first-factor with second-factor
/// generators with the given sign.
fn transform(g: usize, x: &Multivector, c1_sign: i64, orientation: i64) -> Result<Multivector> {
    let n = 2 * g;
    if x.generators() != n {
        return Err(Error::Dimension(format!(
            "element on {} generators, expected {n}",
            x.generators()
        )));
    }
    if !x.is_homogeneous() {
        return Err(Error::Inhomogeneous);
    }
    let map: Vec<Option<usize>> = (0..n).map(Some).collect();
    let pulled = x.relabel(2 * n, &map);
    let ch = chern_character(&pairing_class(g, c1_sign))?;
    let product = ch.wedge(&pulled);
    let full: u64 = if n == 0 { 0 } else { (1u64 << n) - 1 };
    let mut out = Multivector::zero(n);
    for (mask, c) in product.terms() {
        if mask & full != full {
            continue;
        }
        // The monomial is already e_0 … e_{2g-1} f_J in sorted order.
        let idx: Vec<usize> = (0..n).filter(|j| mask >> (n + j) & 1 == 1).collect();
        out = out.add(&Multivector::monomial(n, &idx, c * BigInt::from(orientation)));
    }
    Ok(out)
}

/// `F_A : H^i(A) → H^{2g-i}(Â)`.
pub fn fourier(g: usize, x: &Multivector, conv: FourierConvention) -> Result<Multivector> {
    let eps = orientation_sign(g) * if conv.orientation_flip { -1 } else { 1 };
    transform(g, x, 1, eps)
}

/// `F_Â : H^i(Â) → H^{2g-i}(A)`, using the Poincaré bundle pulled back along
/// the swap `Â × A → A × Â`.
pub fn fourier_dual(g: usize, y: &Multivector) -> Result<Multivector> {
    transform(g, y, -1, orientation_sign(g))
}

/// Matrix of `F_A` from the lexicographic basis of `∧^i` to that of `∧^{2g-i}`.
pub fn fourier_matrix(g: usize, i: usize, conv: FourierConvention) -> Result<IntMatrix> {
    let n = 2 * g;
    if i > n {
        return Err(Error::OutOfRange(format!("degree {i} above {n}")));
    }
    let cols: Vec<Vec<BigInt>> = subsets(n, i)
        .iter()
        .map(|s| {
            let x = Multivector::monomial(n, s, BigInt::one());
            fourier(g, &x, conv).map(|y| y.to_vector(n - i))
        })
        .collect::<Result<_>>()?;
    Ok(IntMatrix::from_columns(subsets(n, n - i).len(), &cols))
}

/// `θ̂` on `Â` for a principal polarization: the form `-E⁻¹` on `H₁(Â) = Λ^∨`.
pub fn dual_theta(pl: &PolarizedLattice) -> Result<Multivector> {
    if !pl.is_principal() {
        return Err(Error::NotPrincipal(pl.degree().to_string()));
    }
    let inv = pl
        .form()
        .inverse_unimodular()
        .map_err(|_| Error::NotPrincipal(pl.degree().to_string()))?;
    let e_hat = -&inv;
    let n = e_hat.rows();
    let mut th = Multivector::zero(n);
    for i in 0..n {
        for j in i + 1..n {
            let c = e_hat.get(i, j);
            if !c.is_zero() {
                th = th.add(&Multivector::monomial(n, &[i, j], c.clone()));
            }
        }
    }
    Ok(th)
}

/// Action of the real structure of `Â` on `H¹(Â)`, given the action `s` on `H¹(A)`.
pub fn dual_action(s: &IntMatrix) -> IntMatrix {
    -&s.transpose()
}

/// Poincaré pairing matrix `∫ b_I ∧ b_J` from degree `k` to degree `2g-k`.
pub fn poincare_pairing(g: usize, k: usize) -> IntMatrix {
    let n = 2 * g;
    let lo = subsets(n, k);
    let hi = subsets(n, n - k);
    let eps = BigInt::from(orientation_sign(g));
    let mut q = IntMatrix::zeros(lo.len(), hi.len());
    for (a, s) in lo.iter().enumerate() {
        let x = Multivector::monomial(n, s, BigInt::one());
        for (b, t) in hi.iter().enumerate() {
            if s.iter().any(|i| t.contains(i)) {
                continue;
            }
            let top = x.wedge(&Multivector::monomial(n, t, BigInt::one()));
            let all: Vec<usize> = (0..n).collect();
            q.set(a, b, top.coefficient(&all) * &eps);
        }
    }
    q
}

/// Gysin map `ψ_*` on degree `k` for a map whose pullback on `∧^{2g-k}` has matrix `pull`.
fn gysin(g: usize, k: usize, pull: &IntMatrix, y: &[BigInt]) -> Result<Vec<BigInt>> {
    let q = poincare_pairing(g, k);
    // ∫ ψ_*(y) ∧ z = ∫ y ∧ ψ^* z  ⇒  Qᵗ w = pullᵗ Qᵗ y.
    let rhs = pull.transpose().mul_vec(&q.transpose().mul_vec(y));
    let qt_inv = q.transpose().inverse_unimodular()?;
    Ok(qt_inv.mul_vec(&rhs))
}

/// Checks `F_A ∘ φ^* = φ̂_* ∘ F_B` on `x ∈ H(B)` for an isogeny `φ : A → B`
/// given on `H₁` by `phi`. `s_a`, `s_b` are the involutions on `H¹`.
pub fn fourier_functoriality_check(
    phi: &IntMatrix,
    s_a: &IntMatrix,
    s_b: &IntMatrix,
    x: &Multivector,
) -> Result<bool> {
    let n = phi.rows();
    if !phi.is_square() || n % 2 != 0 || s_a.rows() != n || s_b.rows() != n {
        return Err(Error::IncompatibleIsogeny("shape mismatch".into()));
    }
    if phi.det().is_zero() {
        return Err(Error::IncompatibleIsogeny("map is not injective".into()));
    }
    if &(phi * &s_a.transpose()) != &(&s_b.transpose() * phi) {
        return Err(Error::IncompatibleIsogeny(
            "map does not commute with the involutions".into(),
        ));
    }
    let g = n / 2;
    let conv = FourierConvention::default();
    let pull_a = phi.transpose();
    let lhs = fourier(g, &x.pushforward(&pull_a)?, conv)?;

    let fb = fourier(g, x, conv)?;
    let Some(k) = fb.degree() else {
        return Ok(lhs.is_zero());
    };
    // φ̂^* : H¹(Â) → H¹(B̂) is φ itself on Λ_A → Λ_B.
    let pull = IntMatrix::from_columns(
        subsets(n, n - k).len(),
        &subsets(n, n - k)
            .iter()
            .map(|s| {
                Multivector::monomial(n, s, BigInt::one())
                    .pushforward(phi)
                    .map(|m| m.to_vector(n - k))
            })
            .collect::<Result<Vec<_>>>()?,
    );
    let rhs = gysin(g, k, &pull, &fb.to_vector(k))?;
    let rhs = Multivector::from_vector(n, k, &rhs)?;
    Ok(lhs == rhs)
}

/// Whether `F_A` on degree `i` intertwines `∧S` with `(-1)^{g-i} ∧Ŝ`.
pub fn is_equivariant(g: usize, s: &IntMatrix, i: usize) -> Result<bool> {
    let n = 2 * g;
    let f = fourier_matrix(g, i, FourierConvention::default())?;
    let src = wedge_matrix(s, i)?;
    let dst = wedge_matrix(&dual_action(s), n - i)?;
    let sign = BigInt::from(if (g + i) % 2 == 0 { 1 } else { -1 });
    Ok(&f * &src == (&dst * &f).scale(&sign))
}

/// `∧^q` of a matrix on the lexicographic basis.
pub fn wedge_matrix(m: &IntMatrix, q: usize) -> Result<IntMatrix> {
    let n = m.cols();
    let cols = subsets(n, q)
        .iter()
        .map(|s| {
            Multivector::monomial(n, s, BigInt::one())
                .pushforward(m)
                .map(|v| v.to_vector(q))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IntMatrix::from_columns(subsets(m.rows(), q).len(), &cols))
}

pub fn is_unimodular(m: &IntMatrix) -> bool {
    m.is_square() && m.det().abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polarization::{theta, theta_power};

    fn conv() -> FourierConvention {
        FourierConvention::default()
    }

    #[test]
    fn c1_nilpotent_and_ch_exact() {
        for g in 1..=3 {
            let c = poincare_c1(g).element;
            assert!(c.pow(2 * g + 1).is_zero());
            assert!(!c.pow(2 * g).is_zero());
            assert!(chern_character(&c).is_ok());
        }
    }

    #[test]
    fn c1_restricts_to_pairing_for_elliptic_curves() {
        // Pulling back along A → Â given by the standard form sends f_0 ↦ e'_1 and f_1 ↦ -e'_0.
        let c = poincare_c1(1).element;
        assert_eq!(c.coefficient(&[0, 2]), BigInt::one());
        assert_eq!(c.coefficient(&[1, 3]), BigInt::one());
    }

    #[test]
    fn beauville_theta() {
        for g in 1..=3 {
            let pl = PolarizedLattice::standard(g);
            let th_hat = dual_theta(&pl).unwrap();
            let lhs = fourier(g, &theta(&pl), conv()).unwrap();
            let k = g - 1;
            let rhs = th_hat
                .pow(k)
                .div_exact(&factorial(k))
                .unwrap()
                .scale(&BigInt::from(if k % 2 == 0 { 1 } else { -1 }));
            assert_eq!(lhs, rhs, "g = {g}");
        }
    }

    #[test]
    fn orientation_follows_the_polarization() {
        for g in 1..=3 {
            let std = PolarizedLattice::standard(g);
            assert_eq!(FourierConvention::for_polarization(&std), conv());
            // Negating one basis vector reverses the orientation.
            let mut d = IntMatrix::identity(2 * g);
            d.set(0, 0, -BigInt::one());
            let sigma = &(&d * std.lattice().sigma()) * &d;
            let form = &(&d * std.form()) * &d;
            let pl = PolarizedLattice::new(crate::GLattice::new(sigma, 0).unwrap(), form).unwrap();
            let c = FourierConvention::for_polarization(&pl);
            assert!(c.orientation_flip);
            let k = g - 1;
            let rhs = dual_theta(&pl)
                .unwrap()
                .pow(k)
                .div_exact(&factorial(k))
                .unwrap()
                .scale(&BigInt::from(if k % 2 == 0 { 1 } else { -1 }));
            assert_eq!(fourier(g, &theta(&pl), c).unwrap(), rhs);
            assert_ne!(fourier(g, &theta(&pl), conv()).unwrap(), rhs);
        }
    }

    #[test]
    fn theta_power_family() {
        for g in 1..=3 {
            let pl = PolarizedLattice::standard(g);
            let th_hat = dual_theta(&pl).unwrap();
            for k in 0..=g {
                let lhs = fourier(g, &theta_power(&pl, k).unwrap(), conv()).unwrap();
                let rhs = th_hat.neg().pow(g - k).div_exact(&factorial(g - k)).unwrap();
                assert_eq!(lhs, rhs, "g = {g}, k = {k}");
            }
        }
    }

    #[test]
    fn top_class_goes_to_unit() {
        for g in 1..=2 {
            let n = 2 * g;
            let all: Vec<usize> = (0..n).collect();
            let top = Multivector::monomial(n, &all, BigInt::one());
            let f = fourier(g, &top, conv()).unwrap();
            assert_eq!(f.degree(), Some(0));
            assert!(f.coefficient(&[]).abs().is_one());
        }
    }

    #[test]
    fn rejects_inhomogeneous() {
        let x = Multivector::one(2).add(&Multivector::generator(2, 0));
        assert_eq!(fourier(1, &x, conv()), Err(Error::Inhomogeneous));
    }

    #[test]
    fn double_transform_on_degree_one() {
        for g in 1..=3 {
            let n = 2 * g;
            let sign = if (1 + g) % 2 == 0 { 1 } else { -1 };
            for i in 0..n {
                let x = Multivector::generator(n, i);
                let back = fourier_dual(g, &fourier(g, &x, conv()).unwrap()).unwrap();
                assert_eq!(back, x.scale(&BigInt::from(sign)), "g = {g}");
            }
        }
    }

    #[test]
    fn functoriality_identity_and_scaling() {
        let s = IntMatrix::from_i64(&[[1, 0], [0, -1]]);
        let x = Multivector::generator(2, 1);
        assert!(fourier_functoriality_check(&IntMatrix::identity(2), &s, &s, &x).unwrap());
        let d3 = IntMatrix::identity(2).scale(&BigInt::from(3));
        assert!(fourier_functoriality_check(&d3, &s, &s, &x).unwrap());
        assert!(fourier_functoriality_check(&d3, &s, &s, &Multivector::one(2)).unwrap());
    }
}
