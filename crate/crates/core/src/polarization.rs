//! Polarizations as alternating forms on `H₁`, Pfaffians, principalization by
//! iterated isogeny, and the minimal class `θ^{g-1}/(g-1)!`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exterior::Multivector;
use crate::lattice::GLattice;
use crate::matrix::{modp, IntMatrix, RatMatrix};

/// Pfaffian of an alternating matrix, by symplectic Schur-complement elimination.
pub fn pfaffian(form: &IntMatrix) -> Result<BigInt> {
    if !form.is_alternating() {
        return Err(Error::InvalidPolarization("form is not alternating".into()));
    }
    let n = form.rows();
    if n % 2 == 1 {
        return Ok(BigInt::zero());
    }
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| form.row(i).iter().cloned().map(BigRational::from_integer).collect())
        .collect();
    let mut pf = BigRational::one();
    while !a.is_empty() {
        let m = a.len();
        let Some(j) = (1..m).find(|&j| !a[0][j].is_zero()) else {
            return Ok(BigInt::zero());
        };
        if j != 1 {
            a.swap(1, j);
            for row in a.iter_mut() {
                row.swap(1, j);
            }
            pf = -pf;
        }
        let piv = a[0][1].clone();
        pf *= &piv;
        let mut next = vec![vec![BigRational::zero(); m - 2]; m - 2];
        for i in 2..m {
            for k in 2..m {
                let corr = (&a[1][i] * &a[0][k] - &a[0][i] * &a[1][k]) / &piv;
                next[i - 2][k - 2] = &a[i][k] + corr;
            }
        }
        a = next;
    }
    debug_assert!(pf.is_integer());
    Ok(pf.to_integer())
}

/// `[[0, I_g], [-I_g, 0]]`.
pub fn standard_symplectic(g: usize) -> IntMatrix {
    let mut j = IntMatrix::zeros(2 * g, 2 * g);
    for i in 0..g {
        j.set(i, g + i, BigInt::one());
        j.set(g + i, i, -BigInt::one());
    }
    j
}

/// Diagnostic record of each polarization axiom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarizationReport {
    pub square: bool,
    pub even_rank: bool,
    pub twist_zero: bool,
    pub involution: bool,
    pub alternating: bool,
    pub nondegenerate: bool,
    pub anti_equivariant: bool,
    /// Positivity of the hermitian form needs a complex structure and is never checked.
    pub positivity: &'static str,
}

impl PolarizationReport {
    pub fn is_valid(&self) -> bool {
        self.square
            && self.even_rank
            && self.twist_zero
            && self.involution
            && self.alternating
            && self.nondegenerate
            && self.anti_equivariant
    }

    pub fn failures(&self) -> Vec<&'static str> {
        [
            (self.square, "form shape"),
            (self.even_rank, "even rank"),
            (self.twist_zero, "twist zero"),
            (self.involution, "involution"),
            (self.alternating, "alternating"),
            (self.nondegenerate, "nondegenerate"),
            (self.anti_equivariant, "anti-equivariance"),
        ]
        .into_iter()
        .filter(|(ok, _)| !ok)
        .map(|(_, name)| name)
        .collect()
    }
}

pub fn check_polarization(lattice: &GLattice, form: &IntMatrix) -> PolarizationReport {
    let n = lattice.rank();
    let sigma = lattice.sigma();
    let square = form.rows() == n && form.cols() == n;
    let alternating = square && form.is_alternating();
    let nondegenerate = alternating && !pfaffian(form).map(|p| p.is_zero()).unwrap_or(true);
    let anti_equivariant =
        square && &(&sigma.transpose() * form) * sigma == -form;
    PolarizationReport {
        square,
        even_rank: n % 2 == 0,
        twist_zero: lattice.twist() == 0,
        involution: (sigma * sigma).is_identity(),
        alternating,
        nondegenerate,
        anti_equivariant,
        positivity: "not evaluated",
    }
}

/// `H₁` with its real structure and an alternating form `E` with `σᵗEσ = -E`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolarizedLattice {
    lattice: GLattice,
    form: IntMatrix,
}

impl PolarizedLattice {
    pub fn new(lattice: GLattice, form: IntMatrix) -> Result<Self> {
        let report = check_polarization(&lattice, &form);
        if !report.is_valid() {
            return Err(Error::InvalidPolarization(report.failures().join(", ")));
        }
        Ok(Self { lattice, form })
    }

    /// `J_g` with `σ = diag(I_g, -I_g)`.
    pub fn standard(g: usize) -> Self {
        let mut diag = vec![BigInt::one(); g];
        diag.extend(vec![-BigInt::one(); g]);
        Self {
            lattice: GLattice::new(IntMatrix::diagonal(diag), 0).expect("diagonal ±1"),
            form: standard_symplectic(g),
        }
    }

    pub fn lattice(&self) -> &GLattice {
        &self.lattice
    }

    pub fn form(&self) -> &IntMatrix {
        &self.form
    }

    pub fn g(&self) -> usize {
        self.lattice.rank() / 2
    }

    pub fn pfaffian(&self) -> BigInt {
        pfaffian(&self.form).expect("validated at construction")
    }

    pub fn degree(&self) -> BigInt {
        self.pfaffian().abs()
    }

    pub fn is_principal(&self) -> bool {
        self.degree().is_one()
    }
}

/// One quotient by a σ-stable subgroup of order `p` in the polarization kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsogenyStep {
    pub prime: u64,
    /// Generator of the subgroup as a vector in `(1/p)Λ`, in current coordinates.
    pub generator: Vec<BigRational>,
    /// Integer matrix expressing `Λ ⊂ M` in the basis of the enlarged lattice `M`.
    pub new_basis: IntMatrix,
    pub degree_before: BigInt,
    pub degree_after: BigInt,
    /// Whether σ fixes the generator modulo `Λ` (otherwise it negates it).
    pub fixed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Principalization {
    pub result: PolarizedLattice,
    pub steps: Vec<IsogenyStep>,
    /// Product of all `new_basis` matrices: original coordinates → final coordinates.
    pub inclusion: IntMatrix,
}

fn smallest_prime_factor(n: &BigInt) -> u64 {
    let n = n.to_u64().expect("degree fits in u64");
    (2..)
        .take_while(|p| p * p <= n)
        .find(|p| n % p == 0)
        .unwrap_or(n)
}

/// Lexicographically smallest normalized vector of the span: the last row of the RREF.
fn lex_smallest_line(basis: &[Vec<u64>], p: u64) -> Option<Vec<u64>> {
    modp::rref(basis, p).pop()
}

fn sigma_stable_line(pl: &PolarizedLattice, p: u64) -> Option<(Vec<u64>, bool)> {
    let n = pl.lattice.rank();
    let e = pl.form.reduce_mod(p);
    let kernel = modp::kernel(&e, n, p);
    if kernel.is_empty() {
        return None;
    }
    for (sign, fixed) in [(-1i64, true), (1i64, false)] {
        // σ ∓ 1 restricted to the kernel of E.
        let shifted = pl
            .lattice
            .sigma()
            .add_scalar(&BigInt::from(sign))
            .reduce_mod(p);
        let mut rows = e.clone();
        rows.extend(shifted);
        let eigen = modp::kernel(&rows, n, p);
        if let Some(v) = lex_smallest_line(&eigen, p) {
            return Some((v, fixed));
        }
    }
    None
}

fn isogeny_step(pl: &PolarizedLattice) -> Result<(PolarizedLattice, IsogenyStep)> {
    let n = pl.lattice.rank();
    let degree = pl.degree();
    let p = smallest_prime_factor(&degree);
    let (w, fixed) = sigma_stable_line(pl, p).ok_or_else(|| {
        Error::Postcondition(format!("no σ-stable line of order {p} in the polarization kernel"))
    })?;
    let j = w.iter().position(|&x| x != 0).expect("normalized nonzero vector");
    debug_assert_eq!(w[j], 1);

    let pb = BigInt::from(p);
    let generator: Vec<BigRational> = w
        .iter()
        .map(|&x| BigRational::new(BigInt::from(x), pb.clone()))
        .collect();
    // Columns of `basis` are the new basis in old coordinates.
    let mut basis = RatMatrix::identity(n);
    let mut inclusion = IntMatrix::identity(n);
    for (i, g) in generator.iter().enumerate() {
        basis.set(i, j, g.clone());
        if i != j {
            inclusion.set(i, j, -BigInt::from(w[i]));
        }
    }
    inclusion.set(j, j, pb.clone());

    let e = pl.form.to_rational();
    let new_form = (&(&basis.transpose() * &e) * &basis)
        .to_integer()
        .ok_or_else(|| Error::Postcondition("form is not integral on the enlarged lattice".into()))?;
    let new_sigma = (&(&inclusion.to_rational() * &pl.lattice.sigma().to_rational()) * &basis)
        .to_integer()
        .ok_or_else(|| Error::Postcondition("involution does not preserve the enlarged lattice".into()))?;
    let lattice = GLattice::new(new_sigma, 0)?;
    let next = PolarizedLattice::new(lattice, new_form)
        .map_err(|e| Error::Postcondition(format!("intermediate polarization: {e}")))?;
    let degree_after = next.degree();
    if &degree_after * &pb != degree {
        return Err(Error::Postcondition(format!(
            "degree {degree} became {degree_after} under a {p}-step"
        )));
    }
    Ok((
        next,
        IsogenyStep {
            prime: p,
            generator,
            new_basis: inclusion,
            degree_before: degree,
            degree_after,
            fixed,
        },
    ))
}

/// Enlarges `Λ` inside `Λ^∨` one σ-stable order-`p` subgroup at a time until the
/// form is unimodular. Primes are taken in increasing order.
pub fn principalize(pl: &PolarizedLattice) -> Result<Principalization> {
    let n = pl.lattice.rank();
    let mut current = pl.clone();
    let mut steps = Vec::new();
    let mut inclusion = IntMatrix::identity(n);
    while !current.is_principal() {
        let (next, step) = isogeny_step(&current)?;
        inclusion = &step.new_basis * &inclusion;
        steps.push(step);
        current = next;
    }
    let recovered = &(&inclusion.transpose() * current.form()) * &inclusion;
    if &recovered != pl.form() {
        return Err(Error::Postcondition(
            "final form does not restrict to the original form".into(),
        ));
    }
    Ok(Principalization {
        result: current,
        steps,
        inclusion,
    })
}

/// `θ = Σ_{i<j} E_ij e_i ∧ e_j` in `∧²` of the dual basis of `H₁`.
pub fn theta(pl: &PolarizedLattice) -> Multivector {
    let n = pl.lattice.rank();
    let mut th = Multivector::zero(n);
    for i in 0..n {
        for j in i + 1..n {
            let c = pl.form.get(i, j);
            if !c.is_zero() {
                th = th.add(&Multivector::monomial(n, &[i, j], c.clone()));
            }
        }
    }
    th
}

fn factorial(k: usize) -> BigInt {
    (1..=k).map(BigInt::from).product()
}

/// `θ^k / k!`, failing if the division is inexact.
pub fn theta_power(pl: &PolarizedLattice, k: usize) -> Result<Multivector> {
    theta(pl).pow(k).div_exact(&factorial(k))
}

/// `γ_θ = θ^{g-1}/(g-1)!` for a principal polarization.
pub fn minimal_class(pl: &PolarizedLattice) -> Result<Multivector> {
    if !pl.is_principal() {
        return Err(Error::NotPrincipal(pl.degree().to_string()));
    }
    let g = pl.g();
    theta_power(pl, g.saturating_sub(1))
}

/// Action of the involution on `∧H¹`: the dual of σ on generators.
pub fn cohomology_action(pl: &PolarizedLattice) -> IntMatrix {
    pl.lattice.sigma().transpose()
}
