//! Registered finite facts, recomputed in parallel.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::{json, Value};

use realhodge::cohomology::{
    antipodal_torus_h1, hdg0_torsion_budget, hs_torsion_dimension, kunneth_h_odd, pi0_real_locus, EllipticType,
    RealTorus,
};
use realhodge::exterior::Multivector;
use realhodge::fourier::{dual_theta, fourier, fourier_dual, fourier_matrix, is_unimodular, FourierConvention};
use realhodge::hecke::{sunit_gap, SUnitConfig};
use realhodge::json::count;
use realhodge::matrix::modp;
use realhodge::moduli::{enumerate_types, pi0_by_type};
use realhodge::polarization::{minimal_class, principalize, theta, theta_power, PolarizedLattice};
use realhodge::{tate_cohomology, GLattice, IntMatrix, TateGroup};

use crate::Report;

pub const SCHEMA: &str = include_str!("../schema/paper-check.schema.json");

#[derive(Clone, Copy)]
enum Provenance {
    Published,
    Trivial,
    Derived,
}

impl Provenance {
    fn name(self) -> &'static str {
        match self {
            Provenance::Published => "published",
            Provenance::Trivial => "trivial",
            Provenance::Derived => "derived",
        }
    }
}

struct Claim {
    id: String,
    statement: &'static str,
    computed: String,
    expected: String,
    provenance: Provenance,
}

impl Claim {
    fn new(
        id: impl Into<String>,
        statement: &'static str,
        provenance: Provenance,
        computed: impl ToString,
        expected: impl ToString,
    ) -> Self {
        Self {
            id: id.into(),
            statement,
            computed: computed.to_string(),
            expected: expected.to_string(),
            provenance,
        }
    }

    fn pass(&self) -> bool {
        self.computed == self.expected
    }

    fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "statement": self.statement,
            "computed": self.computed,
            "expected": self.expected,
            "provenance": self.provenance.name(),
            "pass": self.pass(),
        })
    }
}

#[derive(Clone, Copy)]
struct Settings {
    corrupt_sign: bool,
}

use EllipticType::{Connected, Split};
use Provenance::{Derived, Published, Trivial};

fn products(g: usize) -> impl Iterator<Item = Vec<EllipticType>> {
    std::iter::repeat([Connected, Split]).take(g).multi_cartesian_product()
}

fn connected_cube() -> GLattice {
    RealTorus::from_factors(&[Connected; 3]).h1().clone()
}

fn antipodal_torus(_: Settings) -> Vec<Claim> {
    let dim = hs_torsion_dimension(&antipodal_torus_h1(3), 4, 0).expect("degree in range");
    vec![Claim::new(
        "antipodal-three-torus-h4-torsion",
        "equivariant H^4 of the product of three circles with complex conjugation has Z/2-dimension 8",
        Published,
        dim,
        8,
    )]
}

fn triple_tensor_basis(_: Settings) -> Vec<Claim> {
    let e = GLattice::split_elliptic();
    let group = TateGroup::new(&e.tensor(&e).tensor(&e), true);
    let rows: Vec<Vec<u64>> = ["xxy", "xyx", "yxx", "yyy"]
        .iter()
        .map(|label| {
            let idx = label.chars().fold(0, |acc, c| 2 * acc + usize::from(c == 'y'));
            let mut v = vec![BigInt::from(0); 8];
            v[idx] = BigInt::from(1);
            group
                .class_of(&v)
                .expect("pure tensors with an odd number of y are cocycles")
                .into_iter()
                .map(u64::from)
                .collect()
        })
        .collect();
    vec![
        Claim::new(
            "triple-tensor-h1-dimension",
            "H^1 of the triple tensor power of a split elliptic lattice has dimension 4",
            Published,
            group.dimension(),
            4,
        ),
        Claim::new(
            "triple-tensor-h1-basis",
            "the classes of xxy, xyx, yxx and yyy are linearly independent",
            Published,
            modp::rank(&rows, 2),
            4,
        ),
    ]
}

fn connected_threefold(_: Settings) -> Vec<Claim> {
    let lambda = connected_cube();
    let cell = |q: usize| {
        tate_cohomology(&lambda.exterior_power(q).expect("q <= 6").retwist(2)).degree(4 - q)
    };
    let higher: Vec<String> = (1..4).map(|q| format!("({},{q})={}", 4 - q, cell(q))).collect();
    let budget = hdg0_torsion_budget(&RealTorus::from_factors(&[Connected; 3])).expect("threefold");
    vec![
        Claim::new(
            "connected-threefold-higher-terms-vanish",
            "for three connected elliptic factors, H^p(G, wedge^q) vanishes when p + q = 4, p > 0, q >= 1",
            Published,
            higher.join(" "),
            "(3,1)=0 (2,2)=0 (1,3)=0",
        ),
        Claim::new(
            "connected-threefold-constant-term",
            "the (4,0) term is H^4(G, Z) = Z/2",
            Derived,
            cell(0),
            1,
        ),
        Claim::new(
            "connected-threefold-budget",
            "degree-four torsion beyond the real-locus contribution vanishes for three connected factors",
            Derived,
            budget,
            0,
        ),
    ]
}

fn pi0_laws(_: Settings) -> Vec<Claim> {
    let mut bound_ok = true;
    let mut law_ok = true;
    for g in 0..=4 {
        for kinds in products(g) {
            let n = pi0_real_locus(&RealTorus::from_factors(&kinds));
            bound_ok &= n <= 1 << g;
            law_ok &= n == 1 << kinds.iter().filter(|k| **k == Split).count();
        }
    }
    let values: BTreeSet<u64> = products(3)
        .map(|k| pi0_real_locus(&RealTorus::from_factors(&k)))
        .collect();
    vec![
        Claim::new(
            "pi0-bound",
            "the real locus of a g-dimensional product has at most 2^g components, g <= 4",
            Published,
            bound_ok,
            true,
        ),
        Claim::new(
            "pi0-split-factors",
            "the component count is 2 to the number of split factors",
            Derived,
            law_ok,
            true,
        ),
        Claim::new(
            "pi0-threefold-values",
            "threefold component counts are exactly 1, 2, 4 and 8",
            Published,
            format!("{values:?}"),
            "{1, 2, 4, 8}",
        ),
    ]
}

fn beauville(s: Settings) -> Vec<Claim> {
    (1..=3)
        .map(|g| {
            let pl = PolarizedLattice::standard(g);
            let mut conv = FourierConvention::for_polarization(&pl);
            conv.orientation_flip ^= s.corrupt_sign;
            let image = fourier(g, &theta(&pl), conv).expect("homogeneous");
            let sign = BigInt::from(if g % 2 == 1 { 1 } else { -1 });
            let expected = theta_power_of(&dual_theta(&pl).expect("principal"), g - 1).scale(&sign);
            Claim::new(
                format!("beauville-theta-g{g}"),
                "the Fourier transform of theta is (-1)^(g-1) times the divided (g-1)-st power of the dual theta",
                Published,
                image == expected,
                true,
            )
        })
        .collect()
}

fn theta_power_of(x: &Multivector, k: usize) -> Multivector {
    let fact: BigInt = (1..=k).map(BigInt::from).product();
    x.pow(k).div_exact(&fact).expect("divided powers of a symplectic form are integral")
}

fn fourier_facts(_: Settings) -> Vec<Claim> {
    let conv = FourierConvention::default();
    let mut inversion = true;
    let mut unimodular = true;
    for g in 1..=3 {
        let n = 2 * g;
        let sign = BigInt::from(if g % 2 == 1 { 1 } else { -1 });
        for i in 0..n {
            let x = Multivector::generator(n, i);
            let back = fourier_dual(g, &fourier(g, &x, conv).expect("degree one")).expect("degree 2g-1");
            inversion &= back == x.scale(&sign);
        }
        unimodular &= (0..=n).all(|i| is_unimodular(&fourier_matrix(g, i, conv).expect("degree in range")));
    }
    vec![
        Claim::new(
            "fourier-inversion-degree-one",
            "transforming twice acts on H^1 by (-1)^(1+g), g <= 3",
            Published,
            inversion,
            true,
        ),
        Claim::new(
            "fourier-unimodular",
            "the transform is an integral isomorphism in every degree, g <= 3",
            Published,
            unimodular,
            true,
        ),
    ]
}

fn minimal_class_relation(_: Settings) -> Vec<Claim> {
    let ok = (1..=3).all(|g| {
        let pl = PolarizedLattice::standard(g);
        let gamma = minimal_class(&pl).expect("principal");
        let top = theta_power(&pl, g).expect("integral");
        gamma.wedge(&theta(&pl)) == top.scale(&BigInt::from(g))
    });
    vec![Claim::new(
        "minimal-class-times-theta",
        "the minimal class wedged with theta is g times the top divided power, g <= 3",
        Derived,
        ok,
        true,
    )]
}

fn polarized(sigma: &[&[i64]], form: &[&[i64]]) -> PolarizedLattice {
    let lattice = GLattice::new(IntMatrix::from_i64(sigma), 0).expect("involution");
    PolarizedLattice::new(lattice, IntMatrix::from_i64(form)).expect("polarization")
}

fn principalization(_: Settings) -> Vec<Claim> {
    let degree_nine = polarized(&[&[1, 0], &[0, -1]], &[&[0, 9], &[-9, 0]]);
    let mixed = polarized(
        &[&[1, 0, 0, 0], &[0, -1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, -1]],
        &[&[0, 1, 0, 0], &[-1, 0, 0, 0], &[0, 0, 0, 4], &[0, 0, -4, 0]],
    );
    let connected = polarized(&[&[1, 1], &[0, -1]], &[&[0, 30], &[-30, 0]]);
    let mut law = true;
    let mut primes = Vec::new();
    for (k, pl) in [&degree_nine, &mixed, &connected].into_iter().enumerate() {
        let out = principalize(pl).expect("principalizable");
        law &= out.result.is_principal();
        for s in &out.steps {
            law &= &s.degree_after * BigInt::from(s.prime) == s.degree_before;
        }
        if k == 0 {
            primes = out.steps.iter().map(|s| s.prime).collect();
        }
    }
    vec![
        Claim::new(
            "principalization-degree-law",
            "each order-p step divides the degree by p and the process ends principal",
            Published,
            law,
            true,
        ),
        Claim::new(
            "principalization-degree-nine",
            "a degree-9 elliptic polarization principalizes through two steps of order 3",
            Derived,
            format!("{primes:?}"),
            "[3, 3]",
        ),
    ]
}

fn kunneth(_: Settings) -> Vec<Claim> {
    let e = RealTorus::from_factors(&[Connected]);
    let mut vanish = true;
    let mut agree = true;
    for kinds in products(2) {
        let d = kunneth_h_odd(&RealTorus::from_factors(&kinds), &e, 3, 2).expect("degree in range");
        vanish &= d.summands.iter().all(|s| !(s.i == 2 && s.j == 1) || s.dimension == 0);
        agree &= d.total == d.direct;
    }
    vec![
        Claim::new(
            "kunneth-surface-times-connected",
            "for a surface times a connected elliptic curve the H^2 x H^1 Galois summand vanishes",
            Published,
            vanish,
            true,
        ),
        Claim::new(
            "kunneth-total",
            "the Kunneth summands add up to the direct computation",
            Derived,
            agree,
            true,
        ),
    ]
}

fn sunit(_: Settings) -> Vec<Claim> {
    let cfg = SUnitConfig::new(3, 5, 30).expect("distinct odd primes");
    let two = BigRational::from_integer(BigInt::from(2));
    let tol = BigRational::new(BigInt::from(1), BigInt::from(100));
    let gap = sunit_gap(&cfg, &two, &tol).expect("positive target");
    vec![Claim::new(
        "sunit-gap-three-five",
        "the closest 3^n 5^m to 2 with |n|, |m| <= 30 lies within 1/100",
        Derived,
        format!("({}, {}) {}", gap.n, gap.m, gap.within_tolerance),
        "(27, -18) true",
    )]
}

fn basic_modules(_: Settings) -> Vec<Claim> {
    let r = tate_cohomology(&GLattice::trivial(0));
    vec![Claim::new(
        "trivial-module-cohomology",
        "Z with trivial action has H^odd = 0 and H^even = Z/2",
        Trivial,
        format!("{} {}", r.h_odd, r.h_even),
        "0 1",
    )]
}

fn reports() -> Value {
    let table: Vec<Value> = pi0_by_type(3)
        .into_iter()
        .map(|(t, n)| json!({ "type": t.label(), "pi0": count(n) }))
        .collect();
    json!({
        "threefold-type-count": count(enumerate_types(3).len()),
        "threefold-pi0-by-type": table,
        "threefold-pi0-values": ["1", "2", "4", "8"],
    })
}

pub fn run(corrupt_sign: bool) -> Report {
    let settings = Settings { corrupt_sign };
    let groups: [fn(Settings) -> Vec<Claim>; 11] = [
        antipodal_torus,
        triple_tensor_basis,
        connected_threefold,
        pi0_laws,
        beauville,
        fourier_facts,
        minimal_class_relation,
        principalization,
        kunneth,
        sunit,
        basic_modules,
    ];
    let claims: Vec<Claim> = groups.par_iter().flat_map(|f| f(settings)).collect();
    let ids: BTreeSet<&str> = claims.iter().map(|c| c.id.as_str()).collect();
    assert_eq!(ids.len(), claims.len(), "claim ids must be unique");
    let failed: Vec<&str> = claims.iter().filter(|c| !c.pass()).map(|c| c.id.as_str()).collect();
    let summary = if failed.is_empty() {
        format!("{} claims passed", claims.len())
    } else {
        format!("{} of {} claims failed: {}", failed.len(), claims.len(), failed.join(", "))
    };
    Report {
        json: json!({
            "claims": claims.iter().map(Claim::to_json).collect::<Vec<_>>(),
            "reports": reports(),
            "summary": {
                "total": count(claims.len()),
                "passed": count(claims.len() - failed.len()),
                "failed": count(failed.len()),
            },
        }),
        summary,
        ok: failed.is_empty(),
    }
}
