mod common;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use realhodge::cohomology::{cohomology_ring, hs_profile, pi0_real_locus, EllipticType, RealTorus};
use realhodge::moduli::{classify_type, enumerate_types, normal_form_matrix, type_from_involution};
use realhodge::polarization::{check_polarization, pfaffian, principalize};
use realhodge::{tate_cohomology, GLattice, IntMatrix, TateRanks};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn random_alternating(r: &mut ChaCha8Rng, n: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let c = BigInt::from(r.gen_range(-3..=3i64));
            m.set(i, j, c.clone());
            m.set(j, i, -c);
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tate_is_additive(a in any::<u64>(), b in any::<u64>()) {
        let x = common::random_lattice(&mut rng(a), 3).lattice;
        let y = common::random_lattice(&mut rng(b), 3).lattice;
        let y = GLattice::new(y.sigma().clone(), x.twist()).unwrap();
        let sum = x.direct_sum(&y).unwrap();
        prop_assert_eq!(tate_cohomology(&sum), tate_cohomology(&x) + tate_cohomology(&y));
    }

    #[test]
    fn retwist_swaps_degrees(seed in any::<u64>()) {
        let l = common::random_lattice(&mut rng(seed), 6).lattice;
        let r = tate_cohomology(&l);
        let t = tate_cohomology(&l.retwist(1));
        prop_assert_eq!(t, TateRanks { h_odd: r.h_even, h_even: r.h_odd });
        prop_assert_eq!(tate_cohomology(&l.retwist(2)), r);
    }

    #[test]
    fn dual_preserves_tate(seed in any::<u64>()) {
        let l = common::random_lattice(&mut rng(seed), 6).lattice;
        prop_assert_eq!(tate_cohomology(&l.dual()), tate_cohomology(&l));
    }

    #[test]
    fn exterior_ranks_are_binomial(seed in any::<u64>()) {
        let l = common::random_lattice(&mut rng(seed), 5).lattice;
        for q in 0..=l.rank() {
            let w = l.exterior_power(q).unwrap();
            prop_assert_eq!(w.rank(), binomial(l.rank(), q));
            prop_assert!((&w.sigma().clone() * w.sigma()).is_identity());
        }
    }

    #[test]
    fn pfaffian_squares_to_determinant(seed in any::<u64>(), half in 1usize..4) {
        let m = random_alternating(&mut rng(seed), 2 * half);
        let pf = pfaffian(&m).unwrap();
        prop_assert_eq!(&pf * &pf, m.det());
    }

    #[test]
    fn pfaffian_transforms_by_determinant(seed in any::<u64>(), half in 1usize..4) {
        let mut r = rng(seed);
        let n = 2 * half;
        let m = random_alternating(&mut r, n);
        let u = common::random_unimodular(&mut r, n, 6, 3);
        let moved = &(&u.transpose() * &m) * &u;
        prop_assert_eq!(pfaffian(&moved).unwrap(), pfaffian(&m).unwrap() * u.det());
    }

    #[test]
    fn principalization_postconditions(seed in any::<u64>(), g in 1usize..4) {
        let pl = common::random_polarized(&mut rng(seed), g, 2000);
        let out = principalize(&pl).unwrap();
        prop_assert!(out.result.pfaffian().abs().is_one());
        let c = &out.inclusion;
        prop_assert_eq!(&(&c.transpose() * out.result.form()) * c, pl.form().clone());
        prop_assert_eq!(&out.result.lattice().sigma().clone() * c, c * pl.lattice().sigma());
        let primes: Vec<u64> = out.steps.iter().map(|s| s.prime).collect();
        let mut sorted = primes.clone();
        sorted.sort();
        prop_assert_eq!(primes, sorted);
    }

    #[test]
    fn classifier_is_congruence_invariant(seed in any::<u64>(), g in 1usize..5) {
        let mut r = rng(seed);
        let types = enumerate_types(g);
        let ty = types[r.gen_range(0..types.len())];
        let m = normal_form_matrix(&ty).unwrap();
        let u = common::random_unimodular(&mut r, g, 8, 3);
        let moved = &(&u.transpose() * &m) * &u;
        prop_assert_eq!(classify_type(&moved).unwrap(), ty);
    }

    #[test]
    fn type_survives_symplectic_base_change(seed in any::<u64>(), g in 1usize..4) {
        let mut r = rng(seed);
        let types = enumerate_types(g);
        let ty = types[r.gen_range(0..types.len())];
        let m = normal_form_matrix(&ty).unwrap();
        let n = 2 * g;
        let mut f = IntMatrix::zeros(n, n);
        for i in 0..g {
            f.set(i, i, BigInt::one());
            f.set(g + i, g + i, -BigInt::one());
            for j in 0..g {
                f.set(i, g + j, m.get(i, j).clone());
            }
        }
        let j = realhodge::polarization::standard_symplectic(g);
        // Conjugate by a symplectic matrix [[A, 0], [0, A^{-t}]].
        let a = common::random_unimodular(&mut r, g, 6, 3);
        let ait = a.inverse_unimodular().unwrap().transpose();
        let s = a.block_diag(&ait);
        let sinv = s.inverse_unimodular().unwrap();
        prop_assert_eq!(&(&s.transpose() * &j) * &s, j.clone());
        let f2 = &(&sinv * &f) * &s;
        prop_assert_eq!(type_from_involution(&f2, &j).unwrap(), ty);
    }
}

#[test]
fn pi0_is_multiplicative() {
    use EllipticType::{Connected, Split};
    let kinds = [Connected, Split];
    for a in kinds {
        for b in kinds {
            for c in kinds {
                let ta = RealTorus::from_factors(&[a]);
                let tb = RealTorus::from_factors(&[b, c]);
                assert_eq!(pi0_real_locus(&ta.product(&tb)), pi0_real_locus(&ta) * pi0_real_locus(&tb));
            }
        }
    }
}

#[test]
fn profile_free_rank_is_invariants() {
    use EllipticType::{Connected, Split};
    let t = RealTorus::from_factors(&[Connected, Split, Split]);
    let ring = cohomology_ring(&t);
    let p = hs_profile(&ring, 2).unwrap();
    let h4 = ring.degree(4).unwrap().retwist(2);
    assert_eq!(p.free_rank, h4.free_rank());
}

#[test]
fn generated_polarizations_are_valid() {
    let mut r = rng(5);
    for g in 1..=3 {
        for _ in 0..20 {
            let pl = common::random_polarized(&mut r, g, 10_000);
            assert!(check_polarization(pl.lattice(), pl.form()).is_valid());
            assert!(!pl.degree().is_zero());
        }
    }
}
