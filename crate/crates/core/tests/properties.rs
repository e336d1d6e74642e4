mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spherical_designs::compose::polygon;
use spherical_designs::design::DesignMatrix;
use spherical_designs::format::{parse, render, Format};
use spherical_designs::harmonic::{moment_check, phi_basis, verify_design};
use spherical_designs::planner::{build, classify, dgs_bound, Status};
use spherical_designs::sidon::{is_sidon, max_sidon_search, SearchBudget};

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn random_unit_columns(rng: &mut ChaCha8Rng, d: usize, n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| {
            let v: Vec<f64> = (0..=d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-3);
            v.iter().map(|x| x / norm).collect()
        })
        .collect()
}

fn subset_strategy() -> impl Strategy<Value = (u64, Vec<u64>, u32)> {
    (2u64..80, 1u32..=3).prop_flat_map(|(n, t)| {
        (
            Just(n),
            proptest::collection::btree_set(1..n, 0..6),
            Just(t),
        )
            .prop_map(|(n, s, t)| (n, s.into_iter().collect(), t))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn is_sidon_matches_naive_check((n, xs, t) in subset_strategy()) {
        prop_assert_eq!(is_sidon(&xs, n, t).unwrap().holds(), common::naive_sidon(&xs, n, t));
    }

    #[test]
    fn sidon_subsets_stay_sidon((n, xs, t) in subset_strategy(), mask in any::<u8>()) {
        prop_assume!(is_sidon(&xs, n, t).unwrap().holds());
        let sub: Vec<u64> = xs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x).collect();
        prop_assert!(is_sidon(&sub, n, t).unwrap().holds());
    }

    #[test]
    fn dilation_by_units_preserves_sidon((n, xs, t) in subset_strategy(), u in 1u64..200) {
        prop_assume!(n > 2 && gcd(u % n, n) == 1 && u % n != 0);
        prop_assume!(is_sidon(&xs, n, t).unwrap().holds());
        let mut ys: Vec<u64> = xs.iter().map(|x| x * u % n).collect();
        ys.sort_unstable();
        prop_assert!(is_sidon(&ys, n, t).unwrap().holds());
    }

    #[test]
    fn violations_come_with_vanishing_witness((n, xs, t) in subset_strategy()) {
        if let Some(w) = is_sidon(&xs, n, t).unwrap().witness() {
            prop_assert_eq!(w.value().rem_euclid(i128::from(n)), 0);
        }
    }

    #[test]
    fn verifier_agrees_with_moments(seed in any::<u64>(), d in 1usize..6, n in 1usize..20, t in 1u32..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = DesignMatrix::from_columns(&random_unit_columns(&mut rng, d, n), t).unwrap();
        let tol = 1e-8;
        prop_assert_eq!(verify_design(&u, t, tol).unwrap().passed, moment_check(&u, t, tol).unwrap().passed);
    }

    #[test]
    fn moment_residuals_are_invariant_under_signed_permutations(seed in any::<u64>(), d in 1usize..6, t in 1u32..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = DesignMatrix::from_columns(&random_unit_columns(&mut rng, d, 7), t).unwrap();
        let mut perm: Vec<usize> = (0..=d).collect();
        for i in (1..perm.len()).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let signs: Vec<f64> = (0..=d).map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 }).collect();
        let v = u.signed_permutation(&perm, &signs).unwrap();
        let sorted = |m: &DesignMatrix| {
            let mut r = moment_check(m, t, 1e-8).unwrap().residuals;
            r.sort_by(f64::total_cmp);
            r
        };
        prop_assert_eq!(sorted(&u), sorted(&v));
    }

    #[test]
    fn text_and_json_round_trip(seed in any::<u64>(), d in 1usize..8, n in 1usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = DesignMatrix::from_columns(&random_unit_columns(&mut rng, d, n), 2)
            .unwrap()
            .with_provenance("random");
        prop_assert_eq!(&parse(&render(&u, Format::Text)).unwrap(), &u);
        prop_assert_eq!(&parse(&render(&u, Format::Json)).unwrap(), &u);
    }

    #[test]
    fn classification_matches_bound(d in 1usize..40, n in 1usize..200) {
        let status = classify(d, n).status;
        prop_assert_eq!(status == Status::ProvenInfeasible, (n as u128) < dgs_bound(d, 3));
        if n % 2 == 0 && n >= 2 * d + 2 {
            prop_assert_eq!(status, Status::Constructible);
        }
    }
}

#[test]
fn verifier_agrees_with_moments_on_constructed_designs() {
    for d in 1..=8 {
        for n in 2 * d + 2..=4 * d + 12 {
            if classify(d, n).status == Status::Constructible {
                let u = build(d, n).unwrap();
                let a = verify_design(&u, 3, 1e-8).unwrap();
                let b = moment_check(&u, 3, 1e-8).unwrap();
                assert!(a.passed && b.passed, "({d},{n})");
            }
        }
    }
}

#[test]
fn lower_strength_bases_are_prefixes() {
    // Φ_1 ⊂ Φ_1 ∪ Φ_2 ∪ Φ_3, so a passing 3-design passes at 1 and 2.
    for n in [5, 7, 9] {
        let p = polygon(n).unwrap();
        for t in 1..=3 {
            assert!(verify_design(&p, t, 1e-9).unwrap().passed);
        }
    }
    for d in 1..6 {
        assert_eq!(phi_basis(d, 1).unwrap().len(), d + 1);
    }
    let u = build(5, 17).unwrap();
    for t in 1..=3 {
        assert!(verify_design(&u, t, 1e-9 * 17.0).unwrap().passed);
    }
}

#[test]
fn strength_nesting() {
    for n in 2..=40 {
        let s: Vec<usize> = (1..=3)
            .map(|t| {
                max_sidon_search(n, t, SearchBudget::unlimited())
                    .unwrap()
                    .max_cardinality
            })
            .collect();
        assert!(s[2] <= s[1] && s[1] <= s[0], "n={n}: {s:?}");
        assert_eq!(s[0], n as usize - 1);
        assert_eq!(s[1], (n as usize - 1) / 2);
    }
}
