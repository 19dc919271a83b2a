mod common;

use std::collections::BTreeSet;

use coercheck::barycentric::build_map;
use coercheck::circuit::{circuit_coercive, circuit_number, recognize_circuit};
use coercheck::enclosure::{Interval, GUARD_BITS};
use coercheck::geometry::max_origin_weight;
use coercheck::poly::default_names;
use coercheck::rational::ratio;
use coercheck::{
    analyze, certify, parse_polynomial, vertex_set, CertifyOptions, Exponent, MarginPolicy,
    Polynomial, Rational, VarSpec, Verdict,
};
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{brute_max_origin_weight, brute_vertex_set, random_polynomial};

fn exponent(n: usize, max: u32) -> impl Strategy<Value = Exponent> {
    prop::collection::vec(0..=max, n).prop_map(Exponent::new)
}

fn coefficient() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6)
        .prop_filter("nonzero", |(p, _)| *p != 0)
        .prop_map(|(p, q)| ratio(p, q))
}

fn polynomial(n: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((exponent(n, 6), coefficient()), 0..8)
        .prop_map(move |terms| Polynomial::with_default_names(n, terms).unwrap())
}

/// Polynomials that satisfy the necessary conditions more often than not.
fn biased_polynomial() -> impl Strategy<Value = Polynomial> {
    (2usize..=3, any::<u64>()).prop_map(|(n, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_polynomial(&mut rng, n, 6, 7, 0.8)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn render_parse_round_trip(f in (1usize..=3).prop_flat_map(polynomial)) {
        let names = default_names(f.n_vars());
        let back = parse_polynomial(&f.render(), &VarSpec::Explicit(names)).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn partition_is_disjoint_and_complete(f in (1usize..=3).prop_flat_map(polynomial)) {
        let an = analyze(&f);
        let a: BTreeSet<Exponent> = f.support().cloned().collect();
        prop_assert!(an.v.is_disjoint(&an.d) && an.v.is_disjoint(&an.r) && an.d.is_disjoint(&an.r));
        let union: BTreeSet<Exponent> = an.v.iter().chain(&an.d).chain(&an.r).cloned().collect();
        prop_assert_eq!(union, a);
        prop_assert!(an.v0.contains(&Exponent::zero(f.n_vars())));
        prop_assert_eq!(an.gem_regular, an.d.is_empty());
        if an.c3 {
            prop_assert_eq!(an.v_ess.len(), f.n_vars());
            for e in an.v_ess.values() {
                let (_, k) = e.as_axis_power().unwrap();
                prop_assert!(k > 0 && k % 2 == 0);
            }
        }
    }

    #[test]
    fn vertex_set_matches_brute_force(
        pts in (1usize..=3).prop_flat_map(|n| prop::collection::btree_set(exponent(n, 8), 1..=8))
    ) {
        prop_assert_eq!(vertex_set(&pts), brute_vertex_set(&pts));
    }

    #[test]
    fn face_consistency(f in (2usize..=3).prop_flat_map(polynomial)) {
        let an = analyze(&f);
        for a in &an.d {
            prop_assert_eq!(brute_max_origin_weight(a, &an.v0), Some(Rational::zero()));
        }
        for a in &an.r {
            let w = max_origin_weight(a, &an.v0).unwrap();
            prop_assert!(w > Rational::zero());
            prop_assert_eq!(brute_max_origin_weight(a, &an.v0), Some(w));
        }
    }

    #[test]
    fn analysis_is_permutation_equivariant(f in polynomial(3), perm in Just(vec![0usize, 1, 2]).prop_shuffle()) {
        let an = analyze(&f);
        let ap = analyze(&f.permuted(&perm));
        let map = |s: &BTreeSet<Exponent>| s.iter().map(|e| e.permuted(&perm)).collect::<BTreeSet<_>>();
        prop_assert_eq!(ap.v0, map(&an.v0));
        prop_assert_eq!(ap.d, map(&an.d));
        prop_assert_eq!(ap.r, map(&an.r));
        prop_assert_eq!((ap.c1, ap.c2, ap.c3), (an.c1, an.c2, an.c3));
    }

    #[test]
    fn analysis_is_scale_invariant(f in polynomial(2), p in 1i64..50, q in 1i64..50) {
        let an = analyze(&f);
        let pos = analyze(&f.scaled(&ratio(p, q)));
        prop_assert_eq!(&pos.v0, &an.v0);
        prop_assert_eq!(&pos.d, &an.d);
        prop_assert_eq!(&pos.r, &an.r);
        prop_assert_eq!((pos.c1, pos.c2, pos.c3), (an.c1, an.c2, an.c3));
        let neg = analyze(&f.scaled(&ratio(-p, q)));
        if !an.v.is_empty() {
            let all_neg = an.v.iter().all(|a| f.coeff_or_zero(a) < Rational::zero());
            prop_assert_eq!(neg.c2, all_neg);
        }
    }

    #[test]
    fn maps_are_valid(f in biased_polynomial(), seed in 0u64..8) {
        let an = analyze(&f);
        let m = build_map(&f, &an, Some(seed)).unwrap();
        prop_assert!(m.verify());
        prop_assert_eq!(m.entries.len(), f.support().filter(|a| !an.v0.contains(*a)).count());
    }

    #[test]
    fn theta_is_positive_and_homogeneous(
        a in 1i64..30, c in 1i64..30, b in coefficient(), p in 1i64..40, q in 1i64..40
    ) {
        let f = Polynomial::with_default_names(2, [
            (Exponent::from([4, 0]), ratio(a, 7)),
            (Exponent::from([3, 1]), b),
            (Exponent::from([0, 4]), ratio(c, 5)),
        ]).unwrap();
        let s = ratio(p, q);
        let fs = f.scaled(&s);
        let star = Exponent::from([3, 1]);
        let bits = 128;
        let t = circuit_number(&f, &build_map(&f, &analyze(&f), None).unwrap(), &star, bits).unwrap();
        let ts = circuit_number(&fs, &build_map(&fs, &analyze(&fs), None).unwrap(), &star, bits).unwrap();
        prop_assert!(t.value_enclosure().lo_rational() > Rational::zero());
        let shifted = t.interval().add(&Interval::ln_rational(&s, bits + GUARD_BITS));
        prop_assert!(shifted.overlaps(ts.interval()));
    }

    #[test]
    fn certify_is_scale_invariant(f in biased_polynomial(), p in 1i64..40, q in 1i64..40) {
        let opts = CertifyOptions::default();
        let v = certify(&f, &opts).verdict;
        prop_assert_eq!(certify(&f.scaled(&ratio(p, q)), &opts).verdict, v);
    }

    #[test]
    fn circuit_decision_agrees_with_gem_regularity(
        k1 in 1u32..=3, k2 in 1u32..=3, a in 1u32..6, b in 1u32..6, c in coefficient()
    ) {
        // outer vertices 0, 2k1 e1, 2k2 e2; α* = (a, b) strictly inside
        prop_assume!(a * 2 * k2 + b * 2 * k1 < 4 * k1 * k2);
        let star = Exponent::from([a, b]);
        let f = Polynomial::with_default_names(2, [
            (Exponent::from([0, 0]), ratio(1, 1)),
            (Exponent::from([2 * k1, 0]), ratio(2, 1)),
            (Exponent::from([0, 2 * k2]), ratio(3, 1)),
            (star, c),
        ]).unwrap();
        let an = analyze(&f);
        prop_assert!(an.gem_regular);
        let cs = recognize_circuit(&f).unwrap();
        prop_assert_eq!(cs.r, 2);
        let cert = circuit_coercive(&f, &cs, &an, 192, MarginPolicy::ExactFallback);
        prop_assert_eq!(cert.verdict, Verdict::Coercive);
        prop_assert_eq!(certify(&f, &CertifyOptions::default()).verdict, Verdict::Coercive);
    }
}
