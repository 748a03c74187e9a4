//! Properties of the exact function-field layer and the specialization census.

use std::collections::BTreeSet;

use entangle::census::{
    census, exceptional_maps, preimage_hits, rational_preimage_exists, rationals_up_to_height,
    reduced_pairs_up_to_height, t6, PreimageTester,
};
use entangle::ratfield::{
    diagonal_cubic, q, qr, verify_ed, verify_factor_lemmas, verify_level10, verify_level15,
    verify_level18, Field, Poly, QuadScalar, RatFunc, Q,
};
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

/// `[a, b, c]` of `(x − r₁)(x − r₂)(x − r₃)`.
fn from_roots(r: [i64; 3]) -> [Q; 3] {
    let [a, b, c] = r;
    [q(-(a + b + c)), q(a * b + a * c + b * c), q(-a * b * c)]
}

fn vandermonde(r: [i64; 3]) -> i64 {
    (r[0] - r[1]) * (r[0] - r[2]) * (r[1] - r[2])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn diagonal_cubic_matches_root_pairing(
        s in prop::array::uniform3(-9i64..10),
        t in prop::array::uniform3(-9i64..10),
    ) {
        let delta = q(vandermonde(s) * vandermonde(t));
        let got = diagonal_cubic(&from_roots(s), &from_roots(t), &delta).unwrap();
        let roots = [0usize, 1, 2].map(|k| (0..3).map(|i| s[i] * t[(i + k) % 3]).sum::<i64>());
        prop_assert_eq!(got, from_roots(roots));
    }

    #[test]
    fn quad_scalar_norm(
        a in (-50i64..50, 1i64..20),
        b in (-50i64..50, 1i64..20),
        d in prop::sample::select(vec![-15i64, -3, 2, 5, 7]),
    ) {
        let x = QuadScalar::new(qr(a.0, a.1), qr(b.0, b.1), d);
        let expected = qr(a.0, a.1) * qr(a.0, a.1) - q(d) * qr(b.0, b.1) * qr(b.0, b.1);
        prop_assert_eq!(x.mul(&x.conj()), QuadScalar::rational(expected.clone()));
        prop_assert_eq!(x.norm(), expected);
    }

    #[test]
    fn ratfunc_equality_is_cross_multiplication(
        p1 in prop::collection::vec(-5i64..6, 1..4),
        q1 in prop::collection::vec(-5i64..6, 1..4),
        p2 in prop::collection::vec(-5i64..6, 1..4),
        q2 in prop::collection::vec(-5i64..6, 1..4),
        r in prop::collection::vec(-5i64..6, 1..3),
        share in any::<bool>(),
    ) {
        let (n1, d1) = (Poly::<Q>::from_i64s(&p1), Poly::<Q>::from_i64s(&q1));
        let (mut n2, mut d2) = (Poly::<Q>::from_i64s(&p2), Poly::<Q>::from_i64s(&q2));
        let r = Poly::<Q>::from_i64s(&r);
        if share && !r.is_zero() {
            n2 = &n1 * &r;
            d2 = &d1 * &r;
        }
        prop_assume!(!d1.is_zero() && !d2.is_zero());
        let f = RatFunc::new(n1.clone(), d1.clone()).unwrap();
        let g = RatFunc::new(n2.clone(), d2.clone()).unwrap();
        let cross = &(&n1 * &d2) - &(&n2 * &d1);
        prop_assert_eq!(f == g, cross.is_zero());
        if share && !r.is_zero() {
            prop_assert_eq!(f, g);
        }
    }
}

#[test]
fn registered_parametrizations_compose_to_registered_j_maps() {
    for report in [
        verify_level10(),
        verify_level15(),
        verify_level18(),
        verify_factor_lemmas(),
    ] {
        assert!(report.passed(), "{:?}", report.first_failure());
    }
}

#[test]
fn ed_j_matches_and_discriminant_differs_by_sign() {
    for d in [-3i64, 5, 8] {
        let report = verify_ed(d);
        for c in &report.checks {
            if c.name == "discriminant" {
                assert!(!c.passed);
                assert_eq!(c.note.as_deref(), Some("computed / stated = -1"));
            } else {
                assert!(c.passed, "D = {d}: {}", c.name);
            }
        }
    }
}

/// Values `f(u)` for every `u` of height at most `bound`, off the poles.
fn image_up_to(f: &RatFunc<Q>, bound: u64) -> BTreeSet<Q> {
    rationals_up_to_height(bound)
        .filter_map(|u| f.eval(&u).ok())
        .collect()
}

#[test]
fn preimage_decisions_agree_with_exhaustive_search() {
    let t = 12u64;
    for (name, f) in exceptional_maps() {
        let image = image_up_to(&f, 3 * t);
        let tester = PreimageTester::new(&f, t).expect("small coefficients");
        for (x, y) in reduced_pairs_up_to_height(t) {
            let t0 = Q::new(BigInt::from(x), BigInt::from(y));
            let exhaustive = image.contains(&t0);
            assert_eq!(
                rational_preimage_exists(&f, &t0),
                exhaustive,
                "{name} at {t0}"
            );
            assert_eq!(tester.hits(x, y), exhaustive, "{name} at {t0}");
        }
    }
}

#[test]
fn t6_hits_at_height_ten() {
    let hits: BTreeSet<Q> = preimage_hits(&t6(), 10).into_iter().collect();
    for v in [0, 1, 2, 9] {
        assert!(hits.contains(&q(v)));
    }
    // Direct images of u ∈ {−1, 0, 1, 2}.
    let direct: BTreeSet<Q> = [-1i64, 0, 1, 2].iter().map(|&u| q(u * u * u + 1)).collect();
    assert!(direct.is_subset(&hits));
}

#[test]
fn census_total_matches_coprime_pair_count() {
    let t = 300u64;
    let report = census(t, &[]).unwrap();
    let mut count = 0u64;
    for y in 1..=t as i64 {
        for x in -(t as i64)..=t as i64 {
            if x.gcd(&y) == 1 {
                count += 1;
            }
        }
    }
    assert_eq!(report.total, count);
}

#[test]
fn census_is_deterministic_monotone_and_bounded() {
    let a = census(80, &[10, 20, 40]).unwrap();
    let b = census(80, &[10, 20, 40]).unwrap();
    assert_eq!(a, b);
    let c = census(40, &[]).unwrap();
    assert_eq!(&c.checkpoints[0], &a.checkpoints[2]);
    for w in a.checkpoints.windows(2) {
        let (lo, hi) = (&w[0], &w[1]);
        let (l, h) = (lo.exceptional_by_map, hi.exceptional_by_map);
        assert!(lo.total <= hi.total && lo.excluded <= hi.excluded);
        assert!(l.t2 <= h.t2 && l.t6 <= h.t6 && l.t9 <= h.t9 && l.t18 <= h.t18);
        assert!(l.union <= h.union);
    }
    for row in &a.checkpoints {
        let c = row.exceptional_by_map;
        let per = [c.t2, c.t6, c.t9, c.t18];
        assert!(c.union >= *per.iter().max().unwrap());
        assert!(c.union <= per.iter().sum());
    }
}

#[test]
fn census_union_matches_exhaustive_sets() {
    let t = 30u64;
    let report = census(t, &[]).unwrap();
    let be: BTreeSet<Q> = [-3, -1, 0, 1, 3].map(q).into_iter().collect();
    let mut union = BTreeSet::new();
    let mut per = Vec::new();
    for (_, f) in exceptional_maps() {
        let hits: BTreeSet<Q> = image_up_to(&f, 3 * t)
            .into_iter()
            .filter(|v| v.numer().magnitude() <= &t.into() && v.denom().magnitude() <= &t.into())
            .filter(|v| !be.contains(v))
            .collect();
        per.push(hits.len() as u64);
        union.extend(hits);
    }
    let c = report.exceptional_by_map;
    assert_eq!(per, [c.t2, c.t6, c.t9, c.t18]);
    assert_eq!(c.union, union.len() as u64);
    assert_eq!(report.be, ["-3", "-1", "0", "1", "3"]);
}
