//! Property tests for the structural invariants: the element grammar
//! round-trips, field arithmetic behaves like a field, valuations are
//! additive, and the floor/expansion pipeline is exact.

use num_bigint::BigInt;
use pcf_core::cf::{evaluate, expand, ExpandOptions};
use pcf_core::floor::FloorSpec;
use pcf_core::primes::{padic_valuation, split_type, vp_rational};
use pcf_core::quad::{QuadElem, Rational};
use proptest::prelude::*;

fn rational_strategy() -> impl Strategy<Value = Rational> {
    (-1_000_000i64..=1_000_000, 1i64..=1_000_000)
        .prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
}

fn quad_strategy(d: i64) -> impl Strategy<Value = QuadElem> {
    (rational_strategy(), rational_strategy()).prop_map(move |(a, b)| {
        if b == Rational::from_integer(BigInt::from(0)) {
            QuadElem::from_rational(a)
        } else {
            QuadElem::new(d, a, b).unwrap()
        }
    })
}

fn any_quad() -> impl Strategy<Value = QuadElem> {
    prop_oneof![
        rational_strategy().prop_map(QuadElem::from_rational),
        quad_strategy(2),
        quad_strategy(17),
        quad_strategy(-11),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn grammar_round_trips(x in any_quad()) {
        let printed = x.to_string();
        let back: QuadElem = printed.parse().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn field_laws(a in quad_strategy(2), b in quad_strategy(2), c in quad_strategy(2)) {
        // distributivity and associativity
        let lhs = a.checked_mul(&b.checked_add(&c).unwrap()).unwrap();
        let rhs = a.checked_mul(&b).unwrap().checked_add(&a.checked_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let lhs = a.checked_mul(&b).unwrap().checked_mul(&c).unwrap();
        let rhs = a.checked_mul(&b.checked_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        // double inverse
        if !a.is_zero() {
            prop_assert_eq!(a.checked_inv().unwrap().checked_inv().unwrap(), a.clone());
        }
        // norm is multiplicative
        let prod = a.checked_mul(&b).unwrap();
        prop_assert_eq!(prod.norm(), a.norm() * b.norm());
    }

    #[test]
    fn minimal_polynomial_vanishes(x in any_quad()) {
        let (a2, a1, a0) = x.min_poly();
        let a2q = QuadElem::from_bigint(a2);
        let a1q = QuadElem::from_bigint(a1);
        let a0q = QuadElem::from_bigint(a0);
        let val = a2q
            .checked_mul(&x.checked_mul(&x).unwrap()).unwrap()
            .checked_add(&a1q.checked_mul(&x).unwrap()).unwrap()
            .checked_add(&a0q).unwrap();
        prop_assert!(val.is_zero());
    }

    #[test]
    fn rational_valuation_additive(x in rational_strategy(), y in rational_strategy()) {
        prop_assume!(x != Rational::from_integer(BigInt::from(0)));
        prop_assume!(y != Rational::from_integer(BigInt::from(0)));
        for p in [3u64, 5, 13] {
            let vx = vp_rational(&x, p).unwrap();
            let vy = vp_rational(&y, p).unwrap();
            prop_assert_eq!(vp_rational(&(&x * &y), p).unwrap(), vx + vy);
        }
    }

    #[test]
    fn quad_valuation_additive(x in quad_strategy(2), y in quad_strategy(2)) {
        prop_assume!(!x.is_zero() && !y.is_zero());
        let prime = split_type(7, 2).unwrap();
        let vx = padic_valuation(&x, &prime).unwrap().unwrap();
        let vy = padic_valuation(&y, &prime).unwrap().unwrap();
        let vxy = padic_valuation(&x.checked_mul(&y).unwrap(), &prime).unwrap().unwrap();
        prop_assert_eq!(vxy, vx + vy);
    }

    #[test]
    fn browkin_floor_axiom(x in rational_strategy()) {
        let spec = FloorSpec::browkin(5).unwrap();
        let alpha = QuadElem::from_rational(x);
        let s = pcf_core::floor::floor(&alpha, &spec).unwrap().value;
        let rem = alpha.checked_sub(&s).unwrap();
        let v = padic_valuation(&rem, &spec.prime).unwrap();
        prop_assert!(v.map_or(true, |v| v >= 1));
    }
}

proptest! {
    // expansions are heavier; fewer cases
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn browkin_expand_evaluate_identity(x in rational_strategy()) {
        let spec = FloorSpec::browkin(7).unwrap();
        let alpha = QuadElem::from_rational(x);
        let e = expand(&alpha, &spec, ExpandOptions::default()).unwrap();
        prop_assert!(e.is_finite());
        prop_assert_eq!(evaluate(&e.partial_quotients).unwrap(), alpha);
    }
}
