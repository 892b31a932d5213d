//! Multiplicative Weil heights. Heights are carried as H^d (d = field
//! degree) so every comparison stays inside rational or quadratic-surd
//! arithmetic; H itself would involve d-th roots.

use crate::interval::{abs_embed, default_width, Embedding, SurdInterval};
use crate::quad::{QuadElem, Rational, Sign};
use num_bigint::BigInt;
use num_traits::{One, Signed};

/// H(x)^d together with the degree d of the defining field element.
#[derive(Debug, Clone)]
pub struct HeightValue {
    pub value_pow_d: SurdInterval,
    pub degree: u32,
}

fn clamp_ge_one(iv: SurdInterval) -> SurdInterval {
    let one = Rational::one();
    if iv.lo < one {
        SurdInterval { lo: one, hi: iv.hi.max(Rational::one()), exact: false }
    } else {
        iv
    }
}

/// H(x)^d. For rational u/v in lowest terms this is max(|u|, |v|) with
/// d = 1 (H(0) = 1 by the empty-sup convention). For quadratic x with
/// primitive minimal polynomial A X^2 + B X + C it is the Mahler measure
/// |A| max(1,|x|) max(1,|x^sigma|) with d = 2, exact whenever the measure
/// is rational.
pub fn weil_height_pow_d(x: &QuadElem) -> HeightValue {
    if let Some(r) = x.as_rational() {
        let h = Rational::from_integer(r.numer().abs().max(r.denom().abs()));
        let h = h.max(Rational::one());
        return HeightValue { value_pow_d: SurdInterval::exact(h), degree: 1 };
    }
    let (a2, _, a0) = x.min_poly();
    let d = x.d().unwrap();
    let a2_abs = Rational::from_integer(a2.abs());
    let a0_abs = Rational::from_integer(a0.abs());
    if d < 0 {
        // both conjugate moduli equal sqrt(C/A): measure is max(|A|, |C|)
        let h2 = a2_abs.max(a0_abs);
        return HeightValue { value_pow_d: SurdInterval::exact(h2), degree: 2 };
    }
    let one = QuadElem::one();
    let exceeds_one = |v: &QuadElem| -> bool {
        // |v| > 1 over R
        let up = v.checked_sub(&one).unwrap().sign().unwrap();
        let dn = v.checked_add(&one).unwrap().sign().unwrap();
        up == Sign::Positive || dn == Sign::Negative
    };
    let conj = x.conj();
    let big_id = exceeds_one(x);
    let big_conj = exceeds_one(&conj);
    let value = match (big_id, big_conj) {
        (false, false) => SurdInterval::exact(a2_abs),
        (true, true) => SurdInterval::exact(a0_abs),
        (true, false) => abs_embed(x, Embedding::Id, &default_width()).scale(&a2_abs),
        (false, true) => abs_embed(x, Embedding::Conj, &default_width()).scale(&a2_abs),
    };
    HeightValue { value_pow_d: clamp_ge_one(value), degree: 2 }
}

/// H(x) for a plain rational, exact.
pub fn rational_height(r: &Rational) -> Rational {
    Rational::from_integer(r.numer().abs().max(r.denom().abs()).max(BigInt::one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::rational_from_ints;

    #[test]
    fn rational_heights() {
        let h = weil_height_pow_d(&"2/3".parse().unwrap());
        assert!(h.value_pow_d.exact);
        assert_eq!(h.value_pow_d.lo, rational_from_ints(3, 1));
        assert_eq!(h.degree, 1);
        // H(0) = 1
        let h = weil_height_pow_d(&QuadElem::zero());
        assert_eq!(h.value_pow_d.lo, rational_from_ints(1, 1));
    }

    #[test]
    fn surd_heights() {
        // H(1+sqrt2)^2 = 1 + sqrt2 ~ 2.41421
        let h = weil_height_pow_d(&"1 + sqrt(2)".parse().unwrap());
        assert_eq!(h.degree, 2);
        assert!(!h.value_pow_d.exact);
        assert!(h.value_pow_d.lo > rational_from_ints(24142, 10000));
        assert!(h.value_pow_d.hi < rational_from_ints(24143, 10000));
        // H(sqrt2)^2 = 2 exactly
        let h = weil_height_pow_d(&"sqrt(2)".parse().unwrap());
        assert!(h.value_pow_d.exact);
        assert_eq!(h.value_pow_d.lo, rational_from_ints(2, 1));
    }

    #[test]
    fn galois_invariance_exact_cases() {
        for s in ["sqrt(2)", "3 + 2*sqrt(2)", "1/2 + 1/2*sqrt(17)", "1 + sqrt(-11)"] {
            let x: QuadElem = s.parse().unwrap();
            let hx = weil_height_pow_d(&x).value_pow_d;
            let hc = weil_height_pow_d(&x.conj()).value_pow_d;
            assert!(hx.intersects(&hc), "H({s}) vs conjugate");
            if hx.exact && hc.exact {
                assert_eq!(hx.lo, hc.lo);
            }
        }
    }
}
