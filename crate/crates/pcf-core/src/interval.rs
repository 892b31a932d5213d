//! Rational-endpoint interval arithmetic for real magnitudes that leave the
//! field: sqrt and ln enclosures, real embeddings of field elements, and the
//! theta map. Everything is outward-rounded BigRational arithmetic; no
//! floating point on any certified path.

use crate::quad::{QuadElem, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum IntervalError {
    #[error("interval endpoints out of order")]
    Disordered,
    #[error("operation needs an interval excluding zero")]
    ContainsZero,
    #[error("sqrt of a negative interval")]
    NegativeSqrt,
    #[error("ln of a non-positive interval")]
    NonPositiveLn,
    #[error("no real embedding for D = {0} < 0")]
    NotReal(i64),
}

/// A closed interval [lo, hi] with rational endpoints enclosing a real
/// number; `exact` means lo == hi and the value is that rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurdInterval {
    pub lo: Rational,
    pub hi: Rational,
    pub exact: bool,
}

impl SurdInterval {
    pub fn exact(v: Rational) -> SurdInterval {
        SurdInterval { lo: v.clone(), hi: v, exact: true }
    }

    pub fn new(lo: Rational, hi: Rational) -> Result<SurdInterval, IntervalError> {
        if lo > hi {
            return Err(IntervalError::Disordered);
        }
        let exact = lo == hi;
        Ok(SurdInterval { lo, hi, exact })
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn intersects(&self, other: &SurdInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn add(&self, other: &SurdInterval) -> SurdInterval {
        SurdInterval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
            exact: self.exact && other.exact,
        }
    }

    pub fn sub(&self, other: &SurdInterval) -> SurdInterval {
        SurdInterval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
            exact: self.exact && other.exact,
        }
    }

    pub fn neg(&self) -> SurdInterval {
        SurdInterval { lo: -&self.hi, hi: -&self.lo, exact: self.exact }
    }

    pub fn mul(&self, other: &SurdInterval) -> SurdInterval {
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = cands.iter().min().unwrap().clone();
        let hi = cands.iter().max().unwrap().clone();
        SurdInterval { lo, hi, exact: self.exact && other.exact }
    }

    pub fn scale(&self, c: &Rational) -> SurdInterval {
        if c.is_negative() {
            SurdInterval { lo: &self.hi * c, hi: &self.lo * c, exact: self.exact }
        } else {
            SurdInterval { lo: &self.lo * c, hi: &self.hi * c, exact: self.exact }
        }
    }

    pub fn recip(&self) -> Result<SurdInterval, IntervalError> {
        if self.lo.is_negative() != self.hi.is_negative() || self.lo.is_zero() || self.hi.is_zero()
        {
            return Err(IntervalError::ContainsZero);
        }
        Ok(SurdInterval {
            lo: Rational::one() / &self.hi,
            hi: Rational::one() / &self.lo,
            exact: self.exact,
        })
    }

    pub fn div(&self, other: &SurdInterval) -> Result<SurdInterval, IntervalError> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn abs(&self) -> SurdInterval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            SurdInterval {
                lo: Rational::zero(),
                hi: (-&self.lo).max(self.hi.clone()),
                exact: false,
            }
        }
    }

    /// Enclosure of sqrt over a nonnegative interval.
    pub fn sqrt(&self, width: &Rational) -> Result<SurdInterval, IntervalError> {
        if self.lo.is_negative() {
            return Err(IntervalError::NegativeSqrt);
        }
        let lo = sqrt_enclosure(&self.lo, width)?;
        let hi = sqrt_enclosure(&self.hi, width)?;
        Ok(SurdInterval {
            exact: self.exact && lo.exact && hi.exact,
            lo: lo.lo,
            hi: hi.hi,
        })
    }

    pub fn strictly_below(&self, bound: &Rational) -> bool {
        &self.hi < bound
    }
}

fn ceil_div(num: &BigInt, den: &BigInt) -> BigInt {
    let (q, r) = num.div_rem(den);
    if r.is_zero() || (num.is_negative() != den.is_negative()) {
        q
    } else {
        q + 1
    }
}

/// Enclosure of sqrt(t) for rational t >= 0 with hi - lo <= width; exact for
/// perfect rational squares.
pub fn sqrt_enclosure(t: &Rational, width: &Rational) -> Result<SurdInterval, IntervalError> {
    if t.is_negative() {
        return Err(IntervalError::NegativeSqrt);
    }
    if t.is_zero() {
        return Ok(SurdInterval::exact(Rational::zero()));
    }
    let ns = t.numer().sqrt();
    let ds = t.denom().sqrt();
    if &(&ns * &ns) == t.numer() && &(&ds * &ds) == t.denom() {
        return Ok(SurdInterval::exact(Rational::new(ns, ds)));
    }
    // scale so that 2/s <= width, take the integer sqrt of floor(t*s^2)
    let s = ceil_div(&(BigInt::from(2) * width.denom()), width.numer()).max(BigInt::one());
    let scaled = (t * Rational::from_integer(&s * &s)).floor().to_integer();
    let root = scaled.sqrt();
    let lo = Rational::new(root.clone(), s.clone());
    let hi = Rational::new(root + 2, s);
    Ok(SurdInterval { lo, hi, exact: false })
}

/// atanh-series enclosure of ln(m) for m in roughly [1/2, 2]; tail is
/// bounded by the geometric series and added outward.
fn ln_core(m: &Rational, tol: &Rational) -> SurdInterval {
    let one = Rational::one();
    let t = (m - &one) / (m + &one);
    if t.is_zero() {
        return SurdInterval::exact(Rational::zero());
    }
    let t2 = &t * &t;
    let mut term = t.clone(); // t^(2i+1)
    let mut sum = Rational::zero();
    let mut i: u32 = 0;
    loop {
        sum += &term / Rational::from_integer(BigInt::from(2 * i + 1));
        term *= &t2;
        i += 1;
        // remaining tail: sum_{j>=i} |t|^(2j+1)/(2j+1) <= |t|^(2i+1)/((2i+1)(1-t^2))
        let tail = term.abs() / (Rational::from_integer(BigInt::from(2 * i + 1)) * (&one - &t2));
        if &tail <= tol {
            let two = Rational::from_integer(BigInt::from(2));
            let lo = (&sum - &tail) * &two;
            let hi = (&sum + &tail) * &two;
            return SurdInterval { lo, hi, exact: false };
        }
    }
}

/// Enclosure of ln(x) for rational x > 0 with outward rounding; exact only
/// at x = 1.
pub fn ln_enclosure(x: &Rational, width: &Rational) -> Result<SurdInterval, IntervalError> {
    if !x.is_positive() {
        return Err(IntervalError::NonPositiveLn);
    }
    if x.is_one() {
        return Ok(SurdInterval::exact(Rational::zero()));
    }
    let two = Rational::from_integer(BigInt::from(2));
    let three_halves = Rational::new(BigInt::from(3), BigInt::from(2));
    let three_quarters = Rational::new(BigInt::from(3), BigInt::from(4));
    let mut m = x.clone();
    let mut k: i64 = 0;
    while m > three_halves {
        m /= &two;
        k += 1;
    }
    while m < three_quarters {
        m *= &two;
        k -= 1;
    }
    let parts = Rational::from_integer(BigInt::from(4 * (k.unsigned_abs() + 1)));
    let tol = width / parts;
    let ln_m = ln_core(&m, &tol);
    if k == 0 {
        return Ok(ln_m);
    }
    let ln2 = ln_core(&Rational::from_integer(BigInt::from(2)), &tol);
    let kr = Rational::from_integer(BigInt::from(k));
    Ok(ln2.scale(&kr).add(&ln_m))
}

/// The two real embeddings of a quadratic field (identity on rationals).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Embedding {
    Id,
    Conj,
}

/// Signed enclosure of x under a real embedding (D > 0 or x rational).
pub fn embed(x: &QuadElem, e: Embedding, width: &Rational) -> Result<SurdInterval, IntervalError> {
    let x = match e {
        Embedding::Id => x.clone(),
        Embedding::Conj => x.conj(),
    };
    if let Some(r) = x.as_rational() {
        return Ok(SurdInterval::exact(r.clone()));
    }
    let d = x.d().unwrap();
    if d < 0 {
        return Err(IntervalError::NotReal(d));
    }
    let b = x.coord_b().clone();
    let babs = b.abs();
    let w = width / &babs;
    let root = sqrt_enclosure(&Rational::from_integer(BigInt::from(d)), &w)?;
    Ok(root.scale(&b).add(&SurdInterval::exact(x.coord_a().clone())))
}

/// Enclosure of |x^sigma| with hi - lo <= width. For D < 0 this is the
/// complex modulus sqrt(a^2 + |D| b^2), identical at both embeddings.
pub fn abs_embed(x: &QuadElem, e: Embedding, width: &Rational) -> SurdInterval {
    if let Some(r) = x.as_rational() {
        return SurdInterval::exact(r.abs());
    }
    let d = x.d().unwrap();
    if d < 0 {
        let modulus_sq = x.coord_a() * x.coord_a()
            + x.coord_b() * x.coord_b() * Rational::from_integer(BigInt::from(-d));
        return sqrt_enclosure(&modulus_sq, width).expect("nonnegative");
    }
    let signed = embed(x, e, width).expect("real embedding");
    signed.abs()
}

/// Enclosure of theta(v) = (v + sqrt(v^2 + 4))/2 over a nonnegative
/// magnitude interval.
pub fn theta_interval(abs_v: &SurdInterval, width: &Rational) -> SurdInterval {
    let four = SurdInterval::exact(Rational::from_integer(BigInt::from(4)));
    let sq = abs_v.mul(abs_v).add(&four);
    let root = sq.sqrt(width).expect("v^2+4 > 0");
    let half = Rational::new(BigInt::from(1), BigInt::from(2));
    abs_v.add(&root).scale(&half)
}

/// theta of an exact field element's magnitude at an embedding.
pub fn theta_of_elem(x: &QuadElem, e: Embedding, width: &Rational) -> SurdInterval {
    let a = abs_embed(x, e, width);
    theta_interval(&a, width)
}

/// Default refinement width 2^-64, as a rational.
pub fn default_width() -> Rational {
    Rational::new(BigInt::one(), BigInt::from(2).pow(64))
}

/// Width 2^-bits.
pub fn width_bits(bits: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(2).pow(bits))
}
