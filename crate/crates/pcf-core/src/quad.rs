//! Exact elements of Q and Q(sqrt(D)), with exact sign decisions for real
//! surds, conjugate/norm/trace, minimal polynomials, and the canonical text
//! grammar `INT`, `INT/INT`, `R + R*sqrt(INT)`, `R - R*sqrt(INT)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;

pub type Rational = BigRational;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum QuadError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements live in incompatible fields Q(sqrt({0})) and Q(sqrt({1}))")]
    MixedFields(i64, i64),
    #[error("{0} is not a valid field discriminant radicand (must be squarefree, not 0 or 1)")]
    BadRadicand(i64),
    #[error("complex value has no real sign (D = {0} < 0 with sqrt coefficient != 0)")]
    ComplexSign(i64),
    #[error("parse error at column {col}: {msg}")]
    Parse { col: usize, msg: String },
}

/// Exact sign of a real number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of_rational(x: &Rational) -> Sign {
        if x.is_zero() {
            Sign::Zero
        } else if x.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn is_positive(self) -> bool {
        self == Sign::Positive
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Negative
    }
}

pub fn is_squarefree(d: i64) -> bool {
    if d == 0 {
        return false;
    }
    let mut n = d.unsigned_abs();
    let mut f = 2u64;
    while f * f <= n {
        if n % f == 0 {
            n /= f;
            if n % f == 0 {
                return false;
            }
        }
        f += 1;
    }
    true
}

/// An exact element a + b*sqrt(d) of Q(sqrt(d)), or a plain rational when
/// `d` is absent. Canonical form: `b == 0` implies `d == None`, so equality
/// and hashing of the derived fields agree with field equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadElem {
    d: Option<i64>,
    a: Rational,
    b: Rational,
}

impl QuadElem {
    /// Builds a + b*sqrt(d). Rejects non-squarefree d and d in {0, 1}.
    pub fn new(d: i64, a: Rational, b: Rational) -> Result<QuadElem, QuadError> {
        if d == 1 || !is_squarefree(d) {
            return Err(QuadError::BadRadicand(d));
        }
        Ok(QuadElem::canonical(Some(d), a, b))
    }

    fn canonical(d: Option<i64>, a: Rational, b: Rational) -> QuadElem {
        if b.is_zero() {
            QuadElem { d: None, a, b }
        } else {
            debug_assert!(d.is_some());
            QuadElem { d, a, b }
        }
    }

    pub fn from_rational(a: Rational) -> QuadElem {
        QuadElem { d: None, a, b: Rational::zero() }
    }

    pub fn from_int(n: i64) -> QuadElem {
        QuadElem::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> QuadElem {
        QuadElem::from_rational(Rational::from_integer(n))
    }

    /// sqrt(d) itself.
    pub fn sqrt_d(d: i64) -> Result<QuadElem, QuadError> {
        QuadElem::new(d, Rational::zero(), Rational::one())
    }

    pub fn zero() -> QuadElem {
        QuadElem::from_int(0)
    }

    pub fn one() -> QuadElem {
        QuadElem::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.d.is_none()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.d.is_none() {
            Some(&self.a)
        } else {
            None
        }
    }

    pub fn d(&self) -> Option<i64> {
        self.d
    }

    /// Rational coordinate on 1.
    pub fn coord_a(&self) -> &Rational {
        &self.a
    }

    /// Rational coordinate on sqrt(d).
    pub fn coord_b(&self) -> &Rational {
        &self.b
    }

    fn join_d(&self, other: &QuadElem) -> Result<Option<i64>, QuadError> {
        match (self.d, other.d) {
            (None, d) | (d, None) => Ok(d),
            (Some(x), Some(y)) if x == y => Ok(Some(x)),
            (Some(x), Some(y)) => Err(QuadError::MixedFields(x, y)),
        }
    }

    pub fn checked_add(&self, other: &QuadElem) -> Result<QuadElem, QuadError> {
        let d = self.join_d(other)?;
        Ok(QuadElem::canonical(d, &self.a + &other.a, &self.b + &other.b))
    }

    pub fn checked_sub(&self, other: &QuadElem) -> Result<QuadElem, QuadError> {
        let d = self.join_d(other)?;
        Ok(QuadElem::canonical(d, &self.a - &other.a, &self.b - &other.b))
    }

    pub fn checked_mul(&self, other: &QuadElem) -> Result<QuadElem, QuadError> {
        let d = self.join_d(other)?;
        let rad = Rational::from_integer(BigInt::from(d.unwrap_or(0)));
        let a = &self.a * &other.a + &(&self.b * &other.b) * &rad;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(QuadElem::canonical(d, a, b))
    }

    pub fn checked_neg(&self) -> QuadElem {
        QuadElem::canonical(self.d, -&self.a, -&self.b)
    }

    pub fn checked_inv(&self) -> Result<QuadElem, QuadError> {
        if self.is_zero() {
            return Err(QuadError::DivisionByZero);
        }
        let n = self.norm();
        // 1/(a + b sqrt d) = (a - b sqrt d)/N
        Ok(QuadElem::canonical(self.d, &self.a / &n, -&self.b / &n))
    }

    pub fn checked_div(&self, other: &QuadElem) -> Result<QuadElem, QuadError> {
        self.checked_mul(&other.checked_inv()?)
    }

    /// Galois conjugate a - b*sqrt(d); identity on rationals.
    pub fn conj(&self) -> QuadElem {
        QuadElem::canonical(self.d, self.a.clone(), -&self.b)
    }

    /// Field norm a^2 - d b^2 (= a^2 for rationals).
    pub fn norm(&self) -> Rational {
        let rad = Rational::from_integer(BigInt::from(self.d.unwrap_or(0)));
        &self.a * &self.a - &(&self.b * &self.b) * &rad
    }

    /// Field trace 2a (= 2a for rationals too: x + x^sigma).
    pub fn trace(&self) -> Rational {
        &self.a + &self.a
    }

    /// Exact sign of the real number a + b*sqrt(d) under sqrt(d) > 0.
    /// Errors when d < 0 and b != 0 (complex value).
    pub fn sign(&self) -> Result<Sign, QuadError> {
        if self.b.is_zero() {
            return Ok(Sign::of_rational(&self.a));
        }
        let d = self.d.expect("b != 0 implies d present");
        if d < 0 {
            return Err(QuadError::ComplexSign(d));
        }
        let sa = Sign::of_rational(&self.a);
        let sb = Sign::of_rational(&self.b);
        Ok(match (sa, sb) {
            (Sign::Positive | Sign::Zero, Sign::Positive) => Sign::Positive,
            (Sign::Negative | Sign::Zero, Sign::Negative) => Sign::Negative,
            (Sign::Positive, Sign::Zero) => Sign::Positive,
            (Sign::Negative, Sign::Zero) => Sign::Negative,
            (Sign::Zero, Sign::Zero) => Sign::Zero,
            // a > 0 > b: sign of a^2 - d b^2; a < 0 < b: the opposite.
            (Sign::Positive, Sign::Negative) => Sign::of_rational(&self.norm()),
            (Sign::Negative, Sign::Positive) => match Sign::of_rational(&self.norm()) {
                Sign::Positive => Sign::Negative,
                Sign::Negative => Sign::Positive,
                Sign::Zero => Sign::Zero,
            },
        })
    }

    /// |x| as a field element; requires a real embedding (d > 0 or rational).
    pub fn abs(&self) -> Result<QuadElem, QuadError> {
        match self.sign()? {
            Sign::Negative => Ok(self.checked_neg()),
            _ => Ok(self.clone()),
        }
    }

    /// Exact comparison with another element of the same (real) field.
    pub fn cmp_real(&self, other: &QuadElem) -> Result<std::cmp::Ordering, QuadError> {
        use std::cmp::Ordering;
        let diff = self.checked_sub(other)?;
        Ok(match diff.sign()? {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        })
    }

    /// Primitive integer polynomial with positive leading coefficient
    /// vanishing at the element: (a2, a1, a0) for a2 X^2 + a1 X + a0, with
    /// a2 = 0 (degree 1) exactly when the element is rational.
    pub fn min_poly(&self) -> (BigInt, BigInt, BigInt) {
        if self.is_rational() {
            // v X - u for x = u/v in lowest terms
            let u = self.a.numer().clone();
            let v = self.a.denom().clone();
            return (BigInt::zero(), v, -u);
        }
        // X^2 - tr X + norm, cleared to primitive integer form
        let tr = self.trace();
        let nm = self.norm();
        let den = tr.denom().lcm(nm.denom());
        let a2 = den.clone();
        let a1 = -(tr * Rational::from_integer(den.clone())).to_integer();
        let a0 = (nm * Rational::from_integer(den)).to_integer();
        let g = a2.gcd(&a1).gcd(&a0);
        (a2 / &g, a1 / &g, a0 / &g)
    }

    /// x^n for integer n (n < 0 inverts; errors on 0^-n).
    pub fn pow(&self, n: i64) -> Result<QuadElem, QuadError> {
        let base = if n < 0 { self.checked_inv()? } else { self.clone() };
        let mut acc = QuadElem::one();
        for _ in 0..n.unsigned_abs() {
            acc = acc.checked_mul(&base)?;
        }
        Ok(acc)
    }
}

/// Galois conjugate, field norm, and field trace in one call.
pub fn conj_norm_trace(x: &QuadElem) -> (QuadElem, Rational, Rational) {
    (x.conj(), x.norm(), x.trace())
}

/// Operation selector for the checked arithmetic entry point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
}

/// Checked field arithmetic; `y` is ignored for the unary ops.
pub fn quad_arith(x: &QuadElem, y: Option<&QuadElem>, op: ArithOp) -> Result<QuadElem, QuadError> {
    let binary = |op: fn(&QuadElem, &QuadElem) -> Result<QuadElem, QuadError>| {
        let y = y.ok_or(QuadError::DivisionByZero)?;
        op(x, y)
    };
    match op {
        ArithOp::Add => binary(QuadElem::checked_add),
        ArithOp::Sub => binary(QuadElem::checked_sub),
        ArithOp::Mul => binary(QuadElem::checked_mul),
        ArithOp::Div => binary(QuadElem::checked_div),
        ArithOp::Neg => Ok(x.checked_neg()),
        ArithOp::Inv => x.checked_inv(),
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait<&QuadElem> for &QuadElem {
            type Output = QuadElem;
            fn $method(self, rhs: &QuadElem) -> QuadElem {
                self.$checked(rhs).expect("field arithmetic")
            }
        }
        impl std::ops::$trait<QuadElem> for QuadElem {
            type Output = QuadElem;
            fn $method(self, rhs: QuadElem) -> QuadElem {
                (&self).$checked(&rhs).expect("field arithmetic")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl std::ops::Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        self.checked_neg()
    }
}

impl std::ops::Neg for QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        self.checked_neg()
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.d {
            None => write!(f, "{}", fmt_rational(&self.a)),
            Some(d) => {
                let (sign, babs) = if self.b.is_negative() {
                    ("-", -&self.b)
                } else {
                    ("+", self.b.clone())
                };
                write!(f, "{} {} {}*sqrt({})", fmt_rational(&self.a), sign, fmt_rational(&babs), d)
            }
        }
    }
}

struct Parser<'a> {
    // (original column, char) with whitespace removed
    chars: Vec<(usize, char)>,
    pos: usize,
    input_len: usize,
    _marker: std::marker::PhantomData<&'a ()>,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Parser<'a> {
        Parser {
            chars: s.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(),
            pos: 0,
            input_len: s.len(),
            _marker: std::marker::PhantomData,
        }
    }

    fn col(&self) -> usize {
        self.chars.get(self.pos).map(|&(i, _)| i).unwrap_or(self.input_len)
    }

    fn err(&self, msg: impl Into<String>) -> QuadError {
        QuadError::Parse { col: self.col(), msg: msg.into() }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), QuadError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn parse_int(&mut self) -> Result<BigInt, QuadError> {
        let mut s = String::new();
        if self.peek() == Some('-') || self.peek() == Some('+') {
            s.push(self.bump().unwrap());
        }
        let mut any = false;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            s.push(self.bump().unwrap());
            any = true;
        }
        if !any {
            return Err(self.err("expected an integer"));
        }
        BigInt::from_str(&s).map_err(|e| self.err(format!("bad integer: {e}")))
    }

    fn parse_rational(&mut self) -> Result<Rational, QuadError> {
        let num = self.parse_int()?;
        if self.eat('/') {
            let den = self.parse_int()?;
            if den.is_zero() {
                return Err(self.err("zero denominator"));
            }
            Ok(Rational::new(num, den))
        } else {
            Ok(Rational::from_integer(num))
        }
    }

    fn parse_sqrt(&mut self) -> Result<i64, QuadError> {
        for c in ['s', 'q', 'r', 't'] {
            self.expect(c)?;
        }
        self.expect('(')?;
        let d = self.parse_int()?;
        self.expect(')')?;
        let d: i64 = d
            .try_into()
            .map_err(|_| self.err("sqrt radicand out of range"))?;
        if d == 0 || d == 1 || !is_squarefree(d) {
            return Err(self.err(format!("sqrt radicand {d} must be squarefree and not 0 or 1")));
        }
        Ok(d)
    }

    fn at_sqrt(&self) -> bool {
        self.peek() == Some('s')
    }

    /// Optional coefficient followed by sqrt: `R*sqrt(D)` or bare `sqrt(D)`.
    fn parse_surd_term(&mut self, leading_sign: Sign) -> Result<(Rational, i64), QuadError> {
        let coeff = if self.at_sqrt() {
            Rational::one()
        } else {
            let r = self.parse_rational()?;
            self.expect('*')?;
            r
        };
        let d = self.parse_sqrt()?;
        let coeff = if leading_sign == Sign::Negative { -coeff } else { coeff };
        Ok((coeff, d))
    }

    fn parse_element(&mut self) -> Result<QuadElem, QuadError> {
        // Bare surd forms: [+-] [R*] sqrt(D)
        let sign = if self.peek() == Some('-') && self.chars.get(self.pos + 1).map(|&(_, c)| c) == Some('s') {
            self.pos += 1;
            Sign::Negative
        } else if self.peek() == Some('+') && self.chars.get(self.pos + 1).map(|&(_, c)| c) == Some('s') {
            self.pos += 1;
            Sign::Positive
        } else {
            Sign::Positive
        };
        if self.at_sqrt() {
            let (b, d) = self.parse_surd_term(sign)?;
            return QuadElem::new(d, Rational::zero(), b).map_err(|e| self.err(e.to_string()));
        }

        let first = self.parse_rational()?;
        // `R*sqrt(D)` with no rational part
        if self.eat('*') {
            let d = self.parse_sqrt()?;
            return QuadElem::new(d, Rational::zero(), first).map_err(|e| self.err(e.to_string()));
        }
        match self.peek() {
            Some('+') | Some('-') => {
                let neg = self.bump() == Some('-');
                let (b, d) =
                    self.parse_surd_term(if neg { Sign::Negative } else { Sign::Positive })?;
                QuadElem::new(d, first, b).map_err(|e| self.err(e.to_string()))
            }
            None => Ok(QuadElem::from_rational(first)),
            _ => Err(self.err("unexpected trailing input")),
        }
    }

    fn parse_full(&mut self) -> Result<QuadElem, QuadError> {
        let e = self.parse_element()?;
        if self.pos != self.chars.len() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(e)
    }
}

impl FromStr for QuadElem {
    type Err = QuadError;

    fn from_str(s: &str) -> Result<QuadElem, QuadError> {
        Parser::new(s).parse_full()
    }
}

pub fn rational_from_ints(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> QuadElem {
        s.parse().unwrap()
    }

    #[test]
    fn unit_norm_product() {
        // (3+2*sqrt(2)) * (3-2*sqrt(2)) = 1
        let x = q("3 + 2*sqrt(2)");
        let y = q("3 - 2*sqrt(2)");
        assert_eq!(&x * &y, QuadElem::one());
    }

    #[test]
    fn additive_inverse() {
        let x = q("1 + sqrt(2)");
        let y = q("-1 - 1*sqrt(2)");
        assert!(x.checked_add(&y).unwrap().is_zero());
    }

    #[test]
    fn inv_of_generator() {
        // inv(1+4*sqrt(2)) = (-1+4*sqrt(2))/31, since N = 1 - 32 = -31
        let x = q("1 + 4*sqrt(2)");
        let inv = x.checked_inv().unwrap();
        let expected = q("-1/31 + 4/31*sqrt(2)");
        assert_eq!(inv, expected);
        assert_eq!(x.checked_mul(&inv).unwrap(), QuadElem::one());
    }

    #[test]
    fn conj_norm_trace_examples() {
        let x = q("1 + 4*sqrt(2)");
        assert_eq!(x.conj(), q("1 - 4*sqrt(2)"));
        assert_eq!(x.norm(), rational_from_ints(-31, 1));
        assert_eq!(x.trace(), rational_from_ints(2, 1));

        let five = q("5");
        assert_eq!(five.conj(), five);
        assert_eq!(five.norm(), rational_from_ints(25, 1));
        assert_eq!(five.trace(), rational_from_ints(10, 1));

        let x = q("1/2 + 1/2*sqrt(17)");
        assert_eq!(x.conj(), q("1/2 - 1/2*sqrt(17)"));
        assert_eq!(x.norm(), rational_from_ints(-4, 1));
        assert_eq!(x.trace(), rational_from_ints(1, 1));
    }

    #[test]
    fn surd_signs() {
        // F_3(3) = 39 - 21*sqrt(2) > 0
        assert_eq!(q("39 - 21*sqrt(2)").sign().unwrap(), Sign::Positive);
        // F_11(11) = 1551 - 1309*sqrt(2) < 0
        assert_eq!(q("1551 - 1309*sqrt(2)").sign().unwrap(), Sign::Negative);
        assert_eq!(QuadElem::zero().sign().unwrap(), Sign::Zero);
        assert_eq!(q("-1 + sqrt(2)").sign().unwrap(), Sign::Positive);
        assert_eq!(q("1 - sqrt(2)").sign().unwrap(), Sign::Negative);
        assert!(q("1 + sqrt(-1)").sign().is_err());
        assert_eq!(q("-7").sign().unwrap(), Sign::Negative);
    }

    #[test]
    fn min_poly_examples() {
        let (a2, a1, a0) = q("1 + sqrt(2)").min_poly();
        assert_eq!((a2, a1, a0), (BigInt::from(1), BigInt::from(-2), BigInt::from(-1)));
        let (a2, a1, a0) = q("1/2").min_poly();
        assert_eq!((a2, a1, a0), (BigInt::from(0), BigInt::from(2), BigInt::from(-1)));
        let (a2, a1, a0) = q("1/2 + 1/2*sqrt(17)").min_poly();
        assert_eq!((a2, a1, a0), (BigInt::from(1), BigInt::from(-1), BigInt::from(-4)));
    }

    #[test]
    fn rejects_bad_radicand() {
        assert!(QuadElem::new(12, Rational::zero(), Rational::one()).is_err());
        assert!(QuadElem::new(1, Rational::zero(), Rational::one()).is_err());
        assert!(QuadElem::new(0, Rational::zero(), Rational::one()).is_err());
        assert!(QuadElem::new(-4, Rational::zero(), Rational::one()).is_err());
        assert!("1 + 2*sqrt(8)".parse::<QuadElem>().is_err());
    }

    #[test]
    fn mixed_fields_rejected() {
        let x = q("sqrt(2)");
        let y = q("sqrt(3)");
        assert!(matches!(x.checked_add(&y), Err(QuadError::MixedFields(2, 3))));
    }

    #[test]
    fn zero_b_collapses_to_rational() {
        let x = q("3 + 0*sqrt(2)");
        assert!(x.is_rational());
        assert_eq!(x, q("3"));
        let y = q("1 + sqrt(2)") - q("0 + sqrt(2)");
        assert!(y.is_rational());
    }

    #[test]
    fn parse_error_diagnostics() {
        let e = "1/0".parse::<QuadElem>().unwrap_err();
        assert!(matches!(e, QuadError::Parse { .. }));
        assert!("1 +".parse::<QuadElem>().is_err());
        assert!("sqrt(2".parse::<QuadElem>().is_err());
        assert!("2x".parse::<QuadElem>().is_err());
    }

    #[test]
    fn arith_dispatcher() {
        let x = q("3 + 2*sqrt(2)");
        let y = q("3 - 2*sqrt(2)");
        assert_eq!(quad_arith(&x, Some(&y), ArithOp::Mul).unwrap(), QuadElem::one());
        assert_eq!(quad_arith(&x, None, ArithOp::Neg).unwrap(), x.checked_neg());
        assert!(quad_arith(&QuadElem::zero(), None, ArithOp::Inv).is_err());
        assert!(quad_arith(&x, Some(&QuadElem::zero()), ArithOp::Div).is_err());
        let (c, n, t) = conj_norm_trace(&q("1 + 4*sqrt(2)"));
        assert_eq!(c, q("1 - 4*sqrt(2)"));
        assert_eq!(n, rational_from_ints(-31, 1));
        assert_eq!(t, rational_from_ints(2, 1));
    }

    #[test]
    fn display_parse_round_trip() {
        for s in ["7", "-3/5", "0", "1 + 4*sqrt(2)", "-1/2 - 3/7*sqrt(17)", "0 + 1*sqrt(-11)"] {
            let x = q(s);
            let printed = x.to_string();
            assert_eq!(printed.parse::<QuadElem>().unwrap(), x, "round trip of {printed}");
        }
    }
}
