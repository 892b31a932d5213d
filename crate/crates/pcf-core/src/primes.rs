//! Prime-ideal machinery for quadratic fields: splitting types, residue
//! fields, P-adic valuations, Hensel lifting of square roots, fundamental
//! units, and generator search with unit normalization.

use crate::interval::{abs_embed, sqrt_enclosure, Embedding};
use crate::quad::{is_squarefree, QuadElem, Rational, Sign};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum PrimeError {
    #[error("p = {0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("{0} is not a valid radicand (must be squarefree, not 0 or 1)")]
    BadRadicand(i64),
    #[error("{0} is not a quadratic residue mod {1}")]
    NotResidue(i64, u64),
    #[error("element is not P-integral")]
    NotIntegral,
    #[error("element lives in the wrong field for this prime ideal")]
    FieldMismatch,
    #[error("no generator found within the search bound (|y| <= {0})")]
    NoGenerator(u64),
    #[error("generator strategy rejected the supplied element: {0}")]
    BadGenerator(String),
    #[error("window strategy could not place a generator in the window")]
    EmptyWindow,
    #[error(transparent)]
    Quad(#[from] crate::quad::QuadError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
    /// The rational prime (p) of Z, for types over K = Q.
    Rational,
}

impl std::fmt::Display for Splitting {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Splitting::Split => "split",
            Splitting::Inert => "inert",
            Splitting::Ramified => "ramified",
            Splitting::Rational => "rational",
        };
        f.write_str(s)
    }
}

/// A prime ideal of O_K above an odd rational prime p, for K = Q(sqrt(D))
/// (or K = Q when `d` is absent). Split primes are anchored to the
/// canonical Hensel root: P = (p, sqrt(D) - r) with r the smallest
/// nonnegative square root of D mod p; the conjugate prime is always
/// derived from the other root, never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeIdeal {
    pub p: u64,
    pub d: Option<i64>,
    pub splitting: Splitting,
    pub e: u8,
    pub f: u8,
    pub generator: Option<QuadElem>,
    /// (r, k) with r^2 = D mod p^k, r = canonical base root mod p.
    pub hensel_root: Option<(BigInt, u32)>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut f = 3u64;
    while f * f <= n {
        if n % f == 0 {
            return false;
        }
        f += 2;
    }
    true
}

fn check_odd_prime(p: u64) -> Result<(), PrimeError> {
    if p == 2 || !is_prime(p) {
        return Err(PrimeError::NotOddPrime(p));
    }
    Ok(())
}

/// Legendre symbol (a/p) for odd prime p.
pub fn legendre(a: i64, p: u64) -> i64 {
    let pm = p as i64;
    let mut r = a % pm;
    if r < 0 {
        r += pm;
    }
    if r == 0 {
        return 0;
    }
    let mut result: u64 = 1;
    let mut base = r as u64 % p;
    let mut exp = (p - 1) / 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    if result == 1 {
        1
    } else {
        -1
    }
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    // extended Euclid; p prime, a not 0 mod p
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (p as i128, (a % p) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "inverse of non-unit");
    (t.rem_euclid(p as i128)) as u64
}

impl PrimeIdeal {
    /// The rational prime (p) for types over Q.
    pub fn rational_prime(p: u64) -> Result<PrimeIdeal, PrimeError> {
        check_odd_prime(p)?;
        Ok(PrimeIdeal {
            p,
            d: None,
            splitting: Splitting::Rational,
            e: 1,
            f: 1,
            generator: Some(QuadElem::from_int(p as i64)),
            hensel_root: None,
        })
    }

    pub fn d_v0(&self) -> u8 {
        self.e * self.f
    }

    /// N(P) = p^f.
    pub fn ideal_norm(&self) -> u64 {
        self.p.pow(self.f as u32)
    }

    pub fn generator(&self) -> Result<&QuadElem, PrimeError> {
        self.generator
            .as_ref()
            .ok_or_else(|| PrimeError::BadGenerator("no generator attached".into()))
    }
}

/// Splitting of the odd prime p in Q(sqrt(D)), decided by the Kronecker
/// symbol of the field discriminant (D if D = 1 mod 4, else 4D).
pub fn split_type(p: u64, d: i64) -> Result<PrimeIdeal, PrimeError> {
    check_odd_prime(p)?;
    if d == 0 || d == 1 || !is_squarefree(d) {
        return Err(PrimeError::BadRadicand(d));
    }
    let disc: i64 = if d.rem_euclid(4) == 1 { d } else { 4 * d };
    let (splitting, e, f, hensel) = if disc % (p as i64) == 0 {
        (Splitting::Ramified, 2u8, 1u8, None)
    } else {
        match legendre(d, p) {
            1 => {
                let r = sqrt_mod_hensel(d, p, 1)?;
                (Splitting::Split, 1, 1, Some((r, 1u32)))
            }
            _ => (Splitting::Inert, 1, 2, None),
        }
    };
    Ok(PrimeIdeal { p, d: Some(d), splitting, e, f, generator: None, hensel_root: hensel })
}

/// r with r^2 = D mod p^k and r congruent to the canonical base root
/// (smallest nonnegative root mod p). Deterministic.
pub fn sqrt_mod_hensel(d: i64, p: u64, k: u32) -> Result<BigInt, PrimeError> {
    check_odd_prime(p)?;
    if d.rem_euclid(p as i64) == 0 {
        return Err(PrimeError::NotResidue(d, p));
    }
    let dm = d.rem_euclid(p as i64) as u64;
    let mut base = None;
    for r in 0..p {
        if r * r % p == dm {
            base = Some(r);
            break;
        }
    }
    let base = base.ok_or(PrimeError::NotResidue(d, p))?;
    let mut r = BigInt::from(base);
    let mut modulus = BigInt::from(p);
    let d_big = BigInt::from(d);
    for _ in 1..k {
        let next_modulus = &modulus * BigInt::from(p);
        // Newton step: r <- r - (r^2 - d) * inv(2r) mod p^(j+1)
        let f = (&r * &r - &d_big).mod_floor(&next_modulus);
        let deriv = (BigInt::from(2) * &r).mod_floor(&next_modulus);
        let inv = mod_inverse_big(&deriv, &next_modulus);
        r = (&r - f * inv).mod_floor(&next_modulus);
        modulus = next_modulus;
    }
    Ok(r)
}

fn mod_inverse_big(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

/// p-adic valuation of a nonzero big integer.
fn vp_bigint(mut n: BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut v = 0i64;
    loop {
        let (q, r) = n.div_rem(&p);
        if r.is_zero() {
            v += 1;
            n = q;
        } else {
            return v;
        }
    }
}

/// p-adic valuation of a nonzero rational.
pub fn vp_rational(x: &Rational, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(vp_bigint(x.numer().clone(), p) - vp_bigint(x.denom().clone(), p))
}

/// v_P(x); None encodes +infinity (x = 0).
pub fn padic_valuation(x: &QuadElem, prime: &PrimeIdeal) -> Result<Option<i64>, PrimeError> {
    if x.is_zero() {
        return Ok(None);
    }
    if let Some(r) = x.as_rational() {
        let v = vp_rational(r, prime.p).unwrap();
        return Ok(Some(v * prime.e as i64));
    }
    let (xd, pd) = (x.d().unwrap(), prime.d);
    if pd != Some(xd) {
        return Err(PrimeError::FieldMismatch);
    }
    match prime.splitting {
        Splitting::Rational => Err(PrimeError::FieldMismatch),
        Splitting::Inert => {
            let v = vp_rational(&x.norm(), prime.p).unwrap();
            debug_assert!(v % 2 == 0);
            Ok(Some(v / 2))
        }
        Splitting::Ramified => Ok(Some(vp_rational(&x.norm(), prime.p).unwrap())),
        Splitting::Split => {
            // clear denominators: x = (U + V sqrt(D)) / w
            let w = x.coord_a().denom().lcm(x.coord_b().denom());
            let wr = Rational::from_integer(w.clone());
            let u = (x.coord_a() * &wr).to_integer();
            let v = (x.coord_b() * &wr).to_integer();
            let vw = vp_bigint(w, prime.p);
            let norm = &u * &u - BigInt::from(xd) * &v * &v;
            let bound = vp_bigint(norm, prime.p);
            let k = (bound + 1) as u32;
            let r = sqrt_mod_hensel(xd, prime.p, k)?;
            let modulus = BigInt::from(prime.p).pow(k);
            let t = (&u + &v * r).mod_floor(&modulus);
            let vt = if t.is_zero() { bound } else { vp_bigint(t, prime.p).min(bound) };
            Ok(Some(vt - vw))
        }
    }
}

/// An element of the residue field O_K/P: x0 + x1*omega, with omega the
/// image of sqrt(D) (x1 = 0 unless P is inert, where the field is
/// F_p[omega]/(omega^2 - D)).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResidueElem {
    pub x0: u64,
    pub x1: u64,
    p: u64,
    d_mod_p: u64,
}

impl ResidueElem {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.x0 == 0 && self.x1 == 0
    }

    pub fn add(&self, other: &ResidueElem) -> ResidueElem {
        debug_assert_eq!(self.p, other.p);
        ResidueElem {
            x0: (self.x0 + other.x0) % self.p,
            x1: (self.x1 + other.x1) % self.p,
            p: self.p,
            d_mod_p: self.d_mod_p,
        }
    }

    pub fn mul(&self, other: &ResidueElem) -> ResidueElem {
        debug_assert_eq!(self.p, other.p);
        let p = self.p as u128;
        let (a, b) = (self.x0 as u128, self.x1 as u128);
        let (c, d) = (other.x0 as u128, other.x1 as u128);
        let dm = self.d_mod_p as u128;
        ResidueElem {
            x0: ((a * c + b * d % p * dm) % p) as u64,
            x1: ((a * d + b * c) % p) as u64,
            p: self.p,
            d_mod_p: self.d_mod_p,
        }
    }
}

fn reduce_rational_mod_p(r: &Rational, p: u64) -> Result<u64, PrimeError> {
    let pb = BigInt::from(p);
    let den = r.denom().mod_floor(&pb);
    if den.is_zero() {
        return Err(PrimeError::NotIntegral);
    }
    let num = r.numer().mod_floor(&pb).to_u64().unwrap();
    let den = den.to_u64().unwrap();
    Ok(num % p * inv_mod(den, p) % p)
}

/// Image of a P-integral element in the residue field.
pub fn reduce_mod_p(x: &QuadElem, prime: &PrimeIdeal) -> Result<ResidueElem, PrimeError> {
    let p = prime.p;
    let d_mod_p = prime
        .d
        .map(|d| d.rem_euclid(p as i64) as u64)
        .unwrap_or(0);
    let zero = ResidueElem { x0: 0, x1: 0, p, d_mod_p };
    if x.is_zero() {
        return Ok(zero);
    }
    match (x.d(), prime.d) {
        (None, _) => {}
        (Some(xd), Some(pd)) if xd == pd => {}
        _ => return Err(PrimeError::FieldMismatch),
    }
    match prime.splitting {
        Splitting::Rational => {
            let r = x.as_rational().ok_or(PrimeError::FieldMismatch)?;
            Ok(ResidueElem { x0: reduce_rational_mod_p(r, p)?, x1: 0, p, d_mod_p })
        }
        Splitting::Inert => {
            let x0 = reduce_rational_mod_p(x.coord_a(), p)?;
            let x1 = reduce_rational_mod_p(x.coord_b(), p)?;
            Ok(ResidueElem { x0, x1, p, d_mod_p })
        }
        Splitting::Ramified => {
            // sqrt(D) maps to 0; b may not contribute a pole
            if vp_rational(x.coord_b(), p).map_or(false, |v| v < 0) {
                return Err(PrimeError::NotIntegral);
            }
            let x0 = reduce_rational_mod_p(x.coord_a(), p)?;
            Ok(ResidueElem { x0, x1: 0, p, d_mod_p })
        }
        Splitting::Split => {
            if padic_valuation(x, prime)?.map_or(false, |v| v < 0) {
                return Err(PrimeError::NotIntegral);
            }
            let denom_pow = vp_rational(x.coord_a(), p).unwrap_or(0).min(0).unsigned_abs()
                + vp_rational(x.coord_b(), p).unwrap_or(0).min(0).unsigned_abs();
            let k = denom_pow as u32 + 1;
            let r = sqrt_mod_hensel(prime.d.expect("split prime has a field"), p, k)?;
            let s = x.coord_a() + x.coord_b() * Rational::from_integer(r);
            if vp_rational(&s, p).map_or(false, |v| v < 0) {
                return Err(PrimeError::NotIntegral);
            }
            Ok(ResidueElem { x0: reduce_rational_mod_p(&s, p)?, x1: 0, p, d_mod_p })
        }
    }
}

/// Fundamental unit of Z[sqrt(D)] for squarefree D > 1, via the classical
/// periodic continued fraction of sqrt(D). |N(u)| = 1 and u > 1. For
/// D = 1 mod 4 this may be a power of the O_K unit; sufficient for the
/// generator normalization used here.
pub fn fundamental_unit(d: i64) -> Result<QuadElem, PrimeError> {
    if d <= 1 || !is_squarefree(d) {
        return Err(PrimeError::BadRadicand(d));
    }
    let a0 = BigInt::from(d).sqrt();
    let (mut m, mut den, mut a) = (BigInt::zero(), BigInt::one(), a0.clone());
    let (mut h_prev, mut h) = (BigInt::one(), a0.clone());
    let (mut k_prev, mut k) = (BigInt::zero(), BigInt::one());
    loop {
        m = &den * &a - &m;
        den = (BigInt::from(d) - &m * &m) / &den;
        a = (&a0 + &m).div_floor(&den);
        if den.is_one() {
            let unit = QuadElem::new(
                d,
                Rational::from_integer(h.clone()),
                Rational::from_integer(k.clone()),
            )?;
            debug_assert!(unit.norm().abs().is_one());
            return Ok(unit);
        }
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
    }
}

/// Generator search strategy (real D normalizes by fundamental-unit
/// translates; imaginary D has only root-of-unity units).
#[derive(Debug, Clone)]
pub enum GeneratorStrategy {
    /// Use the supplied element after validating it generates P.
    FixedPi(QuadElem),
    /// Pick the unit translate minimizing |pi| + |pi^sigma|; ties broken by
    /// smaller |pi|, then by positive rational coordinate.
    MinimizeSumAbs,
    /// Place |pi| in the window (sqrt(t)/u, sqrt(t)] for t = N(P).
    WindowSqrtNorm,
    /// Place |pi| in (lo, hi] for explicit field elements lo < hi.
    Window { lo: QuadElem, hi: QuadElem },
}

fn try_solution(d: i64, u: &BigInt, v: &BigInt, half: bool) -> QuadElem {
    let den = if half { BigInt::from(2) } else { BigInt::one() };
    QuadElem::new(
        d,
        Rational::new(u.clone(), den.clone()),
        Rational::new(v.clone(), den),
    )
    .expect("valid radicand")
}

/// Solutions (up to conjugation/sign) of |N(x)| = target with bounded
/// sqrt-coordinate; includes half-integer coordinates when D = 1 mod 4.
fn norm_equation_solutions(d: i64, target: u64, y_bound: u64) -> Vec<QuadElem> {
    let mut out = Vec::new();
    let half_coords = d.rem_euclid(4) == 1;
    let target = BigInt::from(target);
    let d_big = BigInt::from(d);
    let scales: &[(bool, u32)] = if half_coords { &[(false, 1), (true, 4)] } else { &[(false, 1)] };
    for &(half, scale) in scales {
        let bound = if half { 2 * y_bound + 2 } else { y_bound };
        for v in 0..=bound {
            let v_big = BigInt::from(v);
            let dv2 = &d_big * &v_big * &v_big;
            for sign in [1i64, -1] {
                // u^2 = sign*scale*target + D v^2
                let rhs = BigInt::from(sign) * &target * BigInt::from(scale) + &dv2;
                if rhs.is_negative() {
                    continue;
                }
                let u = rhs.sqrt();
                if &u * &u != rhs {
                    continue;
                }
                if half && (&u - &v_big).mod_floor(&BigInt::from(2)).is_one() {
                    continue;
                }
                out.push(try_solution(d, &u, &v_big, half));
            }
        }
    }
    out
}

fn generates_this_prime(pi: &QuadElem, prime: &PrimeIdeal) -> Result<bool, PrimeError> {
    // a generator of P itself always has v_P = 1 (p has v_P = e)
    let v = padic_valuation(pi, prime)?.unwrap_or(0);
    if v != 1 {
        return Ok(false);
    }
    // |N(pi)| = p^f ensures the conjugate prime gets valuation 0
    let norm = pi.norm().abs();
    Ok(norm == Rational::from_integer(BigInt::from(prime.ideal_norm())))
}

fn abs_real(x: &QuadElem) -> QuadElem {
    x.abs().expect("real field element")
}

/// |pi| + |pi^sigma| for real D.
fn sum_abs(pi: &QuadElem) -> QuadElem {
    &abs_real(pi) + &abs_real(&pi.conj())
}

fn normalize_sign(pi: &QuadElem) -> QuadElem {
    // prefer the representative with positive rational coordinate,
    // falling back to positive sqrt-coordinate
    let a_sign = Sign::of_rational(pi.coord_a());
    let pick_neg = match a_sign {
        Sign::Negative => true,
        Sign::Zero => Sign::of_rational(pi.coord_b()) == Sign::Negative,
        Sign::Positive => false,
    };
    if pick_neg {
        pi.checked_neg()
    } else {
        pi.clone()
    }
}

/// Search bound on the sqrt-coordinate, derived from the fundamental unit
/// window (see module docs); failure beyond it is reported, never looped.
fn generator_search_bound(d: i64, target: u64) -> Result<u64, PrimeError> {
    let base = Rational::from_integer(BigInt::from(target)) / Rational::from_integer(BigInt::from(d.unsigned_abs()));
    let root = sqrt_enclosure(&base, &Rational::new(BigInt::one(), BigInt::from(16)))
        .expect("nonnegative");
    let unit_hi = if d > 1 {
        let u = fundamental_unit(d)?;
        abs_embed(&u, Embedding::Id, &Rational::new(BigInt::one(), BigInt::from(16))).hi
    } else {
        Rational::one()
    };
    let b = (unit_hi * root.hi).ceil().to_integer();
    Ok(b.to_u64().unwrap_or(u64::MAX).saturating_add(1))
}

/// Finds a generator of the (principal) prime ideal and normalizes it per
/// the strategy. Errors when the bounded search finds nothing.
pub fn find_generator(
    prime: &PrimeIdeal,
    strategy: &GeneratorStrategy,
) -> Result<QuadElem, PrimeError> {
    if prime.splitting == Splitting::Rational {
        return Ok(QuadElem::from_int(prime.p as i64));
    }
    let d = prime.d.expect("quadratic prime");
    if let GeneratorStrategy::FixedPi(pi) = strategy {
        if !generates_this_prime(pi, prime)? {
            return Err(PrimeError::BadGenerator(format!(
                "{pi} does not generate this prime (norm or valuation mismatch)"
            )));
        }
        return Ok(pi.clone());
    }
    let target = prime.ideal_norm();
    let y_bound = generator_search_bound(d, target)?;
    let candidates = norm_equation_solutions(d, target, y_bound);
    let mut base = None;
    for c in candidates {
        if generates_this_prime(&c, prime)? {
            base = Some(c);
            break;
        }
        let conj = c.conj();
        if generates_this_prime(&conj, prime)? {
            base = Some(conj);
            break;
        }
    }
    let base = base.ok_or(PrimeError::NoGenerator(y_bound))?;
    if d < 0 {
        // units are roots of unity; any generator works, keep it canonical
        return Ok(normalize_sign(&base));
    }
    let unit = fundamental_unit(d)?;
    match strategy {
        GeneratorStrategy::FixedPi(_) => unreachable!(),
        GeneratorStrategy::MinimizeSumAbs => {
            let inv_unit = unit.checked_inv()?;
            let mut best: Option<(QuadElem, QuadElem)> = None; // (pi, sum)
            let mut cur = base.clone();
            // walk down to small |pi| then enumerate upward translates
            for _ in 0..128 {
                let next = cur.checked_mul(&inv_unit)?;
                if abs_real(&next).cmp_real(&QuadElem::one())? == std::cmp::Ordering::Less {
                    break;
                }
                cur = next;
            }
            for _ in 0..128 {
                let s = sum_abs(&cur);
                let better = match &best {
                    None => true,
                    Some((bpi, bsum)) => match s.cmp_real(bsum).unwrap() {
                        std::cmp::Ordering::Less => true,
                        std::cmp::Ordering::Greater => false,
                        std::cmp::Ordering::Equal => {
                            abs_real(&cur).cmp_real(&abs_real(bpi)).unwrap()
                                == std::cmp::Ordering::Less
                        }
                    },
                };
                if better {
                    best = Some((cur.clone(), s));
                }
                // sums blow up once lambda passes the balance point
                let lam = abs_real(&cur);
                let enough = lam
                    .checked_mul(&lam)?
                    .cmp_real(&QuadElem::from_int((target * 4) as i64))?
                    == std::cmp::Ordering::Greater;
                if enough {
                    break;
                }
                cur = cur.checked_mul(&unit)?;
            }
            Ok(normalize_sign(&best.expect("nonempty walk").0))
        }
        GeneratorStrategy::WindowSqrtNorm => {
            let t = QuadElem::from_int(target as i64);
            let mut pi = abs_real(&base);
            let inv_unit = unit.checked_inv()?;
            // place pi in (sqrt(t)/u, sqrt(t)]: pi^2 <= t and (pi*u)^2 > t
            for _ in 0..256 {
                let sq = pi.checked_mul(&pi)?;
                if sq.cmp_real(&t)? == std::cmp::Ordering::Greater {
                    pi = pi.checked_mul(&inv_unit)?;
                    continue;
                }
                let up = pi.checked_mul(&unit)?;
                let up_sq = up.checked_mul(&up)?;
                if up_sq.cmp_real(&t)? != std::cmp::Ordering::Greater {
                    pi = up;
                    continue;
                }
                return Ok(pi);
            }
            Err(PrimeError::EmptyWindow)
        }
        GeneratorStrategy::Window { lo, hi } => {
            let mut pi = abs_real(&base);
            let inv_unit = unit.checked_inv()?;
            for _ in 0..256 {
                if pi.cmp_real(hi)? == std::cmp::Ordering::Greater {
                    pi = pi.checked_mul(&inv_unit)?;
                    continue;
                }
                if pi.cmp_real(lo)? != std::cmp::Ordering::Greater {
                    pi = pi.checked_mul(&unit)?;
                    continue;
                }
                return Ok(pi);
            }
            Err(PrimeError::EmptyWindow)
        }
    }
}
