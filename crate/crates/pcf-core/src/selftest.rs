//! Seeded property suites behind the CLI self test. Each suite runs the
//! module-level invariants on pseudo-random inputs and reports the first
//! counterexample it finds.

use crate::cf::{
    check_expansion_invariants, convergents, evaluate, expand, ExpandOptions, ExpansionStatus,
};
use crate::certify::{
    certify_browkin, certify_imag_quad, certify_ruban, certify_sqrt2, euclidean_minimum_imag,
    matrix_norm_theta_check, Verdict,
};
use crate::floor::{build_repset, check_floor_axioms, floor, FloorSpec, RepSetKind};
use crate::height::weil_height_pow_d;
use crate::interval::{abs_embed, theta_interval, width_bits, Embedding, SurdInterval};
use crate::primes::{
    find_generator, padic_valuation, reduce_mod_p, split_type, GeneratorStrategy,
};
use crate::quad::{QuadElem, Rational, Sign};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, serde::Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub passed: bool,
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, Copy)]
pub struct SelftestConfig {
    pub seed: u64,
    pub n: usize,
    /// Deliberately corrupts one structural check to prove the harness
    /// detects violations.
    pub inject_fault: bool,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig { seed: 1, n: 50, inject_fault: false }
    }
}

struct Suite {
    name: &'static str,
    cases: usize,
    failure: Option<String>,
}

impl Suite {
    fn new(name: &'static str) -> Suite {
        Suite { name, cases: 0, failure: None }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(msg());
        }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            name: self.name.to_string(),
            cases: self.cases,
            passed: self.failure.is_none(),
            counterexample: self.failure,
        }
    }
}

pub fn rand_rational(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    let num = rng.gen_range(-bound..=bound);
    let den = rng.gen_range(1..=bound);
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rand_nonzero_rational(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    loop {
        let r = rand_rational(rng, bound);
        if !r.is_zero() {
            return r;
        }
    }
}

pub fn rand_quad(rng: &mut ChaCha8Rng, d: i64, bound: i64) -> QuadElem {
    let a = rand_rational(rng, bound);
    let b = rand_rational(rng, bound);
    if b.is_zero() {
        QuadElem::from_rational(a)
    } else {
        QuadElem::new(d, a, b).expect("valid radicand")
    }
}

pub fn rand_nonzero_quad(rng: &mut ChaCha8Rng, d: i64, bound: i64) -> QuadElem {
    loop {
        let q = rand_quad(rng, d, bound);
        if !q.is_zero() {
            return q;
        }
    }
}

fn rand_ring_integer(rng: &mut ChaCha8Rng, d: i64, bound: i64) -> QuadElem {
    let a = Rational::from_integer(BigInt::from(rng.gen_range(-bound..=bound)));
    let b = Rational::from_integer(BigInt::from(rng.gen_range(-bound..=bound)));
    if b.is_zero() {
        QuadElem::from_rational(a)
    } else {
        QuadElem::new(d, a, b).expect("valid radicand")
    }
}

fn exactmath_suite(cfg: &SelftestConfig) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xE1);
    let mut suite = Suite::new("exactmath");
    let ds = [2i64, 3, 17, -1, -11];
    for _ in 0..cfg.n {
        let d = ds[rng.gen_range(0..ds.len())];
        let x = rand_nonzero_quad(&mut rng, d, 40);
        let inv = x.checked_inv().unwrap();
        suite.check(x.checked_mul(&inv).unwrap() == QuadElem::one(), || {
            format!("inv*mul identity fails for {x}")
        });
        let printed = x.to_string();
        suite.check(printed.parse::<QuadElem>().unwrap() == x, || {
            format!("print/parse round trip fails for {printed}")
        });
    }
    // surd_sign agrees with the interval embedding
    let width = width_bits(80);
    let real_ds = [2i64, 3, 17];
    for _ in 0..(cfg.n * 20) {
        let d = real_ds[rng.gen_range(0..real_ds.len())];
        let x = rand_quad(&mut rng, d, 60);
        let sign = x.sign().unwrap();
        let mut w = width.clone();
        let mut verdict = None;
        for _ in 0..8 {
            let iv = crate::interval::embed(&x, Embedding::Id, &w).unwrap();
            if iv.lo.is_positive() {
                verdict = Some(Sign::Positive);
                break;
            }
            if iv.hi.is_negative() {
                verdict = Some(Sign::Negative);
                break;
            }
            if iv.exact {
                verdict = Some(Sign::of_rational(&iv.lo));
                break;
            }
            w /= Rational::from_integer(BigInt::from(1u128 << 64));
        }
        // only zero refuses to separate from zero
        let verdict = verdict.unwrap_or(Sign::Zero);
        suite.check(verdict == sign, || format!("surd_sign disagrees with embedding for {x}"));
    }
    // height properties over Q, exact
    for _ in 0..cfg.n {
        let x = rand_nonzero_rational(&mut rng, 500);
        let y = rand_nonzero_rational(&mut rng, 500);
        let hx = weil_height_pow_d(&QuadElem::from_rational(x.clone())).value_pow_d;
        let hy = weil_height_pow_d(&QuadElem::from_rational(y.clone())).value_pow_d;
        let hxy = weil_height_pow_d(&QuadElem::from_rational(&x * &y)).value_pow_d;
        let hsum = weil_height_pow_d(&QuadElem::from_rational(&x + &y)).value_pow_d;
        suite.check(hxy.lo <= &hx.hi * &hy.hi, || format!("H(xy) > H(x)H(y) for {x}, {y}"));
        let two = Rational::from_integer(BigInt::from(2));
        suite.check(hsum.lo <= two * &hx.hi * &hy.hi, || {
            format!("H(x+y) > 2H(x)H(y) for {x}, {y}")
        });
        let k = rng.gen_range(1..4i64);
        let mut pow = Rational::one();
        for _ in 0..k {
            pow *= &x;
        }
        let hpow = weil_height_pow_d(&QuadElem::from_rational(pow)).value_pow_d;
        let mut expect = Rational::one();
        for _ in 0..k {
            expect *= &hx.lo;
        }
        suite.check(hpow.lo == expect, || format!("H(x^{k}) != H(x)^{k} for {x}"));
    }
    // Galois invariance on surds
    for _ in 0..cfg.n {
        let x = rand_nonzero_quad(&mut rng, 2, 30);
        let hx = weil_height_pow_d(&x).value_pow_d;
        let hc = weil_height_pow_d(&x.conj()).value_pow_d;
        suite.check(hx.intersects(&hc), || format!("H not Galois invariant at {x}"));
        if hx.exact && hc.exact {
            suite.check(hx.lo == hc.lo, || format!("exact H differs under conjugation at {x}"));
        }
    }
    suite.finish()
}

fn primelab_suite(cfg: &SelftestConfig) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xB1);
    let mut suite = Suite::new("primelab");
    let primes = [
        split_type(7, 2).unwrap(),   // split
        split_type(5, 2).unwrap(),   // inert
        split_type(17, 17).unwrap(), // ramified
        split_type(3, -11).unwrap(), // split, half-integral ring
    ];
    for prime in &primes {
        let d = prime.d.unwrap();
        for _ in 0..cfg.n {
            let x = rand_nonzero_quad(&mut rng, d, 30);
            let y = rand_nonzero_quad(&mut rng, d, 30);
            let vx = padic_valuation(&x, prime).unwrap().unwrap();
            let vy = padic_valuation(&y, prime).unwrap().unwrap();
            let vxy = padic_valuation(&x.checked_mul(&y).unwrap(), prime).unwrap().unwrap();
            suite.check(vxy == vx + vy, || {
                format!("v(xy) != v(x)+v(y) at p={} for {x}, {y}", prime.p)
            });
            let s = x.checked_add(&y).unwrap();
            let vs = padic_valuation(&s, prime).unwrap();
            suite.check(vs.map_or(true, |v| v >= vx.min(vy)), || {
                format!("ultrametric fails at p={} for {x}, {y}", prime.p)
            });
        }
    }
    // split case: valuations at the two primes sum to v_p(N)
    let p7 = split_type(7, 2).unwrap();
    for _ in 0..cfg.n {
        let x = rand_nonzero_quad(&mut rng, 2, 30);
        let v1 = padic_valuation(&x, &p7).unwrap().unwrap();
        let v2 = padic_valuation(&x.conj(), &p7).unwrap().unwrap();
        let vn = crate::primes::vp_rational(&x.norm(), 7).unwrap();
        suite.check(v1 + v2 == vn, || format!("split valuations do not sum to v_p(N) at {x}"));
    }
    // residue reduction is a ring homomorphism on integral elements
    let p3 = split_type(3, 2).unwrap();
    for _ in 0..cfg.n {
        let x = rand_ring_integer(&mut rng, 2, 30);
        let y = rand_ring_integer(&mut rng, 2, 30);
        let rx = reduce_mod_p(&x, &p3).unwrap();
        let ry = reduce_mod_p(&y, &p3).unwrap();
        let prod = reduce_mod_p(&x.checked_mul(&y).unwrap(), &p3).unwrap();
        let sum = reduce_mod_p(&x.checked_add(&y).unwrap(), &p3).unwrap();
        suite.check(rx.mul(&ry) == prod, || format!("reduce not multiplicative at {x}, {y}"));
        suite.check(rx.add(&ry) == sum, || format!("reduce not additive at {x}, {y}"));
    }
    // generators: |N(g)| = p^f and v_P(g) = e
    for (p, d) in [(7u64, 2i64), (31, 2), (3, -11), (5, -1), (17, 17), (13, 17)] {
        let prime = split_type(p, d).unwrap();
        match find_generator(&prime, &GeneratorStrategy::MinimizeSumAbs) {
            Ok(g) => {
                let norm_ok =
                    g.norm().abs() == Rational::from_integer(BigInt::from(prime.ideal_norm()));
                suite.check(norm_ok, || format!("|N(g)| != p^f for p={p}, D={d}"));
                let v = padic_valuation(&g, &prime).unwrap().unwrap();
                suite.check(v == 1, || format!("v_P(g) != 1 for p={p}, D={d}"));
            }
            Err(e) => suite.check(false, || format!("no generator for p={p}, D={d}: {e}")),
        }
    }
    // fundamental units
    for d in [2i64, 3, 5, 17, 19, 73] {
        let u = crate::primes::fundamental_unit(d).unwrap();
        suite.check(u.norm().abs() == Rational::one(), || format!("|N(u)| != 1 for D={d}"));
        let above_one =
            u.checked_sub(&QuadElem::one()).unwrap().sign().unwrap() == Sign::Positive;
        suite.check(above_one, || format!("fundamental unit not > 1 for D={d}"));
    }
    suite.finish()
}

fn floor_specs_for_suite() -> Vec<FloorSpec> {
    let mut specs = vec![FloorSpec::browkin(5).unwrap(), FloorSpec::ruban(7).unwrap()];
    // special type over Q(sqrt 2) at inert 3 with Browkin-like digits
    let mut p3 = split_type(3, 2).unwrap();
    p3.generator = Some(QuadElem::from_int(3));
    let rs = build_repset(RepSetKind::BrowkinLike, &p3, None).unwrap();
    specs.push(FloorSpec::special(p3.clone(), rs).unwrap());
    specs.push(FloorSpec::sqrt2(p3).unwrap());
    let mut p7 = split_type(7, 2).unwrap();
    p7.generator = find_generator(&p7, &GeneratorStrategy::MinimizeSumAbs).ok();
    specs.push(FloorSpec::sqrt2(p7).unwrap());
    let mut e17 = split_type(3, 17).unwrap();
    e17.generator = Some(QuadElem::from_int(3));
    specs.push(FloorSpec::euclidean(e17, None).unwrap());
    let mut em1 = split_type(7, -1).unwrap();
    em1.generator = Some(QuadElem::from_int(7));
    specs.push(FloorSpec::euclidean(em1, None).unwrap());
    specs
}

fn floorlib_suite(cfg: &SelftestConfig) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xF1);
    let mut suite = Suite::new("floorlib");
    for spec in floor_specs_for_suite() {
        let d = spec.field_d();
        let pi = spec.pi();
        for _ in 0..cfg.n {
            let alpha = match d {
                None => QuadElem::from_rational(rand_rational(&mut rng, 400)),
                Some(d) => rand_quad(&mut rng, d, 40),
            };
            let value = match floor(&alpha, &spec) {
                Ok(r) => r.value,
                Err(e) => {
                    suite.check(false, || format!("floor failed on {alpha}: {e}"));
                    continue;
                }
            };
            let viol = check_floor_axioms(&alpha, &value, &spec).unwrap();
            suite.check(viol.is_empty(), || {
                format!("axioms fail for {} at {alpha}: {viol:?}", spec.variant.name())
            });
            // idempotence s(s(alpha)) = s(alpha)
            let again = floor(&value, &spec).unwrap().value;
            suite.check(again == value, || {
                format!("floor not idempotent for {} at {alpha}", spec.variant.name())
            });
            // constant on cosets: perturb by pi * (integral element)
            let z = match d {
                None => QuadElem::from_int(rng.gen_range(-20..=20i64)),
                Some(d) => rand_ring_integer(&mut rng, d, 20),
            };
            let alpha2 = alpha.checked_add(&pi.checked_mul(&z).unwrap()).unwrap();
            let value2 = floor(&alpha2, &spec).unwrap().value;
            suite.check(value2 == value, || {
                format!("floor not constant on cosets for {} at {alpha}", spec.variant.name())
            });
        }
    }
    // digit uniqueness: re-expanding s(alpha) reproduces the digits
    let spec = FloorSpec::browkin(5).unwrap();
    for _ in 0..cfg.n {
        let alpha = QuadElem::from_rational(rand_rational(&mut rng, 500));
        let r1 = floor(&alpha, &spec).unwrap();
        let r2 = floor(&r1.value, &spec).unwrap();
        suite.check(r1.digits == r2.digits, || format!("digit re-expansion differs at {alpha}"));
    }
    // Browkin fixes every element already in image form
    for _ in 0..cfg.n {
        let mut v = QuadElem::zero();
        let p = 5i64;
        let mut pw = Rational::one();
        for _ in 0..rng.gen_range(1..5) {
            let c = rng.gen_range(-2..=2i64);
            v = v
                .checked_add(&QuadElem::from_rational(
                    Rational::from_integer(BigInt::from(c)) * &pw,
                ))
                .unwrap();
            pw /= Rational::from_integer(BigInt::from(p));
        }
        let r = floor(&v, &spec).unwrap();
        suite.check(r.value == v, || format!("Browkin floor moved image element {v}"));
    }
    suite.finish()
}

fn cfcore_suite(cfg: &SelftestConfig) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xCF);
    let mut suite = Suite::new("cfcore");
    let opts = ExpandOptions { max_steps: 10_000, record_complete: true };
    // round trip over Q with Browkin
    for i in 0..(cfg.n * 4).max(5) {
        let p = [3u64, 5, 7, 11, 13][i % 5];
        let spec = FloorSpec::browkin(p).unwrap();
        let alpha = QuadElem::from_rational(rand_rational(&mut rng, 100_000));
        let mut e = expand(&alpha, &spec, opts).unwrap();
        suite.check(e.is_finite(), || format!("Browkin expansion not finite at {alpha}, p={p}"));
        if cfg.inject_fault && i == 1 && e.len() >= 2 {
            // negative control: a corrupted quotient must be flagged
            e.partial_quotients[1] =
                e.partial_quotients[1].checked_add(&QuadElem::one()).unwrap();
        }
        if e.is_finite() && e.len() >= 2 {
            let back = evaluate(&e.partial_quotients).unwrap();
            let report = check_expansion_invariants(&e, &alpha, &spec.prime).unwrap();
            suite.check(back == alpha && report.passed(), || {
                format!(
                    "round trip/invariants fail at {alpha}, p={p}: {:?}",
                    report.violations
                )
            });
        } else if e.is_finite() {
            suite.check(evaluate(&e.partial_quotients).unwrap() == alpha, || {
                format!("round trip fails at {alpha}, p={p}")
            });
        }
    }
    // round trip over Q(sqrt 2) with a certified type
    let cert = certify_sqrt2(7, 256).unwrap();
    let mut p7 = split_type(7, 2).unwrap();
    p7.generator = Some(cert.generator.clone());
    let spec2 = FloorSpec::sqrt2(p7).unwrap();
    for _ in 0..cfg.n * 2 {
        let alpha = rand_quad(&mut rng, 2, 60);
        let e = expand(&alpha, &spec2, opts).unwrap();
        suite.check(e.is_finite(), || format!("sqrt2 expansion not finite at {alpha}"));
        if e.is_finite() {
            suite.check(evaluate(&e.partial_quotients).unwrap() == alpha, || {
                format!("sqrt2 round trip fails at {alpha}")
            });
        }
        let report = check_expansion_invariants(&e, &alpha, &spec2.prime).unwrap();
        suite.check(report.passed(), || {
            format!("sqrt2 invariants fail at {alpha}: {:?}", report.violations)
        });
    }
    // Ruban periodicity of negative rationals: derived tail (p^2-1)/p
    for &p in &[3u64, 5, 7] {
        let spec = FloorSpec::ruban(p).unwrap();
        let tail =
            QuadElem::from_rational(Rational::new(BigInt::from(p * p - 1), BigInt::from(p)));
        for _ in 0..cfg.n / 3 {
            let alpha = QuadElem::from_rational(-rand_nonzero_rational(&mut rng, 2000).abs());
            let e = expand(&alpha, &spec, opts).unwrap();
            match e.status {
                ExpansionStatus::Finite => {}
                ExpansionStatus::Periodic { preperiod, period } => {
                    suite.check(period == 1, || format!("Ruban period != 1 at {alpha}, p={p}"));
                    let rec = &e.partial_quotients[preperiod];
                    suite.check(rec == &tail, || {
                        format!("Ruban tail quotient {rec} != (p^2-1)/p at {alpha}, p={p}")
                    });
                    let cq = e.complete_quotients.as_ref().unwrap();
                    suite.check(cq[preperiod] == cq[preperiod + period], || {
                        format!("periodicity detection unsound at {alpha}, p={p}")
                    });
                }
                ExpansionStatus::Truncated { .. } => {
                    suite.check(false, || format!("Ruban truncated at {alpha}, p={p}"));
                }
            }
        }
    }
    // convergent gap valuations
    let spec = FloorSpec::browkin(5).unwrap();
    for _ in 0..cfg.n / 2 {
        let alpha = QuadElem::from_rational(rand_rational(&mut rng, 100_000));
        let e = expand(&alpha, &spec, opts).unwrap();
        if e.len() < 2 {
            continue;
        }
        let rows = convergents(&e.partial_quotients, &alpha).unwrap();
        for n in 1..rows.len() {
            let gap = rows[n].q_n.checked_sub(&rows[n - 1].q_n).unwrap();
            if gap.is_zero() {
                continue;
            }
            let v_gap = padic_valuation(&gap, &spec.prime).unwrap().unwrap();
            let vb_n = padic_valuation(&rows[n].b_n, &spec.prime).unwrap().unwrap();
            let vb_n1 = padic_valuation(&rows[n - 1].b_n, &spec.prime).unwrap().unwrap();
            suite.check(v_gap == -vb_n - vb_n1, || {
                format!("|Q_n - Q_(n-1)| identity fails at {alpha}")
            });
        }
    }
    suite.finish()
}

fn certify_suite(cfg: &SelftestConfig) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xCE);
    let mut suite = Suite::new("certify");
    for p in crate::certify::odd_primes_upto(97) {
        let cert = certify_browkin(p).unwrap();
        suite.check(cert.verdict == Verdict::CffCertified, || {
            format!("Browkin not certified at p={p}")
        });
    }
    for p in crate::certify::odd_primes_upto(50) {
        let cert = certify_ruban(p).unwrap();
        suite.check(cert.verdict == Verdict::Unknown, || {
            format!("Ruban unexpectedly certified at p={p}")
        });
    }
    for d in [-1i64, -2, -3, -7, -11] {
        suite.check(euclidean_minimum_imag(d).unwrap() < Rational::one(), || {
            format!("M(K) >= 1 for D={d}")
        });
    }
    // theta monotonicity on interval enclosures
    let w = width_bits(64);
    for _ in 0..cfg.n {
        let a = rand_rational(&mut rng, 1000).abs();
        let b = &a + rand_rational(&mut rng, 1000).abs();
        let ta = theta_interval(&SurdInterval::exact(a.clone()), &w);
        let tb = theta_interval(&SurdInterval::exact(b.clone()), &w);
        suite.check(ta.lo <= tb.hi, || format!("theta not monotone at {a} <= {b}"));
    }
    // every odd prime through 199, covering all four branches
    for p in crate::certify::odd_primes_upto(199) {
        let cert = certify_sqrt2(p, 256).unwrap();
        suite.check(cert.certificate.verdict == Verdict::CffCertified, || {
            format!("Q(sqrt2) not certified at p={p}")
        });
    }
    // soundness: a certified imaginary-quadratic type expands to Finite
    let cert = certify_imag_quad(-1, 3, false).unwrap();
    suite.check(cert.verdict == Verdict::CffCertified, || "(-1, 3) not certified".to_string());
    let mut p3 = split_type(3, -1).unwrap();
    p3.generator = find_generator(&p3, &GeneratorStrategy::MinimizeSumAbs).ok();
    let spec = FloorSpec::euclidean(p3, None).unwrap();
    let opts = ExpandOptions { max_steps: 10_000, record_complete: false };
    for _ in 0..cfg.n * 6 {
        let alpha = rand_quad(&mut rng, -1, 60);
        let e = expand(&alpha, &spec, opts).unwrap();
        suite.check(e.is_finite(), || {
            format!("certified Gaussian type fails to terminate at {alpha}")
        });
    }
    // matrix-norm oracle agreement on random quotients
    for _ in 0..cfg.n.min(40) {
        let spec = FloorSpec::browkin(7).unwrap();
        let alpha = QuadElem::from_rational(rand_rational(&mut rng, 5000));
        let e = expand(&alpha, &spec, opts).unwrap();
        for q in e.partial_quotients.iter().take(3) {
            let rep = matrix_norm_theta_check(q, Embedding::Id, &w).unwrap();
            suite.check(rep.agree, || format!("matrix norm oracle disagrees at {q}"));
        }
    }
    // |x| at Id equals |conj x| at Conj
    for _ in 0..cfg.n {
        let x = rand_nonzero_quad(&mut rng, 2, 30);
        let id = abs_embed(&x, Embedding::Id, &w);
        let cj = abs_embed(&x.conj(), Embedding::Conj, &w);
        suite.check(id.intersects(&cj), || {
            format!("|x| at Id differs from |conj(x)| at Conj for {x}")
        });
    }
    suite.finish()
}

/// Runs every suite at the configured size; deterministic for a fixed
/// (seed, n).
pub fn run_all(cfg: &SelftestConfig) -> Vec<SuiteResult> {
    vec![
        exactmath_suite(cfg),
        primelab_suite(cfg),
        floorlib_suite(cfg),
        cfcore_suite(cfg),
        certify_suite(cfg),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_run_passes() {
        let cfg = SelftestConfig { seed: 42, n: 12, inject_fault: false };
        let results = run_all(&cfg);
        for r in &results {
            assert!(r.passed, "{}: {:?}", r.name, r.counterexample);
        }
    }

    #[test]
    fn injected_fault_is_detected() {
        let cfg = SelftestConfig { seed: 42, n: 12, inject_fault: true };
        let results = run_all(&cfg);
        assert!(results.iter().any(|r| !r.passed));
        let bad = results.iter().find(|r| !r.passed).unwrap();
        assert!(bad.counterexample.is_some());
    }

    #[test]
    fn deterministic_output() {
        let cfg = SelftestConfig { seed: 7, n: 8, inject_fault: false };
        let a = serde_json::to_string(&run_all(&cfg)).unwrap();
        let b = serde_json::to_string(&run_all(&cfg)).unwrap();
        assert_eq!(a, b);
    }
}
