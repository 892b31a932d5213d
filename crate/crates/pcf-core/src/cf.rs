//! The continued fraction engine: the expansion algorithm
//! a_n = s(alpha_n), alpha_{n+1} = 1/(alpha_n - a_n), convergents via the
//! three-term recurrences, back-evaluation, and the structural identities
//! as checkable reports.

use crate::floor::{floor, FloorError, FloorSpec};
use crate::primes::{padic_valuation, PrimeError, PrimeIdeal};
use crate::quad::{QuadElem, QuadError};
use std::collections::HashMap;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum CfError {
    #[error("empty quotient list")]
    Empty,
    #[error("zero denominator while folding the continued fraction (malformed quotients)")]
    ZeroFold,
    #[error("B_{0} = 0: convergent invariant violated")]
    ZeroConvergent(usize),
    #[error("expansion did not record complete quotients")]
    NoCompleteQuotients,
    #[error("expansion shorter than the requested depth")]
    TooShort,
    #[error(transparent)]
    Floor(#[from] FloorError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Prime(#[from] PrimeError),
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExpansionStatus {
    Finite,
    Periodic { preperiod: usize, period: usize },
    Truncated { max_steps: usize },
}

/// A computed expansion. For Periodic status the partial quotients cover
/// indices 0..preperiod+period and the complete quotients (when recorded)
/// carry one extra entry, the revisited quotient.
#[derive(Debug, Clone)]
pub struct Expansion {
    pub partial_quotients: Vec<QuadElem>,
    pub complete_quotients: Option<Vec<QuadElem>>,
    pub status: ExpansionStatus,
    pub steps: usize,
}

impl Expansion {
    pub fn len(&self) -> usize {
        self.partial_quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partial_quotients.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.status == ExpansionStatus::Finite
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ExpandOptions {
    pub max_steps: usize,
    pub record_complete: bool,
}

impl Default for ExpandOptions {
    fn default() -> Self {
        ExpandOptions { max_steps: 10_000, record_complete: false }
    }
}

/// Runs the expansion algorithm with exact arithmetic. Terminates Finite
/// when alpha_n = a_n, Periodic when a complete quotient recurs (exact
/// repetition of canonical forms), Truncated at max_steps.
pub fn expand(
    alpha: &QuadElem,
    spec: &FloorSpec,
    opts: ExpandOptions,
) -> Result<Expansion, CfError> {
    let mut cur = alpha.clone();
    let mut seen: HashMap<QuadElem, usize> = HashMap::new();
    let mut partial = Vec::new();
    let mut complete = if opts.record_complete { Some(Vec::new()) } else { None };
    let mut status = ExpansionStatus::Truncated { max_steps: opts.max_steps };
    for step in 0..opts.max_steps {
        if let Some(cq) = complete.as_mut() {
            cq.push(cur.clone());
        }
        if let Some(&first) = seen.get(&cur) {
            status = ExpansionStatus::Periodic { preperiod: first, period: step - first };
            break;
        }
        seen.insert(cur.clone(), step);
        let a = floor(&cur, spec)?.value;
        partial.push(a.clone());
        let rem = cur.checked_sub(&a)?;
        if rem.is_zero() {
            status = ExpansionStatus::Finite;
            break;
        }
        cur = rem.checked_inv()?;
    }
    let steps = partial.len();
    Ok(Expansion { partial_quotients: partial, complete_quotients: complete, status, steps })
}

/// Row n of the convergent table: A_n, B_n, Q_n = A_n/B_n, and
/// V_n = A_n - alpha B_n.
#[derive(Debug, Clone)]
pub struct ConvergentRow {
    pub n: usize,
    pub a_n: QuadElem,
    pub b_n: QuadElem,
    pub q_n: QuadElem,
    pub v_n: QuadElem,
}

/// Convergents by the recurrences A_n = a_n A_{n-1} + A_{n-2},
/// B_n = a_n B_{n-1} + B_{n-2} with seeds A_{-1} = 1, B_{-1} = 0.
pub fn convergents(
    quotients: &[QuadElem],
    alpha: &QuadElem,
) -> Result<Vec<ConvergentRow>, CfError> {
    if quotients.is_empty() {
        return Err(CfError::Empty);
    }
    let mut rows = Vec::with_capacity(quotients.len());
    let mut a_prev = QuadElem::one(); // A_{-1}
    let mut b_prev = QuadElem::zero(); // B_{-1}
    let mut a_prev2 = QuadElem::zero();
    let mut b_prev2 = QuadElem::one();
    for (n, q) in quotients.iter().enumerate() {
        let a_n = q.checked_mul(&a_prev)?.checked_add(&a_prev2)?;
        let b_n = q.checked_mul(&b_prev)?.checked_add(&b_prev2)?;
        if b_n.is_zero() {
            return Err(CfError::ZeroConvergent(n));
        }
        let q_n = a_n.checked_div(&b_n)?;
        let v_n = a_n.checked_sub(&alpha.checked_mul(&b_n)?)?;
        rows.push(ConvergentRow { n, a_n: a_n.clone(), b_n: b_n.clone(), q_n, v_n });
        a_prev2 = std::mem::replace(&mut a_prev, a_n);
        b_prev2 = std::mem::replace(&mut b_prev, b_n);
    }
    Ok(rows)
}

/// Folds [a0, a1, ..., an] from the right: a0 + 1/(a1 + 1/(... + 1/an)).
/// Inverse of expand on Finite expansions.
pub fn evaluate(quotients: &[QuadElem]) -> Result<QuadElem, CfError> {
    let mut it = quotients.iter().rev();
    let mut acc = it.next().ok_or(CfError::Empty)?.clone();
    for q in it {
        if acc.is_zero() {
            return Err(CfError::ZeroFold);
        }
        acc = q.checked_add(&acc.checked_inv()?)?;
    }
    Ok(acc)
}

/// Exact verification report for the structural identities of an
/// expansion with recorded complete quotients.
#[derive(Debug, Clone, Default)]
pub struct InvariantReport {
    pub checks: usize,
    pub violations: Vec<String>,
}

impl InvariantReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations.push(msg());
        }
    }
}

/// Verifies, exactly, for every available index:
/// (a) V_n = a_n V_{n-1} + V_{n-2};
/// (b) alpha_n V_{n-1} + V_{n-2} = 0;
/// (c, d) v_P(V_n) = sum_{j=1..n+1} -v_P(a_j) and the sign pattern
///        V_n = (-1)^(n+1) prod 1/alpha_j;
/// (e) alpha_n B_{n-1} + B_{n-2} = prod_{j<=n} alpha_j;
/// (f) alpha = (alpha_n A_{n-1} + A_{n-2})/(alpha_n B_{n-1} + B_{n-2});
/// (g) v_P(alpha_n) = v_P(a_n) < 0 for n >= 1;
/// plus v_P(B_n) = sum_{j=1..n} v_P(a_j) and det B_n = (-1)^(n-1).
pub fn check_expansion_invariants(
    exp: &Expansion,
    alpha: &QuadElem,
    prime: &PrimeIdeal,
) -> Result<InvariantReport, CfError> {
    let cq = exp.complete_quotients.as_ref().ok_or(CfError::NoCompleteQuotients)?;
    let pq = &exp.partial_quotients;
    let mut report = InvariantReport::default();
    if pq.is_empty() {
        return Ok(report);
    }
    let rows = convergents(pq, alpha)?;
    let n_rows = rows.len();
    let v_of = |x: &QuadElem| padic_valuation(x, prime);

    for (n, a) in pq.iter().enumerate().skip(1) {
        let va = v_of(a)?;
        report.check(va.map_or(false, |v| v <= -1), || format!("v_P(a_{n}) = {va:?} not <= -1"));
        if let Some(alpha_n) = cq.get(n) {
            let valn = v_of(alpha_n)?;
            report.check(valn == va, || {
                format!("(g) v_P(alpha_{n}) = {valn:?} != v_P(a_{n}) = {va:?}")
            });
        }
    }

    // seeds: V_{-1} = A_{-1} - alpha B_{-1} = 1
    let v_minus1 = QuadElem::one();
    for n in 1..n_rows {
        let v_n = &rows[n].v_n;
        let v_n1 = &rows[n - 1].v_n;
        let v_n2: &QuadElem = if n >= 2 { &rows[n - 2].v_n } else { &v_minus1 };
        let rhs = pq[n].checked_mul(v_n1)?.checked_add(v_n2)?;
        report.check(v_n == &rhs, || format!("(a) V recurrence fails at n = {n}"));
        if let Some(alpha_n) = cq.get(n) {
            let lhs = alpha_n.checked_mul(v_n1)?.checked_add(v_n2)?;
            report
                .check(lhs.is_zero(), || format!("(b) alpha_n V_(n-1) + V_(n-2) != 0 at n = {n}"));
        }
    }

    // (c, d): valuation and sign-product form of V_n for n <= len-2
    let mut prod_inv_alpha = QuadElem::one();
    let mut sum_neg_va: i64 = 0;
    for n in 0..n_rows.saturating_sub(1) {
        let alpha_next = match cq.get(n + 1) {
            Some(a) => a,
            None => break,
        };
        prod_inv_alpha = prod_inv_alpha.checked_mul(&alpha_next.checked_inv()?)?;
        sum_neg_va -= v_of(&pq[n + 1])?.unwrap_or(0);
        let expected =
            if (n + 1) % 2 == 0 { prod_inv_alpha.clone() } else { prod_inv_alpha.checked_neg() };
        report.check(rows[n].v_n == expected, || format!("(d) sign-product form of V_{n} fails"));
        let vv = v_of(&rows[n].v_n)?;
        report.check(vv == Some(sum_neg_va), || format!("(c) v_P(V_{n}) = {vv:?} != {sum_neg_va}"));
    }

    // (e), (f): matrix tail identities
    for n in 1..n_rows {
        let Some(alpha_n) = cq.get(n) else { break };
        let (a_n1, b_n1) = (&rows[n - 1].a_n, &rows[n - 1].b_n);
        let (a_n2, b_n2) = if n >= 2 {
            (rows[n - 2].a_n.clone(), rows[n - 2].b_n.clone())
        } else {
            (QuadElem::one(), QuadElem::zero())
        };
        let den = alpha_n.checked_mul(b_n1)?.checked_add(&b_n2)?;
        let num = alpha_n.checked_mul(a_n1)?.checked_add(&a_n2)?;
        let mut prod_alpha = QuadElem::one();
        for alpha_j in cq.iter().take(n + 1).skip(1) {
            prod_alpha = prod_alpha.checked_mul(alpha_j)?;
        }
        report.check(den == prod_alpha, || {
            format!("(e) alpha_n B_(n-1) + B_(n-2) != prod alpha_j at n = {n}")
        });
        if !den.is_zero() {
            let back = num.checked_div(&den)?;
            report.check(&back == alpha, || format!("(f) alpha reconstruction fails at n = {n}"));
        }
    }

    // eq (K): v_P(B_n) = sum v_P(a_j); det(B_n) = (-1)^(n-1)
    let mut sum_va: i64 = 0;
    for n in 0..n_rows {
        if n >= 1 {
            sum_va += v_of(&pq[n])?.unwrap_or(0);
        }
        let vb = v_of(&rows[n].b_n)?;
        report.check(vb == Some(sum_va), || format!("eq(K) v_P(B_{n}) = {vb:?} != {sum_va}"));
        let (a_n1, b_n1): (QuadElem, QuadElem) = if n >= 1 {
            (rows[n - 1].a_n.clone(), rows[n - 1].b_n.clone())
        } else {
            (QuadElem::one(), QuadElem::zero())
        };
        let det =
            rows[n].a_n.checked_mul(&b_n1)?.checked_sub(&a_n1.checked_mul(&rows[n].b_n)?)?;
        let expected = if n % 2 == 1 { QuadElem::one() } else { QuadElem::from_int(-1) };
        report.check(det == expected, || format!("det(B_{n}) != (-1)^(n-1)"));
    }

    Ok(report)
}

/// Outcome of the perturbation-agreement check: the hypothesis
/// v_P(alpha - alpha') > 2 v_P(V_{n-1}) and whether the first n+1 partial
/// quotients agree.
#[derive(Debug, Clone, Copy)]
pub struct AgreementCheck {
    pub hypothesis_holds: bool,
    pub quotients_agree: bool,
}

impl AgreementCheck {
    /// The implication under test: the hypothesis forces agreement.
    pub fn consistent(&self) -> bool {
        !self.hypothesis_holds || self.quotients_agree
    }
}

/// Checks that a perturbation below epsilon_n^2 (epsilon_n = |V_{n-1}|,
/// with V_{-1} = 1) preserves the first n+1 partial quotients.
pub fn agreement_depth(
    alpha: &QuadElem,
    alpha_prime: &QuadElem,
    spec: &FloorSpec,
    n: usize,
) -> Result<AgreementCheck, CfError> {
    let opts = ExpandOptions { max_steps: n + 2, record_complete: false };
    let ea = expand(alpha, spec, opts)?;
    if ea.len() < n + 1 {
        return Err(CfError::TooShort);
    }
    let v_val = if n == 0 {
        0
    } else {
        let rows = convergents(&ea.partial_quotients[..n], alpha)?;
        padic_valuation(&rows[n - 1].v_n, &spec.prime)?.ok_or(CfError::TooShort)?
    };
    let diff = alpha.checked_sub(alpha_prime)?;
    let vdiff = padic_valuation(&diff, &spec.prime)?;
    let hypothesis_holds = vdiff.map_or(true, |v| v > 2 * v_val);
    let eb = expand(alpha_prime, spec, opts)?;
    let quotients_agree =
        eb.len() >= n + 1 && ea.partial_quotients[..=n] == eb.partial_quotients[..=n];
    Ok(AgreementCheck { hypothesis_holds, quotients_agree })
}

/// Outcome of the equal-convergents proximity check: Q_n equality
/// (equivalently the first n+1 quotients agree) and the conclusion
/// v_P(alpha - beta) > 2n.
#[derive(Debug, Clone, Copy)]
pub struct ProximityCheck {
    pub equal_qn: bool,
    pub valuation_ok: bool,
}

impl ProximityCheck {
    pub fn consistent(&self) -> bool {
        !self.equal_qn || self.valuation_ok
    }
}

/// Equal n-th convergents force |alpha - beta| < p^(-2n/e), i.e.
/// v_P(alpha - beta) > 2n.
pub fn equal_convergents_proximity(
    alpha: &QuadElem,
    beta: &QuadElem,
    spec: &FloorSpec,
    n: usize,
) -> Result<ProximityCheck, CfError> {
    let opts = ExpandOptions { max_steps: n + 2, record_complete: false };
    let ea = expand(alpha, spec, opts)?;
    let eb = expand(beta, spec, opts)?;
    if ea.len() < n + 1 || eb.len() < n + 1 {
        return Err(CfError::TooShort);
    }
    let equal_qn = ea.partial_quotients[..=n] == eb.partial_quotients[..=n];
    let diff = alpha.checked_sub(beta)?;
    let vdiff = padic_valuation(&diff, &spec.prime)?;
    let valuation_ok = vdiff.map_or(true, |v| v > 2 * n as i64);
    Ok(ProximityCheck { equal_qn, valuation_ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floor::floor;

    fn q(s: &str) -> QuadElem {
        s.parse().unwrap()
    }

    fn opts() -> ExpandOptions {
        ExpandOptions { max_steps: 100, record_complete: true }
    }

    #[test]
    fn browkin_one_third() {
        let spec = FloorSpec::browkin(5).unwrap();
        let e = expand(&q("1/3"), &spec, opts()).unwrap();
        assert_eq!(e.status, ExpansionStatus::Finite);
        assert_eq!(e.partial_quotients, vec![q("2"), q("-3/5")]);
        assert_eq!(evaluate(&e.partial_quotients).unwrap(), q("1/3"));
    }

    #[test]
    fn ruban_minus_one_is_periodic() {
        let spec = FloorSpec::ruban(5).unwrap();
        let e = expand(&q("-1"), &spec, opts()).unwrap();
        assert_eq!(e.status, ExpansionStatus::Periodic { preperiod: 1, period: 1 });
        assert_eq!(e.partial_quotients, vec![q("4"), q("24/5")]);
        let cq = e.complete_quotients.as_ref().unwrap();
        assert_eq!(cq[1], q("-1/5"));
        assert_eq!(cq[1], cq[2]);
    }

    #[test]
    fn zero_expands_to_zero() {
        let spec = FloorSpec::browkin(7).unwrap();
        let e = expand(&QuadElem::zero(), &spec, opts()).unwrap();
        assert_eq!(e.status, ExpansionStatus::Finite);
        assert_eq!(e.partial_quotients, vec![QuadElem::zero()]);
    }

    #[test]
    fn convergent_rows_and_dets() {
        let alpha = q("1/3");
        let rows = convergents(&[q("2"), q("-3/5")], &alpha).unwrap();
        assert_eq!(rows[0].a_n, q("2"));
        assert_eq!(rows[0].b_n, q("1"));
        assert_eq!(rows[0].v_n, q("5/3"));
        assert_eq!(rows[1].a_n, q("-1/5"));
        assert_eq!(rows[1].b_n, q("-3/5"));
        assert!(rows[1].v_n.is_zero());
        // det at n=1: A_1 B_0 - A_0 B_1 = 1 = (-1)^0
        let det = rows[1].a_n.clone() * rows[0].b_n.clone()
            - rows[0].a_n.clone() * rows[1].b_n.clone();
        assert_eq!(det, QuadElem::one());
    }

    #[test]
    fn evaluate_identities() {
        assert_eq!(evaluate(&[q("7/5")]).unwrap(), q("7/5"));
        let a = q("5 - 2*sqrt(2)");
        let v = evaluate(&[QuadElem::zero(), a.clone()]).unwrap();
        assert_eq!(v, a.checked_inv().unwrap());
        assert!(evaluate(&[]).is_err());
        assert!(evaluate(&[q("1"), q("0")]).is_err());
    }

    #[test]
    fn invariant_report_passes_on_good_expansions() {
        let spec = FloorSpec::browkin(5).unwrap();
        let alpha = q("1/3");
        let e = expand(&alpha, &spec, opts()).unwrap();
        let report = check_expansion_invariants(&e, &alpha, &spec.prime).unwrap();
        assert!(report.passed(), "{:?}", report.violations);

        let spec = FloorSpec::ruban(3).unwrap();
        let alpha = q("-1");
        let mut e = expand(&alpha, &spec, opts()).unwrap();
        // extend the periodic prefix for a longer check
        let cq = e.complete_quotients.as_mut().unwrap();
        for _ in 0..4 {
            let last = cq.last().unwrap().clone();
            let a = floor(&last, &spec).unwrap().value;
            e.partial_quotients.push(a.clone());
            let next = last.checked_sub(&a).unwrap().checked_inv().unwrap();
            cq.push(next);
        }
        let report = check_expansion_invariants(&e, &alpha, &spec.prime).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
    }

    #[test]
    fn corrupted_quotient_is_flagged() {
        let spec = FloorSpec::browkin(13).unwrap();
        let alpha = q("100/17");
        let mut e = expand(&alpha, &spec, opts()).unwrap();
        assert!(e.len() >= 2, "need length >= 2, got {}", e.len());
        e.partial_quotients[1] = e.partial_quotients[1].checked_add(&QuadElem::one()).unwrap();
        let report = check_expansion_invariants(&e, &alpha, &spec.prime).unwrap();
        assert!(!report.passed());
        let text = report.violations.join("; ");
        assert!(text.contains("(b)"), "missing (b): {text}");
        assert!(text.contains("(f)"), "missing (f): {text}");
    }

    #[test]
    fn agreement_and_proximity() {
        let spec = FloorSpec::browkin(5).unwrap();
        let alpha = q("1/3");
        // perturb far below epsilon_1^2
        let alpha2 = alpha.checked_add(&q("625")).unwrap();
        let chk = agreement_depth(&alpha, &alpha2, &spec, 1).unwrap();
        assert!(chk.hypothesis_holds && chk.quotients_agree);
        let chk = agreement_depth(&alpha, &alpha, &spec, 1).unwrap();
        assert!(chk.consistent());

        // equal convergents: evaluate a shared prefix with a fresh tail
        let spec = FloorSpec::browkin(7).unwrap();
        let base = expand(&q("22/9"), &spec, opts()).unwrap();
        assert!(base.len() >= 2);
        let mut qs = base.partial_quotients[..2].to_vec();
        qs.push(q("3/7"));
        let beta = evaluate(&qs).unwrap();
        let chk = equal_convergents_proximity(&q("22/9"), &beta, &spec, 1).unwrap();
        assert!(chk.equal_qn, "constructed prefix must match");
        assert!(chk.valuation_ok);
    }

    #[test]
    fn sqrt2_expansion_round_trip() {
        let mut p3 = crate::primes::split_type(3, 2).unwrap();
        p3.generator = Some(q("3"));
        let spec = FloorSpec::sqrt2(p3).unwrap();
        for s in ["5/7 + 3*sqrt(2)", "22/9", "1/2 - 4/3*sqrt(2)"] {
            let alpha = q(s);
            let e = expand(&alpha, &spec, ExpandOptions { max_steps: 200, record_complete: true })
                .unwrap();
            assert_eq!(e.status, ExpansionStatus::Finite, "expansion of {s}");
            assert_eq!(evaluate(&e.partial_quotients).unwrap(), alpha);
            let report = check_expansion_invariants(&e, &alpha, &spec.prime).unwrap();
            assert!(report.passed(), "{s}: {:?}", report.violations);
        }
    }

    #[test]
    fn quotient_gap_valuation() {
        // v_P(Q_n - Q_{n-1}) = -v_P(B_n) - v_P(B_{n-1})
        let spec = FloorSpec::browkin(5).unwrap();
        let alpha = q("1234/999");
        let e = expand(&alpha, &spec, opts()).unwrap();
        let rows = convergents(&e.partial_quotients, &alpha).unwrap();
        for n in 1..rows.len() {
            let gap = rows[n].q_n.checked_sub(&rows[n - 1].q_n).unwrap();
            if gap.is_zero() {
                continue;
            }
            let v_gap = padic_valuation(&gap, &spec.prime).unwrap().unwrap();
            let vb_n = padic_valuation(&rows[n].b_n, &spec.prime).unwrap().unwrap();
            let vb_n1 = padic_valuation(&rows[n - 1].b_n, &spec.prime).unwrap().unwrap();
            assert_eq!(v_gap, -vb_n - vb_n1);
        }
    }
}
