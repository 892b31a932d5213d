//! P-adic floor functions: Browkin and Ruban over Q, special types from a
//! generator and a representative set, the Q(sqrt(2)) coordinate-rounding
//! floor, and the norm-Euclidean region floor with optional region tables.

use crate::primes::{
    padic_valuation, reduce_mod_p, PrimeError, PrimeIdeal, ResidueElem,
};
use crate::quad::{QuadElem, QuadError, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum FloorError {
    #[error("floor variant requires a generator on the prime ideal")]
    MissingGenerator,
    #[error("floor variant is incompatible with the prime's field: {0}")]
    FieldMismatch(String),
    #[error("representative set invalid: {0}")]
    BadRepSet(String),
    #[error("no lattice point with |N(beta - delta)| < 1 within the search window (D not norm-Euclidean here, or a bug)")]
    NoNearbyLatticePoint,
    #[error("element lives in a different field than the floor spec")]
    ElementField,
    #[error(transparent)]
    Prime(#[from] PrimeError),
    #[error(transparent)]
    Quad(#[from] QuadError),
}

/// Real quadratic fields known norm-Euclidean, plus the five imaginary
/// ones; the EuclideanQuad floor accepts exactly these.
pub const NORM_EUCLIDEAN_D: &[i64] = &[
    -11, -7, -3, -2, -1, 2, 3, 5, 6, 7, 11, 13, 17, 19, 21, 29, 33, 37, 41, 57, 73,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepSetKind {
    BrowkinLike,
    RubanLike,
    Explicit,
}

/// A complete set of representatives of O_K/P containing 0, with
/// P-integral elements; digit extraction matches residues against it.
#[derive(Debug, Clone)]
pub struct RepSet {
    pub kind: RepSetKind,
    pub p: u64,
    pub f: u8,
    elements: Vec<QuadElem>,
    index: HashMap<(u64, u64), usize>,
}

impl RepSet {
    pub fn elements(&self) -> &[QuadElem] {
        &self.elements
    }

    fn lookup(&self, r: &ResidueElem) -> Option<&QuadElem> {
        self.index.get(&(r.x0, r.x1)).map(|&i| &self.elements[i])
    }
}

/// Whether x is an algebraic integer of O_K (integer coordinates, or
/// half-integer coordinates of equal parity when D = 1 mod 4).
pub fn is_ring_integer(x: &QuadElem) -> bool {
    match x.d() {
        None => x.coord_a().is_integer(),
        Some(d) if d.rem_euclid(4) == 1 => {
            let two = Rational::from_integer(BigInt::from(2));
            let u = x.coord_a() * &two;
            let v = x.coord_b() * &two;
            u.is_integer() && v.is_integer() && ((u - v) / two).is_integer()
        }
        Some(_) => x.coord_a().is_integer() && x.coord_b().is_integer(),
    }
}

fn centered_lift(x: u64, p: u64) -> i64 {
    if x > p / 2 {
        x as i64 - p as i64
    } else {
        x as i64
    }
}

fn lift_residue(r: &ResidueElem, kind: RepSetKind, prime: &PrimeIdeal) -> QuadElem {
    let p = prime.p;
    let (c0, c1) = match kind {
        RepSetKind::BrowkinLike => (centered_lift(r.x0, p), centered_lift(r.x1, p)),
        RepSetKind::RubanLike => (r.x0 as i64, r.x1 as i64),
        RepSetKind::Explicit => unreachable!("explicit repsets use the index"),
    };
    if c1 == 0 {
        QuadElem::from_int(c0)
    } else {
        QuadElem::new(
            prime.d.expect("nonzero sqrt digit needs a quadratic field"),
            Rational::from_integer(BigInt::from(c0)),
            Rational::from_integer(BigInt::from(c1)),
        )
        .expect("valid radicand")
    }
}

/// Builds the Browkin-like (coordinates in (-p/2, p/2)) or Ruban-like
/// (coordinates in [0, p-1]) representative set; `explicit` elements are
/// validated against the RepSet invariants instead.
pub fn build_repset(
    kind: RepSetKind,
    prime: &PrimeIdeal,
    explicit: Option<Vec<QuadElem>>,
) -> Result<RepSet, FloorError> {
    let p = prime.p;
    let f = prime.f;
    let elements: Vec<QuadElem> = match kind {
        RepSetKind::Explicit => {
            explicit.ok_or_else(|| FloorError::BadRepSet("explicit kind needs elements".into()))?
        }
        _ => {
            let range: Vec<i64> = match kind {
                RepSetKind::BrowkinLike => {
                    let h = (p as i64 - 1) / 2;
                    (-h..=h).collect()
                }
                RepSetKind::RubanLike => (0..p as i64).collect(),
                RepSetKind::Explicit => unreachable!(),
            };
            if f == 1 {
                range.iter().map(|&x| QuadElem::from_int(x)).collect()
            } else {
                let d = prime.d.expect("inert prime has a field");
                let mut v = Vec::with_capacity(range.len() * range.len());
                for &x in &range {
                    for &y in &range {
                        if y == 0 {
                            v.push(QuadElem::from_int(x));
                        } else {
                            v.push(
                                QuadElem::new(
                                    d,
                                    Rational::from_integer(BigInt::from(x)),
                                    Rational::from_integer(BigInt::from(y)),
                                )
                                .expect("valid radicand"),
                            );
                        }
                    }
                }
                v
            }
        }
    };
    let expected = (p as usize).pow(f as u32);
    if elements.len() != expected {
        return Err(FloorError::BadRepSet(format!(
            "cardinality {} != p^f = {}",
            elements.len(),
            expected
        )));
    }
    let mut index = HashMap::with_capacity(elements.len());
    let mut has_zero = false;
    for (i, e) in elements.iter().enumerate() {
        if e.is_zero() {
            has_zero = true;
        }
        if !is_ring_integer(e) {
            return Err(FloorError::BadRepSet(format!("{e} is not integral")));
        }
        let r = reduce_mod_p(e, prime)?;
        if index.insert((r.x0, r.x1), i).is_some() {
            return Err(FloorError::BadRepSet(format!(
                "{e} collides with another representative mod P"
            )));
        }
    }
    if !has_zero {
        return Err(FloorError::BadRepSet("representative set must contain 0".into()));
    }
    Ok(RepSet { kind, p, f, elements, index })
}

/// One region of a fundamental-domain covering: the half-open rectangle
/// (x_lo, x_hi] x (y_lo, y_hi] in {1, sqrt(D)} coordinates, a center in
/// O_K, and the certified norm radius on the region.
#[derive(Debug, Clone)]
pub struct RegionEntry {
    pub x_lo: Rational,
    pub x_hi: Rational,
    pub y_lo: Rational,
    pub y_hi: Rational,
    pub center: QuadElem,
    pub radius: Rational,
}

impl RegionEntry {
    fn contains(&self, x: &Rational, y: &Rational) -> bool {
        &self.x_lo < x && x <= &self.x_hi && &self.y_lo < y && y <= &self.y_hi
    }
}

#[derive(Debug, Clone, Default)]
pub struct RegionTable {
    pub entries: Vec<RegionEntry>,
}

/// Outcome of validating a region table against the covering obligations.
#[derive(Debug, Clone)]
pub struct RegionReport {
    pub accepted: bool,
    pub is_empty: bool,
    /// (entry index, reason)
    pub bad_centers: Vec<(usize, String)>,
    pub bad_radii: Vec<usize>,
    /// (cell x_lo, cell y_lo, reason)
    pub failing_cells: Vec<(Rational, Rational, String)>,
}

fn abs_norm_at(d: i64, x: &Rational, y: &Rational) -> Rational {
    let dr = Rational::from_integer(BigInt::from(d));
    (x * x - &dr * &(y * y)).abs()
}

/// Checks (i) centers in O_K, (ii) radii < 1, (iii) covering of
/// F(D) = (-1/2, 1/2]^2 on a 1/64 mesh: on every cell the assigned
/// entry's norm bound must hold at all four corners with the cell's
/// Lipschitz margin added. Exact rational arithmetic throughout; an empty
/// table is accepted and means "no fast path".
pub fn validate_region_table(table: &RegionTable, d: i64) -> RegionReport {
    let mut report = RegionReport {
        accepted: true,
        is_empty: table.entries.is_empty(),
        bad_centers: Vec::new(),
        bad_radii: Vec::new(),
        failing_cells: Vec::new(),
    };
    if report.is_empty {
        return report;
    }
    let one = Rational::one();
    for (i, e) in table.entries.iter().enumerate() {
        if e.center.d().map_or(false, |cd| cd != d) {
            report
                .bad_centers
                .push((i, format!("center {} not in Q(sqrt({d}))", e.center)));
        } else if !is_ring_integer(&e.center) {
            report.bad_centers.push((i, format!("center {} not in O_K", e.center)));
        }
        if e.radius >= one {
            report.bad_radii.push(i);
        }
    }
    if !report.bad_centers.is_empty() || !report.bad_radii.is_empty() {
        report.accepted = false;
        return report;
    }
    let mesh = 64i64;
    let h = Rational::new(BigInt::one(), BigInt::from(mesh));
    let dabs = Rational::from_integer(BigInt::from(d.unsigned_abs()));
    let two = Rational::from_integer(BigInt::from(2));
    for i in -mesh / 2..mesh / 2 {
        for j in -mesh / 2..mesh / 2 {
            let x_lo = Rational::from_integer(BigInt::from(i)) * &h;
            let y_lo = Rational::from_integer(BigInt::from(j)) * &h;
            let x_hi = &x_lo + &h;
            let y_hi = &y_lo + &h;
            // assignment by the cell's upper-right corner, which lies in the
            // half-open region the cell belongs to
            let entry = table.entries.iter().find(|e| e.contains(&x_hi, &y_hi));
            let Some(entry) = entry else {
                report
                    .failing_cells
                    .push((x_lo.clone(), y_lo.clone(), "no region covers the cell".into()));
                continue;
            };
            let cx = entry.center.coord_a();
            let cy = entry.center.coord_b();
            let corners = [
                (x_lo.clone(), y_lo.clone()),
                (x_lo.clone(), y_hi.clone()),
                (x_hi.clone(), y_lo.clone()),
                (x_hi.clone(), y_hi.clone()),
            ];
            // Lipschitz margin of |N| over the cell
            let mx = corners.iter().map(|(x, _)| (x - cx).abs()).max().unwrap();
            let my = corners.iter().map(|(_, y)| (y - cy).abs()).max().unwrap();
            let margin = &two * &h * &(mx + &dabs * my);
            let worst = corners
                .iter()
                .map(|(x, y)| abs_norm_at(d, &(x - cx), &(y - cy)))
                .max()
                .unwrap();
            if worst + margin > entry.radius {
                report.failing_cells.push((
                    x_lo,
                    y_lo,
                    format!("norm bound fails against center {}", entry.center),
                ));
            }
        }
    }
    if !report.failing_cells.is_empty() {
        report.accepted = false;
    }
    report
}

/// Floor-function variant; Browkin/Ruban only over Q, Sqrt2 only for
/// D = 2, EuclideanQuad only for norm-Euclidean D.
#[derive(Debug, Clone)]
pub enum FloorVariant {
    Browkin,
    Ruban,
    Special(RepSet),
    Sqrt2,
    EuclideanQuad { region_table: Option<RegionTable> },
}

impl FloorVariant {
    pub fn name(&self) -> &'static str {
        match self {
            FloorVariant::Browkin => "browkin",
            FloorVariant::Ruban => "ruban",
            FloorVariant::Special(_) => "special",
            FloorVariant::Sqrt2 => "sqrt2",
            FloorVariant::EuclideanQuad { .. } => "euclidean",
        }
    }
}

/// A validated floor function: the variant plus the prime ideal (with a
/// generator where required). Immutable after construction.
#[derive(Debug, Clone)]
pub struct FloorSpec {
    pub variant: FloorVariant,
    pub prime: PrimeIdeal,
    region_report: Option<RegionReport>,
}

impl FloorSpec {
    pub fn browkin(p: u64) -> Result<FloorSpec, FloorError> {
        let prime = PrimeIdeal::rational_prime(p)?;
        Ok(FloorSpec { variant: FloorVariant::Browkin, prime, region_report: None })
    }

    pub fn ruban(p: u64) -> Result<FloorSpec, FloorError> {
        let prime = PrimeIdeal::rational_prime(p)?;
        Ok(FloorSpec { variant: FloorVariant::Ruban, prime, region_report: None })
    }

    pub fn special(prime: PrimeIdeal, repset: RepSet) -> Result<FloorSpec, FloorError> {
        if prime.generator.is_none() {
            return Err(FloorError::MissingGenerator);
        }
        if repset.p != prime.p || repset.f != prime.f {
            return Err(FloorError::BadRepSet("repset built for a different prime".into()));
        }
        Ok(FloorSpec { variant: FloorVariant::Special(repset), prime, region_report: None })
    }

    pub fn sqrt2(prime: PrimeIdeal) -> Result<FloorSpec, FloorError> {
        if prime.d != Some(2) {
            return Err(FloorError::FieldMismatch("sqrt2 floor needs D = 2".into()));
        }
        if prime.generator.is_none() {
            return Err(FloorError::MissingGenerator);
        }
        Ok(FloorSpec { variant: FloorVariant::Sqrt2, prime, region_report: None })
    }

    /// A rejected region table is reported and replaced by the fallback
    /// nearest-lattice-point search; it is not an error.
    pub fn euclidean(
        prime: PrimeIdeal,
        table: Option<RegionTable>,
    ) -> Result<FloorSpec, FloorError> {
        let d = prime.d.ok_or_else(|| {
            FloorError::FieldMismatch("euclidean floor needs a quadratic field".into())
        })?;
        if !NORM_EUCLIDEAN_D.contains(&d) {
            return Err(FloorError::FieldMismatch(format!("D = {d} is not norm-Euclidean")));
        }
        if prime.generator.is_none() {
            return Err(FloorError::MissingGenerator);
        }
        let (table, report) = match table {
            None => (None, None),
            Some(t) => {
                let report = validate_region_table(&t, d);
                if report.accepted && !report.is_empty {
                    (Some(t), Some(report))
                } else {
                    (None, Some(report))
                }
            }
        };
        Ok(FloorSpec {
            variant: FloorVariant::EuclideanQuad { region_table: table },
            prime,
            region_report: report,
        })
    }

    pub fn region_report(&self) -> Option<&RegionReport> {
        self.region_report.as_ref()
    }

    pub fn field_d(&self) -> Option<i64> {
        self.prime.d
    }

    /// The generator pi backing the digit loop; p itself for Browkin/Ruban.
    pub fn pi(&self) -> QuadElem {
        match &self.variant {
            FloorVariant::Browkin | FloorVariant::Ruban => QuadElem::from_int(self.prime.p as i64),
            _ => self.prime.generator.clone().expect("validated at construction"),
        }
    }
}

/// s(alpha) plus the extracted digits (c_j, j) with c_j != 0, j <= 0, when
/// the variant is digit-based.
#[derive(Debug, Clone)]
pub struct FloorResult {
    pub value: QuadElem,
    pub digits: Option<Vec<(QuadElem, i64)>>,
}

fn element_in_field(alpha: &QuadElem, spec: &FloorSpec) -> Result<(), FloorError> {
    match (alpha.d(), spec.prime.d) {
        (None, _) => Ok(()),
        (Some(a), Some(p)) if a == p => Ok(()),
        _ => Err(FloorError::ElementField),
    }
}

/// Digit loop for special types: strip digits c_j in R for j = v..0 via
/// residue matching of t * pi^-j, leaving v_P(remainder) >= 1.
fn digit_expansion(
    alpha: &QuadElem,
    prime: &PrimeIdeal,
    pi: &QuadElem,
    lift: &dyn Fn(&ResidueElem) -> Result<QuadElem, FloorError>,
) -> Result<(QuadElem, Vec<(QuadElem, i64)>), FloorError> {
    let v = match padic_valuation(alpha, prime)? {
        None => return Ok((QuadElem::zero(), Vec::new())),
        Some(v) if v >= 1 => return Ok((QuadElem::zero(), Vec::new())),
        Some(v) => v,
    };
    let mut t = alpha.clone();
    let mut value = QuadElem::zero();
    let mut digits = Vec::new();
    for j in v..=0 {
        let scaled = t.checked_mul(&pi.pow(-j)?)?;
        let r = reduce_mod_p(&scaled, prime)?;
        let c = lift(&r)?;
        if !c.is_zero() {
            let term = c.checked_mul(&pi.pow(j)?)?;
            value = value.checked_add(&term)?;
            t = t.checked_sub(&term)?;
            digits.push((c, j));
        }
    }
    debug_assert!(padic_valuation(&t, prime).unwrap().map_or(true, |v| v >= 1));
    Ok((value, digits))
}

/// Nearest integer with ties toward -infinity: fractional parts land in
/// (-1/2, 1/2].
fn round_half_down(x: &Rational) -> BigInt {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    (x - half).ceil().to_integer()
}

fn frac_half_open(x: &Rational) -> Rational {
    x - Rational::from_integer(round_half_down(x))
}

/// The canonical coset representative used by the Sqrt2/EuclideanQuad
/// floors: the Ruban-like digit value. Deterministic per coset, which
/// makes those floors constant on cosets (floor axiom d).
fn canonical_b(
    alpha: &QuadElem,
    prime: &PrimeIdeal,
    pi: &QuadElem,
) -> Result<QuadElem, FloorError> {
    let lift = |r: &ResidueElem| Ok(lift_residue(r, RepSetKind::RubanLike, prime));
    Ok(digit_expansion(alpha, prime, pi, &lift)?.0)
}

fn sqrt2_floor(
    alpha: &QuadElem,
    prime: &PrimeIdeal,
    pi: &QuadElem,
) -> Result<QuadElem, FloorError> {
    let b = canonical_b(alpha, prime, pi)?;
    if b.is_zero() {
        return Ok(b);
    }
    let q = b.checked_div(pi)?;
    let ax = Rational::from_integer(round_half_down(q.coord_a()));
    let by = Rational::from_integer(round_half_down(q.coord_b()));
    let beta = if by.is_zero() {
        QuadElem::from_rational(ax)
    } else {
        QuadElem::new(2, ax, by).expect("D = 2 is valid")
    };
    let gamma = q.checked_sub(&beta)?;
    Ok(pi.checked_mul(&gamma)?)
}

fn lattice_candidates(d: i64) -> Vec<QuadElem> {
    let mut out = Vec::new();
    if d.rem_euclid(4) == 1 {
        for u in -4i64..=4 {
            for v in -4i64..=4 {
                if (u - v) % 2 != 0 {
                    continue;
                }
                let a = Rational::new(BigInt::from(u), BigInt::from(2));
                let b = Rational::new(BigInt::from(v), BigInt::from(2));
                if v == 0 {
                    out.push(QuadElem::from_rational(a));
                } else {
                    out.push(QuadElem::new(d, a, b).expect("valid radicand"));
                }
            }
        }
    } else {
        for u in -2i64..=2 {
            for v in -2i64..=2 {
                if v == 0 {
                    out.push(QuadElem::from_int(u));
                } else {
                    out.push(
                        QuadElem::new(
                            d,
                            Rational::from_integer(BigInt::from(u)),
                            Rational::from_integer(BigInt::from(v)),
                        )
                        .expect("valid radicand"),
                    );
                }
            }
        }
    }
    out
}

fn euclidean_floor(
    alpha: &QuadElem,
    prime: &PrimeIdeal,
    pi: &QuadElem,
    table: Option<&RegionTable>,
) -> Result<QuadElem, FloorError> {
    let d = prime.d.expect("validated");
    let b = canonical_b(alpha, prime, pi)?;
    if b.is_zero() {
        return Ok(b);
    }
    let q = b.checked_div(pi)?;
    // translate by mu in Z + Z sqrt(D) into F(D) = (-1/2, 1/2]^2
    let bx = frac_half_open(q.coord_a());
    let by = frac_half_open(q.coord_b());
    let one = Rational::one();
    let mut delta: Option<QuadElem> = None;
    if let Some(table) = table {
        if let Some(entry) = table.entries.iter().find(|e| e.contains(&bx, &by)) {
            let nx = &bx - entry.center.coord_a();
            let ny = &by - entry.center.coord_b();
            if abs_norm_at(d, &nx, &ny) < one {
                delta = Some(entry.center.clone());
            }
        }
    }
    if delta.is_none() {
        // exhaustive search over nearby O_K points, minimal |N|, ties
        // broken lexicographically on coordinates
        let mut best: Option<(Rational, QuadElem)> = None;
        for cand in lattice_candidates(d) {
            let nx = &bx - cand.coord_a();
            let ny = &by - cand.coord_b();
            let n = abs_norm_at(d, &nx, &ny);
            let better = match &best {
                None => true,
                Some((bn, bc)) => {
                    n < *bn
                        || (n == *bn
                            && (cand.coord_a(), cand.coord_b()) < (bc.coord_a(), bc.coord_b()))
                }
            };
            if better {
                best = Some((n, cand));
            }
        }
        let (n, cand) = best.expect("candidate list nonempty");
        if n >= one {
            return Err(FloorError::NoNearbyLatticePoint);
        }
        delta = Some(cand);
    }
    let delta = delta.unwrap();
    let beta = if by.is_zero() {
        QuadElem::from_rational(bx)
    } else {
        QuadElem::new(d, bx, by).expect("valid radicand")
    };
    let diff = beta.checked_sub(&delta)?;
    Ok(pi.checked_mul(&diff)?)
}

/// s(alpha) for the given spec. Digit lists are returned for the
/// digit-based variants (Browkin/Ruban/Special).
pub fn floor(alpha: &QuadElem, spec: &FloorSpec) -> Result<FloorResult, FloorError> {
    element_in_field(alpha, spec)?;
    let prime = &spec.prime;
    let pi = spec.pi();
    match &spec.variant {
        FloorVariant::Browkin => {
            let lift = |r: &ResidueElem| Ok(lift_residue(r, RepSetKind::BrowkinLike, prime));
            let (value, digits) = digit_expansion(alpha, prime, &pi, &lift)?;
            Ok(FloorResult { value, digits: Some(digits) })
        }
        FloorVariant::Ruban => {
            let lift = |r: &ResidueElem| Ok(lift_residue(r, RepSetKind::RubanLike, prime));
            let (value, digits) = digit_expansion(alpha, prime, &pi, &lift)?;
            Ok(FloorResult { value, digits: Some(digits) })
        }
        FloorVariant::Special(repset) => {
            let lift = |r: &ResidueElem| match repset.kind {
                RepSetKind::Explicit => repset
                    .lookup(r)
                    .cloned()
                    .ok_or_else(|| FloorError::BadRepSet("residue missing from set".into())),
                kind => Ok(lift_residue(r, kind, prime)),
            };
            let (value, digits) = digit_expansion(alpha, prime, &pi, &lift)?;
            Ok(FloorResult { value, digits: Some(digits) })
        }
        FloorVariant::Sqrt2 => {
            Ok(FloorResult { value: sqrt2_floor(alpha, prime, &pi)?, digits: None })
        }
        FloorVariant::EuclideanQuad { region_table } => Ok(FloorResult {
            value: euclidean_floor(alpha, prime, &pi, region_table.as_ref())?,
            digits: None,
        }),
    }
}

/// Exact check of the floor axioms for a computed value: remainder in P,
/// zero exactly on P-integral-plus elements, pi-power denominators only.
pub fn check_floor_axioms(
    alpha: &QuadElem,
    result: &QuadElem,
    spec: &FloorSpec,
) -> Result<Vec<String>, FloorError> {
    let mut violations = Vec::new();
    let prime = &spec.prime;
    let rem = alpha.checked_sub(result)?;
    let v_rem = padic_valuation(&rem, prime)?;
    if v_rem.map_or(false, |v| v < 1) {
        violations.push(format!("v_P(alpha - s(alpha)) = {v_rem:?} < 1"));
    }
    let v_alpha = padic_valuation(alpha, prime)?;
    let alpha_in_p = v_alpha.map_or(true, |v| v >= 1);
    if alpha_in_p != result.is_zero() {
        violations.push("s(alpha) = 0 iff v_P(alpha) >= 1 violated".into());
    }
    if !result.is_zero() {
        // pi-power-only denominators: clearing the P-pole alone must land
        // in O_K; a pole at any other place (the conjugate prime included)
        // survives the scaling and is flagged
        let v = padic_valuation(result, prime)?.unwrap_or(0).min(0);
        let pi = spec.pi();
        let scaled = result.checked_mul(&pi.pow(-v)?)?;
        if !is_ring_integer(&scaled) {
            violations.push(format!("s(alpha) = {result} has a non-pi denominator"));
        }
    }
    Ok(violations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::split_type;
    use crate::quad::rational_from_ints;

    fn q(s: &str) -> QuadElem {
        s.parse().unwrap()
    }

    #[test]
    fn browkin_examples() {
        let spec = FloorSpec::browkin(5).unwrap();
        let r = floor(&q("1/3"), &spec).unwrap();
        assert_eq!(r.value, q("2"));
        assert_eq!(r.digits.unwrap(), vec![(q("2"), 0)]);
        // 7/5 is already in image form
        let r = floor(&q("7/5"), &spec).unwrap();
        assert_eq!(r.value, q("7/5"));
        // s(0) = 0 and s vanishes on P-multiples
        assert!(floor(&QuadElem::zero(), &spec).unwrap().value.is_zero());
        assert!(floor(&q("25/3"), &spec).unwrap().value.is_zero());
    }

    #[test]
    fn ruban_examples() {
        let spec = FloorSpec::ruban(5).unwrap();
        let r = floor(&q("-1/5"), &spec).unwrap();
        assert_eq!(r.value, q("24/5"));
        assert_eq!(r.digits.unwrap(), vec![(q("4"), -1), (q("4"), 0)]);
    }

    #[test]
    fn repsets() {
        let p5 = PrimeIdeal::rational_prime(5).unwrap();
        let rs = build_repset(RepSetKind::BrowkinLike, &p5, None).unwrap();
        let vals: Vec<String> = rs.elements().iter().map(|e| e.to_string()).collect();
        assert_eq!(vals, vec!["-2", "-1", "0", "1", "2"]);
        let p3 = PrimeIdeal::rational_prime(3).unwrap();
        let rs = build_repset(RepSetKind::RubanLike, &p3, None).unwrap();
        assert_eq!(rs.elements().len(), 3);
        // inert p=3 over Q(sqrt 2): 9 elements, pairwise distinct residues
        let p3q = split_type(3, 2).unwrap();
        let rs = build_repset(RepSetKind::BrowkinLike, &p3q, None).unwrap();
        assert_eq!(rs.elements().len(), 9);
        // explicit set failing distinctness mod P
        let bad = build_repset(RepSetKind::Explicit, &p3, Some(vec![q("0"), q("1"), q("4")]));
        assert!(bad.is_err());
        let ok = build_repset(RepSetKind::Explicit, &p3, Some(vec![q("0"), q("1"), q("-1")]));
        assert!(ok.is_ok());
    }

    #[test]
    fn sqrt2_floor_examples() {
        let mut p3 = split_type(3, 2).unwrap();
        p3.generator = Some(q("3"));
        let spec = FloorSpec::sqrt2(p3).unwrap();
        // alpha = 7: b = 1, rounds to beta = 0, a = 1; |7 - 1|_3 = 1/3
        let r = floor(&q("7"), &spec).unwrap();
        assert_eq!(r.value, q("1"));
        // alpha = sqrt(2) is its own floor
        let r = floor(&q("sqrt(2)"), &spec).unwrap();
        assert_eq!(r.value, q("sqrt(2)"));
        // gamma coordinates bounded by 1/2 exactly on random-ish inputs
        for s in ["5/7 + 3*sqrt(2)", "-11/4", "9 - 2/3*sqrt(2)"] {
            let alpha = q(s);
            let a = floor(&alpha, &spec).unwrap().value;
            let gamma = a.checked_div(&spec.pi()).unwrap();
            let half = rational_from_ints(1, 2);
            assert!(gamma.coord_a().abs() <= half && gamma.coord_b().abs() <= half);
            assert!(check_floor_axioms(&alpha, &a, &spec).unwrap().is_empty());
        }
    }

    #[test]
    fn rounding_ties() {
        assert_eq!(round_half_down(&rational_from_ints(1, 2)), BigInt::from(0));
        assert_eq!(round_half_down(&rational_from_ints(-1, 2)), BigInt::from(-1));
        assert_eq!(round_half_down(&rational_from_ints(3, 4)), BigInt::from(1));
        assert_eq!(frac_half_open(&rational_from_ints(1, 2)), rational_from_ints(1, 2));
        assert_eq!(frac_half_open(&rational_from_ints(-1, 2)), rational_from_ints(1, 2));
    }

    #[test]
    fn euclidean_floor_axioms() {
        // D = 17, inert p = 3 with pi = 3
        let mut p = split_type(3, 17).unwrap();
        p.generator = Some(q("3"));
        let spec = FloorSpec::euclidean(p, None).unwrap();
        for s in ["1/5 + 2/7*sqrt(17)", "4 - 9/2*sqrt(17)", "22/9", "sqrt(17)"] {
            let alpha = q(s);
            let r = floor(&alpha, &spec).unwrap();
            let viol = check_floor_axioms(&alpha, &r.value, &spec).unwrap();
            assert!(viol.is_empty(), "axioms for {s}: {viol:?}");
            // |N(a)| < |N(pi)| by construction
            let a_over_pi = r.value.checked_div(&spec.pi()).unwrap();
            assert!(a_over_pi.norm().abs() < Rational::one());
        }
    }

    #[test]
    fn region_table_validation() {
        // single center 0, radius 1/2 over D = -1 fails at (1/2, 1/2)
        let t = RegionTable {
            entries: vec![RegionEntry {
                x_lo: rational_from_ints(-1, 2),
                x_hi: rational_from_ints(1, 2),
                y_lo: rational_from_ints(-1, 2),
                y_hi: rational_from_ints(1, 2),
                center: QuadElem::zero(),
                radius: rational_from_ints(1, 2),
            }],
        };
        let report = validate_region_table(&t, -1);
        assert!(!report.accepted);
        assert!(!report.failing_cells.is_empty());
        // plane points like (1, 1/2) are not integral in Q(sqrt 17)
        let t = RegionTable {
            entries: vec![RegionEntry {
                x_lo: rational_from_ints(0, 1),
                x_hi: rational_from_ints(1, 2),
                y_lo: rational_from_ints(1, 4),
                y_hi: rational_from_ints(1, 2),
                center: q("1 + 1/2*sqrt(17)"),
                radius: rational_from_ints(13, 16),
            }],
        };
        let report = validate_region_table(&t, 17);
        assert!(!report.accepted);
        assert_eq!(report.bad_centers.len(), 1);
        // empty table accepted as "no fast path"
        let report = validate_region_table(&RegionTable::default(), 17);
        assert!(report.accepted && report.is_empty);
    }

    #[test]
    fn missing_generator_rejected() {
        let p7 = split_type(7, 2).unwrap();
        assert!(matches!(FloorSpec::sqrt2(p7.clone()), Err(FloorError::MissingGenerator)));
        let rs = build_repset(RepSetKind::BrowkinLike, &p7, None).unwrap();
        assert!(matches!(FloorSpec::special(p7, rs), Err(FloorError::MissingGenerator)));
        // non-Euclidean radicand rejected
        let mut p3 = split_type(3, 43).unwrap();
        p3.generator = Some(q("3"));
        assert!(FloorSpec::euclidean(p3, None).is_err());
    }

    #[test]
    fn special_floor_with_explicit_set() {
        let p5 = PrimeIdeal::rational_prime(5).unwrap();
        let rs = build_repset(
            RepSetKind::Explicit,
            &p5,
            Some(vec![q("0"), q("1"), q("2"), q("-2"), q("-1")]),
        )
        .unwrap();
        let spec = FloorSpec::special(p5, rs).unwrap();
        let r = floor(&q("1/3"), &spec).unwrap();
        assert_eq!(r.value, q("2"));
    }
}
