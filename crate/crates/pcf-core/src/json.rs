//! JSON wire formats for the public types. Elements and rationals travel
//! as canonical grammar strings; everything round-trips through the
//! documented schemas.

use crate::cf::{Expansion, ExpansionStatus};
use crate::floor::{
    build_repset, FloorError, FloorSpec, FloorVariant, RegionEntry, RegionTable, RepSetKind,
};
use crate::primes::{split_type, PrimeError, PrimeIdeal};
use crate::quad::{QuadElem, Rational};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error("bad element string: {0}")]
    Element(String),
    #[error("bad rational string: {0}")]
    Rational(String),
    #[error("unknown tag: {0}")]
    Tag(String),
    #[error(transparent)]
    Prime(#[from] PrimeError),
    #[error(transparent)]
    Floor(#[from] FloorError),
}

fn elem_to_string(x: &QuadElem) -> String {
    x.to_string()
}

fn elem_from_string(s: &str) -> Result<QuadElem, JsonError> {
    s.parse().map_err(|e| JsonError::Element(format!("{s}: {e}")))
}

fn rational_to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn rational_from_string(s: &str) -> Result<Rational, JsonError> {
    let q: QuadElem = s.parse().map_err(|e| JsonError::Rational(format!("{s}: {e}")))?;
    q.as_rational().cloned().ok_or_else(|| JsonError::Rational(s.to_string()))
}

/// {"p", "D", "splitting", "e", "f", "generator", "hensel_root"}
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PrimeIdealJson {
    pub p: u64,
    #[serde(rename = "D")]
    pub d: Option<i64>,
    pub splitting: String,
    pub e: u8,
    pub f: u8,
    pub generator: Option<String>,
    pub hensel_root: Option<(u64, u32)>,
}

impl From<&PrimeIdeal> for PrimeIdealJson {
    fn from(prime: &PrimeIdeal) -> Self {
        PrimeIdealJson {
            p: prime.p,
            d: prime.d,
            splitting: prime.splitting.to_string(),
            e: prime.e,
            f: prime.f,
            generator: prime.generator.as_ref().map(elem_to_string),
            hensel_root: prime
                .hensel_root
                .as_ref()
                .and_then(|(r, k)| r.to_u64().map(|r| (r, *k))),
        }
    }
}

impl PrimeIdealJson {
    pub fn reconstruct(&self) -> Result<PrimeIdeal, JsonError> {
        let mut prime = match self.d {
            None => PrimeIdeal::rational_prime(self.p)?,
            Some(d) => split_type(self.p, d)?,
        };
        if let Some(g) = &self.generator {
            prime.generator = Some(elem_from_string(g)?);
        }
        if prime.splitting.to_string() != self.splitting
            || prime.e != self.e
            || prime.f != self.f
        {
            return Err(JsonError::Tag(format!(
                "splitting data mismatch for p = {}, D = {:?}",
                self.p, self.d
            )));
        }
        if let (Some((r, k)), Some((have, _))) = (&self.hensel_root, &prime.hensel_root) {
            if *k == 1 && BigInt::from(*r) != *have {
                return Err(JsonError::Tag("hensel root mismatch".into()));
            }
        }
        Ok(prime)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegionEntryJson {
    pub x_lo: String,
    pub x_hi: String,
    pub y_lo: String,
    pub y_hi: String,
    pub center: String,
    pub radius: String,
}

/// {"variant", "prime", "repset", "repset_elements", "region_table"}
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FloorSpecJson {
    pub variant: String,
    pub prime: PrimeIdealJson,
    pub repset: Option<RepSetKind>,
    pub repset_elements: Option<Vec<String>>,
    pub region_table: Option<Vec<RegionEntryJson>>,
}

impl From<&FloorSpec> for FloorSpecJson {
    fn from(spec: &FloorSpec) -> Self {
        let (repset, repset_elements, region_table) = match &spec.variant {
            FloorVariant::Browkin => (Some(RepSetKind::BrowkinLike), None, None),
            FloorVariant::Ruban => (Some(RepSetKind::RubanLike), None, None),
            FloorVariant::Special(rs) => {
                let elems = match rs.kind {
                    RepSetKind::Explicit => {
                        Some(rs.elements().iter().map(elem_to_string).collect())
                    }
                    _ => None,
                };
                (Some(rs.kind), elems, None)
            }
            FloorVariant::Sqrt2 => (None, None, None),
            FloorVariant::EuclideanQuad { region_table } => {
                let table = region_table.as_ref().map(|t| {
                    t.entries
                        .iter()
                        .map(|e| RegionEntryJson {
                            x_lo: rational_to_string(&e.x_lo),
                            x_hi: rational_to_string(&e.x_hi),
                            y_lo: rational_to_string(&e.y_lo),
                            y_hi: rational_to_string(&e.y_hi),
                            center: elem_to_string(&e.center),
                            radius: rational_to_string(&e.radius),
                        })
                        .collect()
                });
                (None, None, table)
            }
        };
        FloorSpecJson {
            variant: spec.variant.name().to_string(),
            prime: PrimeIdealJson::from(&spec.prime),
            repset,
            repset_elements,
            region_table,
        }
    }
}

impl FloorSpecJson {
    pub fn reconstruct(&self) -> Result<FloorSpec, JsonError> {
        let prime = self.prime.reconstruct()?;
        match self.variant.as_str() {
            "browkin" => Ok(FloorSpec::browkin(prime.p)?),
            "ruban" => Ok(FloorSpec::ruban(prime.p)?),
            "special" => {
                let kind = self.repset.unwrap_or(RepSetKind::BrowkinLike);
                let explicit = match &self.repset_elements {
                    Some(es) => Some(
                        es.iter().map(|s| elem_from_string(s)).collect::<Result<Vec<_>, _>>()?,
                    ),
                    None => None,
                };
                let rs = build_repset(kind, &prime, explicit)?;
                Ok(FloorSpec::special(prime, rs)?)
            }
            "sqrt2" => Ok(FloorSpec::sqrt2(prime)?),
            "euclidean" => {
                let table = match &self.region_table {
                    None => None,
                    Some(entries) => {
                        let mut out = Vec::new();
                        for e in entries {
                            out.push(RegionEntry {
                                x_lo: rational_from_string(&e.x_lo)?,
                                x_hi: rational_from_string(&e.x_hi)?,
                                y_lo: rational_from_string(&e.y_lo)?,
                                y_hi: rational_from_string(&e.y_hi)?,
                                center: elem_from_string(&e.center)?,
                                radius: rational_from_string(&e.radius)?,
                            });
                        }
                        Some(RegionTable { entries: out })
                    }
                };
                Ok(FloorSpec::euclidean(prime, table)?)
            }
            other => Err(JsonError::Tag(other.to_string())),
        }
    }
}

/// {"status", "preperiod", "period", "partial_quotients", "steps"}
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ExpansionJson {
    pub status: String,
    pub preperiod: Option<usize>,
    pub period: Option<usize>,
    pub partial_quotients: Vec<String>,
    pub steps: usize,
}

impl From<&Expansion> for ExpansionJson {
    fn from(e: &Expansion) -> Self {
        let (status, preperiod, period) = match e.status {
            ExpansionStatus::Finite => ("Finite".to_string(), None, None),
            ExpansionStatus::Periodic { preperiod, period } => {
                ("Periodic".to_string(), Some(preperiod), Some(period))
            }
            ExpansionStatus::Truncated { .. } => ("Truncated".to_string(), None, None),
        };
        ExpansionJson {
            status,
            preperiod,
            period,
            partial_quotients: e.partial_quotients.iter().map(elem_to_string).collect(),
            steps: e.steps,
        }
    }
}

impl ExpansionJson {
    pub fn reconstruct(&self) -> Result<Expansion, JsonError> {
        let status = match self.status.as_str() {
            "Finite" => ExpansionStatus::Finite,
            "Periodic" => ExpansionStatus::Periodic {
                preperiod: self.preperiod.unwrap_or(0),
                period: self.period.unwrap_or(1),
            },
            "Truncated" => ExpansionStatus::Truncated { max_steps: self.steps },
            other => return Err(JsonError::Tag(other.to_string())),
        };
        let partial_quotients = self
            .partial_quotients
            .iter()
            .map(|s| elem_from_string(s))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Expansion { partial_quotients, complete_quotients: None, status, steps: self.steps })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::{find_generator, GeneratorStrategy};

    #[test]
    fn prime_ideal_round_trip() {
        let mut p = split_type(31, 2).unwrap();
        p.generator = find_generator(&p, &GeneratorStrategy::WindowSqrtNorm).ok();
        let j = PrimeIdealJson::from(&p);
        let text = serde_json::to_string(&j).unwrap();
        let back: PrimeIdealJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, j);
        let p2 = back.reconstruct().unwrap();
        assert_eq!(p2, p);
    }

    #[test]
    fn expansion_round_trip() {
        let spec = FloorSpec::ruban(5).unwrap();
        let e = crate::cf::expand(
            &"-1".parse().unwrap(),
            &spec,
            crate::cf::ExpandOptions { max_steps: 50, record_complete: false },
        )
        .unwrap();
        let j = ExpansionJson::from(&e);
        let text = serde_json::to_string(&j).unwrap();
        let back: ExpansionJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, j);
        let e2 = back.reconstruct().unwrap();
        assert_eq!(e2.partial_quotients, e.partial_quotients);
        assert_eq!(e2.status, e.status);
    }

    #[test]
    fn floor_spec_round_trip() {
        let mut p7 = split_type(7, 2).unwrap();
        p7.generator = find_generator(&p7, &GeneratorStrategy::MinimizeSumAbs).ok();
        let spec = FloorSpec::sqrt2(p7).unwrap();
        let j = FloorSpecJson::from(&spec);
        let text = serde_json::to_string(&j).unwrap();
        let back: FloorSpecJson = serde_json::from_str(&text).unwrap();
        let spec2 = back.reconstruct().unwrap();
        assert_eq!(spec2.prime, spec.prime);
        assert_eq!(spec2.variant.name(), spec.variant.name());
    }
}
