//! The orbifold correction term and the refined Singleton-type bound.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{CssCode, DistanceKind, QuantumDistance};
use crate::wgeom::{OrbifoldData, StabilizerConvention};

/// Serializes a rational as `"p/q"` (or `"p"`).
pub mod rational_str {
    use num_rational::Rational64;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational64, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Parses `"p/q"`, `"p"`, or a terminating decimal like `"0.5"`.
pub fn parse_rational(s: &str) -> Result<Rational64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    if let Some((a, b)) = s.split_once('/') {
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        if b == 0 {
            return Err(Error::DivisionByZero);
        }
        return Ok(Rational64::new(a, b));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 15 || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let int: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().map_err(|_| bad())? };
        let den = 10i64.pow(frac.len() as u32);
        let f: i64 = frac.parse().map_err(|_| bad())?;
        let mag = Rational64::from_integer(int.abs()) + Rational64::new(f, den);
        return Ok(if neg { -mag } else { mag });
    }
    s.parse::<i64>().map(Rational64::from_integer).map_err(|_| bad())
}

fn check_orders(orders: impl IntoIterator<Item = u64>) -> Result<Vec<u64>> {
    orders
        .into_iter()
        .map(|o| if o < 2 { Err(Error::InvalidStabilizer(o)) } else { Ok(o) })
        .collect()
}

fn defect(orders: &[u64]) -> Rational64 {
    orders.iter().map(|&o| Rational64::new(o as i64 - 1, o as i64)).sum()
}

/// `ε = 1/2 Σ (1 - 1/|G_p|)` over stabilizer orders.
pub fn epsilon_from_orders(orders: &[u64]) -> Result<Rational64> {
    Ok(defect(&check_orders(orders.iter().copied())?) / 2)
}

pub fn epsilon(data: &OrbifoldData) -> Result<Rational64> {
    epsilon_from_orders(&data.entries.iter().map(|e| e.order).collect::<Vec<_>>())
}

/// `χ + Σ (1 - 1/|G_p|)`.
pub fn chi_orb(chi: i64, data: &OrbifoldData) -> Result<Rational64> {
    let orders = check_orders(data.entries.iter().map(|e| e.order))?;
    Ok(Rational64::from_integer(chi) + defect(&orders))
}

/// `((n - k + 2)/2, (n - k + 2)/2 - ε/2)`.
pub fn refined_bound(n: u64, k: u64, eps: Rational64) -> Result<(Rational64, Rational64)> {
    if k > n {
        return Err(Error::InapplicableBound(format!("k = {k} exceeds n = {n}")));
    }
    if eps < Rational64::from_integer(0) {
        return Err(Error::InapplicableBound(format!("negative epsilon {eps}")));
    }
    let plain = Rational64::new(n as i64 - k as i64 + 2, 2);
    Ok((plain, plain - eps / 2))
}

/// Where ε came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EpsilonSource {
    None,
    Census { data: OrbifoldData },
    Manual,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub k: usize,
    pub distance: QuantumDistance,
    #[serde(with = "rational_str")]
    pub plain: Rational64,
    #[serde(with = "rational_str")]
    pub epsilon: Rational64,
    #[serde(with = "rational_str")]
    pub refined: Rational64,
    pub convention: StabilizerConvention,
    pub epsilon_source: EpsilonSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub well_formed: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi_orb: Option<String>,
    pub satisfies_plain: Option<bool>,
    pub satisfies_refined: Option<bool>,
}

/// Evaluates both bounds against the code's distance. Verdicts are left
/// empty unless the distance is exact.
pub fn bound_report(code: &CssCode, eps: Rational64, source: EpsilonSource) -> Result<BoundReport> {
    let (plain, refined) = refined_bound(code.n() as u64, code.k() as u64, eps)?;
    let observed = match (code.distance.kind, code.distance.value) {
        (DistanceKind::Exact, Some(d)) => Some(Rational64::from_integer(d as i64)),
        _ => None,
    };
    let convention = match &source {
        EpsilonSource::Census { data } => data.convention,
        _ => StabilizerConvention::default(),
    };
    Ok(BoundReport {
        n: code.n(),
        k: code.k(),
        distance: code.distance,
        plain,
        epsilon: eps,
        refined,
        convention,
        epsilon_source: source,
        well_formed: None,
        chi_orb: None,
        satisfies_plain: observed.map(|d| d <= plain),
        satisfies_refined: observed.map(|d| d <= refined),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wgeom::CensusEntry;

    fn r(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    fn data(orders: &[u64]) -> OrbifoldData {
        OrbifoldData {
            convention: StabilizerConvention::Geometric,
            entries: orders.iter().map(|&o| CensusEntry { point: vec![], order: o, orbits: 1 }).collect(),
        }
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon(&data(&[2, 2])).unwrap(), r(1, 2));
        assert_eq!(epsilon(&data(&[])).unwrap(), r(0, 1));
        assert_eq!(epsilon(&data(&[4])).unwrap(), r(3, 8));
        assert_eq!(epsilon(&data(&[1])).unwrap_err(), Error::InvalidStabilizer(1));
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi_orb(2, &data(&[2, 2])).unwrap(), r(3, 1));
        assert_eq!(chi_orb(2, &data(&[])).unwrap(), r(2, 1));
        assert_eq!(chi_orb(0, &data(&[3])).unwrap(), r(2, 3));
    }

    #[test]
    fn bound_examples() {
        assert_eq!(refined_bound(10, 2, r(1, 2)).unwrap(), (r(5, 1), r(19, 4)));
        assert_eq!(refined_bound(64, 16, r(4, 1)).unwrap(), (r(25, 1), r(23, 1)));
        assert_eq!(refined_bound(64, 16, r(2, 1)).unwrap().1, r(24, 1));
        assert_eq!(refined_bound(7, 7, r(0, 1)).unwrap(), (r(1, 1), r(1, 1)));
        assert!(refined_bound(3, 4, r(0, 1)).is_err());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("19/4").unwrap(), r(19, 4));
        assert_eq!(parse_rational("0.5").unwrap(), r(1, 2));
        assert_eq!(parse_rational("-1.25").unwrap(), r(-5, 4));
        assert_eq!(parse_rational("3").unwrap(), r(3, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
