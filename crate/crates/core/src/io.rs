//! JSON file formats.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::lincode::{Analysis, LinearCode, MatrixGF, Provenance};
use crate::quantum::{CssCode, CssProvenance, QuantumDistance};
use crate::wgeom::{
    canonical_rep, weighted_height, HeightConvention, OrbifoldData, WPoint, WeightSystem,
};

/// Pretty JSON with a trailing newline; map keys come out in a fixed order
/// because every map in the formats is a `BTreeMap`.
pub fn to_json_string<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_json(&text)
}

pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

pub fn write_json<T: Serialize>(path: &Path, v: &T) -> Result<()> {
    std::fs::write(path, to_json_string(v)?).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightRecord {
    pub lift: u64,
    pub w: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRecord {
    pub rep: Vec<Elem>,
    pub support: Vec<usize>,
    #[serde(rename = "kS")]
    pub k_s: u32,
    pub stab_arith: u32,
    pub orbit: u32,
    pub height: HeightRecord,
}

impl PointRecord {
    pub fn new(p: &WPoint, ws: &WeightSystem, conv: HeightConvention) -> PointRecord {
        let h = weighted_height(p, ws, conv);
        PointRecord {
            rep: p.rep.clone(),
            support: p.support.clone(),
            k_s: p.k_s,
            stab_arith: p.stab_arith,
            orbit: p.orbit_size,
            height: HeightRecord { lift: h.lift, w: h.w },
        }
    }
}

/// A list of weighted projective points with the data needed to re-check them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointsFile {
    pub field: String,
    pub weights: Vec<u32>,
    pub well_formed: bool,
    #[serde(default)]
    pub height_convention: HeightConvention,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<String>,
    pub points: Vec<PointRecord>,
}

impl PointsFile {
    pub fn new(field: &Field, ws: &WeightSystem, points: &[WPoint], conv: HeightConvention) -> PointsFile {
        PointsFile {
            field: field.spec_string(),
            weights: ws.weights().to_vec(),
            well_formed: ws.well_formed(),
            height_convention: conv,
            surface: None,
            points: points.iter().map(|p| PointRecord::new(p, ws, conv)).collect(),
        }
    }

    /// Rebuilds the points, checking each stored record against its rep.
    pub fn load(&self) -> Result<(Field, WeightSystem, Vec<WPoint>)> {
        let field = Field::parse(&self.field)?;
        let ws = WeightSystem::new(self.weights.clone())?;
        let mut out = Vec::with_capacity(self.points.len());
        for rec in &self.points {
            let p = canonical_rep(&rec.rep, &ws, &field)?;
            if p.rep != rec.rep {
                return Err(Error::Invariant(format!("{:?} is not a canonical representative", rec.rep)));
            }
            if PointRecord::new(&p, &ws, self.height_convention) != *rec {
                return Err(Error::Invariant(format!("stored data for {:?} does not match", rec.rep)));
            }
            out.push(p);
        }
        Ok((field, ws, out))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeJson {
    pub field: String,
    pub length: usize,
    pub dimension: usize,
    pub generator: Vec<Vec<Elem>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
    #[serde(default)]
    pub analysis: Analysis,
}

impl CodeJson {
    pub fn from_code(c: &LinearCode) -> CodeJson {
        CodeJson {
            field: c.field().spec_string(),
            length: c.length(),
            dimension: c.dimension(),
            generator: c.generator().to_rows(),
            provenance: c.provenance.clone(),
            analysis: c.analysis.clone(),
        }
    }

    pub fn to_code(&self) -> Result<LinearCode> {
        let field = Field::parse(&self.field)?;
        let m = MatrixGF::from_rows(&field, self.generator.clone(), self.length)?;
        let mut c = LinearCode::from_generator(&m);
        if c.dimension() != self.dimension {
            return Err(Error::ShapeMismatch(format!(
                "generator has rank {}, file says {}",
                c.dimension(),
                self.dimension
            )));
        }
        c.provenance = self.provenance.clone();
        c.analysis = self.analysis.clone();
        Ok(c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CssJson {
    pub field: String,
    pub n: usize,
    pub k: usize,
    pub hx: Vec<Vec<Elem>>,
    pub hz: Vec<Vec<Elem>>,
    pub distance: QuantumDistance,
    pub provenance: CssProvenance,
}

impl CssJson {
    pub fn from_code(q: &CssCode) -> CssJson {
        CssJson {
            field: q.field().spec_string(),
            n: q.n(),
            k: q.k(),
            hx: q.hx().to_rows(),
            hz: q.hz().to_rows(),
            distance: q.distance,
            provenance: q.provenance.clone(),
        }
    }

    pub fn to_code(&self) -> Result<CssCode> {
        let field = Field::parse(&self.field)?;
        let hx = MatrixGF::from_rows(&field, self.hx.clone(), self.n)?;
        let hz = MatrixGF::from_rows(&field, self.hz.clone(), self.n)?;
        let mut q = CssCode::new(&hx, &hz, self.provenance.clone())?;
        if q.k() != self.k {
            return Err(Error::ShapeMismatch(format!("checks give k = {}, file says {}", q.k(), self.k)));
        }
        q.distance = self.distance;
        Ok(q)
    }
}

/// A singular-point census, optionally tagged with where it came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub well_formed: Option<bool>,
    #[serde(flatten)]
    pub data: OrbifoldData,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lincode::InnerProduct;
    use crate::quantum::css_from_self_orthogonal;
    use crate::wgeom::{enumerate_wp_points, DEFAULT_ENUM_BUDGET};

    #[test]
    fn point_record_shape() {
        let f5 = Field::from_order(5).unwrap();
        let ws = WeightSystem::new(vec![1, 2]).unwrap();
        let pts = enumerate_wp_points(&ws, &f5, DEFAULT_ENUM_BUDGET).unwrap();
        let file = PointsFile::new(&f5, &ws, &pts, HeightConvention::IndexLift);
        let v = serde_json::to_value(&file.points[0]).unwrap();
        for key in ["rep", "support", "kS", "stab_arith", "orbit", "height"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        let text = to_json_string(&file).unwrap();
        let back: PointsFile = parse_json(&text).unwrap();
        assert_eq!(back.load().unwrap().2, pts);

        let mut bad = back.clone();
        bad.points[0].orbit += 1;
        assert!(bad.load().is_err());
    }

    #[test]
    fn code_and_css_round_trip() {
        let f2 = Field::from_order(2).unwrap();
        let c = LinearCode::from_rows(
            &f2,
            vec![vec![0, 0, 0, 1, 1, 1, 1], vec![0, 1, 1, 0, 0, 1, 1], vec![1, 0, 1, 0, 1, 0, 1]],
            7,
        )
        .unwrap();
        let j = CodeJson::from_code(&c);
        let back = parse_json::<CodeJson>(&to_json_string(&j).unwrap()).unwrap().to_code().unwrap();
        assert_eq!(back, c);

        let q = css_from_self_orthogonal(&c, InnerProduct::Euclidean).unwrap();
        let j = CssJson::from_code(&q);
        let back = parse_json::<CssJson>(&to_json_string(&j).unwrap()).unwrap().to_code().unwrap();
        assert_eq!(back, q);
    }

    #[test]
    fn census_file_flattens() {
        let raw = r#"{"convention":"geometric","entries":[{"point":[0,1],"order":2}]}"#;
        let c: CensusFile = parse_json(raw).unwrap();
        assert_eq!(c.data.entries[0].orbits, 1);
        assert!(c.field.is_none());
    }
}
