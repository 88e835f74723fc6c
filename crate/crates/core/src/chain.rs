//! Chain complexes over GF(q), their homology, and the CSS codes they carry.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::lincode::{evaluation_code, LinearCode, MatrixGF};
use crate::quantum::{CssCode, CssProvenance};
use crate::wgeom::{Height, WPoint, WeightSystem};

/// A basis-vector label: a plain grade, a bigrade, or a free-form identifier.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GradeLabel {
    Int(i64),
    Pair([i64; 2]),
    Text(String),
}

/// `C_lo <- ... <- C_hi` with `diff[d] : C_d -> C_{d-1}` stored as a
/// `dim C_{d-1} x dim C_d` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    field: Field,
    lo: i64,
    hi: i64,
    dims: BTreeMap<i64, usize>,
    grades: BTreeMap<i64, Vec<GradeLabel>>,
    diff: BTreeMap<i64, MatrixGF>,
}

/// The on-disk form.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexJson {
    pub field: String,
    pub degrees: [i64; 2],
    pub dims: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub grades: BTreeMap<String, Vec<GradeLabel>>,
    #[serde(default)]
    pub diff: BTreeMap<String, Vec<Vec<i64>>>,
}

fn degree_key(s: &str) -> Result<i64> {
    s.trim().parse().map_err(|_| Error::Parse(format!("bad degree {s:?}")))
}

impl ChainComplex {
    /// Builds and validates a complex. Missing differentials are zero.
    pub fn new(
        field: &Field,
        lo: i64,
        hi: i64,
        dims: BTreeMap<i64, usize>,
        grades: BTreeMap<i64, Vec<GradeLabel>>,
        mut diff: BTreeMap<i64, MatrixGF>,
    ) -> Result<ChainComplex> {
        if lo > hi {
            return Err(Error::ShapeMismatch(format!("empty degree range [{lo}, {hi}]")));
        }
        for d in lo..=hi {
            if !dims.contains_key(&d) {
                return Err(Error::ShapeMismatch(format!("no dimension for degree {d}")));
            }
        }
        if let Some(&d) = dims.keys().find(|d| !(lo..=hi).contains(*d)) {
            return Err(Error::DegreeOutOfRange(d));
        }
        for (&d, labels) in &grades {
            match dims.get(&d) {
                Some(&n) if n == labels.len() => {}
                Some(&n) => {
                    return Err(Error::ShapeMismatch(format!("{} grade labels for a {n}-dim space in degree {d}", labels.len())))
                }
                None => return Err(Error::DegreeOutOfRange(d)),
            }
        }
        if let Some(&d) = diff.keys().find(|d| !(lo + 1..=hi).contains(*d)) {
            return Err(Error::DegreeOutOfRange(d));
        }
        for d in lo + 1..=hi {
            let (rows, cols) = (dims[&(d - 1)], dims[&d]);
            let m = diff.entry(d).or_insert_with(|| MatrixGF::zeros(field, rows, cols));
            if m.field() != field {
                return Err(Error::FieldMismatch(field.spec_string(), m.field().spec_string()));
            }
            if (m.rows(), m.cols()) != (rows, cols) {
                return Err(Error::ShapeMismatch(format!(
                    "differential {d} is {}x{}, expected {rows}x{cols}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        let c = ChainComplex { field: field.clone(), lo, hi, dims, grades, diff };
        c.check_square()?;
        Ok(c)
    }

    fn check_square(&self) -> Result<()> {
        for d in self.lo + 2..=self.hi {
            let prod = self.diff[&(d - 1)].mul(&self.diff[&d])?;
            for r in 0..prod.rows() {
                for c in 0..prod.cols() {
                    let value = prod.get(r, c);
                    if value != 0 {
                        return Err(Error::DifferentialSquareNonzero { degree: d, row: r, col: c, value });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn from_json(j: &ComplexJson) -> Result<ChainComplex> {
        let field = Field::parse(&j.field)?;
        let [lo, hi] = j.degrees;
        let dims = j.dims.iter().map(|(k, &v)| Ok((degree_key(k)?, v))).collect::<Result<_>>()?;
        let grades = j.grades.iter().map(|(k, v)| Ok((degree_key(k)?, v.clone()))).collect::<Result<_>>()?;
        let mut diff = BTreeMap::new();
        for (k, rows) in &j.diff {
            let d = degree_key(k)?;
            let cols = match rows.first() {
                Some(r) => r.len(),
                None => *j.dims.get(&d.to_string()).ok_or(Error::DegreeOutOfRange(d))?,
            };
            let rows = rows
                .iter()
                .map(|r| r.iter().map(|&x| entry(&field, x)).collect::<Result<Vec<Elem>>>())
                .collect::<Result<Vec<_>>>()?;
            diff.insert(d, MatrixGF::from_rows(&field, rows, cols)?);
        }
        ChainComplex::new(&field, lo, hi, dims, grades, diff)
    }

    pub fn to_json(&self) -> ComplexJson {
        ComplexJson {
            field: self.field.spec_string(),
            degrees: [self.lo, self.hi],
            dims: self.dims.iter().map(|(d, &n)| (d.to_string(), n)).collect(),
            grades: self.grades.iter().map(|(d, g)| (d.to_string(), g.clone())).collect(),
            diff: self
                .diff
                .iter()
                .map(|(d, m)| (d.to_string(), m.to_rows().into_iter().map(|r| r.into_iter().map(i64::from).collect()).collect()))
                .collect(),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn degrees(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn dim(&self, d: i64) -> usize {
        self.dims.get(&d).copied().unwrap_or(0)
    }

    pub fn grades(&self, d: i64) -> Option<&[GradeLabel]> {
        self.grades.get(&d).map(|v| v.as_slice())
    }

    /// `∂_d`, or a zero map outside the stored range.
    pub fn differential(&self, d: i64) -> MatrixGF {
        self.diff
            .get(&d)
            .cloned()
            .unwrap_or_else(|| MatrixGF::zeros(&self.field, self.dim(d - 1), self.dim(d)))
    }

    pub fn homology(&self) -> Result<HomologyReport> {
        let ranks: BTreeMap<i64, usize> = (self.lo..=self.hi + 1).map(|d| (d, self.differential(d).rank())).collect();
        let mut betti = BTreeMap::new();
        for d in self.lo..=self.hi {
            let dim = self.dim(d);
            let kernel = self.differential(d).kernel().rows();
            if kernel + ranks[&d] != dim {
                return Err(Error::Invariant(format!("rank-nullity fails in degree {d}")));
            }
            let b = kernel
                .checked_sub(ranks[&(d + 1)])
                .ok_or_else(|| Error::Invariant(format!("negative homology in degree {d}")))?;
            betti.insert(d, b);
        }
        let sign = |d: i64| if d.rem_euclid(2) == 0 { 1i64 } else { -1 };
        let euler_chain: i64 = (self.lo..=self.hi).map(|d| sign(d) * self.dim(d) as i64).sum();
        let euler_homology: i64 = betti.iter().map(|(&d, &b)| sign(d) * b as i64).sum();
        if euler_chain != euler_homology {
            return Err(Error::Invariant(format!("Euler characteristic {euler_chain} vs {euler_homology}")));
        }
        Ok(HomologyReport {
            betti,
            ranks: ranks.into_iter().filter(|(d, _)| (self.lo + 1..=self.hi).contains(d)).collect(),
            euler: euler_chain,
        })
    }

    /// Keeps basis vectors with bigrade `(i, j)`, `j <= k`, and restricts the
    /// differentials. Fails if some degree lacks pair labels or the result is
    /// not a complex.
    pub fn filter_bigraded(&self, k: i64) -> Result<ChainComplex> {
        let mut keep: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for d in self.lo..=self.hi {
            let labels = match self.grades.get(&d) {
                Some(l) => l,
                None if self.dim(d) == 0 => {
                    keep.insert(d, Vec::new());
                    continue;
                }
                None => return Err(Error::ShapeMismatch(format!("degree {d} has no grade labels"))),
            };
            let mut idx = Vec::new();
            for (i, g) in labels.iter().enumerate() {
                match g {
                    GradeLabel::Pair([_, j]) if *j <= k => idx.push(i),
                    GradeLabel::Pair(_) => {}
                    other => return Err(Error::ShapeMismatch(format!("label {other:?} in degree {d} is not a bigrade"))),
                }
            }
            keep.insert(d, idx);
        }
        let dims = keep.iter().map(|(&d, v)| (d, v.len())).collect();
        let grades = self
            .grades
            .iter()
            .map(|(&d, l)| (d, keep[&d].iter().map(|&i| l[i].clone()).collect()))
            .collect();
        let diff = (self.lo + 1..=self.hi)
            .map(|d| (d, self.diff[&d].select(&keep[&(d - 1)], &keep[&d])))
            .collect();
        ChainComplex::new(&self.field, self.lo, self.hi, dims, grades, diff)
    }
}

fn entry(field: &Field, x: i64) -> Result<Elem> {
    if field.e() == 1 {
        Ok(field.from_int(x))
    } else {
        let v = u32::try_from(x).map_err(|_| Error::InvalidElement { index: x.unsigned_abs() as u32, q: field.q() })?;
        field.check(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyReport {
    pub betti: BTreeMap<i64, usize>,
    /// `rank ∂_d` for each stored differential.
    pub ranks: BTreeMap<i64, usize>,
    pub euler: i64,
}

/// The CSS code of degree `d`: X checks are the boundaries of `(d+1)`-cells,
/// Z checks the coboundaries of `(d-1)`-cells. A missing neighbour degree
/// contributes no checks.
pub fn homological_code(x: &ChainComplex, d: i64) -> Result<CssCode> {
    let (lo, hi) = x.degrees();
    if !(lo..=hi).contains(&d) {
        return Err(Error::DegreeOutOfRange(d));
    }
    let hx = x.differential(d + 1).transpose();
    let hz = x.differential(d);
    let mut prov = CssProvenance::named("homological");
    prov.source = Some(serde_json::json!({ "degree": d, "degrees": [lo, hi] }));
    let code = CssCode::new(&hx, &hz, prov)?;
    let betti = x.homology()?.betti[&d];
    if code.k() != betti {
        return Err(Error::Invariant(format!("k = {} but dim H_{d} = {betti}", code.k())));
    }
    Ok(code)
}

/// Cellular complex of the `L x L` square tiling of the torus over GF(2):
/// `C_2` plaquettes, `C_1` edges (horizontal first), `C_0` vertices.
pub fn toric_complex(l: usize) -> Result<ChainComplex> {
    if l < 2 {
        return Err(Error::ShapeMismatch(format!("toric complex needs L >= 2, got {l}")));
    }
    let f = Field::from_order(2)?;
    let n = l * l;
    let vertex = |i: usize, j: usize| (i % l) * l + (j % l);
    let h_edge = |i: usize, j: usize| (i % l) * l + (j % l);
    let v_edge = |i: usize, j: usize| n + (i % l) * l + (j % l);
    let mut d1 = MatrixGF::zeros(&f, n, 2 * n);
    let mut d2 = MatrixGF::zeros(&f, 2 * n, n);
    for i in 0..l {
        for j in 0..l {
            d1.set(vertex(i, j), h_edge(i, j), 1);
            d1.set(vertex(i, j + 1), h_edge(i, j), 1);
            d1.set(vertex(i, j), v_edge(i, j), 1);
            d1.set(vertex(i + 1, j), v_edge(i, j), 1);
            let p = i * l + j;
            for e in [h_edge(i, j), h_edge(i + 1, j), v_edge(i, j), v_edge(i, j + 1)] {
                d2.set(e, p, 1);
            }
        }
    }
    let dims = BTreeMap::from([(0, n), (1, 2 * n), (2, n)]);
    ChainComplex::new(&f, 0, 2, dims, BTreeMap::new(), BTreeMap::from([(1, d1), (2, d2)]))
}

/// The horizontal edges of row 0: a non-contractible cycle of weight `L`.
pub fn toric_witness(l: usize) -> Vec<Elem> {
    let mut v = vec![0; 2 * l * l];
    v[..l].iter_mut().for_each(|x| *x = 1);
    v
}

/// A threshold on heights; `None` is infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Threshold(pub Option<u64>);

impl Ord for Threshold {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // infinity sorts last
        self.0.unwrap_or(u64::MAX).cmp(&other.0.unwrap_or(u64::MAX)).then(self.0.is_none().cmp(&other.0.is_none()))
    }
}

impl PartialOrd for Threshold {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Threshold {
    pub const INFINITY: Threshold = Threshold(None);

    pub fn admits(&self, h: &Height) -> bool {
        self.0.is_none_or(|t| h.at_most(t))
    }
}

impl std::str::FromStr for Threshold {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Threshold::INFINITY),
            t => t.parse().map(|v| Threshold(Some(v))).map_err(|_| Error::Parse(format!("bad threshold {t:?}"))),
        }
    }
}

impl std::fmt::Display for Threshold {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.0 {
            Some(t) => write!(f, "{t}"),
            None => f.write_str("inf"),
        }
    }
}

impl Serialize for Threshold {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0 {
            Some(t) => s.serialize_u64(t),
            None => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Threshold {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(n) => Ok(Threshold(Some(n))),
            Raw::S(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationLevel {
    pub threshold: Threshold,
    pub dim: usize,
    /// Indices into the input point list.
    pub members: Vec<usize>,
    pub labels: Vec<GradeLabel>,
}

/// Sub-point-sets of height at most each threshold. Thresholds must be
/// strictly ascending.
pub fn height_filtration(
    items: &[(GradeLabel, Height)],
    thresholds: &[Threshold],
) -> Result<Vec<FiltrationLevel>> {
    if thresholds.is_empty() || items.is_empty() {
        return Err(Error::EmptyFiltration);
    }
    if thresholds.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Parse("thresholds must be strictly ascending".into()));
    }
    Ok(thresholds
        .iter()
        .map(|&t| {
            let members: Vec<usize> = (0..items.len()).filter(|&i| t.admits(&items[i].1)).collect();
            FiltrationLevel {
                threshold: t,
                dim: members.len(),
                labels: members.iter().map(|&i| items[i].0.clone()).collect(),
                members,
            }
        })
        .collect())
}

/// Degree-`d` evaluation codes on each level, `None` for an empty level.
pub fn filtered_codes(
    ws: &WeightSystem,
    d: u32,
    points: &[WPoint],
    levels: &[FiltrationLevel],
    field: &Field,
) -> Result<Vec<Option<LinearCode>>> {
    levels
        .iter()
        .map(|lvl| {
            if lvl.members.is_empty() {
                return Ok(None);
            }
            let pts: Vec<WPoint> = lvl.members.iter().map(|&i| points[i].clone()).collect();
            evaluation_code(ws, d, &pts, field).map(Some)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lincode::DEFAULT_DISTANCE_BUDGET;
    use crate::quantum::{quantum_distance, QuantumDistance};
    use crate::wgeom::{enumerate_wp_points, weighted_height, HeightConvention, DEFAULT_ENUM_BUDGET};

    fn gf2() -> Field {
        Field::from_order(2).unwrap()
    }

    #[test]
    fn zero_differential_complex() {
        let f = gf2();
        let c = ChainComplex::new(&f, 0, 1, BTreeMap::from([(0, 2), (1, 3)]), BTreeMap::new(), BTreeMap::new()).unwrap();
        let h = c.homology().unwrap();
        assert_eq!(h.betti, BTreeMap::from([(0, 2), (1, 3)]));
        for d in 0..=1 {
            let q = homological_code(&c, d).unwrap();
            assert_eq!((q.n(), q.k()), (c.dim(d), c.dim(d)));
            assert_eq!(q.hx().rows() + q.hz().rows(), 0);
        }
        assert_eq!(homological_code(&c, 2).unwrap_err(), Error::DegreeOutOfRange(2));
    }

    #[test]
    fn square_nonzero_is_rejected() {
        let f = gf2();
        let one = MatrixGF::identity(&f, 1);
        let err = ChainComplex::new(
            &f,
            0,
            2,
            BTreeMap::from([(0, 1), (1, 1), (2, 1)]),
            BTreeMap::new(),
            BTreeMap::from([(1, one.clone()), (2, one)]),
        )
        .unwrap_err();
        assert_eq!(err, Error::DifferentialSquareNonzero { degree: 2, row: 0, col: 0, value: 1 });
    }

    #[test]
    fn shape_errors() {
        let f = gf2();
        let bad = MatrixGF::zeros(&f, 2, 2);
        let err = ChainComplex::new(&f, 0, 1, BTreeMap::from([(0, 1), (1, 2)]), BTreeMap::new(), BTreeMap::from([(1, bad)]));
        assert!(matches!(err, Err(Error::ShapeMismatch(_))));
        let err = ChainComplex::new(&f, 0, 1, BTreeMap::from([(0, 1)]), BTreeMap::new(), BTreeMap::new());
        assert!(matches!(err, Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn toric_small() {
        let t = toric_complex(2).unwrap();
        assert_eq!((t.dim(2), t.dim(1), t.dim(0)), (4, 8, 4));
        let h = t.homology().unwrap();
        assert_eq!(h.betti, BTreeMap::from([(0, 1), (1, 2), (2, 1)]));
        assert_eq!(h.ranks, BTreeMap::from([(1, 3), (2, 3)]));
        let q = homological_code(&t, 1).unwrap();
        assert_eq!((q.n(), q.k()), (8, 2));
        assert!(q.commutation_check().is_none());
        assert_eq!(quantum_distance(&q, DEFAULT_DISTANCE_BUDGET), QuantumDistance::exact(2));
        assert!(q.is_logical(&toric_witness(2)));
        assert_eq!(toric_complex(3).unwrap().homology().unwrap().betti[&1], 2);
        assert!(toric_complex(1).is_err());
    }

    #[test]
    fn json_round_trip() {
        let t = toric_complex(2).unwrap();
        let j = t.to_json();
        let text = serde_json::to_string(&j).unwrap();
        let back: ComplexJson = serde_json::from_str(&text).unwrap();
        assert_eq!(ChainComplex::from_json(&back).unwrap(), t);

        let raw = r#"{"field":"q=3","degrees":[0,1],"dims":{"0":1,"1":2},"diff":{"1":[[1,-1]]}}"#;
        let c = ChainComplex::from_json(&serde_json::from_str(raw).unwrap()).unwrap();
        assert_eq!(c.differential(1).row(0), &[1, 2]);
        assert_eq!(c.homology().unwrap().betti, BTreeMap::from([(0, 0), (1, 1)]));
    }

    #[test]
    fn bigraded_filter() {
        let f = gf2();
        let grades = BTreeMap::from([
            (0, vec![GradeLabel::Pair([0, 0]), GradeLabel::Pair([0, 2])]),
            (1, vec![GradeLabel::Pair([1, 0]), GradeLabel::Pair([1, 2])]),
        ]);
        let d1 = MatrixGF::identity(&f, 2);
        let c = ChainComplex::new(&f, 0, 1, BTreeMap::from([(0, 2), (1, 2)]), grades, BTreeMap::from([(1, d1)])).unwrap();
        let low = c.filter_bigraded(1).unwrap();
        assert_eq!((low.dim(0), low.dim(1)), (1, 1));
        assert_eq!(low.homology().unwrap().betti, BTreeMap::from([(0, 0), (1, 0)]));
        assert_eq!(c.filter_bigraded(-1).unwrap().dim(1), 0);
    }

    #[test]
    fn filtrations() {
        let items: Vec<(GradeLabel, Height)> = [1u64, 1, 2]
            .iter()
            .enumerate()
            .map(|(i, &h)| (GradeLabel::Int(i as i64), Height { lift: h, w: 1 }))
            .collect();
        let lv = height_filtration(&items, &[Threshold(Some(1))]).unwrap();
        assert_eq!(lv[0].dim, 2);
        assert_eq!(height_filtration(&items, &[]).unwrap_err(), Error::EmptyFiltration);
        let lv = height_filtration(&items, &[Threshold(Some(1)), Threshold::INFINITY]).unwrap();
        assert_eq!(lv[1].dim, 3);
        assert!(height_filtration(&items, &[Threshold::INFINITY, Threshold(Some(1))]).is_err());
        assert!(Threshold(Some(u64::MAX)) < Threshold::INFINITY);

        let f5 = Field::from_order(5).unwrap();
        let ws = WeightSystem::new(vec![1, 2]).unwrap();
        let pts = enumerate_wp_points(&ws, &f5, DEFAULT_ENUM_BUDGET).unwrap();
        let items: Vec<(GradeLabel, Height)> = pts
            .iter()
            .enumerate()
            .map(|(i, p)| (GradeLabel::Int(i as i64), weighted_height(p, &ws, HeightConvention::IndexLift)))
            .collect();
        let th: Vec<Threshold> = [1, 2, 4].into_iter().map(|t| Threshold(Some(t))).collect();
        let lv = height_filtration(&items, &th).unwrap();
        let dims: Vec<usize> = lv.iter().map(|l| l.dim).collect();
        assert!(dims.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(*dims.last().unwrap(), 7);
        let codes = filtered_codes(&ws, 2, &pts, &lv, &f5).unwrap();
        for pair in codes.windows(2) {
            if let (Some(a), Some(b)) = (&pair[0], &pair[1]) {
                assert!(a.length() <= b.length());
                assert!(a.dimension() <= b.dimension());
            }
        }
    }
}
