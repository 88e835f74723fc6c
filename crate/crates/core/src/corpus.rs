//! Regression corpus: each fixture recomputes a set of values, diffs them
//! against the committed expectation, and compares selected entries with
//! externally claimed numbers.
//!
//! A mismatch with the committed expectation is a FAIL. A mismatch with a
//! claim is a FINDING: the enumeration result stands and the disagreement is
//! recorded.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::chain::{homological_code, toric_complex, toric_witness};
use crate::error::{Error, Result};
use crate::gf::Field;
use crate::gpoly::{affine_points, den, zeta_counts, zeta_counts_space, zeta_series, GradedPolynomial, Hypersurface};
use crate::io::read_json;
use crate::lincode::{
    evaluation_code, evaluation_matrix, isotropic_subcode, min_positive_weight, wprm_plane_report, InnerProduct, LinearCode,
    MatrixGF,
};
use crate::orbifold::{bound_report, epsilon_from_orders, refined_bound, EpsilonSource};
use crate::quantum::{css_from_pair, css_from_self_orthogonal, quantum_distance, upper_bound_from_witness};
use crate::wgeom::{count_wp_points_formula, enumerate_wp_points, WeightSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budgets {
    pub enumeration: u128,
    pub distance: u128,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            enumeration: crate::wgeom::DEFAULT_ENUM_BUDGET,
            distance: crate::lincode::DEFAULT_DISTANCE_BUDGET,
        }
    }
}

/// A value stated elsewhere, located by JSON pointer into the computed output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub path: String,
    pub value: Value,
    #[serde(default)]
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub name: String,
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub expected: Value,
    #[serde(default)]
    pub claims: Vec<Claim>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Finding,
    Fail,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Finding => "FINDING",
            Status::Fail => "FAIL",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub name: String,
    pub status: Status,
    pub computed: Value,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub differences: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub findings: Vec<String>,
}

pub const FIXTURE_NAMES: &[&str] = &[
    "bounds",
    "genus2",
    "oracle",
    "steane",
    "superelliptic",
    "surface112",
    "surface112_css",
    "toric",
    "wp12",
    "wprm_plane",
    "zeta",
];

/// The committed fixture directory of this crate.
pub fn default_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn compute(name: &str, b: Budgets) -> Result<Value> {
    match name {
        "wp12" => wp12(b),
        "oracle" => oracle(b),
        "surface112" => surface112(b),
        "surface112_css" => surface112_css(b),
        "superelliptic" => superelliptic(b),
        "genus2" => genus2(b),
        "steane" => steane(b),
        "toric" => toric(b),
        "bounds" => bounds(b),
        "zeta" => zeta(b),
        "wprm_plane" => wprm_plane(b),
        _ => Err(Error::Parse(format!("no computation for fixture {name:?}"))),
    }
}

/// Pointers where `a` and `b` differ, depth-first.
pub fn json_diff(a: &Value, b: &Value) -> Vec<String> {
    fn walk(a: &Value, b: &Value, path: String, out: &mut Vec<String>) {
        match (a, b) {
            (Value::Object(x), Value::Object(y)) => {
                let keys: std::collections::BTreeSet<&String> = x.keys().chain(y.keys()).collect();
                for k in keys {
                    let p = format!("{path}/{k}");
                    match (x.get(k), y.get(k)) {
                        (Some(u), Some(v)) => walk(u, v, p, out),
                        _ => out.push(p),
                    }
                }
            }
            (Value::Array(x), Value::Array(y)) if x.len() == y.len() => {
                for (i, (u, v)) in x.iter().zip(y).enumerate() {
                    walk(u, v, format!("{path}/{i}"), out);
                }
            }
            _ if a == b => {}
            _ => out.push(if path.is_empty() { "/".into() } else { path }),
        }
    }
    let mut out = Vec::new();
    walk(a, b, String::new(), &mut out);
    out
}

pub fn evaluate(fx: &Fixture, b: Budgets) -> Outcome {
    let computed = match compute(&fx.name, b) {
        Ok(v) => v,
        Err(e) => {
            return Outcome {
                name: fx.name.clone(),
                status: Status::Fail,
                computed: Value::Null,
                differences: vec![format!("error: {e}")],
                findings: Vec::new(),
            }
        }
    };
    let differences = json_diff(&fx.expected, &computed);
    let mut findings = Vec::new();
    let mut missing = Vec::new();
    for c in &fx.claims {
        match computed.pointer(&c.path) {
            Some(v) if *v == c.value => {}
            Some(v) => findings.push(format!("{}: claimed {}, computed {}{}", c.path, c.value, v, note(&c.note))),
            None => missing.push(format!("claim path {} not in output", c.path)),
        }
    }
    let status = if !differences.is_empty() || !missing.is_empty() {
        Status::Fail
    } else if !findings.is_empty() {
        Status::Finding
    } else {
        Status::Pass
    };
    Outcome {
        name: fx.name.clone(),
        status,
        computed,
        differences: differences.into_iter().chain(missing).collect(),
        findings,
    }
}

fn note(n: &str) -> String {
    if n.is_empty() {
        String::new()
    } else {
        format!(" ({n})")
    }
}

/// Loads every `*.json` fixture in `dir`, sorted by name, optionally
/// restricted to `only`.
pub fn load_fixtures(dir: &Path, only: &[String]) -> Result<Vec<(PathBuf, Fixture)>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let mut out = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::Io(e.to_string()))?.path();
        if path.extension().is_some_and(|x| x == "json") {
            let fx: Fixture = read_json(&path)?;
            if only.is_empty() || only.contains(&fx.name) {
                out.push((path, fx));
            }
        }
    }
    if out.is_empty() && only.is_empty() {
        return Err(Error::Usage(format!("no fixtures in {}", dir.display())));
    }
    out.sort_by(|a, b| a.1.name.cmp(&b.1.name));
    if let Some(name) = only.iter().find(|n| !out.iter().any(|(_, f)| &f.name == *n)) {
        return Err(Error::Usage(format!("no fixture named {name:?}")));
    }
    Ok(out)
}

/// Runs fixtures concurrently; results come back in name order. With
/// `bless`, the computed values replace the committed expectations.
pub fn run(dir: &Path, only: &[String], bless: bool, b: Budgets) -> Result<Vec<Outcome>> {
    let fixtures = load_fixtures(dir, only)?;
    let outcomes: Vec<Outcome> = fixtures.par_iter().map(|(_, fx)| evaluate(fx, b)).collect();
    if bless {
        for ((path, fx), out) in fixtures.iter().zip(&outcomes) {
            if out.computed.is_null() {
                continue;
            }
            let updated = Fixture { expected: out.computed.clone(), ..fx.clone() };
            crate::io::write_json(path, &updated)?;
        }
    }
    Ok(outcomes)
}

fn gf(q: u64) -> Result<Field> {
    Field::from_order(q)
}

fn wp12(b: Budgets) -> Result<Value> {
    let ws = WeightSystem::new(vec![1, 2])?;
    let rows = [2u64, 3, 4, 5, 7, 9]
        .iter()
        .map(|&q| {
            let enumerated = enumerate_wp_points(&ws, &gf(q)?, b.enumeration)?.len();
            Ok(json!({ "q": q, "formula": count_wp_points_formula(&ws, q) as u64, "enumerated": enumerated }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({ "weights": [1, 2], "counts": rows }))
}

/// Weight systems of length 1..=3 with entries in 1..=6.
pub fn small_weight_systems() -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for len in 1..=3u32 {
        for idx in 0..6u32.pow(len) {
            out.push((0..len).map(|i| idx / 6u32.pow(i) % 6 + 1).collect());
        }
    }
    out
}

pub const ORACLE_ORDERS: [u64; 7] = [2, 3, 4, 5, 7, 8, 9];

fn oracle(b: Budgets) -> Result<Value> {
    let systems = small_weight_systems();
    let fields = ORACLE_ORDERS.iter().map(|&q| gf(q)).collect::<Result<Vec<_>>>()?;
    let results: Vec<Option<Value>> = systems
        .par_iter()
        .flat_map_iter(|w| fields.iter().map(move |f| (w, f)))
        .map(|(w, f)| {
            let ws = WeightSystem::new(w.clone())?;
            let formula = count_wp_points_formula(&ws, f.q() as u64);
            let enumerated = enumerate_wp_points(&ws, f, b.enumeration)?.len() as u128;
            Ok((formula != enumerated)
                .then(|| json!({ "weights": w, "q": f.q(), "formula": formula as u64, "enumerated": enumerated as u64 })))
        })
        .collect::<Result<_>>()?;
    let mismatches: Vec<Value> = results.into_iter().flatten().collect();
    Ok(json!({ "cases": systems.len() * fields.len(), "mismatches": mismatches }))
}

pub const SURFACE_WEIGHTS: [u32; 4] = [2, 4, 6, 10];
pub const SURFACE_POLY: &str = "x0^10+x1^5+x2^2+x3";

/// The GF(5) surface, its points, and the degree-20 evaluation matrix.
pub fn surface112_data(b: Budgets) -> Result<(Hypersurface, Vec<crate::wgeom::WPoint>, MatrixGF)> {
    let f = gf(5)?;
    let ws = WeightSystem::new(SURFACE_WEIGHTS.to_vec())?;
    let poly = GradedPolynomial::parse(SURFACE_POLY, &f, None)?;
    let h = Hypersurface::new_lenient(ws.clone(), poly)?;
    let pts = h.points(b.enumeration)?;
    let m = evaluation_matrix(&ws, 20, &pts, &f)?;
    Ok((h, pts, m))
}

fn surface112(b: Budgets) -> Result<Value> {
    let (h, pts, m) = surface112_data(b)?;
    let code = evaluation_code(h.weights(), 20, &pts, h.field())?;
    let iso = isotropic_subcode(&m, InnerProduct::Euclidean, Some(10))?;
    let css = css_from_self_orthogonal(&iso, InnerProduct::Euclidean)?;
    let rep_dependent = code.provenance.as_ref().is_some_and(|p| p.representative_dependent);
    Ok(json!({
        "field": "q=5",
        "weights": SURFACE_WEIGHTS,
        "polynomial": SURFACE_POLY,
        "homogeneous": h.is_homogeneous(),
        "term_degrees": h.degrees(),
        "points": pts.len(),
        "stratified_count": h.count(b.enumeration)? as u64,
        "den": den(&SURFACE_WEIGHTS, 20),
        "code": { "length": code.length(), "rank": code.dimension(), "representative_dependent": rep_dependent },
        "isotropic_dim": iso.dimension(),
        "css": { "n": css.n(), "k": css.k() },
    }))
}

fn surface112_css(b: Budgets) -> Result<Value> {
    let (_, _, m) = surface112_data(b)?;
    let iso = isotropic_subcode(&m, InnerProduct::Euclidean, Some(10))?;
    let mut css = css_from_self_orthogonal(&iso, InnerProduct::Euclidean)?;
    css.distance = quantum_distance(&css, b.distance);
    let dist = iso.weight_distribution(b.distance).ok();
    Ok(json!({
        "css": { "n": css.n(), "k": css.k() },
        "distance": css.distance,
        "subcode_min_distance": dist.as_ref().and_then(min_positive_weight),
        "subcode_weights": dist.map(|d| d.into_iter().map(|(w, c)| (w.to_string(), c.to_string())).collect::<BTreeMap<_, _>>()),
    }))
}

fn superelliptic(b: Budgets) -> Result<Value> {
    let f = gf(7)?;
    let poly = GradedPolynomial::parse("x1^3 - x0^4 - x0 - 1", &f, None)?;
    let pts = affine_points(&poly, None, b.enumeration)?;
    // zeta = 2 has order 3 in GF(7)
    let zeta = 2;
    let mut orbits: Vec<Vec<Vec<u32>>> = Vec::new();
    for p in &pts {
        if orbits.iter().any(|o| o.contains(p)) {
            continue;
        }
        let mut o = vec![p.clone()];
        let mut y = p[1];
        loop {
            y = f.mul(zeta, y);
            if y == p[1] {
                break;
            }
            o.push(vec![p[0], y]);
        }
        o.sort();
        orbits.push(o);
    }
    // 1, x, x^2 are invariant under y -> zeta y
    let rows: Vec<Vec<u32>> = (0..3u64).map(|k| pts.iter().map(|p| f.pow_u(p[0], k)).collect()).collect();
    let code = LinearCode::from_rows(&f, rows, pts.len())?;
    let d = code.min_distance(b.distance);
    Ok(json!({
        "field": "q=7",
        "affine_points": pts.len(),
        "orbits": orbits.len(),
        "orbit_sizes": orbits.iter().map(|o| o.len()).collect::<Vec<_>>(),
        "invariant_code": { "n": code.length(), "k": code.dimension(), "d": d.value, "exact": d.exact },
    }))
}

fn genus2(b: Budgets) -> Result<Value> {
    let f = gf(9)?;
    let poly = GradedPolynomial::parse("x1^2 - x0^5 + 2*x0^3 - x0^2 - 1", &f, None)?;
    let pts = affine_points(&poly, None, b.enumeration)?;
    let mut xs: BTreeMap<u32, usize> = BTreeMap::new();
    for p in &pts {
        *xs.entry(p[0]).or_default() += 1;
    }
    Ok(json!({
        "field": "q=9",
        "affine_points": pts.len(),
        "points": pts,
        "pairs": xs.values().filter(|&&c| c == 2).count(),
    }))
}

/// The [7,4,3] Hamming code in systematic form.
pub fn hamming(f: &Field) -> Result<LinearCode> {
    LinearCode::from_rows(
        f,
        vec![
            vec![1, 0, 0, 0, 0, 1, 1],
            vec![0, 1, 0, 0, 1, 0, 1],
            vec![0, 0, 1, 0, 1, 1, 0],
            vec![0, 0, 0, 1, 1, 1, 1],
        ],
        7,
    )
}

fn steane(b: Budgets) -> Result<Value> {
    let f = gf(2)?;
    let h = hamming(&f)?;
    let simplex = h.dual(InnerProduct::Euclidean)?;
    let mut pair = css_from_pair(&h, &h)?;
    pair.distance = quantum_distance(&pair, b.distance);
    let mut lift = css_from_self_orthogonal(&simplex, InnerProduct::Euclidean)?;
    lift.distance = quantum_distance(&lift, b.distance);
    let wd = h.weight_distribution(b.distance)?;
    Ok(json!({
        "hamming": {
            "n": h.length(), "k": h.dimension(), "d": h.min_distance(b.distance).value,
            "weights": wd.iter().map(|(w, c)| (w.to_string(), *c as u64)).collect::<BTreeMap<_, _>>(),
        },
        "simplex_self_orthogonal": simplex.is_self_orthogonal(InnerProduct::Euclidean)?.self_orthogonal,
        "pair": { "n": pair.n(), "k": pair.k(), "distance": pair.distance },
        "lift": { "n": lift.n(), "k": lift.k(), "distance": lift.distance },
    }))
}

fn toric(b: Budgets) -> Result<Value> {
    let mut rows = Vec::new();
    for l in 2..=4usize {
        let cx = toric_complex(l)?;
        let mut q = homological_code(&cx, 1)?;
        let witness = upper_bound_from_witness(&q, &toric_witness(l))?;
        q.distance = quantum_distance(&q, b.distance);
        let hom = cx.homology()?;
        rows.push(json!({
            "L": l,
            "dims": [cx.dim(2), cx.dim(1), cx.dim(0)],
            "betti": [hom.betti[&2], hom.betti[&1], hom.betti[&0]],
            "n": q.n(), "k": q.k(),
            "commute": q.commutation_check().is_none(),
            "witness_bound": witness.value,
            "distance": q.distance,
        }));
    }
    Ok(json!({ "codes": rows }))
}

fn bounds(b: Budgets) -> Result<Value> {
    let s = |r: num_rational::Rational64| r.to_string();
    let eps = epsilon_from_orders(&[2, 2])?;
    let (p1, r1) = refined_bound(10, 2, eps)?;
    let (p2, r2) = refined_bound(64, 16, num_rational::Rational64::from_integer(4))?;
    let (p3, r3) = refined_bound(64, 16, num_rational::Rational64::from_integer(2))?;
    let f = gf(2)?;
    let h = hamming(&f)?;
    let mut steane = css_from_pair(&h, &h)?;
    steane.distance = quantum_distance(&steane, b.distance);
    let sr = bound_report(&steane, num_rational::Rational64::from_integer(0), EpsilonSource::None)?;
    let mut tq = homological_code(&toric_complex(2)?, 1)?;
    tq.distance = quantum_distance(&tq, b.distance);
    let tr = bound_report(&tq, num_rational::Rational64::from_integer(0), EpsilonSource::None)?;
    Ok(json!({
        "two_order_two": { "epsilon": s(eps), "plain": s(p1), "refined": s(r1) },
        "eps_four": { "plain": s(p2), "refined": s(r2) },
        "eps_two": { "plain": s(p3), "refined": s(r3) },
        "steane": serde_json::to_value(&sr)?,
        "toric2": serde_json::to_value(&tr)?,
    }))
}

fn zeta(b: Budgets) -> Result<Value> {
    let p1 = WeightSystem::new(vec![1, 1])?;
    let counts = zeta_counts_space(&p1, 2, 3);
    let series: Vec<String> = zeta_series(&counts).iter().map(|c| c.to_string()).collect();
    let point = Hypersurface::new(p1, GradedPolynomial::parse("x0", &gf(2)?, Some(2))?)?;
    let point_counts = zeta_counts(&point, 3, b.enumeration)?;
    let (h, _, _) = surface112_data(b)?;
    let surface = zeta_counts(&h, 2, b.enumeration)?;
    Ok(json!({
        "p1_gf2": { "counts": counts.iter().map(|&c| c as u64).collect::<Vec<_>>(), "series": series },
        "point_gf2": {
            "counts": point_counts.iter().map(|&c| c as u64).collect::<Vec<_>>(),
            "series": zeta_series(&point_counts).iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        },
        "surface112": { "counts": surface.iter().map(|&c| c as u64).collect::<Vec<_>>() },
    }))
}

fn wprm_plane(b: Budgets) -> Result<Value> {
    let cases: [(u32, u32, u32, u64); 4] = [(1, 1, 1, 5), (1, 2, 4, 5), (1, 2, 3, 7), (2, 3, 6, 5)];
    let rows = cases
        .iter()
        .map(|&(w1, w2, d, q)| Ok(serde_json::to_value(wprm_plane_report(w1, w2, d, &gf(q)?, b.enumeration)?)?))
        .collect::<Result<Vec<_>>>()?;
    let ws = WeightSystem::new(vec![1, 1, 1])?;
    let pts = enumerate_wp_points(&ws, &gf(3)?, b.enumeration)?;
    let c = evaluation_code(&ws, 1, &pts, &gf(3)?)?;
    Ok(json!({ "reports": rows, "p2_gf3_degree1": { "n": c.length(), "k": c.dimension(), "d": c.min_distance(b.distance).value } }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_system_grid() {
        let s = small_weight_systems();
        assert_eq!(s.len(), 6 + 36 + 216);
        assert!(s.contains(&vec![6, 1, 3]));
    }

    #[test]
    fn diff_paths() {
        let a = json!({"x": [1, 2], "y": {"z": 1}});
        let b = json!({"x": [1, 3], "y": {"z": 1, "w": 0}});
        assert_eq!(json_diff(&a, &b), vec!["/x/1".to_string(), "/y/w".to_string()]);
        assert!(json_diff(&a, &a).is_empty());
    }

    #[test]
    fn claims_become_findings() {
        let fx = Fixture {
            name: "bounds".into(),
            description: String::new(),
            expected: compute("bounds", Budgets::default()).unwrap(),
            claims: vec![Claim { path: "/eps_two/refined".into(), value: json!("23"), note: String::new() }],
        };
        let out = evaluate(&fx, Budgets::default());
        assert_eq!(out.status, Status::Finding);
        let fx = Fixture { expected: json!({}), ..fx };
        assert_eq!(evaluate(&fx, Budgets::default()).status, Status::Fail);
    }
}
