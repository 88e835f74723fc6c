//! CSS quantum codes over GF(q).
//!
//! Only the linear-algebra shadow of the stabilizer formalism is kept: a code
//! is a pair of check matrices `H_X`, `H_Z` with `H_X H_Z^T = 0`. Phases never
//! enter the parameters.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::lincode::{
    macwilliams_dual, min_positive_weight, projective_fold, weight, InnerProduct, LinearCode, MatrixGF, RowSpace,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceKind {
    Exact,
    LowerBound,
    UpperBound,
    /// No logical operators (`k = 0`).
    Undefined,
    /// Not computed yet.
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantumDistance {
    pub value: Option<u64>,
    pub kind: DistanceKind,
}

impl QuantumDistance {
    pub const UNKNOWN: QuantumDistance = QuantumDistance { value: None, kind: DistanceKind::Unknown };
    pub const UNDEFINED: QuantumDistance = QuantumDistance { value: None, kind: DistanceKind::Undefined };

    pub fn exact(d: u64) -> Self {
        QuantumDistance { value: Some(d), kind: DistanceKind::Exact }
    }

    pub fn is_exact(&self) -> bool {
        self.kind == DistanceKind::Exact
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CssProvenance {
    pub construction: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner_product: Option<InnerProduct>,
    /// Exact minimum distances of the source classical codes, `[d_C, d_C_perp]`
    /// for a self-orthogonal lift.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classical_distances: Option<Vec<Option<u64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<serde_json::Value>,
}

impl CssProvenance {
    pub fn named(construction: impl Into<String>) -> Self {
        CssProvenance { construction: construction.into(), inner_product: None, classical_distances: None, source: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CssCode {
    field: Field,
    n: usize,
    k: usize,
    hx: MatrixGF,
    hz: MatrixGF,
    pub distance: QuantumDistance,
    pub provenance: CssProvenance,
}

impl CssCode {
    /// Builds a code from check matrices, verifying commutation.
    pub fn new(hx: &MatrixGF, hz: &MatrixGF, provenance: CssProvenance) -> Result<CssCode> {
        if hx.cols() != hz.cols() {
            return Err(Error::ShapeMismatch(format!("H_X has {} columns, H_Z {}", hx.cols(), hz.cols())));
        }
        if hx.field() != hz.field() {
            return Err(Error::FieldMismatch(hx.field().spec_string(), hz.field().spec_string()));
        }
        let code = Self::unchecked(hx, hz, provenance);
        if let Some((i, j)) = code.commutation_check() {
            return Err(Error::Invariant(format!("X check {i} and Z check {j} do not commute")));
        }
        Ok(code)
    }

    /// Builds a code without the commutation check, for inspection.
    pub fn unchecked(hx: &MatrixGF, hz: &MatrixGF, provenance: CssProvenance) -> CssCode {
        let hx = hx.rref().0;
        let hz = hz.rref().0;
        let n = hx.cols();
        let k = n.saturating_sub(hx.rows() + hz.rows());
        CssCode { field: hx.field().clone(), n, k, hx, hz, distance: QuantumDistance::UNKNOWN, provenance }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn hx(&self) -> &MatrixGF {
        &self.hx
    }

    pub fn hz(&self) -> &MatrixGF {
        &self.hz
    }

    /// First pair `(x_row, z_row)` with nonzero overlap, if any.
    pub fn commutation_check(&self) -> Option<(usize, usize)> {
        let f = &self.field;
        for i in 0..self.hx.rows() {
            for j in 0..self.hz.rows() {
                if crate::lincode::dot(f, self.hx.row(i), self.hz.row(j)) != 0 {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// `[[n, k]]` or `[[n, k, d]]`.
    pub fn params(&self) -> String {
        match self.distance.value {
            Some(d) => format!("[[{}, {}, {}]]", self.n, self.k, d),
            None => format!("[[{}, {}]]", self.n, self.k),
        }
    }

    /// Whether `v` is a nontrivial logical operator of either type.
    pub fn is_logical(&self, v: &[Elem]) -> bool {
        let f = &self.field;
        let in_kernel = |h: &MatrixGF| (0..h.rows()).all(|r| crate::lincode::dot(f, h.row(r), v) == 0);
        let z_type = in_kernel(&self.hx) && !RowSpace::new(&self.hz).contains(v);
        let x_type = in_kernel(&self.hz) && !RowSpace::new(&self.hx).contains(v);
        z_type || x_type
    }
}

/// CSS lift of a self-orthogonal code: both check matrices are spanned by
/// the generator (conjugated on the Z side for the Hermitian product).
pub fn css_from_self_orthogonal(c: &LinearCode, ip: InnerProduct) -> Result<CssCode> {
    let check = c.is_self_orthogonal(ip)?;
    if let Some((i, j)) = check.witness {
        return Err(Error::NotSelfOrthogonal(i, j));
    }
    let f = c.field().clone();
    let t = ip.twist(&f)?;
    let hx = c.generator().clone();
    let hz = hx.map(t);
    let mut prov = CssProvenance::named("self-orthogonal");
    prov.inner_product = Some(ip);
    prov.source = c.provenance.as_ref().and_then(|p| serde_json::to_value(p).ok());
    let code = CssCode::new(&hx, &hz, prov)?;
    if code.k != c.length() - 2 * c.dimension() {
        return Err(Error::Invariant(format!("lift has k = {} instead of m - 2k", code.k)));
    }
    Ok(code)
}

/// CSS code from `C1`, `C2` with `C2^perp ⊆ C1`: `H_X` checks `C1`, `H_Z`
/// checks `C2`, and `k = k1 + k2 - n`.
pub fn css_from_pair(c1: &LinearCode, c2: &LinearCode) -> Result<CssCode> {
    let c2_dual = c2.dual(InnerProduct::Euclidean)?;
    if let Some(w) = c1.containment_witness(&c2_dual)? {
        return Err(Error::ContainmentViolated(w));
    }
    let hx = c1.parity_check();
    let hz = c2_dual.generator().clone();
    let code = CssCode::new(&hx, &hz, CssProvenance::named("pair"))?;
    let expect = c1.dimension() + c2.dimension() - c1.length();
    if code.k != expect {
        return Err(Error::Invariant(format!("pair has k = {} instead of {expect}", code.k)));
    }
    Ok(code)
}

/// Smallest weight in `ker(check) \ span(stabilizers)`, or `None` when the
/// kernel lies inside the stabilizer span.
fn logical_weight(check: &MatrixGF, stabilizers: &MatrixGF) -> Option<u64> {
    let kernel = check.kernel();
    let stab = RowSpace::new(stabilizers);
    let n = check.cols();
    let best = projective_fold(
        &kernel,
        || usize::MAX,
        |best, v| {
            let w = weight(v);
            if w < *best && !stab.contains(v) {
                *best = w;
            }
        },
        |a, b| a.min(b),
    );
    (best <= n).then_some(best as u64)
}

/// Minimum distance of `ker(h)` from the weight distribution of the row
/// space of `h`, through MacWilliams.
fn kernel_distance_via_dual(h: &MatrixGF, budget: u128) -> Option<u64> {
    let rows = LinearCode::from_generator(h);
    let dist = rows.weight_distribution(budget).ok()?;
    let dual = macwilliams_dual(&dist, h.cols(), h.field().q()).ok()?;
    min_positive_weight(&dual).map(|w| w as u64)
}

/// Quantum distance: exact when both kernels fit the budget, otherwise a
/// lower bound from the minimum distances of the two kernels (exact again
/// when that bound is 1 and a weight-1 logical exists).
pub fn quantum_distance(code: &CssCode, budget: u128) -> QuantumDistance {
    if code.k == 0 {
        return QuantumDistance::UNDEFINED;
    }
    let q = code.field.q() as u128;
    let fits = |h: &MatrixGF| q.checked_pow((h.cols() - h.rows()) as u32).is_some_and(|s| s <= budget);
    if fits(&code.hx) && fits(&code.hz) {
        let dz = logical_weight(&code.hx, &code.hz);
        let dx = if code.hx == code.hz { dz } else { logical_weight(&code.hz, &code.hx) };
        return match dz.into_iter().chain(dx).min() {
            Some(d) => QuantumDistance::exact(d),
            None => QuantumDistance::UNDEFINED,
        };
    }
    // every logical lies in ker(H_X) or ker(H_Z)
    let bound = if code.hx == code.hz {
        kernel_distance_via_dual(&code.hx, budget)
    } else {
        kernel_distance_via_dual(&code.hx, budget).zip(kernel_distance_via_dual(&code.hz, budget)).map(|(a, b)| a.min(b))
    };
    let bound = bound.unwrap_or(1);
    // a weight-1 logical settles it
    if bound == 1 && (0..code.n).any(|j| {
        let mut e = vec![0; code.n];
        e[j] = 1;
        code.is_logical(&e)
    }) {
        return QuantumDistance::exact(1);
    }
    QuantumDistance { value: Some(bound), kind: DistanceKind::LowerBound }
}

/// Checks a candidate logical operator and returns its weight as an upper
/// bound on the distance.
pub fn upper_bound_from_witness(code: &CssCode, v: &[Elem]) -> Result<QuantumDistance> {
    if v.len() != code.n {
        return Err(Error::LengthMismatch { expected: code.n, got: v.len() });
    }
    if !code.is_logical(v) {
        return Err(Error::NotLogical);
    }
    Ok(QuantumDistance { value: Some(weight(v) as u64), kind: DistanceKind::UpperBound })
}

/// The bound `min(d_C, d_C_perp)` for a self-orthogonal lift,
/// with `d_C_perp` taken from MacWilliams so only `C` is enumerated.
pub fn classical_lower_bound(c: &LinearCode, budget: u128) -> Option<(u64, u64)> {
    let dist = c.weight_distribution(budget).ok()?;
    let dc = min_positive_weight(&dist)? as u64;
    let dual = macwilliams_dual(&dist, c.length(), c.field().q()).ok()?;
    let dd = min_positive_weight(&dual)? as u64;
    Some((dc, dd))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lincode::DEFAULT_DISTANCE_BUDGET;

    fn gf(q: u64) -> Field {
        Field::from_order(q).unwrap()
    }

    fn hamming(f: &Field) -> LinearCode {
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
        .unwrap()
    }

    #[test]
    fn steane_two_ways() {
        let f = gf(2);
        let h = hamming(&f);
        let simplex = h.dual(InnerProduct::Euclidean).unwrap();
        let a = css_from_self_orthogonal(&simplex, InnerProduct::Euclidean).unwrap();
        assert_eq!((a.n(), a.k()), (7, 1));
        assert_eq!(quantum_distance(&a, DEFAULT_DISTANCE_BUDGET), QuantumDistance::exact(3));
        let b = css_from_pair(&h, &h).unwrap();
        assert_eq!((b.n(), b.k()), (7, 1));
        assert_eq!(quantum_distance(&b, DEFAULT_DISTANCE_BUDGET), QuantumDistance::exact(3));
        assert!(b.commutation_check().is_none());
    }

    #[test]
    fn trivial_cases() {
        let f = gf(2);
        let c = LinearCode::from_rows(&f, vec![vec![1, 1]], 2).unwrap();
        let q = css_from_self_orthogonal(&c, InnerProduct::Euclidean).unwrap();
        assert_eq!((q.n(), q.k()), (2, 0));
        assert_eq!(quantum_distance(&q, DEFAULT_DISTANCE_BUDGET), QuantumDistance::UNDEFINED);

        let full = LinearCode::full_space(&f, 4);
        let q = css_from_pair(&full, &full).unwrap();
        assert_eq!((q.n(), q.k()), (4, 4));
        assert_eq!(q.hx().rows() + q.hz().rows(), 0);
        assert_eq!(quantum_distance(&q, DEFAULT_DISTANCE_BUDGET), QuantumDistance::exact(1));

        // over GF(2) the all-ones word has odd weight and is not a parity word
        let par = LinearCode::from_rows(&f, vec![vec![1, 1, 0], vec![0, 1, 1]], 3).unwrap();
        assert_eq!(css_from_pair(&par, &par).unwrap_err(), Error::ContainmentViolated(vec![1, 1, 1]));
        let f3 = gf(3);
        let par = LinearCode::from_rows(&f3, vec![vec![1, 2, 0], vec![0, 1, 2]], 3).unwrap();
        let q = css_from_pair(&par, &par).unwrap();
        assert_eq!((q.n(), q.k()), (3, 1));
    }

    #[test]
    fn rejects_bad_inputs() {
        let f = gf(2);
        let h = hamming(&f);
        assert!(matches!(css_from_self_orthogonal(&h, InnerProduct::Euclidean), Err(Error::NotSelfOrthogonal(..))));
        let rep = LinearCode::from_rows(&f, vec![vec![1, 1, 1]], 3).unwrap();
        assert!(matches!(css_from_pair(&rep, &rep), Err(Error::ContainmentViolated(_))));

        let one = MatrixGF::from_rows(&f, vec![vec![1]], 1).unwrap();
        let bad = CssCode::unchecked(&one, &one, CssProvenance::named("hand"));
        assert_eq!(bad.commutation_check(), Some((0, 0)));
        assert!(CssCode::new(&one, &one, CssProvenance::named("hand")).is_err());
    }

    #[test]
    fn lower_bound_mode() {
        let f = gf(2);
        let simplex = hamming(&f).dual(InnerProduct::Euclidean).unwrap();
        let q = css_from_self_orthogonal(&simplex, InnerProduct::Euclidean).unwrap();
        // kernel has 2^4 vectors, rows have 2^3
        let d = quantum_distance(&q, 8);
        assert_eq!(d.kind, DistanceKind::LowerBound);
        assert_eq!(d.value, Some(3));
        assert_eq!(classical_lower_bound(&simplex, 100), Some((4, 3)));
    }

    #[test]
    fn witness_upper_bound() {
        let f = gf(2);
        let q = css_from_pair(&hamming(&f), &hamming(&f)).unwrap();
        let all_ones = vec![1; 7];
        assert_eq!(upper_bound_from_witness(&q, &all_ones).unwrap().value, Some(7));
        assert_eq!(upper_bound_from_witness(&q, &[0; 7]).unwrap_err(), Error::NotLogical);
    }
}
