//! Weighted projective spaces over GF(q).
//!
//! A point of `WP(w0, .., wn)` is an orbit of `GF(q)^*` acting on nonzero
//! tuples by `l.(x0, .., xn) = (l^w0 x0, .., l^wn xn)`. Each orbit is stored
//! through its lexicographically smallest member, comparing coordinates by
//! element index.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_integer::gcd;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};

/// Default cap on the number of affine tuples walked by any enumeration.
pub const DEFAULT_ENUM_BUDGET: u128 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSystem {
    weights: Vec<u32>,
    well_formed: bool,
}

impl WeightSystem {
    pub fn new(weights: Vec<u32>) -> Result<WeightSystem> {
        if weights.is_empty() {
            return Err(Error::InvalidWeights("no weights".into()));
        }
        if weights.contains(&0) {
            return Err(Error::InvalidWeights(format!("zero weight in {weights:?}")));
        }
        let well_formed = weights.iter().fold(0, |g, &w| gcd(g, w)) == 1;
        Ok(WeightSystem { weights, well_formed })
    }

    /// Parses `"2,4,6,10"`.
    pub fn parse(s: &str) -> Result<WeightSystem> {
        let w = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad weight list {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        WeightSystem::new(w)
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// Overall gcd is 1.
    pub fn well_formed(&self) -> bool {
        self.well_formed
    }

    /// Number of coordinates `n + 1`.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `k_S = gcd{w_i : i in S}`.
    pub fn k_s(&self, support: &[usize]) -> u32 {
        support.iter().fold(0, |g, &i| gcd(g, self.weights[i]))
    }
}

/// Which stabilizer order a singular point carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum StabilizerConvention {
    /// `k_S`, the order of `mu_{k_S}` over the algebraic closure.
    #[default]
    Geometric,
    /// `gcd(k_S, q - 1)`, the GF(q)-rational stabilizing scalars.
    Arithmetic,
}

impl std::str::FromStr for StabilizerConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "geometric" => Ok(Self::Geometric),
            "arithmetic" => Ok(Self::Arithmetic),
            _ => Err(Error::Parse(format!("unknown stabilizer convention {s:?}"))),
        }
    }
}

/// A rational point given by its canonical orbit representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WPoint {
    pub rep: Vec<Elem>,
    pub support: Vec<usize>,
    pub k_s: u32,
    pub stab_arith: u32,
    pub orbit_size: u32,
}

impl WPoint {
    pub fn stab_geometric(&self) -> u32 {
        self.k_s
    }

    pub fn stabilizer(&self, convention: StabilizerConvention) -> u32 {
        match convention {
            StabilizerConvention::Geometric => self.k_s,
            StabilizerConvention::Arithmetic => self.stab_arith,
        }
    }
}

impl PartialOrd for WPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for WPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rep.cmp(&other.rep)
    }
}

/// Precomputed scalings `l^{w_i}` for every `l = g^j`.
pub(crate) struct Scaler {
    /// `factors[j * len + i] = g^(j * w_i)`.
    factors: Vec<Elem>,
    len: usize,
    units: usize,
}

impl Scaler {
    pub(crate) fn new(ws: &WeightSystem, field: &Field) -> Scaler {
        let units = field.q() as usize - 1;
        let len = ws.len();
        let mut factors = Vec::with_capacity(units * len);
        for j in 0..units as u64 {
            for &w in ws.weights() {
                factors.push(field.exp(j * w as u64));
            }
        }
        Scaler { factors, len, units }
    }

    #[inline]
    fn factor(&self, j: usize, i: usize) -> Elem {
        self.factors[j * self.len + i]
    }

    /// True when no scaling of `x` is lexicographically smaller than `x`.
    pub(crate) fn is_canonical(&self, x: &[Elem], field: &Field) -> bool {
        for j in 1..self.units {
            for (i, &xi) in x.iter().enumerate() {
                let y = field.mul(self.factor(j, i), xi);
                match y.cmp(&xi) {
                    Ordering::Less => return false,
                    Ordering::Greater => break,
                    Ordering::Equal => {}
                }
            }
        }
        true
    }

    pub(crate) fn canonical(&self, x: &[Elem], field: &Field) -> Vec<Elem> {
        let mut best = x.to_vec();
        let mut cand = vec![0; x.len()];
        for j in 1..self.units {
            for (i, &xi) in x.iter().enumerate() {
                cand[i] = field.mul(self.factor(j, i), xi);
            }
            if cand < best {
                best.copy_from_slice(&cand);
            }
        }
        best
    }
}

fn point_data(rep: Vec<Elem>, ws: &WeightSystem, q: u32) -> WPoint {
    let support: Vec<usize> = rep
        .iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(i, _)| i)
        .collect();
    let k_s = ws.k_s(&support);
    let stab_arith = gcd(k_s, q - 1);
    WPoint { rep, support, k_s, stab_arith, orbit_size: (q - 1) / stab_arith }
}

fn check_tuple(tuple: &[Elem], ws: &WeightSystem, field: &Field) -> Result<()> {
    if tuple.len() != ws.len() {
        return Err(Error::LengthMismatch { expected: ws.len(), got: tuple.len() });
    }
    for &x in tuple {
        field.check(x)?;
    }
    if tuple.iter().all(|&x| x == 0) {
        return Err(Error::ZeroTuple);
    }
    Ok(())
}

/// The canonical orbit representative of a nonzero tuple.
pub fn canonical_rep(tuple: &[Elem], ws: &WeightSystem, field: &Field) -> Result<WPoint> {
    check_tuple(tuple, ws, field)?;
    let rep = Scaler::new(ws, field).canonical(tuple, field);
    Ok(point_data(rep, ws, field.q()))
}

/// Like [`canonical_rep`] but reuses a prebuilt scaler.
pub(crate) fn canonical_with(scaler: &Scaler, tuple: &[Elem], ws: &WeightSystem, field: &Field) -> WPoint {
    point_data(scaler.canonical(tuple, field), ws, field.q())
}

/// `q^len`, or `None` on overflow.
pub(crate) fn tuple_count(q: u32, len: usize) -> Option<u128> {
    (q as u128).checked_pow(len as u32)
}

pub(crate) fn check_budget(needed: Option<u128>, budget: u128) -> Result<u128> {
    match needed {
        Some(n) if n <= budget => Ok(n),
        Some(n) => Err(Error::BudgetExceeded { needed: n, budget }),
        None => Err(Error::BudgetExceeded { needed: u128::MAX, budget }),
    }
}

/// Advances a mixed-radix counter with the last coordinate fastest, giving
/// lexicographic order. Returns false after the last tuple.
#[inline]
pub(crate) fn next_tuple(x: &mut [Elem], q: u32) -> bool {
    for i in (0..x.len()).rev() {
        x[i] += 1;
        if x[i] < q {
            return true;
        }
        x[i] = 0;
    }
    false
}

/// Every rational point of `WP(ws)` over the field, sorted by representative.
pub fn enumerate_wp_points(ws: &WeightSystem, field: &Field, budget: u128) -> Result<Vec<WPoint>> {
    check_budget(tuple_count(field.q(), ws.len()), budget)?;
    let scaler = Scaler::new(ws, field);
    let mut x = vec![0; ws.len()];
    let mut out = Vec::new();
    while next_tuple(&mut x, field.q()) {
        if scaler.is_canonical(&x, field) {
            out.push(point_data(x.clone(), ws, field.q()));
        }
    }
    Ok(out)
}

/// The closed-form orbit count, summing over nonempty supports.
pub fn count_wp_points_formula(ws: &WeightSystem, q: u64) -> u128 {
    let n = ws.len();
    let unit = (q - 1) as u128;
    let mut total = 0u128;
    for mask in 1u64..(1u64 << n) {
        let support: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let k = ws.k_s(&support) as u128;
        total += unit.pow(support.len() as u32 - 1) * gcd(k, unit);
    }
    total
}

/// How coordinates are lifted to integers for heights.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum HeightConvention {
    /// Lift each coordinate to its element index.
    #[default]
    IndexLift,
    /// q-adic absolute value; every nonzero coordinate has size 1.
    Valuation,
}

impl std::str::FromStr for HeightConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "index-lift" => Ok(Self::IndexLift),
            "valuation" => Ok(Self::Valuation),
            _ => Err(Error::Parse(format!("unknown height convention {s:?}"))),
        }
    }
}

/// The value `lift^(1/w)`, compared exactly.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Height {
    pub lift: u64,
    pub w: u32,
}

impl Height {
    pub const ONE: Height = Height { lift: 1, w: 1 };

    pub fn value(&self) -> f64 {
        (self.lift as f64).powf(1.0 / self.w as f64)
    }

    /// `lift^(1/w) <= bound`, exactly.
    pub fn at_most(&self, bound: u64) -> bool {
        BigUint::from(self.lift) <= BigUint::from(bound).pow(self.w)
    }
}

impl PartialEq for Height {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Height {}

impl PartialOrd for Height {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Height {
    fn cmp(&self, other: &Self) -> Ordering {
        // a^(1/v) vs b^(1/w)  <=>  a^w vs b^v
        let lhs = BigUint::from(self.lift).pow(other.w);
        let rhs = BigUint::from(other.lift).pow(self.w);
        lhs.cmp(&rhs)
    }
}

/// `max_i lift(x_i)^(1/w_i)` over the support; the first maximizing
/// coordinate supplies the returned pair.
pub fn weighted_height(point: &WPoint, ws: &WeightSystem, convention: HeightConvention) -> Height {
    tuple_height(&point.rep, ws.weights(), convention)
}

pub(crate) fn tuple_height(x: &[Elem], weights: &[u32], convention: HeightConvention) -> Height {
    if convention == HeightConvention::Valuation {
        return Height::ONE;
    }
    let mut best: Option<Height> = None;
    for (&xi, &w) in x.iter().zip(weights) {
        if xi == 0 {
            continue;
        }
        let h = Height { lift: xi as u64, w };
        if best.is_none_or(|b| h > b) {
            best = Some(h);
        }
    }
    best.unwrap_or(Height::ONE)
}

/// One singular geometric point found among the rational points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    /// Smallest canonical representative among the merged orbits.
    pub point: Vec<Elem>,
    /// `|G_p|` under the census convention, always at least 2.
    pub order: u64,
    /// Number of GF(q)-orbits that coincide over the algebraic closure.
    #[serde(default = "one")]
    pub orbits: u32,
}

fn one() -> u32 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct OrbifoldData {
    pub convention: StabilizerConvention,
    pub entries: Vec<CensusEntry>,
}

/// Whether two rational points with the same support become the same point
/// over the algebraic closure, i.e. `y_i / x_i = l^{w_i}` is solvable for a
/// single `l` in some extension.
///
/// Any such `l` is a root of unity of order dividing `M`, the prime-to-p part
/// of `(q-1) k_S`. Writing `l = z^t` for a generator `z` of `mu_M` with
/// `z^(M/(q-1)) = g`, the condition becomes `t w_i = (M/(q-1)) log(y_i/x_i)`
/// mod `M` for all `i` in the support.
pub fn same_geometric_point(x: &WPoint, y: &WPoint, ws: &WeightSystem, field: &Field) -> bool {
    if x.support != y.support {
        return false;
    }
    let p = field.p() as u64;
    let units = field.q() as u64 - 1;
    let mut m = units * x.k_s as u64;
    while m.is_multiple_of(p) {
        m /= p;
    }
    let c = m / units;
    let targets: Vec<(u64, u64)> = x
        .support
        .iter()
        .map(|&i| {
            let ratio = field.div(y.rep[i], x.rep[i]).expect("support entries are nonzero");
            let e = field.log(ratio).expect("ratio is nonzero") as u64;
            (ws.weights()[i] as u64 % m, (c * e) % m)
        })
        .collect();
    (0..m).any(|t| targets.iter().all(|&(w, r)| (t * w) % m == r))
}

/// Points with a nontrivial stabilizer, merging rational orbits that are one
/// geometric point.
pub fn singular_census(
    points: &[WPoint],
    ws: &WeightSystem,
    field: &Field,
    convention: StabilizerConvention,
) -> OrbifoldData {
    let mut classes: Vec<(WPoint, u32)> = Vec::new();
    for pt in points {
        if pt.stabilizer(convention) < 2 {
            continue;
        }
        match classes
            .iter_mut()
            .find(|(rep, _)| same_geometric_point(rep, pt, ws, field))
        {
            Some((_, n)) => *n += 1,
            None => classes.push((pt.clone(), 1)),
        }
    }
    let mut entries: Vec<CensusEntry> = classes
        .into_iter()
        .map(|(pt, orbits)| CensusEntry {
            order: pt.stabilizer(convention) as u64,
            point: pt.rep,
            orbits,
        })
        .collect();
    entries.sort_by(|a, b| a.point.cmp(&b.point));
    OrbifoldData { convention, entries }
}

/// `|P^k(GF(q))|`, zero for negative `k`.
pub fn projective_count(q: u64, k: i64) -> u128 {
    if k < 0 {
        return 0;
    }
    (0..=k as u32).map(|i| (q as u128).pow(i)).sum()
}

/// Serre-type bound on the number of GF(q)-points of a degree-`e`
/// hypersurface in `WP(weights)`, with `N` the number of coordinates:
///
/// `min{ p_{N-1}, floor(e / w1) q^{N-2} + p_{N-3} }`
///
/// where `w1` is the second-smallest weight, which must be 1, and
/// `p_k = |P^k(GF(q))|` with `p_k = 0` for `k < 0`.
pub fn serre_bound(weights: &[u32], e: u32, q: u64) -> Result<u128> {
    let mut sorted = weights.to_vec();
    sorted.sort_unstable();
    if sorted.len() < 2 || sorted[1] != 1 {
        return Err(Error::InapplicableBound(format!(
            "second-smallest weight of {weights:?} is not 1"
        )));
    }
    let n = sorted.len() as i64;
    let w1 = sorted[1] as u128;
    let lead = (e as u128 / w1) * (q as u128).pow((n - 2) as u32) + projective_count(q, n - 3);
    Ok(projective_count(q, n - 1).min(lead))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> Field {
        Field::from_order(q).unwrap()
    }

    fn ws(w: &[u32]) -> WeightSystem {
        WeightSystem::new(w.to_vec()).unwrap()
    }

    #[test]
    fn canonical_examples() {
        let gf5 = f(5);
        let w = ws(&[1, 2]);
        let p = canonical_rep(&[4, 1], &w, &gf5).unwrap();
        assert_eq!(p.rep, vec![1, 1]);
        let p = canonical_rep(&[0, 1], &w, &gf5).unwrap();
        assert_eq!((p.rep.clone(), p.orbit_size, p.stab_arith), (vec![0, 1], 2, 2));
        let w3 = ws(&[1, 3, 5]);
        assert_eq!(canonical_rep(&[3, 0, 0], &w3, &gf5).unwrap().rep, vec![1, 0, 0]);
        assert_eq!(canonical_rep(&[0, 0], &w, &gf5).unwrap_err(), Error::ZeroTuple);
    }

    #[test]
    fn wp12_orbit_by_hand() {
        // orbit of (4,1) under l -> (l x, l^2 y) over GF(5)
        let gf5 = f(5);
        let mut orbit: Vec<Vec<u32>> = (1..5u32)
            .map(|l| vec![gf5.mul(l, 4), gf5.mul(gf5.mul(l, l), 1)])
            .collect();
        orbit.sort();
        assert_eq!(orbit, vec![vec![1, 1], vec![2, 4], vec![3, 4], vec![4, 1]]);
    }

    #[test]
    fn point_counts() {
        assert_eq!(enumerate_wp_points(&ws(&[1, 2]), &f(5), DEFAULT_ENUM_BUDGET).unwrap().len(), 7);
        assert_eq!(enumerate_wp_points(&ws(&[1, 1]), &f(7), DEFAULT_ENUM_BUDGET).unwrap().len(), 8);
        assert_eq!(enumerate_wp_points(&ws(&[1, 2]), &f(4), DEFAULT_ENUM_BUDGET).unwrap().len(), 5);
        assert_eq!(count_wp_points_formula(&ws(&[1, 2]), 5), 7);
        assert_eq!(count_wp_points_formula(&ws(&[1, 2, 3]), 7), 60);
        assert_eq!(count_wp_points_formula(&ws(&[1, 1, 1, 1]), 3), 40);
    }

    #[test]
    fn budget_is_enforced() {
        let err = enumerate_wp_points(&ws(&[1, 1, 1]), &f(5), 100).unwrap_err();
        assert_eq!(err, Error::BudgetExceeded { needed: 125, budget: 100 });
    }

    #[test]
    fn heights() {
        let w = ws(&[1, 2]);
        let gf5 = f(5);
        // orbit of (2,1) is {(2,1), (4,4), (1,4), (3,1)}
        let p = canonical_rep(&[2, 1], &w, &gf5).unwrap();
        assert_eq!(p.rep, vec![1, 4]);
        let h = weighted_height(&p, &w, HeightConvention::IndexLift);
        assert_eq!((h.lift, h.w), (4, 2));
        let p = canonical_rep(&[0, 1], &w, &gf5).unwrap();
        assert_eq!(weighted_height(&p, &w, HeightConvention::IndexLift), Height::ONE);
        assert_eq!(weighted_height(&p, &w, HeightConvention::Valuation), Height::ONE);
        // 4^(1/2) == 2^(1/1)
        assert_eq!(Height { lift: 4, w: 2 }, Height { lift: 2, w: 1 });
        assert!(Height { lift: 5, w: 2 } > Height { lift: 2, w: 1 });
        assert!(Height { lift: 8, w: 3 }.at_most(2));
        assert!(!Height { lift: 9, w: 3 }.at_most(2));
    }

    #[test]
    fn census_examples() {
        let gf5 = f(5);
        let w = ws(&[1, 2]);
        let pts = enumerate_wp_points(&w, &gf5, DEFAULT_ENUM_BUDGET).unwrap();
        for conv in [StabilizerConvention::Geometric, StabilizerConvention::Arithmetic] {
            let c = singular_census(&pts, &w, &gf5, conv);
            assert_eq!(c.entries.len(), 1);
            assert_eq!(c.entries[0].point, vec![0, 1]);
            assert_eq!(c.entries[0].order, 2);
            assert_eq!(c.entries[0].orbits, 2);
        }

        let gf7 = f(7);
        let w = ws(&[1, 2, 3]);
        let pts = enumerate_wp_points(&w, &gf7, DEFAULT_ENUM_BUDGET).unwrap();
        let c = singular_census(&pts, &w, &gf7, StabilizerConvention::Geometric);
        let orders: Vec<u64> = c.entries.iter().map(|e| e.order).collect();
        assert_eq!(orders, vec![3, 2]);
        assert_eq!(c.entries[0].point, vec![0, 0, 1]);
        assert_eq!(c.entries[1].point, vec![0, 1, 0]);

        let w = ws(&[1, 1, 1]);
        let pts = enumerate_wp_points(&w, &gf5, DEFAULT_ENUM_BUDGET).unwrap();
        assert!(singular_census(&pts, &w, &gf5, StabilizerConvention::Geometric).entries.is_empty());

        // over GF(4) the weight-2 vertex has no rational stabilizer
        let gf4 = f(4);
        let w = ws(&[1, 2]);
        let pts = enumerate_wp_points(&w, &gf4, DEFAULT_ENUM_BUDGET).unwrap();
        assert!(singular_census(&pts, &w, &gf4, StabilizerConvention::Arithmetic).entries.is_empty());
        assert_eq!(singular_census(&pts, &w, &gf4, StabilizerConvention::Geometric).entries.len(), 1);
    }

    #[test]
    fn geometric_identification_needs_common_root() {
        // WP(1,1) over GF(5): distinct points of P^1 never merge
        let gf5 = f(5);
        let w = ws(&[2, 2]);
        let a = canonical_rep(&[1, 1], &w, &gf5).unwrap();
        let b = canonical_rep(&[1, 2], &w, &gf5).unwrap();
        assert_ne!(a.rep, b.rep);
        assert!(!same_geometric_point(&a, &b, &w, &gf5));
        // (1,4) = (-1)^2-ish twist of (1,1): y/x = (1,4) needs l^2 = 1 and l^2 = 4
        let c = canonical_rep(&[1, 4], &w, &gf5).unwrap();
        assert!(!same_geometric_point(&a, &c, &w, &gf5));
    }

    #[test]
    fn serre_bound_examples() {
        assert_eq!(serre_bound(&[1, 1], 1, 7).unwrap(), 1);
        // min{ |P^2| = 31, 4 * 5 + |P^0| = 21 }
        assert_eq!(serre_bound(&[1, 1, 2], 4, 5).unwrap(), 21);
        // a line in P^2 meets q + 1 points
        assert_eq!(serre_bound(&[1, 1, 1], 1, 5).unwrap(), 6);
        assert!(matches!(serre_bound(&[1, 2, 3], 6, 5), Err(Error::InapplicableBound(_))));
    }
}
