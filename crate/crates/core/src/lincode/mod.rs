//! Classical linear codes over GF(q) and the weighted evaluation codes.

mod matrix;

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use matrix::{dot, weight, MatrixGF, RowSpace};

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::gpoly::{den, enumerate_monomials};
use crate::wgeom::{WPoint, WeightSystem};

/// Default cap on the number of codewords any exhaustive search may visit.
pub const DEFAULT_DISTANCE_BUDGET: u128 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum InnerProduct {
    #[default]
    Euclidean,
    /// `<u, v> = sum u_i conj(v_i)`, needs a square field order.
    Hermitian,
}

impl std::str::FromStr for InnerProduct {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(Self::Euclidean),
            "hermitian" => Ok(Self::Hermitian),
            _ => Err(Error::Parse(format!("unknown inner product {s:?}"))),
        }
    }
}

impl InnerProduct {
    /// The coordinate map applied to the second argument.
    pub(crate) fn twist(self, field: &Field) -> Result<impl Fn(Elem) -> Elem + '_> {
        if self == InnerProduct::Hermitian {
            field.sqrt_order()?;
        }
        Ok(move |x| match self {
            InnerProduct::Euclidean => x,
            InnerProduct::Hermitian => field.conjugate(x).expect("square order checked"),
        })
    }

    pub fn apply(self, field: &Field, u: &[Elem], v: &[Elem]) -> Result<Elem> {
        let t = self.twist(field)?;
        Ok(u.iter().zip(v).fold(0, |acc, (&a, &b)| field.add(acc, field.mul(a, t(b)))))
    }
}

/// Where an evaluation code came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub construction: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<Vec<Elem>>,
    /// Some point has `k_S` not dividing the degree, so its column depends
    /// on which orbit member is evaluated.
    #[serde(default)]
    pub representative_dependent: bool,
}

impl Provenance {
    pub fn named(construction: impl Into<String>) -> Self {
        Provenance {
            construction: construction.into(),
            weights: None,
            degree: None,
            surface: None,
            points: Vec::new(),
            representative_dependent: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDistance {
    /// `None` for the zero code.
    pub value: Option<usize>,
    /// When false, `value` is only an upper bound.
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Analysis {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distance: Option<CodeDistance>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight_distribution: Option<BTreeMap<usize, u128>>,
}

/// A linear code with its generator kept in reduced row-echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    generator: MatrixGF,
    pub provenance: Option<Provenance>,
    pub analysis: Analysis,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrthogonalityCheck {
    pub self_orthogonal: bool,
    /// First pair of generator rows with nonzero inner product.
    pub witness: Option<(usize, usize)>,
}

impl LinearCode {
    /// The row space of `m`.
    pub fn from_generator(m: &MatrixGF) -> LinearCode {
        LinearCode { generator: m.rref().0, provenance: None, analysis: Analysis::default() }
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<Elem>>, length: usize) -> Result<LinearCode> {
        Ok(Self::from_generator(&MatrixGF::from_rows(field, rows, length)?))
    }

    pub fn with_provenance(mut self, p: Provenance) -> Self {
        self.provenance = Some(p);
        self
    }

    /// All of `GF(q)^n`.
    pub fn full_space(field: &Field, n: usize) -> LinearCode {
        Self::from_generator(&MatrixGF::identity(field, n))
    }

    pub fn field(&self) -> &Field {
        self.generator.field()
    }

    pub fn length(&self) -> usize {
        self.generator.cols()
    }

    pub fn dimension(&self) -> usize {
        self.generator.rows()
    }

    pub fn generator(&self) -> &MatrixGF {
        &self.generator
    }

    pub fn row_space(&self) -> RowSpace {
        RowSpace::new(&self.generator)
    }

    /// Parity-check matrix: a generator of the Euclidean dual.
    pub fn parity_check(&self) -> MatrixGF {
        self.generator.kernel().rref().0
    }

    pub fn dual(&self, ip: InnerProduct) -> Result<LinearCode> {
        let field = self.field().clone();
        let t = ip.twist(&field)?;
        let g = self.generator.map(t);
        Ok(Self::from_generator(&g.kernel()))
    }

    pub fn is_self_orthogonal(&self, ip: InnerProduct) -> Result<OrthogonalityCheck> {
        let f = self.field();
        let t = ip.twist(f)?;
        let twisted = self.generator.map(t);
        let k = self.dimension();
        for i in 0..k {
            for j in 0..k {
                if dot(f, self.generator.row(i), twisted.row(j)) != 0 {
                    return Ok(OrthogonalityCheck { self_orthogonal: false, witness: Some((i, j)) });
                }
            }
        }
        Ok(OrthogonalityCheck { self_orthogonal: true, witness: None })
    }

    /// A generator row of `other` outside this code, if any.
    pub fn containment_witness(&self, other: &LinearCode) -> Result<Option<Vec<Elem>>> {
        if other.field() != self.field() {
            return Err(Error::FieldMismatch(self.field().spec_string(), other.field().spec_string()));
        }
        if other.length() != self.length() {
            return Err(Error::LengthMismatch { expected: self.length(), got: other.length() });
        }
        let rs = self.row_space();
        Ok(other.generator.to_rows().into_iter().find(|r| !rs.contains(r)))
    }

    pub fn contains(&self, other: &LinearCode) -> Result<bool> {
        Ok(self.containment_witness(other)?.is_none())
    }

    /// Encodes a message of length `k`.
    pub fn encode(&self, msg: &[Elem]) -> Vec<Elem> {
        let f = self.field();
        let mut out = vec![0; self.length()];
        for (i, &m) in msg.iter().enumerate() {
            if m == 0 {
                continue;
            }
            for (o, &g) in out.iter_mut().zip(self.generator.row(i)) {
                *o = f.add(*o, f.mul(m, g));
            }
        }
        out
    }

    /// Number of codewords, `None` on overflow.
    pub fn size(&self) -> Option<u128> {
        (self.field().q() as u128).checked_pow(self.dimension() as u32)
    }

    /// Histogram of codeword weights over all `q^k` codewords.
    pub fn weight_distribution(&self, budget: u128) -> Result<BTreeMap<usize, u128>> {
        crate::wgeom::check_budget(self.size(), budget)?;
        let hist = weight_histogram(&self.generator);
        Ok(hist
            .into_iter()
            .enumerate()
            .filter(|(_, c)| *c > 0)
            .collect())
    }

    /// Exact minimum distance when `q^k <= budget`; otherwise the smaller of
    /// the Singleton ceiling and the lightest generator row, flagged inexact.
    pub fn min_distance(&self, budget: u128) -> CodeDistance {
        let k = self.dimension();
        if k == 0 {
            return CodeDistance { value: None, exact: true };
        }
        match self.size() {
            Some(n) if n <= budget => {
                let hist = weight_histogram(&self.generator);
                let d = hist.iter().enumerate().skip(1).find(|(_, &c)| c > 0).map(|(w, _)| w);
                CodeDistance { value: d, exact: true }
            }
            _ => {
                let singleton = self.length() + 1 - k;
                let row_min = (0..k).map(|i| weight(self.generator.row(i))).min().unwrap_or(singleton);
                CodeDistance { value: Some(singleton.min(row_min)), exact: false }
            }
        }
    }

    /// Fills the cached analyses.
    pub fn analyze(&mut self, budget: u128) {
        self.analysis.distance = Some(self.min_distance(budget));
        self.analysis.weight_distribution = self.weight_distribution(budget).ok();
    }
}

/// Visits every codeword of `span(basis)` whose leading message coordinate is
/// 1, folding per task and reducing. Each projective class is seen once.
pub(crate) fn projective_fold<T, I, F, R>(basis: &MatrixGF, identity: I, fold: F, reduce: R) -> T
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    F: Fn(&mut T, &[Elem]) + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    let field = basis.field();
    let q = field.q();
    let k = basis.rows();
    let m = basis.cols();
    // multiples[row][c] = c * row
    let multiples: Vec<Vec<Vec<Elem>>> = (0..k)
        .map(|r| {
            (0..q)
                .map(|c| basis.row(r).iter().map(|&x| field.mul(c, x)).collect())
                .collect()
        })
        .collect();
    let mut tasks: Vec<(usize, Option<u32>)> = Vec::new();
    for lead in 0..k {
        if lead + 1 < k {
            tasks.extend((0..q).map(|c| (lead, Some(c))));
        } else {
            tasks.push((lead, None));
        }
    }

    fn rec<T, F: Fn(&mut T, &[Elem])>(
        field: &Field,
        mults: &[Vec<Vec<Elem>>],
        bufs: &mut [Vec<Elem>],
        acc: &mut T,
        fold: &F,
    ) {
        if mults.is_empty() {
            fold(acc, &bufs[0]);
            return;
        }
        let (head, tail) = bufs.split_at_mut(1);
        for row in &mults[0] {
            for ((o, &a), &b) in tail[0].iter_mut().zip(&head[0]).zip(row) {
                *o = field.add(a, b);
            }
            rec(field, &mults[1..], tail, acc, fold);
        }
    }

    tasks
        .into_par_iter()
        .map(|(lead, second)| {
            let mut acc = identity();
            let mut start = basis.row(lead).to_vec();
            let mut rest = lead + 1;
            if let Some(c) = second {
                for (s, &x) in start.iter_mut().zip(&multiples[lead + 1][c as usize]) {
                    *s = field.add(*s, x);
                }
                rest += 1;
            }
            let depth = k - rest;
            let mut bufs = vec![vec![0; m]; depth + 1];
            bufs[0] = start;
            rec(field, &multiples[rest..], &mut bufs, &mut acc, &fold);
            acc
        })
        .reduce(&identity, &reduce)
}

/// Weight histogram (index = weight) over every codeword of the row space of
/// a full-rank matrix.
pub(crate) fn weight_histogram(basis: &MatrixGF) -> Vec<u128> {
    let m = basis.cols();
    let units = basis.field().q() as u128 - 1;
    let mut hist = projective_fold(
        basis,
        || vec![0u128; m + 1],
        |h, v| h[weight(v)] += 1,
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        },
    );
    hist.iter_mut().for_each(|c| *c *= units);
    hist[0] += 1;
    hist
}

/// Weight distribution of the Euclidean dual from that of the code, by the
/// MacWilliams transform.
pub fn macwilliams_dual(dist: &BTreeMap<usize, u128>, n: usize, q: u32) -> Result<BTreeMap<usize, BigUint>> {
    let size: u128 = dist.values().sum();
    let binom = |a: usize, b: usize| -> BigInt {
        if b > a {
            return BigInt::zero();
        }
        let mut r = BigInt::from(1);
        for i in 0..b {
            r = r * BigInt::from(a - i) / BigInt::from(i + 1);
        }
        r
    };
    let qm1 = BigInt::from(q - 1);
    let mut out = BTreeMap::new();
    for j in 0..=n {
        let mut total = BigInt::zero();
        for (&i, &a) in dist {
            // Krawtchouk K_j(i)
            let mut k = BigInt::zero();
            for s in 0..=j.min(i) {
                let term = binom(i, s) * binom(n - i, j - s) * qm1.pow((j - s) as u32);
                if s % 2 == 0 {
                    k += term;
                } else {
                    k -= term;
                }
            }
            total += k * BigInt::from(a);
        }
        let size = BigInt::from(size);
        if (&total % &size) != BigInt::zero() || total.is_negative() {
            return Err(Error::Invariant(format!("MacWilliams coefficient {j} is not a nonnegative integer")));
        }
        let c = (total / size).to_biguint().expect("nonnegative");
        if !c.is_zero() {
            out.insert(j, c);
        }
    }
    Ok(out)
}

/// Smallest positive weight in a distribution.
pub fn min_positive_weight<V: Zero>(dist: &BTreeMap<usize, V>) -> Option<usize> {
    dist.iter().find(|(&w, c)| w > 0 && !c.is_zero()).map(|(&w, _)| w)
}

/// Evaluation matrix: one row per monomial of degree `d` (graded-lex order),
/// one column per point representative.
pub fn evaluation_matrix(ws: &WeightSystem, d: u32, points: &[WPoint], field: &Field) -> Result<MatrixGF> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let monos = enumerate_monomials(ws.weights(), d);
    debug_assert_eq!(monos.len() as u64, den(ws.weights(), d));
    let mut m = MatrixGF::zeros(field, monos.len(), points.len());
    for (c, pt) in points.iter().enumerate() {
        if pt.rep.len() != ws.len() {
            return Err(Error::LengthMismatch { expected: ws.len(), got: pt.rep.len() });
        }
        for (r, mono) in monos.iter().enumerate() {
            m.set(r, c, mono.evaluate(field, &pt.rep));
        }
    }
    Ok(m)
}

/// The image of `S_d` under evaluation at the given points.
pub fn evaluation_code(ws: &WeightSystem, d: u32, points: &[WPoint], field: &Field) -> Result<LinearCode> {
    let m = evaluation_matrix(ws, d, points, field)?;
    let representative_dependent = points.iter().any(|p| p.k_s > 1 && !d.is_multiple_of(p.k_s));
    let prov = Provenance {
        construction: "evaluation".into(),
        weights: Some(ws.weights().to_vec()),
        degree: Some(d),
        surface: None,
        points: points.iter().map(|p| p.rep.clone()).collect(),
        representative_dependent,
    };
    Ok(LinearCode::from_generator(&m).with_provenance(prov))
}

/// Closed-form dimension estimate for WPRM codes on `WP(1, w1, w2)`:
///
/// `sum_{i=0}^{mu1} (floor((d - w1 i)/w2) + 1) - sum_{i=0}^{l} (q - 1 - i)`
///
/// with `mu1 = min(floor(d/w1), q-1)` and `l = min(q-1, floor((d - w1(q-1))/w2))`.
/// The second sum is empty when `d < w1 (q-1)`. The overlap correction term
/// has no closed form and is left out, so this is only an estimate; compare
/// it with the rank of [`evaluation_code`].
pub fn wprm_plane_dimension(w1: u32, w2: u32, d: u32, q: u32) -> i64 {
    let (w1, w2, d, q) = (w1 as i64, w2 as i64, d as i64, q as i64);
    let mu1 = (d / w1).min(q - 1);
    let first: i64 = (0..=mu1).map(|i| (d - w1 * i).div_euclid(w2) + 1).sum();
    let rest = d - w1 * (q - 1);
    let second: i64 = if rest < 0 {
        0
    } else {
        let l = (rest / w2).min(q - 1);
        (0..=l).map(|i| q - 1 - i).sum()
    };
    first - second
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneDimensionReport {
    pub weights: [u32; 3],
    pub degree: u32,
    pub q: u32,
    pub closed_form: i64,
    pub rank: usize,
    pub agrees: bool,
    pub experimental: bool,
}

/// Closed form beside the evaluation rank on all points of `WP(1, w1, w2)`.
pub fn wprm_plane_report(w1: u32, w2: u32, d: u32, field: &Field, budget: u128) -> Result<PlaneDimensionReport> {
    let ws = WeightSystem::new(vec![1, w1, w2])?;
    let pts = crate::wgeom::enumerate_wp_points(&ws, field, budget)?;
    let rank = evaluation_code(&ws, d, &pts, field)?.dimension();
    let closed_form = wprm_plane_dimension(w1, w2, d, field.q());
    Ok(PlaneDimensionReport {
        weights: [1, w1, w2],
        degree: d,
        q: field.q(),
        closed_form,
        rank,
        agrees: closed_form == rank as i64,
        experimental: true,
    })
}

/// Greedy totally isotropic subspace of the span of `candidates`.
///
/// Candidate rows are scanned in order to pick a basis, so the first rows
/// take precedence. At each step the search looks in the orthogonal of the
/// current subspace for an isotropic vector built from one, two, or three
/// basis vectors, and stops at `target` or when none is found.
pub fn isotropic_subcode(candidates: &MatrixGF, ip: InnerProduct, target: Option<usize>) -> Result<LinearCode> {
    let field = candidates.field().clone();
    let t = ip.twist(&field)?;
    let f = &field;

    let mut basis = MatrixGF::zeros(f, 0, candidates.cols());
    for r in 0..candidates.rows() {
        let mut trial = basis.clone();
        trial.push_row(candidates.row(r))?;
        if trial.rank() == trial.rows() {
            basis = trial;
        }
    }
    let r = basis.rows();
    let twisted = basis.map(&t);
    let gram: Vec<Vec<Elem>> = (0..r)
        .map(|i| (0..r).map(|j| dot(f, basis.row(i), twisted.row(j))).collect())
        .collect();
    let form = |a: &[Elem], b: &[Elem]| -> Elem {
        let mut acc = 0;
        for i in 0..r {
            if a[i] == 0 {
                continue;
            }
            let mut s = 0;
            for j in 0..r {
                if b[j] != 0 {
                    s = f.add(s, f.mul(gram[i][j], t(b[j])));
                }
            }
            acc = f.add(acc, f.mul(a[i], s));
        }
        acc
    };

    let mut chosen: Vec<Vec<Elem>> = Vec::new();
    let goal = target.unwrap_or(r);
    while chosen.len() < goal {
        // a -> <a, b> for each chosen b
        let mut cons = MatrixGF::zeros(f, 0, r);
        for b in &chosen {
            let row: Vec<Elem> = (0..r)
                .map(|i| {
                    let unit: Vec<Elem> = (0..r).map(|k| (k == i) as Elem).collect();
                    form(&unit, b)
                })
                .collect();
            cons.push_row(&row)?;
        }
        let perp = if chosen.is_empty() { MatrixGF::identity(f, r) } else { cons.kernel() };
        let mut span = MatrixGF::from_rows(f, chosen.clone(), r)?;
        let mut comp: Vec<Vec<Elem>> = Vec::new();
        for i in 0..perp.rows() {
            let mut trial = span.clone();
            trial.push_row(perp.row(i))?;
            if trial.rank() == trial.rows() {
                span = trial;
                comp.push(perp.row(i).to_vec());
            }
        }
        match find_isotropic(f, &comp, &form) {
            Some(v) => chosen.push(v),
            None => break,
        }
    }

    let rows: Vec<Vec<Elem>> = chosen
        .iter()
        .map(|a| {
            let mut v = vec![0; basis.cols()];
            for (i, &c) in a.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for (o, &x) in v.iter_mut().zip(basis.row(i)) {
                    *o = f.add(*o, f.mul(c, x));
                }
            }
            v
        })
        .collect();
    LinearCode::from_rows(f, rows, candidates.cols())
}

fn find_isotropic(f: &Field, comp: &[Vec<Elem>], form: &impl Fn(&[Elem], &[Elem]) -> Elem) -> Option<Vec<Elem>> {
    let combo = |parts: &[(usize, Elem)]| -> Vec<Elem> {
        let mut v = vec![0; comp[0].len()];
        for &(i, c) in parts {
            for (o, &x) in v.iter_mut().zip(&comp[i]) {
                *o = f.add(*o, f.mul(c, x));
            }
        }
        v
    };
    let iso = |v: &Vec<Elem>| form(v, v) == 0;
    let n = comp.len();
    for i in 0..n {
        if iso(&comp[i]) {
            return Some(comp[i].clone());
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for a in 1..f.q() {
                let v = combo(&[(i, 1), (j, a)]);
                if iso(&v) {
                    return Some(v);
                }
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for a in 1..f.q() {
                    for b in 1..f.q() {
                        let v = combo(&[(i, 1), (j, a), (k, b)]);
                        if iso(&v) {
                            return Some(v);
                        }
                    }
                }
            }
        }
    }
    None
}

/// Brute-force check used by the CLI: the largest zero count over all
/// nonzero codewords, i.e. `n - d`.
pub fn max_zero_count(code: &LinearCode, budget: u128) -> Result<Option<usize>> {
    crate::wgeom::check_budget(code.size(), budget)?;
    if code.dimension() == 0 {
        return Ok(None);
    }
    let n = code.length();
    let best = projective_fold(
        code.generator(),
        || 0usize,
        |b, v| *b = (*b).max(n - weight(v)),
        |a, b| a.max(b),
    );
    Ok(Some(best))
}
