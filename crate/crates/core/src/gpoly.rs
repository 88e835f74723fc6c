//! The graded ring `GF(q)[x0, .., xn]` with `deg xi = wi`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::wgeom::{self, check_budget, next_tuple, tuple_count, Scaler, WPoint, WeightSystem};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial {
    pub exps: Vec<u32>,
}

impl Monomial {
    pub fn degree(&self, weights: &[u32]) -> u32 {
        self.exps.iter().zip(weights).map(|(a, w)| a * w).sum()
    }

    pub fn evaluate(&self, field: &Field, x: &[Elem]) -> Elem {
        self.exps
            .iter()
            .zip(x)
            .fold(1, |acc, (&a, &xi)| field.mul(acc, field.pow_u(xi, a as u64)))
    }
}

/// Number of monomials of weighted degree `d`.
pub fn den(weights: &[u32], d: u32) -> u64 {
    let d = d as usize;
    let mut ways = vec![0u64; d + 1];
    ways[0] = 1;
    for &w in weights {
        let w = w as usize;
        for s in w..=d {
            ways[s] += ways[s - w];
        }
    }
    ways[d]
}

/// All monomials of weighted degree `d`, lexicographically decreasing in the
/// exponent vector (x0 is the leading variable).
pub fn enumerate_monomials(weights: &[u32], d: u32) -> Vec<Monomial> {
    fn rec(weights: &[u32], i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == weights.len() {
            if left == 0 {
                out.push(Monomial { exps: cur.clone() });
            }
            return;
        }
        let w = weights[i];
        if i + 1 == weights.len() {
            if left.is_multiple_of(w) {
                cur.push(left / w);
                out.push(Monomial { exps: cur.clone() });
                cur.pop();
            }
            return;
        }
        for a in (0..=left / w).rev() {
            cur.push(a);
            rec(weights, i + 1, left - a * w, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(weights, 0, d, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Homogeneity {
    Homogeneous(u32),
    Inhomogeneous(Vec<u32>),
}

/// A polynomial with nonzero coefficients stored per exponent vector.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedPolynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Elem>,
    field: Field,
}

impl fmt::Debug for GradedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for GradedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(exps, &c)| {
                let mut factors = Vec::new();
                if c != 1 || exps.iter().all(|&a| a == 0) {
                    factors.push(c.to_string());
                }
                for (i, &a) in exps.iter().enumerate() {
                    match a {
                        0 => {}
                        1 => factors.push(format!("x{i}")),
                        _ => factors.push(format!("x{i}^{a}")),
                    }
                }
                factors.join("*")
            })
            .collect();
        f.write_str(&parts.join("+"))
    }
}

impl GradedPolynomial {
    pub fn zero(field: &Field, nvars: usize) -> Self {
        GradedPolynomial { nvars, terms: BTreeMap::new(), field: field.clone() }
    }

    pub fn from_terms(field: &Field, nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Elem)>) -> Result<Self> {
        let mut p = Self::zero(field, nvars);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::LengthMismatch { expected: nvars, got: exps.len() });
            }
            field.check(c)?;
            p.add_term(exps, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, exps: Vec<u32>, c: Elem) {
        let field = self.field.clone();
        let entry = self.terms.entry(exps).or_insert(0);
        *entry = field.add(*entry, c);
        if *entry == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
    }

    /// Parses sums of products like `"x0^10+x1^5+2*x2^2-x3"`; integer
    /// coefficients are reduced into the prime subfield.
    pub fn parse(s: &str, field: &Field, nvars: Option<usize>) -> Result<Self> {
        let terms = parse_terms(s)?;
        let max_var = terms
            .iter()
            .flat_map(|(_, vars)| vars.iter().map(|(i, _)| *i + 1))
            .max()
            .unwrap_or(0);
        let nvars = match nvars {
            Some(n) if n < max_var => {
                return Err(Error::Parse(format!("{s:?} uses x{} but only {n} variables exist", max_var - 1)))
            }
            Some(n) => n,
            None => max_var,
        };
        let mut p = Self::zero(field, nvars);
        for (coef, vars) in terms {
            let mut exps = vec![0u32; nvars];
            for (i, a) in vars {
                exps[i] += a;
            }
            p.add_term(exps, field.from_int(coef));
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in graded-lex order for the given weights.
    pub fn terms_graded(&self, weights: &[u32]) -> Vec<(Monomial, Elem)> {
        let mut v: Vec<(Monomial, Elem)> = self
            .terms
            .iter()
            .map(|(e, &c)| (Monomial { exps: e.clone() }, c))
            .collect();
        v.sort_by(|(a, _), (b, _)| b.degree(weights).cmp(&a.degree(weights)).then(b.exps.cmp(&a.exps)));
        v
    }

    pub fn homogeneity(&self, ws: &WeightSystem) -> Result<Homogeneity> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.nvars != ws.len() {
            return Err(Error::LengthMismatch { expected: ws.len(), got: self.nvars });
        }
        let mut degs: Vec<u32> = self
            .terms
            .keys()
            .map(|e| Monomial { exps: e.clone() }.degree(ws.weights()))
            .collect();
        degs.sort_unstable();
        degs.dedup();
        Ok(if degs.len() == 1 {
            Homogeneity::Homogeneous(degs[0])
        } else {
            Homogeneity::Inhomogeneous(degs)
        })
    }

    pub fn evaluate(&self, x: &[Elem]) -> Result<Elem> {
        if x.len() != self.nvars {
            return Err(Error::LengthMismatch { expected: self.nvars, got: x.len() });
        }
        for &xi in x {
            self.field.check(xi)?;
        }
        Ok(self.eval_unchecked(x))
    }

    #[inline]
    fn eval_unchecked(&self, x: &[Elem]) -> Elem {
        let f = &self.field;
        let mut acc = 0;
        'term: for (exps, &c) in &self.terms {
            let mut l = f.log(c).unwrap() as u64;
            for (&a, &xi) in exps.iter().zip(x) {
                if a == 0 {
                    continue;
                }
                match f.log(xi) {
                    Some(lx) => l += lx as u64 * a as u64,
                    None => continue 'term,
                }
            }
            acc = f.add(acc, f.exp(l));
        }
        acc
    }

    /// The same polynomial over another field of the same characteristic.
    /// Only prime-subfield coefficients carry over.
    pub fn over(&self, target: &Field) -> Result<Self> {
        if target.p() != self.field.p() {
            return Err(Error::FieldMismatch(self.field.spec_string(), target.spec_string()));
        }
        if let Some((_, &c)) = self.terms.iter().find(|(_, &c)| c >= self.field.p()) {
            return Err(Error::Parse(format!("coefficient {c} is outside the prime subfield")));
        }
        Ok(GradedPolynomial { nvars: self.nvars, terms: self.terms.clone(), field: target.clone() })
    }
}

type RawTerm = (i64, Vec<(usize, u32)>);

fn parse_terms(s: &str) -> Result<Vec<RawTerm>> {
    let err = |msg: &str| Error::Parse(format!("{msg} in {s:?}"));
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(err("empty polynomial"));
    }
    let mut pos = 0;
    let read_int = |pos: &mut usize| -> Option<u64> {
        let start = *pos;
        while *pos < chars.len() && chars[*pos].is_ascii_digit() {
            *pos += 1;
        }
        (start < *pos).then(|| chars[start..*pos].iter().collect::<String>().parse().ok()).flatten()
    };
    let mut terms = Vec::new();
    loop {
        let mut sign = 1i64;
        while pos < chars.len() && (chars[pos] == '+' || chars[pos] == '-') {
            if chars[pos] == '-' {
                sign = -sign;
            }
            pos += 1;
        }
        let mut coef: i64 = 1;
        let mut vars = Vec::new();
        loop {
            match chars.get(pos) {
                Some(c) if c.is_ascii_digit() => {
                    let n = read_int(&mut pos).ok_or_else(|| err("bad integer"))?;
                    coef = coef
                        .checked_mul(n as i64)
                        .ok_or_else(|| err("coefficient overflow"))?;
                }
                Some('x') => {
                    pos += 1;
                    let idx = read_int(&mut pos).ok_or_else(|| err("variable needs an index"))? as usize;
                    let mut a = 1u32;
                    if chars.get(pos) == Some(&'^') {
                        pos += 1;
                        a = read_int(&mut pos).ok_or_else(|| err("bad exponent"))? as u32;
                    }
                    vars.push((idx, a));
                }
                _ => return Err(err("expected a number or variable")),
            }
            if chars.get(pos) == Some(&'*') {
                pos += 1;
            } else {
                break;
            }
        }
        terms.push((sign * coef, vars));
        match chars.get(pos) {
            None => break,
            Some('+') | Some('-') => {}
            Some(c) => return Err(err(&format!("unexpected {c:?}"))),
        }
    }
    Ok(terms)
}

/// The zero set of a graded polynomial in weighted projective space.
///
/// A point lies on the hypersurface when `f` vanishes at some member of its
/// orbit. For homogeneous `f` that is the same as vanishing on the whole
/// orbit; [`Hypersurface::new`] insists on it, [`Hypersurface::new_lenient`]
/// does not.
#[derive(Clone, Debug)]
pub struct Hypersurface {
    ws: WeightSystem,
    f: GradedPolynomial,
    degrees: Vec<u32>,
}

impl Hypersurface {
    pub fn new(ws: WeightSystem, f: GradedPolynomial) -> Result<Hypersurface> {
        match f.homogeneity(&ws)? {
            Homogeneity::Homogeneous(d) => Ok(Hypersurface { ws, f, degrees: vec![d] }),
            Homogeneity::Inhomogeneous(d) => Err(Error::NonHomogeneous(d)),
        }
    }

    /// Accepts inhomogeneous `f`; points are orbits meeting the affine zero set.
    pub fn new_lenient(ws: WeightSystem, f: GradedPolynomial) -> Result<Hypersurface> {
        let degrees = match f.homogeneity(&ws)? {
            Homogeneity::Homogeneous(d) => vec![d],
            Homogeneity::Inhomogeneous(d) => d,
        };
        Ok(Hypersurface { ws, f, degrees })
    }

    pub fn weights(&self) -> &WeightSystem {
        &self.ws
    }

    pub fn polynomial(&self) -> &GradedPolynomial {
        &self.f
    }

    pub fn field(&self) -> &Field {
        self.f.field()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degrees.len() == 1
    }

    /// The weighted degree, `None` when `f` is inhomogeneous.
    pub fn degree(&self) -> Option<u32> {
        self.is_homogeneous().then(|| self.degrees[0])
    }

    /// Distinct weighted degrees of the terms, ascending.
    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// Same rule for a polynomial over another field.
    fn rebuild(&self, g: GradedPolynomial) -> Result<Hypersurface> {
        if self.is_homogeneous() {
            Hypersurface::new(self.ws.clone(), g)
        } else {
            Hypersurface::new_lenient(self.ws.clone(), g)
        }
    }

    /// Canonical representatives of the GF(q)-points, sorted.
    pub fn points(&self, budget: u128) -> Result<Vec<WPoint>> {
        let field = self.field();
        check_budget(tuple_count(field.q(), self.ws.len()), budget)?;
        let scaler = Scaler::new(&self.ws, field);
        let mut x = vec![0; self.ws.len()];
        if self.is_homogeneous() {
            let mut out = Vec::new();
            while next_tuple(&mut x, field.q()) {
                if self.f.eval_unchecked(&x) == 0 && scaler.is_canonical(&x, field) {
                    out.push(wgeom::canonical_with(&scaler, &x, &self.ws, field));
                }
            }
            return Ok(out);
        }
        let mut seen = std::collections::BTreeSet::new();
        while next_tuple(&mut x, field.q()) {
            if self.f.eval_unchecked(&x) == 0 {
                seen.insert(wgeom::canonical_with(&scaler, &x, &self.ws, field));
            }
        }
        Ok(seen.into_iter().collect())
    }

    /// Point count by support stratification: every affine solution with
    /// support `S` contributes `gcd(k_S, q-1) / (q-1)` of a point.
    /// Inhomogeneous `f` falls back to counting [`Hypersurface::points`].
    pub fn count(&self, budget: u128) -> Result<u128> {
        if !self.is_homogeneous() {
            return Ok(self.points(budget)?.len() as u128);
        }
        let field = self.field();
        check_budget(tuple_count(field.q(), self.ws.len()), budget)?;
        let units = field.q() as u128 - 1;
        let n = self.ws.len();
        // gcd(k_S, q-1) per support mask
        let stab: Vec<u128> = (0..1usize << n)
            .map(|mask| {
                let s: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                num_integer::gcd(self.ws.k_s(&s) as u128, units)
            })
            .collect();
        let mut x = vec![0; n];
        let mut total = 0u128;
        while next_tuple(&mut x, field.q()) {
            if self.f.eval_unchecked(&x) == 0 {
                let mask = x.iter().enumerate().fold(0usize, |m, (i, &v)| if v != 0 { m | 1 << i } else { m });
                total += stab[mask];
            }
        }
        if !total.is_multiple_of(units) {
            return Err(Error::Invariant(format!("stratified count {total}/{units} is not integral")));
        }
        Ok(total / units)
    }

    /// Upper bound on the point count, when applicable.
    pub fn serre_bound(&self) -> Result<u128> {
        let e = self.degree().ok_or_else(|| Error::InapplicableBound("inhomogeneous polynomial".into()))?;
        wgeom::serre_bound(self.ws.weights(), e, self.field().q() as u64)
    }
}

/// Affine solutions of `f = 0`. With `chart = Some(i)` the coordinate `x_i`
/// is fixed to 1; otherwise all of `GF(q)^nvars` is searched.
pub fn affine_points(f: &GradedPolynomial, chart: Option<usize>, budget: u128) -> Result<Vec<Vec<Elem>>> {
    let field = f.field();
    let n = f.nvars();
    if let Some(i) = chart {
        if i >= n {
            return Err(Error::LengthMismatch { expected: n, got: i + 1 });
        }
    }
    let free = n - chart.is_some() as usize;
    check_budget(tuple_count(field.q(), free), budget)?;
    let mut y = vec![0; free];
    let mut out = Vec::new();
    let mut x = vec![0; n];
    loop {
        let mut k = 0;
        for (i, xi) in x.iter_mut().enumerate() {
            if Some(i) == chart {
                *xi = 1;
            } else {
                *xi = y[k];
                k += 1;
            }
        }
        if f.eval_unchecked(&x) == 0 {
            out.push(x.clone());
        }
        if !next_tuple(&mut y, field.q()) {
            break;
        }
    }
    Ok(out)
}

/// Projective point counts `N_1..N_R` of a hypersurface over GF(q^r).
pub fn zeta_counts(h: &Hypersurface, depth: u32, budget: u128) -> Result<Vec<u128>> {
    let base = h.field();
    (1..=depth)
        .map(|r| {
            let ext = Field::new(base.p(), base.e() * r, None)?;
            let g = h.polynomial().over(&ext)?;
            h.rebuild(g)?.count(budget)
        })
        .collect()
}

/// Counts of the whole weighted projective space over GF(q^r).
pub fn zeta_counts_space(ws: &WeightSystem, q: u64, depth: u32) -> Vec<u128> {
    (1..=depth).map(|r| wgeom::count_wp_points_formula(ws, q.pow(r))).collect()
}

/// Coefficients of `exp(sum N_r T^r / r)` up to `T^R`, exact.
pub fn zeta_series(counts: &[u128]) -> Vec<BigRational> {
    // Z' = Z * sum N_r T^(r-1)  =>  k a_k = sum_{j=1..k} N_j a_{k-j}
    let mut a = vec![BigRational::one()];
    for k in 1..=counts.len() {
        let mut s = BigRational::zero();
        for j in 1..=k {
            s += BigRational::from_integer(BigInt::from(counts[j - 1])) * &a[k - j];
        }
        a.push(s / BigRational::from_integer(BigInt::from(k)));
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wgeom::DEFAULT_ENUM_BUDGET;

    fn gf(q: u64) -> Field {
        Field::from_order(q).unwrap()
    }

    /// Brute-force count of nonnegative solutions of sum w_i a_i = d.
    fn den_brute(weights: &[u32], d: u32) -> u64 {
        fn rec(w: &[u32], d: u32) -> u64 {
            match w.split_first() {
                None => (d == 0) as u64,
                Some((&w0, rest)) => (0..=d / w0).map(|a| rec(rest, d - a * w0)).sum(),
            }
        }
        rec(weights, d)
    }

    #[test]
    fn den_examples() {
        assert_eq!(den(&[2, 4, 6, 10], 20), 20);
        assert_eq!(den(&[3, 5], 0), 1);
        assert_eq!(den(&[1, 1, 2], 4), 9);
        assert_eq!(enumerate_monomials(&[1, 1, 2], 4).len(), 9);
        let m = enumerate_monomials(&[1, 2], 2);
        assert_eq!(m, vec![Monomial { exps: vec![2, 0] }, Monomial { exps: vec![0, 1] }]);
    }

    #[test]
    fn den_matches_recursion_small() {
        for d in 0..=30 {
            for w in [vec![1], vec![2, 3], vec![1, 4, 7], vec![2, 3, 5, 10], vec![10, 10, 1]] {
                let b = den_brute(&w, d);
                assert_eq!(den(&w, d), b);
                assert_eq!(enumerate_monomials(&w, d).len() as u64, b);
            }
        }
    }

    #[test]
    fn homogeneity_examples() {
        let f5 = gf(5);
        let f = GradedPolynomial::parse("x2^2 - x0^4 + x1^4", &f5, None).unwrap();
        let ws = WeightSystem::new(vec![1, 1, 2]).unwrap();
        assert_eq!(f.homogeneity(&ws).unwrap(), Homogeneity::Homogeneous(4));
        let g = GradedPolynomial::parse("x0^10+x1^5+x2^2+x3", &f5, None).unwrap();
        let ws = WeightSystem::new(vec![2, 4, 6, 10]).unwrap();
        // terms of degree 20, 20, 12, 10
        assert_eq!(g.homogeneity(&ws).unwrap(), Homogeneity::Inhomogeneous(vec![10, 12, 20]));
        let h = GradedPolynomial::parse("x0+x1", &f5, None).unwrap();
        let ws = WeightSystem::new(vec![1, 2]).unwrap();
        assert_eq!(h.homogeneity(&ws).unwrap(), Homogeneity::Inhomogeneous(vec![1, 2]));
        let z = GradedPolynomial::parse("x0 - x0", &f5, Some(2)).unwrap();
        assert_eq!(z.homogeneity(&ws).unwrap_err(), Error::ZeroPolynomial);
    }

    #[test]
    fn evaluation_examples() {
        let f5 = gf(5);
        let one = GradedPolynomial::parse("1", &f5, Some(3)).unwrap();
        assert_eq!(one.evaluate(&[3, 0, 2]).unwrap(), 1);
        let g = GradedPolynomial::parse("x0^10+x1^5+x2^2+x3", &f5, None).unwrap();
        assert_eq!(g.evaluate(&[1, 1, 1, 2]).unwrap(), 0);
        let h = GradedPolynomial::parse("x2^2-x0^4+x1^4", &f5, None).unwrap();
        assert_eq!(h.evaluate(&[1, 0, 1]).unwrap(), 0);
        assert!(h.evaluate(&[1, 0]).is_err());
    }

    #[test]
    fn parser_forms() {
        let f7 = gf(7);
        let p = GradedPolynomial::parse("x1^3 - x0^4 - x0 - 1", &f7, None).unwrap();
        assert_eq!(p.nvars(), 2);
        assert_eq!(p.evaluate(&[0, 1]).unwrap(), 0);
        let q = GradedPolynomial::parse("3*x0*x1^2 + -2*x0*x1^2", &f7, None).unwrap();
        assert_eq!(q.to_string(), "x0*x1^2");
        assert!(GradedPolynomial::parse("x0 +* 1", &f7, None).is_err());
        assert!(GradedPolynomial::parse("y^2", &f7, None).is_err());
        assert!(GradedPolynomial::parse("x3", &f7, Some(2)).is_err());
    }

    #[test]
    fn hypersurface_small_cases() {
        let f7 = gf(7);
        let ws = WeightSystem::new(vec![1, 1]).unwrap();
        let f = GradedPolynomial::parse("x0", &f7, Some(2)).unwrap();
        let h = Hypersurface::new(ws, f).unwrap();
        let pts = h.points(DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].rep, vec![0, 1]);
        assert_eq!(h.count(DEFAULT_ENUM_BUDGET).unwrap(), 1);

        let ws = WeightSystem::new(vec![1, 2]).unwrap();
        let f = GradedPolynomial::parse("x0+x1", &f7, None).unwrap();
        assert!(matches!(Hypersurface::new(ws.clone(), f.clone()), Err(Error::NonHomogeneous(_))));
        let h = Hypersurface::new_lenient(ws.clone(), f).unwrap();
        assert_eq!(h.degree(), None);
        assert_eq!(h.count(DEFAULT_ENUM_BUDGET).unwrap(), brute_orbits_meeting(&h).len() as u128);
        assert!(matches!(h.serre_bound(), Err(Error::InapplicableBound(_))));
    }

    /// Orbits (as sorted member lists) containing a zero of `f`, by applying
    /// every scalar explicitly.
    fn brute_orbits_meeting(h: &Hypersurface) -> std::collections::BTreeSet<Vec<Vec<Elem>>> {
        let f = h.field();
        let w = h.weights().weights();
        let mut out = std::collections::BTreeSet::new();
        let mut x = vec![0; w.len()];
        while next_tuple(&mut x, f.q()) {
            if h.polynomial().evaluate(&x).unwrap() != 0 {
                continue;
            }
            let mut orbit: Vec<Vec<Elem>> = (1..f.q())
                .map(|l| x.iter().zip(w).map(|(&xi, &wi)| f.mul(f.pow_u(l, wi as u64), xi)).collect())
                .collect();
            orbit.sort();
            orbit.dedup();
            out.insert(orbit);
        }
        out
    }

    #[test]
    fn inhomogeneous_surface_over_gf5() {
        let f5 = gf(5);
        let ws = WeightSystem::new(vec![2, 4, 6, 10]).unwrap();
        let g = GradedPolynomial::parse("x0^10+x1^5+x2^2+x3", &f5, None).unwrap();
        let h = Hypersurface::new_lenient(ws, g).unwrap();
        assert_eq!(h.degrees(), &[10, 12, 20]);
        let pts = h.points(DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(pts.len(), 112);
        assert_eq!(brute_orbits_meeting(&h).len(), 112);
        assert_eq!(h.count(DEFAULT_ENUM_BUDGET).unwrap(), 112);
    }

    #[test]
    fn superelliptic_affine_points() {
        let f7 = gf(7);
        let f = GradedPolynomial::parse("x1^3 - x0^4 - x0 - 1", &f7, None).unwrap();
        // oracle: all 49 pairs by direct integer arithmetic
        let mut expect = Vec::new();
        for x in 0..7i64 {
            for y in 0..7i64 {
                if (y.pow(3) - x.pow(4) - x - 1).rem_euclid(7) == 0 {
                    expect.push(vec![x as u32, y as u32]);
                }
            }
        }
        assert_eq!(affine_points(&f, None, DEFAULT_ENUM_BUDGET).unwrap(), expect);
        assert_eq!(expect.len(), 12);
    }

    #[test]
    fn affine_chart_fixes_coordinate() {
        let f5 = gf(5);
        let f = GradedPolynomial::parse("x2^2-x0^4+x1^4", &f5, None).unwrap();
        let pts = affine_points(&f, Some(0), DEFAULT_ENUM_BUDGET).unwrap();
        assert!(pts.iter().all(|p| p[0] == 1));
        for p in &pts {
            assert_eq!(f.evaluate(p).unwrap(), 0);
        }
    }

    #[test]
    fn zeta_of_point_and_line() {
        // {x0 = 0} in WP(1,1) over GF(2): one point over every extension
        let f2 = gf(2);
        let ws = WeightSystem::new(vec![1, 1]).unwrap();
        let h = Hypersurface::new(ws.clone(), GradedPolynomial::parse("x0", &f2, Some(2)).unwrap()).unwrap();
        let counts = zeta_counts(&h, 3, DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(counts, vec![1, 1, 1]);
        let z = zeta_series(&counts);
        assert!(z.iter().all(|c| c.is_one()));

        let counts = zeta_counts_space(&ws, 2, 3);
        assert_eq!(counts, vec![3, 5, 9]);
        // 1 / ((1 - T)(1 - 2T)) = 1 + 3T + 7T^2 + 15T^3
        let z: Vec<BigRational> = zeta_series(&counts);
        let ints: Vec<i64> = z.iter().map(|c| c.to_integer().try_into().unwrap()).collect();
        assert_eq!(ints, vec![1, 3, 7, 15]);
    }
}
