//! Small finite fields GF(p^e).
//!
//! Elements are plain `u32` indices: the coefficient vector `(c0, .., c_{e-1})`
//! of an element in the power basis of the modulus is encoded as
//! `c0 + c1*p + .. + c_{e-1}*p^(e-1)`. Index 0 is zero, index 1 is one, and the
//! integer order on indices is the canonical element order used everywhere
//! else in the crate (orbit representatives, lifts, serialization).
//!
//! Multiplication goes through discrete log/exp tables built once per field;
//! addition is digit-wise mod p, through a lookup table for small extension
//! fields.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An element index in `[0, q)`.
pub type Elem = u32;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 10_000;
/// Largest supported extension degree (the modulus table reaches GF(2^6)).
pub const MAX_DEGREE: u32 = 6;

const ADD_TABLE_LIMIT: u32 = 1024;

/// Default moduli for extension fields, constant term first.
const MODULUS_TABLE: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (3, 2, &[1, 0, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (7, 2, &[3, 6, 1]),
    (11, 2, &[2, 7, 1]),
    (13, 2, &[2, 12, 1]),
];

/// Looks up the built-in modulus for GF(p^e), if there is one.
pub fn table_modulus(p: u32, e: u32) -> Option<&'static [u32]> {
    MODULUS_TABLE
        .iter()
        .find(|(tp, te, _)| *tp == p && *te == e)
        .map(|(_, _, m)| *m)
}

/// Orders covered by the built-in modulus table.
pub fn table_orders() -> Vec<u32> {
    let mut v: Vec<u32> = MODULUS_TABLE.iter().map(|(p, e, _)| p.pow(*e)).collect();
    v.sort_unstable();
    v
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power into `(p, e)`.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let (mut rest, mut e) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p as u32, e))
}

struct Inner {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    /// `exp[i] = g^i` for `i < 2(q-1)`.
    exp: Vec<Elem>,
    /// `log[x]` for `x != 0`.
    log: Vec<u32>,
    add: Option<Vec<u16>>,
    neg: Vec<Elem>,
}

/// A validated finite field GF(p^e). Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.e == other.0.e && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})[{}]", self.q(), self.spec_string())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec_string())
    }
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    // m monic
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + p - (lead * c) % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn poly_mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let mut r = poly_rem(&prod, m, p);
    r.resize(m.len() - 1, 0);
    r
}

/// True when the monic polynomial `m` has no monic factor of degree
/// `1..=deg/2` over GF(p).
fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    for k in 1..=deg / 2 {
        let count = (p as u64).pow(k as u32);
        for idx in 0..count {
            let mut f = Vec::with_capacity(k + 1);
            let mut rest = idx;
            for _ in 0..k {
                f.push((rest % p as u64) as u32);
                rest /= p as u64;
            }
            f.push(1);
            if poly_rem(m, &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// Builds GF(p^e). For `e > 1` without an explicit modulus the built-in
    /// table is consulted.
    pub fn new(p: u32, e: u32, modulus: Option<&[u32]>) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(Error::NonPrimeCharacteristic(p as u64));
        }
        let q64 = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
        if e == 0 || e > MAX_DEGREE || q64 > MAX_ORDER {
            return Err(Error::UnsupportedOrder(q64));
        }
        let modulus: Vec<u32> = match (e, modulus) {
            (1, None) => vec![0, 1],
            (1, Some(m)) => {
                if m.len() != 2 || m[1] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(Error::InvalidModulus { expected: 1, got: m.to_vec() });
                }
                // x - c is irreducible for any c; elements stay residues mod p
                vec![0, 1]
            }
            (_, Some(m)) => {
                if m.len() != e as usize + 1 || m[e as usize] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(Error::InvalidModulus { expected: e, got: m.to_vec() });
                }
                m.to_vec()
            }
            (_, None) => table_modulus(p, e)
                .ok_or(Error::UnsupportedOrder(q64))?
                .to_vec(),
        };
        if e > 1 && !is_irreducible(&modulus, p) {
            return Err(Error::ReducibleModulus(modulus, p));
        }
        Ok(Field(Arc::new(Self::build_tables(p, e, q64 as u32, modulus))))
    }

    /// GF(q) with the table modulus.
    pub fn from_order(q: u64) -> Result<Field> {
        let (p, e) = prime_power(q).ok_or(Error::NonPrimeCharacteristic(q))?;
        Field::new(p, e, None)
    }

    /// Parses `"q=<int>"` or `"p=<int>,e=<int>,mod=<c0,c1,...>"`.
    pub fn parse(spec: &str) -> Result<Field> {
        let spec = spec.trim();
        if let Some(q) = spec.strip_prefix("q=") {
            let q: u64 = q
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad field order in {spec:?}")))?;
            return Field::from_order(q);
        }
        let (head, modulus) = match spec.find("mod=") {
            Some(pos) => (&spec[..pos], Some(&spec[pos + 4..])),
            None => (spec, None),
        };
        let mut p = None;
        let mut e = None;
        for part in head.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad field spec {spec:?}")))?;
            let v: u32 = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad number in {spec:?}")))?;
            match k.trim() {
                "p" => p = Some(v),
                "e" => e = Some(v),
                other => return Err(Error::Parse(format!("unknown field key {other:?}"))),
            }
        }
        let p = p.ok_or_else(|| Error::Parse(format!("missing p in {spec:?}")))?;
        let e = e.unwrap_or(1);
        let modulus = modulus
            .map(|m| {
                m.split(',')
                    .map(|c| {
                        c.trim()
                            .parse::<u32>()
                            .map_err(|_| Error::Parse(format!("bad modulus in {spec:?}")))
                    })
                    .collect::<Result<Vec<u32>>>()
            })
            .transpose()?;
        Field::new(p, e, modulus.as_deref())
    }

    fn build_tables(p: u32, e: u32, q: u32, modulus: Vec<u32>) -> Inner {
        let digits = |x: u32| -> Vec<u32> {
            let mut v = Vec::with_capacity(e as usize);
            let mut r = x;
            for _ in 0..e {
                v.push(r % p);
                r /= p;
            }
            v
        };
        let undigits = |d: &[u32]| -> u32 { d.iter().rev().fold(0, |acc, &c| acc * p + c) };

        let n = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![0u32; q as usize];
        for g in 1..q {
            let gd = digits(g);
            let mut cur = digits(1);
            let mut ok = true;
            for i in 0..n {
                let c = undigits(&cur);
                if i > 0 && c == 1 {
                    ok = false;
                    break;
                }
                exp[i] = c;
                cur = if e == 1 {
                    vec![(cur[0] * gd[0]) % p]
                } else {
                    poly_mul_mod(&cur, &gd, &modulus, p)
                };
            }
            if ok {
                break;
            }
        }
        for i in 0..n {
            exp[n + i] = exp[i];
            log[exp[i] as usize] = i as u32;
        }

        let add_digits = |a: u32, b: u32| -> u32 {
            let (mut a, mut b, mut pw, mut out) = (a, b, 1u32, 0u32);
            for _ in 0..e {
                out += ((a % p + b % p) % p) * pw;
                a /= p;
                b /= p;
                pw *= p;
            }
            out
        };
        let add = (e > 1 && q <= ADD_TABLE_LIMIT).then(|| {
            let mut t = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = add_digits(a, b) as u16;
                }
            }
            t
        });
        let neg = (0..q)
            .map(|x| {
                let d: Vec<u32> = digits(x).iter().map(|&c| (p - c) % p).collect();
                undigits(&d)
            })
            .collect();
        Inner { p, e, q, modulus, exp, log, add, neg }
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn e(&self) -> u32 {
        self.0.e
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// The serialized form, `"q=.."` when the modulus is the default one.
    pub fn spec_string(&self) -> String {
        let i = &self.0;
        if i.e == 1 || table_modulus(i.p, i.e) == Some(&i.modulus[..]) {
            format!("q={}", i.q)
        } else {
            let m: Vec<String> = i.modulus.iter().map(u32::to_string).collect();
            format!("p={},e={},mod={}", i.p, i.e, m.join(","))
        }
    }

    /// All elements in canonical (index) order.
    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.0.q
    }

    pub fn check(&self, x: Elem) -> Result<Elem> {
        if x < self.0.q {
            Ok(x)
        } else {
            Err(Error::InvalidElement { index: x, q: self.0.q })
        }
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.0.p as i64) as Elem
    }

    /// Coefficient vector of `x` in the power basis, constant term first.
    pub fn coefficients(&self, x: Elem) -> Vec<u32> {
        let mut r = x;
        (0..self.0.e)
            .map(|_| {
                let c = r % self.0.p;
                r /= self.0.p;
                c
            })
            .collect()
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let i = &*self.0;
        if i.e == 1 {
            let s = a + b;
            if s >= i.p {
                s - i.p
            } else {
                s
            }
        } else if let Some(t) = &i.add {
            t[(a * i.q + b) as usize] as Elem
        } else {
            let (mut a, mut b, mut pw, mut out) = (a, b, 1u32, 0u32);
            for _ in 0..i.e {
                out += ((a % i.p + b % i.p) % i.p) * pw;
                a /= i.p;
                b /= i.p;
                pw *= i.p;
            }
            out
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.0.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let i = &*self.0;
        i.exp[(i.log[a as usize] + i.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.0.q - 1;
        Ok(self.0.exp[((n - self.0.log[a as usize]) % n) as usize])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^n` for any integer exponent; negative exponents invert. `0^0 = 1`.
    pub fn pow(&self, a: Elem, n: i64) -> Result<Elem> {
        if a == 0 {
            return match n.signum() {
                0 => Ok(1),
                1 => Ok(0),
                _ => Err(Error::DivisionByZero),
            };
        }
        let order = (self.0.q - 1) as i64;
        let l = self.0.log[a as usize] as i64;
        let k = ((l as i128 * n as i128).rem_euclid(order as i128)) as usize;
        Ok(self.0.exp[k])
    }

    /// `a^n` for a nonnegative exponent, never failing.
    #[inline]
    pub fn pow_u(&self, a: Elem, n: u64) -> Elem {
        if n == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = (self.0.q - 1) as u64;
        let k = (self.0.log[a as usize] as u64 * (n % order)) % order;
        self.0.exp[k as usize]
    }

    /// The fixed primitive element `g` with `exp(i) = g^i`.
    pub fn primitive(&self) -> Elem {
        self.0.exp[if self.0.q == 2 { 0 } else { 1 }]
    }

    /// `g^i` for the fixed primitive element, any `i`.
    #[inline]
    pub fn exp(&self, i: u64) -> Elem {
        self.0.exp[(i % (self.0.q as u64 - 1)) as usize]
    }

    /// Discrete log to base `g`, `None` for zero.
    #[inline]
    pub fn log(&self, a: Elem) -> Option<u32> {
        (a != 0).then(|| self.0.log[a as usize])
    }

    /// The Frobenius map `x -> x^p`.
    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow_u(a, self.0.p as u64)
    }

    pub fn is_square_order(&self) -> bool {
        self.0.e.is_multiple_of(2)
    }

    /// `sqrt(q)` when q is a perfect square.
    pub fn sqrt_order(&self) -> Result<u32> {
        if self.is_square_order() {
            Ok(self.0.p.pow(self.0.e / 2))
        } else {
            Err(Error::NonSquareOrder(self.0.q))
        }
    }

    /// The involution `x -> x^sqrt(q)` used by the Hermitian inner product.
    pub fn conjugate(&self, a: Elem) -> Result<Elem> {
        let q0 = self.sqrt_order()?;
        Ok(self.pow_u(a, q0 as u64))
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Elem) -> Result<u64> {
        let l = self.log(a).ok_or(Error::DivisionByZero)? as u64;
        let n = self.0.q as u64 - 1;
        Ok(n / num_integer::gcd(l, n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f = Field::new(5, 1, None).unwrap();
        assert_eq!(f.elements().collect::<Vec<_>>(), vec![0, 1, 2, 3, 4]);
        assert_eq!(f.mul(3, 4), 2);
        assert_eq!(f.spec_string(), "q=5");
        let f7 = Field::from_order(7).unwrap();
        assert_eq!(f7.inv(3).unwrap(), 5);
    }

    #[test]
    fn gf9_with_x2_plus_1_modulus() {
        let f = Field::new(3, 2, Some(&[1, 0, 1])).unwrap();
        assert_eq!(f.q(), 9);
        // omega has index 3 (c1 = 1)
        let w = 3;
        assert_eq!(f.mul(w, w), 2);
        assert_eq!(f.conjugate(1).unwrap(), 1);
        // omega^3 = -omega, index 6
        assert_eq!(f.conjugate(w).unwrap(), 6);
        assert_eq!(f.order(w).unwrap(), 4);
        assert_eq!(f.spec_string(), "q=9");
    }

    #[test]
    fn gf4_modulus() {
        let f = Field::new(2, 2, Some(&[1, 1, 1])).unwrap();
        assert_eq!(f.elements().collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        let w = 2;
        assert_eq!(f.conjugate(w).unwrap(), f.mul(w, w));
        assert_eq!(f.mul(w, w), 3);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(Field::new(6, 1, None).unwrap_err(), Error::NonPrimeCharacteristic(6));
        assert!(matches!(
            Field::new(2, 2, Some(&[1, 0, 1])),
            Err(Error::ReducibleModulus(..))
        ));
        assert!(matches!(Field::new(3, 5, None), Err(Error::UnsupportedOrder(243))));
        assert!(matches!(Field::from_order(10007), Err(Error::UnsupportedOrder(_))));
        let f5 = Field::from_order(5).unwrap();
        assert_eq!(f5.conjugate(2).unwrap_err(), Error::NonSquareOrder(5));
        assert_eq!(f5.inv(0).unwrap_err(), Error::DivisionByZero);
        assert_eq!(f5.pow(0, -1).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn every_table_entry_builds() {
        let orders = table_orders();
        assert_eq!(orders, vec![4, 8, 9, 16, 25, 27, 32, 49, 64, 81, 121, 125, 169]);
        for q in orders {
            let f = Field::from_order(q as u64).unwrap();
            assert_eq!(f.order(f.primitive()).unwrap(), q as u64 - 1);
        }
    }

    #[test]
    fn parse_specs() {
        let f = Field::parse("p=3,e=2,mod=1,0,1").unwrap();
        assert_eq!(f, Field::from_order(9).unwrap());
        let g = Field::parse("p=3,e=2,mod=2,2,1").unwrap();
        assert_eq!(g.spec_string(), "p=3,e=2,mod=2,2,1");
        assert_eq!(Field::parse(&g.spec_string()).unwrap(), g);
        assert!(Field::parse("r=3").is_err());
    }

    #[test]
    fn negative_powers() {
        let f = Field::from_order(7).unwrap();
        assert_eq!(f.pow(3, -1).unwrap(), 5);
        assert_eq!(f.pow(3, 6).unwrap(), 1);
        assert_eq!(f.pow(0, 0).unwrap(), 1);
    }
}
