//! Exact arithmetic in GF(p^h).
//!
//! An element is addressed by its canonical index: the base-p digits of the
//! index, least significant first, are its coordinates in the polynomial basis
//! `1, t, ..., t^(h-1)` of `GF(p)[t]/(m(t))`. The index map is a bijection onto
//! `0..q`, so every derived object can use dense tables.
//!
//! Multiplication goes through discrete log/antilog tables and addition
//! through a Zech table; fields with `q <= 1024` additionally carry full
//! addition and multiplication tables. Both routes give identical results.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 20;
const DENSE_LIMIT: u32 = 1024;
const NO_LOG: u32 = u32::MAX;

/// A field element, identified by its canonical index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Dense polynomials over GF(p), coefficients low to high.
pub(crate) mod fp_poly {
    pub type Poly = Vec<u64>;

    pub fn trim(mut a: Poly) -> Poly {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
        let n = a.len().max(b.len());
        let mut out = vec![0; n];
        for (i, o) in out.iter_mut().enumerate() {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            *o = (x + p - y) % p;
        }
        trim(out)
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Poly {
        let mut a = trim(a.to_vec());
        let m = trim(m.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while a.len() > dm {
            let da = a.len() - 1;
            let c = a[da] * lead_inv % p;
            if c != 0 {
                for (i, &mi) in m.iter().enumerate() {
                    let idx = da - dm + i;
                    a[idx] = (a[idx] + p - c * mi % p) % p;
                }
            }
            a = trim(a);
        }
        a
    }

    pub fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        rem(&out, m, p)
    }

    pub fn pow_mod(a: &[u64], mut e: u64, m: &[u64], p: u64) -> Poly {
        let mut base = rem(a, m, p);
        let mut acc = rem(&[1], m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &base, m, p);
            }
            base = mul_mod(&base, &base, m, p);
            e >>= 1;
        }
        acc
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    pub fn inv_mod(a: u64, p: u64) -> u64 {
        let mut acc = 1u64;
        let mut base = a % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    }

    /// Rabin's test for a monic polynomial of degree >= 1.
    pub fn is_irreducible(m: &[u64], p: u64) -> bool {
        let h = m.len() - 1;
        if h == 1 {
            return true;
        }
        let x: Poly = vec![0, 1];
        let mut frob = Vec::with_capacity(h + 1);
        let mut cur = rem(&x, m, p);
        frob.push(cur.clone());
        for _ in 0..h {
            cur = pow_mod(&cur, p, m, p);
            frob.push(cur.clone());
        }
        if frob[h] != rem(&x, m, p) {
            return false;
        }
        for r in super::prime_factors(h as u64) {
            let k = h / r as usize;
            let g = gcd(m, &sub(&frob[k], &x, p), p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

fn digits(mut idx: u64, p: u64, h: usize) -> Vec<u64> {
    let mut out = vec![0; h];
    for d in out.iter_mut() {
        *d = idx % p;
        idx /= p;
    }
    out
}

fn undigits(ds: &[u64], p: u64) -> u64 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// The lexicographically smallest monic irreducible polynomial of degree `h`
/// over GF(p), returned as `[c0, ..., c_{h-1}, 1]`. Coefficient vectors are
/// ordered as base-p integers with `c0` least significant.
pub fn default_modulus(p: u32, h: u32) -> Result<Vec<u32>> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if h < 1 {
        return Err(Error::InvalidDegree(h));
    }
    let p64 = p as u64;
    let count = p64
        .checked_pow(h)
        .filter(|&q| q <= MAX_ORDER)
        .ok_or(Error::FieldTooLarge(p64.saturating_pow(h)))?;
    for idx in 0..count {
        let mut m = digits(idx, p64, h as usize);
        m.push(1);
        if fp_poly::is_irreducible(&m, p64) {
            return Ok(m.into_iter().map(|c| c as u32).collect());
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

/// Characteristic, extension degree and defining modulus of GF(p^h).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
    h: u32,
    modulus: Vec<u32>,
}

impl FieldSpec {
    /// GF(p^h) with the default modulus.
    pub fn new(p: u32, h: u32) -> Result<Self> {
        let modulus = default_modulus(p, h)?;
        Ok(FieldSpec { p, h, modulus })
    }

    /// GF(p^h) with an explicit monic modulus `[c0, ..., c_{h-1}, 1]`.
    pub fn with_modulus(p: u32, h: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if h < 1 {
            return Err(Error::InvalidDegree(h));
        }
        if (p as u64).checked_pow(h).is_none_or(|q| q > MAX_ORDER) {
            return Err(Error::FieldTooLarge((p as u64).saturating_pow(h)));
        }
        if modulus.len() != h as usize + 1 {
            return Err(Error::InvalidModulus(format!(
                "expected {} coefficients, got {}",
                h + 1,
                modulus.len()
            )));
        }
        if modulus[h as usize] != 1 {
            return Err(Error::InvalidModulus("modulus must be monic".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidModulus(format!(
                "coefficients must be below {p}"
            )));
        }
        let m: Vec<u64> = modulus.iter().map(|&c| c as u64).collect();
        if !fp_poly::is_irreducible(&m, p as u64) {
            return Err(Error::InvalidModulus(format!(
                "{modulus:?} is reducible over GF({p})"
            )));
        }
        Ok(FieldSpec { p, h, modulus })
    }

    /// Parses `"p^h"`, a bare prime power `"q"`, or `"p^h/[c0,c1,...,1]"`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::ParseField(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (order, modulus) = match compact.split_once('/') {
            Some((o, m)) => (o, Some(m)),
            None => (compact.as_str(), None),
        };
        let (p, h) = match order.split_once('^') {
            Some((p, h)) => (
                p.parse::<u32>().map_err(|_| bad())?,
                h.parse::<u32>().map_err(|_| bad())?,
            ),
            None => {
                let q: u64 = order.parse().map_err(|_| bad())?;
                prime_power(q).ok_or_else(bad)?
            }
        };
        match modulus {
            None => FieldSpec::new(p, h),
            Some(m) => {
                let inner = m
                    .strip_prefix('[')
                    .and_then(|m| m.strip_suffix(']'))
                    .ok_or_else(bad)?;
                let coeffs = inner
                    .split(',')
                    .map(|c| c.parse::<u32>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>>>()?;
                FieldSpec::with_modulus(p, h, coeffs)
            }
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn q(&self) -> u32 {
        self.p.pow(self.h)
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FieldSpec::parse(s)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}/{:?}", self.p, self.h, self.modulus)
    }
}

fn prime_power(q: u64) -> Option<(u32, u32)> {
    let p = *prime_factors(q).first()?;
    let mut rest = q;
    let mut h = 0;
    while rest % p == 0 {
        rest /= p;
        h += 1;
    }
    (rest == 1).then_some((p as u32, h))
}

struct Dense {
    add: Vec<u16>,
    mul: Vec<u16>,
}

struct Inner {
    spec: FieldSpec,
    p: u32,
    h: u32,
    q: u32,
    generator: u32,
    log: Vec<u32>,
    exp: Vec<u32>,
    zech: Vec<u32>,
    neg: Vec<u32>,
    frob: Vec<u32>,
    dense: Option<Dense>,
}

/// A constructed finite field. Cloning is cheap and the tables are immutable,
/// so a `Field` can be shared freely across threads.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.spec)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Field {}

impl Field {
    pub fn new(spec: FieldSpec) -> Self {
        Self::build(spec, true)
    }

    /// Same as [`Field::new`] but never builds the full q x q tables. Used to
    /// check that the table route is invisible.
    pub fn without_dense_tables(spec: FieldSpec) -> Self {
        Self::build(spec, false)
    }

    /// Shorthand for `Field::new(FieldSpec::parse(s)?)`.
    pub fn parse(s: &str) -> Result<Self> {
        Ok(Self::new(FieldSpec::parse(s)?))
    }

    /// GF(p^h) with the default modulus.
    pub fn gf(p: u32, h: u32) -> Result<Self> {
        Ok(Self::new(FieldSpec::new(p, h)?))
    }

    fn build(spec: FieldSpec, dense: bool) -> Self {
        let p = spec.p;
        let h = spec.h;
        let q = spec.q();
        let modulus: Vec<u64> = spec.modulus.iter().map(|&c| c as u64).collect();
        let ctx = PolyBasis {
            p: p as u64,
            h: h as usize,
            modulus,
        };

        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let generator = (1..q)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&r| ctx.pow(g as u64, order / r) != 1)
            })
            .expect("multiplicative group is cyclic");

        let qm1 = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * qm1.max(1)];
        let mut log = vec![NO_LOG; q as usize];
        let mut cur = 1u64;
        for k in 0..qm1 {
            exp[k] = cur as u32;
            log[cur as usize] = k as u32;
            cur = ctx.mul(cur, generator as u64);
        }
        for k in qm1..exp.len() {
            exp[k] = exp[k - qm1];
        }

        let zech = (0..qm1)
            .map(|k| {
                let s = ctx.add(exp[k] as u64, 1);
                if s == 0 {
                    NO_LOG
                } else {
                    log[s as usize]
                }
            })
            .collect();
        let neg = (0..q as u64).map(|a| ctx.neg(a) as u32).collect();
        let frob = (0..q as u64).map(|a| ctx.pow(a, p as u64) as u32).collect();

        let dense = (dense && q <= DENSE_LIMIT).then(|| {
            let n = q as usize;
            let mut add = vec![0u16; n * n];
            let mut mul = vec![0u16; n * n];
            for a in 0..n {
                for b in 0..n {
                    add[a * n + b] = ctx.add(a as u64, b as u64) as u16;
                    mul[a * n + b] = if a == 0 || b == 0 {
                        0
                    } else {
                        exp[log[a] as usize + log[b] as usize] as u16
                    };
                }
            }
            Dense { add, mul }
        });

        Field(Arc::new(Inner {
            spec,
            p,
            h,
            q,
            generator,
            log,
            exp,
            zech,
            neg,
            frob,
            dense,
        }))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn h(&self) -> u32 {
        self.0.h
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.0.q
    }

    /// The primitive element used for the log tables (smallest index of
    /// multiplicative order q - 1).
    pub fn generator(&self) -> Elem {
        Elem(self.0.generator)
    }

    pub fn elem(&self, index: u64) -> Result<Elem> {
        if index < self.q() as u64 {
            Ok(Elem(index as u32))
        } else {
            Err(Error::ElementOutOfRange {
                index,
                q: self.q() as u64,
            })
        }
    }

    #[inline]
    pub fn contains(&self, a: Elem) -> bool {
        a.0 < self.0.q
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.q()).map(Elem)
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.p() as i64) as u32)
    }

    /// Polynomial-basis coordinates `(c0, ..., c_{h-1})`.
    pub fn coords(&self, a: Elem) -> Vec<u32> {
        digits(a.0 as u64, self.p() as u64, self.h() as usize)
            .into_iter()
            .map(|d| d as u32)
            .collect()
    }

    pub fn from_coords(&self, coords: &[u32]) -> Result<Elem> {
        if coords.len() != self.h() as usize || coords.iter().any(|&c| c >= self.p()) {
            return Err(Error::ElementOutOfRange {
                index: u64::MAX,
                q: self.q() as u64,
            });
        }
        let ds: Vec<u64> = coords.iter().map(|&c| c as u64).collect();
        Ok(Elem(undigits(&ds, self.p() as u64) as u32))
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let i = &*self.0;
        if let Some(d) = &i.dense {
            return Elem(d.add[(a.0 * i.q + b.0) as usize] as u32);
        }
        if i.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let qm1 = i.q - 1;
        let la = i.log[a.0 as usize];
        let lb = i.log[b.0 as usize];
        let z = i.zech[((lb + qm1 - la) % qm1) as usize];
        if z == NO_LOG {
            Elem::ZERO
        } else {
            Elem(i.exp[(la + z) as usize])
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let i = &*self.0;
        if let Some(d) = &i.dense {
            return Elem(d.mul[(a.0 * i.q + b.0) as usize] as u32);
        }
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        Elem(i.exp[(i.log[a.0 as usize] + i.log[b.0 as usize]) as usize])
    }

    #[inline]
    pub fn square(&self, a: Elem) -> Elem {
        self.mul(a, a)
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let qm1 = self.q() - 1;
        let l = self.0.log[a.0 as usize];
        Ok(Elem(self.0.exp[((qm1 - l) % qm1) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` with `0^0 = 1`.
    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let qm1 = (self.q() - 1) as u64;
        let l = self.0.log[a.0 as usize] as u64;
        Elem(self.0.exp[((l * (e % qm1)) % qm1) as usize])
    }

    /// `a^(p^k)`.
    pub fn frobenius(&self, a: Elem, k: u32) -> Elem {
        let mut x = a.0;
        for _ in 0..k % self.h() {
            x = self.0.frob[x as usize];
        }
        Elem(x)
    }

    /// Absolute trace `a + a^p + ... + a^(p^(h-1))`; lands in the prime subfield.
    pub fn trace_abs(&self, a: Elem) -> Elem {
        let mut acc = Elem::ZERO;
        let mut x = a.0;
        for _ in 0..self.h() {
            acc = self.add(acc, Elem(x));
            x = self.0.frob[x as usize];
        }
        acc
    }

    /// Norm to the prime subfield, `a^((q-1)/(p-1))`, with `N(0) = 0`.
    pub fn norm_to_prime(&self, a: Elem) -> Elem {
        if a.is_zero() {
            return Elem::ZERO;
        }
        self.pow(a, ((self.q() - 1) / (self.p() - 1)) as u64)
    }

    /// Quadratic character test. Every element is a square when p = 2.
    pub fn is_square(&self, a: Elem) -> bool {
        if a.is_zero() || self.p() == 2 {
            return true;
        }
        self.0.log[a.0 as usize] % 2 == 0
    }

    /// The non-square of smallest index (q odd).
    pub fn canonical_nonsquare(&self) -> Result<Elem> {
        if self.p() == 2 {
            return Err(Error::WrongCharacteristic {
                expected: "odd characteristic",
                found: 2,
            });
        }
        Ok(self
            .elements()
            .find(|&a| !self.is_square(a))
            .expect("odd-order fields have non-squares"))
    }

    /// The trace-one element of smallest index other than 1 (q even). In
    /// GF(2) the only trace-one element is 1 itself, which is returned.
    pub fn trace_one_element(&self) -> Result<Elem> {
        if self.p() != 2 {
            return Err(Error::WrongCharacteristic {
                expected: "characteristic 2",
                found: self.p(),
            });
        }
        if self.h() == 1 {
            return Ok(Elem::ONE);
        }
        Ok(self
            .elements()
            .find(|&a| a != Elem::ONE && self.trace_abs(a) == Elem::ONE)
            .expect("trace is onto GF(2)"))
    }

    /// `1/2` in odd characteristic.
    pub fn half(&self) -> Result<Elem> {
        if self.p() == 2 {
            return Err(Error::WrongCharacteristic {
                expected: "odd characteristic",
                found: 2,
            });
        }
        self.inv(self.from_int(2))
    }

    /// Schoolbook polynomial-basis product, bypassing every table.
    pub fn mul_reference(&self, a: Elem, b: Elem) -> Elem {
        let ctx = PolyBasis {
            p: self.p() as u64,
            h: self.h() as usize,
            modulus: self.spec().modulus.iter().map(|&c| c as u64).collect(),
        };
        Elem(ctx.mul(a.0 as u64, b.0 as u64) as u32)
    }

    /// Coordinate-wise sum, bypassing every table.
    pub fn add_reference(&self, a: Elem, b: Elem) -> Elem {
        let ctx = PolyBasis {
            p: self.p() as u64,
            h: self.h() as usize,
            modulus: Vec::new(),
        };
        Elem(ctx.add(a.0 as u64, b.0 as u64) as u32)
    }
}

/// Index arithmetic straight from the polynomial basis; used to build tables.
struct PolyBasis {
    p: u64,
    h: usize,
    modulus: Vec<u64>,
}

impl PolyBasis {
    fn add(&self, a: u64, b: u64) -> u64 {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.h {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    fn neg(&self, a: u64) -> u64 {
        let ds: Vec<u64> = digits(a, self.p, self.h)
            .into_iter()
            .map(|d| (self.p - d) % self.p)
            .collect();
        undigits(&ds, self.p)
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        let x = fp_poly::trim(digits(a, self.p, self.h));
        let y = fp_poly::trim(digits(b, self.p, self.h));
        let r = fp_poly::mul_mod(&x, &y, &self.modulus, self.p);
        undigits(&r, self.p)
    }

    fn pow(&self, a: u64, e: u64) -> u64 {
        let x = fp_poly::trim(digits(a, self.p, self.h));
        let r = fp_poly::pow_mod(&x, e, &self.modulus, self.p);
        undigits(&r, self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Trial division by every monic polynomial of degree 1..=h/2.
    fn irreducible_by_trial_division(m: &[u64], p: u64) -> bool {
        let h = m.len() - 1;
        for deg in 1..=h / 2 {
            for idx in 0..p.pow(deg as u32) {
                let mut d = digits(idx, p, deg);
                d.push(1);
                // long division
                let mut r = m.to_vec();
                for top in (deg..=h).rev() {
                    let c = r[top];
                    if c != 0 {
                        for (i, &di) in d.iter().enumerate() {
                            let k = top - deg + i;
                            r[k] = (r[k] + p * p - c * di) % p;
                        }
                    }
                }
                if r.iter().all(|&c| c == 0) {
                    return false;
                }
            }
        }
        true
    }

    fn modulus_by_enumeration(p: u32, h: u32) -> Vec<u32> {
        let p64 = p as u64;
        (0..p64.pow(h))
            .map(|idx| {
                let mut m = digits(idx, p64, h as usize);
                m.push(1);
                m
            })
            .find(|m| irreducible_by_trial_division(m, p64))
            .unwrap()
            .into_iter()
            .map(|c| c as u32)
            .collect()
    }

    fn pow_by_squaring(f: &Field, a: Elem, mut e: u64) -> Elem {
        let mut acc = Elem::ONE;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = f.mul_reference(acc, base);
            }
            base = f.mul_reference(base, base);
            e >>= 1;
        }
        acc
    }

    #[test]
    fn default_modulus_examples() {
        assert_eq!(default_modulus(3, 1).unwrap(), vec![0, 1]);
        assert_eq!(default_modulus(3, 2).unwrap(), vec![1, 0, 1]);
        assert_eq!(default_modulus(2, 3).unwrap(), vec![1, 1, 0, 1]);
    }

    #[test]
    fn default_modulus_matches_trial_division() {
        for (p, h) in [(2, 2), (2, 3), (2, 4), (2, 5), (2, 8), (3, 2), (3, 3), (3, 4), (3, 5), (5, 2), (5, 3), (7, 2)] {
            assert_eq!(default_modulus(p, h).unwrap(), modulus_by_enumeration(p, h), "p={p} h={h}");
        }
    }

    #[test]
    fn default_modulus_errors() {
        assert_eq!(default_modulus(4, 2), Err(Error::NotPrime(4)));
        assert_eq!(default_modulus(3, 0), Err(Error::InvalidDegree(0)));
    }

    #[test]
    fn spec_parsing() {
        let s = FieldSpec::parse("3^5").unwrap();
        assert_eq!((s.p(), s.h(), s.q()), (3, 5, 243));
        let s = FieldSpec::parse("9").unwrap();
        assert_eq!((s.p(), s.h()), (3, 2));
        let s = FieldSpec::parse("3^2/[2,1,1]").unwrap();
        assert_eq!(s.modulus(), &[2, 1, 1]);
        assert!(FieldSpec::parse("3^2/[1,1,1]").is_err()); // t^2+t+1 = (t-1)^2
        assert!(FieldSpec::parse("6").is_err());
        assert!(FieldSpec::parse("2^40").is_err());
        assert!(FieldSpec::parse("x^2").is_err());
    }

    #[test]
    fn arithmetic_examples() {
        let f3 = Field::gf(3, 1).unwrap();
        assert_eq!(f3.mul(Elem(2), Elem(2)), Elem(1));
        let f9 = Field::gf(3, 2).unwrap();
        let t = Elem(3);
        assert_eq!(f9.mul(t, t), Elem(2));
        for a in f9.elements() {
            assert_eq!(f9.add(a, Elem::ZERO), a);
        }
        assert_eq!(f9.div(t, Elem::ZERO), Err(Error::DivisionByZero));
        assert_eq!(f9.div(Elem(2), t).map(|x| f9.mul(x, t)), Ok(Elem(2)));
    }

    #[test]
    fn frobenius_examples() {
        let f9 = Field::gf(3, 2).unwrap();
        let t = Elem(3);
        assert_eq!(f9.frobenius(t, 0), t);
        assert_eq!(f9.frobenius(t, 1), Elem(6));
        assert_eq!(f9.frobenius(t, 1), pow_by_squaring(&f9, t, 3));
        for a in f9.elements() {
            assert_eq!(f9.frobenius(a, 2), a);
        }
    }

    #[test]
    fn trace_norm_examples() {
        let f9 = Field::gf(3, 2).unwrap();
        assert_eq!(f9.trace_abs(Elem(3)), Elem::ZERO);
        assert_eq!(f9.norm_to_prime(Elem(3)), Elem::ONE);
        let f4 = Field::gf(2, 2).unwrap();
        assert_eq!(f4.trace_abs(Elem::ONE), Elem::ZERO);
    }

    #[test]
    fn squares_examples() {
        let f3 = Field::gf(3, 1).unwrap();
        assert!(!f3.is_square(Elem(2)));
        assert_eq!(f3.canonical_nonsquare().unwrap(), Elem(2));
        let f9 = Field::gf(3, 2).unwrap();
        let squares: Vec<Elem> = f9.elements().map(|a| f9.mul_reference(a, a)).collect();
        assert!(squares.contains(&Elem(3)));
        assert!(f9.is_square(Elem(3)));
        assert!(Field::gf(2, 3).unwrap().canonical_nonsquare().is_err());
    }

    #[test]
    fn trace_one_examples() {
        assert_eq!(Field::gf(2, 1).unwrap().trace_one_element().unwrap(), Elem::ONE);
        assert_eq!(Field::gf(2, 2).unwrap().trace_one_element().unwrap(), Elem(2));
        let f8 = Field::gf(2, 3).unwrap();
        let expected = f8
            .elements()
            .find(|&a| {
                a != Elem::ONE && {
                    let a2 = f8.mul_reference(a, a);
                    let a4 = f8.mul_reference(a2, a2);
                    f8.add_reference(f8.add_reference(a, a2), a4) == Elem::ONE
                }
            })
            .unwrap();
        assert_eq!(f8.trace_one_element().unwrap(), expected);
        assert!(Field::gf(3, 1).unwrap().trace_one_element().is_err());
    }

    #[test]
    fn square_counts_match_table() {
        for (p, h) in [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2), (3, 3), (7, 2), (3, 4)] {
            let f = Field::gf(p, h).unwrap();
            let q = f.q();
            let mut table = vec![false; q as usize];
            for a in f.elements() {
                table[f.mul_reference(a, a).0 as usize] = true;
            }
            let nonzero = table.iter().skip(1).filter(|&&s| s).count();
            assert_eq!(nonzero as u32, (q - 1) / 2);
            for a in f.elements() {
                assert_eq!(f.is_square(a), table[a.0 as usize]);
            }
        }
    }

    #[test]
    fn table_routes_agree() {
        for (p, h) in [(2, 1), (2, 4), (3, 1), (3, 3), (5, 2), (7, 2), (2, 6), (3, 4)] {
            let spec = FieldSpec::new(p, h).unwrap();
            let dense = Field::new(spec.clone());
            let sparse = Field::without_dense_tables(spec);
            for a in dense.elements() {
                for b in dense.elements() {
                    let sum = dense.add(a, b);
                    let prod = dense.mul(a, b);
                    assert_eq!(sum, sparse.add(a, b));
                    assert_eq!(sum, dense.add_reference(a, b));
                    assert_eq!(prod, sparse.mul(a, b));
                    assert_eq!(prod, dense.mul_reference(a, b));
                }
            }
        }
    }

    #[test]
    fn pow_matches_square_and_multiply() {
        let f = Field::gf(3, 5).unwrap();
        for a in f.elements().step_by(7) {
            for e in [0, 1, 2, 3, 9, 81, 121, 242, 243, 1000] {
                assert_eq!(f.pow(a, e), pow_by_squaring(&f, a, e), "a={a} e={e}");
            }
        }
    }

    #[test]
    fn large_field_without_dense_tables() {
        let f = Field::gf(2, 12).unwrap();
        let a = Elem(1234);
        let b = Elem(4000);
        assert_eq!(f.mul(a, b), f.mul_reference(a, b));
        assert_eq!(f.mul(f.inv(a).unwrap(), a), Elem::ONE);
        let g = Field::gf(5, 5).unwrap();
        assert_eq!(g.add(Elem(1234), Elem(2000)), g.add_reference(Elem(1234), Elem(2000)));
    }

    fn field_and_elems() -> impl Strategy<Value = (u32, u32, u32, u32, u32)> {
        prop::sample::select(vec![(2u32, 3u32), (2, 5), (3, 2), (3, 3), (3, 5), (5, 2), (7, 1), (13, 1)])
            .prop_flat_map(|(p, h)| {
                let q = p.pow(h);
                (Just(p), Just(h), 0..q, 0..q, 0..h + 2)
            })
    }

    proptest! {
        #[test]
        fn frobenius_is_a_field_automorphism((p, h, a, b, k) in field_and_elems()) {
            let f = Field::gf(p, h).unwrap();
            let (a, b) = (Elem(a), Elem(b));
            prop_assert_eq!(f.frobenius(f.mul(a, b), k), f.mul(f.frobenius(a, k), f.frobenius(b, k)));
            prop_assert_eq!(f.frobenius(f.add(a, b), k), f.add(f.frobenius(a, k), f.frobenius(b, k)));
        }

        #[test]
        fn trace_and_norm_land_in_prime_field((p, h, a, b, _k) in field_and_elems()) {
            let f = Field::gf(p, h).unwrap();
            let (a, b) = (Elem(a), Elem(b));
            prop_assert!(f.trace_abs(a).0 < p);
            prop_assert!(f.norm_to_prime(a).0 < p);
            prop_assert_eq!(f.trace_abs(f.add(a, b)), f.add(f.trace_abs(a), f.trace_abs(b)));
            prop_assert_eq!(f.norm_to_prime(f.mul(a, b)), f.mul(f.norm_to_prime(a), f.norm_to_prime(b)));
        }

        #[test]
        fn coords_roundtrip((p, h, a, _b, _k) in field_and_elems()) {
            let f = Field::gf(p, h).unwrap();
            prop_assert_eq!(f.from_coords(&f.coords(Elem(a))).unwrap(), Elem(a));
        }
    }
}
