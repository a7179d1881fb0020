//! Finite fields `F_q`, `q = p^s` with `p` an odd prime.
//!
//! Elements are stored as a single integer `index = c_0 + c_1 p + ... + c_{s-1} p^{s-1}`
//! where `(c_0, ..., c_{s-1})` are the coordinates in the power basis of the
//! defining modulus. The index order is the enumeration order of the field.
//! All arithmetic goes through the owning [`FqContext`]; an element only carries
//! a tag identifying the field presentation it belongs to.
//!
//! Fields up to [`TABLE_LIMIT`] elements use exponential/logarithm tables built
//! from the smallest primitive element. Larger fields fall back to reducing
//! coordinate polynomials modulo the modulus.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest field order for which log/exp tables are built.
pub const TABLE_LIMIT: u64 = 1 << 20;
/// Square roots are found by scanning the field up to this order.
pub const SQRT_SCAN_LIMIT: u64 = 10_000;
/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 31;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {p}^{s} exceeds the supported size")]
    TooLarge { p: u64, s: usize },
    #[error("modulus must be monic of degree {expected} with coefficients below p")]
    BadModulus { expected: usize },
    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different fields")]
    ContextMismatch,
    #[error("zero raised to a non-positive power")]
    ZeroPower,
    #[error("coordinates {0:?} do not describe an element of this field")]
    BadCoordinates(Vec<u64>),
}

/// An element of some `F_q`. Plain data; interpret it with its [`FqContext`].
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElem {
    index: u32,
    tag: u32,
}

impl FieldElem {
    /// Position of the element in the field's enumeration order.
    pub fn index(self) -> u32 {
        self.index
    }

    pub fn is_zero(self) -> bool {
        self.index == 0
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.index)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Serialized description of a field presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextDesc {
    pub p: u32,
    pub s: usize,
    /// Monic modulus, ascending coefficients (length `s + 1`).
    pub modulus: Vec<u32>,
}

struct Tables {
    // exp has length 2(q-1) so that log a + log b never needs reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
}

pub struct FqContext {
    p: u32,
    s: usize,
    q: u32,
    modulus: Vec<u32>,
    tag: u32,
    weights: Vec<u32>,
    tables: Option<Tables>,
}

impl fmt::Debug for FqContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FqContext").field("p", &self.p).field("s", &self.s).field("modulus", &self.modulus).finish()
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
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
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
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

fn mod_pow_u64(b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u128;
    let mut base = (b % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m as u128;
        }
        base = base * base % m as u128;
        e >>= 1;
    }
    acc as u64
}

fn fnv_tag(p: u32, s: usize, modulus: &[u32]) -> u32 {
    let mut h: u32 = 0x811c_9dc5;
    let mut feed = |x: u32| {
        for byte in x.to_le_bytes() {
            h ^= byte as u32;
            h = h.wrapping_mul(0x0100_0193);
        }
    };
    feed(p);
    feed(s as u32);
    for &c in modulus {
        feed(c);
    }
    h
}

// Dense polynomials over the prime field F_p, ascending coefficients. Only used
// to validate and search for moduli.
mod fp_poly {
    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn inv_mod(x: u32, p: u32) -> u32 {
        super::mod_pow_u64(x as u64, (p - 2) as u64, p as u64) as u32
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        trim(out.into_iter().map(|c| c as u32).collect())
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let inv_lead = inv_mod(m[dm], p) as u64;
        while r.len() > dm {
            let shift = r.len() - 1 - dm;
            let c = r[r.len() - 1] as u64 * inv_lead % p as u64;
            for (j, &mj) in m.iter().enumerate() {
                let sub = c * mj as u64 % p as u64;
                r[shift + j] = ((r[shift + j] as u64 + p as u64 - sub) % p as u64) as u32;
            }
            r = trim(r);
        }
        r
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut x = trim(a.to_vec());
        let mut y = trim(b.to_vec());
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    /// `base^e mod m`.
    pub fn pow_mod(base: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
        let mut acc = vec![1u32];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(&mul(&acc, &b, p), m, p);
            }
            b = rem(&mul(&b, &b, p), m, p);
            e >>= 1;
        }
        acc
    }

    /// A polynomial of degree s is irreducible iff it shares no factor with
    /// `T^{p^i} - T` for `1 <= i <= s/2`.
    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let s = m.len() - 1;
        if s <= 1 {
            return s == 1;
        }
        let t = vec![0, 1];
        let mut frob = t.clone();
        for _ in 1..=s / 2 {
            frob = pow_mod(&frob, p as u64, m, p);
            let mut diff = frob.clone();
            diff.resize(diff.len().max(2), 0);
            diff[1] = (diff[1] + p - 1) % p;
            let g = gcd(m, &trim(diff), p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}

impl FqContext {
    /// Builds `F_{p^s}`. Without an explicit modulus the lexicographically
    /// smallest monic irreducible of degree `s` is used, where monic
    /// polynomials are ordered by the index of their lower coefficient vector.
    pub fn new(p: u64, s: usize, modulus: Option<Vec<u32>>) -> Result<Arc<Self>, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p == 2 {
            return Err(FieldError::EvenCharacteristic);
        }
        if s == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u128).checked_pow(s as u32).unwrap_or(u128::MAX);
        if q > MAX_ORDER as u128 {
            return Err(FieldError::TooLarge { p, s });
        }
        let p32 = p as u32;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != s + 1 || m[s] != 1 || m.iter().any(|&c| c >= p32) {
                    return Err(FieldError::BadModulus { expected: s });
                }
                if !fp_poly::is_irreducible(&m, p32) {
                    return Err(FieldError::ReducibleModulus(p32));
                }
                m
            }
            None => Self::smallest_irreducible(p32, s),
        };
        let mut weights = Vec::with_capacity(s);
        let mut w = 1u32;
        for _ in 0..s {
            weights.push(w);
            w = w.wrapping_mul(p32);
        }
        let mut ctx =
            FqContext { p: p32, s, q: q as u32, tag: fnv_tag(p32, s, &modulus), modulus, weights, tables: None };
        if (ctx.q as u64) <= TABLE_LIMIT {
            ctx.tables = Some(ctx.build_tables());
        }
        Ok(Arc::new(ctx))
    }

    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Arc<Self>, FieldError> {
        Self::new(p, 1, None)
    }

    pub fn from_desc(desc: &ContextDesc) -> Result<Arc<Self>, FieldError> {
        Self::new(desc.p as u64, desc.s, Some(desc.modulus.clone()))
    }

    pub fn desc(&self) -> ContextDesc {
        ContextDesc { p: self.p, s: self.s, modulus: self.modulus.clone() }
    }

    fn smallest_irreducible(p: u32, s: usize) -> Vec<u32> {
        let count = (p as u64).pow(s as u32);
        for idx in 0..count {
            let mut m = Vec::with_capacity(s + 1);
            let mut rest = idx;
            for _ in 0..s {
                m.push((rest % p as u64) as u32);
                rest /= p as u64;
            }
            m.push(1);
            if fp_poly::is_irreducible(&m, p) {
                return m;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    fn build_tables(&self) -> Tables {
        let order = self.q as u64 - 1;
        let factors = prime_factors(order);
        let generator = (1..self.q)
            .find(|&g| factors.iter().all(|&f| self.pow_direct(g, order / f) != 1))
            .expect("multiplicative group is cyclic");
        let n = order as usize;
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![0u32; self.q as usize];
        let mut cur = 1u32;
        for i in 0..n {
            exp[i] = cur;
            exp[i + n] = cur;
            log[cur as usize] = i as u32;
            cur = self.mul_direct(cur, generator);
        }
        Tables { exp, log }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.s
    }

    pub fn order(&self) -> u64 {
        self.q as u64
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn tag(&self) -> u32 {
        self.tag
    }

    /// True when both contexts present the same field with the same modulus.
    pub fn same_field(&self, other: &FqContext) -> bool {
        self.tag == other.tag && self.p == other.p && self.s == other.s && self.modulus == other.modulus
    }

    pub fn owns(&self, x: FieldElem) -> bool {
        x.tag == self.tag
    }

    #[inline]
    fn wrap(&self, index: u32) -> FieldElem {
        FieldElem { index, tag: self.tag }
    }

    #[inline]
    fn check(&self, x: FieldElem) {
        debug_assert_eq!(x.tag, self.tag, "element from a different field");
    }

    pub fn zero(&self) -> FieldElem {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElem {
        self.wrap(1)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElem {
        self.wrap(n.rem_euclid(self.p as i64) as u32)
    }

    /// Element at a given position of the enumeration order.
    pub fn elem(&self, index: u64) -> Option<FieldElem> {
        (index < self.q as u64).then(|| self.wrap(index as u32))
    }

    /// All elements in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.q).map(move |i| self.wrap(i))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (1..self.q).map(move |i| self.wrap(i))
    }

    pub fn coords(&self, x: FieldElem) -> Vec<u32> {
        self.check(x);
        let mut rest = x.index;
        (0..self.s)
            .map(|_| {
                let d = rest % self.p;
                rest /= self.p;
                d
            })
            .collect()
    }

    pub fn from_coords(&self, coords: &[u64]) -> Result<FieldElem, FieldError> {
        if coords.len() != self.s || coords.iter().any(|&c| c >= self.p as u64) {
            return Err(FieldError::BadCoordinates(coords.to_vec()));
        }
        let idx = coords.iter().zip(&self.weights).map(|(&c, &w)| c as u32 * w).sum();
        Ok(self.wrap(idx))
    }

    #[inline]
    pub fn add(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        self.check(x);
        self.check(y);
        if self.s == 1 {
            let s = x.index + y.index;
            return self.wrap(if s >= self.p { s - self.p } else { s });
        }
        let (mut a, mut b) = (x.index, y.index);
        let mut out = 0;
        for &w in &self.weights {
            let d = a % self.p + b % self.p;
            out += if d >= self.p { d - self.p } else { d } * w;
            a /= self.p;
            b /= self.p;
        }
        self.wrap(out)
    }

    #[inline]
    pub fn neg(&self, x: FieldElem) -> FieldElem {
        self.check(x);
        if self.s == 1 {
            return self.wrap(if x.index == 0 { 0 } else { self.p - x.index });
        }
        let mut a = x.index;
        let mut out = 0;
        for &w in &self.weights {
            let d = a % self.p;
            out += if d == 0 { 0 } else { self.p - d } * w;
            a /= self.p;
        }
        self.wrap(out)
    }

    #[inline]
    pub fn sub(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        self.check(x);
        self.check(y);
        if x.index == 0 || y.index == 0 {
            return self.zero();
        }
        match &self.tables {
            Some(t) => self.wrap(t.exp[(t.log[x.index as usize] + t.log[y.index as usize]) as usize]),
            None => self.wrap(self.mul_direct(x.index, y.index)),
        }
    }

    pub fn inv(&self, x: FieldElem) -> Result<FieldElem, FieldError> {
        self.check(x);
        if x.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match &self.tables {
            Some(t) => {
                let l = t.log[x.index as usize];
                self.wrap(if l == 0 { 1 } else { t.exp[(self.q - 1 - l) as usize] })
            }
            None => self.wrap(self.pow_direct(x.index, self.q as u64 - 2)),
        })
    }

    pub fn div(&self, x: FieldElem, y: FieldElem) -> Result<FieldElem, FieldError> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// Checked binary operation: rejects operands from another field.
    pub fn arith(&self, x: FieldElem, y: FieldElem, op: FieldOp) -> Result<FieldElem, FieldError> {
        if !self.owns(x) || !self.owns(y) {
            return Err(FieldError::ContextMismatch);
        }
        match op {
            FieldOp::Add => Ok(self.add(x, y)),
            FieldOp::Sub => Ok(self.sub(x, y)),
            FieldOp::Mul => Ok(self.mul(x, y)),
            FieldOp::Div => self.div(x, y),
        }
    }

    /// `x^e` for a signed exponent, reduced modulo `q - 1` for nonzero `x`.
    pub fn pow(&self, x: FieldElem, e: i64) -> Result<FieldElem, FieldError> {
        self.check(x);
        if x.is_zero() {
            return if e > 0 { Ok(self.zero()) } else { Err(FieldError::ZeroPower) };
        }
        let red = e.rem_euclid(self.q as i64 - 1) as u64;
        Ok(self.pow_nonzero(x, red))
    }

    /// `x^e` for an exponent of arbitrary size.
    pub fn pow_big(&self, x: FieldElem, e: &BigInt) -> Result<FieldElem, FieldError> {
        self.check(x);
        if x.is_zero() {
            return if e.is_positive() { Ok(self.zero()) } else { Err(FieldError::ZeroPower) };
        }
        let m = BigInt::from(self.q as u64 - 1);
        let red = e.mod_floor(&m).to_u64().expect("reduced exponent fits");
        Ok(self.pow_nonzero(x, red))
    }

    fn pow_nonzero(&self, x: FieldElem, e: u64) -> FieldElem {
        match &self.tables {
            Some(t) => {
                let l = t.log[x.index as usize] as u64;
                let k = (l * e) % (self.q as u64 - 1);
                self.wrap(t.exp[k as usize])
            }
            None => self.wrap(self.pow_direct(x.index, e)),
        }
    }

    /// `x^(p^t)`.
    pub fn frobenius(&self, x: FieldElem, t: u32) -> FieldElem {
        self.check(x);
        if x.is_zero() || self.s == 1 {
            return x;
        }
        let e = mod_pow_u64(self.p as u64, t as u64, self.q as u64 - 1);
        self.pow_nonzero(x, e)
    }

    /// Inverse of [`Self::frobenius`]: the unique `y` with `y^(p^t) = x`.
    pub fn frobenius_inv(&self, x: FieldElem, t: u32) -> FieldElem {
        let s = self.s as u32;
        self.frobenius(x, (s - t % s) % s)
    }

    /// Square root, if `x` is a square. The root returned is the one of `±v`
    /// that comes first in enumeration order.
    pub fn sqrt(&self, x: FieldElem) -> Option<FieldElem> {
        self.check(x);
        if x.is_zero() {
            return Some(x);
        }
        if (self.q as u64) <= SQRT_SCAN_LIMIT {
            return self.nonzero_elements().find(|&v| self.mul(v, v) == x);
        }
        let half = (self.q as u64 - 1) / 2;
        if self.pow_nonzero(x, half) != self.one() {
            return None;
        }
        let v = self.tonelli_shanks(x);
        let w = self.neg(v);
        Some(if w.index < v.index { w } else { v })
    }

    pub fn is_square(&self, x: FieldElem) -> bool {
        x.is_zero() || self.pow_nonzero(x, (self.q as u64 - 1) / 2) == self.one()
    }

    fn tonelli_shanks(&self, x: FieldElem) -> FieldElem {
        let mut odd = self.q as u64 - 1;
        let mut two_adic = 0u32;
        while odd.is_multiple_of(2) {
            odd /= 2;
            two_adic += 1;
        }
        let half = (self.q as u64 - 1) / 2;
        let minus_one = self.neg(self.one());
        let z = self
            .nonzero_elements()
            .find(|&z| self.pow_nonzero(z, half) == minus_one)
            .expect("odd fields have non-residues");
        let mut m = two_adic;
        let mut c = self.pow_nonzero(z, odd);
        let mut t = self.pow_nonzero(x, odd);
        let mut r = self.pow_nonzero(x, odd.div_ceil(2));
        while t != self.one() {
            let mut i = 0;
            let mut tt = t;
            while tt != self.one() {
                tt = self.mul(tt, tt);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = self.mul(b, b);
            }
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        r
    }

    fn digits(&self, mut idx: u32) -> Vec<u64> {
        (0..self.s)
            .map(|_| {
                let d = idx % self.p;
                idx /= self.p;
                d as u64
            })
            .collect()
    }

    fn mul_direct(&self, x: u32, y: u32) -> u32 {
        let p = self.p as u64;
        let a = self.digits(x);
        let b = self.digits(y);
        let mut prod = vec![0u64; 2 * self.s - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai * bj) % p;
            }
        }
        // reduce with the monic modulus
        for deg in (self.s..prod.len()).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for (j, &mj) in self.modulus[..self.s].iter().enumerate() {
                let k = deg - self.s + j;
                prod[k] = (prod[k] + (p - c) * mj as u64) % p;
            }
        }
        prod[..self.s].iter().zip(&self.weights).map(|(&c, &w)| c as u32 * w).sum()
    }

    fn pow_direct(&self, x: u32, mut e: u64) -> u32 {
        let mut acc = 1u32;
        let mut b = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_direct(acc, b);
            }
            b = self.mul_direct(b, b);
            e >>= 1;
        }
        acc
    }

    /// Human-readable form: an integer in the prime subfield, otherwise a
    /// polynomial in the field generator `z`.
    pub fn render(&self, x: FieldElem) -> String {
        let c = self.coords(x);
        if c.iter().skip(1).all(|&d| d == 0) {
            return c[0].to_string();
        }
        let mut parts = Vec::new();
        for (i, &d) in c.iter().enumerate().rev() {
            if d == 0 {
                continue;
            }
            let coef = if d == 1 && i > 0 { String::new() } else { d.to_string() };
            parts.push(match i {
                0 => coef,
                1 => format!("{coef}z"),
                _ => format!("{coef}z^{i}"),
            });
        }
        format!("({})", parts.join("+"))
    }
}

/// Ring embedding of `F_q` into a larger field presentation.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: Arc<FqContext>,
    target: Arc<FqContext>,
    // image of z^i, i < s
    basis: Vec<FieldElem>,
}

impl Embedding {
    pub fn source(&self) -> &Arc<FqContext> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FqContext> {
        &self.target
    }

    pub fn apply(&self, x: FieldElem) -> FieldElem {
        let t = &self.target;
        self.source
            .coords(x)
            .into_iter()
            .zip(&self.basis)
            .fold(t.zero(), |acc, (c, &b)| t.add(acc, t.mul(t.from_int(c as i64), b)))
    }

    /// Identity embedding of a field into itself.
    pub fn identity(ctx: &Arc<FqContext>) -> Self {
        let mut basis = Vec::with_capacity(ctx.degree());
        let mut cur = ctx.one();
        for i in 0..ctx.degree() {
            basis.push(cur);
            if i + 1 < ctx.degree() {
                cur = ctx.from_coords(&(0..ctx.degree()).map(|j| u64::from(j == i + 1)).collect::<Vec<_>>()).unwrap();
            }
        }
        Embedding { source: ctx.clone(), target: ctx.clone(), basis }
    }
}

/// Builds `F_{q^2}` (with its default modulus) and an embedding of `F_q`.
///
/// The generator of `F_q` is sent to the first root of its modulus found
/// among the norms `w^(q+1)`, scanning `w` in enumeration order.
pub fn quadratic_ext(ctx: &Arc<FqContext>) -> Result<(Arc<FqContext>, Embedding), FieldError> {
    let big = FqContext::new(ctx.p as u64, 2 * ctx.s, None)?;
    let q = ctx.order();
    let eval_modulus = |z: FieldElem| {
        ctx.modulus.iter().rev().fold(big.zero(), |acc, &c| big.add(big.mul(acc, z), big.from_int(c as i64)))
    };
    let root = big
        .elements()
        .map(|w| if w.is_zero() { w } else { big.pow_nonzero(w, q + 1) })
        .find(|&n| eval_modulus(n).is_zero())
        .expect("F_q embeds in F_{q^2}");
    let mut basis = Vec::with_capacity(ctx.s);
    let mut cur = big.one();
    for _ in 0..ctx.s {
        basis.push(cur);
        cur = big.mul(cur, root);
    }
    Ok((big.clone(), Embedding { source: ctx.clone(), target: big, basis }))
}
