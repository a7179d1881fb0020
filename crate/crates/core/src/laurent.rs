//! Truncated Laurent series in `1/T` with explicit precision.
//!
//! A [`Laurent`] stores the coefficients of `T^top, T^{top-1}, ..., T^{K+1}`
//! where `K` is `known_through`: every coefficient with exponent `> K` is exact
//! and nothing is claimed below. Each operation derives the worst-case `K` of
//! its result from the operands, so an uncertified coefficient never becomes
//! visible. The leading stored coefficient is nonzero; a series whose known
//! window is entirely zero is *known-zero* and has `top == K`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cf::{continuant, Word};
use crate::field::{Embedding, FieldElem, FqContext};
use crate::poly::Poly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("division by a series that is zero to known precision")]
    DivisionByZero,
    #[error("coefficient of T^{exponent} is not known (known through T^{known_through})")]
    InsufficientPrecision { exponent: i64, known_through: i64 },
    #[error("the word needs at least {0} terms")]
    TooShort(usize),
}

#[derive(Clone)]
pub struct Laurent {
    ctx: Arc<FqContext>,
    top: i64,
    known: i64,
    coeffs: Vec<FieldElem>,
}

/// Serialized form: `{top_degree, known_through, coefficients}` with each
/// coefficient a coordinate array.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentRecord {
    pub top_degree: i64,
    pub known_through: i64,
    pub coefficients: Vec<Vec<u32>>,
}

impl Laurent {
    /// Builds `Σ c_i T^{top-i}` known through `known`, trimming leading zeros.
    /// Coefficients beyond the window are dropped, missing ones are zero.
    pub fn from_coeffs(ctx: &Arc<FqContext>, top: i64, known: i64, mut coeffs: Vec<FieldElem>) -> Self {
        let width = (top - known).max(0) as usize;
        coeffs.resize(width, ctx.zero());
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => Laurent { ctx: ctx.clone(), top: known, known, coeffs: Vec::new() },
            Some(0) => Laurent { ctx: ctx.clone(), top, known, coeffs },
            Some(i) => Laurent { ctx: ctx.clone(), top: top - i as i64, known, coeffs: coeffs.split_off(i) },
        }
    }

    /// The zero series known through `known`.
    pub fn zero(ctx: &Arc<FqContext>, known: i64) -> Self {
        Self::from_coeffs(ctx, known, known, Vec::new())
    }

    /// A polynomial, truncated to the window above `known`.
    pub fn from_poly(p: &Poly, known: i64) -> Self {
        let ctx = p.ctx();
        if p.is_zero() || p.deg() <= known {
            return Self::zero(ctx, known);
        }
        let top = p.deg();
        let coeffs = (0..(top - known))
            .map(|i| {
                let e = top - i;
                if e >= 0 {
                    p.coeff(e as usize)
                } else {
                    ctx.zero()
                }
            })
            .collect();
        Self::from_coeffs(ctx, top, known, coeffs)
    }

    /// `num/den` expanded down to precision `known`.
    pub fn from_rational(num: &Poly, den: &Poly, known: i64) -> Result<Self, LaurentError> {
        if den.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        Self::from_poly(num, known + den.deg()).div_poly(den)
    }

    pub fn monomial(ctx: &Arc<FqContext>, c: FieldElem, e: i64, known: i64) -> Self {
        Self::from_coeffs(ctx, e, known, vec![c])
    }

    pub fn ctx(&self) -> &Arc<FqContext> {
        &self.ctx
    }

    /// Exponent of the leading term; equal to `known_through` for known-zero.
    pub fn top(&self) -> i64 {
        self.top
    }

    pub fn known_through(&self) -> i64 {
        self.known
    }

    pub fn width(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_known_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficients from `T^top` downward.
    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn lead(&self) -> Option<FieldElem> {
        self.coeffs.first().copied()
    }

    /// Coefficient of `T^e`, or `None` when it lies outside the known window.
    pub fn coeff(&self, e: i64) -> Option<FieldElem> {
        if e <= self.known {
            None
        } else if e > self.top {
            Some(self.ctx.zero())
        } else {
            Some(self.coeffs[(self.top - e) as usize])
        }
    }

    #[inline]
    fn c(&self, e: i64) -> FieldElem {
        if e > self.top || e <= self.known {
            self.ctx.zero()
        } else {
            self.coeffs[(self.top - e) as usize]
        }
    }

    pub fn to_record(&self) -> LaurentRecord {
        LaurentRecord {
            top_degree: self.top,
            known_through: self.known,
            coefficients: self.coeffs.iter().map(|&c| self.ctx.coords(c)).collect(),
        }
    }

    /// Drops coefficients at or below `known` (no-op if already coarser).
    pub fn truncate(&self, known: i64) -> Laurent {
        if known <= self.known {
            return self.clone();
        }
        let keep = (self.top - known).max(0) as usize;
        Self::from_coeffs(&self.ctx, self.top, known, self.coeffs[..keep.min(self.coeffs.len())].to_vec())
    }

    pub fn neg(&self) -> Laurent {
        let f = &self.ctx;
        Laurent {
            ctx: f.clone(),
            top: self.top,
            known: self.known,
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
        }
    }

    pub fn scale(&self, c: FieldElem) -> Laurent {
        let f = &self.ctx;
        Self::from_coeffs(f, self.top, self.known, self.coeffs.iter().map(|&x| f.mul(x, c)).collect())
    }

    fn combine(&self, o: &Laurent, sub: bool) -> Laurent {
        let f = &self.ctx;
        let known = self.known.max(o.known);
        let top = self.top.max(o.top).max(known);
        let coeffs = ((known + 1)..=top)
            .rev()
            .map(|e| {
                let (x, y) = (self.c(e), o.c(e));
                if sub {
                    f.sub(x, y)
                } else {
                    f.add(x, y)
                }
            })
            .collect();
        Self::from_coeffs(f, top, known, coeffs)
    }

    pub fn add(&self, o: &Laurent) -> Laurent {
        self.combine(o, false)
    }

    pub fn sub(&self, o: &Laurent) -> Laurent {
        self.combine(o, true)
    }

    pub fn add_poly(&self, p: &Poly) -> Laurent {
        self.add(&Laurent::from_poly(p, self.known))
    }

    /// Product; unknown parts contribute at most `T^{K_1 + top_2}` and `T^{K_2 + top_1}`.
    pub fn mul(&self, o: &Laurent) -> Laurent {
        let f = &self.ctx;
        let known = (self.known + o.top).max(o.known + self.top);
        let top = self.top + o.top;
        if self.is_known_zero() || o.is_known_zero() || top <= known {
            return Self::zero(f, known);
        }
        let width = (top - known) as usize;
        let mut out = vec![f.zero(); width];
        for (i, &a) in self.coeffs.iter().enumerate().take(width) {
            if a.is_zero() {
                continue;
            }
            let lim = (width - i).min(o.coeffs.len());
            for (j, &b) in o.coeffs[..lim].iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Self::from_coeffs(f, top, known, out)
    }

    /// Product with an exact polynomial: precision drops by `deg p`.
    pub fn mul_poly(&self, p: &Poly) -> Laurent {
        let f = &self.ctx;
        if p.is_zero() {
            return Self::zero(f, i64::MIN / 4);
        }
        let d = p.deg();
        let known = self.known + d;
        let top = self.top + d;
        if self.is_known_zero() {
            return Self::zero(f, known);
        }
        let width = (top - known) as usize;
        let mut out = vec![f.zero(); width];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            // coefficient of T^{top_x - i + j} with j from d down to 0
            for (jj, &b) in p.coeffs().iter().rev().enumerate() {
                let idx = i + jj;
                if idx >= width {
                    break;
                }
                out[idx] = f.add(out[idx], f.mul(a, b));
            }
        }
        Self::from_coeffs(f, top, known, out)
    }

    /// Quotient by an exact nonzero polynomial: precision drops by `deg p`.
    pub fn div_poly(&self, p: &Poly) -> Result<Laurent, LaurentError> {
        let f = &self.ctx;
        let lead = p.lead().ok_or(LaurentError::DivisionByZero)?;
        let inv = f.inv(lead).expect("nonzero");
        let d = p.deg();
        let known = self.known - d;
        let top = self.top - d;
        if self.is_known_zero() {
            return Ok(Self::zero(f, known));
        }
        let width = (top - known) as usize;
        let pc = p.coeffs();
        let mut q = Vec::with_capacity(width);
        for i in 0..width {
            // coefficient of T^{top_x - i} in x equals Σ_j p_{d-j} q_{i-j}
            let mut acc = self.coeffs[i];
            for j in 1..=(d as usize).min(i) {
                acc = f.sub(acc, f.mul(pc[d as usize - j], q[i - j]));
            }
            q.push(f.mul(acc, inv));
        }
        Ok(Self::from_coeffs(f, top, known, q))
    }

    /// Multiplicative inverse; precision becomes `K - 2 top`.
    pub fn inv(&self) -> Result<Laurent, LaurentError> {
        let f = &self.ctx;
        if self.is_known_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        let width = self.coeffs.len();
        let c = f.inv(self.coeffs[0]).expect("nonzero lead");
        let mut y = Vec::with_capacity(width);
        for i in 0..width {
            let mut acc = if i == 0 { f.one() } else { f.zero() };
            for j in 1..=i {
                let xj = self.coeffs[j];
                if !xj.is_zero() {
                    acc = f.sub(acc, f.mul(xj, y[i - j]));
                }
            }
            y.push(f.mul(acc, c));
        }
        Ok(Self::from_coeffs(f, -self.top, self.known - 2 * self.top, y))
    }

    pub fn div(&self, o: &Laurent) -> Result<Laurent, LaurentError> {
        Ok(self.mul(&o.inv()?))
    }

    /// `x^(p^t)`: coefficientwise Frobenius, exponents and precision scaled by `p^t`.
    pub fn pow_r(&self, t: u32) -> Laurent {
        let f = &self.ctx;
        let r = (f.characteristic() as i64).pow(t);
        let known = self.known * r;
        if self.is_known_zero() {
            return Self::zero(f, known);
        }
        let top = self.top * r;
        let mut out = vec![f.zero(); (top - known) as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i * r as usize] = f.frobenius(c, t);
        }
        Self::from_coeffs(f, top, known, out)
    }

    /// The part with nonnegative exponents.
    pub fn polynomial_part(&self) -> Result<Poly, LaurentError> {
        if self.top < 0 {
            return Ok(Poly::zero(&self.ctx));
        }
        if self.known >= 0 {
            return Err(LaurentError::InsufficientPrecision { exponent: 0, known_through: self.known });
        }
        let coeffs = (0..=self.top).map(|e| self.c(e)).collect();
        Ok(Poly::new(&self.ctx, coeffs))
    }

    /// `x(vT)`.
    pub fn scale_arg(&self, v: FieldElem) -> Result<Laurent, LaurentError> {
        let f = &self.ctx;
        let vi = f.inv(v).map_err(|_| LaurentError::DivisionByZero)?;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let e = self.top - i as i64;
                let w = if e >= 0 { f.pow(v, e) } else { f.pow(vi, -e) }.expect("nonzero");
                f.mul(c, w)
            })
            .collect();
        Ok(Self::from_coeffs(f, self.top, self.known, coeffs))
    }

    pub fn embed(&self, emb: &Embedding) -> Laurent {
        Self::from_coeffs(emb.target(), self.top, self.known, self.coeffs.iter().map(|&c| emb.apply(c)).collect())
    }

    /// True when both series agree on every exponent known to both.
    pub fn agrees_with(&self, o: &Laurent) -> bool {
        let known = self.known.max(o.known);
        let top = self.top.max(o.top);
        ((known + 1)..=top).all(|e| self.c(e) == o.c(e))
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent({self})")
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ctx = &self.ctx;
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if parts.len() == 10 {
                parts.push("...".to_string());
                break;
            }
            if c.is_zero() {
                continue;
            }
            let e = self.top - i as i64;
            let coef = if c == ctx.one() && e != 0 { String::new() } else { ctx.render(c) };
            parts.push(match e {
                0 => coef,
                1 => format!("{coef}T"),
                _ => format!("{coef}T^{e}"),
            });
        }
        if parts.is_empty() {
            parts.push("0".to_string());
        }
        write!(f, "{} + O(T^{})", parts.join(" + "), self.known)
    }
}

/// Why a continued-fraction expansion stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpandStop {
    /// The requested number of quotients was produced.
    Complete,
    /// The known window cannot determine the next quotient.
    Precision,
    /// The caller's predicate asked to stop.
    Requested,
}

#[derive(Clone, Debug)]
pub struct CfExpansion {
    /// Certified partial quotients only.
    pub word: Word,
    pub certified: usize,
    pub stop: ExpandStop,
}

/// Polynomial part of `x / y` if the windows determine it.
fn certified_quotient(x: &Laurent, y: &Laurent) -> Option<Poly> {
    let f = &x.ctx;
    if y.is_known_zero() || x.is_known_zero() {
        return None;
    }
    let d = x.top - y.top;
    if d < 0 {
        return Some(Poly::zero(f));
    }
    // quotient coefficients of T^d..T^0 use x down to T^{y.top} and y down to T^{y.top - d}
    if y.top <= x.known || y.top - d <= y.known {
        return None;
    }
    let inv = f.inv(y.coeffs[0]).expect("nonzero lead");
    let d = d as usize;
    let mut q = vec![f.zero(); d + 1];
    for i in 0..=d {
        let mut acc = x.coeffs[i];
        for j in 1..=i {
            acc = f.sub(acc, f.mul(y.coeffs[j], q[d - (i - j)]));
        }
        q[d - i] = f.mul(acc, inv);
    }
    Some(Poly::new(f, q))
}

/// Continued-fraction expansion keeping only certified quotients.
pub fn cf_expand(x: &Laurent, max_terms: usize) -> CfExpansion {
    cf_expand_until(x, max_terms, |_, _| false)
}

/// As [`cf_expand`], stopping after any quotient for which `stop(index, a)`
/// holds (1-based index; the quotient is kept).
pub fn cf_expand_until(x: &Laurent, max_terms: usize, mut stop: impl FnMut(usize, &Poly) -> bool) -> CfExpansion {
    let f = &x.ctx;
    // Euclid on (x, 1). The exact 1 is given enough precision never to be the
    // limiting operand: R_2 = x - a_1 has precision K_0 exactly.
    let k1 = x.known - x.top.max(0);
    let mut prev = x.clone();
    let mut cur = Laurent::monomial(f, f.one(), 0, k1.min(-1));
    let mut word = Word::empty(f);
    while word.len() < max_terms {
        let Some(a) = certified_quotient(&prev, &cur) else {
            let n = word.len();
            return CfExpansion { word, certified: n, stop: ExpandStop::Precision };
        };
        let next = prev.sub(&cur.mul_poly(&a));
        word.push(a);
        let n = word.len();
        if stop(n, &word.terms()[n - 1]) {
            return CfExpansion { word, certified: n, stop: ExpandStop::Requested };
        }
        prev = cur;
        cur = next;
    }
    let n = word.len();
    CfExpansion { word, certified: n, stop: ExpandStop::Complete }
}

/// `[w_1, ..., w_n, z] = x_n/y_n + (-1)^{n-1} / (y_n (y_n z + y_{n-1}))`.
pub fn cf_with_tail_series(w: &Word, z: &Laurent) -> Result<Laurent, LaurentError> {
    if w.is_empty() {
        return Ok(z.clone());
    }
    let n = w.len();
    let conv = crate::cf::convergents(w);
    let (xn, yn) = &conv[n];
    let (_, ym) = &conv[n - 1];
    let d = z.mul_poly(yn).add_poly(ym);
    let mut tail = d.inv()?.div_poly(yn)?;
    if n.is_multiple_of(2) {
        tail = tail.neg();
    }
    let head = Laurent::from_rational(xn, yn, tail.known)?;
    Ok(head.add(&tail))
}

/// Lemma 0 for a series increment: the `b` with `[W] + a = [W, b]`.
pub fn lemma0_extend_series(w: &Word, a: &Laurent) -> Result<Laurent, LaurentError> {
    if w.len() < 2 {
        return Err(LaurentError::TooShort(2));
    }
    let wp = w.drop_first();
    let c1 = continuant(&wp);
    let c2 = continuant(&wp.drop_last());
    let mut first = a.inv()?.div_poly(&(&c1 * &c1))?;
    if w.len().is_multiple_of(2) {
        first = first.neg();
    }
    let second = Laurent::from_rational(&c2, &c1, first.known)?;
    Ok(first.sub(&second))
}
