//! Finite continued fractions over `F_q(T)`: words, continuants, convergents.
//!
//! For a word `W = w_1, ..., w_n` the continuant `<W>` satisfies
//! `<W> = w_1 <W'> + <(W')'>` where `W'` drops the first term; `[W] = <W>/<W'>`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::field::{FieldElem, FqContext};
use crate::poly::{gcd, Poly, PolyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CfError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("the word needs at least {0} terms")]
    TooShort(usize),
    #[error("twist factor must be nonzero")]
    ZeroTwist,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A finite sequence of partial quotients.
#[derive(Clone)]
pub struct Word {
    ctx: Arc<FqContext>,
    terms: Vec<Poly>,
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for Word {}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word{self}")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, "]")
    }
}

impl Word {
    pub fn new(ctx: &Arc<FqContext>, terms: Vec<Poly>) -> Self {
        Word { ctx: ctx.clone(), terms }
    }

    pub fn empty(ctx: &Arc<FqContext>) -> Self {
        Self::new(ctx, Vec::new())
    }

    /// Word of linear terms `λ_i T + μ_i`.
    pub fn linear(ctx: &Arc<FqContext>, lambdas: &[FieldElem], mus: &[FieldElem]) -> Self {
        let terms = lambdas.iter().zip(mus).map(|(&l, &m)| Poly::linear(ctx, l, m)).collect();
        Self::new(ctx, terms)
    }

    pub fn ctx(&self) -> &Arc<FqContext> {
        &self.ctx
    }

    pub fn terms(&self) -> &[Poly] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Poly> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, term: Poly) {
        self.terms.push(term);
    }

    /// `W'`: all but the first term.
    pub fn drop_first(&self) -> Word {
        Word::new(&self.ctx, self.terms.iter().skip(1).cloned().collect())
    }

    /// `W''`: all but the last term.
    pub fn drop_last(&self) -> Word {
        let n = self.terms.len().saturating_sub(1);
        Word::new(&self.ctx, self.terms[..n].to_vec())
    }

    /// `W*`.
    pub fn reverse(&self) -> Word {
        Word::new(&self.ctx, self.terms.iter().rev().cloned().collect())
    }

    /// `y·W = y w_1, y^{-1} w_2, y w_3, ...`.
    pub fn twist(&self, y: FieldElem) -> Result<Word, CfError> {
        let f = &self.ctx;
        let yi = f.inv(y).map_err(|_| CfError::ZeroTwist)?;
        let terms = self.terms.iter().enumerate().map(|(i, w)| w.scale(if i % 2 == 0 { y } else { yi })).collect();
        Ok(Word::new(f, terms))
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Word::new(&self.ctx, terms)
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Word {
        Word::new(&self.ctx, self.terms[range].to_vec())
    }

    /// Terms as nested coordinate arrays.
    pub fn to_coords(&self) -> Vec<Vec<Vec<u32>>> {
        self.terms.iter().map(Poly::to_coords).collect()
    }
}

/// `<W>`, with `<∅> = 1`.
pub fn continuant(w: &Word) -> Poly {
    let mut prev = Poly::zero(&w.ctx);
    let mut cur = Poly::one(&w.ctx);
    for t in &w.terms {
        let next = &(t * &cur) + &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `(x_n, y_n)` for `n = 0..=|W|`: `x_n = <w_1..w_n>`, `y_n = <w_2..w_n>`,
/// starting from `(x_0, y_0) = (1, 0)`.
pub fn convergents(w: &Word) -> Vec<(Poly, Poly)> {
    let ctx = &w.ctx;
    let mut out = Vec::with_capacity(w.len() + 1);
    let (mut xp, mut yp) = (Poly::zero(ctx), Poly::one(ctx));
    let (mut x, mut y) = (Poly::one(ctx), Poly::zero(ctx));
    out.push((x.clone(), y.clone()));
    for t in &w.terms {
        let xn = &(t * &x) + &xp;
        let yn = &(t * &y) + &yp;
        xp = std::mem::replace(&mut x, xn);
        yp = std::mem::replace(&mut y, yn);
        out.push((x.clone(), y.clone()));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfDiagnostic {
    ZeroDenominator,
    NotCoprime,
}

/// `[W] = <W>/<W'>`, unreduced, together with any degeneracy found.
#[derive(Clone, Debug)]
pub struct CfValue {
    pub num: Poly,
    pub den: Poly,
    pub diagnostic: Option<CfDiagnostic>,
}

pub fn eval_cf(w: &Word) -> CfValue {
    let num = continuant(w);
    let den = continuant(&w.drop_first());
    let diagnostic = if den.is_zero() {
        Some(CfDiagnostic::ZeroDenominator)
    } else if gcd(&num, &den).deg() > 0 {
        Some(CfDiagnostic::NotCoprime)
    } else {
        None
    };
    CfValue { num, den, diagnostic }
}

/// Euclidean expansion of `num/den`. Partial quotients are the plain polynomial
/// quotients, without any normalization of leading coefficients.
pub fn cf_of_rational(num: &Poly, den: &Poly) -> Result<Word, CfError> {
    if den.is_zero() {
        return Err(CfError::ZeroDenominator);
    }
    let mut terms = Vec::new();
    let (mut a, mut b) = (num.clone(), den.clone());
    while !b.is_zero() {
        let (q, r) = a.divmod(&b)?;
        terms.push(q);
        a = b;
        b = r;
    }
    Ok(Word::new(num.ctx(), terms))
}

/// A rational function `num/den` kept in lowest terms with monic denominator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self, CfError> {
        if den.is_zero() {
            return Err(CfError::ZeroDenominator);
        }
        let g = gcd(&num, &den);
        let mut n = num.exact_div(&g).expect("gcd divides");
        let mut d = den.exact_div(&g).expect("gcd divides");
        let l = d.ctx().inv(d.lead().expect("nonzero")).expect("nonzero");
        n = n.scale(l);
        d = d.scale(l);
        Ok(RatFunc { num: n, den: d })
    }

    pub fn from_poly(p: Poly) -> Self {
        let one = Poly::one(p.ctx());
        RatFunc { num: p, den: one }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `deg num - deg den`; the valuation exponent of `|·|`.
    pub fn degree(&self) -> i64 {
        if self.num.is_zero() {
            crate::poly::DEG_ZERO
        } else {
            self.num.deg() - self.den.deg()
        }
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        let n = &(&self.num * &o.den) + &(&o.num * &self.den);
        RatFunc::new(n, &self.den * &o.den).expect("nonzero")
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &o.num, &self.den * &o.den).expect("nonzero")
    }

    pub fn inv(&self) -> Result<RatFunc, CfError> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc, CfError> {
        Ok(self.mul(&o.inv()?))
    }
}

/// `[W]` as a reduced rational function.
pub fn cf_value(w: &Word) -> Result<RatFunc, CfError> {
    let v = eval_cf(w);
    RatFunc::new(v.num, v.den)
}

/// `[w_1, ..., w_n, z] = (x_n z + x_{n-1}) / (y_n z + y_{n-1})`.
pub fn cf_with_tail(w: &Word, z: &RatFunc) -> Result<RatFunc, CfError> {
    let conv = convergents(w);
    let n = w.len();
    if n == 0 {
        return Ok(z.clone());
    }
    let (xn, yn) = &conv[n];
    let (xm, ym) = &conv[n - 1];
    let num = &(xn * z.num()) + &(xm * z.den());
    let den = &(yn * z.num()) + &(ym * z.den());
    RatFunc::new(num, den)
}

/// Lemma 0: the term `b` with `[W] + a = [W, b]`, namely
/// `b = (-1)^{|W|-1} <W'>^{-2} a^{-1} - <(W')''> <W'>^{-1}`.
pub fn lemma0_extend(w: &Word, a: &RatFunc) -> Result<RatFunc, CfError> {
    if w.len() < 2 {
        return Err(CfError::TooShort(2));
    }
    if a.is_zero() {
        return Err(CfError::ZeroDenominator);
    }
    let wp = w.drop_first();
    let c1 = RatFunc::from_poly(continuant(&wp));
    let c2 = RatFunc::from_poly(continuant(&wp.drop_last()));
    let mut first = c1.mul(&c1).mul(a).inv()?;
    if w.len().is_multiple_of(2) {
        first = first.neg();
    }
    Ok(first.sub(&c2.div(&c1)?))
}
