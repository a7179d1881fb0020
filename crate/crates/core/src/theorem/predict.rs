//! The partial quotients `a_n = λ_n T + μ_n` from the closed forms:
//! `λ_{l+1} = λ_1^r ε_1^{-1}`, `λ_n = C(n) λ_{n-1}^{-1}`, and `μ_n` nonzero
//! only on `G ∪ (G+1)`.

use num_bigint::BigInt;
use num_traits::{One, Pow};

use crate::cf::Word;
use crate::field::{FieldElem, FqContext};
use crate::hyperquad::HyperquadSpec;
use crate::poly::Poly;

use super::classify::{classify_index, Orbit};
use super::conditions::{check_conditions, ConditionReport};
use super::TheoremError;

#[derive(Clone, Debug)]
pub struct Prediction {
    pub word: Word,
    /// Indices lying in two of `F`, `F+1`, `G`, `G+1` (only `G ∩ (F+1)` can
    /// occur, and only for `r = 3`).
    pub overlaps: Vec<usize>,
}

struct Ctx<'a> {
    f: &'a FqContext,
    spec: &'a HyperquadSpec,
    rep: &'a ConditionReport,
    r: BigInt,
}

impl Ctx<'_> {
    fn r_pow(&self, m: u32) -> BigInt {
        Pow::pow(&self.r, m - 1)
    }

    fn lambda_r(&self, i: usize) -> FieldElem {
        self.f.frobenius(self.spec.lambda[i - 1], self.spec.t)
    }

    /// `π_i = (ν_i - μ_i^r) δ_i^{-1}`.
    fn pi(&self, i: usize) -> FieldElem {
        let f = self.f;
        let gap = f.sub(self.rep.nu(i), f.frobenius(self.spec.mu[i - 1], self.spec.t));
        f.div(gap, self.rep.delta(i)).expect("delta_i != 0 under (C1)")
    }

    /// `μ_n/λ_n` at `n = g^m(i)`: `(-a)^{v_m} π_i^{r^{m-1}} / 2` with
    /// `v_m = (r^{m-1}(2 - r) + 1)/2`.
    fn mu_ratio(&self, o: Orbit) -> FieldElem {
        let f = self.f;
        let rp = self.r_pow(o.m);
        let v: BigInt = (&rp * (BigInt::from(2) - &self.r) + BigInt::one()) / 2;
        let x =
            f.mul(f.pow_big(f.neg(self.spec.a), &v).expect("a != 0"), f.pow_big(self.pi(o.i), &rp).unwrap_or(f.zero()));
        f.div(x, f.from_int(2)).expect("odd characteristic")
    }

    fn c_of(&self, n: usize, c: &super::classify::IndexClassification) -> Result<FieldElem, TheoremError> {
        let f = self.f;
        let a = self.spec.a;
        let ai = f.inv(a)?;
        let two_ai = f.mul(f.from_int(2), ai);
        let four_ai = f.mul(f.from_int(4), ai);
        if c.c_collision() {
            return Err(TheoremError::CaseCollision(n));
        }
        let undefined = |_| TheoremError::UndefinedC(n);
        if let Some(o) = c.f {
            // 2a^{-1}(1 - a^{-1} λ_i^{-r} δ_i)^{-r^{m-1}}
            let q = f.div(self.rep.delta(o.i), f.mul(a, self.lambda_r(o.i)))?;
            let base = f.sub(f.one(), q);
            let e = -self.r_pow(o.m);
            return Ok(f.mul(two_ai, f.pow_big(base, &e).map_err(undefined)?));
        }
        if let Some(o) = c.f_plus_1 {
            // 2a^{-1}(a λ_i^r δ_i^{-1})^{r^{m-1}}
            let base = f.div(f.mul(a, self.lambda_r(o.i)), self.rep.delta(o.i))?;
            return Ok(f.mul(two_ai, f.pow_big(base, &self.r_pow(o.m)).map_err(undefined)?));
        }
        if let Some(o) = c.g_plus_1 {
            // 4a^{-1} ω_i^{-r^{m-1}}
            let r = self.spec.r();
            let w = super::prop1::omega(f, a, self.pi(o.i), r);
            let e = -self.r_pow(o.m);
            return Ok(f.mul(four_ai, f.pow_big(w, &e).map_err(undefined)?));
        }
        Ok(four_ai)
    }
}

/// The closed-form prediction of the first `n_terms` quotients.
pub fn predict(spec: &HyperquadSpec, n_terms: usize) -> Result<Prediction, TheoremError> {
    let rep = check_conditions(spec)?;
    if !rep.all() {
        return Err(TheoremError::ConditionsFail);
    }
    let f = spec.ctx.as_ref();
    let cx = Ctx { f, spec, rep: &rep, r: BigInt::from(spec.r()) };
    let l = spec.l();
    let r = spec.r();
    let mut lambda: Vec<FieldElem> = Vec::with_capacity(n_terms);
    let mut terms = Vec::with_capacity(n_terms);
    let mut overlaps = Vec::new();
    for n in 1..=n_terms {
        if n <= l {
            lambda.push(spec.lambda[n - 1]);
            terms.push(Poly::linear(&spec.ctx, spec.lambda[n - 1], spec.mu[n - 1]));
            continue;
        }
        let c = classify_index(n, l, r, &rep.i_star);
        if c.memberships() > 1 {
            overlaps.push(n);
        }
        let lam = if n == l + 1 { f.div(cx.lambda_r(1), spec.eps1)? } else { f.div(cx.c_of(n, &c)?, lambda[n - 2])? };
        let mu = match (c.g, c.g_plus_1) {
            (Some(o), _) => f.mul(lam, cx.mu_ratio(o)),
            (None, Some(o)) => f.neg(f.mul(lam, cx.mu_ratio(o))),
            (None, None) => f.zero(),
        };
        lambda.push(lam);
        terms.push(Poly::linear(&spec.ctx, lam, mu));
    }
    Ok(Prediction { word: Word::new(&spec.ctx, terms), overlaps })
}

pub fn predicted_expansion(spec: &HyperquadSpec, n_terms: usize) -> Result<Word, TheoremError> {
    Ok(predict(spec, n_terms)?.word)
}
