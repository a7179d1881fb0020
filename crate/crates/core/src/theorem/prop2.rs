//! One step of the recursion: from `α_n^r = ε_{1,n} P_a α_{f(n)} + ε_{2,n} Q_a
//! + ν_n` and `a_n = λ_n T + μ_n`, the quotients `a_{f(n)}, ..., a_{f(n)+r-1}`
//! and the relation for `n + 1`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cf::Word;
use crate::field::{FieldElem, FqContext};
use crate::hyperquad::HyperquadSpec;
use crate::poly::Poly;

use super::prop1::{prop1_word, r_of};
use super::TheoremError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TheoremState {
    pub n: usize,
    pub lambda: FieldElem,
    pub mu: FieldElem,
    pub eps1: FieldElem,
    pub eps2: FieldElem,
    pub nu: FieldElem,
    /// `δ_n = a λ_n^r + ε_{2,n}`.
    pub delta: FieldElem,
    /// `π_n = (ν_n - μ_n^r) δ_n^{-1}`, defined when `δ_n != 0`.
    pub pi: Option<FieldElem>,
    /// `ω_n = 1 + a^{2-r} π_n^2`, defined when `δ_n != 0`.
    pub omega: Option<FieldElem>,
}

/// `(ε_{1,n+1}, ε_{2,n+1}, ν_{n+1})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Carry {
    pub eps1: FieldElem,
    pub eps2: FieldElem,
    pub nu: FieldElem,
}

impl TheoremState {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        ctx: &FqContext,
        a: FieldElem,
        t: u32,
        n: usize,
        lambda: FieldElem,
        mu: FieldElem,
        carry: Carry,
    ) -> Self {
        let r = r_of(ctx, t);
        let delta = ctx.add(ctx.mul(a, ctx.frobenius(lambda, t)), carry.eps2);
        let (pi, omega) = if delta.is_zero() {
            (None, None)
        } else {
            let pi = ctx.div(ctx.sub(carry.nu, ctx.frobenius(mu, t)), delta).expect("delta != 0");
            (Some(pi), Some(super::prop1::omega(ctx, a, pi, r)))
        };
        TheoremState { n, lambda, mu, eps1: carry.eps1, eps2: carry.eps2, nu: carry.nu, delta, pi, omega }
    }

    /// State 1 of a spec: `ε_{1,1} = ε_1`, `ε_{2,1} = ε_2`, `ν_1 = 0`.
    pub fn initial(spec: &HyperquadSpec) -> Self {
        let f = &spec.ctx;
        let carry = Carry { eps1: spec.eps1, eps2: spec.eps2, nu: f.zero() };
        Self::new(f, spec.a, spec.t, 1, spec.lambda[0], spec.mu[0], carry)
    }

    /// `ν_n - μ_n^r`.
    pub fn gap(&self, ctx: &FqContext, t: u32) -> FieldElem {
        ctx.sub(self.nu, ctx.frobenius(self.mu, t))
    }
}

#[derive(Clone, Debug)]
pub enum Prop2Step {
    /// `δ_n ω_n != 0`: `r` quotients of degree 1.
    Perfect { quotients: Word, next: Carry },
    /// `δ_n = 0`: `a_{f(n)}` only; `a_{f(n)+1}` has degree > 1.
    NotPerfect { quotient: Poly },
}

pub fn prop2_step(ctx: &Arc<FqContext>, state: &TheoremState, a: FieldElem, t: u32) -> Result<Prop2Step, TheoremError> {
    let f = ctx.as_ref();
    let r = r_of(f, t);
    let k = (r - 1) / 2;
    let e1i = f.inv(state.eps1)?;
    let head = Poly::linear(ctx, f.mul(e1i, f.frobenius(state.lambda, t)), f.zero());
    let (Some(pi), Some(w)) = (state.pi, state.omega) else {
        return Ok(Prop2Step::NotPerfect { quotient: head });
    };
    if w.is_zero() {
        return Err(TheoremError::UndefinedStep(state.n));
    }
    let di = f.inv(state.delta)?;
    let y = f.neg(f.mul(state.eps1, di));
    let body = prop1_word(ctx, a, pi, t)?.word.twist(y)?;
    let a2r = f.pow(a, 2 - r as i64)?;
    let wi = f.inv(w)?;
    let eps1 = f.mul(f.mul(f.pow(a, 1 - r as i64)?, e1i), if k.is_multiple_of(2) { f.one() } else { f.mul(wi, wi) });
    let eps2 = f.neg(f.mul(a2r, f.mul(wi, di)));
    let nu = f.mul(f.mul(a2r, state.gap(f, t)), f.mul(wi, f.mul(di, di)));
    Ok(Prop2Step::Perfect { quotients: Word::new(ctx, vec![head]).concat(&body), next: Carry { eps1, eps2, nu } })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Prop2End {
    /// The requested number of quotients was produced.
    Reached,
    /// `δ_n = 0`; the quotient at `index` (1-based) has degree > 1.
    NotPerfect { index: usize },
    /// `ω_n = 0` at step `step`; quotients from `index` on are not predicted.
    Undefined { step: usize, index: usize },
}

#[derive(Clone, Debug)]
pub struct Prop2Trace {
    pub word: Word,
    pub states: Vec<TheoremState>,
    pub end: Prop2End,
}

/// Runs the step from the defining relation until `n_terms` quotients are
/// known or the recursion breaks down.
pub fn iterate_prop2(spec: &HyperquadSpec, n_terms: usize) -> Result<Prop2Trace, TheoremError> {
    spec.validate()?;
    if spec.pq_override.is_some() {
        return Err(TheoremError::Override);
    }
    let f = &spec.ctx;
    let mut word = spec.prefix();
    let mut states: Vec<TheoremState> = Vec::new();
    let mut carry = Carry { eps1: spec.eps1, eps2: spec.eps2, nu: f.zero() };
    while word.len() < n_terms {
        let n = states.len() + 1;
        let a_n = &word.terms()[n - 1];
        let state = TheoremState::new(f, spec.a, spec.t, n, a_n.coeff(1), a_n.coeff(0), carry);
        states.push(state);
        match prop2_step(f, &state, spec.a, spec.t) {
            Ok(Prop2Step::Perfect { quotients, next }) => {
                word = word.concat(&quotients);
                carry = next;
            }
            Ok(Prop2Step::NotPerfect { quotient }) => {
                word.push(quotient);
                let index = word.len() + 1;
                return Ok(Prop2Trace { word, states, end: Prop2End::NotPerfect { index } });
            }
            Err(TheoremError::UndefinedStep(step)) => {
                let e1i = f.inv(state.eps1)?;
                word.push(Poly::linear(f, f.mul(e1i, f.frobenius(state.lambda, spec.t)), f.zero()));
                let index = word.len() + 1;
                return Ok(Prop2Trace { word, states, end: Prop2End::Undefined { step, index } });
            }
            Err(e) => return Err(e),
        }
    }
    word = word.slice(0..n_terms);
    Ok(Prop2Trace { word, states, end: Prop2End::Reached })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperquad::expand_alpha;

    fn intro(p: u64, eps: i64) -> HyperquadSpec {
        let f = FqContext::prime(p).unwrap();
        let e = f.from_int(eps);
        let e1 = f.mul(e, f.sub(e, f.one()));
        HyperquadSpec::e0(&f, 1, f.from_int(-1), vec![f.one()], e1, e).unwrap()
    }

    #[test]
    fn intro_first_step_matches_oracle() {
        let spec = intro(3, 2);
        let f = &spec.ctx;
        let s = TheoremState::initial(&spec);
        let Prop2Step::Perfect { quotients, .. } = prop2_step(f, &s, spec.a, 1).unwrap() else { panic!() };
        let oracle = expand_alpha(&spec, 4).unwrap();
        assert_eq!(quotients, oracle.word.slice(1..4));
    }

    #[test]
    fn trace_matches_oracle() {
        let spec = intro(5, 3);
        let trace = iterate_prop2(&spec, 60).unwrap();
        assert_eq!(trace.end, Prop2End::Reached);
        let oracle = expand_alpha(&spec, 60).unwrap();
        assert_eq!(trace.word, oracle.word);
    }

    #[test]
    fn e0_reduces_to_c0_recursion() {
        // with μ = ν = 0: δ_{n+1} = a λ_{n+1}^r - a^{2-r} δ_n^{-1}
        let f = FqContext::prime(7).unwrap();
        let spec = HyperquadSpec::e0(&f, 1, f.from_int(3), vec![f.one(), f.from_int(2)], f.from_int(5), f.from_int(4))
            .unwrap();
        let trace = iterate_prop2(&spec, 40).unwrap();
        let a = spec.a;
        for w in trace.states.windows(2) {
            let (s, n) = (w[0], w[1]);
            assert!(s.nu.is_zero() && s.omega == Some(f.one()));
            let expect =
                f.sub(f.mul(a, f.frobenius(n.lambda, 1)), f.mul(f.pow(a, 2 - 7).unwrap(), f.inv(s.delta).unwrap()));
            assert_eq!(n.delta, expect);
        }
    }

    #[test]
    fn zero_delta_is_not_perfect() {
        let f = FqContext::prime(5).unwrap();
        let a = f.one();
        // δ = a λ^r + ε_2 = 0 with λ = 1, ε_2 = -1
        let s = TheoremState::new(
            &f,
            a,
            1,
            1,
            f.one(),
            f.zero(),
            Carry { eps1: f.one(), eps2: f.from_int(-1), nu: f.zero() },
        );
        assert!(s.delta.is_zero() && s.pi.is_none());
        match prop2_step(&f, &s, a, 1).unwrap() {
            Prop2Step::NotPerfect { quotient } => assert_eq!(quotient, Poly::t(&f)),
            _ => panic!("expected the degenerate branch"),
        }
    }
}
