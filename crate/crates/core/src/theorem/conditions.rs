//! Conditions (C0)-(C3).

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::field::{FieldElem, FqContext};
use crate::hyperquad::HyperquadSpec;

use super::TheoremError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum C0Status {
    Holds,
    Fails,
    /// An intermediate denominator of the bracket vanishes.
    Undefined,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    /// `(δ_i, ν_i)` for every index the recursion reached.
    pub c1_trace: Vec<(FieldElem, FieldElem)>,
    pub c1: bool,
    pub c2: bool,
    pub c3: bool,
    /// Generalized (C0), for specs in `E_0` only.
    pub c0: Option<C0Status>,
    /// `I* = {i : ν_i != μ_i^r}`, 1-based; empty unless (C1) holds.
    pub i_star: Vec<usize>,
}

impl ConditionReport {
    /// (C1) ∧ (C2) ∧ (C3).
    pub fn all(&self) -> bool {
        self.c1 && self.c2 && self.c3
    }

    pub fn delta(&self, i: usize) -> FieldElem {
        self.c1_trace[i - 1].0
    }

    pub fn nu(&self, i: usize) -> FieldElem {
        self.c1_trace[i - 1].1
    }

    pub fn summary(&self) -> ConditionSummary {
        ConditionSummary { c1: self.c1, c2: self.c2, c3: self.c3, c0: self.c0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionSummary {
    pub c1: bool,
    pub c2: bool,
    pub c3: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c0: Option<C0Status>,
}

/// Runs the (C1) recursion from `δ_1 = a λ_1^r + ε_2`, `ν_1 = 0`:
/// `D_i = a^{r-2} δ_i^2 + (ν_i - μ_i^r)^2`, `δ_{i+1} = a λ_{i+1}^r - δ_i/D_i`,
/// `ν_{i+1} = (ν_i - μ_i^r)/D_i`; then (C2) `δ_l = -a (ε_1/ε_2)^r` and
/// (C3) `μ_l^r = ν_l`.
pub fn check_conditions(spec: &HyperquadSpec) -> Result<ConditionReport, TheoremError> {
    spec.validate()?;
    if spec.pq_override.is_some() {
        return Err(TheoremError::Override);
    }
    let f = spec.ctx.as_ref();
    let (a, t, l) = (spec.a, spec.t, spec.l());
    let r = spec.r() as i64;
    let ar2 = f.pow(a, r - 2)?;
    let mut trace = Vec::with_capacity(l);
    let mut delta = f.add(f.mul(a, f.frobenius(spec.lambda[0], t)), spec.eps2);
    let mut nu = f.zero();
    let mut c1 = !delta.is_zero();
    if c1 {
        trace.push((delta, nu));
    }
    for i in 1..l {
        if !c1 {
            break;
        }
        let gap = f.sub(nu, f.frobenius(spec.mu[i - 1], t));
        let d = f.add(f.mul(ar2, f.mul(delta, delta)), f.mul(gap, gap));
        let Ok(di) = f.inv(d) else {
            c1 = false;
            break;
        };
        delta = f.sub(f.mul(a, f.frobenius(spec.lambda[i], t)), f.mul(delta, di));
        nu = f.mul(gap, di);
        if delta.is_zero() {
            c1 = false;
            break;
        }
        trace.push((delta, nu));
    }
    let (mut c2, mut c3, mut i_star) = (false, false, Vec::new());
    if c1 {
        let ratio = f.frobenius(f.div(spec.eps1, spec.eps2)?, t);
        c2 = delta == f.neg(f.mul(a, ratio));
        c3 = f.frobenius(spec.mu[l - 1], t) == nu;
        i_star = (1..=l).filter(|&i| trace[i - 1].1 != f.frobenius(spec.mu[i - 1], t)).collect();
    }
    let c0 = spec.is_e0().then(|| c0_status(spec));
    Ok(ConditionReport { c1_trace: trace, c1, c2, c3, c0, i_star })
}

/// Generalized (C0): `[-a λ_1, λ_2, ..., a(l)(λ_l + ε_1/ε_2)]^r = a^{r-1} ε_2`,
/// where odd positions carry the factor `-a`.
pub fn c0_status(spec: &HyperquadSpec) -> C0Status {
    let f = spec.ctx.as_ref();
    let l = spec.l();
    let minus_a = f.neg(spec.a);
    let term = |i: usize| {
        let mut x = spec.lambda[i];
        if i == l - 1 {
            x = f.add(x, f.div(spec.eps1, spec.eps2).expect("eps2 != 0"));
        }
        if i.is_multiple_of(2) {
            f.mul(minus_a, x)
        } else {
            x
        }
    };
    let mut v = term(l - 1);
    for i in (0..l - 1).rev() {
        let Ok(vi) = f.inv(v) else { return C0Status::Undefined };
        v = f.add(term(i), vi);
    }
    let rhs = f.mul(f.pow(spec.a, spec.r() as i64 - 1).expect("a != 0"), spec.eps2);
    if f.frobenius(v, spec.t) == rhs {
        C0Status::Holds
    } else {
        C0Status::Fails
    }
}

/// The spec with the given `λ_1..λ_l`, `μ_1..μ_{l-1}`, `a`, `ε_2` whose `ε_1`
/// and `μ_l` are solved from (C2) and (C3), if (C1) holds.
pub fn conforming_spec(
    ctx: &Arc<FqContext>,
    t: u32,
    a: FieldElem,
    lambda: Vec<FieldElem>,
    mu_head: Vec<FieldElem>,
    eps2: FieldElem,
) -> Option<HyperquadSpec> {
    let f = ctx.as_ref();
    let mut mu = mu_head;
    mu.push(f.zero());
    let probe = HyperquadSpec::new(ctx, t, a, lambda, mu, f.one(), eps2).ok()?;
    let rep = check_conditions(&probe).ok()?;
    if !rep.c1 {
        return None;
    }
    let l = probe.l();
    let (delta, nu) = rep.c1_trace[l - 1];
    // (ε_1/ε_2)^r = -δ_l/a
    let ratio = f.frobenius_inv(f.neg(f.div(delta, a).ok()?), t);
    let mut spec = probe;
    spec.eps1 = f.mul(ratio, eps2);
    spec.mu[l - 1] = f.frobenius_inv(nu, t);
    Some(spec)
}
