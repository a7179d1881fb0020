//! The hyperquadratic generator and its series oracle.
//!
//! A [`HyperquadSpec`] fixes `α = [a_1, ..., a_l, α_{l+1}]` with
//! `a_i = λ_i T + μ_i` and `α^r = P α_{l+1} + Q`, where by default
//! `(P, Q) = (ε_1 P_a, ε_2 Q_a)`. [`expand_alpha`] computes `α` as a Laurent
//! series by iterating that defining relation and expands it into certified
//! partial quotients. Nothing here depends on the closed-form description in
//! [`crate::theorem`], which is what makes it usable as an oracle.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cf::{convergents, CfError, Word};
use crate::field::{quadratic_ext, ContextDesc, Embedding, FieldElem, FieldError, FqContext};
use crate::laurent::{cf_expand_until, ExpandStop, Laurent, LaurentError};
use crate::poly::{pq_pair, Poly, PolyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("r = p^t needs t >= 1")]
    DegenerateR,
    #[error("the prefix must have at least one term")]
    EmptyPrefix,
    #[error("lambda and mu have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("declared l = {declared} but the prefix has {actual} terms")]
    WrongL { declared: usize, actual: usize },
    #[error("lambda_{0} must be nonzero")]
    ZeroLambda(usize),
    #[error("{0} must be nonzero")]
    ZeroParameter(&'static str),
    #[error("override needs deg Q < deg P < r")]
    BadOverride,
    #[error("value for {0} is not an element of the field")]
    BadElement(String),
    #[error("field: {0}")]
    Field(#[from] FieldError),
    #[error("polynomial: {0}")]
    Poly(#[from] PolyError),
    #[error("spec file: {0}")]
    Json(String),
    #[error("the spec must have all mu_i = 0 and no (P, Q) override")]
    NotE0,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HyperquadError {
    #[error("invalid spec: {0}")]
    Spec(#[from] SpecError),
    #[error("fixed-point precision stalled at T^{0}")]
    Stall(i64),
    #[error("fixed-point iteration did not reach T^{target} within {rounds} rounds")]
    IterationBudget { target: i64, rounds: usize },
    #[error("series: {0}")]
    Laurent(#[from] LaurentError),
    #[error("continued fraction: {0}")]
    Cf(#[from] CfError),
    #[error("residual of the equation has valuation {valuation} (known through {known_through})")]
    NotARoot { valuation: i64, known_through: i64 },
    #[error("root has |alpha| < |T|")]
    SmallRoot,
}

#[derive(Clone, Debug)]
pub struct HyperquadSpec {
    pub ctx: Arc<FqContext>,
    pub t: u32,
    pub a: FieldElem,
    pub lambda: Vec<FieldElem>,
    pub mu: Vec<FieldElem>,
    pub eps1: FieldElem,
    pub eps2: FieldElem,
    pub pq_override: Option<(Poly, Poly)>,
}

impl HyperquadSpec {
    /// A spec of the family `E(r, l, a, q)`.
    pub fn new(
        ctx: &Arc<FqContext>,
        t: u32,
        a: FieldElem,
        lambda: Vec<FieldElem>,
        mu: Vec<FieldElem>,
        eps1: FieldElem,
        eps2: FieldElem,
    ) -> Result<Self, SpecError> {
        let spec = HyperquadSpec { ctx: ctx.clone(), t, a, lambda, mu, eps1, eps2, pq_override: None };
        spec.validate()?;
        Ok(spec)
    }

    /// A member of `E_0`: all `μ_i = 0`.
    pub fn e0(
        ctx: &Arc<FqContext>,
        t: u32,
        a: FieldElem,
        lambda: Vec<FieldElem>,
        eps1: FieldElem,
        eps2: FieldElem,
    ) -> Result<Self, SpecError> {
        let mu = vec![ctx.zero(); lambda.len()];
        Self::new(ctx, t, a, lambda, mu, eps1, eps2)
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        if self.t == 0 {
            return Err(SpecError::DegenerateR);
        }
        if self.lambda.is_empty() {
            return Err(SpecError::EmptyPrefix);
        }
        if self.lambda.len() != self.mu.len() {
            return Err(SpecError::LengthMismatch(self.lambda.len(), self.mu.len()));
        }
        if let Some(i) = self.lambda.iter().position(|x| x.is_zero()) {
            return Err(SpecError::ZeroLambda(i + 1));
        }
        for (name, x) in [("a", self.a), ("eps1", self.eps1), ("eps2", self.eps2)] {
            if x.is_zero() {
                return Err(SpecError::ZeroParameter(name));
            }
        }
        let all = self.lambda.iter().chain(&self.mu).chain([&self.a, &self.eps1, &self.eps2]);
        if let Some(x) = all.into_iter().find(|x| !self.ctx.owns(**x)) {
            return Err(SpecError::BadElement(format!("{x:?}")));
        }
        if let Some((p, q)) = &self.pq_override {
            let r = self.r() as i64;
            if p.is_zero() || !(q.deg() < p.deg() && p.deg() < r) {
                return Err(SpecError::BadOverride);
            }
        }
        Ok(())
    }

    pub fn r(&self) -> u64 {
        (self.ctx.characteristic() as u64).pow(self.t)
    }

    /// `k = (r - 1)/2`.
    pub fn k(&self) -> u64 {
        (self.r() - 1) / 2
    }

    pub fn l(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_e0(&self) -> bool {
        self.pq_override.is_none() && self.mu.iter().all(|m| m.is_zero())
    }

    pub fn prefix(&self) -> Word {
        Word::linear(&self.ctx, &self.lambda, &self.mu)
    }

    /// The pair `(P, Q)` of the defining relation.
    pub fn pq(&self) -> (Poly, Poly) {
        match &self.pq_override {
            Some(pq) => pq.clone(),
            None => {
                let (p, q) = pq_pair(&self.ctx, self.a, self.r()).expect("validated spec");
                (p.scale(self.eps1), q.scale(self.eps2))
            }
        }
    }

    pub fn to_file(&self) -> SpecFile {
        let f = &self.ctx;
        let el = |x: FieldElem| ElemRepr::Coords(f.coords(x).into_iter().map(u64::from).collect());
        let poly = |p: &Poly| p.coeffs().iter().map(|&c| el(c)).collect();
        SpecFile {
            p: f.characteristic(),
            s: f.degree(),
            t: self.t,
            l: self.l(),
            a: el(self.a),
            lambda: self.lambda.iter().map(|&x| el(x)).collect(),
            mu: self.mu.iter().map(|&x| el(x)).collect(),
            eps1: el(self.eps1),
            eps2: el(self.eps2),
            pq_override: self.pq_override.as_ref().map(|(p, q)| PqOverride { p: poly(p), q: poly(q) }),
            modulus: (f.degree() > 1).then(|| f.modulus().to_vec()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        let file: SpecFile = serde_json::from_str(text).map_err(|e| SpecError::Json(e.to_string()))?;
        file.into_spec()
    }
}

/// A field element in a spec file: an integer (image of `Z` in the prime
/// field) or a coordinate array, least significant basis power first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElemRepr {
    Int(i64),
    Coords(Vec<u64>),
}

impl ElemRepr {
    fn resolve(&self, ctx: &FqContext, name: &str) -> Result<FieldElem, SpecError> {
        match self {
            ElemRepr::Int(n) => Ok(ctx.from_int(*n)),
            ElemRepr::Coords(c) => ctx.from_coords(c).map_err(|_| SpecError::BadElement(name.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PqOverride {
    #[serde(rename = "P")]
    pub p: Vec<ElemRepr>,
    #[serde(rename = "Q")]
    pub q: Vec<ElemRepr>,
}

/// JSON form of a spec.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecFile {
    pub p: u32,
    pub s: usize,
    pub t: u32,
    pub l: usize,
    pub a: ElemRepr,
    pub lambda: Vec<ElemRepr>,
    pub mu: Vec<ElemRepr>,
    pub eps1: ElemRepr,
    pub eps2: ElemRepr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pq_override: Option<PqOverride>,
    /// Defining modulus of `F_q`, ascending; the default modulus when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

impl SpecFile {
    pub fn into_spec(self) -> Result<HyperquadSpec, SpecError> {
        let ctx = match &self.modulus {
            Some(m) => FqContext::from_desc(&ContextDesc { p: self.p, s: self.s, modulus: m.clone() })?,
            None => FqContext::new(self.p as u64, self.s, None)?,
        };
        let f = &ctx;
        let many = |v: &[ElemRepr], name: &str| -> Result<Vec<FieldElem>, SpecError> {
            v.iter().map(|x| x.resolve(f, name)).collect()
        };
        let lambda = many(&self.lambda, "lambda")?;
        let mu = many(&self.mu, "mu")?;
        if lambda.len() != self.l {
            return Err(SpecError::WrongL { declared: self.l, actual: lambda.len() });
        }
        let pq_override = match &self.pq_override {
            None => None,
            Some(o) => Some((Poly::new(f, many(&o.p, "P")?), Poly::new(f, many(&o.q, "Q")?))),
        };
        let spec = HyperquadSpec {
            ctx: ctx.clone(),
            t: self.t,
            a: self.a.resolve(f, "a")?,
            lambda,
            mu,
            eps1: self.eps1.resolve(f, "eps1")?,
            eps2: self.eps2.resolve(f, "eps2")?,
            pq_override,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Coefficients `(A, B, C, D)` of `A X^{r+1} + B X^r + C X + D = 0`:
/// `(y_l, -x_l, P y_{l-1} - Q y_l, Q x_l - P x_{l-1})`.
pub fn build_equation(spec: &HyperquadSpec) -> [Poly; 4] {
    let conv = convergents(&spec.prefix());
    let l = spec.l();
    let (xl, yl) = &conv[l];
    let (xm, ym) = &conv[l - 1];
    let (p, q) = spec.pq();
    [yl.clone(), -xl, &(&p * ym) - &(&q * yl), &(&q * xl) - &(&p * xm)]
}

#[derive(Clone, Copy, Debug)]
pub struct ExpandOptions {
    pub n_terms: usize,
    /// Stop right after the first quotient whose degree is not 1.
    pub stop_at_imperfect: bool,
    /// Initial working precision is `T^{-(width_factor * n_terms + 16)}`.
    pub width_factor: usize,
    /// Give up growing the window beyond this many coefficients.
    pub max_width: usize,
}

impl ExpandOptions {
    pub fn new(n_terms: usize) -> Self {
        ExpandOptions { n_terms, stop_at_imperfect: false, width_factor: 4, max_width: 1 << 16 }
    }

    pub fn stop_at_imperfect(mut self) -> Self {
        self.stop_at_imperfect = true;
        self
    }
}

#[derive(Clone, Debug)]
pub struct ExpansionReport {
    /// Certified partial quotients.
    pub word: Word,
    pub certified: usize,
    /// Length of the longest prefix of quotients that all have degree 1.
    pub perfect_through: usize,
    /// `|residual of (**)| <= |T|^residual_valuation`.
    pub residual_valuation: i64,
    pub stop: ExpandStop,
    pub series: Laurent,
}

impl ExpansionReport {
    /// All certified quotients have degree 1.
    pub fn is_perfect(&self) -> bool {
        self.perfect_through == self.certified
    }

    pub fn to_record(&self) -> ExpansionRecord {
        ExpansionRecord {
            quotients: self.word.to_coords(),
            rendered: self.word.terms().iter().map(|a| a.to_string()).collect(),
            certified: self.certified,
            perfect_through: self.perfect_through,
            residual_valuation: self.residual_valuation,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionRecord {
    pub quotients: Vec<Vec<Vec<u32>>>,
    pub rendered: Vec<String>,
    pub certified: usize,
    pub perfect_through: usize,
    pub residual_valuation: i64,
}

/// `α` to precision `T^{target}` (or finer), by iterating
/// `α_{l+1} = (α^r - Q)/P`, `α = [a_1, ..., a_l, α_{l+1}]`.
pub fn alpha_series(spec: &HyperquadSpec, target: i64) -> Result<Laurent, HyperquadError> {
    spec.validate()?;
    let prefix = spec.prefix();
    let l = prefix.len();
    let conv = convergents(&prefix);
    let (xl, yl) = &conv[l];
    let (_, ym) = &conv[l - 1];
    let (p, q) = spec.pq();
    let r = spec.r() as i64;
    let dy = yl.deg();
    // |α_{l+1}| = |T|^e since |α^r| = |T|^r dominates Q
    let e = r * prefix.terms()[0].deg() - p.deg();
    let mut alpha = Laurent::from_rational(xl, yl, -(2 * dy + e))?;
    let rounds = {
        let mut n = 0;
        let mut reach = 1i64;
        while reach < target.unsigned_abs() as i64 {
            reach = reach.saturating_mul(r);
            n += 1;
        }
        n + 2
    };
    // precision needed in α^r for the new α to be known through `target`
    let pow_target = target + 2 * e + 2 * dy + p.deg();
    for _ in 0..rounds {
        if alpha.known_through() <= target {
            return Ok(alpha.truncate(target));
        }
        let before = alpha.known_through();
        let ar = alpha.pow_r(spec.t).truncate(pow_target);
        let z = ar.sub(&Laurent::from_poly(&q, ar.known_through())).div_poly(&p)?;
        let d = z.mul_poly(yl).add_poly(ym);
        let mut tail = d.inv()?.div_poly(yl)?;
        if l.is_multiple_of(2) {
            tail = tail.neg();
        }
        let head = Laurent::from_rational(xl, yl, tail.known_through())?;
        alpha = head.add(&tail).truncate(target);
        if alpha.known_through() >= before {
            return Err(HyperquadError::Stall(alpha.known_through()));
        }
    }
    if alpha.known_through() <= target {
        return Ok(alpha);
    }
    Err(HyperquadError::IterationBudget { target, rounds })
}

/// Oracle expansion with default options.
pub fn expand_alpha(spec: &HyperquadSpec, n_terms: usize) -> Result<ExpansionReport, HyperquadError> {
    expand_alpha_with(spec, ExpandOptions::new(n_terms))
}

/// Oracle expansion. The window grows geometrically while certification falls
/// short; the report may still hold fewer than `n_terms` quotients if
/// `max_width` is reached (`stop == Precision`).
pub fn expand_alpha_with(spec: &HyperquadSpec, opts: ExpandOptions) -> Result<ExpansionReport, HyperquadError> {
    let mut width = opts.width_factor.max(1) * opts.n_terms + 16;
    loop {
        let alpha = alpha_series(spec, -(width as i64))?;
        let exp = cf_expand_until(&alpha, opts.n_terms, |_, a| opts.stop_at_imperfect && a.deg() != 1);
        let perfect_through = exp.word.terms().iter().take_while(|a| a.deg() == 1).count();
        if exp.stop != ExpandStop::Precision || width >= opts.max_width {
            let residual_valuation = residual(spec, &alpha)?;
            return Ok(ExpansionReport {
                certified: exp.certified,
                perfect_through,
                residual_valuation,
                stop: exp.stop,
                word: exp.word,
                series: alpha,
            });
        }
        width = (width * 2).min(opts.max_width);
    }
}

fn residual(spec: &HyperquadSpec, alpha: &Laurent) -> Result<i64, HyperquadError> {
    let [a, b, c, d] = build_equation(spec);
    let ar = alpha.pow_r(spec.t);
    let lhs = ar.mul(alpha).mul_poly(&a).add(&ar.mul_poly(&b)).add(&alpha.mul_poly(&c)).add_poly(&d);
    if !lhs.is_known_zero() {
        return Err(HyperquadError::NotARoot { valuation: lhs.top(), known_through: lhs.known_through() });
    }
    Ok(lhs.known_through())
}

/// Substitutes the certified series into `(**)`. Returns the bound
/// `|residual| <= |T|^v`; fails if the residual is visibly nonzero or `|α| < |T|`.
pub fn check_root(spec: &HyperquadSpec, report: &ExpansionReport) -> Result<i64, HyperquadError> {
    if report.series.top() < 1 {
        return Err(HyperquadError::SmallRoot);
    }
    residual(spec, &report.series)
}

/// Shortest period `(start, length)` of a word prefix, looking for a period
/// that repeats at least three times after `start`.
pub fn period_candidate(word: &Word) -> Option<(usize, usize)> {
    let t = word.terms();
    let n = t.len();
    for len in 1..=n / 4 {
        for start in 0..=(n / 4) {
            if start + 3 * len > n {
                break;
            }
            if (start..n - len).all(|i| t[i] == t[i + len]) {
                return Some((start, len));
            }
        }
    }
    None
}

/// The substitution `β(T) = v α(vT)` with `v^2 = -a`.
#[derive(Clone, Debug)]
pub struct BetaTransform {
    /// The spec of `β`, over the same field with `a = -1`.
    pub spec: HyperquadSpec,
    /// `v`, in `F_q` when `-a` is a square there, else in `F_{q^2}`.
    pub v: FieldElem,
    /// The field `v` lives in, with the embedding of `F_q` into it.
    pub embedding: Embedding,
}

impl BetaTransform {
    /// Expected `b_n(T) = v^{(-1)^{n+1}} a_n(vT)` for 1-based `n`.
    pub fn map_quotient(&self, n: usize, a_n: &Poly) -> Poly {
        let big = self.embedding.target();
        let factor = if n % 2 == 1 { self.v } else { big.inv(self.v).expect("nonzero") };
        a_n.embed(&self.embedding).scale_arg(self.v).scale(factor)
    }

    /// Number of leading terms for which the two words correspond.
    pub fn agreement(&self, alpha: &Word, beta: &Word) -> usize {
        alpha
            .terms()
            .iter()
            .zip(beta.terms())
            .enumerate()
            .take_while(|(i, (a, b))| self.map_quotient(i + 1, a) == b.embed(&self.embedding))
            .count()
    }
}

/// Sends a member of `E_0(r, l, a, q)` to the corresponding member of
/// `E_0(r, l, -1, q)`.
pub fn beta_transform(spec: &HyperquadSpec) -> Result<BetaTransform, SpecError> {
    spec.validate()?;
    if !spec.is_e0() {
        return Err(SpecError::NotE0);
    }
    let f = &spec.ctx;
    let a = spec.a;
    let minus_a = f.neg(a);
    let (v, embedding) = match f.sqrt(minus_a) {
        Some(v) => (v, Embedding::identity(f)),
        None => {
            let (big, emb) = quadratic_ext(f)?;
            let v = big.sqrt(emb.apply(minus_a)).expect("squares exist in the extension");
            (v, emb)
        }
    };
    let l = spec.l();
    let lambda = spec.lambda.iter().enumerate().map(|(i, &x)| if i % 2 == 0 { f.mul(minus_a, x) } else { x }).collect();
    let a_l = if l.is_multiple_of(2) { f.one() } else { minus_a };
    let ar1 = f.pow(a, spec.r() as i64 - 1).expect("nonzero");
    let out =
        HyperquadSpec::e0(f, spec.t, f.neg(f.one()), lambda, f.mul(f.mul(ar1, a_l), spec.eps1), f.mul(ar1, spec.eps2))?;
    Ok(BetaTransform { spec: out, v, embedding })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn intro(p: u64, eps: i64) -> HyperquadSpec {
        let f = FqContext::prime(p).unwrap();
        let e = f.from_int(eps);
        let e1 = f.mul(e, f.sub(e, f.one()));
        HyperquadSpec::e0(&f, 1, f.from_int(-1), vec![f.one()], e1, e).unwrap()
    }

    #[test]
    fn validation_errors() {
        let f = FqContext::prime(3).unwrap();
        let one = f.one();
        assert_eq!(HyperquadSpec::e0(&f, 1, one, vec![f.zero()], one, one).unwrap_err(), SpecError::ZeroLambda(1));
        assert_eq!(HyperquadSpec::e0(&f, 0, one, vec![one], one, one).unwrap_err(), SpecError::DegenerateR);
        assert_eq!(
            HyperquadSpec::e0(&f, 1, one, vec![one], f.zero(), one).unwrap_err(),
            SpecError::ZeroParameter("eps1")
        );
    }

    #[test]
    fn intro_equation_coefficients() {
        // X^4 - T X^3 + εT((T^2-1) - T^2) X + ε(T^4 - (T^2-1)(T^2+ε-1)) at p = 3, ε = 2
        let spec = intro(3, 2);
        let f = &spec.ctx;
        let [a, b, c, d] = build_equation(&spec);
        let eps = Poly::constant(f, f.from_int(2));
        let t = Poly::t(f);
        let t2m1 = Poly::from_ints(f, &[-1, 0, 1]);
        let t2 = &t * &t;
        assert_eq!(a, Poly::one(f));
        assert_eq!(b, -&t);
        assert_eq!(c, &(&eps * &t) * &(&t2m1 - &t2));
        let tail = Poly::from_ints(f, &[1, 0, 1]); // T^2 + ε - 1
        assert_eq!(d, &eps * &(&(&t2 * &t2) - &(&t2m1 * &tail)));
    }

    #[test]
    fn intro_first_quotients() {
        let spec = intro(3, 2);
        let rep = expand_alpha(&spec, 4).unwrap();
        assert_eq!(rep.word.to_string(), "[T, 2T, T, 2T]");
        assert!(rep.is_perfect());
        assert!(check_root(&spec, &rep).unwrap() < -10);
        assert_eq!(rep.series.top(), 1);
    }

    #[test]
    fn perturbed_prefix_is_not_a_root() {
        let spec = intro(5, 2);
        let rep = expand_alpha(&spec, 20).unwrap();
        let mut other = spec.clone();
        other.lambda[0] = spec.ctx.from_int(2);
        assert!(matches!(check_root(&other, &rep), Err(HyperquadError::NotARoot { .. })));
    }

    #[test]
    fn doubling_precision_keeps_prefix() {
        let spec = intro(5, 3);
        let a = expand_alpha(&spec, 60).unwrap();
        let mut opts = ExpandOptions::new(60);
        opts.width_factor = 8;
        let b = expand_alpha_with(&spec, opts).unwrap();
        assert_eq!(a.word, b.word);
    }

    #[test]
    fn json_round_trip() {
        let spec = intro(7, 3);
        let back = HyperquadSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back.to_json(), spec.to_json());
        let text = r#"{"p":3,"s":1,"t":1,"l":1,"a":2,"lambda":[1],"mu":[0],"eps1":2,"eps2":2}"#;
        let s = HyperquadSpec::from_json(text).unwrap();
        assert_eq!(s.eps1, s.ctx.from_int(2));
        let bad = r#"{"p":3,"s":1,"t":1,"l":1,"a":2,"lambda":[0],"mu":[0],"eps1":2,"eps2":2}"#;
        assert_eq!(HyperquadSpec::from_json(bad).unwrap_err(), SpecError::ZeroLambda(1));
    }

    #[test]
    fn beta_of_a_minus_one_is_identity() {
        let spec = intro(5, 3);
        let bt = beta_transform(&spec).unwrap();
        assert_eq!(bt.spec.lambda, spec.lambda);
        assert_eq!(bt.spec.eps1, spec.eps1);
        assert_eq!(bt.spec.eps2, spec.eps2);
    }

    #[test]
    fn period_detection() {
        let f = FqContext::prime(3).unwrap();
        let t = Poly::t(&f);
        let w = Word::new(&f, vec![t.clone(); 12]);
        assert_eq!(period_candidate(&w), Some((0, 1)));
    }
}
