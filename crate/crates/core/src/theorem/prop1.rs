//! The word `W(a, x)` with `[W(a, x)] = P_a/(Q_a + x)`.

use std::sync::Arc;

use crate::cf::{cf_of_rational, continuant, Word};
use crate::field::{FieldElem, FqContext};
use crate::laurent::Laurent;
use crate::poly::{gcd, pq_pair, Poly};

use super::TheoremError;

/// `r = p^t`.
pub(crate) fn r_of(ctx: &FqContext, t: u32) -> u64 {
    (ctx.characteristic() as u64).pow(t)
}

/// `ω = 1 + a^{2-r} x^2`.
pub fn omega(ctx: &FqContext, a: FieldElem, x: FieldElem, r: u64) -> FieldElem {
    let ar = ctx.pow(a, 2 - r as i64).expect("a != 0");
    ctx.add(ctx.one(), ctx.mul(ar, ctx.mul(x, x)))
}

/// `w^{(-1)^e}`.
pub(crate) fn alt_pow(ctx: &FqContext, w: FieldElem, e: u64) -> FieldElem {
    if e.is_multiple_of(2) {
        w
    } else {
        ctx.inv(w).expect("nonzero")
    }
}

/// `ω(k)`: 1 for even `k`, `ω^{-1}` for odd `k`.
pub(crate) fn omega_k(ctx: &FqContext, w: FieldElem, k: u64) -> FieldElem {
    if k.is_multiple_of(2) {
        ctx.one()
    } else {
        ctx.inv(w).expect("nonzero")
    }
}

#[derive(Clone, Debug)]
pub struct Prop1Word {
    pub word: Word,
    pub omega: FieldElem,
    pub k: u64,
    /// Predicted `<W>`, `<W'>`, `<W''>`.
    pub closed_forms: [Poly; 3],
}

/// `W(a, x) = v_1, v_2/a, ..., v_{2k-1}, v_{2k}/a` and the closed forms of
/// its continuants.
pub fn prop1_word(ctx: &Arc<FqContext>, a: FieldElem, x: FieldElem, t: u32) -> Result<Prop1Word, TheoremError> {
    let f = ctx.as_ref();
    if a.is_zero() {
        return Err(TheoremError::Spec(crate::hyperquad::SpecError::ZeroParameter("a")));
    }
    let r = r_of(f, t);
    let k = (r - 1) / 2;
    let w = omega(f, a, x, r);
    if w.is_zero() {
        return Err(TheoremError::NotCoprime);
    }
    let wi = f.inv(w)?;
    let ai = f.inv(a)?;
    let two = f.from_int(2);
    let m2 = f.neg(two);
    let c = f.mul(f.pow(f.neg(a), 1 - k as i64)?, x);
    let mut terms = Vec::with_capacity(2 * k as usize);
    for i in 1..=2 * k {
        let v = if i < k {
            Poly::linear(ctx, m2, f.zero())
        } else if i == k {
            Poly::linear(ctx, m2, f.neg(c))
        } else if i == k + 1 {
            Poly::linear(ctx, f.mul(wi, m2), f.mul(wi, c))
        } else {
            let j = i - k - 1;
            Poly::linear(ctx, f.neg(f.mul(alt_pow(f, w, j + 1), two)), f.zero())
        };
        terms.push(if i % 2 == 0 { v.scale(ai) } else { v });
    }
    let (p, q) = pq_pair(ctx, a, r).map_err(|e| TheoremError::Spec(e.into()))?;
    let wk = omega_k(f, w, k);
    let ak = f.pow(a, -(k as i64))?;
    let xc = Poly::constant(ctx, x);
    let c0 = p.scale(f.mul(wk, ak));
    let c1 = (&q + &xc).scale(f.mul(wk, ak));
    let c2 = (&q - &xc).scale(f.mul(f.mul(wk, alt_pow(f, w, k + 1)), f.pow(a, 1 - k as i64)?));
    Ok(Prop1Word { word: Word::new(ctx, terms), omega: w, k, closed_forms: [c0, c1, c2] })
}

/// Outcome of checking every claim about one pair `(a, x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Prop1Check {
    pub omega_zero: bool,
    /// `gcd(P_a, Q_a + x) = 1` exactly when `ω != 0`.
    pub coprime_ok: bool,
    pub w_ok: bool,
    pub w1_ok: bool,
    pub w2_ok: bool,
    /// `W` is the continued-fraction expansion of `P_a/(Q_a + x)`.
    pub value_ok: bool,
}

impl Prop1Check {
    pub fn holds(&self) -> bool {
        self.coprime_ok && self.w_ok && self.w1_ok && self.w2_ok && self.value_ok
    }
}

pub fn prop1_check(ctx: &Arc<FqContext>, a: FieldElem, x: FieldElem, t: u32) -> Result<Prop1Check, TheoremError> {
    let r = r_of(ctx, t);
    let (p, q) = pq_pair(ctx, a, r).map_err(|e| TheoremError::Spec(e.into()))?;
    let qx = &q + &Poly::constant(ctx, x);
    let coprime = gcd(&p, &qx).deg() == 0;
    match prop1_word(ctx, a, x, t) {
        Err(TheoremError::NotCoprime) => Ok(Prop1Check {
            omega_zero: true,
            coprime_ok: !coprime,
            w_ok: true,
            w1_ok: true,
            w2_ok: true,
            value_ok: true,
        }),
        Err(e) => Err(e),
        Ok(pw) => {
            let w = &pw.word;
            let [c0, c1, c2] = &pw.closed_forms;
            Ok(Prop1Check {
                omega_zero: false,
                coprime_ok: coprime,
                w_ok: continuant(w) == *c0,
                w1_ok: continuant(&w.drop_first()) == *c1,
                w2_ok: continuant(&w.drop_last()) == *c2,
                value_ok: cf_of_rational(&p, &qx).map(|e| e == *w).unwrap_or(false),
            })
        }
    }
}

/// `Y` with `[b_0, y·W(a, x)] + X = [b_0, y·W(a, x), Y]`:
/// `Y = ω^{(-1)^{k+1}} (ω a^{r-1} P_a^{-2} X^{-1} - y a (Q_a - x) P_a^{-1})`.
pub fn lemma1_extend(
    ctx: &Arc<FqContext>,
    y: FieldElem,
    a: FieldElem,
    x: FieldElem,
    t: u32,
    big_x: &Laurent,
) -> Result<Laurent, TheoremError> {
    let f = ctx.as_ref();
    let r = r_of(f, t);
    let k = (r - 1) / 2;
    let w = omega(f, a, x, r);
    if w.is_zero() {
        return Err(TheoremError::NotCoprime);
    }
    let (p, q) = pq_pair(ctx, a, r).map_err(|e| TheoremError::Spec(e.into()))?;
    let first = big_x.inv()?.div_poly(&(&p * &p))?.scale(f.mul(w, f.pow(a, r as i64 - 1)?));
    let num = (&q - &Poly::constant(ctx, x)).scale(f.mul(y, a));
    let second = Laurent::from_rational(&num, &p, first.known_through())?;
    Ok(first.sub(&second).scale(alt_pow(f, w, k + 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::{cf_value, RatFunc};
    use crate::laurent::cf_with_tail_series;

    #[test]
    fn x_zero_is_the_plain_word() {
        let f = FqContext::prime(5).unwrap();
        let a = f.from_int(3);
        let pw = prop1_word(&f, a, f.zero(), 1).unwrap();
        let ai = f.inv(a).unwrap();
        let m2 = f.from_int(-2);
        for (i, term) in pw.word.terms().iter().enumerate() {
            let lam = if i % 2 == 0 { m2 } else { f.mul(m2, ai) };
            assert_eq!(*term, Poly::linear(&f, lam, f.zero()));
        }
        assert_eq!(pw.word.len(), 4);
    }

    #[test]
    fn r3_a1_x1_over_f3() {
        let f = FqContext::prime(3).unwrap();
        let pw = prop1_word(&f, f.one(), f.one(), 1).unwrap();
        assert_eq!(pw.omega, f.from_int(2));
        assert_eq!(pw.word.terms()[0], Poly::from_ints(&f, &[2, 1]));
        assert_eq!(pw.word.terms()[1], Poly::from_ints(&f, &[2, 2]));
        let v = cf_value(&pw.word).unwrap();
        let expect = RatFunc::new(Poly::from_ints(&f, &[1, 0, 1]), Poly::from_ints(&f, &[1, 1])).unwrap();
        assert_eq!(v, expect);
    }

    #[test]
    fn pseudo_symmetry() {
        for (p, t) in [(3, 1), (5, 1), (3, 2)] {
            let f = FqContext::prime(p).unwrap();
            for a in f.nonzero_elements() {
                for x in f.elements() {
                    let Ok(pw) = prop1_word(&f, a, x, t) else { continue };
                    let mirror = prop1_word(&f, a, f.neg(x), t).unwrap();
                    let y = f.mul(a, alt_pow(&f, pw.omega, pw.k + 1));
                    assert_eq!(pw.word, mirror.word.reverse().twist(y).unwrap());
                }
            }
        }
    }

    #[test]
    fn exhaustive_small() {
        let f = FqContext::prime(3).unwrap();
        let mut pairs = 0;
        for a in f.nonzero_elements() {
            for x in f.elements() {
                let c = prop1_check(&f, a, x, 1).unwrap();
                assert!(c.holds(), "{c:?}");
                pairs += 1;
            }
        }
        assert_eq!(pairs, 6);
    }

    #[test]
    fn lemma1_identity() {
        let f = FqContext::prime(3).unwrap();
        let b0 = Poly::t(&f);
        let (a, x, y) = (f.one(), f.zero(), f.one());
        let big_x = Laurent::monomial(&f, f.one(), -4, -60);
        let big_y = lemma1_extend(&f, y, a, x, 1, &big_x).unwrap();
        let pw = prop1_word(&f, a, x, 1).unwrap();
        let word = Word::new(&f, vec![b0]).concat(&pw.word.twist(y).unwrap());
        let rhs = cf_with_tail_series(&word, &big_y).unwrap();
        let v = cf_value(&word).unwrap();
        let lhs = Laurent::from_rational(v.num(), v.den(), -60).unwrap().add(&big_x);
        assert!(lhs.agrees_with(&rhs));
        assert!(rhs.known_through() <= -20);
        // the X^{-1} term dominates: |Y| = |P_a^{-2} X^{-1}|
        assert_eq!(big_y.top(), 4 - 2 * 2);
    }

    #[test]
    fn lemma1_matches_lemma0() {
        let f = FqContext::prime(5).unwrap();
        let (a, x, y) = (f.from_int(2), f.from_int(3), f.from_int(4));
        let pw = prop1_word(&f, a, x, 1).unwrap();
        let word = Word::new(&f, vec![Poly::from_ints(&f, &[1, 2])]).concat(&pw.word.twist(y).unwrap());
        let big_x = Laurent::from_rational(&Poly::one(&f), &Poly::from_ints(&f, &[1, 0, 0, 0, 0, 1]), -80).unwrap();
        let via1 = lemma1_extend(&f, y, a, x, 1, &big_x).unwrap();
        let via0 = crate::laurent::lemma0_extend_series(&word, &big_x).unwrap();
        assert!(via1.agrees_with(&via0));
    }
}
