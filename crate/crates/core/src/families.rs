//! Named specs: the `ε` family with `l = 1, a = -1`, the Mills–Robbins family and the
//! golden-mean analogue `ω = [T, T, ...]`.

use std::sync::Arc;

use crate::cf::Word;
use crate::field::{FieldElem, FqContext};
use crate::hyperquad::{HyperquadSpec, SpecError};
use crate::poly::Poly;

/// `l = 1`, `a = -1`, `λ_1 = 1`, `ε_1 = ε(ε - 1)`, `ε_2 = ε` over `F_p`, `r = p`.
pub fn intro_example(ctx: &Arc<FqContext>, eps: FieldElem) -> Result<HyperquadSpec, SpecError> {
    let f = ctx.as_ref();
    let e1 = f.mul(eps, f.sub(eps, f.one()));
    HyperquadSpec::e0(ctx, 1, f.neg(f.one()), vec![f.one()], e1, eps)
}

/// The expected expansion of [`intro_example`]:
/// `T, (ε(ε-1))^{-1} T`, then for `m >= 1` the block
/// `(ε(ε-1))^{u_m} T, (2 v_m T, -2 v_m^{-1} T)^{(p^m - 1)/2}` (the first block
/// starts at `a_2`), with `u_m = -1, v_m = ε` for odd `m` and
/// `u_m = 0, v_m = (ε - 1)^{-1}` for even `m`.
pub fn intro_pattern(ctx: &Arc<FqContext>, eps: FieldElem, n_terms: usize) -> Word {
    let f = ctx.as_ref();
    let p = f.characteristic() as usize;
    let e1 = f.mul(eps, f.sub(eps, f.one()));
    let lin = |c: FieldElem| Poly::linear(ctx, c, f.zero());
    let mut terms = vec![lin(f.one())];
    let mut m = 1u32;
    let mut pm = p;
    while terms.len() < n_terms {
        let odd = m % 2 == 1;
        let head = if odd { f.inv(e1).expect("eps != 0, 1") } else { f.one() };
        let v = if odd { eps } else { f.inv(f.sub(eps, f.one())).expect("eps != 1") };
        terms.push(lin(head));
        let two = f.from_int(2);
        let pair = [lin(f.mul(two, v)), lin(f.neg(f.mul(two, f.inv(v).expect("nonzero"))))];
        for _ in 0..(pm - 1) / 2 {
            terms.extend(pair.iter().cloned());
        }
        m += 1;
        pm *= p;
    }
    terms.truncate(n_terms);
    Word::new(ctx, terms)
}

/// `(λ_1, -λ_1(1 + 2λ_1)^{-1}, ε_1, ε_2) = (λ_1, ..., 1, 2)` in `E_0(p, 2, 4, p)`.
pub fn mills_robbins(ctx: &Arc<FqContext>, lambda1: FieldElem) -> Result<HyperquadSpec, SpecError> {
    let f = ctx.as_ref();
    let d = f.add(f.one(), f.mul(f.from_int(2), lambda1));
    let di = f.inv(d).map_err(|_| SpecError::ZeroParameter("1 + 2 lambda_1"))?;
    let l2 = f.neg(f.mul(lambda1, di));
    HyperquadSpec::e0(ctx, 1, f.from_int(4), vec![lambda1, l2], f.one(), f.from_int(2))
}

/// `ω` with `ω^r = P_4 ω - 2 Q_4`: `a = 4`, `ε_1 = 1`, `ε_2 = -2`, all `λ_i = 1`.
pub fn omega_spec(ctx: &Arc<FqContext>, t: u32, l: usize) -> Result<HyperquadSpec, SpecError> {
    let f = ctx.as_ref();
    HyperquadSpec::e0(ctx, t, f.from_int(4), vec![f.one(); l], f.one(), f.from_int(-2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperquad::expand_alpha;

    #[test]
    fn pattern_p3_eps2() {
        let f = FqContext::prime(3).unwrap();
        let w = intro_pattern(&f, f.from_int(2), 4);
        assert_eq!(w.to_string(), "[T, 2T, T, 2T]");
    }

    #[test]
    fn pattern_block_lengths() {
        let f = FqContext::prime(5).unwrap();
        // 1 + 5 + 25 quotients cover the m = 1, 2 blocks
        let w = intro_pattern(&f, f.from_int(3), 31);
        let o = expand_alpha(&intro_example(&f, f.from_int(3)).unwrap(), 31).unwrap();
        assert_eq!(w, o.word);
    }

    #[test]
    fn mills_robbins_rejects_half() {
        let f = FqContext::prime(5).unwrap();
        let half = f.inv(f.from_int(-2)).unwrap();
        assert!(mills_robbins(&f, half).is_err());
        assert!(mills_robbins(&f, f.one()).is_ok());
    }

    #[test]
    fn omega_is_all_t() {
        let f = FqContext::prime(5).unwrap();
        let o = expand_alpha(&omega_spec(&f, 1, 1).unwrap(), 40).unwrap();
        assert!(o.word.terms().iter().all(|a| *a == Poly::t(&f)));
    }
}
