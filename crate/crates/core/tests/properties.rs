//! Randomized invariants for the field, polynomial, continuant, series and
//! recursion layers.

use proptest::prelude::*;

use hyperquad::cf::{cf_of_rational, convergents, eval_cf, RatFunc};
use hyperquad::hyperquad::{alpha_series, check_root, expand_alpha_with, ExpandOptions, HyperquadSpec};
use hyperquad::laurent::{cf_expand, Laurent};
use hyperquad::poly::{pq_pair, Poly};
use hyperquad::theorem::{classify_index, conforming_spec, forward_sets, iterate_prop2, IndexMaps};

mod common;

use common::*;

// field and polynomial layer

proptest! {
    #![proptest_config(config())]

    #[test]
    fn fermat_and_pow_reduction(w in any::<u8>(), s in any::<u64>(), e in -1000i64..1000) {
        let f = field(w);
        let x = nz(&f, s);
        let q1 = f.order() as i64 - 1;
        prop_assert_eq!(f.pow(x, q1).unwrap(), f.one());
        prop_assert_eq!(f.pow(x, e).unwrap(), f.pow(x, e.rem_euclid(q1)).unwrap());
    }

    #[test]
    fn sqrt_of_square(w in any::<u8>(), s in any::<u64>()) {
        let f = field(w);
        let x = el(&f, s);
        let y = f.sqrt(f.mul(x, x)).unwrap();
        prop_assert!(y == x || y == f.neg(x));
    }

    #[test]
    fn frobenius_fixes_prime_field_and_cycles(w in any::<u8>(), s in any::<u64>(), n in any::<i64>()) {
        let f = field(w);
        let x = el(&f, s);
        prop_assert_eq!(f.frobenius(f.from_int(n), 1), f.from_int(n));
        let mut y = x;
        for _ in 0..f.degree() {
            y = f.frobenius(y, 1);
        }
        prop_assert_eq!(y, x);
    }

    #[test]
    fn pivot_identity(w in any::<u8>(), s in any::<u64>(), t in 1u32..3) {
        let f = field(w);
        let a = nz(&f, s);
        let r = (f.characteristic() as u64).pow(t);
        let (p, q) = pq_pair(&f, a, r).unwrap();
        let tt = Poly::t(&f);
        let lhs = &(&tt.pow(r) - &(&tt * &p)) + &q.scale(a);
        prop_assert!(lhs.is_zero());
    }

    #[test]
    fn poly_frobenius_additive(w in any::<u8>(), x in prop::collection::vec(any::<u64>(), 0..6), y in prop::collection::vec(any::<u64>(), 0..6)) {
        let f = field(w);
        let (x, y) = (poly(&f, &x), poly(&f, &y));
        prop_assert_eq!((&x + &y).frobenius(1), &x.frobenius(1) + &y.frobenius(1));
        prop_assert_eq!((&x * &y).frobenius(1), &x.frobenius(1) * &y.frobenius(1));
    }
}

// continuants

proptest! {
    #![proptest_config(config())]

    #[test]
    fn rational_round_trip(w in any::<u8>(), n in seeds_in(1..8), d in seeds_in(1..8)) {
        let f = field(w);
        let (num, den) = (poly(&f, &n), poly(&f, &d));
        prop_assume!(!den.is_zero());
        let wd = cf_of_rational(&num, &den).unwrap();
        let v = eval_cf(&wd);
        prop_assert!(v.diagnostic.is_none());
        prop_assert_eq!(RatFunc::new(v.num, v.den).unwrap(), RatFunc::new(num, den).unwrap());
    }
}

#[test]
fn recurrence_one() {
    recurrence(false).unwrap();
}

#[test]
fn concatenation_identity() {
    concatenation(false).unwrap();
}

#[test]
fn palindrome_identity() {
    palindrome(false).unwrap();
}

#[test]
fn determinant_identity() {
    determinant(false).unwrap();
}

#[test]
fn twist_law() {
    twist(false).unwrap();
}

#[test]
fn extension_lemma() {
    lemma0(false).unwrap();
}

#[test]
fn ultrametric_inequality() {
    ultrametric(false).unwrap();
}

#[test]
fn window_extension_stability() {
    precision_stability(false).unwrap();
}

// truncated series

proptest! {
    #![proptest_config(config())]

    #[test]
    fn multiplicative_valuation(w in any::<u8>(), tx in -5i64..5, ty in -5i64..5, sx in seeds(8), sy in seeds(8)) {
        let f = field(w);
        let x = series(&f, tx, 8, &sx);
        let y = series(&f, ty, 8, &sy);
        prop_assert_eq!(x.mul(&y).top(), tx + ty);
        prop_assert_eq!(x.inv().unwrap().top(), -tx);
        prop_assert_eq!(x.pow_r(1).top(), tx * f.characteristic() as i64);
    }

    /// `|x - x_n/y_n| = |a_{n+1}|^{-1} |y_n|^{-2}` on certified prefixes.
    #[test]
    fn approximation_identity(w in any::<u8>(), s in seeds(40), top in 1i64..4) {
        let f = field(w);
        let x = series(&f, top, 40, &s);
        let e = cf_expand(&x, 12);
        let conv = convergents(&e.word);
        for (n, (xn, yn)) in conv.iter().enumerate().take(e.certified).skip(1) {
            let diff = x.sub(&Laurent::from_rational(xn, yn, x.known_through()).unwrap());
            let expect = -e.word.terms()[n].deg() - 2 * yn.deg();
            if expect > x.known_through() {
                prop_assert_eq!(diff.top(), expect);
            }
        }
    }
}

// the series oracle

/// Bounded windows: random members can have quotients of very large degree.
fn bounded(n: usize) -> ExpandOptions {
    ExpandOptions { max_width: 1024, ..ExpandOptions::new(n) }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn oracle_is_a_root(w in any::<u8>(), s in seeds(10)) {
        let sp = spec(w, false, &s);
        let rep = expand_alpha_with(&sp, bounded(30)).unwrap();
        // Ok means no nonzero residual coefficient inside the window
        let v = check_root(&sp, &rep).unwrap();
        prop_assert!(v < 0);
    }

    #[test]
    fn e0_quotients_are_odd(w in any::<u8>(), s in seeds(10)) {
        let sp = spec(w, true, &s);
        let rep = expand_alpha_with(&sp, bounded(40)).unwrap();
        prop_assert!(rep.certified > 0);
        for a in rep.word.terms() {
            prop_assert!(a.is_odd(), "{}", a);
        }
    }

    #[test]
    fn doubling_precision(w in any::<u8>(), s in seeds(10), k in 40i64..300) {
        let sp = spec(w, false, &s);
        let a = cf_expand(&alpha_series(&sp, -k).unwrap(), 60);
        let b = cf_expand(&alpha_series(&sp, -2 * k).unwrap(), 60);
        prop_assert!(a.certified <= b.certified);
        prop_assert_eq!(a.word.terms(), &b.word.terms()[..a.certified]);
    }
}

// the step recursion

fn conforming(w: u8, s: &[u64]) -> Option<HyperquadSpec> {
    let f = prime_field(w);
    let l = 1 + (s[0] % 3) as usize;
    let lambda = (0..l).map(|i| nz(&f, s[1 + i])).collect();
    let mu = (0..l - 1).map(|i| el(&f, s[4 + i])).collect();
    conforming_spec(&f, 1, nz(&f, s[7]), lambda, mu, nz(&f, s[9]))
}

proptest! {
    #![proptest_config(config())]

    /// `δ_{f(n)} = a^{1-r}(ε_{1,n}^{-1} δ_n)^r`, `δ_{f(n)+i} = (a/2) λ_{f(n)+i}^r`,
    /// `ω_{f(n)+k} = ω_n^r`, `ω_{f(n)+i} = 1` otherwise, and the product law.
    #[test]
    fn step_identities(w in any::<u8>(), s in seeds(10)) {
        let sp = conforming(w, &s);
        prop_assume!(sp.is_some());
        let sp = sp.unwrap();
        let mut checked = 0;
        let f = sp.ctx.clone();
        let (a, r, k) = (sp.a, sp.r(), sp.k() as usize);
        let tr = iterate_prop2(&sp, 200).unwrap();
        let st = &tr.states;
        let maps = IndexMaps::new(sp.l(), r);
        let half_a = f.div(a, f.from_int(2)).unwrap();
        let four_ai = f.div(f.from_int(4), a).unwrap();
        for n in 1..=st.len() {
            let fn_ = maps.f(n).unwrap();
            if fn_ + r as usize - 1 > st.len() {
                break;
            }
            let sn = st[n - 1];
            let d = f.mul(f.pow(a, 1 - r as i64).unwrap(), f.frobenius(f.div(sn.delta, sn.eps1).unwrap(), 1));
            prop_assert_eq!(st[fn_ - 1].delta, d, "(D) at n = {}", n);
            checked += 1;
            for i in 1..r as usize {
                let s_i = st[fn_ + i - 1];
                prop_assert_eq!(s_i.delta, f.mul(half_a, f.frobenius(s_i.lambda, 1)));
            }
            let wn = sn.omega.unwrap();
            for i in 0..r as usize {
                let expect = if i == k { f.frobenius(wn, 1) } else { f.one() };
                prop_assert_eq!(st[fn_ + i - 1].omega.unwrap(), expect, "(O) at n = {}, i = {}", n, i);
            }
            for i in 1..r as usize - 1 {
                let prod = f.mul(st[fn_ + i - 1].lambda, st[fn_ + i].lambda);
                let expect = if i == k { f.div(four_ai, wn).unwrap() } else { four_ai };
                prop_assert_eq!(prod, expect, "(X) at n = {}, i = {}", n, i);
            }
        }
        prop_assert!(checked > 0);
    }

    /// `π_{g(n)} = (-a)^{(1-k)r-1} π_n^r`.
    #[test]
    fn pi_recursion(w in any::<u8>(), s in seeds(10)) {
        let sp = conforming(w, &s);
        prop_assume!(sp.is_some());
        let sp = sp.unwrap();
        let mut checked = 0;
        let f = sp.ctx.clone();
        let (r, k) = (sp.r() as i64, sp.k() as i64);
        let tr = iterate_prop2(&sp, 200).unwrap();
        let maps = IndexMaps::new(sp.l(), sp.r());
        let c = f.pow(f.neg(sp.a), (1 - k) * r - 1).unwrap();
        for n in 1..=tr.states.len() {
            let g = maps.g(n).unwrap();
            if g > tr.states.len() {
                break;
            }
            let pn = tr.states[n - 1].pi.unwrap();
            prop_assert_eq!(tr.states[g - 1].pi.unwrap(), f.mul(c, f.frobenius(pn, 1)), "n = {}", n);
            checked += 1;
        }
        prop_assert!(checked > 0);
    }

    #[test]
    fn classify_matches_orbits(l in 1usize..5, t in 0usize..4, mask in any::<u8>(), n in 1usize..4000) {
        let r = [3u64, 5, 7, 9][t];
        let star: Vec<usize> = (1..=l).filter(|i| mask >> (i - 1) & 1 == 1).collect();
        let (fs, gs) = forward_sets(l, r, &star, n);
        let c = classify_index(n, l, r, &star);
        prop_assert_eq!(c.prefix.is_some(), n <= l);
        prop_assert_eq!(c.f.is_some(), fs.contains(&n));
        prop_assert_eq!(c.g.is_some(), gs.contains(&n));
        prop_assert_eq!(c.f_plus_1.is_some(), fs.contains(&(n - 1)));
        prop_assert_eq!(c.g_plus_1.is_some(), gs.contains(&(n - 1)));
        prop_assert!(!c.c_collision());
    }
}
