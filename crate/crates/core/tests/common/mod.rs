//! Generators and the randomized suites shared by the property and
//! acceptance targets.

#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;
use proptest::test_runner::{RngAlgorithm, TestRng, TestRunner};

use hyperquad::cf::{cf_of_rational, cf_value, cf_with_tail, continuant, lemma0_extend, RatFunc};
use hyperquad::field::{FieldElem, FqContext};
use hyperquad::hyperquad::HyperquadSpec;
use hyperquad::laurent::{cf_expand, Laurent};
use hyperquad::poly::Poly;
use hyperquad::Word;

pub const CASES: u32 = 1000;

pub fn config() -> ProptestConfig {
    ProptestConfig { cases: CASES, max_global_rejects: 100_000, failure_persistence: None, ..ProptestConfig::default() }
}

pub fn field(which: u8) -> Arc<FqContext> {
    match which % 6 {
        0 => FqContext::prime(3).unwrap(),
        1 => FqContext::prime(5).unwrap(),
        2 => FqContext::prime(7).unwrap(),
        3 => FqContext::new(3, 2, None).unwrap(),
        4 => FqContext::new(5, 2, None).unwrap(),
        _ => FqContext::new(3, 3, None).unwrap(),
    }
}

pub fn prime_field(which: u8) -> Arc<FqContext> {
    FqContext::prime([3, 5, 7][which as usize % 3]).unwrap()
}

pub fn el(f: &FqContext, seed: u64) -> FieldElem {
    f.elem(seed % f.order()).unwrap()
}

pub fn nz(f: &FqContext, seed: u64) -> FieldElem {
    f.elem(1 + seed % (f.order() - 1)).unwrap()
}

pub fn poly(f: &Arc<FqContext>, seeds: &[u64]) -> Poly {
    Poly::new(f, seeds.iter().map(|&s| el(f, s)).collect())
}

/// Random word; `deg >= 1` terms except possibly the first.
pub fn word(f: &Arc<FqContext>, seeds: &[Vec<u64>]) -> Word {
    let terms = seeds
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let p = poly(f, s);
            if i > 0 && p.deg() < 1 {
                &p + &Poly::t(f)
            } else {
                p
            }
        })
        .collect();
    Word::new(f, terms)
}

pub fn word_seeds(min: usize, max: usize) -> impl Strategy<Value = Vec<Vec<u64>>> {
    prop::collection::vec(prop::collection::vec(any::<u64>(), 1..4), min..max)
}

pub fn seeds(n: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(any::<u64>(), n)
}

pub fn seeds_in(r: std::ops::Range<usize>) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(any::<u64>(), r)
}

/// Series with nonzero leading coefficient at `T^top` and `width` known terms.
pub fn series(f: &Arc<FqContext>, top: i64, width: usize, seeds: &[u64]) -> Laurent {
    let mut c: Vec<_> = seeds.iter().take(width).map(|&s| el(f, s)).collect();
    c[0] = nz(f, seeds[0]);
    Laurent::from_coeffs(f, top, top - c.len() as i64, c)
}

/// A random member of `E(r, l, a, q)` over a prime field, `l <= 3`.
pub fn spec(which: u8, e0: bool, seeds: &[u64]) -> HyperquadSpec {
    let f = prime_field(which);
    let l = 1 + (seeds[0] % 3) as usize;
    let lambda = (0..l).map(|i| nz(&f, seeds[1 + i])).collect();
    let mu = (0..l).map(|i| if e0 { f.zero() } else { el(&f, seeds[4 + i]) }).collect();
    HyperquadSpec::new(&f, 1, nz(&f, seeds[7]), lambda, mu, nz(&f, seeds[8]), nz(&f, seeds[9])).unwrap()
}

/// Runs `test` on `CASES` inputs; `fixed` selects a deterministic RNG.
pub fn run<S: Strategy>(
    fixed: bool,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = if fixed {
        TestRunner::new_with_rng(config(), TestRng::deterministic_rng(RngAlgorithm::ChaCha))
    } else {
        TestRunner::new(config())
    };
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

pub fn recurrence(fixed: bool) -> Result<(), String> {
    run(fixed, (any::<u8>(), word_seeds(2, 9)), |(w, s)| {
        let f = field(w);
        let wd = word(&f, &s);
        let wp = wd.drop_first();
        let rhs = &(&wd.terms()[0] * &continuant(&wp)) + &continuant(&wp.drop_first());
        prop_assert_eq!(continuant(&wd), rhs);
        Ok(())
    })
}

pub fn concatenation(fixed: bool) -> Result<(), String> {
    run(fixed, (any::<u8>(), word_seeds(2, 10), any::<usize>()), |(w, s, cut)| {
        let f = field(w);
        let wd = word(&f, &s);
        let k = 1 + cut % (wd.len() - 1);
        let (a, b) = (wd.slice(0..k), wd.slice(k..wd.len()));
        let rhs = &(&continuant(&a) * &continuant(&b)) + &(&continuant(&a.drop_last()) * &continuant(&b.drop_first()));
        prop_assert_eq!(continuant(&wd), rhs);
        Ok(())
    })
}

pub fn palindrome(fixed: bool) -> Result<(), String> {
    run(fixed, (any::<u8>(), word_seeds(0, 10)), |(w, s)| {
        let f = field(w);
        let wd = word(&f, &s);
        prop_assert_eq!(continuant(&wd.reverse()), continuant(&wd));
        Ok(())
    })
}

pub fn determinant(fixed: bool) -> Result<(), String> {
    run(fixed, (any::<u8>(), word_seeds(2, 10)), |(w, s)| {
        let f = field(w);
        let wd = word(&f, &s);
        let lhs = &(&continuant(&wd) * &continuant(&wd.drop_first().drop_last()))
            - &(&continuant(&wd.drop_first()) * &continuant(&wd.drop_last()));
        let sign = if wd.len().is_multiple_of(2) { 1 } else { -1 };
        prop_assert_eq!(lhs, Poly::from_ints(&f, &[sign]));
        Ok(())
    })
}

pub fn twist(fixed: bool) -> Result<(), String> {
    run(fixed, (any::<u8>(), word_seeds(0, 10), any::<u64>()), |(w, s, y)| {
        let f = field(w);
        let wd = word(&f, &s);
        let y = nz(&f, y);
        let c = continuant(&wd);
        let expect = if wd.len().is_multiple_of(2) { c } else { c.scale(y) };
        prop_assert_eq!(continuant(&wd.twist(y).unwrap()), expect);
        Ok(())
    })
}

/// `[W, b] = [W] + a` for the `b` of the extension lemma, whenever defined.
pub fn lemma0(fixed: bool) -> Result<(), String> {
    run(fixed, (any::<u8>(), word_seeds(2, 8), seeds_in(1..4), seeds_in(1..4)), |(w, s, an, ad)| {
        let f = field(w);
        let wd = word(&f, &s);
        let (num, den) = (poly(&f, &an), poly(&f, &ad));
        prop_assume!(!num.is_zero() && !den.is_zero());
        let a = RatFunc::new(num, den).unwrap();
        let lhs = cf_value(&wd);
        let b = lemma0_extend(&wd, &a);
        prop_assume!(lhs.is_ok() && b.is_ok());
        let rhs = cf_with_tail(&wd, &b.unwrap());
        prop_assume!(rhs.is_ok());
        prop_assert_eq!(lhs.unwrap().add(&a), rhs.unwrap());
        Ok(())
    })
}

pub fn ultrametric(fixed: bool) -> Result<(), String> {
    let st = (any::<u8>(), -5i64..5, -5i64..5, seeds(16), seeds(16));
    run(fixed, st, |(w, tx, ty, sx, sy)| {
        let f = field(w);
        let known = -10;
        let x = series(&f, tx, (tx - known) as usize, &sx);
        let y = series(&f, ty, (ty - known) as usize, &sy);
        let z = x.add(&y);
        if z.is_known_zero() {
            prop_assert_eq!(tx, ty);
        } else {
            prop_assert!(z.top() <= tx.max(ty));
            if tx != ty {
                prop_assert_eq!(z.top(), tx.max(ty));
            }
        }
        prop_assert_eq!(z.known_through(), known);
        Ok(())
    })
}

/// Truncations of an exact value agree where both are known; quotients
/// certified in a narrow window survive a wider one and match exact Euclid.
pub fn precision_stability(fixed: bool) -> Result<(), String> {
    run(fixed, (any::<u8>(), seeds_in(2..7), seeds_in(1..5), 4i64..30), |(w, n, d, k)| {
        let f = field(w);
        let (num, den) = (poly(&f, &n), poly(&f, &d));
        prop_assume!(!den.is_zero() && !num.is_zero());
        let narrow = Laurent::from_rational(&num, &den, -k).unwrap();
        let wide = Laurent::from_rational(&num, &den, -2 * k).unwrap();
        prop_assert!(narrow.agrees_with(&wide));
        let a = cf_expand(&narrow, 64);
        let b = cf_expand(&wide, 64);
        prop_assert!(a.certified <= b.certified);
        prop_assert_eq!(a.word.terms(), &b.word.terms()[..a.certified]);
        let exact = cf_of_rational(&num, &den).unwrap();
        let m = b.certified.min(exact.len());
        prop_assert_eq!(&b.word.terms()[..m], &exact.terms()[..m]);
        Ok(())
    })
}

/// The suites named in the acceptance criteria.
pub type Suite = fn(bool) -> Result<(), String>;

pub const SUITES: &[(&str, Suite)] = &[
    ("recurrence", recurrence),
    ("concatenation", concatenation),
    ("palindrome", palindrome),
    ("determinant", determinant),
    ("twist", twist),
    ("lemma0", lemma0),
    ("ultrametric", ultrametric),
    ("precision_stability", precision_stability),
];
