//! Dense polynomials in `T` over `F_q`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

use crate::field::{Embedding, FieldElem, FqContext};

/// Degree of the zero polynomial.
pub const DEG_ZERO: i64 = i64::MIN;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("parameter a must be nonzero")]
    ZeroParameter,
    #[error("{r} is not a positive power of the characteristic {p}")]
    NotPowerOfP { r: u64, p: u32 },
    #[error("coefficient serialization is malformed")]
    BadCoefficients,
}

#[derive(Clone)]
pub struct Poly {
    ctx: Arc<FqContext>,
    coeffs: Vec<FieldElem>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Poly {
    /// Builds a polynomial from ascending coefficients, trimming trailing zeros.
    pub fn new(ctx: &Arc<FqContext>, mut coeffs: Vec<FieldElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { ctx: ctx.clone(), coeffs }
    }

    pub fn zero(ctx: &Arc<FqContext>) -> Self {
        Poly { ctx: ctx.clone(), coeffs: Vec::new() }
    }

    pub fn one(ctx: &Arc<FqContext>) -> Self {
        Self::constant(ctx, ctx.one())
    }

    pub fn constant(ctx: &Arc<FqContext>, c: FieldElem) -> Self {
        Self::new(ctx, vec![c])
    }

    /// `c T^d`.
    pub fn monomial(ctx: &Arc<FqContext>, c: FieldElem, d: usize) -> Self {
        let mut coeffs = vec![ctx.zero(); d + 1];
        coeffs[d] = c;
        Self::new(ctx, coeffs)
    }

    /// The indeterminate `T`.
    pub fn t(ctx: &Arc<FqContext>) -> Self {
        Self::monomial(ctx, ctx.one(), 1)
    }

    /// `λT + μ`.
    pub fn linear(ctx: &Arc<FqContext>, lambda: FieldElem, mu: FieldElem) -> Self {
        Self::new(ctx, vec![mu, lambda])
    }

    /// Parses integer coefficients (prime-field images), ascending.
    pub fn from_ints(ctx: &Arc<FqContext>, coeffs: &[i64]) -> Self {
        Self::new(ctx, coeffs.iter().map(|&c| ctx.from_int(c)).collect())
    }

    pub fn ctx(&self) -> &Arc<FqContext> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).copied().unwrap_or_else(|| self.ctx.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn deg(&self) -> i64 {
        if self.coeffs.is_empty() {
            DEG_ZERO
        } else {
            self.coeffs.len() as i64 - 1
        }
    }

    pub fn lead(&self) -> Option<FieldElem> {
        self.coeffs.last().copied()
    }

    /// True when only odd powers of `T` occur.
    pub fn is_odd(&self) -> bool {
        self.coeffs.iter().step_by(2).all(|c| c.is_zero())
    }

    pub fn scale(&self, c: FieldElem) -> Self {
        let f = &self.ctx;
        Self::new(f, self.coeffs.iter().map(|&x| f.mul(x, c)).collect())
    }

    /// Euclidean division: `(quotient, remainder)` with `deg rem < deg g`.
    pub fn divmod(&self, g: &Poly) -> Result<(Poly, Poly), PolyError> {
        let f = &self.ctx;
        let lead = g.lead().ok_or(PolyError::DivisionByZero)?;
        let inv = f.inv(lead).expect("nonzero leading coefficient");
        let dg = g.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dg {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut quot = vec![f.zero(); rem.len() - dg];
        for i in (0..quot.len()).rev() {
            let c = f.mul(rem[i + dg], inv);
            quot[i] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &gj) in g.coeffs.iter().enumerate() {
                rem[i + j] = f.sub(rem[i + j], f.mul(c, gj));
            }
        }
        rem.truncate(dg);
        Ok((Poly::new(f, quot), Poly::new(f, rem)))
    }

    pub fn rem(&self, g: &Poly) -> Result<Poly, PolyError> {
        Ok(self.divmod(g)?.1)
    }

    /// Exact quotient; `None` when `g` does not divide `self`.
    pub fn exact_div(&self, g: &Poly) -> Option<Poly> {
        let (q, r) = self.divmod(g).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn eval(&self, x: FieldElem) -> FieldElem {
        let f = &self.ctx;
        self.coeffs.iter().rev().fold(f.zero(), |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn monic(&self) -> Poly {
        match self.lead() {
            None => self.clone(),
            Some(l) => self.scale(self.ctx.inv(l).expect("nonzero")),
        }
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut acc = Poly::one(&self.ctx);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self^(p^t)`: Frobenius on coefficients with exponents stretched by `p^t`.
    pub fn frobenius(&self, t: u32) -> Poly {
        let f = &self.ctx;
        if self.is_zero() {
            return self.clone();
        }
        let r = (f.characteristic() as usize).pow(t);
        let mut coeffs = vec![f.zero(); (self.coeffs.len() - 1) * r + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * r] = f.frobenius(c, t);
        }
        Poly::new(f, coeffs)
    }

    /// `self(vT)`.
    pub fn scale_arg(&self, v: FieldElem) -> Poly {
        let f = &self.ctx;
        let mut w = f.one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| {
                let out = f.mul(c, w);
                w = f.mul(w, v);
                out
            })
            .collect();
        Poly::new(f, coeffs)
    }

    /// Image under a field embedding.
    pub fn embed(&self, emb: &Embedding) -> Poly {
        Poly::new(emb.target(), self.coeffs.iter().map(|&c| emb.apply(c)).collect())
    }

    /// Coefficients as coordinate arrays, ascending.
    pub fn to_coords(&self) -> Vec<Vec<u32>> {
        self.coeffs.iter().map(|&c| self.ctx.coords(c)).collect()
    }

    pub fn from_coords(ctx: &Arc<FqContext>, coords: &[Vec<u64>]) -> Result<Poly, PolyError> {
        let coeffs = coords
            .iter()
            .map(|c| ctx.from_coords(c).map_err(|_| PolyError::BadCoefficients))
            .collect::<Result<Vec<_>, _>>()?;
        if coeffs.last().is_some_and(|c| c.is_zero()) {
            return Err(PolyError::BadCoefficients);
        }
        Ok(Poly::new(ctx, coeffs))
    }
}

fn zip_with(f: &Poly, g: &Poly, op: impl Fn(FieldElem, FieldElem) -> FieldElem) -> Poly {
    let ctx = &f.ctx;
    let n = f.coeffs.len().max(g.coeffs.len());
    Poly::new(ctx, (0..n).map(|i| op(f.coeff(i), g.coeff(i))).collect())
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let f = self.ctx.clone();
        zip_with(self, rhs, |x, y| f.add(x, y))
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let f = self.ctx.clone();
        zip_with(self, rhs, |x, y| f.sub(x, y))
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = &self.ctx;
        Poly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let f = &self.ctx;
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(f);
        }
        let mut out = vec![f.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let ctx = &self.ctx;
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            let coef = if c == ctx.one() && i > 0 { String::new() } else { ctx.render(c) };
            match i {
                0 => write!(f, "{coef}")?,
                1 => write!(f, "{coef}T")?,
                _ => write!(f, "{coef}T^{i}")?,
            }
        }
        Ok(())
    }
}

/// Monic greatest common divisor. `gcd(0, 0) = 0`.
pub fn gcd(f: &Poly, g: &Poly) -> Poly {
    let mut x = f.clone();
    let mut y = g.clone();
    while !y.is_zero() {
        let r = x.rem(&y).expect("nonzero divisor");
        x = y;
        y = r;
    }
    x.monic()
}

/// `t` with `r = p^t`, if `r` is a positive power of `p`.
pub fn log_p(r: u64, p: u32) -> Option<u32> {
    let mut t = 0;
    let mut x = r;
    while x > 1 && x.is_multiple_of(p as u64) {
        x /= p as u64;
        t += 1;
    }
    (x == 1 && t >= 1).then_some(t)
}

/// `(P_a, Q_a)` with `P_a = (T^2 + a)^((r-1)/2)` and `Q_a = a^{-1}(T P_a - T^r)`.
pub fn pq_pair(ctx: &Arc<FqContext>, a: FieldElem, r: u64) -> Result<(Poly, Poly), PolyError> {
    if a.is_zero() {
        return Err(PolyError::ZeroParameter);
    }
    log_p(r, ctx.characteristic()).ok_or(PolyError::NotPowerOfP { r, p: ctx.characteristic() })?;
    let base = Poly::new(ctx, vec![a, ctx.zero(), ctx.one()]);
    let p_a = base.pow((r - 1) / 2);
    let t = Poly::t(ctx);
    let tr = Poly::monomial(ctx, ctx.one(), r as usize);
    let q_a = (&(&t * &p_a) - &tr).scale(ctx.inv(a).expect("nonzero"));
    Ok((p_a, q_a))
}

/// `F_0 = 1`, `F_1 = T`, `F_n = T F_{n-1} + F_{n-2}`.
pub fn fib_poly(ctx: &Arc<FqContext>, n: usize) -> Poly {
    let t = Poly::t(ctx);
    let mut prev = Poly::one(ctx);
    if n == 0 {
        return prev;
    }
    let mut cur = t.clone();
    for _ in 1..n {
        let next = &(&t * &cur) + &prev;
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::quadratic_ext;

    fn f(p: u64) -> Arc<FqContext> {
        FqContext::prime(p).unwrap()
    }

    #[test]
    fn divmod_basic() {
        let f3 = f(3);
        let (q, r) = Poly::from_ints(&f3, &[1, 0, 1]).divmod(&Poly::t(&f3)).unwrap();
        assert_eq!(q, Poly::t(&f3));
        assert_eq!(r, Poly::one(&f3));
        assert_eq!(Poly::one(&f3).divmod(&Poly::zero(&f3)), Err(PolyError::DivisionByZero));
    }

    #[test]
    fn product_over_f3() {
        let f3 = f(3);
        let (a, b) = ([2i64, 1], [2i64, 2]);
        // integer convolution, reduced afterwards
        let mut conv = [0i64; 3];
        for i in 0..2 {
            for j in 0..2 {
                conv[i + j] += a[i] * b[j];
            }
        }
        let prod = &Poly::from_ints(&f3, &a) * &Poly::from_ints(&f3, &b);
        assert_eq!(prod, Poly::from_ints(&f3, &conv));
        assert_eq!(prod.to_string(), "2T^2+1");
    }

    #[test]
    fn pq_at_r3() {
        let f3 = f(3);
        let (p, q) = pq_pair(&f3, f3.one(), 3).unwrap();
        assert_eq!(p, Poly::from_ints(&f3, &[1, 0, 1]));
        assert_eq!(q, Poly::t(&f3));
        assert_eq!(pq_pair(&f3, f3.zero(), 3), Err(PolyError::ZeroParameter));
        assert!(matches!(pq_pair(&f3, f3.one(), 6), Err(PolyError::NotPowerOfP { .. })));
        let f5 = f(5);
        let (_, q) = pq_pair(&f5, f5.from_int(2), 5).unwrap();
        assert_eq!(q.deg(), 3);
    }

    #[test]
    fn fibonacci_values() {
        let f3 = f(3);
        assert_eq!(fib_poly(&f3, 2), Poly::from_ints(&f3, &[1, 0, 1]));
        assert_eq!(fib_poly(&f3, 3), Poly::from_ints(&f3, &[0, 2, 0, 1]));
        assert_eq!(fib_poly(&f3, 3).to_string(), "T^3+2T");
    }

    #[test]
    fn frobenius_matches_repeated_multiplication() {
        let f3 = f(3);
        let g = Poly::from_ints(&f3, &[1, 1]);
        assert_eq!(g.frobenius(1), Poly::from_ints(&f3, &[1, 0, 0, 1]));
        let f9 = FqContext::new(3, 2, None).unwrap();
        let h = Poly::new(&f9, f9.elements().skip(2).take(4).collect());
        assert_eq!(h.frobenius(1), h.pow(3));
        assert_eq!(h.frobenius(2), h.pow(9));
    }

    #[test]
    fn scale_arg_in_extension() {
        // P_a(T) = (a/4)^k P_4(T/v) with v^2 = a/4, at a = 1, r = 3.
        let f3 = f(3);
        let (f9, emb) = quadratic_ext(&f3).unwrap();
        let (p1, _) = pq_pair(&f3, f3.one(), 3).unwrap();
        let (p4, _) = pq_pair(&f3, f3.from_int(4), 3).unwrap();
        let quarter = emb.apply(f3.inv(f3.from_int(4)).unwrap());
        let v = f9.sqrt(quarter).unwrap();
        let rhs = p4.embed(&emb).scale_arg(f9.inv(v).unwrap()).scale(quarter);
        assert_eq!(p1.embed(&emb), rhs);
    }

    #[test]
    fn gcd_detects_common_root() {
        let f5 = f(5);
        let (p1, q1) = pq_pair(&f5, f5.one(), 5).unwrap();
        // omega = 1 + x^2 vanishes at x = 2
        let x = Poly::constant(&f5, f5.from_int(2));
        let g = gcd(&p1, &(&q1 + &x));
        assert!(g.deg() >= 1);
        let roots: Vec<_> = f5.elements().filter(|&z| g.eval(z).is_zero()).collect();
        assert!(roots.iter().all(|&z| f5.mul(z, z) == f5.from_int(-1)));
        assert!(!roots.is_empty());
        let f3 = f(3);
        let (p, q) = pq_pair(&f3, f3.one(), 3).unwrap();
        assert_eq!(gcd(&p, &q), Poly::one(&f3));
        let h = Poly::from_ints(&f3, &[1, 2]);
        assert_eq!(gcd(&h, &Poly::zero(&f3)), h.monic());
    }

    #[test]
    fn coordinate_round_trip() {
        let f9 = FqContext::new(3, 2, None).unwrap();
        let g = Poly::new(&f9, f9.elements().skip(1).take(3).collect());
        let coords: Vec<Vec<u64>> = g.to_coords().into_iter().map(|c| c.into_iter().map(u64::from).collect()).collect();
        assert_eq!(Poly::from_coords(&f9, &coords).unwrap(), g);
    }
}
