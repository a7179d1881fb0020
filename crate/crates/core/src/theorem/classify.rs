//! Index sets `I`, `I*`, `F = {f^m(i)}`, `G = {g^m(i)}` with
//! `f(n) = (n-1)r + l + 1` and `g(n) = f(n) + (r-1)/2`.

use std::collections::BTreeSet;
use std::ops::Range;

use serde::Serialize;

/// `n = f^m(i)` (or `g^m(i)`), `m >= 1`, `i` in the prefix range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Orbit {
    pub i: usize,
    pub m: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndexMaps {
    pub l: usize,
    pub r: u64,
}

impl IndexMaps {
    pub fn new(l: usize, r: u64) -> Self {
        IndexMaps { l, r }
    }

    fn k(&self) -> u64 {
        (self.r - 1) / 2
    }

    pub fn f(&self, n: usize) -> Option<usize> {
        let v = (n as u128 - 1) * self.r as u128 + self.l as u128 + 1;
        usize::try_from(v).ok()
    }

    pub fn g(&self, n: usize) -> Option<usize> {
        self.f(n)?.checked_add(self.k() as usize)
    }

    pub fn f_inv(&self, n: usize) -> Option<usize> {
        let d = (n as u64).checked_sub(self.l as u64 + 1)?;
        (d % self.r == 0).then(|| (d / self.r) as usize + 1)
    }

    pub fn g_inv(&self, n: usize) -> Option<usize> {
        self.f_inv((n as u64).checked_sub(self.k())? as usize)
    }

    /// `(i, m)` with `n = f^m(i)`, `i <= l`, `m >= 1`.
    pub fn f_orbit(&self, n: usize) -> Option<Orbit> {
        self.orbit(n, |x| self.f_inv(x))
    }

    /// `(i, m)` with `n = g^m(i)`, `i` in `I*`, `m >= 1`.
    pub fn g_orbit(&self, n: usize, i_star: &[usize]) -> Option<Orbit> {
        self.orbit(n, |x| self.g_inv(x)).filter(|o| i_star.contains(&o.i))
    }

    fn orbit(&self, n: usize, back: impl Fn(usize) -> Option<usize>) -> Option<Orbit> {
        let mut x = n;
        let mut m = 0;
        while x > self.l {
            x = back(x)?;
            m += 1;
        }
        (m >= 1 && x >= 1).then_some(Orbit { i: x, m })
    }

    /// `W_m = a_{f^m(1)}, ..., a_{f^{m+1}(1)-1}` as 1-based ranges, `m < count`.
    pub fn wm_blocks(&self, count: usize) -> Vec<Range<usize>> {
        let mut out = Vec::with_capacity(count);
        let mut start = 1;
        for _ in 0..count {
            let Some(end) = self.f(start) else { break };
            out.push(start..end);
            start = end;
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "case")]
pub enum IndexCase {
    Prefix {
        i: usize,
    },
    /// `n = f(1) = l + 1`.
    Base,
    F(Orbit),
    FPlus1(Orbit),
    G(Orbit),
    GPlus1(Orbit),
    Generic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndexClassification {
    pub n: usize,
    pub prefix: Option<usize>,
    pub f: Option<Orbit>,
    pub f_plus_1: Option<Orbit>,
    pub g: Option<Orbit>,
    pub g_plus_1: Option<Orbit>,
}

impl IndexClassification {
    pub fn is_base(&self) -> bool {
        self.f == Some(Orbit { i: 1, m: 1 })
    }

    /// The case that decides `C(n)`; `G` only matters for `μ_n`.
    pub fn case(&self) -> IndexCase {
        if let Some(i) = self.prefix {
            return IndexCase::Prefix { i };
        }
        if self.is_base() {
            return IndexCase::Base;
        }
        if let Some(o) = self.f {
            return IndexCase::F(o);
        }
        if let Some(o) = self.f_plus_1 {
            return IndexCase::FPlus1(o);
        }
        if let Some(o) = self.g_plus_1 {
            return IndexCase::GPlus1(o);
        }
        if let Some(o) = self.g {
            return IndexCase::G(o);
        }
        IndexCase::Generic
    }

    /// Number of the sets `F`, `F+1`, `G`, `G+1` containing `n`.
    pub fn memberships(&self) -> usize {
        [self.f, self.f_plus_1, self.g, self.g_plus_1].iter().filter(|o| o.is_some()).count()
    }

    /// `n` lies in more than one of `F`, `F+1`, `G+1`, the sets that select `C(n)`.
    pub fn c_collision(&self) -> bool {
        [self.f, self.f_plus_1, self.g_plus_1].iter().filter(|o| o.is_some()).count() > 1
    }
}

/// Membership of `n` in `I`, `F`, `F+1`, `G`, `G+1`, by backward iteration.
pub fn classify_index(n: usize, l: usize, r: u64, i_star: &[usize]) -> IndexClassification {
    let maps = IndexMaps::new(l, r);
    IndexClassification {
        n,
        prefix: (n >= 1 && n <= l).then_some(n),
        f: maps.f_orbit(n),
        f_plus_1: n.checked_sub(1).and_then(|x| maps.f_orbit(x)),
        g: maps.g_orbit(n, i_star),
        g_plus_1: n.checked_sub(1).and_then(|x| maps.g_orbit(x, i_star)),
    }
}

/// `F` and `G` up to `bound`, by forward iteration.
pub fn forward_sets(l: usize, r: u64, i_star: &[usize], bound: usize) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let maps = IndexMaps::new(l, r);
    let walk = |start: usize, step: &dyn Fn(usize) -> Option<usize>, out: &mut BTreeSet<usize>| {
        let mut x = step(start);
        while let Some(v) = x.filter(|&v| v <= bound) {
            out.insert(v);
            x = step(v);
        }
    };
    let (mut fs, mut gs) = (BTreeSet::new(), BTreeSet::new());
    for i in 1..=l {
        walk(i, &|x| maps.f(x), &mut fs);
        if i_star.contains(&i) {
            walk(i, &|x| maps.g(x), &mut gs);
        }
    }
    (fs, gs)
}
