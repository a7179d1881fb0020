//! Exhaustive search over `E(r, l, a, q)` or `E_0(r, l, a, q)`: every spec is
//! expanded by the oracle and compared with conditions (C1)-(C3).
//!
//! Specs are numbered by a mixed-radix index (`a` outermost, then
//! `λ_1..λ_l`, `μ_1..μ_l`, `ε_1`, `ε_2`). Shard `i/k` takes the indices
//! congruent to `i` mod `k`. Work proceeds in chunks of [`CHUNK`] indices;
//! each finished chunk is appended to the checkpoint as one JSON line.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldElem, FieldError, FqContext};
use crate::hyperquad::{ExpandOptions, HyperquadSpec, SpecFile};
use crate::theorem::conditions::{c0_status, C0Status};
use crate::theorem::{verify_with, MismatchDetail, VerifyStatus};

pub const CHUNK: u64 = 10_000;
pub const BUDGET: u64 = 10_000_000;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("{total} specs per shard exceeds the budget of {limit}; use --shard i/k with more shards")]
    Budget { total: u128, limit: u64 },
    #[error("shard {0}/{1} is invalid")]
    BadShard(u64, u64),
    #[error("fixed a must be a nonzero field element")]
    BadA,
    #[error("field: {0}")]
    Field(#[from] FieldError),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Full,
    E0,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchTask {
    pub p: u32,
    pub s: usize,
    pub t: u32,
    pub l: usize,
    pub mode: SearchMode,
    /// Restrict to one value of `a` (field element index).
    pub a: Option<u64>,
    /// Certified quotients required per spec.
    pub depth: usize,
    /// `(index, count)`.
    pub shard: (u64, u64),
}

/// Family sizes for one `(q, l)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub q: u64,
    pub l: usize,
    /// `q^l (q-1)^{l+2}`: tuples `(λ, μ, ε_1, ε_2)` for one fixed `a`.
    pub full_per_a: u128,
    /// `q^l (q-1)^{l+3}`: the same summed over all `a`.
    pub full_all_a: u128,
    /// `(q-1)^{l+2}`.
    pub e0_per_a: u128,
    pub e0_all_a: u128,
    /// `(q-1)(q-2)^l`: members of `E_0` satisfying (C0), per fixed `a`.
    pub c0_per_a: u128,
}

pub fn counts(q: u64, l: usize) -> Counts {
    let q = q as u128;
    let l32 = l as u32;
    Counts {
        q: q as u64,
        l,
        full_per_a: q.pow(l32) * (q - 1).pow(l32 + 2),
        full_all_a: q.pow(l32) * (q - 1).pow(l32 + 3),
        e0_per_a: (q - 1).pow(l32 + 2),
        e0_all_a: (q - 1).pow(l32 + 3),
        c0_per_a: (q - 1) * (q - 2).pow(l32),
    }
}

impl SearchTask {
    /// Depth defaults to `4 l r^2`.
    pub fn new(p: u32, s: usize, t: u32, l: usize, mode: SearchMode) -> Self {
        let r = (p as usize).pow(t);
        SearchTask { p, s, t, l, mode, a: None, depth: 4 * l * r * r, shard: (0, 1) }
    }

    pub fn context(&self) -> Result<Arc<FqContext>, SearchError> {
        Ok(FqContext::new(self.p as u64, self.s, None)?)
    }

    fn q(&self) -> u128 {
        (self.p as u128).pow(self.s as u32)
    }

    pub fn per_a(&self) -> u128 {
        let c = counts(self.q() as u64, self.l);
        match self.mode {
            SearchMode::Full => c.full_per_a,
            SearchMode::E0 => c.e0_per_a,
        }
    }

    pub fn a_values(&self) -> u128 {
        if self.a.is_some() {
            1
        } else {
            self.q() - 1
        }
    }

    pub fn total(&self) -> u128 {
        self.per_a() * self.a_values()
    }

    pub fn check(&self) -> Result<(), SearchError> {
        let (i, k) = self.shard;
        if k == 0 || i >= k {
            return Err(SearchError::BadShard(i, k));
        }
        if let Some(a) = self.a {
            if a == 0 || a as u128 >= self.q() {
                return Err(SearchError::BadA);
            }
        }
        let per_shard = self.total().div_ceil(k as u128);
        if per_shard > BUDGET as u128 {
            return Err(SearchError::Budget { total: per_shard, limit: BUDGET });
        }
        Ok(())
    }

    /// The spec with global index `idx`.
    pub fn spec_at(&self, ctx: &Arc<FqContext>, idx: u64) -> HyperquadSpec {
        let q = self.q() as u64;
        let per_a = self.per_a() as u64;
        let nz = |d: u64| ctx.elem(d + 1).expect("in range");
        let a = match self.a {
            Some(a) => ctx.elem(a).expect("checked"),
            None => nz(idx / per_a),
        };
        let mut rest = idx % per_a;
        let mut take = |radix: u64| {
            let d = rest % radix;
            rest /= radix;
            d
        };
        let eps2 = nz(take(q - 1));
        let eps1 = nz(take(q - 1));
        let l = self.l;
        let mut mu = vec![ctx.zero(); l];
        if self.mode == SearchMode::Full {
            for m in mu.iter_mut().rev() {
                *m = ctx.elem(take(q)).expect("in range");
            }
        }
        let mut lambda = vec![ctx.zero(); l];
        for x in lambda.iter_mut().rev() {
            *x = nz(take(q - 1));
        }
        HyperquadSpec::new(ctx, self.t, a, lambda, mu, eps1, eps2).expect("enumerated specs are valid")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MismatchEntry {
    pub index: u64,
    pub spec: SpecFile,
    pub perfect: bool,
    pub conditions: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_mismatch: Option<MismatchDetail>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerA {
    pub a: u64,
    pub total: u64,
    pub perfect: u64,
    pub condition_pass: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c0_pass: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub task: SearchTask,
    pub total_specs: u64,
    pub perfect_count: u64,
    pub condition_pass_count: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c0_pass_count: Option<u64>,
    /// Specs where perfection at `depth` and (C1)∧(C2)∧(C3) disagree, or where
    /// a prediction disagrees with the oracle.
    pub mismatches: Vec<MismatchEntry>,
    /// Specs the oracle could not decide at `depth`.
    pub shortfalls: Vec<u64>,
    pub per_a: Vec<PerA>,
    pub counts: Counts,
}

impl SearchSummary {
    fn empty(task: &SearchTask) -> Self {
        SearchSummary {
            task: task.clone(),
            total_specs: 0,
            perfect_count: 0,
            condition_pass_count: 0,
            c0_pass_count: (task.mode == SearchMode::E0).then_some(0),
            mismatches: Vec::new(),
            shortfalls: Vec::new(),
            per_a: Vec::new(),
            counts: counts(task.q() as u64, task.l),
        }
    }

    /// Combines summaries of disjoint parts of the same enumeration.
    pub fn merge(parts: &[SearchSummary]) -> Option<SearchSummary> {
        let first = parts.first()?;
        let mut task = first.task.clone();
        task.shard = (0, 1);
        let mut out = SearchSummary::empty(&task);
        let mut per_a: BTreeMap<u64, PerA> = BTreeMap::new();
        for p in parts {
            out.total_specs += p.total_specs;
            out.perfect_count += p.perfect_count;
            out.condition_pass_count += p.condition_pass_count;
            if let (Some(x), Some(y)) = (out.c0_pass_count.as_mut(), p.c0_pass_count) {
                *x += y;
            }
            out.mismatches.extend(p.mismatches.iter().cloned());
            out.shortfalls.extend(p.shortfalls.iter().copied());
            for e in &p.per_a {
                let slot = per_a.entry(e.a).or_insert_with(|| PerA {
                    a: e.a,
                    c0_pass: e.c0_pass.map(|_| 0),
                    ..Default::default()
                });
                slot.total += e.total;
                slot.perfect += e.perfect;
                slot.condition_pass += e.condition_pass;
                if let (Some(x), Some(y)) = (slot.c0_pass.as_mut(), e.c0_pass) {
                    *x += y;
                }
            }
        }
        out.mismatches.sort_by_key(|m| m.index);
        out.shortfalls.sort_unstable();
        out.per_a = per_a.into_values().collect();
        Some(out)
    }

    /// `total_specs` equals the family size (only meaningful unsharded).
    pub fn count_matches_formula(&self) -> bool {
        self.total_specs as u128 == self.task.total()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

struct Outcome {
    index: u64,
    a: u64,
    perfect: bool,
    conditions: bool,
    c0: Option<bool>,
    status: VerifyStatus,
    mismatch: Option<MismatchEntry>,
}

fn evaluate(task: &SearchTask, ctx: &Arc<FqContext>, index: u64) -> Outcome {
    let spec = task.spec_at(ctx, index);
    let opts = ExpandOptions::new(task.depth).stop_at_imperfect();
    let rep = verify_with(&spec, opts).expect("enumerated specs are valid");
    let perfect = rep.perfect_through >= task.depth;
    let conditions = rep.conditions.c1 && rep.conditions.c2 && rep.conditions.c3;
    let c0 = (task.mode == SearchMode::E0).then(|| c0_status(&spec) == C0Status::Holds);
    let mismatch = (rep.status == VerifyStatus::Mismatch).then(|| MismatchEntry {
        index,
        spec: spec.to_file(),
        perfect,
        conditions,
        first_mismatch: rep.first_mismatch.clone(),
        note: rep.note.clone(),
    });
    Outcome { index, a: spec.a.index() as u64, perfect, conditions, c0, status: rep.status, mismatch }
}

fn run_chunk(task: &SearchTask, ctx: &Arc<FqContext>, chunk: u64) -> SearchSummary {
    let total = task.total() as u64;
    let start = chunk * CHUNK;
    let end = (start + CHUNK).min(total);
    let (si, sk) = task.shard;
    let outcomes: Vec<Outcome> =
        (start..end).into_par_iter().filter(|i| i % sk == si).map(|i| evaluate(task, ctx, i)).collect();
    let mut s = SearchSummary::empty(task);
    let mut per_a: BTreeMap<u64, PerA> = BTreeMap::new();
    for o in outcomes {
        s.total_specs += 1;
        s.perfect_count += o.perfect as u64;
        s.condition_pass_count += o.conditions as u64;
        if let (Some(x), Some(c)) = (s.c0_pass_count.as_mut(), o.c0) {
            *x += c as u64;
        }
        let e = per_a.entry(o.a).or_insert_with(|| PerA { a: o.a, c0_pass: o.c0.map(|_| 0), ..Default::default() });
        e.total += 1;
        e.perfect += o.perfect as u64;
        e.condition_pass += o.conditions as u64;
        if let (Some(x), Some(c)) = (e.c0_pass.as_mut(), o.c0) {
            *x += c as u64;
        }
        if o.status == VerifyStatus::PrecisionShortfall {
            s.shortfalls.push(o.index);
        }
        if let Some(m) = o.mismatch {
            s.mismatches.push(m);
        }
    }
    s.per_a = per_a.into_values().collect();
    s
}

#[derive(Serialize, Deserialize)]
struct CheckpointLine {
    chunk: u64,
    summary: SearchSummary,
}

/// Runs (or resumes) a search. With a checkpoint path, chunks already logged
/// there are not recomputed and new chunks are appended as they finish.
pub fn run_search(task: &SearchTask, checkpoint: Option<&Path>) -> Result<SearchSummary, SearchError> {
    run_search_with(task, checkpoint, |_, _| {})
}

/// As [`run_search`], calling `progress(done_chunks, all_chunks)` after each chunk.
pub fn run_search_with(
    task: &SearchTask,
    checkpoint: Option<&Path>,
    mut progress: impl FnMut(u64, u64),
) -> Result<SearchSummary, SearchError> {
    task.check()?;
    let ctx = task.context()?;
    let total = task.total() as u64;
    let chunks = total.div_ceil(CHUNK);
    let mut done: BTreeMap<u64, SearchSummary> = BTreeMap::new();
    if let Some(path) = checkpoint.filter(|p| p.exists()) {
        let file = File::open(path)?;
        for (n, line) in BufReader::new(file).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let Ok(entry) = serde_json::from_str::<CheckpointLine>(&line) else {
                // a torn final line from an interrupted run is recomputed
                continue;
            };
            if entry.summary.task != *task {
                return Err(SearchError::Checkpoint(format!("line {} belongs to a different task", n + 1)));
            }
            done.insert(entry.chunk, entry.summary);
        }
    }
    let mut log = match checkpoint {
        Some(path) => Some(OpenOptions::new().create(true).append(true).open(path)?),
        None => None,
    };
    let pending: BTreeSet<u64> = (0..chunks).filter(|c| !done.contains_key(c)).collect();
    for c in pending {
        let s = run_chunk(task, &ctx, c);
        if let Some(f) = log.as_mut() {
            let line = serde_json::to_string(&CheckpointLine { chunk: c, summary: s.clone() })
                .map_err(|e| SearchError::Checkpoint(e.to_string()))?;
            writeln!(f, "{line}")?;
            f.flush()?;
        }
        done.insert(c, s);
        progress(done.len() as u64, chunks);
    }
    let parts: Vec<SearchSummary> = done.into_values().collect();
    let mut out = SearchSummary::merge(&parts).unwrap_or_else(|| SearchSummary::empty(task));
    out.task = task.clone();
    Ok(out)
}

/// Per-`a` number of members of `E_0(r, l, a, q)` satisfying (C0).
pub fn c0_census(ctx: &Arc<FqContext>, t: u32, l: usize) -> Vec<(FieldElem, u64)> {
    let task = SearchTask { a: None, ..SearchTask::new(ctx.characteristic(), ctx.degree(), t, l, SearchMode::E0) };
    let per_a = task.per_a() as u64;
    ctx.nonzero_elements()
        .enumerate()
        .map(|(ai, a)| {
            let n = (ai as u64 * per_a..(ai as u64 + 1) * per_a)
                .into_par_iter()
                .filter(|&i| c0_status(&task.spec_at(ctx, i)) == C0Status::Holds)
                .count();
            (a, n as u64)
        })
        .collect()
}
