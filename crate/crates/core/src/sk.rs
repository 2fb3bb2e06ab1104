//! Exhaustive weak S_k, strong S_k and strong S_{k,m} verification.
//!
//! Patterns are visited in a fixed order: target tuples as sorted k-subsets
//! in lexicographic order, and for each subset the sign vectors in binary
//! counting order with `+1 ↦ 0` and `b_1` as the most significant digit.
//! That order is the lexicographic order on `(targets, signs)` with
//! `+1 < −1`, so the first failure met is the smallest one.
//!
//! The scan is a depth-first walk over subsets that keeps, for every sign
//! prefix of the targets chosen so far, the intersection of the matching
//! in/out rows. A leaf holds one row per full sign vector; its popcount is
//! the witness count of that pattern.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits;
use crate::error::{Error, Result};
use crate::qr::QrModulus;
use crate::tournament::Tournament;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Sign {
    /// The witness beats the target.
    Plus,
    /// The target beats the witness.
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;

    fn try_from(v: i8) -> Result<Self, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(format!("sign must be +1 or -1, got {v}")),
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        s.value()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DominationPattern {
    pub targets: Vec<usize>,
    pub signs: Vec<Sign>,
}

impl DominationPattern {
    pub fn new(targets: Vec<usize>, signs: Vec<Sign>) -> Result<Self> {
        if targets.len() != signs.len() {
            return Err(Error::SignLength { targets: targets.len(), signs: signs.len() });
        }
        if targets.is_empty() {
            return Err(Error::PatternTooLarge { k: 0, order: 0 });
        }
        for (i, &a) in targets.iter().enumerate() {
            if targets[..i].contains(&a) {
                return Err(Error::DuplicateTarget(a));
            }
        }
        Ok(DominationPattern { targets, signs })
    }

    /// All-`+1` pattern, as used by the weak property.
    pub fn dominated(targets: Vec<usize>) -> Result<Self> {
        let k = targets.len();
        Self::new(targets, vec![Sign::Plus; k])
    }

    /// Sign vector number `code` in counting order (`b_1` most significant).
    pub fn signs_from_code(k: usize, code: usize) -> Vec<Sign> {
        (0..k)
            .map(|j| if code >> (k - 1 - j) & 1 == 0 { Sign::Plus } else { Sign::Minus })
            .collect()
    }

    pub fn k(&self) -> usize {
        self.targets.len()
    }

    fn check_against(&self, order: usize) -> Result<()> {
        for &a in &self.targets {
            if a >= order {
                return Err(Error::VertexOutOfRange { vertex: a, order });
            }
        }
        if self.k() >= order {
            return Err(Error::PatternTooLarge { k: self.k(), order });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub pattern: DominationPattern,
    pub witnesses: Vec<usize>,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Weak,
    Strong,
    StrongWithMultiplicity,
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Variant::Weak => "weak",
            Variant::Strong => "strong",
            Variant::StrongWithMultiplicity => "strong-with-multiplicity",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyVerdict {
    pub holds: bool,
    pub variant: Variant,
    pub k: usize,
    pub m: usize,
    pub failing_pattern: Option<DominationPattern>,
    /// Smallest witness count among the patterns scanned. With early exit
    /// this covers every pattern up to and including the failing one.
    pub min_count: usize,
    /// Whether every pattern was scanned.
    pub complete: bool,
}

/// Scan controls. `threads <= 1` runs on the calling thread.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    pub threads: usize,
    pub full_report: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { threads: 1, full_report: false }
    }
}

/// Exact witness set of `pattern` in `t`.
pub fn witnesses(t: &Tournament, pattern: &DominationPattern) -> Result<WitnessReport> {
    pattern.check_against(t.order())?;
    let mut row = bits::full(t.order());
    for (&a, &s) in pattern.targets.iter().zip(&pattern.signs) {
        let constraint = match s {
            Sign::Plus => t.in_row(a),
            Sign::Minus => t.out_row(a),
        };
        row.iter_mut().zip(constraint).for_each(|(w, c)| *w &= c);
    }
    let witnesses: Vec<usize> = bits::ones(&row).collect();
    Ok(WitnessReport { pattern: pattern.clone(), count: witnesses.len(), witnesses })
}

pub fn has_weak_sk(t: &Tournament, k: usize) -> Result<PropertyVerdict> {
    has_weak_sk_with(t, k, CheckOptions::default())
}

pub fn has_weak_sk_with(t: &Tournament, k: usize, opts: CheckOptions) -> Result<PropertyVerdict> {
    scan(t, k, 1, false, opts).map(|r| r.into_verdict(Variant::Weak, k, 1))
}

pub fn has_strong_sk(t: &Tournament, k: usize) -> Result<PropertyVerdict> {
    has_strong_sk_with(t, k, CheckOptions::default())
}

pub fn has_strong_sk_with(t: &Tournament, k: usize, opts: CheckOptions) -> Result<PropertyVerdict> {
    scan(t, k, 1, true, opts).map(|r| r.into_verdict(Variant::Strong, k, 1))
}

pub fn has_strong_skm(t: &Tournament, k: usize, m: usize) -> Result<PropertyVerdict> {
    has_strong_skm_with(t, k, m, CheckOptions::default())
}

pub fn has_strong_skm_with(
    t: &Tournament,
    k: usize,
    m: usize,
    opts: CheckOptions,
) -> Result<PropertyVerdict> {
    if m == 0 {
        return Err(Error::ZeroMultiplicity);
    }
    scan(t, k, m, true, opts).map(|r| r.into_verdict(Variant::StrongWithMultiplicity, k, m))
}

/// Dispatch on the variant; `m` is ignored unless the variant carries it.
pub fn check_property(
    t: &Tournament,
    variant: Variant,
    k: usize,
    m: usize,
    opts: CheckOptions,
) -> Result<PropertyVerdict> {
    match variant {
        Variant::Weak => has_weak_sk_with(t, k, opts),
        Variant::Strong => has_strong_sk_with(t, k, opts),
        Variant::StrongWithMultiplicity => has_strong_skm_with(t, k, m, opts),
    }
}

#[derive(Debug)]
struct ScanResult {
    failure: Option<(Vec<usize>, usize)>,
    min_count: usize,
    k: usize,
    signed: bool,
    complete: bool,
}

impl ScanResult {
    fn into_verdict(self, variant: Variant, k: usize, m: usize) -> PropertyVerdict {
        let failing_pattern = self.failure.map(|(targets, code)| {
            let signs = if self.signed {
                DominationPattern::signs_from_code(self.k, code)
            } else {
                vec![Sign::Plus; self.k]
            };
            DominationPattern { targets, signs }
        });
        PropertyVerdict {
            holds: failing_pattern.is_none(),
            variant,
            k,
            m,
            failing_pattern,
            min_count: self.min_count,
            complete: self.complete,
        }
    }
}

/// Outcome of one shard (all subsets with a fixed smallest target).
struct ShardResult {
    failure: Option<(Vec<usize>, usize)>,
    min_count: usize,
}

struct Walker<'a> {
    t: &'a Tournament,
    k: usize,
    m: usize,
    signed: bool,
    stop_early: bool,
    words: usize,
    /// `levels[d]` holds the rows for all sign prefixes of length `d + 1`.
    levels: Vec<Vec<u64>>,
    targets: Vec<usize>,
    min_count: usize,
    failure: Option<(Vec<usize>, usize)>,
}

impl<'a> Walker<'a> {
    fn new(t: &'a Tournament, k: usize, m: usize, signed: bool, stop_early: bool) -> Self {
        let words = t.row_words();
        let levels = (0..k)
            .map(|d| vec![0u64; words * if signed { 1 << (d + 1) } else { 1 }])
            .collect();
        Walker {
            t,
            k,
            m,
            signed,
            stop_early,
            words,
            levels,
            targets: Vec::with_capacity(k),
            min_count: usize::MAX,
            failure: None,
        }
    }

    fn run_shard(mut self, first: usize) -> ShardResult {
        self.push(first, 0);
        self.descend(1);
        ShardResult { failure: self.failure, min_count: self.min_count }
    }

    /// Fill level `depth` from level `depth - 1` (or from scratch) with target `a`.
    fn push(&mut self, a: usize, depth: usize) {
        let w = self.words;
        let plus = self.t.in_row(a);
        let minus = self.t.out_row(a);
        self.targets.truncate(depth);
        self.targets.push(a);
        if depth == 0 {
            let lvl = &mut self.levels[0];
            lvl[..w].copy_from_slice(plus);
            if self.signed {
                lvl[w..2 * w].copy_from_slice(minus);
            }
            return;
        }
        let (done, rest) = self.levels.split_at_mut(depth);
        let parent = &done[depth - 1];
        let child = &mut rest[0];
        for (ci, prow) in parent.chunks_exact(w).enumerate() {
            if self.signed {
                let base = 2 * ci * w;
                for i in 0..w {
                    child[base + i] = prow[i] & plus[i];
                    child[base + w + i] = prow[i] & minus[i];
                }
            } else {
                for i in 0..w {
                    child[i] = prow[i] & plus[i];
                }
            }
        }
    }

    /// Returns `true` when the walk should stop.
    fn descend(&mut self, depth: usize) -> bool {
        if depth == self.k {
            return self.visit_leaf();
        }
        let n = self.t.order();
        let start = self.targets[depth - 1] + 1;
        for a in start..=n - (self.k - depth) {
            self.push(a, depth);
            if self.descend(depth + 1) {
                return true;
            }
        }
        false
    }

    fn visit_leaf(&mut self) -> bool {
        let leaf = &self.levels[self.k - 1];
        for (code, row) in leaf.chunks_exact(self.words).enumerate() {
            let c = bits::count(row);
            self.min_count = self.min_count.min(c);
            if c < self.m && self.failure.is_none() {
                self.failure = Some((self.targets.clone(), code));
                if self.stop_early {
                    return true;
                }
            }
        }
        false
    }
}

fn scan(t: &Tournament, k: usize, m: usize, signed: bool, opts: CheckOptions) -> Result<ScanResult> {
    let n = t.order();
    if k == 0 || k >= n {
        return Err(Error::PatternTooLarge { k, order: n });
    }
    if signed && k >= usize::BITS as usize - 1 {
        return Err(Error::PatternTooLarge { k, order: n });
    }
    let stop_early = !opts.full_report;
    let shards = n - k + 1;
    let run = |first: usize| Walker::new(t, k, m, signed, stop_early).run_shard(first);

    let results: Vec<Option<ShardResult>> = if opts.threads <= 1 {
        let mut out = Vec::with_capacity(shards);
        for first in 0..shards {
            let r = run(first);
            let failed = r.failure.is_some();
            out.push(Some(r));
            if failed && stop_early {
                break;
            }
        }
        out
    } else {
        // Shards past the smallest failing shard are skipped or discarded,
        // so the reduction is independent of scheduling.
        let best = AtomicUsize::new(usize::MAX);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .map_err(|e| Error::BudgetExceeded(format!("thread pool: {e}")))?;
        pool.install(|| {
            (0..shards)
                .into_par_iter()
                .map(|first| {
                    if stop_early && first > best.load(Ordering::Relaxed) {
                        return None;
                    }
                    let r = run(first);
                    if r.failure.is_some() {
                        best.fetch_min(first, Ordering::Relaxed);
                    }
                    Some(r)
                })
                .collect()
        })
    };

    let mut min_count = usize::MAX;
    let mut failure = None;
    for r in results.into_iter().flatten() {
        min_count = min_count.min(r.min_count);
        if r.failure.is_some() {
            failure = r.failure;
            if stop_early {
                break;
            }
        }
    }
    // In full-report mode later shards may fail too; the first one kept above
    // is the smallest, because shards are reduced in order.
    let complete = failure.is_none() || !stop_early;
    Ok(ScanResult { failure, min_count, k, signed, complete })
}

/// A counting argument showing that no tournament of this order can have
/// the property, if one applies.
///
/// * weak S_k: a vertex `v` of in-degree `d <= (n-1)/2` exists; if `d < k`,
///   the targets `{v} ∪ in(v)` (padded to k) have no common dominator, so
///   `n >= 2k + 1` is necessary.
/// * strong S_{k,m}: for fixed targets every other vertex realises exactly
///   one of the `2^k` sign vectors, so `n - k >= m·2^k` is necessary.
pub fn counting_obstruction(order: usize, variant: Variant, k: usize, m: usize) -> Option<String> {
    match variant {
        Variant::Weak if order < 2 * k + 1 => {
            Some(format!("weak S_{k} needs order >= 2k + 1 = {}, got {order}", 2 * k + 1))
        }
        Variant::Strong | Variant::StrongWithMultiplicity => {
            let m = if variant == Variant::Strong { 1 } else { m };
            let need = 1u128.checked_shl(k as u32).map(|p| p * m as u128);
            match need {
                Some(need) if (order.saturating_sub(k) as u128) >= need => None,
                _ => Some(format!("strong S_{{{k},{m}}} needs order - k >= m·2^k, got order {order}")),
            }
        }
        _ => None,
    }
}

/// The quantities `g(a, b)` and `h(a, b)`:
/// `Σ_x Π_j (1 + b_j·χ(x − a_j))` over `x ∉ A` and over all residues.
pub fn g_h_values(q: &QrModulus, pattern: &DominationPattern) -> Result<(i64, i64)> {
    let p = q.p();
    for &a in &pattern.targets {
        if a as u64 >= p {
            return Err(Error::VertexOutOfRange { vertex: a, order: p as usize });
        }
    }
    for (i, &a) in pattern.targets.iter().enumerate() {
        if pattern.targets[..i].contains(&a) {
            return Err(Error::DuplicateTarget(a));
        }
    }
    let mut g = 0i64;
    let mut h = 0i64;
    for x in 0..p {
        let term: i64 = pattern
            .targets
            .iter()
            .zip(&pattern.signs)
            .map(|(&a, &s)| 1 + (s.value() * q.chi_diff(x, a as u64)) as i64)
            .product();
        h += term;
        if !pattern.targets.contains(&(x as usize)) {
            g += term;
        }
    }
    Ok((g, h))
}
