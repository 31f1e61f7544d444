use std::sync::atomic::{AtomicU64, Ordering};

use dashmap::DashMap;
use rayon::prelude::*;
use rustc_hash::FxBuildHasher;
use smallvec::SmallVec;

use super::{reduce_parts, segment_moves, SegmentSum, TableRow};
use crate::graph::VertexColor;
use crate::solver::{ScorePair, DEFAULT_NODE_LIMIT};
use crate::{Error, Result, Score};

type Key = SmallVec<[i16; 12]>;

/// Bounds wider than any reachable score.
const INF: Score = 1 << 14;

/// Counters of one [`SegmentSolver`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct SegmentStats {
    pub entries: usize,
    pub expansions: u64,
    pub hits: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SegmentConfig {
    /// Key sums by [`SegmentSum::rewrite_42`] rather than the plain
    /// canonical form.
    pub rewrite_42: bool,
    /// Cut off with the mean/temperature sandwich: a sum with mean `m` has
    /// `m <= Ls <= m + 4` and `m - 4 <= Rs <= m`, where each positive odd
    /// segment has mean in `[0, 1]`, each negative one in `[-1, 0]` and
    /// even ones 0. Turn off to check those bounds independently.
    pub mean_bounds: bool,
    /// Memo misses allowed over the solver's lifetime.
    pub node_limit: u64,
}

impl Default for SegmentConfig {
    fn default() -> Self {
        SegmentConfig {
            rewrite_42: true,
            mean_bounds: true,
            node_limit: DEFAULT_NODE_LIMIT,
        }
    }
}

/// A memo record: `lo <= Ls <= hi` for the sum of `parts`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemoEntry {
    pub parts: Vec<i32>,
    pub lo: Score,
    pub hi: Score,
}

/// Alpha-beta search over segment sums with a memo of score bounds.
///
/// Only Left scores are stored: `Rs(G) = -Ls(-G)`, and the negative of a
/// normal form is again a normal form once re-sorted. Keys carry no offset.
pub struct SegmentSolver {
    config: SegmentConfig,
    memo: DashMap<Key, (i16, i16), FxBuildHasher>,
    expansions: AtomicU64,
    hits: AtomicU64,
}

impl Default for SegmentSolver {
    fn default() -> Self {
        Self::new()
    }
}

impl SegmentSolver {
    pub fn new() -> Self {
        Self::with_config(SegmentConfig::default())
    }

    pub fn with_node_limit(limit: u64) -> Self {
        Self::with_config(SegmentConfig {
            node_limit: limit,
            ..Default::default()
        })
    }

    pub fn with_config(config: SegmentConfig) -> Self {
        SegmentSolver {
            config,
            memo: DashMap::with_hasher(FxBuildHasher),
            expansions: AtomicU64::new(0),
            hits: AtomicU64::new(0),
        }
    }

    pub fn config(&self) -> SegmentConfig {
        self.config
    }

    pub fn set_node_limit(&mut self, limit: u64) {
        self.config.node_limit = limit;
    }

    pub fn stats(&self) -> SegmentStats {
        SegmentStats {
            entries: self.memo.len(),
            expansions: self.expansions.load(Ordering::Relaxed),
            hits: self.hits.load(Ordering::Relaxed),
        }
    }

    fn key_of(&self, s: &SegmentSum) -> Result<(Key, Score)> {
        let (parts, absorbed) = reduce_parts(s.parts.iter().copied(), self.config.rewrite_42);
        Ok((to_key(&parts)?, s.offset + absorbed))
    }

    pub fn scores(&self, s: &SegmentSum) -> Result<ScorePair> {
        let (key, offset) = self.key_of(s)?;
        let ls = offset + self.exact(&key)?;
        let rs = offset - self.exact(&negated(&key))?;
        Ok(ScorePair { ls, rs })
    }

    pub fn left_score(&self, s: &SegmentSum) -> Result<Score> {
        let (key, offset) = self.key_of(s)?;
        Ok(offset + self.exact(&key)?)
    }

    pub fn right_score(&self, s: &SegmentSum) -> Result<Score> {
        Ok(-self.left_score(&s.negate())?)
    }

    /// Rows `1..=max_n`, sharded over `threads` workers sharing the memo.
    pub fn table(&self, max_n: u32, threads: usize) -> Result<Vec<TableRow>> {
        if max_n == 0 {
            return Err(Error::InvalidArgument("table needs max_n >= 1".into()));
        }
        let row = |n: u32| -> Result<TableRow> {
            let s = self.scores(&SegmentSum::single(n as i32))?;
            Ok(TableRow { n, ls: s.ls, rs: s.rs })
        };
        if threads <= 1 {
            return (1..=max_n).map(row).collect();
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        pool.install(|| (1..=max_n).into_par_iter().map(row).collect())
    }

    /// Memo contents, sorted by parts.
    pub fn entries(&self) -> Vec<MemoEntry> {
        let mut out: Vec<_> = self
            .memo
            .iter()
            .map(|e| MemoEntry {
                parts: e.key().iter().map(|&p| p as i32).collect(),
                lo: e.value().0 as Score,
                hi: e.value().1 as Score,
            })
            .collect();
        out.sort_by(|a, b| a.parts.cmp(&b.parts));
        out
    }

    /// Seeds the memo, intersecting with what is already known. Entries must
    /// come from a solver of the same rules; keys not in this solver's
    /// normal form are rejected.
    pub fn insert_entries(&self, entries: impl IntoIterator<Item = MemoEntry>) -> Result<()> {
        for e in entries {
            let (normal, absorbed) = reduce_parts(e.parts.iter().copied(), self.config.rewrite_42);
            if normal != e.parts || absorbed != 0 || e.lo > e.hi {
                return Err(Error::Parse(format!("cache entry {:?} is not a normal form", e.parts)));
            }
            let key = to_key(&e.parts)?;
            self.tighten(&key, e.lo, e.hi);
        }
        Ok(())
    }

    fn tighten(&self, key: &[i16], lo: Score, hi: Score) {
        let (lo, hi) = (clamp16(lo), clamp16(hi));
        self.memo
            .entry(Key::from_slice(key))
            .and_modify(|b| *b = (b.0.max(lo), b.1.min(hi)))
            .or_insert((lo, hi));
    }

    fn exact(&self, key: &[i16]) -> Result<Score> {
        let v = self.search(key, -INF, INF)?;
        debug_assert!(self.known(key).is_none_or(|(lo, hi)| lo == hi));
        Ok(v)
    }

    fn known(&self, key: &[i16]) -> Option<(Score, Score)> {
        self.memo.get(key).map(|b| (b.0 as Score, b.1 as Score))
    }

    /// Static bounds on `Ls` of a nonempty normal form.
    fn static_bounds(&self, key: &[i16]) -> (Score, Score) {
        if !self.config.mean_bounds {
            return (-INF, INF);
        }
        let pos = key.iter().filter(|&&p| p % 2 != 0 && p > 0).count() as Score;
        let neg = key.iter().filter(|&&p| p % 2 != 0 && p < 0).count() as Score;
        (-neg, pos + 4)
    }

    /// Fail-soft negamax on `Ls(key)` within `(alpha, beta)`: a result `<=
    /// alpha` is an upper bound, one `>= beta` a lower bound, anything in
    /// between is exact.
    fn search(&self, key: &[i16], alpha: Score, beta: Score) -> Result<Score> {
        if key.is_empty() {
            return Ok(0);
        }
        let (lo, hi) = match self.known(key) {
            Some(b) => {
                self.hits.fetch_add(1, Ordering::Relaxed);
                b
            }
            None => self.static_bounds(key),
        };
        if lo == hi || lo >= beta {
            return Ok(lo);
        }
        if hi <= alpha {
            return Ok(hi);
        }
        let used = self.expansions.fetch_add(1, Ordering::Relaxed) + 1;
        if used > self.config.node_limit {
            return Err(Error::BudgetExhausted(self.config.node_limit));
        }
        let (a, b) = (alpha.max(lo), beta.min(hi));
        let mut children = self.children(key);
        // big captures first
        children.sort_by_key(|c| std::cmp::Reverse(c.0));
        let mut best = -INF;
        let mut floor = a;
        for (gain, child) in children {
            let v = gain - self.search(&child, gain - b, gain - floor)?;
            best = best.max(v);
            if best >= b {
                break;
            }
            floor = floor.max(best);
        }
        if best <= a {
            self.tighten(key, lo, best);
        } else if best >= b {
            self.tighten(key, best, hi);
        } else {
            self.tighten(key, best, best);
        }
        Ok(best)
    }

    /// Left moves of `key` as `(gain, negated child key)`; end moves of
    /// segments with at least 4 vertices are skipped, since the move two
    /// steps in removes a superset.
    fn children(&self, key: &[i16]) -> Vec<(Score, Key)> {
        let mut out = Vec::new();
        let mut rest: Vec<i32> = Vec::with_capacity(key.len() + 1);
        for (j, &part) in key.iter().enumerate() {
            if j > 0 && key[j - 1] == part {
                continue;
            }
            let len = part.unsigned_abs() as u32;
            for mv in segment_moves(part as i32, VertexColor::Black) {
                if len >= 4 && (mv.index == 0 || mv.index == len - 1) {
                    continue;
                }
                rest.clear();
                rest.extend(key.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &p)| p as i32));
                rest.extend(mv.pieces.iter().copied().filter(|&p| p != 0));
                let (child, absorbed) = reduce_parts(rest.iter().copied(), self.config.rewrite_42);
                let mut neg: Key = child.iter().map(|&p| negate16(p as i16)).collect();
                neg.sort_unstable();
                out.push((mv.gain + absorbed, neg));
            }
        }
        out
    }
}

fn clamp16(v: Score) -> i16 {
    v.clamp(i16::MIN as Score, i16::MAX as Score) as i16
}

fn negate16(p: i16) -> i16 {
    if p % 2 == 0 {
        p
    } else {
        -p
    }
}

fn negated(key: &[i16]) -> Key {
    let mut k: Key = key.iter().map(|&p| negate16(p)).collect();
    k.sort_unstable();
    k
}

fn to_key(parts: &[i32]) -> Result<Key> {
    parts
        .iter()
        .map(|&p| i16::try_from(p).map_err(|_| Error::InvalidArgument(format!("segment length {p} too large"))))
        .collect()
}
