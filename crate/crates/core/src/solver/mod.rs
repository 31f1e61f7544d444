//! Exact Left and Right scores of positions.
//!
//! The search is a memoized minimax over removal sets. Each side is solved
//! lazily: `Ls` of a position only needs `Rs` of its children, so the table
//! keeps the two scores of a key in separate slots.

mod diagnostics;
mod sum;

use std::sync::atomic::{AtomicU64, Ordering};

use dashmap::DashMap;
use rayon::prelude::*;
use rustc_hash::FxBuildHasher;
use serde::{Deserialize, Serialize};

use crate::graph::{CanonicalKey, Position, RemovalSet, VertexColor};
use crate::{Error, Result, Score};

pub use diagnostics::{gift_bounds_check, milnor_audit, reference_scores, GiftReport, MilnorReport, MilnorViolation};
pub use sum::{cancel_negative_pairs, score_of_sum};

/// Default bound on node expansions per query.
pub const DEFAULT_NODE_LIMIT: u64 = 100_000_000;

/// Scores with Left (resp. Right) moving first, offset included.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScorePair {
    pub ls: Score,
    pub rs: Score,
}

impl ScorePair {
    pub fn shift(self, s: Score) -> Self {
        ScorePair {
            ls: self.ls + s,
            rs: self.rs + s,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    /// Skip moves whose removal set is strictly inside another's.
    pub prune: bool,
    /// Expansions allowed per query before [`Error::BudgetExhausted`].
    pub node_limit: u64,
    /// Workers for root moves; 1 searches sequentially.
    pub threads: usize,
    /// Let positions made of paths share segment normal-form keys.
    pub segment_keys: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            prune: true,
            node_limit: DEFAULT_NODE_LIMIT,
            threads: 1,
            segment_keys: true,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub entries: usize,
    pub expansions: u64,
    pub hits: u64,
}

const UNKNOWN: Score = Score::MIN;

/// Score solver with a shared transposition table.
///
/// Table values are offset-free and final, so concurrent inserts of one key
/// always write the same value.
pub struct Solver {
    config: SolverConfig,
    table: DashMap<CanonicalKey, [Score; 2], FxBuildHasher>,
    expansions: AtomicU64,
    hits: AtomicU64,
}

impl Default for Solver {
    fn default() -> Self {
        Self::new(SolverConfig::default())
    }
}

struct Budget {
    used: AtomicU64,
    limit: u64,
}

impl Budget {
    fn new(limit: u64) -> Self {
        Budget {
            used: AtomicU64::new(0),
            limit,
        }
    }

    fn spend(&self) -> Result<()> {
        if self.used.fetch_add(1, Ordering::Relaxed) >= self.limit {
            Err(Error::BudgetExhausted(self.limit))
        } else {
            Ok(())
        }
    }
}

impl Solver {
    pub fn new(config: SolverConfig) -> Self {
        Solver {
            config,
            table: DashMap::with_hasher(FxBuildHasher),
            expansions: AtomicU64::new(0),
            hits: AtomicU64::new(0),
        }
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn stats(&self) -> SearchStats {
        SearchStats {
            entries: self.table.len(),
            expansions: self.expansions.load(Ordering::Relaxed),
            hits: self.hits.load(Ordering::Relaxed),
        }
    }

    pub fn clear(&self) {
        self.table.clear();
    }

    pub fn left_score(&self, p: &Position) -> Result<Score> {
        self.root(p, VertexColor::Black)
    }

    pub fn right_score(&self, p: &Position) -> Result<Score> {
        self.root(p, VertexColor::White)
    }

    pub fn scores(&self, p: &Position) -> Result<ScorePair> {
        Ok(ScorePair {
            ls: self.left_score(p)?,
            rs: self.right_score(p)?,
        })
    }

    /// Moves of `mover`, pruned when configured, largest removal first.
    pub fn ordered_moves(&self, p: &Position, mover: VertexColor) -> Vec<RemovalSet> {
        let moves = p.legal_moves(mover);
        let mut moves = if self.config.prune {
            prune_dominated(&moves)
        } else {
            moves
        };
        moves.sort_by(|a, b| b.size().cmp(&a.size()).then(a.played.cmp(&b.played)));
        moves
    }

    fn key(&self, p: &Position) -> CanonicalKey {
        if self.config.segment_keys {
            p.canonical_key()
        } else {
            p.vertex_key()
        }
    }

    fn root(&self, p: &Position, mover: VertexColor) -> Result<Score> {
        let p = p.strip_isolated();
        let offset = p.offset();
        let p = p.with_offset(0);
        let budget = Budget::new(self.config.node_limit);
        if self.config.threads <= 1 || p.is_empty() {
            return Ok(offset + self.side(&p, mover, &budget)?);
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.config.threads)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        let moves = self.ordered_moves(&p, mover);
        let values: Vec<Score> = pool.install(|| {
            moves
                .par_iter()
                .map(|mv| self.child_value(&p, mv, mover, &budget))
                .collect::<Result<_>>()
        })?;
        let best = match mover {
            VertexColor::Black => values.into_iter().max(),
            VertexColor::White => values.into_iter().min(),
        };
        let best = best.expect("nonempty positions have moves for both players");
        self.store(self.key(&p), mover, best);
        Ok(offset + best)
    }

    fn child_value(&self, p: &Position, mv: &RemovalSet, mover: VertexColor, budget: &Budget) -> Result<Score> {
        let child = p.play(mv);
        Ok(child.offset() + self.side(&child.with_offset(0), mover.opposite(), budget)?)
    }

    /// Offset-free score of `p` with `mover` to play.
    fn side(&self, p: &Position, mover: VertexColor, budget: &Budget) -> Result<Score> {
        if p.is_empty() {
            return Ok(0);
        }
        let slot = slot(mover);
        let key = self.key(p);
        if let Some(entry) = self.table.get(&key) {
            if entry[slot] != UNKNOWN {
                self.hits.fetch_add(1, Ordering::Relaxed);
                return Ok(entry[slot]);
            }
        }
        budget.spend()?;
        self.expansions.fetch_add(1, Ordering::Relaxed);
        let mut best: Option<Score> = None;
        for mv in self.ordered_moves(p, mover) {
            let v = self.child_value(p, &mv, mover, budget)?;
            best = Some(match (best, mover) {
                (None, _) => v,
                (Some(b), VertexColor::Black) => b.max(v),
                (Some(b), VertexColor::White) => b.min(v),
            });
        }
        let best = best.expect("stripped nonempty positions have moves for both players");
        self.store(key, mover, best);
        Ok(best)
    }

    fn store(&self, key: CanonicalKey, mover: VertexColor, value: Score) {
        self.table.entry(key).or_insert([UNKNOWN; 2])[slot(mover)] = value;
    }
}

fn slot(mover: VertexColor) -> usize {
    match mover {
        VertexColor::Black => 0,
        VertexColor::White => 1,
    }
}

/// Drops every move whose removed set is a strict subset of another's and
/// keeps the first of each group of equal sets.
pub fn prune_dominated(moves: &[RemovalSet]) -> Vec<RemovalSet> {
    let mut kept = Vec::with_capacity(moves.len());
    for (i, a) in moves.iter().enumerate() {
        let dominated = moves
            .iter()
            .enumerate()
            .any(|(j, b)| j != i && a.removed & !b.removed == 0 && (a.removed != b.removed || j < i));
        if !dominated {
            kept.push(*a);
        }
    }
    kept
}
