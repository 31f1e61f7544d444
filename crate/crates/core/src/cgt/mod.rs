//! Short scoring games in Milnor's universe.
//!
//! Games live in a hash-consing [`GameStore`]: every structurally distinct
//! game is stored once and named by a [`GameId`], so sums, negatives and
//! scores of repeated components are computed once. Option lists are kept
//! sorted and deduplicated, which makes structural equality an id test.

mod build;
mod notation;

use std::collections::hash_map::Entry;

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::{Error, Result, Scalar};

pub use build::DEFAULT_TREE_LIMIT;
pub use notation::GameTree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GameId(u32);

impl GameId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// One interned game.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Game<S> {
    Number(S),
    Node { left: Box<[GameId]>, right: Box<[GameId]> },
}

/// First failure found by [`GameStore::milnor_audit`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditFailure<S> {
    pub game: GameId,
    pub ls: S,
    pub rs: S,
}

pub struct GameStore<S: Scalar> {
    games: Vec<Game<S>>,
    index: FxHashMap<Game<S>, GameId>,
    sums: FxHashMap<(GameId, GameId), GameId>,
    negatives: FxHashMap<GameId, GameId>,
    scores: FxHashMap<GameId, (S, S)>,
    lengths: FxHashMap<GameId, u32>,
    simplified: FxHashMap<GameId, GameId>,
    tree_limit: usize,
    pub(crate) positions: FxHashMap<(u64, u128, i32), GameId>,
    pub(crate) segment_trees: FxHashMap<Vec<i32>, GameId>,
}

impl<S: Scalar> Default for GameStore<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> GameStore<S> {
    pub fn new() -> Self {
        GameStore {
            games: Vec::new(),
            index: FxHashMap::default(),
            sums: FxHashMap::default(),
            negatives: FxHashMap::default(),
            scores: FxHashMap::default(),
            lengths: FxHashMap::default(),
            simplified: FxHashMap::default(),
            tree_limit: DEFAULT_TREE_LIMIT,
            positions: FxHashMap::default(),
            segment_trees: FxHashMap::default(),
        }
    }

    /// Largest position (in alive vertices) that `from_position` expands.
    pub fn set_tree_limit(&mut self, limit: usize) {
        self.tree_limit = limit;
    }

    pub fn tree_limit(&self) -> usize {
        self.tree_limit
    }

    pub fn len(&self) -> usize {
        self.games.len()
    }

    pub fn is_empty(&self) -> bool {
        self.games.is_empty()
    }

    pub fn get(&self, g: GameId) -> &Game<S> {
        &self.games[g.index()]
    }

    fn intern(&mut self, game: Game<S>) -> GameId {
        match self.index.entry(game) {
            Entry::Occupied(e) => *e.get(),
            Entry::Vacant(e) => {
                let id = GameId(self.games.len() as u32);
                self.games.push(e.key().clone());
                e.insert(id);
                id
            }
        }
    }

    pub fn number(&mut self, value: S) -> GameId {
        self.intern(Game::Number(value))
    }

    pub fn integer(&mut self, value: i64) -> GameId {
        self.number(S::from_int(value))
    }

    /// `<left | right>`; both option lists must be nonempty.
    pub fn node(&mut self, left: Vec<GameId>, right: Vec<GameId>) -> Result<GameId> {
        if left.is_empty() || right.is_empty() {
            return Err(Error::NotMilnor("a game node needs options for both players".into()));
        }
        Ok(self.node_unchecked(left, right))
    }

    fn node_unchecked(&mut self, mut left: Vec<GameId>, mut right: Vec<GameId>) -> GameId {
        left.sort_unstable();
        left.dedup();
        right.sort_unstable();
        right.dedup();
        self.intern(Game::Node {
            left: left.into(),
            right: right.into(),
        })
    }

    pub fn as_number(&self, g: GameId) -> Option<&S> {
        match self.get(g) {
            Game::Number(s) => Some(s),
            Game::Node { .. } => None,
        }
    }

    pub fn options(&self, g: GameId) -> (&[GameId], &[GameId]) {
        match self.get(g) {
            Game::Number(_) => (&[], &[]),
            Game::Node { left, right } => (left, right),
        }
    }

    pub fn negate(&mut self, g: GameId) -> GameId {
        if let Some(&n) = self.negatives.get(&g) {
            return n;
        }
        let n = match self.get(g).clone() {
            Game::Number(s) => self.number(-s),
            Game::Node { left, right } => {
                let l = right.iter().map(|&r| self.negate(r)).collect();
                let r = left.iter().map(|&l| self.negate(l)).collect();
                self.node_unchecked(l, r)
            }
        };
        self.negatives.insert(g, n);
        self.negatives.insert(n, g);
        n
    }

    pub fn sum(&mut self, g: GameId, h: GameId) -> GameId {
        let key = if g <= h { (g, h) } else { (h, g) };
        if let Some(&s) = self.sums.get(&key) {
            return s;
        }
        let s = match (self.get(g).clone(), self.get(h).clone()) {
            (Game::Number(a), Game::Number(b)) => self.number(a + b),
            (gg, hh) => {
                let (gl, gr) = split(&gg);
                let (hl, hr) = split(&hh);
                let mut left = Vec::with_capacity(gl.len() + hl.len());
                let mut right = Vec::with_capacity(gr.len() + hr.len());
                for &x in gl {
                    left.push(self.sum(x, h));
                }
                for &x in hl {
                    left.push(self.sum(g, x));
                }
                for &x in gr {
                    right.push(self.sum(x, h));
                }
                for &x in hr {
                    right.push(self.sum(g, x));
                }
                self.node_unchecked(left, right)
            }
        };
        self.sums.insert(key, s);
        s
    }

    /// Sum of all `games`; the empty sum is the number 0.
    pub fn sum_all(&mut self, games: &[GameId]) -> GameId {
        let mut acc = self.integer(0);
        for &g in games {
            acc = self.sum(acc, g);
        }
        acc
    }

    /// `n` copies of `g`.
    pub fn multiple(&mut self, g: GameId, n: usize) -> GameId {
        let copies = vec![g; n];
        self.sum_all(&copies)
    }

    /// `(Ls, Rs)`.
    pub fn scores(&mut self, g: GameId) -> (S, S) {
        if let Some(s) = self.scores.get(&g) {
            return s.clone();
        }
        let s = match self.get(g).clone() {
            Game::Number(s) => (s.clone(), s),
            Game::Node { left, right } => {
                let ls = left
                    .iter()
                    .map(|&l| self.scores(l).1)
                    .max()
                    .expect("nodes have left options");
                let rs = right
                    .iter()
                    .map(|&r| self.scores(r).0)
                    .min()
                    .expect("nodes have right options");
                (ls, rs)
            }
        };
        self.scores.insert(g, s.clone());
        s
    }

    pub fn ls(&mut self, g: GameId) -> S {
        self.scores(g).0
    }

    pub fn rs(&mut self, g: GameId) -> S {
        self.scores(g).1
    }

    /// Longest line of play.
    pub fn length(&mut self, g: GameId) -> u32 {
        if let Some(&l) = self.lengths.get(&g) {
            return l;
        }
        let l = match self.get(g).clone() {
            Game::Number(_) => 0,
            Game::Node { left, right } => {
                1 + left
                    .iter()
                    .chain(right.iter())
                    .map(|&x| self.length(x))
                    .max()
                    .unwrap_or(0)
            }
        };
        self.lengths.insert(g, l);
        l
    }

    /// Every subgame of `g` (including `g`), each once.
    pub fn subgames(&self, g: GameId) -> Vec<GameId> {
        let mut seen = rustc_hash::FxHashSet::default();
        let mut stack = vec![g];
        let mut out = Vec::new();
        while let Some(x) = stack.pop() {
            if seen.insert(x) {
                out.push(x);
                let (l, r) = self.options(x);
                stack.extend_from_slice(l);
                stack.extend_from_slice(r);
            }
        }
        out
    }

    /// Finds a subgame with `Ls < Rs`. Nodes always have options on both
    /// sides, so dicotism holds by construction.
    pub fn milnor_audit(&mut self, g: GameId) -> Option<AuditFailure<S>> {
        let mut all = self.subgames(g);
        all.sort_unstable();
        for x in all {
            let (ls, rs) = self.scores(x);
            if ls < rs {
                return Some(AuditFailure { game: x, ls, rs });
            }
        }
        None
    }

    fn require_milnor(&mut self, g: GameId) -> Result<()> {
        match self.milnor_audit(g) {
            None => Ok(()),
            Some(f) => Err(Error::NotMilnor(format!(
                "subgame {} has Ls = {} < Rs = {}",
                self.display(f.game),
                f.ls,
                f.rs
            ))),
        }
    }

    /// `g - h` has both scores zero. Both games are audited first.
    pub fn equivalent(&mut self, g: GameId, h: GameId) -> Result<bool> {
        self.require_milnor(g)?;
        self.require_milnor(h)?;
        Ok(self.equivalent_unchecked(g, h))
    }

    /// [`GameStore::equivalent`] without the audit; meaningless outside the
    /// universe.
    pub fn equivalent_unchecked(&mut self, g: GameId, h: GameId) -> bool {
        if g == h {
            return true;
        }
        let nh = self.negate(h);
        let d = self.sum(g, nh);
        let zero = S::zero();
        let (ls, rs) = self.scores(d);
        ls == zero && rs == zero
    }

    /// `Rs(g - h) >= 0`.
    pub fn dominates(&mut self, g: GameId, h: GameId) -> bool {
        let nh = self.negate(h);
        let d = self.sum(g, nh);
        self.rs(d) >= S::zero()
    }

    /// Removes, recursively, each Left option dominated by a remaining
    /// sibling and each Right option dominating a remaining sibling.
    pub fn simplify(&mut self, g: GameId) -> GameId {
        if let Some(&s) = self.simplified.get(&g) {
            return s;
        }
        let s = match self.get(g).clone() {
            Game::Number(_) => g,
            Game::Node { left, right } => {
                let left: Vec<GameId> = left.iter().map(|&x| self.simplify(x)).collect();
                let right: Vec<GameId> = right.iter().map(|&x| self.simplify(x)).collect();
                let left = self.prune_options(dedup(left), true);
                let right = self.prune_options(dedup(right), false);
                self.node_unchecked(left, right)
            }
        };
        self.simplified.insert(g, s);
        self.simplified.insert(s, s);
        s
    }

    fn prune_options(&mut self, mut opts: Vec<GameId>, left: bool) -> Vec<GameId> {
        let mut i = 0;
        while i < opts.len() {
            let x = opts[i];
            let beaten = (0..opts.len()).any(|j| {
                j != i && {
                    let y = opts[j];
                    if left {
                        self.dominates(y, x)
                    } else {
                        self.dominates(x, y)
                    }
                }
            });
            if beaten && opts.len() > 1 {
                opts.remove(i);
            } else {
                i += 1;
            }
        }
        opts
    }

    pub fn display(&self, g: GameId) -> String {
        let mut out = String::new();
        notation::write_game(self, g, &mut out);
        out
    }

    pub fn parse(&mut self, text: &str) -> Result<GameId> {
        notation::parse(self, text)
    }
}

fn split<S>(g: &Game<S>) -> (&[GameId], &[GameId]) {
    match g {
        Game::Number(_) => (&[], &[]),
        Game::Node { left, right } => (left, right),
    }
}

fn dedup(mut v: Vec<GameId>) -> Vec<GameId> {
    v.sort_unstable();
    v.dedup();
    v
}
