//! BW-automorphisms: involutive, color-swapping automorphisms moving every
//! vertex at distance at least 3. A graph with one is a draw (`Ls = Rs = 0`),
//! since the second player can always answer `u` with `phi(u)`.

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::graph::{members, singleton, GroundGraph, VertexColor, VertexSet};
use crate::solver::{ScorePair, Solver};
use crate::{Error, Result, Score};

/// Largest graph the mirror simulation accepts.
pub const MIRROR_MAX_VERTICES: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexMapping {
    pub image: Vec<usize>,
}

impl VertexMapping {
    pub fn new(image: Vec<usize>) -> Self {
        VertexMapping { image }
    }

    pub fn apply(&self, v: usize) -> usize {
        self.image[v]
    }

    pub fn apply_set(&self, set: VertexSet) -> VertexSet {
        members(set).fold(0, |acc, v| acc | singleton(self.image[v]))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("vectors always serialize")
    }
}

/// The four defining conditions, checked independently.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BwCheck {
    /// A bijection mapping edges to edges and non-edges to non-edges.
    pub automorphism: bool,
    pub involution: bool,
    pub color_swap: bool,
    /// `d(v, phi(v)) >= 3` for every vertex.
    pub distance: bool,
}

impl BwCheck {
    pub fn holds(&self) -> bool {
        self.automorphism && self.involution && self.color_swap && self.distance
    }
}

pub fn verify_bw(g: &GroundGraph, m: &VertexMapping) -> BwCheck {
    let n = g.vertex_count();
    if m.image.len() != n || m.image.iter().any(|&w| w >= n) {
        return BwCheck {
            automorphism: false,
            involution: false,
            color_swap: false,
            distance: false,
        };
    }
    let mut hit = vec![false; n];
    for &w in &m.image {
        hit[w] = true;
    }
    let bijective = hit.iter().all(|&h| h);
    let edges_kept = (0..n).all(|u| (0..n).all(|v| g.has_edge(u, v) == g.has_edge(m.apply(u), m.apply(v))));
    let involution = (0..n).all(|v| m.apply(m.apply(v)) == v);
    let color_swap = (0..n).all(|v| g.color(m.apply(v)) == g.color(v).opposite());
    let dist = g.distances();
    let distance = (0..n).all(|v| dist[v][m.apply(v)].is_none_or(|d| d >= 3));
    BwCheck {
        automorphism: bijective && edges_kept,
        involution,
        color_swap,
        distance,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum BwSearch {
    Found {
        mapping: VertexMapping,
        nodes: u64,
    },
    /// The whole search space was explored.
    ProvenAbsent {
        nodes: u64,
    },
    BudgetExhausted {
        nodes: u64,
    },
}

impl BwSearch {
    pub fn mapping(&self) -> Option<&VertexMapping> {
        match self {
            BwSearch::Found { mapping, .. } => Some(mapping),
            _ => None,
        }
    }
}

struct Search<'a> {
    g: &'a GroundGraph,
    order: Vec<usize>,
    /// Allowed images of each vertex before any assignment.
    allowed: Vec<VertexSet>,
    image: Vec<Option<usize>>,
    assigned: VertexSet,
    nodes: u64,
    budget: u64,
}

enum Step {
    Found,
    Exhausted,
    OutOfBudget,
}

impl Search<'_> {
    fn run(&mut self, depth: usize) -> Step {
        let Some(&v) = self.order[depth..].iter().find(|&&v| self.image[v].is_none()) else {
            return Step::Found;
        };
        // images of v's mapped neighbors must be exactly w's mapped neighbors
        let want =
            members(self.g.neighbor_mask(v) & self.assigned).fold(0, |acc, u| acc | singleton(self.image[u].unwrap()));
        let candidates = self.allowed[v] & !self.assigned;
        for w in members(candidates) {
            if self.g.neighbor_mask(w) & self.assigned != want {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Step::OutOfBudget;
            }
            self.image[v] = Some(w);
            self.image[w] = Some(v);
            self.assigned |= singleton(v) | singleton(w);
            match self.run(depth + 1) {
                Step::Exhausted => {}
                done => return done,
            }
            self.image[v] = None;
            self.image[w] = None;
            self.assigned &= !(singleton(v) | singleton(w));
        }
        Step::Exhausted
    }
}

/// Backtracking search for a BW-automorphism, exploring at most `budget`
/// pair assignments.
///
/// Vertices are assigned in BFS order so that almost every new vertex has a
/// mapped neighbor, which pins its image to a few candidates. Candidates are
/// restricted to the opposite color, the same degree and sorted
/// neighbor-degree profile, and distance at least 3.
pub fn find_bw(g: &GroundGraph, budget: u64) -> BwSearch {
    let n = g.vertex_count();
    if n == 0 {
        return BwSearch::Found {
            mapping: VertexMapping::new(Vec::new()),
            nodes: 0,
        };
    }
    let black = members(g.color_set(VertexColor::Black)).count();
    if 2 * black != n {
        return BwSearch::ProvenAbsent { nodes: 0 };
    }
    let profile: Vec<(usize, Vec<usize>)> = (0..n)
        .map(|v| {
            let mut nd: Vec<usize> = g.neighbors(v).iter().map(|&u| g.degree(u)).collect();
            nd.sort_unstable();
            (g.degree(v), nd)
        })
        .collect();
    let dist = g.distances();
    let allowed = (0..n)
        .map(|v| {
            (0..n)
                .filter(|&w| g.color(w) != g.color(v) && profile[w] == profile[v] && dist[v][w].is_none_or(|d| d >= 3))
                .fold(0, |acc, w| acc | singleton(w))
        })
        .collect();
    let mut search = Search {
        g,
        order: bfs_order(g),
        allowed,
        image: vec![None; n],
        assigned: 0,
        nodes: 0,
        budget,
    };
    match search.run(0) {
        Step::Found => {
            let mapping = VertexMapping::new(search.image.iter().map(|w| w.unwrap()).collect());
            debug_assert!(verify_bw(g, &mapping).holds());
            BwSearch::Found {
                mapping,
                nodes: search.nodes,
            }
        }
        Step::Exhausted => BwSearch::ProvenAbsent { nodes: search.nodes },
        Step::OutOfBudget => BwSearch::BudgetExhausted { nodes: search.budget },
    }
}

fn bfs_order(g: &GroundGraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut head = order.len();
        order.push(s);
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
    }
    order
}

/// Outcome of replaying the mirror strategy against every line of the
/// first player.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MirrorReport {
    /// Distinct symmetric positions visited.
    pub positions: usize,
    /// Extreme final scores over all lines, Left first then Right first.
    pub left_first: (Score, Score),
    pub right_first: (Score, Score),
    pub failure: Option<String>,
}

impl MirrorReport {
    pub fn holds(&self) -> bool {
        self.failure.is_none() && self.left_first == (0, 0) && self.right_first == (0, 0)
    }
}

/// Plays the unstripped game on `g`: the first player tries every move,
/// the second always answers with the image of the first player's vertex.
/// Each exchange must be legal and score 0 on its own.
pub fn mirror_simulation(g: &GroundGraph, m: &VertexMapping) -> Result<MirrorReport> {
    let n = g.vertex_count();
    if n > MIRROR_MAX_VERTICES {
        return Err(Error::InvalidArgument(format!(
            "mirror simulation is limited to {MIRROR_MAX_VERTICES} vertices, got {n}"
        )));
    }
    if !verify_bw(g, m).holds() {
        return Err(Error::InvalidArgument("mapping is not a BW-automorphism".into()));
    }
    let mut report = MirrorReport {
        positions: 0,
        left_first: (0, 0),
        right_first: (0, 0),
        failure: None,
    };
    let mut seen = FxHashSet::default();
    for first in [VertexColor::Black, VertexColor::White] {
        let mut memo = FxHashMap::default();
        let range = mirror_range(g, m, g.vertices(), first, &mut memo, &mut report.failure);
        seen.extend(memo.into_keys());
        match first {
            VertexColor::Black => report.left_first = range,
            VertexColor::White => report.right_first = range,
        }
    }
    report.positions = seen.len();
    Ok(report)
}

/// (min, max) of the final score from `alive` under the mirror answer.
fn mirror_range(
    g: &GroundGraph,
    m: &VertexMapping,
    alive: VertexSet,
    first: VertexColor,
    memo: &mut FxHashMap<VertexSet, (Score, Score)>,
    failure: &mut Option<String>,
) -> (Score, Score) {
    if let Some(&r) = memo.get(&alive) {
        return r;
    }
    let mut range: Option<(Score, Score)> = None;
    for u in members(alive & g.color_set(first)) {
        let taken = g.removal_closure(alive, u);
        let after = alive & !taken;
        let answer = m.apply(u);
        if after & singleton(answer) == 0 {
            failure.get_or_insert_with(|| format!("answer {answer} to {u} is not available"));
            continue;
        }
        let answered = g.removal_closure(after, answer);
        let gain = first.sign() * (taken.count_ones() as Score - answered.count_ones() as Score);
        if gain != 0 || m.apply_set(taken) != answered {
            failure.get_or_insert_with(|| format!("exchange {u}/{answer} is not symmetric"));
        }
        let (lo, hi) = mirror_range(g, m, after & !answered, first, memo, failure);
        range = Some(match range {
            None => (lo + gain, hi + gain),
            Some((a, b)) => (a.min(lo + gain), b.max(hi + gain)),
        });
    }
    // a symmetric position without moves for `first` is empty
    let r = range.unwrap_or((0, 0));
    memo.insert(alive, r);
    r
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DrawCertificate {
    pub search: BwSearch,
    /// Condition results for the found mapping.
    pub checks: Option<BwCheck>,
    /// Exact scores, when solving was requested.
    pub scores: Option<ScorePair>,
    /// Mirror replay, for found mappings on small graphs.
    pub mirror: Option<MirrorReport>,
}

impl DrawCertificate {
    /// A mapping was found, verified, and nothing computed contradicts a draw.
    pub fn certified(&self) -> bool {
        self.checks.is_some_and(|c| c.holds())
            && self.scores.is_none_or(|s| s == ScorePair { ls: 0, rs: 0 })
            && self.mirror.as_ref().is_none_or(|r| r.holds())
    }
}

/// Searches for a BW-automorphism and, with `solver`, cross-checks the
/// claimed draw by an exact solve.
pub fn certify_draw(g: &GroundGraph, budget: u64, solver: Option<&Solver>) -> Result<DrawCertificate> {
    let search = find_bw(g, budget);
    let checks = search.mapping().map(|m| verify_bw(g, m));
    let mirror = match search.mapping() {
        Some(m) if g.vertex_count() <= MIRROR_MAX_VERTICES => Some(mirror_simulation(g, m)?),
        _ => None,
    };
    let scores = match solver {
        Some(s) => Some(s.scores(&crate::graph::Position::from_graph(g.clone()))?),
        None => None,
    };
    Ok(DrawCertificate {
        search,
        checks,
        scores,
        mirror,
    })
}
