//! Ground graphs and positions of BIPARTITE INFLUENCE.
//!
//! A [`GroundGraph`] is an immutable bicolored bipartite graph with at most
//! [`MAX_VERTICES`] vertices. Vertex sets over a ground graph are `u128`
//! bit masks, so a [`Position`] is a ground-graph handle, one mask and a
//! banked score offset.

mod builders;
mod io;
mod position;

use std::collections::VecDeque;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::{Error, Result, Score};

pub use io::GraphFile;
pub use position::{CanonicalKey, Position, RemovalSet};

/// Hard capacity of a ground graph (one `u128` alive set).
pub const MAX_VERTICES: usize = 128;

/// Set of vertex ids of one ground graph.
pub type VertexSet = u128;

/// Black is Left's color, White is Right's.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VertexColor {
    #[serde(rename = "B")]
    Black,
    #[serde(rename = "W")]
    White,
}

impl VertexColor {
    pub fn opposite(self) -> Self {
        match self {
            VertexColor::Black => VertexColor::White,
            VertexColor::White => VertexColor::Black,
        }
    }

    /// +1 for Black (Left), -1 for White (Right).
    pub fn sign(self) -> Score {
        match self {
            VertexColor::Black => 1,
            VertexColor::White => -1,
        }
    }
}

/// Iterator over the members of a [`VertexSet`], in increasing order.
#[derive(Clone, Copy, Debug)]
pub struct Members(VertexSet);

impl Iterator for Members {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}

pub fn members(set: VertexSet) -> Members {
    Members(set)
}

pub fn singleton(v: usize) -> VertexSet {
    1u128 << v
}

pub fn set_of(vertices: impl IntoIterator<Item = usize>) -> VertexSet {
    vertices.into_iter().fold(0, |acc, v| acc | singleton(v))
}

fn full_set(n: usize) -> VertexSet {
    if n == MAX_VERTICES {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

static NEXT_GRAPH_ID: AtomicU64 = AtomicU64::new(1);

/// Immutable bicolored bipartite graph.
#[derive(Clone, Debug)]
pub struct GroundGraph {
    id: u64,
    name: Option<String>,
    colors: Vec<VertexColor>,
    adjacency: Vec<Vec<usize>>,
    neighbor_masks: Vec<VertexSet>,
    black: VertexSet,
}

impl GroundGraph {
    /// Builds a graph from vertex colors and an edge list.
    ///
    /// Every edge must join a Black vertex to a White vertex; self-loops,
    /// repeated edges and more than [`MAX_VERTICES`] vertices are rejected.
    pub fn new(colors: Vec<VertexColor>, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let n = colors.len();
        if n > MAX_VERTICES {
            return Err(Error::Capacity(n));
        }
        let mut neighbor_masks = vec![0u128; n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) references a vertex outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop on vertex {u}")));
            }
            if colors[u] == colors[v] {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) joins two vertices of the same color"
                )));
            }
            if neighbor_masks[u] & singleton(v) != 0 {
                return Err(Error::InvalidGraph(format!("parallel edge ({u}, {v})")));
            }
            neighbor_masks[u] |= singleton(v);
            neighbor_masks[v] |= singleton(u);
        }
        let adjacency = neighbor_masks.iter().map(|&m| members(m).collect()).collect();
        let black = set_of((0..n).filter(|&v| colors[v] == VertexColor::Black));
        Ok(GroundGraph {
            id: NEXT_GRAPH_ID.fetch_add(1, Ordering::Relaxed),
            name: None,
            colors,
            adjacency,
            neighbor_masks,
            black,
        })
    }

    pub fn empty() -> Self {
        Self::new(Vec::new(), []).expect("empty graph is valid")
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Process-unique identity, used by transposition-table keys.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn vertex_count(&self) -> usize {
        self.colors.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn color(&self, v: usize) -> VertexColor {
        self.colors[v]
    }

    pub fn colors(&self) -> &[VertexColor] {
        &self.colors
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn neighbor_mask(&self, v: usize) -> VertexSet {
        self.neighbor_masks[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbor_masks[u] & singleton(v) != 0
    }

    pub fn vertices(&self) -> VertexSet {
        full_set(self.vertex_count())
    }

    pub fn color_set(&self, color: VertexColor) -> VertexSet {
        match color {
            VertexColor::Black => self.black,
            VertexColor::White => self.vertices() & !self.black,
        }
    }

    /// Edges as `(u, v)` pairs with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.vertex_count())
            .flat_map(|u| self.adjacency[u].iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect()
    }

    /// The same graph with colors exchanged (the negative game).
    pub fn negated(&self) -> GroundGraph {
        let colors = self.colors.iter().map(|c| c.opposite()).collect();
        let mut g = GroundGraph::new(colors, self.edges()).expect("color swap keeps validity");
        g.name = self.name.as_ref().map(|n| format!("-({n})"));
        g
    }

    /// Disjoint union; returns the union and the id offset of every input.
    pub fn disjoint_union(parts: &[&GroundGraph]) -> Result<(GroundGraph, Vec<usize>)> {
        let mut colors = Vec::new();
        let mut edges = Vec::new();
        let mut offsets = Vec::with_capacity(parts.len());
        for g in parts {
            let base = colors.len();
            offsets.push(base);
            colors.extend_from_slice(&g.colors);
            edges.extend(g.edges().into_iter().map(|(u, v)| (u + base, v + base)));
        }
        Ok((GroundGraph::new(colors, edges)?, offsets))
    }

    /// Subgraph induced by `set`, with vertices renumbered in increasing order.
    pub fn induced(&self, set: VertexSet) -> GroundGraph {
        let kept: Vec<usize> = members(set & self.vertices()).collect();
        let mut index = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in kept.iter().enumerate() {
            index[v] = i;
        }
        let colors = kept.iter().map(|&v| self.colors[v]).collect();
        let edges = self
            .edges()
            .into_iter()
            .filter(|&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|(u, v)| (index[u], index[v]));
        GroundGraph::new(colors, edges).expect("induced subgraph keeps validity")
    }

    /// All-pairs BFS distances; `None` between different components.
    pub fn distances(&self) -> Vec<Vec<Option<u32>>> {
        let n = self.vertex_count();
        let mut all = Vec::with_capacity(n);
        for s in 0..n {
            let mut dist = vec![None; n];
            dist[s] = Some(0);
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                let d = dist[u].unwrap();
                for &w in &self.adjacency[u] {
                    if dist[w].is_none() {
                        dist[w] = Some(d + 1);
                        queue.push_back(w);
                    }
                }
            }
            all.push(dist);
        }
        all
    }

    /// Vertices of `alive` with no neighbor in `alive`.
    pub fn isolated(&self, alive: VertexSet) -> VertexSet {
        members(alive)
            .filter(|&v| self.neighbor_masks[v] & alive == 0)
            .fold(0, |acc, v| acc | singleton(v))
    }

    /// Removal closure of playing `v` in `alive`: `v`, its alive neighbors and
    /// the same-colored vertices left without alive neighbors.
    pub fn removal_closure(&self, alive: VertexSet, v: usize) -> VertexSet {
        let removed = singleton(v) | (self.neighbor_masks[v] & alive);
        let mut second = 0u128;
        for u in members(self.neighbor_masks[v] & alive) {
            second |= self.neighbor_masks[u];
        }
        second &= alive & !removed;
        let rest = alive & !removed;
        let mut closure = removed;
        for w in members(second) {
            if self.neighbor_masks[w] & rest == 0 {
                closure |= singleton(w);
            }
        }
        closure
    }

    /// Connected component of `v` inside `alive`.
    pub fn component_of(&self, alive: VertexSet, v: usize) -> VertexSet {
        let mut comp = singleton(v) & alive;
        let mut frontier = comp;
        while frontier != 0 {
            let mut next = 0u128;
            for u in members(frontier) {
                next |= self.neighbor_masks[u];
            }
            next &= alive & !comp;
            comp |= next;
            frontier = next;
        }
        comp
    }

    /// Connected components of `alive`, ordered by lowest vertex.
    pub fn components(&self, alive: VertexSet) -> Vec<VertexSet> {
        let mut rest = alive & self.vertices();
        let mut out = Vec::new();
        while rest != 0 {
            let comp = self.component_of(rest, rest.trailing_zeros() as usize);
            out.push(comp);
            rest &= !comp;
        }
        out
    }

    /// Signed segment length of a connected vertex set if it induces a path
    /// of at least two vertices: positive when an odd path has Black ends,
    /// and always positive for even paths.
    pub fn path_length(&self, comp: VertexSet) -> Option<i32> {
        let k = comp.count_ones() as usize;
        if k < 2 {
            return None;
        }
        let mut degree_sum = 0usize;
        let mut end = None;
        for v in members(comp) {
            let d = (self.neighbor_masks[v] & comp).count_ones() as usize;
            if d > 2 {
                return None;
            }
            if d == 1 {
                end = Some(v);
            }
            degree_sum += d;
        }
        if degree_sum != 2 * (k - 1) {
            return None;
        }
        let end = end?;
        let k = k as i32;
        if k % 2 == 0 {
            Some(k)
        } else {
            Some(k * self.colors[end].sign())
        }
    }

    /// Whether the subgraph induced by `mine` is isomorphic to the one
    /// induced by `theirs` in `other` through a map that exchanges colors.
    pub fn is_negation_of(&self, mine: VertexSet, other: &GroundGraph, theirs: VertexSet) -> bool {
        let a: Vec<usize> = members(mine).collect();
        let b: Vec<usize> = members(theirs).collect();
        if a.len() != b.len() {
            return false;
        }
        let black_a = (mine & self.black).count_ones();
        let white_b = (theirs & !other.black).count_ones();
        if black_a != white_b {
            return false;
        }
        let deg = |g: &GroundGraph, set: VertexSet, v: usize| (g.neighbor_masks[v] & set).count_ones();
        let mut da: Vec<_> = a.iter().map(|&v| deg(self, mine, v)).collect();
        let mut db: Vec<_> = b.iter().map(|&v| deg(other, theirs, v)).collect();
        da.sort_unstable();
        db.sort_unstable();
        if da != db {
            return false;
        }
        let mut image = vec![usize::MAX; self.vertex_count()];
        let mut used = 0u128;
        negation_search(self, &a, mine, other, theirs, 0, &mut image, &mut used)
    }
}

#[allow(clippy::too_many_arguments)]
fn negation_search(
    g: &GroundGraph,
    order: &[usize],
    mine: VertexSet,
    h: &GroundGraph,
    theirs: VertexSet,
    depth: usize,
    image: &mut [usize],
    used: &mut u128,
) -> bool {
    let Some(&v) = order.get(depth) else {
        return true;
    };
    let dv = (g.neighbor_masks[v] & mine).count_ones();
    for w in members(theirs & !*used) {
        if h.colors[w] != g.colors[v].opposite() || (h.neighbor_masks[w] & theirs).count_ones() != dv {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&u| g.has_edge(u, v) == h.has_edge(image[u], w));
        if !consistent {
            continue;
        }
        image[v] = w;
        *used |= singleton(w);
        if negation_search(g, order, mine, h, theirs, depth + 1, image, used) {
            return true;
        }
        *used &= !singleton(w);
    }
    false
}
