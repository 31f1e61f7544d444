use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::{members, singleton, GroundGraph, VertexColor, VertexSet};
use crate::segments;
use crate::{Error, Result, Score};

/// Outcome of playing one vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RemovalSet {
    pub played: usize,
    pub removed: VertexSet,
    /// Number of removed vertices, negative for White moves.
    pub gain: Score,
}

impl RemovalSet {
    pub fn size(&self) -> u32 {
        self.removed.count_ones()
    }
}

/// Transposition-table identity of a position, offset excluded.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CanonicalKey {
    /// Every component is a path: the segment normal form of the parts.
    Segments(Box<[i32]>),
    Vertices {
        graph: u64,
        alive: VertexSet,
    },
}

/// Alive vertices of a ground graph plus the score banked so far.
///
/// Constructors strip isolated vertices, so an alive vertex always has an
/// alive neighbor. [`Position::raw`] skips this for reference computations.
#[derive(Clone)]
pub struct Position {
    ground: Arc<GroundGraph>,
    alive: VertexSet,
    offset: Score,
}

impl fmt::Debug for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Position")
            .field("graph", &self.ground.name().unwrap_or("?"))
            .field("alive", &format_args!("{:#x}", self.alive))
            .field("offset", &self.offset)
            .finish()
    }
}

impl PartialEq for Position {
    fn eq(&self, other: &Self) -> bool {
        self.ground.id() == other.ground.id() && self.alive == other.alive && self.offset == other.offset
    }
}

impl Eq for Position {}

impl Position {
    pub fn new(ground: Arc<GroundGraph>, alive: VertexSet, offset: Score) -> Self {
        Self::raw(ground, alive, offset).strip_isolated()
    }

    /// Position without the stripping step.
    pub fn raw(ground: Arc<GroundGraph>, alive: VertexSet, offset: Score) -> Self {
        let alive = alive & ground.vertices();
        Position { ground, alive, offset }
    }

    /// The whole ground graph, offset 0.
    pub fn full(ground: Arc<GroundGraph>) -> Self {
        let all = ground.vertices();
        Self::new(ground, all, 0)
    }

    pub fn from_graph(g: GroundGraph) -> Self {
        Self::full(Arc::new(g))
    }

    /// The number `offset` as a position on the empty graph.
    pub fn number(offset: Score) -> Self {
        Position {
            ground: Arc::new(GroundGraph::empty()),
            alive: 0,
            offset,
        }
    }

    pub fn ground(&self) -> &Arc<GroundGraph> {
        &self.ground
    }

    pub fn alive(&self) -> VertexSet {
        self.alive
    }

    pub fn offset(&self) -> Score {
        self.offset
    }

    pub fn with_offset(&self, offset: Score) -> Self {
        Position { offset, ..self.clone() }
    }

    pub fn is_empty(&self) -> bool {
        self.alive == 0
    }

    pub fn vertex_count(&self) -> usize {
        self.alive.count_ones() as usize
    }

    pub fn strip_isolated(&self) -> Position {
        let isolated = self.ground.isolated(self.alive);
        let black = (isolated & self.ground.color_set(VertexColor::Black)).count_ones() as Score;
        let white = isolated.count_ones() as Score - black;
        Position {
            ground: Arc::clone(&self.ground),
            alive: self.alive & !isolated,
            offset: self.offset + black - white,
        }
    }

    pub fn removal_closure(&self, v: usize) -> Result<RemovalSet> {
        if v >= self.ground.vertex_count() || self.alive & singleton(v) == 0 {
            return Err(Error::DeadVertex(v));
        }
        let removed = self.ground.removal_closure(self.alive, v);
        let gain = removed.count_ones() as Score * self.ground.color(v).sign();
        Ok(RemovalSet {
            played: v,
            removed,
            gain,
        })
    }

    /// One removal set per alive vertex of `mover`'s color, by vertex id.
    pub fn legal_moves(&self, mover: VertexColor) -> Vec<RemovalSet> {
        let sign = mover.sign();
        members(self.alive & self.ground.color_set(mover))
            .map(|v| {
                let removed = self.ground.removal_closure(self.alive, v);
                RemovalSet {
                    played: v,
                    removed,
                    gain: removed.count_ones() as Score * sign,
                }
            })
            .collect()
    }

    /// Applies a move: banks its gain and strips what became isolated.
    pub fn play(&self, mv: &RemovalSet) -> Position {
        Position::new(
            Arc::clone(&self.ground),
            self.alive & !mv.removed,
            self.offset + mv.gain,
        )
    }

    /// Deletes `set` without scoring it.
    pub fn without(&self, set: VertexSet) -> Position {
        Position::new(Arc::clone(&self.ground), self.alive & !set, self.offset)
    }

    /// Same alive set on the color-swapped graph, offset negated.
    pub fn negate(&self) -> Position {
        Position {
            ground: Arc::new(self.ground.negated()),
            alive: self.alive,
            offset: -self.offset,
        }
    }

    /// Connected components with offset 0, sorted by canonical key.
    pub fn components(&self) -> Vec<Position> {
        let mut parts: Vec<(CanonicalKey, Position)> = self
            .ground
            .components(self.alive)
            .into_iter()
            .map(|c| {
                let p = Position::raw(Arc::clone(&self.ground), c, 0);
                (p.canonical_key(), p)
            })
            .collect();
        parts.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.alive.cmp(&b.1.alive)));
        parts.into_iter().map(|(_, p)| p).collect()
    }

    /// Signed lengths of the components if every component is a path.
    pub fn segment_parts(&self) -> Option<Vec<i32>> {
        let mut parts = Vec::new();
        for comp in self.ground.components(self.alive) {
            if comp.count_ones() == 1 {
                let v = comp.trailing_zeros() as usize;
                parts.push(self.ground.color(v).sign());
            } else {
                parts.push(self.ground.path_length(comp)?);
            }
        }
        Some(parts)
    }

    pub fn canonical_key(&self) -> CanonicalKey {
        match self.segment_parts() {
            Some(parts) => {
                let (normal, _) = segments::normal_form(&parts);
                CanonicalKey::Segments(normal.into_boxed_slice())
            }
            None => self.vertex_key(),
        }
    }

    /// Key that never merges distinct alive sets.
    pub fn vertex_key(&self) -> CanonicalKey {
        CanonicalKey::Vertices {
            graph: self.ground.id(),
            alive: self.alive,
        }
    }

    /// Classes of alive vertices with equal color and equal alive
    /// neighborhood, ordered by smallest member.
    pub fn twin_classes(&self) -> Vec<VertexSet> {
        let mut classes: BTreeMap<(VertexColor, VertexSet), VertexSet> = BTreeMap::new();
        for v in members(self.alive) {
            let key = (self.ground.color(v), self.ground.neighbor_mask(v) & self.alive);
            *classes.entry(key).or_default() |= singleton(v);
        }
        let mut out: Vec<VertexSet> = classes.into_values().collect();
        out.sort_by_key(|c| c.trailing_zeros());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::set_of;

    fn seg(n: i32) -> Position {
        Position::from_graph(GroundGraph::segment(n).unwrap())
    }

    #[test]
    fn closure_examples() {
        let s5 = seg(5);
        let mv = s5.removal_closure(2).unwrap();
        assert_eq!((mv.size(), mv.gain), (5, 5));
        let s2 = seg(2);
        assert_eq!(s2.removal_closure(0).unwrap().gain, 2);
        let g = Position::from_graph(GroundGraph::grid(5, 5).unwrap());
        let center = g.removal_closure(12).unwrap();
        assert_eq!((center.size(), center.gain), (5, 5));
        assert!(matches!(s2.removal_closure(7), Err(Error::DeadVertex(7))));
        let after = s5.play(&mv);
        assert!(matches!(after.removal_closure(0), Err(Error::DeadVertex(0))));
    }

    #[test]
    fn legal_moves_examples() {
        let s2 = seg(2);
        let moves = s2.legal_moves(VertexColor::Black);
        assert_eq!(moves.len(), 1);
        assert_eq!(moves[0].gain, 2);
        let g27 = Position::from_graph(GroundGraph::grid(2, 7).unwrap());
        assert_eq!(g27.legal_moves(VertexColor::White).len(), 7);
        let empty = Position::number(0);
        assert!(empty.legal_moves(VertexColor::Black).is_empty());
        assert!(empty.legal_moves(VertexColor::White).is_empty());
    }

    #[test]
    fn stripping() {
        let g = Arc::new(GroundGraph::new(vec![VertexColor::Black, VertexColor::White], []).unwrap());
        let p = Position::new(g, 0b11, 0);
        assert!(p.is_empty());
        assert_eq!(p.offset(), 0);
        let s1 = seg(1);
        assert!(s1.is_empty());
        assert_eq!(s1.offset(), 1);
        let s5 = seg(5);
        let ends = s5.without(set_of([1, 2, 3]));
        assert!(ends.is_empty());
        assert_eq!(ends.offset(), 2);
        assert_eq!(ends.strip_isolated(), ends);
    }

    #[test]
    fn components_examples() {
        let s7 = seg(7);
        let mv = s7.removal_closure(3).unwrap();
        assert_eq!(mv.size(), 3);
        let parts = s7.play(&mv).components();
        assert_eq!(parts.len(), 2);
        assert!(parts.iter().all(|p| p.vertex_count() == 2));
        assert_eq!(s7.components().len(), 1);
        let (u, _) =
            GroundGraph::disjoint_union(&[&GroundGraph::segment(9).unwrap(), &GroundGraph::segment(2).unwrap()])
                .unwrap();
        let mut sizes: Vec<_> = Position::from_graph(u)
            .components()
            .iter()
            .map(Position::vertex_count)
            .collect();
        sizes.sort();
        assert_eq!(sizes, vec![2, 9]);
    }

    #[test]
    fn canonical_keys() {
        // Both halves of a 2x7 grid contain a Black-ended path of 3 vertices.
        let g = Arc::new(GroundGraph::grid(2, 7).unwrap());
        let row = Position::new(Arc::clone(&g), set_of([0, 1, 2]), 0);
        let col = Position::new(Arc::clone(&g), set_of([1, 8, 9]), 0);
        assert_eq!(row.segment_parts(), Some(vec![3]));
        assert_eq!(col.segment_parts(), Some(vec![-3]));
        let other = Position::new(Arc::clone(&g), set_of([2, 9, 10]), 0);
        assert_eq!(other.segment_parts(), Some(vec![3]));
        assert_eq!(row.canonical_key(), other.canonical_key());
        assert_eq!(row.canonical_key(), row.with_offset(9).canonical_key());
        assert_eq!(seg(2).canonical_key(), seg(-2).canonical_key());
        let whole = Position::full(g);
        assert!(matches!(whole.canonical_key(), CanonicalKey::Vertices { .. }));
    }

    #[test]
    fn twins() {
        let s5 = seg(5);
        assert!(s5.twin_classes().iter().all(|c| c.count_ones() == 1));
        let star = Position::from_graph(
            GroundGraph::new(
                vec![
                    VertexColor::Black,
                    VertexColor::White,
                    VertexColor::White,
                    VertexColor::White,
                ],
                [(0, 1), (0, 2), (0, 3)],
            )
            .unwrap(),
        );
        assert_eq!(star.twin_classes(), vec![0b0001, 0b1110]);
    }

    #[test]
    fn negation_flips_offset_and_colors() {
        let p = seg(3).with_offset(2);
        let n = p.negate();
        assert_eq!(n.offset(), -2);
        assert_eq!(n.segment_parts(), Some(vec![-3]));
    }
}
