use super::{GameId, GameStore};
use crate::graph::{Position, VertexColor};
use crate::segments::{segment_moves, SegmentSum};
use crate::{Error, Result, Scalar};

/// Default largest position expanded into a game tree.
pub const DEFAULT_TREE_LIMIT: usize = 16;

impl<S: Scalar> GameStore<S> {
    /// Full game tree of a position; leaves carry the final scores.
    pub fn from_position(&mut self, p: &Position) -> Result<GameId> {
        let p = p.strip_isolated();
        if p.vertex_count() > self.tree_limit() {
            return Err(Error::Capacity(p.vertex_count()));
        }
        Ok(self.position_tree(&p))
    }

    fn position_tree(&mut self, p: &Position) -> GameId {
        let key = (p.ground().id(), p.alive(), p.offset());
        if let Some(&g) = self.positions.get(&key) {
            return g;
        }
        let g = if p.is_empty() {
            self.integer(p.offset() as i64)
        } else {
            let left = p
                .legal_moves(VertexColor::Black)
                .iter()
                .map(|mv| self.position_tree(&p.play(mv)))
                .collect();
            let right = p
                .legal_moves(VertexColor::White)
                .iter()
                .map(|mv| self.position_tree(&p.play(mv)))
                .collect();
            self.node(left, right).expect("stripped positions are dicotic")
        };
        self.positions.insert(key, g);
        g
    }

    /// Game tree of a segment sum, built from the arithmetic move generator.
    /// Parts are only sorted and sign-normalized, never cancelled, so the
    /// tree is the literal game.
    pub fn from_segments(&mut self, s: &SegmentSum) -> GameId {
        let (parts, banked) = literal_form(&s.parts);
        let body = self.segment_tree(parts);
        let n = self.integer((banked + s.offset) as i64);
        self.sum(body, n)
    }

    fn segment_tree(&mut self, parts: Vec<i32>) -> GameId {
        if let Some(&g) = self.segment_trees.get(&parts) {
            return g;
        }
        let g = if parts.is_empty() {
            self.integer(0)
        } else {
            let mut sides = [Vec::new(), Vec::new()];
            for (side, mover) in [VertexColor::Black, VertexColor::White].into_iter().enumerate() {
                for (j, &part) in parts.iter().enumerate() {
                    if j > 0 && parts[j - 1] == part {
                        continue;
                    }
                    for mv in segment_moves(part, mover) {
                        let mut rest: Vec<i32> = parts
                            .iter()
                            .enumerate()
                            .filter(|&(i, _)| i != j)
                            .map(|(_, &x)| x)
                            .collect();
                        rest.extend(mv.pieces.iter().copied().filter(|&x| x != 0));
                        let (child, absorbed) = literal_form(&rest);
                        let sub = self.segment_tree(child);
                        let bonus = self.integer((mv.gain + absorbed) as i64);
                        sides[side].push(self.sum(sub, bonus));
                    }
                }
            }
            let [left, right] = sides;
            self.node(left, right)
                .expect("segments of length >= 2 give both players moves")
        };
        self.segment_trees.insert(parts, g);
        g
    }
}

/// Sorted parts with even lengths made positive and single vertices banked.
fn literal_form(parts: &[i32]) -> (Vec<i32>, i32) {
    let mut banked = 0;
    let mut out = Vec::with_capacity(parts.len());
    for &n in parts {
        match n.abs() {
            0 => {}
            1 => banked += n,
            m if m % 2 == 0 => out.push(m),
            _ => out.push(n),
        }
    }
    out.sort_unstable();
    (out, banked)
}
