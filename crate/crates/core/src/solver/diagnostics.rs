use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::{ScorePair, Solver};
use crate::graph::{members, Position, VertexColor, VertexSet};
use crate::{Error, Result, Score};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MilnorViolation {
    pub alive: String,
    pub kind: &'static str,
    pub ls: Score,
    pub rs: Score,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MilnorReport {
    pub positions: usize,
    pub depth: u32,
    pub violation: Option<MilnorViolation>,
}

impl MilnorReport {
    pub fn clean(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks every position reachable from `p` in at most `depth` moves:
/// Left can move iff Right can, and `Ls >= Rs`. Stops at the first failure.
pub fn milnor_audit(solver: &Solver, p: &Position, depth: u32) -> Result<MilnorReport> {
    let root = p.strip_isolated();
    let mut seen = HashSet::new();
    let mut stack = vec![(root.clone(), 0u32)];
    let mut positions = 0;
    while let Some((q, d)) = stack.pop() {
        if !seen.insert(q.alive()) {
            continue;
        }
        positions += 1;
        let left = q.legal_moves(VertexColor::Black);
        let right = q.legal_moves(VertexColor::White);
        let s = solver.scores(&q)?;
        let kind = if left.is_empty() != right.is_empty() {
            Some("not dicotic")
        } else if s.ls < s.rs {
            Some("zugzwang")
        } else {
            None
        };
        if let Some(kind) = kind {
            return Ok(MilnorReport {
                positions,
                depth,
                violation: Some(MilnorViolation {
                    alive: format!("{:#x}", q.alive()),
                    kind,
                    ls: s.ls,
                    rs: s.rs,
                }),
            });
        }
        if d < depth {
            for mv in left.iter().chain(&right) {
                stack.push((q.play(mv), d + 1));
            }
        }
    }
    Ok(MilnorReport {
        positions,
        depth,
        violation: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GiftInequality {
    pub label: &'static str,
    pub lhs: Score,
    pub rhs: Score,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GiftReport {
    pub scores: ScorePair,
    pub inequalities: Vec<GiftInequality>,
}

impl GiftReport {
    pub fn holds(&self) -> bool {
        self.inequalities.iter().all(|i| i.holds)
    }
}

/// Compares `p` with the positions where Black vertices `black_gift` or
/// White vertices `white_gift` were removed without scoring:
///
/// 1. `Ls(G) <= Ls(G - W0) + |W0|`
/// 2. `Rs(G) >= Rs(G - B0) - |B0|`
/// 3. `Ls(G) >= Ls(G - B0) - |B0|`
/// 4. `Rs(G) <= Rs(G - W0) + |W0|`
pub fn gift_bounds_check(
    solver: &Solver,
    p: &Position,
    black_gift: VertexSet,
    white_gift: VertexSet,
) -> Result<GiftReport> {
    let p = p.strip_isolated();
    let g = p.ground();
    if black_gift & !p.alive() != 0 || white_gift & !p.alive() != 0 {
        return Err(Error::InvalidArgument("gift vertices must be alive".into()));
    }
    if black_gift & !g.color_set(VertexColor::Black) != 0 || white_gift & !g.color_set(VertexColor::White) != 0 {
        return Err(Error::InvalidArgument("gift vertices have the wrong color".into()));
    }
    let b0 = black_gift.count_ones() as Score;
    let w0 = white_gift.count_ones() as Score;
    let base = solver.scores(&p)?;
    let without_b = solver.scores(&p.without(black_gift))?;
    let without_w = solver.scores(&p.without(white_gift))?;
    let row = |label, lhs: Score, rhs: Score, holds: bool| GiftInequality { label, lhs, rhs, holds };
    let inequalities = vec![
        row(
            "Ls(G) <= Ls(G-W0)+|W0|",
            base.ls,
            without_w.ls + w0,
            base.ls <= without_w.ls + w0,
        ),
        row(
            "Rs(G) >= Rs(G-B0)-|B0|",
            base.rs,
            without_b.rs - b0,
            base.rs >= without_b.rs - b0,
        ),
        row(
            "Ls(G) >= Ls(G-B0)-|B0|",
            base.ls,
            without_b.ls - b0,
            base.ls >= without_b.ls - b0,
        ),
        row(
            "Rs(G) <= Rs(G-W0)+|W0|",
            base.rs,
            without_w.rs + w0,
            base.rs <= without_w.rs + w0,
        ),
    ];
    Ok(GiftReport {
        scores: base,
        inequalities,
    })
}

/// Scores by plain minimax in which isolated vertices stay on the board as
/// ordinary moves. When the player to move has no vertex left, the rest
/// (all of the other color, hence isolated) goes to its owner.
pub fn reference_scores(p: &Position) -> ScorePair {
    let mut memo = HashMap::new();
    let ls = reference(p, p.alive(), VertexColor::Black, &mut memo);
    let rs = reference(p, p.alive(), VertexColor::White, &mut memo);
    ScorePair {
        ls: p.offset() + ls,
        rs: p.offset() + rs,
    }
}

fn reference(
    p: &Position,
    alive: VertexSet,
    mover: VertexColor,
    memo: &mut HashMap<(VertexSet, VertexColor), Score>,
) -> Score {
    if let Some(&v) = memo.get(&(alive, mover)) {
        return v;
    }
    let g = p.ground();
    let own = alive & g.color_set(mover);
    let value = if own == 0 {
        members(alive).map(|v| g.color(v).sign()).sum()
    } else {
        let values = members(own).map(|v| {
            let removed = g.removal_closure(alive, v);
            removed.count_ones() as Score * mover.sign() + reference(p, alive & !removed, mover.opposite(), memo)
        });
        match mover {
            VertexColor::Black => values.max(),
            VertexColor::White => values.min(),
        }
        .expect("own is nonempty")
    };
    memo.insert((alive, mover), value);
    value
}
