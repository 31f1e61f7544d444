use std::sync::Arc;

use super::{ScorePair, Solver};
use crate::graph::{GroundGraph, Position};
use crate::{Result, Score};

/// Components larger than this are never matched as negative pairs.
const MATCH_LIMIT: u32 = 10;

/// Removes pairs of components that are negatives of each other. Paths are
/// matched by signed length, other components of at most ten vertices by a
/// color-swapping isomorphism test.
pub fn cancel_negative_pairs(comps: Vec<Position>) -> Vec<Position> {
    let lengths: Vec<Option<i32>> = comps.iter().map(|c| c.ground().path_length(c.alive())).collect();
    let mut gone = vec![false; comps.len()];
    for i in 0..comps.len() {
        if gone[i] {
            continue;
        }
        for j in (i + 1)..comps.len() {
            if gone[j] {
                continue;
            }
            let matched = match (lengths[i], lengths[j]) {
                (Some(a), Some(b)) => {
                    if a % 2 == 0 {
                        a == b
                    } else {
                        a == -b
                    }
                }
                (None, None) => {
                    let (a, b) = (&comps[i], &comps[j]);
                    a.vertex_count() as u32 <= MATCH_LIMIT
                        && a.ground().is_negation_of(a.alive(), b.ground(), b.alive())
                }
                _ => false,
            };
            if matched {
                gone[i] = true;
                gone[j] = true;
                break;
            }
        }
    }
    comps
        .into_iter()
        .zip(gone)
        .filter(|(_, g)| !g)
        .map(|(c, _)| c)
        .collect()
}

/// Scores of the disjunctive sum of `parts`.
///
/// Offsets are added up, negative component pairs cancelled, and the rest is
/// searched jointly as one disjoint union.
pub fn score_of_sum(solver: &Solver, parts: &[Position]) -> Result<ScorePair> {
    let mut offset: Score = 0;
    let mut comps = Vec::new();
    for p in parts {
        let p = p.strip_isolated();
        offset += p.offset();
        comps.extend(p.components());
    }
    let rest = cancel_negative_pairs(comps);
    if rest.is_empty() {
        return Ok(ScorePair { ls: offset, rs: offset });
    }
    let graphs: Vec<GroundGraph> = rest.iter().map(|c| c.ground().induced(c.alive())).collect();
    let refs: Vec<&GroundGraph> = graphs.iter().collect();
    let (union, _) = GroundGraph::disjoint_union(&refs)?;
    let p = Position::full(Arc::new(union));
    Ok(solver.scores(&p)?.shift(offset))
}
