//! Generators shared by the acceptance and property suites.

#![allow(dead_code)]

use influence_core::graph::{members, GroundGraph, VertexColor, VertexSet};
use rand::Rng;

/// Graph whose vertex `i` is Black iff `black[i]`; `bits` lists candidate
/// edges in `(i, j), i < j` order and only opposite-color pairs are kept.
pub fn graph_from_bits(black: &[bool], bits: &[bool]) -> GroundGraph {
    let n = black.len();
    let colors: Vec<VertexColor> = black
        .iter()
        .map(|&b| if b { VertexColor::Black } else { VertexColor::White })
        .collect();
    let mut edges = Vec::new();
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            if bits.get(k).copied().unwrap_or(false) && black[i] != black[j] {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    GroundGraph::new(colors, edges).expect("opposite-color edges form a valid graph")
}

/// Number of candidate edges [`graph_from_bits`] reads for `n` vertices.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Random bicolored bipartite graph on `1..=max_n` vertices.
pub fn random_graph<R: Rng>(rng: &mut R, max_n: usize) -> GroundGraph {
    let n = rng.gen_range(1..=max_n);
    let density = rng.gen_range(0.2..0.8);
    let black: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    let bits: Vec<bool> = (0..pair_count(n)).map(|_| rng.gen_bool(density)).collect();
    graph_from_bits(&black, &bits)
}

/// Uniform random subset of `set`.
pub fn random_subset<R: Rng>(rng: &mut R, set: VertexSet) -> VertexSet {
    members(set)
        .filter(|_| rng.gen_bool(0.5))
        .fold(0, |acc, v| acc | (1u128 << v))
}

/// Random segment multiset: `1..=max_parts` nonzero parts with `|n| <= max_len`.
pub fn random_parts<R: Rng>(rng: &mut R, max_len: i32, max_parts: usize) -> Vec<i32> {
    let k = rng.gen_range(1..=max_parts);
    (0..k)
        .map(|_| {
            let n = rng.gen_range(1..=max_len);
            if rng.gen_bool(0.5) {
                n
            } else {
                -n
            }
        })
        .collect()
}
