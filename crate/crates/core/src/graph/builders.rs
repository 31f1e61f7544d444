//! Named graph families.
//!
//! Rectangular layouts index vertex `(i, j)` (row `i`, column `j`, both from
//! zero) as `i * cols + j`, and color it Black iff `i + j` is even.

use super::{GroundGraph, VertexColor, MAX_VERTICES};
use crate::{Error, Result};

fn checkerboard(i: usize, j: usize) -> VertexColor {
    if (i + j).is_multiple_of(2) {
        VertexColor::Black
    } else {
        VertexColor::White
    }
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_VERTICES {
        Err(Error::Capacity(n))
    } else {
        Ok(())
    }
}

impl GroundGraph {
    /// Path `S_len` on `|len|` vertices; the first vertex is Black iff `len > 0`.
    pub fn segment(len: i32) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidArgument("segment length must be nonzero".into()));
        }
        let n = len.unsigned_abs() as usize;
        check_size(n)?;
        let first = if len > 0 {
            VertexColor::Black
        } else {
            VertexColor::White
        };
        let colors = (0..n)
            .map(|i| if i % 2 == 0 { first } else { first.opposite() })
            .collect();
        Ok(GroundGraph::new(colors, (1..n).map(|i| (i - 1, i)))?.with_name(format!("S_{len}")))
    }

    /// Rectangular grid `G_{rows,cols}` with a Black top-left corner.
    pub fn grid(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument("grid dimensions must be positive".into()));
        }
        check_size(rows * cols)?;
        let colors = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| checkerboard(i, j)))
            .collect();
        let mut edges = Vec::new();
        for i in 0..rows {
            for j in 0..cols {
                let v = i * cols + j;
                if j + 1 < cols {
                    edges.push((v, v + 1));
                }
                if i + 1 < rows {
                    edges.push((v, v + cols));
                }
            }
        }
        Ok(GroundGraph::new(colors, edges)?.with_name(format!("G_{{{rows},{cols}}}")))
    }

    /// Hypercube `H_dim`; vertex ids are the bit strings, Black iff the
    /// popcount is odd.
    pub fn hypercube(dim: u32) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("hypercube dimension must be at least 1".into()));
        }
        if dim > 20 {
            return Err(Error::InvalidArgument(format!("hypercube dimension {dim} exceeds 20")));
        }
        let n = 1usize << dim;
        check_size(n)?;
        let colors = (0..n)
            .map(|v| {
                if v.count_ones() % 2 == 1 {
                    VertexColor::Black
                } else {
                    VertexColor::White
                }
            })
            .collect();
        let edges = (0..n).flat_map(|v| (0..dim).map(move |b| (v, v ^ (1 << b))).filter(|&(u, w)| u < w));
        Ok(GroundGraph::new(colors, edges)?.with_name(format!("H_{dim}")))
    }

    /// Cylinder `C_{n,m}`: `n` rows wrapping around, `m` columns.
    pub fn cylinder(n: usize, m: usize) -> Result<Self> {
        if !n.is_multiple_of(2) || n < 4 {
            return Err(Error::InvalidArgument(format!(
                "cylinder needs an even number of rows >= 4, got {n}"
            )));
        }
        if m == 0 {
            return Err(Error::InvalidArgument("cylinder needs at least one column".into()));
        }
        Self::wrapped(n, m, false).map(|g| g.with_name(format!("C_{{{n},{m}}}")))
    }

    /// Torus `T_{n,m}`: both coordinates wrap around.
    pub fn torus(n: usize, m: usize) -> Result<Self> {
        if !n.is_multiple_of(2) || !m.is_multiple_of(2) || n < 4 || m < 4 {
            return Err(Error::InvalidArgument(format!(
                "torus needs even dimensions >= 4, got {n}x{m}"
            )));
        }
        Self::wrapped(n, m, true).map(|g| g.with_name(format!("T_{{{n},{m}}}")))
    }

    fn wrapped(n: usize, m: usize, wrap_columns: bool) -> Result<Self> {
        check_size(n * m)?;
        let colors = (0..n).flat_map(|i| (0..m).map(move |j| checkerboard(i, j))).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..m {
                let v = i * m + j;
                edges.push((v, ((i + 1) % n) * m + j));
                if j + 1 < m {
                    edges.push((v, v + 1));
                } else if wrap_columns {
                    edges.push((v, i * m));
                }
            }
        }
        GroundGraph::new(colors, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::members;

    #[test]
    fn segment_colors() {
        let s = GroundGraph::segment(-7).unwrap();
        assert_eq!(s.vertex_count(), 7);
        assert_eq!(s.color(0), VertexColor::White);
        assert_eq!(s.color(6), VertexColor::White);
        assert_eq!(s.edge_count(), 6);
        let s1 = GroundGraph::segment(1).unwrap();
        assert_eq!(s1.vertex_count(), 1);
        assert_eq!(s1.color(0), VertexColor::Black);
        assert!(GroundGraph::segment(0).is_err());
    }

    #[test]
    fn negated_s2_is_s2() {
        let s2 = GroundGraph::segment(2).unwrap();
        let neg = s2.negated();
        assert!(s2.is_negation_of(s2.vertices(), &s2, s2.vertices()));
        assert_eq!(neg.path_length(neg.vertices()), s2.path_length(s2.vertices()));
    }

    #[test]
    fn grid_shapes() {
        let g = GroundGraph::grid(2, 7).unwrap();
        assert_eq!(g.vertex_count(), 14);
        assert_eq!(g.edge_count(), 19);
        assert_eq!(members(g.color_set(VertexColor::White)).count(), 7);
        let g = GroundGraph::grid(3, 8).unwrap();
        assert_eq!(g.vertex_count(), 24);
        assert_eq!(g.edge_count(), 3 * 7 + 2 * 8);
        let line = GroundGraph::grid(1, 9).unwrap();
        assert_eq!(line.path_length(line.vertices()), Some(9));
    }

    #[test]
    fn hypercube_counts() {
        let h4 = GroundGraph::hypercube(4).unwrap();
        assert_eq!((h4.vertex_count(), h4.edge_count()), (16, 32));
        assert_eq!(h4.color_set(VertexColor::Black).count_ones(), 8);
        let h3 = GroundGraph::hypercube(3).unwrap();
        assert_eq!((h3.vertex_count(), h3.edge_count()), (8, 12));
        assert_eq!(h3.color_set(VertexColor::Black).count_ones(), 4);
        let h1 = GroundGraph::hypercube(1).unwrap();
        assert_eq!(h1.color(1), VertexColor::Black);
        assert_eq!(h1.color(0), VertexColor::White);
        assert!(GroundGraph::hypercube(8).is_err());
        assert!(GroundGraph::hypercube(21).is_err());
    }

    #[test]
    fn cylinder_and_torus_counts() {
        let t = GroundGraph::torus(4, 6).unwrap();
        assert_eq!((t.vertex_count(), t.edge_count()), (24, 48));
        let c = GroundGraph::cylinder(4, 6).unwrap();
        assert_eq!(c.edge_count(), 44);
        let t44 = GroundGraph::torus(4, 4).unwrap();
        assert!((0..16).all(|v| t44.degree(v) == 4));
        for (n, m) in [(4, 3), (6, 5), (8, 2)] {
            assert_eq!(GroundGraph::cylinder(n, m).unwrap().edge_count(), 2 * n * m - n);
        }
        for (n, m) in [(4, 8), (6, 6)] {
            assert_eq!(GroundGraph::torus(n, m).unwrap().edge_count(), 2 * n * m);
        }
        assert!(GroundGraph::cylinder(5, 4).is_err());
        assert!(GroundGraph::torus(4, 5).is_err());
    }
}
