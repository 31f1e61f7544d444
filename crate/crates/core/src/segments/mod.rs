//! Sums of segments.
//!
//! A segment `S_n` is an alternating path on `|n|` vertices whose first
//! vertex is Black iff `n > 0`. Odd segments are signed by their end color,
//! even segments satisfy `S_{2k} = S_{-2k}` and are always stored positive.
//! The solver in this module never builds graphs; moves are derived from the
//! played index alone.

mod cache;
mod engine;
mod table;

use std::collections::BTreeMap;
use std::fmt;

use crate::graph::VertexColor;
use crate::{Error, Result, Score};

pub use cache::{load_cache, save_cache, CACHE_MAGIC, CACHE_VERSION};
pub use engine::{MemoEntry, SegmentConfig, SegmentSolver, SegmentStats};
pub use table::{
    move_audit, periodicity_scan, sum_bound_check, table_from_csv, table_to_csv, BoundReport, MoveAuditReport,
    PeriodicityReport, TableRow,
};

/// Multiset of signed segment lengths plus banked score.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SegmentSum {
    pub parts: Vec<i32>,
    pub offset: Score,
}

impl SegmentSum {
    pub fn new(parts: impl Into<Vec<i32>>, offset: Score) -> Self {
        SegmentSum {
            parts: parts.into(),
            offset,
        }
    }

    pub fn single(n: i32) -> Self {
        SegmentSum {
            parts: vec![n],
            offset: 0,
        }
    }

    /// Absorbs `|n| = 1` parts, makes even parts positive, cancels opposite
    /// pairs and sorts.
    pub fn canonicalize(&self) -> SegmentSum {
        let (parts, absorbed) = reduce_parts(self.parts.iter().copied(), false);
        SegmentSum {
            parts,
            offset: self.offset + absorbed,
        }
    }

    /// Replaces every `S_{4k+2}` (`k >= 1`) by `S_{4k} + S_2`, then
    /// canonicalizes.
    pub fn rewrite_42(&self) -> SegmentSum {
        let (parts, absorbed) = reduce_parts(self.parts.iter().copied(), true);
        SegmentSum {
            parts,
            offset: self.offset + absorbed,
        }
    }

    /// The memo key form: [`SegmentSum::rewrite_42`] of the canonical sum.
    pub fn normal_form(&self) -> SegmentSum {
        self.rewrite_42()
    }

    pub fn negate(&self) -> SegmentSum {
        SegmentSum {
            parts: self.parts.iter().map(|&n| negate_part(n)).collect(),
            offset: -self.offset,
        }
    }

    /// Number of odd parts of length at least 3.
    pub fn odd_parts(&self) -> usize {
        self.parts.iter().filter(|&&n| n % 2 != 0 && n.abs() > 1).count()
    }

    pub fn total_vertices(&self) -> u32 {
        self.parts.iter().map(|n| n.unsigned_abs()).sum()
    }

    /// Parses `"5,5,-3"`; an empty string is the empty sum.
    pub fn parse(text: &str) -> Result<SegmentSum> {
        let mut parts = Vec::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let n: i32 = item
                .parse()
                .map_err(|_| Error::Parse(format!("bad segment length {item:?}")))?;
            if n == 0 {
                return Err(Error::InvalidArgument("segment length must be nonzero".into()));
            }
            parts.push(n);
        }
        Ok(SegmentSum { parts, offset: 0 })
    }
}

impl fmt::Display for SegmentSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, n) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, "}}")?;
        if self.offset != 0 {
            write!(f, " {:+}", self.offset)?;
        }
        Ok(())
    }
}

fn negate_part(n: i32) -> i32 {
    if n % 2 == 0 {
        n
    } else {
        -n
    }
}

/// Shared normalization; returns the reduced parts and the score absorbed
/// from single vertices.
fn reduce_parts(parts: impl Iterator<Item = i32>, rewrite: bool) -> (Vec<i32>, Score) {
    let mut absorbed = 0;
    // net multiplicity per magnitude: odd parts count with their sign
    let mut net: BTreeMap<i32, i32> = BTreeMap::new();
    let mut add = |n: i32| {
        let m = n.abs();
        if m % 2 == 0 {
            *net.entry(m).or_default() ^= 1;
        } else {
            *net.entry(m).or_default() += n.signum();
        }
    };
    for n in parts {
        match n.abs() {
            0 => {}
            1 => absorbed += n,
            m if rewrite && m % 4 == 2 && m > 2 => {
                add(m - 2);
                add(2);
            }
            m if m % 2 == 0 => add(m),
            _ => add(n),
        }
    }
    let mut out = Vec::new();
    for (m, count) in net {
        let sign = if m % 2 == 0 { 1 } else { count.signum() };
        out.extend(std::iter::repeat_n(sign * m, count.unsigned_abs() as usize));
    }
    out.sort_unstable();
    (out, absorbed)
}

/// Segment normal form of raw parts and the score absorbed from `|n| = 1`.
pub fn normal_form(parts: &[i32]) -> (Vec<i32>, Score) {
    reduce_parts(parts.iter().copied(), true)
}

/// A move inside one part of a segment sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SegmentMove {
    /// Index of the played vertex along the segment, from its first vertex.
    pub index: u32,
    /// Removed vertex count, signed by the mover.
    pub gain: Score,
    /// Remaining pieces (0 = none), signed segment lengths.
    pub pieces: [i32; 2],
}

/// Color of vertex `i` of `S_n`.
pub fn vertex_color(n: i32, i: u32) -> VertexColor {
    if i.is_multiple_of(2) == (n > 0) {
        VertexColor::Black
    } else {
        VertexColor::White
    }
}

/// Moves of `mover` in `S_n`. On odd segments the reflection preserves
/// colors, so only one vertex of each mirror pair is listed.
pub fn segment_moves(n: i32, mover: VertexColor) -> Vec<SegmentMove> {
    let len = n.unsigned_abs();
    let sign = mover.sign();
    let mut out = Vec::new();
    for i in 0..len {
        if len % 2 == 1 && len - 1 - i < i {
            break;
        }
        if vertex_color(n, i) != mover {
            continue;
        }
        let left = i.saturating_sub(1);
        let right = (len - i).saturating_sub(2);
        let piece = |k: u32| -> i32 {
            match k {
                0 | 1 => 0,
                k if k % 2 == 0 => k as i32,
                k => sign * k as i32,
            }
        };
        let pieces = [piece(left), piece(right)];
        let kept = pieces[0].unsigned_abs() + pieces[1].unsigned_abs();
        out.push(SegmentMove {
            index: i,
            gain: sign * (len - kept) as Score,
            pieces,
        });
    }
    out
}
