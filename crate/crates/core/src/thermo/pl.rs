//! Continuous piecewise-linear functions on `[0, inf)` with exact
//! breakpoints.

use std::fmt;

use serde::Serialize;

use crate::Scalar;

/// `intercept + slope * t` for `t` from `start` up to the next piece.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Piece<S> {
    pub start: S,
    pub intercept: S,
    pub slope: S,
}

impl<S: Scalar> Piece<S> {
    pub fn at(&self, t: &S) -> S {
        self.intercept.clone() + self.slope.clone() * t.clone()
    }
}

/// Pieces are sorted by start, the first starts at 0, the last extends to
/// infinity, and neighbours never share the same line, so equal functions
/// have equal representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PLFunction<S> {
    pieces: Vec<Piece<S>>,
}

impl<S: Scalar> PLFunction<S> {
    pub fn linear(intercept: S, slope: S) -> Self {
        PLFunction {
            pieces: vec![Piece {
                start: S::zero(),
                intercept,
                slope,
            }],
        }
    }

    pub fn constant(value: S) -> Self {
        Self::linear(value, S::zero())
    }

    /// Builds from raw pieces, merging collinear neighbours.
    pub fn from_pieces(pieces: Vec<Piece<S>>) -> Self {
        assert!(
            pieces.first().is_some_and(|p| p.start.is_zero()),
            "a piecewise-linear function starts at t = 0"
        );
        let mut out: Vec<Piece<S>> = Vec::with_capacity(pieces.len());
        for p in pieces {
            if let Some(last) = out.last() {
                assert!(last.start < p.start, "piece starts must increase");
                if last.intercept == p.intercept && last.slope == p.slope {
                    continue;
                }
            }
            out.push(p);
        }
        PLFunction { pieces: out }
    }

    pub fn pieces(&self) -> &[Piece<S>] {
        &self.pieces
    }

    /// Starts of all pieces after the first.
    pub fn breakpoints(&self) -> impl Iterator<Item = &S> {
        self.pieces.iter().skip(1).map(|p| &p.start)
    }

    fn piece_at(&self, t: &S) -> &Piece<S> {
        let i = self.pieces.partition_point(|p| p.start <= *t);
        &self.pieces[i.saturating_sub(1)]
    }

    pub fn eval(&self, t: &S) -> S {
        self.piece_at(t).at(t)
    }

    /// `self(t) + intercept + slope * t`.
    pub fn add_linear(&self, intercept: &S, slope: &S) -> Self {
        PLFunction::from_pieces(
            self.pieces
                .iter()
                .map(|p| Piece {
                    start: p.start.clone(),
                    intercept: p.intercept.clone() + intercept.clone(),
                    slope: p.slope.clone() + slope.clone(),
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        PLFunction {
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece {
                    start: p.start.clone(),
                    intercept: -p.intercept.clone(),
                    slope: -p.slope.clone(),
                })
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let pieces = merged(self, other)
            .into_iter()
            .map(|(start, a, b)| Piece {
                start,
                intercept: a.intercept.clone() + b.intercept.clone(),
                slope: a.slope.clone() + b.slope.clone(),
            })
            .collect();
        PLFunction::from_pieces(pieces)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn max(&self, other: &Self) -> Self {
        self.envelope(other, true)
    }

    pub fn min(&self, other: &Self) -> Self {
        self.envelope(other, false)
    }

    fn envelope(&self, other: &Self, upper: bool) -> Self {
        let segs = merged(self, other);
        let mut pieces = Vec::with_capacity(segs.len() + 2);
        for (k, (start, a, b)) in segs.iter().enumerate() {
            let end = segs.get(k + 1).map(|s| s.0.clone());
            let mut cuts = vec![start.clone()];
            if a.slope != b.slope {
                let root = (b.intercept.clone() - a.intercept.clone()) / (a.slope.clone() - b.slope.clone());
                if root > *start && end.as_ref().is_none_or(|e| root < *e) {
                    cuts.push(root);
                }
            }
            for (i, cut) in cuts.iter().enumerate() {
                let probe = match cuts.get(i + 1).or(end.as_ref()) {
                    Some(next) => (cut.clone() + next.clone()) / S::two(),
                    None => cut.clone() + S::one(),
                };
                let a_wins = (a.at(&probe) >= b.at(&probe)) == upper;
                let p = if a_wins { a } else { b };
                pieces.push(Piece {
                    start: cut.clone(),
                    intercept: p.intercept.clone(),
                    slope: p.slope.clone(),
                });
            }
        }
        PLFunction::from_pieces(pieces)
    }

    /// Least `t >= 0` with `self(t) = 0`, assuming `self(0) >= 0`.
    pub fn first_zero(&self) -> Option<S> {
        for (k, p) in self.pieces.iter().enumerate() {
            let v = p.at(&p.start);
            if v.is_zero() {
                return Some(p.start.clone());
            }
            if v.is_negative() {
                return None;
            }
            if p.slope.is_negative() {
                let root = -p.intercept.clone() / p.slope.clone();
                match self.pieces.get(k + 1) {
                    Some(next) if root >= next.start => {}
                    _ => return Some(root),
                }
            }
        }
        None
    }

    /// Equal to `self` up to `t0`, constant `self(t0)` afterwards.
    pub fn freeze_at(&self, t0: &S) -> Self {
        let value = self.eval(t0);
        let mut pieces: Vec<Piece<S>> = self.pieces.iter().filter(|p| p.start < *t0).cloned().collect();
        pieces.push(Piece {
            start: t0.clone(),
            intercept: value,
            slope: S::zero(),
        });
        PLFunction::from_pieces(pieces)
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.pieces.iter().all(|p| !p.slope.is_positive())
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.pieces.iter().all(|p| !p.slope.is_negative())
    }

    pub fn max_abs_slope(&self) -> S {
        self.pieces.iter().map(|p| p.slope.abs()).max().unwrap_or_else(S::zero)
    }

    /// Values agree at every breakpoint.
    pub fn is_continuous(&self) -> bool {
        self.pieces
            .windows(2)
            .all(|w| w[0].at(&w[1].start) == w[1].at(&w[1].start))
    }
}

/// Both functions on the union of their breakpoints.
fn merged<'a, S: Scalar>(f: &'a PLFunction<S>, g: &'a PLFunction<S>) -> Vec<(S, &'a Piece<S>, &'a Piece<S>)> {
    let mut starts: Vec<&S> = f.pieces.iter().chain(&g.pieces).map(|p| &p.start).collect();
    starts.sort();
    starts.dedup();
    starts
        .into_iter()
        .map(|s| (s.clone(), f.piece_at(s), g.piece_at(s)))
        .collect()
}

impl<S: Scalar> fmt::Display for PLFunction<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, p) in self.pieces.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            write!(f, "[{}, ", p.start)?;
            match self.pieces.get(k + 1) {
                Some(n) => write!(f, "{}]", n.start)?,
                None => write!(f, "inf)")?,
            }
            write!(f, " {} + {}t", p.intercept, p.slope)?;
        }
        Ok(())
    }
}

/// Serialized piece: rationals as strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PieceRecord {
    pub start: String,
    pub end: Option<String>,
    pub intercept: String,
    pub slope: String,
}

impl<S: Scalar> PLFunction<S> {
    pub fn records(&self) -> Vec<PieceRecord> {
        self.pieces
            .iter()
            .enumerate()
            .map(|(k, p)| PieceRecord {
                start: p.start.to_string(),
                end: self.pieces.get(k + 1).map(|n| n.start.to_string()),
                intercept: p.intercept.to_string(),
                slope: p.slope.to_string(),
            })
            .collect()
    }
}
