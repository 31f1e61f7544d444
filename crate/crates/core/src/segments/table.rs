use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{segment_moves, SegmentSolver, SegmentSum};
use crate::graph::{GroundGraph, Position, VertexColor};
use crate::{Error, Result, Score};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: u32,
    pub ls: Score,
    pub rs: Score,
}

pub fn table_to_csv(rows: &[TableRow]) -> String {
    let mut out = String::from("n,ls,rs\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", r.n, r.ls, r.rs));
    }
    out
}

pub fn table_from_csv(text: &str) -> Result<Vec<TableRow>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next() {
        Some(h) if h.trim() == "n,ls,rs" => {}
        _ => return Err(Error::Parse("segment table must start with the header n,ls,rs".into())),
    }
    lines
        .map(|line| {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let bad = || Error::Parse(format!("bad table row {line:?}"));
            if fields.len() != 3 {
                return Err(bad());
            }
            Ok(TableRow {
                n: fields[0].parse().map_err(|_| bad())?,
                ls: fields[1].parse().map_err(|_| bad())?,
                rs: fields[2].parse().map_err(|_| bad())?,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodicityReport {
    pub period: u32,
    pub preperiod: u32,
    /// Pairs `(n, n + period)` with different rows.
    pub violations: Vec<(u32, u32)>,
    pub compared: usize,
}

impl PeriodicityReport {
    pub fn consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Compares row `n` with row `n + period` for every `n > preperiod` the
/// table covers. Rows must be `1..=N` in order.
pub fn periodicity_scan(rows: &[TableRow], period: u32, preperiod: u32) -> Result<PeriodicityReport> {
    if period == 0 {
        return Err(Error::InvalidArgument("period must be positive".into()));
    }
    if rows.iter().enumerate().any(|(i, r)| r.n as usize != i + 1) {
        return Err(Error::InvalidArgument("table rows must be numbered 1..N".into()));
    }
    let need = (preperiod + period + 1) as usize;
    if rows.len() < need {
        return Err(Error::InvalidArgument(format!(
            "table has {} rows, the scan needs at least {need}",
            rows.len()
        )));
    }
    let mut violations = Vec::new();
    let mut compared = 0;
    for n in (preperiod + 1)..=(rows.len() as u32 - period) {
        let a = rows[n as usize - 1];
        let b = rows[(n + period) as usize - 1];
        compared += 1;
        if (a.ls, a.rs) != (b.ls, b.rs) {
            violations.push((n, n + period));
        }
    }
    Ok(PeriodicityReport {
        period,
        preperiod,
        violations,
        compared,
    })
}

/// Outcome of the score bounds for one segment sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub ls: Score,
    pub rs: Score,
    pub odd_parts: usize,
    /// `(description, holds)` for every bound that applies.
    pub checks: Vec<(String, bool)>,
}

impl BoundReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.1)
    }
}

/// Score bounds for sums of segments, on the scores net of `s.offset`:
/// `-k-4 <= Rs <= Ls <= k+4` with `k` odd parts; the tighter windows when
/// at most one part is odd; and `-5 <= Rs < 0 < Ls <= 5` for one segment.
///
/// The solver must not itself cut off with mean bounds, which imply these.
pub fn sum_bound_check(solver: &SegmentSolver, s: &SegmentSum) -> Result<BoundReport> {
    if solver.config().mean_bounds {
        return Err(Error::InvalidArgument(
            "bound checks need a solver without mean-bound cutoffs".into(),
        ));
    }
    let scores = solver.scores(s)?;
    let (ls, rs) = (scores.ls - s.offset, scores.rs - s.offset);
    let k = s.parts.iter().filter(|&&n| n % 2 != 0).count();
    let ki = k as Score;
    let mut checks = vec![(
        format!("-{k}-4 <= Rs <= Ls <= {k}+4"),
        -ki - 4 <= rs && rs <= ls && ls <= ki + 4,
    )];
    if k == 0 {
        checks.push((
            "all even: -4 <= Rs <= 0 <= Ls <= 4".into(),
            (-4..=0).contains(&rs) && (0..=4).contains(&ls),
        ));
    }
    if k == 1 {
        checks.push((
            "one odd: -5 <= Rs <= 1 and -1 <= Ls <= 5".into(),
            (-5..=1).contains(&rs) && (-1..=5).contains(&ls),
        ));
    }
    if s.parts.len() == 1 && s.parts[0].abs() >= 2 {
        checks.push((
            "single: -5 <= Rs < 0 < Ls <= 5".into(),
            (-5..0).contains(&rs) && 0 < ls && ls <= 5,
        ));
    }
    Ok(BoundReport {
        ls: scores.ls,
        rs: scores.rs,
        odd_parts: k,
        checks,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MoveAuditReport {
    pub segments: usize,
    pub moves: usize,
    pub violations: Vec<String>,
}

/// Checks the arithmetic move generator on `S_n`, `1 <= |n| <= max_n`:
/// gains lie in 2..=5, 5-moves only in the middle of `S_5` for its owner,
/// 4-moves only two steps from an end, and the option multiset agrees with
/// simulation on the actual path graph.
pub fn move_audit(max_n: u32) -> Result<MoveAuditReport> {
    let mut report = MoveAuditReport::default();
    for m in 1..=max_n as i32 {
        for n in [m, -m] {
            report.segments += 1;
            let len = m as u32;
            let pos = Position::from_graph(GroundGraph::segment(n)?);
            for mover in [VertexColor::Black, VertexColor::White] {
                let arith = segment_moves(n, mover);
                for mv in &arith {
                    report.moves += 1;
                    let g = mv.gain.abs();
                    let mut bad = |what: &str| report.violations.push(format!("S_{n} index {}: {what}", mv.index));
                    if !(2..=5).contains(&g) && len >= 2 {
                        bad("gain outside 2..=5");
                    }
                    if g == 5 && !(len == 5 && mv.index == 2 && mv.gain.signum() == n.signum()) {
                        bad("5-move outside the middle of an owned S_5");
                    }
                    if g == 4 && mv.index != 2 && mv.index + 3 != len {
                        bad("4-move not two steps from an end");
                    }
                }
                let arith_set: BTreeSet<(Score, Vec<i32>)> = arith
                    .iter()
                    .map(|mv| (mv.gain, SegmentSum::new(mv.pieces.to_vec(), 0).canonicalize().parts))
                    .collect();
                let sim_set: BTreeSet<(Score, Vec<i32>)> = pos
                    .legal_moves(mover)
                    .iter()
                    .map(|mv| {
                        let child = pos.play(mv);
                        let parts = child.segment_parts().expect("pieces of a path are paths");
                        let sum = SegmentSum::new(parts, child.offset() - pos.offset()).canonicalize();
                        (sum.offset, sum.parts)
                    })
                    .collect();
                // a single vertex is stripped into the offset before play
                if len > 1 && arith_set != sim_set {
                    report
                        .violations
                        .push(format!("S_{n}: {mover:?} options differ from simulation"));
                }
            }
        }
    }
    Ok(report)
}
