//! POS CNF to BIPARTITE INFLUENCE.
//!
//! Each clause becomes a White vertex `c_j`; each variable a White `x_i^w`
//! carrying a bag of `m + 2n - 1` Black pendant twins and a Black `x_i^b`
//! joined to the clauses containing the variable. Left reaches `m` playing
//! first exactly when Alice wins the POS CNF game.
//!
//! The construction's edge list ranges the bag index up to `m + 2n`, while
//! the bag is declared (and counted) with `m + 2n - 1` vertices; the
//! declared size is used here.

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::graph::{members, singleton, GroundGraph, Position, VertexColor, VertexSet};
use crate::solver::Solver;
use crate::{Error, Result, Score};

/// Largest formula the brute-force oracle accepts.
pub const MAX_ORACLE_VARS: usize = 12;

/// Positive CNF formula; variables are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PosCnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<usize>>,
}

impl PosCnf {
    /// Validates the clauses and pads an odd variable count with one unused
    /// variable.
    pub fn new(num_vars: usize, clauses: Vec<Vec<usize>>) -> Result<Self> {
        if clauses.is_empty() {
            return Err(Error::InvalidArgument("formula has no clauses".into()));
        }
        for (j, c) in clauses.iter().enumerate() {
            if c.is_empty() {
                return Err(Error::InvalidArgument(format!("clause {} is empty", j + 1)));
            }
            if let Some(&v) = c.iter().find(|&&v| v >= num_vars) {
                return Err(Error::InvalidArgument(format!(
                    "clause {} uses variable {} but only {num_vars} are declared",
                    j + 1,
                    v + 1
                )));
            }
        }
        let clauses = clauses
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        Ok(PosCnf {
            num_vars: num_vars + num_vars % 2,
            clauses,
        })
    }

    /// Parses `p pcnf <vars> <clauses>` followed by clauses of positive
    /// integers, each terminated by `0`. Lines starting with `c` are
    /// comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if line.starts_with('p') {
                if header.is_some() {
                    return Err(Error::Parse("duplicate header".into()));
                }
                let fields: Vec<&str> = line.split_whitespace().collect();
                let [_, "pcnf", vars, count] = fields[..] else {
                    return Err(Error::Parse(format!(
                        "bad header {line:?}, expected \"p pcnf <vars> <clauses>\""
                    )));
                };
                let num = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad header number {s:?}")))
                };
                header = Some((num(vars)?, num(count)?));
                continue;
            }
            if header.is_none() {
                return Err(Error::Parse("clause before the header".into()));
            }
            for tok in line.split_whitespace() {
                let lit: i64 = tok.parse().map_err(|_| Error::Parse(format!("bad literal {tok:?}")))?;
                match lit {
                    0 => clauses.push(std::mem::take(&mut current)),
                    l if l < 0 => return Err(Error::Parse(format!("negative literal {l} in a positive CNF"))),
                    l => current.push(l as usize - 1),
                }
            }
        }
        let (vars, count) = header.ok_or_else(|| Error::Parse("missing \"p pcnf\" header".into()))?;
        if !current.is_empty() {
            return Err(Error::Parse("last clause is not terminated by 0".into()));
        }
        if clauses.len() != count {
            return Err(Error::Parse(format!(
                "header declares {count} clauses, found {}",
                clauses.len()
            )));
        }
        PosCnf::new(vars, clauses).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn bag_size(&self) -> usize {
        self.num_clauses() + 2 * self.num_vars - 1
    }

    /// `m + n (m + 2n + 1)`.
    pub fn reduced_vertex_count(&self) -> usize {
        let (n, m) = (self.num_vars, self.num_clauses());
        m + n * (m + 2 * n + 1)
    }

    /// Same formula over `extra` more unused variables (kept even).
    pub fn padded(&self, extra: usize) -> Self {
        PosCnf::new(self.num_vars + extra, self.clauses.clone()).expect("padding keeps validity")
    }

    fn satisfied(&self, trues: u32) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|&v| trues & (1 << v) != 0))
    }
}

/// Reduced graph with the position of each gadget.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub graph: GroundGraph,
    /// `c_j`.
    pub clauses: Vec<usize>,
    /// `x_i^w`.
    pub var_white: Vec<usize>,
    /// `x_i^b`.
    pub var_black: Vec<usize>,
    pub bags: Vec<VertexSet>,
}

/// Builds the reduced graph: clause vertices first, then per variable
/// `x_i^w`, `x_i^b` and its bag.
pub fn reduce(f: &PosCnf) -> Result<Reduction> {
    let (n, m) = (f.num_vars, f.num_clauses());
    let total = f.reduced_vertex_count();
    if total > 128 {
        return Err(Error::Capacity(total));
    }
    let mut colors = vec![VertexColor::White; m];
    let mut edges = Vec::new();
    let (mut var_white, mut var_black, mut bags) = (Vec::new(), Vec::new(), Vec::new());
    for _ in 0..n {
        let w = colors.len();
        colors.push(VertexColor::White);
        colors.push(VertexColor::Black);
        edges.push((w, w + 1));
        let mut bag = 0;
        for _ in 0..f.bag_size() {
            let v = colors.len();
            colors.push(VertexColor::Black);
            edges.push((w, v));
            bag |= singleton(v);
        }
        var_white.push(w);
        var_black.push(w + 1);
        bags.push(bag);
    }
    for (j, clause) in f.clauses.iter().enumerate() {
        edges.extend(clause.iter().map(|&i| (var_black[i], j)));
    }
    debug_assert_eq!(colors.len(), total);
    let graph = GroundGraph::new(colors, edges)?.with_name(format!("pcnf_{n}x{m}"));
    Ok(Reduction {
        graph,
        clauses: (0..m).collect(),
        var_white,
        var_black,
        bags,
    })
}

/// Adds `|k|` isolated vertices so that `Ls(G) >= k` iff `Ls(G') >= 0`:
/// White ones for `k > 0`, Black ones for `k < 0`.
pub fn shift_threshold(g: &GroundGraph, k: Score) -> Result<GroundGraph> {
    let color = if k > 0 { VertexColor::White } else { VertexColor::Black };
    let extra = GroundGraph::new(vec![color; k.unsigned_abs() as usize], [])?;
    Ok(GroundGraph::disjoint_union(&[g, &extra])?.0)
}

/// Whether Alice, choosing first, wins POS CNF on `f` under optimal play.
pub fn pos_cnf_winner(f: &PosCnf) -> Result<bool> {
    if f.num_vars > MAX_ORACLE_VARS {
        return Err(Error::InvalidArgument(format!(
            "POS CNF oracle is limited to {MAX_ORACLE_VARS} variables, got {}",
            f.num_vars
        )));
    }
    let mut memo = FxHashMap::default();
    Ok(alice_wins(f, 0, 0, &mut memo))
}

fn alice_wins(f: &PosCnf, trues: u32, falses: u32, memo: &mut FxHashMap<(u32, u32), bool>) -> bool {
    let free: Vec<usize> = (0..f.num_vars).filter(|&v| (trues | falses) & (1 << v) == 0).collect();
    if free.is_empty() {
        return f.satisfied(trues);
    }
    if let Some(&r) = memo.get(&(trues, falses)) {
        return r;
    }
    let alice_to_move = free.len() % 2 == f.num_vars % 2;
    let r = if alice_to_move {
        free.iter().any(|&v| alice_wins(f, trues | 1 << v, falses, memo))
    } else {
        free.iter().all(|&v| alice_wins(f, trues, falses | 1 << v, memo))
    };
    memo.insert((trues, falses), r);
    r
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SoundnessReport {
    pub num_vars: usize,
    pub num_clauses: usize,
    pub vertices: usize,
    pub alice_wins: bool,
    pub left_score: Score,
    pub holds: bool,
}

/// Checks `pos_cnf_winner(f) == (Ls(reduce(f)) >= m)` by exact solving.
pub fn reduction_soundness_check(solver: &Solver, f: &PosCnf) -> Result<SoundnessReport> {
    let alice_wins = pos_cnf_winner(f)?;
    let r = reduce(f)?;
    let left_score = solver.left_score(&Position::from_graph(r.graph.clone()))?;
    let m = f.num_clauses() as Score;
    Ok(SoundnessReport {
        num_vars: f.num_vars,
        num_clauses: f.num_clauses(),
        vertices: r.graph.vertex_count(),
        alice_wins,
        left_score,
        holds: alice_wins == (left_score >= m),
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TwinAuditReport {
    pub positions: usize,
    pub moves: usize,
    pub violations: Vec<String>,
}

impl TwinAuditReport {
    pub fn clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Each bag is one twin class of the reduced graph (joined by `x_i^b` when
/// `x_i` occurs in no clause), and in every position reachable within
/// `depth` moves, every move removes each twin class entirely or not at all.
pub fn twin_audit(r: &Reduction, depth: u32) -> TwinAuditReport {
    let mut report = TwinAuditReport::default();
    let root = Position::from_graph(r.graph.clone());
    let classes = root.twin_classes();
    for (i, &bag) in r.bags.iter().enumerate() {
        // x_i^b hangs off x_i^w alone when x_i occurs in no clause
        let b = singleton(r.var_black[i]);
        let expected = if r.graph.degree(r.var_black[i]) == 1 {
            bag | b
        } else {
            bag
        };
        if !classes.contains(&expected) {
            report
                .violations
                .push(format!("bag of variable {} is not a twin class", i + 1));
        }
    }
    let mut seen = rustc_hash::FxHashSet::default();
    twin_walk(&root, depth, &mut seen, &mut report);
    report.positions = seen.len();
    report
}

fn twin_walk(p: &Position, depth: u32, seen: &mut rustc_hash::FxHashSet<VertexSet>, report: &mut TwinAuditReport) {
    if !seen.insert(p.alive()) {
        return;
    }
    let classes = p.twin_classes();
    for mover in [VertexColor::Black, VertexColor::White] {
        for mv in p.legal_moves(mover) {
            report.moves += 1;
            for &class in &classes {
                let hit = class & mv.removed;
                if hit != 0 && hit != class {
                    let split: Vec<usize> = members(class).collect();
                    report
                        .violations
                        .push(format!("playing {} splits twins {split:?}", mv.played));
                }
            }
            if depth > 0 {
                twin_walk(&p.play(&mv), depth - 1, seen, report);
            }
        }
    }
}
