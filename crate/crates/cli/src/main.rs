//! `influence`: exact solving, tabulation, cooling and certification for
//! BIPARTITE INFLUENCE.
//!
//! Exit codes: 0 ok, 1 a checked property does not hold, 2 bad input,
//! 3 search budget exhausted.

mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use influence_core::graph::{GraphFile, GroundGraph, Position};
use influence_core::reduction::{self, PosCnf};
use influence_core::segments::{self, SegmentSolver, SegmentSum};
use influence_core::solver::{milnor_audit, Solver, SolverConfig};
use influence_core::symmetry::{self, BwSearch};
use influence_core::thermo;
use influence_core::{Error, GameStore, Result, Thermograph};

use config::Settings;

const CACHE_FILE: &str = "segments.bin";
/// Above this size `symmetry` only searches for a mapping.
const SYMMETRY_SOLVE_MAX: usize = 26;

#[derive(Parser, Debug)]
#[command(name = "influence", version, about = "Exact solver for BIPARTITE INFLUENCE")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for root moves and table rows.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Node expansions allowed per query.
    #[arg(long, global = true)]
    node_limit: Option<u64>,
    /// Settings file of `key = value` lines (also INFLUENCE_CONFIG).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Left and Right scores of a graph.
    Solve {
        #[command(flatten)]
        source: GraphSource,
        /// Search every move, including dominated ones.
        #[arg(long)]
        no_prune: bool,
    },
    /// Scores of S_1..S_max as CSV.
    Table {
        /// Last segment length.
        #[arg(long)]
        max: u32,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Neither read nor write the memo cache.
        #[arg(long)]
        no_cache: bool,
        /// Directory holding segments.bin; overrides the cache_dir setting.
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        /// Compare rows n and n + PERIOD for n > PREPERIOD.
        #[arg(long)]
        period: Option<u32>,
        #[arg(long, default_value_t = 0)]
        preperiod: u32,
        /// Reference CSV the generated table must match.
        #[arg(long)]
        expect: Option<PathBuf>,
    },
    /// Temperature, mean and cooled trajectories.
    Thermo {
        #[command(flatten)]
        source: GraphSource,
        /// A game in <left|right> notation.
        #[arg(long)]
        game: Option<String>,
        /// Print breakpoints as CSV.
        #[arg(long)]
        csv: bool,
    },
    /// Equivalence of two games.
    Equiv {
        /// Segment multiset, e.g. 5,5; give it once per game.
        #[arg(long, allow_hyphen_values = true)]
        sum: Vec<String>,
        /// Game in <left|right> notation; give it once per game.
        #[arg(long)]
        game: Vec<String>,
        /// Score added to the first game.
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        offset_a: i32,
        /// Score added to the second game.
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        offset_b: i32,
    },
    /// Search for a BW-automorphism and certify a draw.
    Symmetry {
        #[command(flatten)]
        source: GraphSource,
        /// Pair assignments the search may try.
        #[arg(long)]
        budget: Option<u64>,
        /// Skip the exact solve.
        #[arg(long)]
        no_solve: bool,
    },
    /// Reduce a positive CNF to a graph.
    Reduce {
        #[arg(long)]
        cnf: PathBuf,
        /// Write the graph JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Compare the POS CNF winner with an exact solve.
        #[arg(long)]
        check: bool,
    },
    /// Check dicotic and nonzugzwang on positions reachable from a graph.
    Audit {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, default_value_t = 3)]
        depth: u32,
    },
}

#[derive(Args, Debug, Default)]
#[group(multiple = false)]
struct GraphSource {
    /// Segment S_N (negative N starts White).
    #[arg(long, allow_negative_numbers = true)]
    segment: Option<i32>,
    /// Grid G_{R,C} with a Black top-left corner.
    #[arg(long, value_name = "RxC", value_parser = parse_dims)]
    grid: Option<(usize, usize)>,
    /// Hypercube H_DIM.
    #[arg(long, value_name = "DIM")]
    hypercube: Option<u32>,
    /// Cylinder C_{N,M}: N rows (even, >= 4) wrapping around, M columns.
    #[arg(long, value_name = "NxM", value_parser = parse_dims)]
    cylinder: Option<(usize, usize)>,
    /// Torus T_{N,M}: both dimensions even and >= 4.
    #[arg(long, value_name = "NxM", value_parser = parse_dims)]
    torus: Option<(usize, usize)>,
    /// Graph JSON file.
    #[arg(long)]
    file: Option<PathBuf>,
}

impl GraphSource {
    fn is_given(&self) -> bool {
        self.segment.is_some()
            || self.grid.is_some()
            || self.hypercube.is_some()
            || self.cylinder.is_some()
            || self.torus.is_some()
            || self.file.is_some()
    }

    fn build(&self) -> Result<GroundGraph> {
        if let Some(n) = self.segment {
            GroundGraph::segment(n)
        } else if let Some((r, c)) = self.grid {
            GroundGraph::grid(r, c)
        } else if let Some(d) = self.hypercube {
            GroundGraph::hypercube(d)
        } else if let Some((n, m)) = self.cylinder {
            GroundGraph::cylinder(n, m)
        } else if let Some((n, m)) = self.torus {
            GroundGraph::torus(n, m)
        } else if let Some(path) = &self.file {
            GraphFile::read(path)
        } else {
            Err(Error::InvalidArgument(
                "no graph given; use --segment, --grid, --hypercube, --cylinder, --torus or --file".into(),
            ))
        }
    }
}

fn parse_dims(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected AxB, got {s:?}"))?;
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad dimension {t:?}"));
    Ok((num(a)?, num(b)?))
}

/// What a command reports: its JSON form, its text form and whether every
/// checked property held.
struct Report {
    json: Value,
    text: String,
    ok: bool,
}

impl Report {
    fn ok(json: Value, text: String) -> Self {
        Report { json, text, ok: true }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(report) => {
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report.json).expect("values serialize")
                );
            } else {
                print!("{}", report.text);
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            if json {
                println!("{}", json!({ "error": e.to_string() }));
            }
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::BudgetExhausted(_) => 3,
                _ => 2,
            })
        }
    }
}

fn settings(cli: &Cli) -> Result<Settings> {
    let mut s = Settings::default();
    let file = cli
        .config
        .clone()
        .or_else(|| std::env::var_os("INFLUENCE_CONFIG").map(PathBuf::from));
    if let Some(path) = file {
        s.apply_file(&path)?;
    }
    s.apply_env(std::env::vars())?;
    if let Some(t) = cli.threads {
        s.set("threads", &t.to_string())?;
    }
    if let Some(n) = cli.node_limit {
        s.node_limit = n;
    }
    Ok(s)
}

fn run(cli: Cli) -> Result<Report> {
    let s = settings(&cli)?;
    match &cli.command {
        Command::Solve { source, no_prune } => solve(&s, source, !no_prune),
        Command::Table {
            max,
            out,
            no_cache,
            cache_dir,
            period,
            preperiod,
            expect,
        } => {
            let cache = if *no_cache {
                None
            } else {
                cache_dir.clone().or(s.cache_dir.clone())
            };
            table(
                &s,
                *max,
                out.as_deref(),
                cache.as_deref(),
                *period,
                *preperiod,
                expect.as_deref(),
            )
        }
        Command::Thermo { source, game, csv } => thermo_cmd(&s, source, game.as_deref(), *csv),
        Command::Equiv {
            sum,
            game,
            offset_a,
            offset_b,
        } => equiv(&s, sum, game, *offset_a, *offset_b),
        Command::Symmetry {
            source,
            budget,
            no_solve,
        } => symmetry_cmd(&s, source, budget.unwrap_or(s.symmetry_budget), *no_solve),
        Command::Reduce { cnf, out, check } => reduce(&s, cnf, out.as_deref(), *check),
        Command::Audit { source, depth } => audit(&s, source, *depth),
    }
}

fn solver(s: &Settings, prune: bool) -> Solver {
    Solver::new(SolverConfig {
        prune,
        node_limit: s.node_limit,
        threads: s.threads,
        ..Default::default()
    })
}

fn graph_name(g: &GroundGraph) -> String {
    g.name().unwrap_or("graph").to_string()
}

fn solve(s: &Settings, source: &GraphSource, prune: bool) -> Result<Report> {
    let g = source.build()?;
    let solver = solver(s, prune);
    let p = Position::from_graph(g.clone());
    let scores = solver.scores(&p)?;
    let stats = solver.stats();
    let json = json!({
        "graph": graph_name(&g),
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "ls": scores.ls,
        "rs": scores.rs,
        "stats": stats,
    });
    let text = format!(
        "graph={} vertices={} edges={}\nls={} rs={}\nentries={} expansions={} hits={}\n",
        graph_name(&g),
        g.vertex_count(),
        g.edge_count(),
        scores.ls,
        scores.rs,
        stats.entries,
        stats.expansions,
        stats.hits
    );
    Ok(Report::ok(json, text))
}

fn table(
    s: &Settings,
    max: u32,
    out: Option<&Path>,
    cache_dir: Option<&Path>,
    period: Option<u32>,
    preperiod: u32,
    expect: Option<&Path>,
) -> Result<Report> {
    let engine = SegmentSolver::with_node_limit(s.node_limit);
    let cache = cache_dir.map(|d| d.join(CACHE_FILE));
    let mut loaded = 0;
    if let Some(path) = cache.as_ref().filter(|p| p.exists()) {
        let entries = segments::load_cache(path)?;
        loaded = entries.len();
        engine.insert_entries(entries)?;
    }
    let rows = engine.table(max, s.threads)?;
    if let Some(path) = &cache {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        segments::save_cache(path, &engine.entries())?;
    }
    let csv = segments::table_to_csv(&rows);
    if let Some(path) = out {
        std::fs::write(path, &csv)?;
    }
    let mut ok = true;
    let mut json = json!({ "rows": rows, "stats": engine.stats(), "cache_entries_loaded": loaded });
    let mut notes = String::new();
    if let Some(path) = expect {
        let reference = segments::table_from_csv(&std::fs::read_to_string(path)?)?;
        let mismatches: Vec<u32> = reference
            .iter()
            .filter(|r| rows.get(r.n as usize - 1) != Some(r))
            .map(|r| r.n)
            .collect();
        ok &= mismatches.is_empty();
        notes.push_str(&format!(
            "expect: {} rows, mismatches {:?}\n",
            reference.len(),
            mismatches
        ));
        json["expect_mismatches"] = json!(mismatches);
    }
    if let Some(period) = period {
        let scan = segments::periodicity_scan(&rows, period, preperiod)?;
        ok &= scan.consistent();
        notes.push_str(&format!(
            "period {} preperiod {}: compared {}, violations {:?}\n",
            period, preperiod, scan.compared, scan.violations
        ));
        json["periodicity"] = json!(scan);
    }
    let text = match out {
        Some(path) => format!("wrote {} rows to {}\n{notes}", rows.len(), path.display()),
        None if notes.is_empty() => csv,
        None => format!("{csv}{notes}"),
    };
    Ok(Report { json, text, ok })
}

fn thermo_cmd(s: &Settings, source: &GraphSource, game: Option<&str>, csv: bool) -> Result<Report> {
    let mut store = GameStore::new();
    store.set_tree_limit(s.tree_limit);
    let (label, g) = match (game, source) {
        (Some(_), src) if src.is_given() => {
            return Err(Error::InvalidArgument("give either --game or a graph, not both".into()))
        }
        (Some(text), _) => (text.to_string(), store.parse(text)?),
        (None, GraphSource { segment: Some(n), .. }) => {
            (format!("S_{n}"), store.from_segments(&SegmentSum::single(*n)))
        }
        (None, src) => {
            let graph = src.build()?;
            let id = store.from_position(&Position::full(Arc::new(graph.clone())))?;
            (graph_name(&graph), id)
        }
    };
    let th: Thermograph = thermo::thermograph(&store, g)?;
    let mut json = serde_json::to_value(th.to_record())?;
    json["game"] = json!(label);
    let text = if csv {
        th.to_csv()
    } else {
        format!(
            "game={label}\nsigma={} mast={}\nls(t) = {}\nrs(t) = {}\n",
            th.sigma, th.mast, th.ls, th.rs
        )
    };
    Ok(Report::ok(json, text))
}

fn equiv(s: &Settings, sums: &[String], games: &[String], offset_a: i32, offset_b: i32) -> Result<Report> {
    let equivalent = match (sums.len(), games.len()) {
        (2, 0) => {
            let a = SegmentSum::parse(&sums[0])?;
            let b = SegmentSum::parse(&sums[1])?;
            // G - H as one segment sum
            let mut parts = a.parts.clone();
            parts.extend(b.parts.iter().map(|&n| -n));
            let diff = SegmentSum::new(parts, a.offset - b.offset + offset_a - offset_b);
            let engine = SegmentSolver::with_node_limit(s.node_limit);
            let sc = engine.scores(&diff)?;
            sc.ls == 0 && sc.rs == 0
        }
        (0, 2) => {
            let mut store = GameStore::new();
            let a = store.parse(&games[0])?;
            let b = store.parse(&games[1])?;
            let oa = store.integer(offset_a as i64);
            let ob = store.integer(offset_b as i64);
            let a = store.sum(a, oa);
            let b = store.sum(b, ob);
            store.equivalent(a, b)?
        }
        _ => {
            return Err(Error::InvalidArgument(
                "equiv needs exactly two games: --sum twice or --game twice".into(),
            ))
        }
    };
    let json = json!({ "equivalent": equivalent });
    Ok(Report {
        json,
        text: format!("equivalent={equivalent}\n"),
        ok: equivalent,
    })
}

fn symmetry_cmd(s: &Settings, source: &GraphSource, budget: u64, no_solve: bool) -> Result<Report> {
    let g = source.build()?;
    let solve = !no_solve && g.vertex_count() <= SYMMETRY_SOLVE_MAX;
    let solver = solver(s, true);
    let cert = symmetry::certify_draw(&g, budget, solve.then_some(&solver))?;
    if let BwSearch::BudgetExhausted { nodes } = cert.search {
        return Err(Error::BudgetExhausted(nodes));
    }
    // a found mapping must verify and agree with the solve; absence is a valid answer
    let ok = cert.search.mapping().is_none() || cert.certified();
    let mut json = serde_json::to_value(&cert)?;
    json["graph"] = json!(graph_name(&g));
    json["certified"] = json!(cert.certified());
    let mut text = format!("graph={}\n", graph_name(&g));
    match &cert.search {
        BwSearch::Found { mapping, nodes } => {
            text.push_str(&format!("mapping={} nodes={nodes}\n", mapping.to_json()));
            let c = cert.checks.expect("found mappings are checked");
            text.push_str(&format!(
                "automorphism={} involution={} color_swap={} distance={}\n",
                c.automorphism, c.involution, c.color_swap, c.distance
            ));
        }
        BwSearch::ProvenAbsent { nodes } => text.push_str(&format!("mapping=absent nodes={nodes}\n")),
        BwSearch::BudgetExhausted { .. } => unreachable!(),
    }
    if let Some(sc) = cert.scores {
        text.push_str(&format!("ls={} rs={}\n", sc.ls, sc.rs));
    }
    if let Some(m) = &cert.mirror {
        text.push_str(&format!("mirror positions={} holds={}\n", m.positions, m.holds()));
    }
    text.push_str(&format!("certified={}\n", cert.certified()));
    Ok(Report { json, text, ok })
}

fn reduce(s: &Settings, cnf: &Path, out: Option<&Path>, check: bool) -> Result<Report> {
    let f = PosCnf::parse(&std::fs::read_to_string(cnf)?)?;
    let r = reduction::reduce(&f)?;
    let graph_json = GraphFile::from_graph(&r.graph).to_json();
    if let Some(path) = out {
        std::fs::write(path, &graph_json)?;
    }
    let twins = reduction::twin_audit(&r, 0);
    let mut ok = twins.clean();
    let mut json = json!({
        "vars": f.num_vars,
        "clauses": f.num_clauses(),
        "bag_size": f.bag_size(),
        "vertices": r.graph.vertex_count(),
        "edges": r.graph.edge_count(),
        "twin_audit": twins,
    });
    let mut text = format!(
        "vars={} clauses={} bag_size={} vertices={} edges={} twins_clean={}\n",
        f.num_vars,
        f.num_clauses(),
        f.bag_size(),
        r.graph.vertex_count(),
        r.graph.edge_count(),
        twins.clean()
    );
    if check {
        let rep = reduction::reduction_soundness_check(&solver(s, true), &f)?;
        ok &= rep.holds;
        text.push_str(&format!(
            "alice_wins={} left_score={} threshold={} holds={}\n",
            rep.alice_wins, rep.left_score, rep.num_clauses, rep.holds
        ));
        json["soundness"] = json!(rep);
    }
    match out {
        Some(path) => text.push_str(&format!("wrote {}\n", path.display())),
        None if !check => {
            // the graph itself is the output
            let graph: Value = serde_json::from_str(&graph_json)?;
            return Ok(Report {
                json: graph,
                text: format!("{graph_json}\n"),
                ok,
            });
        }
        None => json["graph"] = serde_json::from_str(&graph_json)?,
    }
    Ok(Report { json, text, ok })
}

fn audit(s: &Settings, source: &GraphSource, depth: u32) -> Result<Report> {
    let g = source.build()?;
    let solver = solver(s, true);
    let rep = milnor_audit(&solver, &Position::from_graph(g.clone()), depth)?;
    let mut json = serde_json::to_value(&rep)?;
    json["graph"] = json!(graph_name(&g));
    let text = match &rep.violation {
        None => format!(
            "graph={} positions={} depth={} clean=true\n",
            graph_name(&g),
            rep.positions,
            depth
        ),
        Some(v) => format!(
            "graph={} positions={} depth={} clean=false\nviolation kind={} alive={} ls={} rs={}\n",
            graph_name(&g),
            rep.positions,
            depth,
            v.kind,
            v.alive,
            v.ls,
            v.rs
        ),
    };
    Ok(Report {
        json,
        text,
        ok: rep.clean(),
    })
}
