//! Seeded property tests over small random graphs and segment sums.

mod common;

use influence_core::graph::{members, GroundGraph, Position, VertexColor};
use influence_core::segments::{sum_bound_check, SegmentConfig, SegmentSolver, SegmentSum};
use influence_core::solver::{gift_bounds_check, milnor_audit, reference_scores, Solver, SolverConfig};
use influence_core::thermo::{cooled_score_bounds_check, mean_sandwich, sum_temperature_check, thermograph};
use influence_core::{GameStore, Rational};
use proptest::collection::vec;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 500,
        rng_seed: RngSeed::Fixed(0x5eed_0001),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn graph(max_n: usize) -> impl Strategy<Value = GroundGraph> {
    (1..=max_n)
        .prop_flat_map(|n| (vec(any::<bool>(), n), vec(any::<bool>(), common::pair_count(n))))
        .prop_map(|(black, bits)| common::graph_from_bits(&black, &bits))
}

fn parts() -> impl Strategy<Value = Vec<i32>> {
    vec(
        (1..=14i32, any::<bool>()).prop_map(|(n, neg)| if neg { -n } else { n }),
        1..=4,
    )
}

fn pos(g: &GroundGraph) -> Position {
    Position::from_graph(g.clone())
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn milnor_chain(g in graph(5), h in graph(5)) {
        let solver = Solver::default();
        let (gh, _) = GroundGraph::disjoint_union(&[&g, &h]).unwrap();
        let sg = solver.scores(&pos(&g)).unwrap();
        let sh = solver.scores(&pos(&h)).unwrap();
        let s = solver.scores(&pos(&gh)).unwrap();
        prop_assert!(sg.rs + sh.rs <= s.rs);
        prop_assert!(s.rs <= sg.ls + sh.rs);
        prop_assert!(sg.ls + sh.rs <= s.ls);
        prop_assert!(s.ls <= sg.ls + sh.ls);
    }

    #[test]
    fn negation_swaps_scores(g in graph(10)) {
        let solver = Solver::default();
        let p = pos(&g);
        let s = solver.scores(&p).unwrap();
        let n = solver.scores(&p.negate()).unwrap();
        prop_assert_eq!((n.ls, n.rs), (-s.rs, -s.ls));
    }

    #[test]
    fn dicotic_and_nonzugzwang(g in graph(10)) {
        let solver = Solver::default();
        let report = milnor_audit(&solver, &pos(&g), u32::MAX).unwrap();
        prop_assert!(report.clean(), "{:?}", report.violation);
        let mut st = GameStore::new();
        let id = st.from_position(&pos(&g)).unwrap();
        prop_assert!(st.milnor_audit(id).is_none());
    }

    #[test]
    fn solver_matches_plain_minimax(g in graph(8)) {
        let p = pos(&g);
        prop_assert_eq!(Solver::default().scores(&p).unwrap(), reference_scores(&p));
    }

    #[test]
    fn pruning_keeps_scores(g in graph(10)) {
        let p = pos(&g);
        let pruned = Solver::default().scores(&p).unwrap();
        let plain = Solver::new(SolverConfig { prune: false, segment_keys: false, ..Default::default() })
            .scores(&p)
            .unwrap();
        prop_assert_eq!(pruned, plain);
    }

    #[test]
    fn moves_remove_whole_twin_classes(g in graph(10)) {
        let p = pos(&g).strip_isolated();
        let classes = p.twin_classes();
        for v in members(p.alive()) {
            let removed = p.removal_closure(v).unwrap().removed;
            for &c in &classes {
                prop_assert!(c & removed == 0 || c & removed == c);
            }
        }
    }

    #[test]
    fn gift_inequalities(g in graph(10), pick in any::<u128>()) {
        let p = pos(&g);
        let live = p.strip_isolated().alive();
        let b0 = live & g.color_set(VertexColor::Black) & pick;
        let w0 = live & g.color_set(VertexColor::White) & (pick >> 64);
        let report = gift_bounds_check(&Solver::default(), &p, b0, w0).unwrap();
        prop_assert!(report.holds(), "{:?}", report.inequalities);
    }

    #[test]
    fn cooling_moves_scores_by_at_most_the_tax(g in graph(10), quarters in 0i64..=24) {
        let mut st = GameStore::new();
        let id = st.from_position(&pos(&g)).unwrap();
        let report = cooled_score_bounds_check(&st, id, &Rational::new(quarters, 4)).unwrap();
        prop_assert!(report.holds(), "{:?}", report.checks);
    }

    #[test]
    fn adding_a_number_keeps_the_temperature(g in graph(10), num in -12i64..=12, den in 1i64..=4) {
        let mut st = GameStore::new();
        let id = st.from_position(&pos(&g)).unwrap();
        let s = Rational::new(num, den);
        let n = st.number(s);
        let shifted = st.sum(id, n);
        let a = thermograph(&st, id).unwrap();
        let b = thermograph(&st, shifted).unwrap();
        prop_assert_eq!(&a.sigma, &b.sigma);
        prop_assert_eq!(a.mast + s, b.mast);
    }

    #[test]
    fn temperature_of_sums(g in graph(6), h in graph(6)) {
        let mut st = GameStore::new();
        let a = st.from_position(&pos(&g)).unwrap();
        let b = st.from_position(&pos(&h)).unwrap();
        let report = sum_temperature_check(&mut st, a, b).unwrap();
        prop_assert!(report.holds(), "{:?}", report);
    }

    #[test]
    fn scores_within_temperature_of_mean(g in graph(10)) {
        let mut st = GameStore::new();
        let id = st.from_position(&pos(&g)).unwrap();
        let th = thermograph(&st, id).unwrap();
        for c in mean_sandwich(&th) {
            prop_assert!(c.holds, "{}", c.label);
        }
        let (ls, rs) = st.scores(id);
        prop_assert_eq!((th.ls.eval(&Rational::from_integer(0)), th.rs.eval(&Rational::from_integer(0))), (ls, rs));
    }

    #[test]
    fn segment_sum_bounds(p in parts()) {
        let oracle = SegmentSolver::with_config(SegmentConfig { mean_bounds: false, ..Default::default() });
        let report = sum_bound_check(&oracle, &SegmentSum::new(p, 0)).unwrap();
        prop_assert!(report.holds(), "{:?}", report);
    }

    #[test]
    fn rewriting_keeps_segment_scores(p in parts(), offset in -3i32..=3) {
        let s = SegmentSum::new(p, offset);
        let plain = SegmentSolver::with_config(SegmentConfig { rewrite_42: false, mean_bounds: false, ..Default::default() });
        prop_assert_eq!(SegmentSolver::new().scores(&s).unwrap(), plain.scores(&s).unwrap());
        prop_assert_eq!(SegmentSolver::new().scores(&s.normal_form()).unwrap(), plain.scores(&s).unwrap());
    }

    #[test]
    fn segment_negation(p in parts()) {
        let solver = SegmentSolver::new();
        let s = SegmentSum::new(p, 0);
        let a = solver.scores(&s).unwrap();
        let b = solver.scores(&s.negate()).unwrap();
        prop_assert_eq!((b.ls, b.rs), (-a.rs, -a.ls));
    }

    #[test]
    fn normal_form_is_idempotent(p in parts(), offset in -3i32..=3) {
        let s = SegmentSum::new(p, offset).normal_form();
        prop_assert_eq!(s.normal_form(), s);
    }

    #[test]
    fn segment_engine_matches_graph_solver(p in vec((1..=6i32, any::<bool>()).prop_map(|(n, neg)| if neg { -n } else { n }), 1..=3)) {
        let graphs: Vec<GroundGraph> = p.iter().map(|&n| GroundGraph::segment(n).unwrap()).collect();
        let refs: Vec<&GroundGraph> = graphs.iter().collect();
        let (g, _) = GroundGraph::disjoint_union(&refs).unwrap();
        let by_graph = Solver::new(SolverConfig { segment_keys: false, ..Default::default() }).scores(&pos(&g)).unwrap();
        prop_assert_eq!(SegmentSolver::new().scores(&SegmentSum::new(p, 0)).unwrap(), by_graph);
    }
}
