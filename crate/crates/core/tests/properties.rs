use std::collections::BTreeSet;

use proptest::prelude::*;

use nzflow::groupflow::{crt_split, reorient};
use nzflow::hypothesis::cut_condition_bruteforce;
use nzflow::integerflow::{to_integer_flow, verify_integer_flow};
use nzflow::io::{emit_instance, emit_solution, parse_instance, parse_solution, SolutionFile};
use nzflow::multigraph::{bridges, cut_vertices};
use nzflow::solver::find_anchored_path;
use nzflow::{check_instance, crt_pair, solve, solve_with_trace, verify_solution, Instance, Multigraph};

/// Connected multigraphs: a random spanning tree plus extra edges (loops and parallels
/// allowed), every edge randomly oriented.
fn connected_graph(max_n: usize, max_extra: usize) -> impl Strategy<Value = Multigraph> {
    (1..=max_n)
        .prop_flat_map(move |n| {
            let tree = proptest::collection::vec((any::<prop::sample::Index>(), any::<bool>()), n - 1);
            let extra = proptest::collection::vec((0..n, 0..n), 0..=max_extra);
            (Just(n), tree, extra)
        })
        .prop_map(|(n, tree, extra)| {
            let mut edges: Vec<(usize, usize)> = tree
                .into_iter()
                .enumerate()
                .map(|(i, (parent, flip))| {
                    let (a, b) = (i + 1, parent.index(i + 1));
                    if flip {
                        (b, a)
                    } else {
                        (a, b)
                    }
                })
                .collect();
            edges.extend(extra);
            Multigraph::new(n, edges).unwrap()
        })
}

fn instance(max_n: usize, max_extra: usize) -> impl Strategy<Value = Instance> {
    connected_graph(max_n, max_extra).prop_flat_map(|g| {
        let n = g.vertex_count();
        let sets = proptest::collection::vec((any::<bool>(), any::<bool>()), n);
        (Just(g), sets).prop_map(|(g, sets)| {
            let u: Vec<usize> = (0..sets.len()).filter(|&v| sets[v].0).collect();
            let mut t: Vec<usize> = u.iter().copied().filter(|&v| sets[v].1).collect();
            if t.len() % 2 == 1 {
                t.pop();
            }
            Instance::new(g, t, u)
        })
    })
}

/// A Hamiltonian cycle plus loopless chords: 2-connected, with U of size at least two.
fn two_connected_instance() -> impl Strategy<Value = Instance> {
    (3usize..=8)
        .prop_flat_map(|n| {
            let chords = proptest::collection::vec((0..n, 0..n).prop_filter("no loops", |(a, b)| a != b), 0..=8);
            let u = proptest::collection::btree_set(0..n, 2..=n);
            (Just(n), chords, u)
        })
        .prop_map(|(n, chords, u)| {
            let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
            edges.extend(chords);
            Instance::new(Multigraph::new(n, edges).unwrap(), [], u)
        })
}

fn component_count_without_edge(g: &Multigraph, e: usize) -> usize {
    let mut removed = vec![false; g.edge_count()];
    removed[e] = true;
    g.components_avoiding(&removed).count
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn bridges_match_deletion(g in connected_graph(8, 8)) {
        let found: BTreeSet<usize> = bridges(&g).into_iter().collect();
        for e in 0..g.edge_count() {
            prop_assert_eq!(found.contains(&e), component_count_without_edge(&g, e) > 1, "edge {}", e);
        }
    }

    #[test]
    fn cut_vertices_match_deletion(g in connected_graph(8, 8)) {
        let cuts = cut_vertices(&g);
        for v in 0..g.vertex_count() {
            let keep: Vec<usize> = (0..g.vertex_count()).filter(|&x| x != v).collect();
            let edges: Vec<usize> = (0..g.edge_count())
                .filter(|&e| { let (a, b) = g.edge(e); a != v && b != v })
                .collect();
            let rest = g.subgraph(&keep, &edges).graph;
            prop_assert_eq!(cuts[v], rest.components().count > 1, "vertex {}", v);
        }
        match g.proper_one_separation() {
            Some(sep) => {
                prop_assert!(sep.is_proper_for(&g));
                prop_assert!(cuts[sep.cut_vertex]);
            }
            None => prop_assert!(!cuts.iter().any(|&c| c)),
        }
    }

    #[test]
    fn contraction_and_deletion_maps(g in connected_graph(7, 8), pick in any::<prop::sample::Index>()) {
        prop_assume!(g.edge_count() > 0);
        let e = pick.index(g.edge_count());
        let del = g.delete_edges(&[e]);
        prop_assert_eq!(del.graph.edge_count() + 1, g.edge_count());
        for (i, &pe) in del.edges.iter().enumerate() {
            let (a, b) = del.graph.edge(i);
            prop_assert_eq!((del.vertices[a], del.vertices[b]), g.edge(pe));
        }
        if g.is_loop(e) {
            prop_assert!(g.contract_edge(e).is_err());
        } else {
            let c = g.contract_edge(e).unwrap();
            prop_assert_eq!(c.graph.vertex_count() + 1, g.vertex_count());
            prop_assert_eq!(c.graph.edge_count() + 1, g.edge_count());
            let (x, y) = g.edge(e);
            prop_assert_eq!(c.vertex_map[x], c.vertex_map[y]);
            prop_assert!(!c.edge_map.contains(&e));
            for (i, &pe) in c.edge_map.iter().enumerate() {
                let (a, b) = g.edge(pe);
                prop_assert_eq!(c.graph.edge(i), (c.vertex_map[a], c.vertex_map[b]));
            }
        }
    }

    #[test]
    fn cut_condition_matches_bruteforce(inst in instance(9, 8)) {
        let report = check_instance(&inst);
        let brute = cut_condition_bruteforce(&inst.graph, &inst.u).unwrap();
        prop_assert_eq!(report.cut_ok, brute.holds);
    }

    #[test]
    fn solutions_verify_and_survive_reorientation(inst in instance(8, 10), flips in any::<u64>()) {
        prop_assume!(check_instance(&inst).is_valid());
        let (s, trace) = solve_with_trace(&inst).unwrap();
        prop_assert!(verify_solution(&inst.graph, &inst.t, &inst.u, &s).is_empty());
        prop_assert!(trace.stats.node_output >= 1);
        let flipped: Vec<usize> = (0..inst.graph.edge_count()).filter(|&e| (flips >> (e % 64)) & 1 == 1).collect();
        let (g2, s2) = reorient(&inst.graph, &s, &flipped);
        prop_assert!(verify_solution(&g2, &inst.t, &inst.u, &s2).is_empty());
        let inst2 = Instance { graph: g2, t: inst.t.clone(), u: inst.u.clone() };
        prop_assert_eq!(check_instance(&inst2).is_valid(), true);
    }

    #[test]
    fn anchored_paths_are_witnesses(inst in two_connected_instance()) {
        let g = &inst.graph;
        prop_assert!(g.proper_one_separation().is_none() && check_instance(&inst).is_valid());
        let (_, u) = inst.masks();
        let w = find_anchored_path(g, &u).unwrap();
        prop_assert_eq!(w.check(g, &u), Ok(()));
    }

    #[test]
    fn flows_lift_to_integers(g in connected_graph(8, 10)) {
        let inst = Instance::new(g, [], []);
        prop_assume!(check_instance(&inst).is_valid());
        let s = solve(&inst).unwrap();
        let z6 = crt_pair(&s);
        for (e, &x) in z6.iter().enumerate() {
            prop_assert_eq!(crt_split(x), s.pair(e));
        }
        let f = to_integer_flow(&inst.graph, &z6).unwrap();
        prop_assert!(verify_integer_flow(&inst.graph, &f).is_empty());
        for (e, &x) in f.0.iter().enumerate() {
            prop_assert_eq!((x - i32::from(z6[e].value())).rem_euclid(6), 0);
        }
    }

    #[test]
    fn documents_round_trip(inst in instance(8, 10)) {
        let doc = emit_instance(&inst);
        let back = parse_instance(&doc).unwrap();
        prop_assert_eq!(emit_instance(&back), doc);
        if check_instance(&inst).is_valid() {
            let file = SolutionFile::new(&inst, solve(&inst).unwrap());
            let text = emit_solution(&file);
            let parsed = parse_solution(&text).unwrap();
            prop_assert!(parsed.check_against(&back).is_ok());
            prop_assert_eq!(emit_solution(&parsed), text);
        }
    }
}
