use std::collections::BTreeMap;

use proptest::prelude::*;
use rainbow_cycles::colouring::{
    colour_c4_rainbow_free, colour_rainbow_free, extend_to_proper, forces_rainbow_bruteforce,
    verify_certificate, EdgeColouring,
};
use rainbow_cycles::cycles::enumerate_cycles;
use rainbow_cycles::density::max_density;
use rainbow_cycles::graph::Graph;

fn arb_graph(max_n: usize, max_edges: usize) -> impl Strategy<Value = Graph> {
    (3..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec((0..n, 0..n), 0..=max_edges).prop_map(move |pairs| {
            let edges: Vec<(usize, usize)> = pairs.into_iter().filter(|(a, b)| a != b).collect();
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

fn small_graph() -> impl Strategy<Value = Graph> {
    arb_graph(8, 14).prop_filter("at most 12 edges", |g| g.edge_count() <= 12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn colourer_agrees_with_exhaustive_search(g in small_graph(), ell in 5usize..=7) {
        if let Ok(col) = colour_rainbow_free(&g, ell) {
            prop_assert!(!forces_rainbow_bruteforce(&g, ell).unwrap());
            let cert = verify_certificate(&g, ell, &col).unwrap();
            prop_assert!(cert.verdict.proper && cert.verdict.rainbow_cycle.is_none());
        }
    }

    #[test]
    fn c4_colourer_agrees_with_exhaustive_search(g in small_graph()) {
        match colour_c4_rainbow_free(&g) {
            Ok(col) => {
                prop_assert!(!forces_rainbow_bruteforce(&g, 4).unwrap());
                let cert = verify_certificate(&g, 4, &col).unwrap();
                prop_assert!(cert.verdict.proper && cert.verdict.rainbow_cycle.is_none());
            }
            Err(e) => prop_assert!(!e.is_dead_end(), "{}", e),
        }
    }

    #[test]
    fn distinct_colours_expose_every_cycle_length(g in arb_graph(9, 20), ell in 3usize..=7) {
        let col = extend_to_proper(&g, &EdgeColouring::new()).unwrap();
        let cert = verify_certificate(&g, ell, &col).unwrap();
        prop_assert!(cert.verdict.proper);
        let has_cycle = !enumerate_cycles(&g, ell).unwrap().is_empty();
        prop_assert_eq!(cert.verdict.rainbow_cycle.is_some(), has_cycle);
        if let Some(c) = cert.verdict.rainbow_cycle {
            prop_assert!(c.is_subgraph_of(&g) && c.len() == ell);
        }
    }

    #[test]
    fn one_colour_is_improper_without_rainbow(g in arb_graph(9, 20), ell in 3usize..=7) {
        let assignment: BTreeMap<_, _> = g.edges().iter().map(|&e| (e, 0)).collect();
        let cert = verify_certificate(&g, ell, &EdgeColouring::from_assignment(assignment)).unwrap();
        let has_path = g.vertices().any(|v| g.degree(v) >= 2);
        prop_assert_eq!(cert.verdict.proper, !has_path);
        prop_assert!(cert.verdict.rainbow_cycle.is_none());
    }

    #[test]
    fn extension_keeps_a_proper_partial_colouring(g in arb_graph(9, 20), keep in proptest::collection::vec(any::<bool>(), 20)) {
        // A matching coloured 0 is proper; extend it.
        let mut used = vec![false; g.id_bound()];
        let mut partial = BTreeMap::new();
        for (i, &e) in g.edges().iter().enumerate() {
            let [a, b] = e.endpoints();
            if keep[i % keep.len()] && !used[a] && !used[b] {
                used[a] = true;
                used[b] = true;
                partial.insert(e, 0);
            }
        }
        let full = extend_to_proper(&g, &EdgeColouring::from_assignment(partial.clone())).unwrap();
        prop_assert_eq!(full.len(), g.edge_count());
        for (e, c) in &partial {
            prop_assert_eq!(full.get(*e), Some(*c));
        }
        prop_assert!(verify_certificate(&g, 3, &full).unwrap().verdict.proper);
    }

    #[test]
    fn density_is_invariant_under_relabelling(g in arb_graph(10, 25), shift in 1usize..10) {
        prop_assume!(g.edge_count() > 0);
        let n = g.id_bound();
        let perm: Vec<usize> = (0..n).map(|v| (v + shift) % n).collect();
        prop_assert_eq!(max_density(&g).unwrap().value, max_density(&g.relabel(&perm)).unwrap().value);
    }
}
