use cohesion_lab::reduction::{forward_witness, verify_instance};
use cohesion_lab::triangles::triangle_count;
use cohesion_lab::verify::{brute_force_cliques, naive_census};
use cohesion_lab::{
    census, cohesion_of_set, fixtures, induced_subgraph, is_connected, lambda_threshold, parse_edge_list, reduce,
    solve_exact, solve_heuristic, Census, Cohesion, Graph, ReduceOptions, SearchConfig, VertexSet,
};
use proptest::prelude::*;

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2)
            .prop_map(move |bits| fixtures::graph_from_pair_bits(n, &bits))
    })
}

fn graph_and_set(max_n: usize) -> impl Strategy<Value = (Graph, VertexSet)> {
    graph(max_n).prop_flat_map(|g| {
        let n = g.vertex_count();
        (Just(g), any::<u64>().prop_map(move |m| VertexSet::from_mask(n, m & ((1u64 << n) - 1))))
    })
}

/// Maximum cohesion over connected subsets, evaluated one subset at a time.
fn best_connected(g: &Graph) -> Cohesion {
    let n = g.vertex_count();
    (1..1u64 << n)
        .map(|m| VertexSet::from_mask(n, m))
        .filter(|s| is_connected(g, s).unwrap())
        .map(|s| cohesion_of_set(g, &s).unwrap())
        .max()
        .unwrap_or_else(Cohesion::zero)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn census_buckets_partition_triangles((g, s) in graph_and_set(12)) {
        let c: Census = census(&g, &s).unwrap();
        prop_assert_eq!(c.total(), triangle_count(&g).into());
        prop_assert_eq!(&c, &naive_census(&g, &s).unwrap());
    }

    #[test]
    fn inside_equals_induced_triangles((g, s) in graph_and_set(12)) {
        let c: Census = census(&g, &s).unwrap();
        let sub = induced_subgraph(&g, &s).unwrap();
        prop_assert_eq!(c.inside, triangle_count(&sub).into());
    }

    #[test]
    fn complement_swaps_buckets((g, s) in graph_and_set(12)) {
        let n = g.vertex_count();
        let mut comp = VertexSet::full(n);
        for v in s.iter() {
            comp.remove(v);
        }
        let (a, b): (Census, Census) = (census(&g, &s).unwrap(), census(&g, &comp).unwrap());
        prop_assert_eq!((&a.inside, &a.outbound), (&b.outside, &b.touching_one));
    }

    #[test]
    fn edge_list_round_trip(g in graph(14)) {
        let back = parse_edge_list(&g.to_edge_list()).unwrap();
        prop_assert_eq!(back.vertex_count(), g.vertex_count());
        prop_assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
        let json = serde_json::to_string(&g).unwrap();
        let again: Graph = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(again, g);
    }

    #[test]
    fn exact_solver_matches_connected_enumeration(g in graph(9)) {
        let r = solve_exact(&g, &SearchConfig::default()).unwrap();
        prop_assert_eq!(&r.best_value, &best_connected(&g));
        prop_assert_eq!(&cohesion_of_set::<num_bigint::BigUint>(&g, &r.best_set).unwrap(), &r.best_value);
        prop_assert!(r.exact);
        if !r.best_value.is_zero() {
            prop_assert!(is_connected(&g, &r.best_set).unwrap());
        }
    }

    #[test]
    fn heuristic_never_beats_exact(g in graph(10), seed in any::<u64>()) {
        let cfg = SearchConfig { rng_seed: seed, ..SearchConfig::default() };
        let h = solve_heuristic(&g, &cfg).unwrap();
        let e = solve_exact(&g, &cfg).unwrap();
        prop_assert!(h.best_value <= e.best_value);
        prop_assert_eq!(&cohesion_of_set::<num_bigint::BigUint>(&g, &h.best_set).unwrap(), &h.best_value);
        prop_assert!(!h.exact);
    }

    #[test]
    fn forward_witness_hits_lambda(g in graph(7), gadget in 1u64..6) {
        prop_assume!(g.vertex_count() >= 4 && g.is_connected());
        let n = g.vertex_count();
        for k in 3..=n {
            let inst = reduce(&g, k, &ReduceOptions::with_gadget_size(gadget)).unwrap();
            prop_assert!(verify_instance(&inst).unwrap().passed);
            let lambda: Cohesion = lambda_threshold(k as u64, n as u64).unwrap();
            for clique in brute_force_cliques(&g, k) {
                let w = forward_witness(&inst, &clique).unwrap();
                prop_assert!(w.census_checked);
                prop_assert_eq!(&w.cohesion, &lambda);
            }
        }
    }
}

#[test]
fn frozen_values() {
    let (g, s) = fixtures::square_example();
    let c: Cohesion = cohesion_of_set(&g, &s).unwrap();
    assert_eq!(c.to_string(), "1/3");

    let two = fixtures::bridged_cliques(5);
    let best = solve_exact(&two, &SearchConfig::default()).unwrap();
    assert_eq!(best.best_set.to_vec(), vec![0, 1, 2, 3, 4]);
    assert_eq!(best.best_value, Cohesion::one());
    let all: Cohesion = cohesion_of_set(&two, &VertexSet::full(10)).unwrap();
    assert_eq!(all.to_string(), "1/6");

    let inst = reduce(&fixtures::cycle(5), 3, &ReduceOptions::with_gadget_size(6)).unwrap();
    assert_eq!(inst.transformed_vertices(), 35u32.into());
    assert_eq!(inst.lambda.to_string(), "1/7");
}
