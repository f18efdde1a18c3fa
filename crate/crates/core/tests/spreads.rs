mod common;

use common::{connected_graph, random_unit_signal};
use graphspread::{
    dirichlet_form, distances, graph_spread, spread_pair, trial_rng, DistanceKind, GraphSignal, WeightedGraph,
};
use proptest::prelude::*;

fn fig3_triangle(eps: f64) -> WeightedGraph {
    WeightedGraph::from_edges(3, &[(0, 1, eps), (0, 2, 1.0), (1, 2, 2.0)]).unwrap()
}

fn kinds() -> [DistanceKind; 3] {
    [
        DistanceKind::NaiveGeodesic,
        DistanceKind::InverseSimilarityGeodesic,
        DistanceKind::Diffusion { alpha: 1.0 },
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spreads_are_bounded((g, seed) in connected_graph(12)) {
        let mut rng = trial_rng(seed, 1);
        let x = random_unit_signal(g.n(), &mut rng);
        for kind in kinds() {
            let u0 = (seed % g.n() as u64) as usize;
            let pair = spread_pair(&g, &kind, u0, &x).unwrap();
            let d = distances(&g, &kind, u0).unwrap();
            let d_max = d.amax();
            prop_assert!((-1e-12..=2.0 + 1e-12).contains(&pair.spectral));
            prop_assert!(pair.graph >= 0.0 && pair.graph <= d_max * d_max + 1e-12);
        }
    }

    #[test]
    fn graph_spread_is_a_weighted_sum((g, seed) in connected_graph(12)) {
        let x = random_unit_signal(g.n(), &mut trial_rng(seed, 2));
        let d = distances(&g, &DistanceKind::InverseSimilarityGeodesic, 0).unwrap();
        let brute: f64 = (0..g.n()).map(|u| d[u] * d[u] * x.values()[u] * x.values()[u]).sum();
        prop_assert!((graph_spread(&d, &x).unwrap() - brute).abs() <= 1e-12);
    }

    #[test]
    fn dirichlet_form_vanishes_exactly_on_constants((g, seed) in connected_graph(10), c in -3.0..3.0f64) {
        let constant = GraphSignal::new(vec![c; g.n()]);
        prop_assert_eq!(dirichlet_form(&g, &constant, 2).unwrap(), 0.0);
        let mut v = vec![c; g.n()];
        v[(seed % g.n() as u64) as usize] += 1.0;
        prop_assert!(dirichlet_form(&g, &GraphSignal::new(v), 2).unwrap() > 0.0);
    }

    #[test]
    fn dirichlet_form_p2_matches_brute_force((g, seed) in connected_graph(10)) {
        let x = random_unit_signal(g.n(), &mut trial_rng(seed, 3));
        let n = g.n();
        let w = g.weights();
        let brute: f64 = (0..n)
            .map(|u| (0..n).map(|v| w[(u, v)] * (x.values()[v] - x.values()[u]).powi(2)).sum::<f64>().sqrt())
            .sum::<f64>() / 2.0;
        prop_assert!((dirichlet_form(&g, &x, 2).unwrap() - brute).abs() <= 1e-12);
    }
}

#[test]
fn naive_spread_jumps_at_the_vanishing_edge() {
    let x = GraphSignal::uniform(3);
    for eps in [0.1, 1e-3, 1e-6] {
        let d = distances(&fig3_triangle(eps), &DistanceKind::NaiveGeodesic, 0).unwrap();
        let expected = (eps * eps + 1.0) / 3.0;
        assert!((graph_spread(&d, &x).unwrap() - expected).abs() <= 1e-12);
    }
    let limit = WeightedGraph::from_edges(3, &[(0, 2, 1.0), (1, 2, 2.0)]).unwrap();
    let d = distances(&limit, &DistanceKind::NaiveGeodesic, 0).unwrap();
    assert!((graph_spread(&d, &x).unwrap() - 10.0 / 3.0).abs() <= 1e-12);
}

#[test]
fn inverse_similarity_spread_approaches_its_limit() {
    // limit lengths: d(0,1) = 1 + 1/2 through node 2, d(0,2) = 1
    let limit = (1.5f64.powi(2) + 1.0) / 3.0;
    assert!((limit - 13.0 / 12.0).abs() <= 1e-15);
    let x = GraphSignal::uniform(3);
    for eps in [1e-2, 1e-4, 1e-6] {
        let d = distances(&fig3_triangle(eps), &DistanceKind::InverseSimilarityGeodesic, 0).unwrap();
        assert!((graph_spread(&d, &x).unwrap() - limit).abs() <= 2.0 * eps);
    }
}
