mod common;

use common::{connected_graph, random_connected, random_permutation, unweighted_connected_graph};
use graphspread::{
    check_distance_properties, diffusion_distance, distance_matrix, distances, inverse_similarity, trial_rng,
    DistanceKind, LengthMatrix, WeightedGraph,
};
use graphspread::distances::DEFAULT_PERTURBATION;
use proptest::prelude::*;

/// Shortest simple path by exhaustive enumeration.
fn brute_force_geodesic(lengths: &LengthMatrix, u0: usize) -> Vec<f64> {
    fn walk(l: &LengthMatrix, at: usize, len: f64, seen: &mut Vec<bool>, best: &mut Vec<f64>) {
        best[at] = best[at].min(len);
        for next in 0..l.n() {
            if !seen[next] && l.has_edge(at, next) {
                seen[next] = true;
                walk(l, next, len + l.get(at, next), seen, best);
                seen[next] = false;
            }
        }
    }
    let n = lengths.n();
    let mut best = vec![f64::INFINITY; n];
    let mut seen = vec![false; n];
    seen[u0] = true;
    walk(lengths, u0, 0.0, &mut seen, &mut best);
    best
}

fn fig3_triangle(eps: f64) -> WeightedGraph {
    WeightedGraph::from_edges(3, &[(0, 1, eps), (0, 2, 1.0), (1, 2, 2.0)]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn geodesics_match_simple_path_enumeration((g, seed) in connected_graph(7)) {
        let u0 = (seed % g.n() as u64) as usize;
        let naive = distances(&g, &DistanceKind::NaiveGeodesic, u0).unwrap();
        let invsim = distances(&g, &DistanceKind::InverseSimilarityGeodesic, u0).unwrap();
        let naive_oracle = brute_force_geodesic(&LengthMatrix::from_weights(&g), u0);
        let invsim_oracle = brute_force_geodesic(&inverse_similarity(&g), u0);
        for v in 0..g.n() {
            prop_assert!((naive[v] - naive_oracle[v]).abs() <= 1e-12);
            prop_assert!((invsim[v] - invsim_oracle[v]).abs() <= 1e-12);
        }
    }

    #[test]
    fn diffusion_is_a_metric((g, seed) in connected_graph(8)) {
        let alpha = 0.1 + (seed % 50) as f64 / 10.0;
        let d = diffusion_distance(&g, alpha).unwrap();
        let d = d.matrix();
        let n = g.n();
        for u in 0..n {
            prop_assert!(d[(u, u)].abs() <= 1e-12);
            for v in 0..n {
                prop_assert!((d[(u, v)] - d[(v, u)]).abs() <= 1e-9);
                if u != v {
                    prop_assert!(d[(u, v)] > 0.0);
                }
                for w in 0..n {
                    prop_assert!(d[(u, w)] <= d[(u, v)] + d[(v, w)] + 1e-9);
                }
            }
        }
    }

    #[test]
    fn naive_and_inverse_similarity_agree_when_unweighted(g in unweighted_connected_graph(12)) {
        let a = distance_matrix(&g, &DistanceKind::NaiveGeodesic).unwrap();
        let b = distance_matrix(&g, &DistanceKind::InverseSimilarityGeodesic).unwrap();
        prop_assert_eq!(a.matrix(), b.matrix());
    }

    #[test]
    fn geodesics_are_permutation_equivariant((g, seed) in connected_graph(10)) {
        let perm = random_permutation(g.n(), &mut trial_rng(seed, 1));
        let h = g.permuted(&perm).unwrap();
        for kind in [DistanceKind::InverseSimilarityGeodesic, DistanceKind::Diffusion { alpha: 1.0 }] {
            let a = distance_matrix(&g, &kind).unwrap();
            let b = distance_matrix(&h, &kind).unwrap();
            for u in 0..g.n() {
                for v in 0..g.n() {
                    prop_assert!((a.get(u, v) - b.get(perm[u], perm[v])).abs() <= 1e-10);
                }
            }
        }
    }

    #[test]
    fn inverse_similarity_geodesic_is_monotone_and_continuous((g, seed) in connected_graph(9)) {
        let mut rng = trial_rng(seed, 2);
        let report = check_distance_properties(
            &DistanceKind::InverseSimilarityGeodesic, &g, 8, DEFAULT_PERTURBATION, &mut rng,
        ).unwrap();
        prop_assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn diffusion_is_nonnegative_and_separates((g, seed) in connected_graph(9)) {
        let mut rng = trial_rng(seed, 3);
        let report = check_distance_properties(
            &DistanceKind::Diffusion { alpha: 1.0 }, &g, 4, DEFAULT_PERTURBATION, &mut rng,
        ).unwrap();
        prop_assert!(report.nonnegative && report.zero_distance_equivalence);
    }

    #[test]
    fn small_weight_changes_move_inverse_similarity_distances_little((g, seed) in connected_graph(8)) {
        // Lipschitz probe: lengths 1/w change by at most delta / w^2
        let mut rng = trial_rng(seed, 4);
        let delta = 1e-6;
        let report = check_distance_properties(
            &DistanceKind::InverseSimilarityGeodesic, &g, 4, delta, &mut rng,
        ).unwrap();
        let w_min = g.edges().iter().map(|e| e.2).fold(f64::INFINITY, f64::min);
        let bound = g.n() as f64 * delta / (w_min * w_min);
        prop_assert!(report.continuity_modulus <= bound, "{} > {bound}", report.continuity_modulus);
    }
}

#[test]
fn two_node_diffusion_closed_form() {
    for w in [0.1, 1.0, 10.0] {
        let g = WeightedGraph::from_edges(2, &[(0, 1, w)]).unwrap();
        let d = diffusion_distance(&g, 1.0).unwrap();
        let expected = 2f64.sqrt() / (1.0 + 2.0 * w);
        assert!((d.get(0, 1) - expected).abs() <= 1e-12, "w = {w}");
    }
}

#[test]
fn naive_geodesic_jumps_as_a_weight_vanishes() {
    // shrinking the weak edge shortens the naive path, but removing it lengthens it to 3
    let before = distances(&fig3_triangle(0.1), &DistanceKind::NaiveGeodesic, 0).unwrap();
    let mut rng = trial_rng(7, 0);
    let report = check_distance_properties(
        &DistanceKind::NaiveGeodesic,
        &fig3_triangle(0.1),
        32,
        DEFAULT_PERTURBATION,
        &mut rng,
    )
    .unwrap();
    assert!(!report.monotone);
    let limit = WeightedGraph::from_edges(3, &[(0, 2, 1.0), (1, 2, 2.0)]).unwrap();
    let after = distances(&limit, &DistanceKind::NaiveGeodesic, 0).unwrap();
    assert!((before[1] - 0.1).abs() <= 1e-15);
    assert_eq!(after[1], 3.0);
}

#[test]
fn inverse_similarity_geodesic_is_continuous_at_a_vanishing_weight() {
    let limit = WeightedGraph::from_edges(3, &[(0, 2, 1.0), (1, 2, 2.0)]).unwrap();
    let at_limit = distances(&limit, &DistanceKind::InverseSimilarityGeodesic, 0).unwrap();
    for eps in [1e-2, 1e-4, 1e-6] {
        let d = distances(&fig3_triangle(eps), &DistanceKind::InverseSimilarityGeodesic, 0).unwrap();
        assert!((d - &at_limit).amax() <= eps);
    }
}

#[test]
fn many_random_graphs_inverse_similarity_never_increases() {
    let mut rng = trial_rng(11, 0);
    for _ in 0..20 {
        let g = random_connected(9, 0.3, false, &mut rng);
        let r = check_distance_properties(&DistanceKind::InverseSimilarityGeodesic, &g, 16, 0.5, &mut rng).unwrap();
        assert!(r.monotone && r.max_increase <= 1e-12);
    }
}
