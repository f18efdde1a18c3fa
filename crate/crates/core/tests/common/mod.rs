#![allow(dead_code)]

use graphspread::{trial_rng, GraphSignal, WeightedGraph};
use proptest::prelude::*;
use rand::Rng;

/// A random connected graph: a random spanning tree plus each remaining pair
/// with probability `density`. Weights are uniform on `[0.1, 2)`, or 1 when
/// `unweighted`.
pub fn random_connected<R: Rng + ?Sized>(n: usize, density: f64, unweighted: bool, rng: &mut R) -> WeightedGraph {
    let weight = |rng: &mut R| if unweighted { 1.0 } else { rng.random_range(0.1..2.0) };
    let mut edges = Vec::new();
    let mut present = vec![vec![false; n]; n];
    for v in 1..n {
        let u = rng.random_range(0..v);
        edges.push((u, v, weight(rng)));
        present[u][v] = true;
    }
    for u in 0..n {
        for v in (u + 1)..n {
            if !present[u][v] && rng.random_bool(density) {
                edges.push((u, v, weight(rng)));
            }
        }
    }
    WeightedGraph::from_edges(n, &edges).unwrap()
}

/// A random unit-norm signal with Gaussian-like entries.
pub fn random_unit_signal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> GraphSignal {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        if let Ok(x) = GraphSignal::new(v).normalize() {
            return x;
        }
    }
}

pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    perm
}

/// Strategy for `(graph, seed)` with `2 ≤ n ≤ max_n`.
pub fn connected_graph(max_n: usize) -> impl Strategy<Value = (WeightedGraph, u64)> {
    (2..=max_n, 0.0..0.8f64, any::<u64>()).prop_map(|(n, density, seed)| {
        let mut rng = trial_rng(seed, 0);
        (random_connected(n, density, false, &mut rng), seed)
    })
}

pub fn unweighted_connected_graph(max_n: usize) -> impl Strategy<Value = WeightedGraph> {
    (2..=max_n, 0.0..0.8f64, any::<u64>()).prop_map(|(n, density, seed)| {
        let mut rng = trial_rng(seed, 0);
        random_connected(n, density, true, &mut rng)
    })
}
