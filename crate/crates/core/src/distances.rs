//! Node-distance functions used by the graph spread.
//!
//! Four kinds are supported: the naive geodesic that reads similarity weights
//! as lengths, the geodesic over inverted similarities, the diffusion distance
//! `‖(I + αL)⁻¹(x_u − x_v)‖₂`, and geodesics over caller-provided lengths.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{combinatorial_laplacian, parse_edge_list, WeightedGraph};

/// Edge lengths; `+∞` marks an absent edge. Symmetric with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct LengthMatrix {
    lengths: DMatrix<f64>,
}

impl LengthMatrix {
    pub fn from_matrix(lengths: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = lengths.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        for u in 0..rows {
            for v in 0..cols {
                let x = lengths[(u, v)];
                let bad_diag = u == v && x != 0.0;
                if x.is_nan() || x < 0.0 || bad_diag || x != lengths[(v, u)] {
                    return Err(Error::InvalidEntry {
                        row: u,
                        col: v,
                        value: x,
                    });
                }
            }
        }
        Ok(LengthMatrix { lengths })
    }

    /// `n` nodes, no edges.
    pub fn empty(n: usize) -> Self {
        let mut lengths = DMatrix::from_element(n, n, f64::INFINITY);
        lengths.fill_diagonal(0.0);
        LengthMatrix { lengths }
    }

    /// Parses the graph text format with lengths in place of weights.
    /// Pairs not listed are absent edges; zero lengths are allowed.
    pub fn parse(text: &str) -> Result<Self> {
        let (n, entries) = parse_edge_list(text)?;
        let mut out = Self::empty(n);
        for (_, u, v, x) in entries {
            out.lengths[(u, v)] = x;
            out.lengths[(v, u)] = x;
        }
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.lengths.nrows()
    }

    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.lengths[(u, v)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.lengths
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.lengths[(u, v)].is_finite()
    }

    pub fn set(&mut self, u: usize, v: usize, x: f64) -> Result<()> {
        if u == v || x.is_nan() || x < 0.0 {
            return Err(Error::InvalidEntry {
                row: u,
                col: v,
                value: x,
            });
        }
        self.lengths[(u, v)] = x;
        self.lengths[(v, u)] = x;
        Ok(())
    }

    /// Lengths equal to the similarity weights, `+∞` where `W_uv = 0`.
    pub fn from_weights(g: &WeightedGraph) -> Self {
        let n = g.n();
        let lengths = DMatrix::from_fn(n, n, |u, v| match g.weight(u, v) {
            _ if u == v => 0.0,
            0.0 => f64::INFINITY,
            w => w,
        });
        LengthMatrix { lengths }
    }

    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        crate::graph::check_permutation(self.n(), perm)?;
        let n = self.n();
        let mut lengths = DMatrix::zeros(n, n);
        for u in 0..n {
            for v in 0..n {
                lengths[(perm[u], perm[v])] = self.lengths[(u, v)];
            }
        }
        Ok(LengthMatrix { lengths })
    }
}

/// Finite, symmetric, zero-diagonal node distances.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    distances: DMatrix<f64>,
}

impl DistanceMatrix {
    /// Fails if any entry is infinite, NaN or negative, or the diagonal is nonzero.
    pub fn new(distances: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = distances.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        for u in 0..rows {
            for v in 0..cols {
                let d = distances[(u, v)];
                if d == f64::INFINITY {
                    return Err(Error::Disconnected {
                        source_node: u,
                        unreachable: v,
                    });
                }
                if !d.is_finite() || d < 0.0 || (u == v && d != 0.0) {
                    return Err(Error::InvalidEntry {
                        row: u,
                        col: v,
                        value: d,
                    });
                }
            }
        }
        Ok(DistanceMatrix { distances })
    }

    pub fn n(&self) -> usize {
        self.distances.nrows()
    }

    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.distances[(u, v)]
    }

    pub fn row(&self, u: usize) -> DVector<f64> {
        self.distances.row(u).transpose()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.distances
    }
}

/// Which node distance enters the graph spread.
#[derive(Debug, Clone, PartialEq)]
pub enum DistanceKind {
    /// Geodesic with the similarity weights used directly as lengths.
    NaiveGeodesic,
    /// Geodesic over `1 / W_uv`.
    InverseSimilarityGeodesic,
    /// Diffusion distance with parameter `alpha > 0`.
    Diffusion { alpha: f64 },
    /// Geodesic over lengths supplied by the caller.
    ExplicitLengths(LengthMatrix),
}

impl DistanceKind {
    pub fn diffusion(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(DistanceKind::Diffusion { alpha })
    }

    /// Parses `naive`, `invsim` and `diffusion:<alpha>`. Explicit lengths come
    /// from a file and are constructed by the caller.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(DistanceKind::NaiveGeodesic),
            "invsim" => Ok(DistanceKind::InverseSimilarityGeodesic),
            "diffusion" => Self::diffusion(1.0),
            _ => {
                if let Some(a) = s.strip_prefix("diffusion:") {
                    let alpha: f64 = a.parse().map_err(|_| {
                        Error::InvalidParameter(format!("invalid diffusion parameter {a:?}"))
                    })?;
                    Self::diffusion(alpha)
                } else {
                    Err(Error::InvalidParameter(format!("unknown distance kind {s:?}")))
                }
            }
        }
    }

    pub fn is_geodesic(&self) -> bool {
        !matches!(self, DistanceKind::Diffusion { .. })
    }
}

impl fmt::Display for DistanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistanceKind::NaiveGeodesic => write!(f, "naive"),
            DistanceKind::InverseSimilarityGeodesic => write!(f, "invsim"),
            DistanceKind::Diffusion { alpha } => write!(f, "diffusion:{alpha}"),
            DistanceKind::ExplicitLengths(_) => write!(f, "explicit"),
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "diffusion parameter must be positive, got {alpha}"
        )));
    }
    Ok(())
}

/// Inverse similarity lengths: `∞` where `W_uv = 0`, `0` where `W_uv = ∞`, else `1 / W_uv`.
pub fn inverse_similarity(g: &WeightedGraph) -> LengthMatrix {
    let n = g.n();
    let lengths = DMatrix::from_fn(n, n, |u, v| {
        let w = g.weight(u, v);
        if u == v {
            0.0
        } else if w == 0.0 {
            f64::INFINITY
        } else if w == f64::INFINITY {
            0.0
        } else {
            1.0 / w
        }
    });
    LengthMatrix { lengths }
}

/// Single-source shortest path lengths; `+∞` for unreachable nodes.
pub fn geodesic_from(lengths: &LengthMatrix, u0: usize) -> Result<DVector<f64>> {
    let n = lengths.n();
    if u0 >= n {
        return Err(Error::NodeOutOfRange { node: u0, n });
    }
    let mut dist = DVector::from_element(n, f64::INFINITY);
    let mut done = vec![false; n];
    dist[u0] = 0.0;
    // dense label-setting: O(n²) is optimal for a full matrix
    for _ in 0..n {
        let mut best = None;
        for u in 0..n {
            if !done[u] && dist[u].is_finite() && best.map_or(true, |b: usize| dist[u] < dist[b]) {
                best = Some(u);
            }
        }
        let Some(u) = best else { break };
        done[u] = true;
        for v in 0..n {
            let len = lengths.get(u, v);
            if done[v] || !len.is_finite() {
                continue;
            }
            let candidate = dist[u] + len;
            if candidate < dist[v] {
                dist[v] = candidate;
            }
        }
    }
    Ok(dist)
}

/// All-pairs geodesics, possibly containing `+∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct AllPairs {
    pub distances: DMatrix<f64>,
    /// Pairs `(u, v)`, `u < v`, with no connecting path.
    pub unreachable: Vec<(usize, usize)>,
}

impl AllPairs {
    pub fn is_connected(&self) -> bool {
        self.unreachable.is_empty()
    }

    pub fn into_distance_matrix(self) -> Result<DistanceMatrix> {
        DistanceMatrix::new(self.distances)
    }
}

pub fn all_pairs_geodesic(lengths: &LengthMatrix) -> AllPairs {
    let n = lengths.n();
    let mut distances = DMatrix::zeros(n, n);
    for u in 0..n {
        let row = geodesic_from(lengths, u).expect("node in range");
        distances.set_row(u, &row.transpose());
    }
    // floating-point sums along a path and its reverse can differ in the last bit
    for u in 0..n {
        for v in (u + 1)..n {
            let d = distances[(u, v)].min(distances[(v, u)]);
            distances[(u, v)] = d;
            distances[(v, u)] = d;
        }
    }
    let mut unreachable = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if distances[(u, v)].is_infinite() {
                unreachable.push((u, v));
            }
        }
    }
    AllPairs {
        distances,
        unreachable,
    }
}

/// Columns of `(I + αL)⁻¹`, by Cholesky factorization.
fn smoothed_indicators(g: &WeightedGraph, alpha: f64) -> Result<DMatrix<f64>> {
    check_alpha(alpha)?;
    let n = g.n();
    let system = DMatrix::identity(n, n) + combinatorial_laplacian(g) * alpha;
    let chol = system
        .cholesky()
        .ok_or_else(|| Error::Domain("I + αL is not positive definite".into()))?;
    Ok(chol.inverse())
}

fn column_distance(z: &DMatrix<f64>, u: usize, v: usize) -> f64 {
    if u == v {
        return 0.0;
    }
    (z.column(u) - z.column(v)).norm()
}

/// Diffusion distance `d(u, v) = ‖(I + αL)⁻¹(x_u − x_v)‖₂` for all pairs.
pub fn diffusion_distance(g: &WeightedGraph, alpha: f64) -> Result<DistanceMatrix> {
    let z = smoothed_indicators(g, alpha)?;
    let n = g.n();
    let mut d = DMatrix::zeros(n, n);
    for u in 0..n {
        for v in (u + 1)..n {
            let x = column_distance(&z, u, v);
            d[(u, v)] = x;
            d[(v, u)] = x;
        }
    }
    DistanceMatrix::new(d)
}

fn require_reachable(dist: DVector<f64>, u0: usize) -> Result<DVector<f64>> {
    if let Some(v) = dist.iter().position(|d| d.is_infinite()) {
        return Err(Error::Disconnected {
            source_node: u0,
            unreachable: v,
        });
    }
    Ok(dist)
}

fn lengths_for(g: &WeightedGraph, kind: &DistanceKind) -> Result<Option<LengthMatrix>> {
    Ok(match kind {
        DistanceKind::NaiveGeodesic => Some(LengthMatrix::from_weights(g)),
        DistanceKind::InverseSimilarityGeodesic => Some(inverse_similarity(g)),
        DistanceKind::ExplicitLengths(lengths) => {
            if lengths.n() != g.n() {
                return Err(Error::DimensionMismatch {
                    expected: g.n(),
                    found: lengths.n(),
                });
            }
            Some(lengths.clone())
        }
        DistanceKind::Diffusion { .. } => None,
    })
}

/// Distances from `u0` to every node under `kind`.
pub fn distances(g: &WeightedGraph, kind: &DistanceKind, u0: usize) -> Result<DVector<f64>> {
    g.check_node(u0)?;
    match lengths_for(g, kind)? {
        Some(lengths) => require_reachable(geodesic_from(&lengths, u0)?, u0),
        None => {
            let DistanceKind::Diffusion { alpha } = kind else {
                unreachable!()
            };
            let z = smoothed_indicators(g, *alpha)?;
            Ok(DVector::from_iterator(
                g.n(),
                (0..g.n()).map(|v| column_distance(&z, u0, v)),
            ))
        }
    }
}

/// All-pairs distances under `kind`; fails on unreachable pairs.
pub fn distance_matrix(g: &WeightedGraph, kind: &DistanceKind) -> Result<DistanceMatrix> {
    match lengths_for(g, kind)? {
        Some(lengths) => all_pairs_geodesic(&lengths).into_distance_matrix(),
        None => {
            let DistanceKind::Diffusion { alpha } = kind else {
                unreachable!()
            };
            diffusion_distance(g, *alpha)
        }
    }
}

/// Outcome of the empirical distance-property checks.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyReport {
    /// All distances are nonnegative.
    pub nonnegative: bool,
    /// Every zero-distance pair has identical distance profiles.
    pub zero_distance_equivalence: bool,
    /// No distance increased when a single edge weight was increased.
    pub monotone: bool,
    /// Largest increase observed over all perturbations (≤ 0 when monotone).
    pub max_increase: f64,
    /// Largest absolute distance change observed; the continuity modulus at this perturbation.
    pub continuity_modulus: f64,
    pub trials: usize,
    pub perturbation: f64,
}

impl PropertyReport {
    pub fn all_pass(&self) -> bool {
        self.nonnegative && self.zero_distance_equivalence && self.monotone
    }
}

pub const DEFAULT_PROPERTY_TRIALS: usize = 32;
pub const DEFAULT_PERTURBATION: f64 = 0.1;

/// Empirically checks nonnegativity, zero-distance equivalence and monotone
/// non-increase under single-edge weight increases.
pub fn check_distance_properties<R: Rng + ?Sized>(
    kind: &DistanceKind,
    g: &WeightedGraph,
    trials: usize,
    perturbation: f64,
    rng: &mut R,
) -> Result<PropertyReport> {
    if !(perturbation > 0.0 && perturbation.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "perturbation must be positive, got {perturbation}"
        )));
    }
    let base = distance_matrix(g, kind)?;
    let n = g.n();
    let d = base.matrix();

    let nonnegative = d.iter().all(|&x| x >= 0.0);

    let mut zero_distance_equivalence = true;
    for u in 0..n {
        for v in (u + 1)..n {
            if d[(u, v)] <= 1e-12 && (0..n).any(|w| (d[(u, w)] - d[(v, w)]).abs() > 1e-9) {
                zero_distance_equivalence = false;
            }
        }
    }

    let edges = g.edges();
    if edges.is_empty() {
        return Err(Error::Empty("graph has no edges to perturb".into()));
    }
    let mut max_increase = f64::NEG_INFINITY;
    let mut continuity_modulus: f64 = 0.0;
    for _ in 0..trials {
        let (u, v, w) = edges[rng.random_range(0..edges.len())];
        let perturbed = g.with_weight(u, v, w + perturbation)?;
        let after = distance_matrix(&perturbed, kind)?;
        for (before, now) in d.iter().zip(after.matrix().iter()) {
            max_increase = max_increase.max(now - before);
            continuity_modulus = continuity_modulus.max((now - before).abs());
        }
    }
    Ok(PropertyReport {
        nonnegative,
        zero_distance_equivalence,
        monotone: trials == 0 || max_increase <= 1e-12,
        max_increase,
        continuity_modulus,
        trials,
        perturbation,
    })
}
