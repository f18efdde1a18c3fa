//! Graph spreads, spectral spreads and lower uncertainty curves for weighted graphs.
//!
//! A signal `x` on a graph cannot be concentrated both around a node `u0` and
//! at low graph frequencies. The two sides of that trade-off are measured by
//!
//! - the graph spread `Σ_u d(u0, u)² x(u)²`, for a node distance `d`, and
//! - the spectral spread `Σ_k λ_k x̂_k²`, over the normalized Laplacian spectrum,
//!
//! and the achievable pairs are bounded below by the uncertainty curve.
//!
//! Reading similarity weights directly as path lengths makes the graph spread
//! jump when a weak edge vanishes. This crate provides distances that behave
//! continuously in the weights: geodesics over inverse similarities and the
//! diffusion distance.
//!
//! ```
//! use graphspread::{complete_graph, sandwich_curve, DistanceKind};
//!
//! let g = complete_graph(10).unwrap();
//! let curve = sandwich_curve(&g, 0, &DistanceKind::InverseSimilarityGeodesic, 1e-6).unwrap();
//! assert!((curve.first().g - 0.9).abs() < 1e-9);
//! assert!(curve.last().g.abs() < 1e-9);
//! ```

pub mod distances;
pub mod error;
pub mod generators;
pub mod graph;
pub mod spectral;
pub mod spreads;
pub mod uncertainty;

pub use distances::{
    all_pairs_geodesic, check_distance_properties, diffusion_distance, distance_matrix, distances,
    geodesic_from, inverse_similarity, AllPairs, DistanceKind, DistanceMatrix, LengthMatrix,
    PropertyReport,
};
pub use error::{Error, Result};
pub use generators::{
    complete_graph, gaussian_kernel, image_grid_graph, path_graph, random_geometric,
    randomize_weights, ring_graph, star_graph, trial_rng, GeometricGraph, GrayImage, PointCloud,
};
pub use graph::{
    combinatorial_laplacian, degree_matrix, normalized_laplacian, GraphSignal, WeightedGraph,
};
pub use spectral::{eigendecompose, SpectralDecomposition};
pub use spreads::{
    dirichlet_form, gft, graph_spread, spectral_spread, spread_pair, SpreadPair,
};
pub use uncertainty::{
    mean_curve, normalize_curve, normalized_sandwich_curve, sandwich_curve, supporting_line, supporting_point, CurvePoint,
    MeanCurve, SupportingLine, UncertaintyCurve,
};

pub use nalgebra::{DMatrix, DVector};
