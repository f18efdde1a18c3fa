//! Graph spread, spectral spread, graph Fourier transform and the
//! p-Dirichlet form.
//!
//! Spreads are defined for unit-norm signals only. Callers normalize
//! explicitly with [`GraphSignal::normalize`]; nothing here rescales silently.

use nalgebra::{DMatrix, DVector};

use crate::distances::{distances, DistanceKind};
use crate::error::{Error, Result};
use crate::graph::{normalized_laplacian, GraphSignal, WeightedGraph};
use crate::spectral::{eigendecompose_symmetric, SpectralDecomposition};

/// A signal's position in the (spectral spread, graph spread) plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpreadPair {
    pub spectral: f64,
    pub graph: f64,
    pub u0: usize,
}

/// `Σ_u d(u₀, u)² x(u)²` for a unit-norm `x`.
pub fn graph_spread(dist_from_u0: &DVector<f64>, x: &GraphSignal) -> Result<f64> {
    x.require_len(dist_from_u0.len())?;
    x.require_unit()?;
    if let Some(u) = dist_from_u0.iter().position(|d| !d.is_finite()) {
        return Err(Error::Domain(format!("distance to node {u} is not finite")));
    }
    Ok(dist_from_u0
        .iter()
        .zip(x.values().iter())
        .map(|(d, xu)| d * d * xu * xu)
        .sum())
}

/// Graph Fourier transform: coefficients `f_kᵀ x` in the eigenbasis.
pub fn gft(decomp: &SpectralDecomposition, x: &GraphSignal) -> Result<DVector<f64>> {
    x.require_len(decomp.dim())?;
    Ok(decomp.eigenvectors().tr_mul(x.values()))
}

/// `Σ_k λ_k x̂_k²` for a unit-norm `x`.
pub fn spectral_spread(decomp: &SpectralDecomposition, x: &GraphSignal) -> Result<f64> {
    x.require_unit()?;
    let coeffs = gft(decomp, x)?;
    Ok(decomp
        .eigenvalues()
        .iter()
        .zip(coeffs.iter())
        .map(|(l, c)| l * c * c)
        .sum())
}

/// `xᵀ M x`.
pub fn quadratic_form(m: &DMatrix<f64>, x: &DVector<f64>) -> f64 {
    x.dot(&(m * x))
}

/// Spectral and graph spread of `x` around `u0` under the given distance.
pub fn spread_pair(
    g: &WeightedGraph,
    kind: &DistanceKind,
    u0: usize,
    x: &GraphSignal,
) -> Result<SpreadPair> {
    x.require_len(g.n())?;
    x.require_unit()?;
    let dist = distances(g, kind, u0)?;
    let decomp = eigendecompose_symmetric(&normalized_laplacian(g)?)?;
    Ok(SpreadPair {
        spectral: spectral_spread(&decomp, x)?,
        graph: graph_spread(&dist, x)?,
        u0,
    })
}

/// Discrete p-Dirichlet form
/// `(1/p) Σ_u ( Σ_{v ~ u} W_uv (x(v) − x(u))^p )^{1/p}`.
///
/// The `1/p` root is taken per node, outside the inner sum. For p = 2 this is
/// not the usual `Σ W_uv (Δx)²` energy.
pub fn dirichlet_form(g: &WeightedGraph, x: &GraphSignal, p: u32) -> Result<f64> {
    if p == 0 {
        return Err(Error::InvalidParameter("p must be at least 1".into()));
    }
    x.require_len(g.n())?;
    let values = x.values();
    let exponent = i32::try_from(p).map_err(|_| Error::InvalidParameter(format!("p = {p} too large")))?;
    let mut total = 0.0;
    for u in 0..g.n() {
        let inner: f64 = (0..g.n())
            .filter(|&v| g.weight(u, v) > 0.0)
            .map(|v| g.weight(u, v) * (values[v] - values[u]).powi(exponent))
            .sum();
        if inner < 0.0 && p > 1 {
            return Err(Error::Domain(format!(
                "inner sum at node {u} is negative ({inner}); its 1/{p} power is undefined"
            )));
        }
        total += if p == 1 { inner } else { inner.powf(1.0 / p as f64) };
    }
    Ok(total / p as f64)
}
