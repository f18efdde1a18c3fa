//! Dense symmetric eigendecomposition.
//!
//! The decomposition is computed with faer's self-adjoint solver and then put
//! into a canonical form: eigenvalues ascending, each eigenvector's first
//! non-negligible component made positive. This keeps golden tests stable.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::symmetrize_checked;

/// Sorted eigenvalues and orthonormal eigenvectors of a symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
}

impl SpectralDecomposition {
    /// Nondecreasing eigenvalues.
    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    /// Column `k` is the unit eigenvector for `eigenvalues()[k]`.
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn smallest(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn largest(&self) -> f64 {
        self.eigenvalues[self.dim() - 1]
    }

    /// Assembles `Σ λ_k f_k f_kᵀ`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let scaled = &self.eigenvectors * DMatrix::from_diagonal(&self.eigenvalues);
        scaled * self.eigenvectors.transpose()
    }
}

/// Eigendecomposes a symmetric matrix (symmetric within 1e−12).
pub fn eigendecompose(m: &DMatrix<f64>) -> Result<SpectralDecomposition> {
    let m = symmetrize_checked(m.clone())?;
    eigendecompose_symmetric(&m)
}

/// Eigendecomposition of a matrix the caller guarantees to be exactly symmetric.
pub(crate) fn eigendecompose_symmetric(m: &DMatrix<f64>) -> Result<SpectralDecomposition> {
    let n = m.nrows();
    if n == 0 {
        return Err(Error::Empty("cannot decompose a 0 x 0 matrix".into()));
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::Eigensolver("matrix has non-finite entries".into()));
    }
    let a = faer::Mat::<f64>::from_fn(n, n, |i, j| m[(i, j)]);
    let evd = a
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    let values = evd.S().column_vector();
    let vectors = evd.U();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));

    let eigenvalues = DVector::from_iterator(n, order.iter().map(|&k| values[k]));
    let mut eigenvectors = DMatrix::from_fn(n, n, |i, j| vectors[(i, order[j])]);
    for mut col in eigenvectors.column_iter_mut() {
        let lead = col.iter().copied().find(|x| x.abs() > 1e-12).unwrap_or(0.0);
        if lead < 0.0 {
            col.neg_mut();
        }
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::star_graph;
    use crate::graph::{normalized_laplacian, WeightedGraph};

    fn max_abs(m: &DMatrix<f64>) -> f64 {
        m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    fn assert_invariants(m: &DMatrix<f64>, d: &SpectralDecomposition) {
        let n = m.nrows();
        let v = d.eigenvectors();
        let gram = v.transpose() * v;
        assert!(max_abs(&(gram - DMatrix::identity(n, n))) <= 1e-9);
        assert!(max_abs(&(d.reconstruct() - m)) <= 1e-8);
        for k in 1..n {
            assert!(d.eigenvalues()[k - 1] <= d.eigenvalues()[k]);
        }
    }

    #[test]
    fn identity() {
        let m = DMatrix::identity(4, 4);
        let d = eigendecompose(&m).unwrap();
        for &l in d.eigenvalues().iter() {
            assert!((l - 1.0).abs() <= 1e-12);
        }
        assert_invariants(&m, &d);
    }

    #[test]
    fn diagonal_is_sorted_with_permuted_basis() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, 1.0, 2.0]));
        let d = eigendecompose(&m).unwrap();
        let expected = [1.0, 2.0, 3.0];
        for k in 0..3 {
            assert!((d.eigenvalues()[k] - expected[k]).abs() <= 1e-12);
        }
        // eigenvalue 1 lives on basis vector e1, 2 on e2, 3 on e0; signs canonical
        assert!((d.eigenvectors()[(1, 0)] - 1.0).abs() <= 1e-12);
        assert!((d.eigenvectors()[(2, 1)] - 1.0).abs() <= 1e-12);
        assert!((d.eigenvectors()[(0, 2)] - 1.0).abs() <= 1e-12);
        assert_invariants(&m, &d);
    }

    #[test]
    fn complete3_normalized_laplacian_spectrum() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]).unwrap();
        let l = normalized_laplacian(&g).unwrap();
        let d = eigendecompose(&l).unwrap();
        let expected = [0.0, 1.5, 1.5];
        for k in 0..3 {
            assert!((d.eigenvalues()[k] - expected[k]).abs() <= 1e-12);
        }
        assert_invariants(&l, &d);
    }

    #[test]
    fn star_100_extremes() {
        let l = normalized_laplacian(&star_graph(100).unwrap()).unwrap();
        let d = eigendecompose(&l).unwrap();
        assert!(d.smallest().abs() <= 1e-9);
        assert!((d.largest() - 2.0).abs() <= 1e-9);
        assert_invariants(&l, &d);
    }

    #[test]
    fn rejects_asymmetric_input() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.5, 1.0]);
        assert!(matches!(eigendecompose(&m), Err(Error::Asymmetric { .. })));
    }

    #[test]
    fn sign_convention_is_deterministic() {
        let m = DMatrix::from_row_slice(3, 3, &[2.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 2.0]);
        let a = eigendecompose(&m).unwrap();
        let b = eigendecompose(&m).unwrap();
        assert_eq!(a, b);
        for col in a.eigenvectors().column_iter() {
            let lead = col.iter().find(|x| x.abs() > 1e-12).unwrap();
            assert!(*lead > 0.0);
        }
    }
}
