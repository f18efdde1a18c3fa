//! Weighted undirected graphs, signals over their nodes, and Laplacians.
//!
//! Graphs are stored as dense symmetric similarity matrices: entry `(u, v)` is
//! the weight of edge `{u, v}` and zero means the edge is absent.

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Absolute tolerance used when checking symmetry of ingested matrices.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// A connected-or-not, simple, undirected graph with nonnegative weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    weights: DMatrix<f64>,
}

impl WeightedGraph {
    /// Builds a graph from a dense similarity matrix.
    ///
    /// The matrix must be square, symmetric within [`SYMMETRY_TOLERANCE`], have
    /// a zero diagonal and finite nonnegative entries. It is symmetrized as
    /// `(W + Wᵀ) / 2` after validation.
    pub fn from_matrix(weights: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = weights.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        for u in 0..rows {
            for v in 0..cols {
                let w = weights[(u, v)];
                if !w.is_finite() || w < 0.0 || (u == v && w != 0.0) {
                    return Err(Error::InvalidEntry {
                        row: u,
                        col: v,
                        value: w,
                    });
                }
            }
        }
        let weights = symmetrize_checked(weights)?;
        Ok(WeightedGraph { weights })
    }

    /// Builds a graph on `n` nodes from an undirected edge list.
    ///
    /// Self-loops, duplicate pairs and non-positive or non-finite weights are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut weights = DMatrix::zeros(n, n);
        let mut seen = HashSet::new();
        for &(u, v, w) in edges {
            check_pair(n, u, v)?;
            if u == v {
                return Err(Error::InvalidEntry {
                    row: u,
                    col: v,
                    value: w,
                });
            }
            if !w.is_finite() || w <= 0.0 {
                return Err(Error::InvalidEntry {
                    row: u,
                    col: v,
                    value: w,
                });
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidParameter(format!("duplicate edge ({u}, {v})")));
            }
            weights[(u, v)] = w;
            weights[(v, u)] = w;
        }
        Ok(WeightedGraph { weights })
    }

    /// Parses the text graph format: first line `n`, then one `u v w` line per edge.
    ///
    /// Blank lines and lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let (n, entries) = parse_edge_list(text)?;
        for (line, u, v, w) in &entries {
            if *w <= 0.0 {
                return Err(Error::parse(*line, format!("weight of ({u}, {v}) must be positive")));
            }
        }
        let edges: Vec<_> = entries.iter().map(|&(_, u, v, w)| (u, v, w)).collect();
        Self::from_edges(n, &edges)
    }

    /// Serializes the graph in the text format accepted by [`WeightedGraph::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n());
        for (u, v, w) in self.edges() {
            let _ = writeln!(out, "{u} {v} {w:?}");
        }
        out
    }

    pub fn n(&self) -> usize {
        self.weights.nrows()
    }

    pub fn weights(&self) -> &DMatrix<f64> {
        &self.weights
    }

    pub fn weight(&self, u: usize, v: usize) -> f64 {
        self.weights[(u, v)]
    }

    /// Edges `(u, v, w)` with `u < v`, in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let n = self.n();
        let mut out = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                let w = self.weights[(u, v)];
                if w != 0.0 {
                    out.push((u, v, w));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    /// Returns a copy with the weight of `{u, v}` replaced by `w`.
    pub fn with_weight(&self, u: usize, v: usize, w: f64) -> Result<Self> {
        check_pair(self.n(), u, v)?;
        if u == v || !w.is_finite() || w < 0.0 {
            return Err(Error::InvalidEntry {
                row: u,
                col: v,
                value: w,
            });
        }
        let mut weights = self.weights.clone();
        weights[(u, v)] = w;
        weights[(v, u)] = w;
        Ok(WeightedGraph { weights })
    }

    /// Relabels nodes so that old node `u` becomes node `perm[u]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(self.n(), perm)?;
        let n = self.n();
        let mut inverse = vec![0; n];
        for (old, &new) in perm.iter().enumerate() {
            inverse[new] = old;
        }
        let weights = DMatrix::from_fn(n, n, |i, j| self.weights[(inverse[i], inverse[j])]);
        Ok(WeightedGraph { weights })
    }

    pub fn degrees(&self) -> DVector<f64> {
        DVector::from_iterator(self.n(), self.weights.row_iter().map(|r| r.sum()))
    }

    pub fn neighbors(&self, u: usize) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.weights[(u, v)] != 0.0).collect()
    }

    /// True iff every node is reachable from node 0 over nonzero weights.
    pub fn is_connected(&self) -> bool {
        self.first_unreachable().is_none()
    }

    /// Smallest node not reachable from node 0, if any.
    pub fn first_unreachable(&self) -> Option<usize> {
        let n = self.n();
        if n == 0 {
            return None;
        }
        let mut visited = vec![false; n];
        let mut queue = VecDeque::from([0]);
        visited[0] = true;
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if !visited[v] && self.weights[(u, v)] != 0.0 {
                    visited[v] = true;
                    queue.push_back(v);
                }
            }
        }
        visited.iter().position(|&seen| !seen)
    }

    pub(crate) fn check_node(&self, u: usize) -> Result<()> {
        if u >= self.n() {
            return Err(Error::NodeOutOfRange { node: u, n: self.n() });
        }
        Ok(())
    }
}

/// Diagonal matrix of node degrees, `D_uu = Σ_v W_uv`.
pub fn degree_matrix(g: &WeightedGraph) -> DMatrix<f64> {
    DMatrix::from_diagonal(&g.degrees())
}

/// Normalized Laplacian `I − D^{-1/2} W D^{-1/2}`.
pub fn normalized_laplacian(g: &WeightedGraph) -> Result<DMatrix<f64>> {
    let d = g.degrees();
    if let Some(u) = d.iter().position(|&x| x <= 0.0) {
        return Err(Error::IsolatedNode(u));
    }
    let inv_sqrt: Vec<f64> = d.iter().map(|x| 1.0 / x.sqrt()).collect();
    let n = g.n();
    Ok(DMatrix::from_fn(n, n, |u, v| {
        if u == v {
            1.0
        } else {
            -g.weight(u, v) * inv_sqrt[u] * inv_sqrt[v]
        }
    }))
}

/// Combinatorial Laplacian `D − W`.
pub fn combinatorial_laplacian(g: &WeightedGraph) -> DMatrix<f64> {
    let mut l = -g.weights().clone();
    for (u, d) in g.degrees().iter().enumerate() {
        l[(u, u)] = *d;
    }
    l
}

/// Checks symmetry within [`SYMMETRY_TOLERANCE`] and returns `(M + Mᵀ) / 2`.
pub fn symmetrize_checked(m: DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    for u in 0..rows {
        for v in (u + 1)..cols {
            let diff = (m[(u, v)] - m[(v, u)]).abs();
            if diff.is_nan() || diff > SYMMETRY_TOLERANCE {
                return Err(Error::Asymmetric { row: u, col: v, diff });
            }
        }
    }
    let t = m.transpose();
    Ok((m + t) * 0.5)
}

/// A real-valued signal over the nodes of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSignal {
    values: DVector<f64>,
}

impl GraphSignal {
    pub fn new(values: Vec<f64>) -> Self {
        GraphSignal {
            values: DVector::from_vec(values),
        }
    }

    pub fn from_vector(values: DVector<f64>) -> Self {
        GraphSignal { values }
    }

    /// Unit-norm indicator of node `u` on `n` nodes.
    pub fn delta(n: usize, u: usize) -> Self {
        let mut values = DVector::zeros(n);
        values[u] = 1.0;
        GraphSignal { values }
    }

    /// Constant unit-norm signal on `n` nodes.
    pub fn uniform(n: usize) -> Self {
        GraphSignal {
            values: DVector::from_element(n, 1.0 / (n as f64).sqrt()),
        }
    }

    /// Parses one decimal per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let x: f64 = line
                .parse()
                .map_err(|_| Error::parse(i + 1, format!("not a number: {line:?}")))?;
            if !x.is_finite() {
                return Err(Error::parse(i + 1, "signal values must be finite"));
            }
            values.push(x);
        }
        if values.is_empty() {
            return Err(Error::Empty("signal file has no values".into()));
        }
        Ok(Self::new(values))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &DVector<f64> {
        &self.values
    }

    pub fn norm(&self) -> f64 {
        self.values.norm()
    }

    /// Returns the signal scaled to unit Euclidean norm.
    pub fn normalize(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Degenerate(format!("cannot normalize a signal of norm {norm}")));
        }
        Ok(GraphSignal {
            values: &self.values / norm,
        })
    }

    pub fn is_unit(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    pub(crate) fn require_unit(&self) -> Result<()> {
        if !self.is_unit(1e-9) {
            return Err(Error::NotUnitNorm(self.norm()));
        }
        Ok(())
    }

    pub(crate) fn require_len(&self, n: usize) -> Result<()> {
        if self.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.len(),
            });
        }
        Ok(())
    }
}

fn check_pair(n: usize, u: usize, v: usize) -> Result<()> {
    for node in [u, v] {
        if node >= n {
            return Err(Error::NodeOutOfRange { node, n });
        }
    }
    Ok(())
}

pub(crate) fn check_permutation(n: usize, perm: &[usize]) -> Result<()> {
    if perm.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: perm.len(),
        });
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidParameter("not a permutation".into()));
        }
    }
    Ok(())
}

/// Parses `n` followed by `u v value` lines, returning `(line, u, v, value)` entries.
///
/// Rejects self-loops, duplicate unordered pairs, out-of-range nodes and
/// negative or non-finite values. Zero values are passed through.
pub(crate) fn parse_edge_list(text: &str) -> Result<(usize, Vec<(usize, usize, usize, f64)>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (first, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing node count"))?;
    let n: usize = header
        .parse()
        .map_err(|_| Error::parse(first, format!("invalid node count {header:?}")))?;
    let mut seen = HashSet::new();
    let mut entries = Vec::new();
    for (line, text) in lines {
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::parse(line, "expected `u v w`"));
        }
        let u: usize = fields[0]
            .parse()
            .map_err(|_| Error::parse(line, format!("invalid node index {:?}", fields[0])))?;
        let v: usize = fields[1]
            .parse()
            .map_err(|_| Error::parse(line, format!("invalid node index {:?}", fields[1])))?;
        let w: f64 = fields[2]
            .parse()
            .map_err(|_| Error::parse(line, format!("invalid value {:?}", fields[2])))?;
        if u >= n || v >= n {
            return Err(Error::parse(line, format!("node index out of range for n = {n}")));
        }
        if u == v {
            return Err(Error::parse(line, format!("self-loop at node {u}")));
        }
        if !w.is_finite() || w < 0.0 {
            return Err(Error::parse(line, format!("value must be finite and nonnegative, got {w}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::parse(line, format!("duplicate pair ({u}, {v})")));
        }
        entries.push((line, u, v, w));
    }
    Ok((n, entries))
}
