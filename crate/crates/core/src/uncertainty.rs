//! Lower uncertainty curves.
//!
//! For a center `u0` the feasible set `{(xᵀLx, xᵀP²x) : ‖x‖ = 1}` (with `L` the
//! normalized Laplacian and `P` the diagonal of distances from `u0`) is bounded
//! below by a convex, non-increasing curve running from `(0, f₁ᵀP²f₁)` to the
//! point where the graph spread vanishes.
//!
//! A line of slope `m ≤ 0` supports that curve at the minimizer of
//! `g − m·s = xᵀ(P² − mL)x`, i.e. at the smallest eigenpair of `P² − mL`, and
//! its intercept is the smallest eigenvalue. [`sandwich_curve`] refines the
//! curve between two known points by querying the supporting line at the
//! chord slope: the chord bounds the curve from above, the supporting line
//! from below, and the segment is accepted once their vertical gap is at most
//! `tol`.

use nalgebra::{DMatrix, DVector};

use crate::distances::{distances, DistanceKind};
use crate::error::{Error, Result};
use crate::graph::{normalized_laplacian, GraphSignal, WeightedGraph};
use crate::spectral::eigendecompose_symmetric;
use crate::spreads::quadratic_form;

/// Maximum refinement depth below each initial segment.
pub const MAX_REFINEMENT_DEPTH: usize = 60;

/// Default vertical tolerance on normalized curves.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

/// Relative width of the eigenvalue cluster treated as one eigenspace.
const CLUSTER_TOLERANCE: f64 = 1e-10;

/// A point on the lower boundary, with the signal achieving it.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    /// Spectral spread `xᵀLx`.
    pub s: f64,
    /// Graph spread `xᵀP²x`.
    pub g: f64,
    /// Slope of the supporting line that produced the point; `-∞` for the `f₁` endpoint.
    pub slope: f64,
    pub witness: GraphSignal,
}

impl CurvePoint {
    fn from_witness(
        l_norm: &DMatrix<f64>,
        p_squared: &DVector<f64>,
        f1: Option<&DVector<f64>>,
        x: DVector<f64>,
        slope: f64,
    ) -> Self {
        let s = match f1 {
            // L·f₁ = 0, so dropping the f₁ component leaves xᵀLx unchanged
            // while avoiding cancellation for signals close to f₁
            Some(f1) => quadratic_form(l_norm, &(&x - f1 * f1.dot(&x))),
            None => quadratic_form(l_norm, &x),
        };
        let g = x.iter().zip(p_squared.iter()).map(|(xi, p)| p * xi * xi).sum();
        CurvePoint {
            s,
            g,
            slope,
            witness: GraphSignal::from_vector(x),
        }
    }
}

/// The supporting line `g = slope·s + intercept` and the curve points it touches.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportingLine {
    pub slope: f64,
    pub intercept: f64,
    /// One point, or the two ends of the touching segment when the smallest
    /// eigenvalue is repeated. Sorted by ascending `s`.
    pub points: Vec<CurvePoint>,
}

/// Smallest eigenpair(s) of `P² − mL`.
///
/// When the smallest eigenvalue is repeated, `L` is restricted to its
/// eigenspace and the extreme eigenvectors of the restriction give the two
/// ends of the touching segment.
pub fn supporting_line(l_norm: &DMatrix<f64>, p_squared: &DVector<f64>, m: f64) -> Result<SupportingLine> {
    support(l_norm, p_squared, None, m)
}

fn support(
    l_norm: &DMatrix<f64>,
    p_squared: &DVector<f64>,
    f1: Option<&DVector<f64>>,
    m: f64,
) -> Result<SupportingLine> {
    let n = l_norm.nrows();
    if l_norm.ncols() != n || p_squared.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p_squared.len(),
        });
    }
    if m.is_nan() || m > 0.0 {
        return Err(Error::InvalidParameter(format!("supporting slope must be <= 0, got {m}")));
    }
    let mut system = l_norm * (-m);
    for (i, p) in p_squared.iter().enumerate() {
        system[(i, i)] += p;
    }
    let dec = eigendecompose_symmetric(&system)?;
    let values = dec.eigenvalues();
    let lowest = values[0];
    let scale = lowest.abs().max(values[n - 1].abs()).max(1.0);
    let k = values
        .iter()
        .take_while(|&&v| v - lowest <= CLUSTER_TOLERANCE * scale)
        .count();

    let points = if k == 1 {
        let x = dec.eigenvectors().column(0).into_owned();
        vec![CurvePoint::from_witness(l_norm, p_squared, f1, x, m)]
    } else {
        let basis = dec.eigenvectors().columns(0, k).into_owned();
        let restricted = basis.transpose() * l_norm * &basis;
        let restricted = (&restricted + restricted.transpose()) * 0.5;
        let inner = eigendecompose_symmetric(&restricted)?;
        let lo = &basis * inner.eigenvectors().column(0);
        let hi = &basis * inner.eigenvectors().column(k - 1);
        let a = CurvePoint::from_witness(l_norm, p_squared, f1, lo, m);
        let b = CurvePoint::from_witness(l_norm, p_squared, f1, hi, m);
        if (b.s - a.s).abs() <= 1e-12 {
            vec![a]
        } else {
            vec![a, b]
        }
    };
    Ok(SupportingLine {
        slope: m,
        intercept: lowest,
        points,
    })
}

/// The point on the supporting line of slope `m` with the smallest spectral spread.
pub fn supporting_point(l_norm: &DMatrix<f64>, p_squared: &DVector<f64>, m: f64) -> Result<CurvePoint> {
    let mut line = supporting_line(l_norm, p_squared, m)?;
    Ok(line.points.swap_remove(0))
}

/// The `m → −∞` limit: `x = f₁ ∝ D^{1/2}·1`, at spectral spread zero.
pub fn f1_endpoint(g: &WeightedGraph, l_norm: &DMatrix<f64>, p_squared: &DVector<f64>) -> Result<CurvePoint> {
    let f1 = GraphSignal::from_vector(g.degrees().map(f64::sqrt)).normalize()?;
    let mut point = CurvePoint::from_witness(l_norm, p_squared, None, f1.values().clone(), f64::NEG_INFINITY);
    // f₁ spans the null space of L; the computed form is rounding noise
    point.s = 0.0;
    Ok(point)
}

/// A traced lower uncertainty curve.
#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintyCurve {
    points: Vec<CurvePoint>,
    gap: f64,
    u0: usize,
    kind: DistanceKind,
}

impl UncertaintyCurve {
    pub fn new(points: Vec<CurvePoint>, gap: f64, u0: usize, kind: DistanceKind) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Empty("a curve needs at least one point".into()));
        }
        if points.windows(2).any(|w| w[1].s < w[0].s) {
            return Err(Error::InvalidParameter("curve points must be sorted by s".into()));
        }
        Ok(UncertaintyCurve { points, gap, u0, kind })
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    /// Largest accepted vertical distance between a chord and the curve
    /// beneath it; at most the requested tolerance.
    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn u0(&self) -> usize {
        self.u0
    }

    pub fn kind(&self) -> &DistanceKind {
        &self.kind
    }

    pub fn first(&self) -> &CurvePoint {
        &self.points[0]
    }

    pub fn last(&self) -> &CurvePoint {
        &self.points[self.points.len() - 1]
    }

    pub fn s_max(&self) -> f64 {
        self.last().s
    }

    /// Piecewise-linear interpolation of `g` at `s`. Left of the first point
    /// the first `g` is returned, right of the last point the last `g`.
    pub fn interpolate(&self, s: f64) -> f64 {
        let pts = &self.points;
        if s <= pts[0].s {
            return pts[0].g;
        }
        if s >= self.s_max() {
            return self.last().g;
        }
        let i = pts.partition_point(|p| p.s <= s);
        let (a, b) = (&pts[i - 1], &pts[i]);
        let ds = b.s - a.s;
        if ds <= 0.0 {
            return a.g.min(b.g);
        }
        a.g + (b.g - a.g) * (s - a.s) / ds
    }
}

/// Traces the lower uncertainty curve around `u0` to vertical tolerance `tol`.
pub fn sandwich_curve(g: &WeightedGraph, u0: usize, kind: &DistanceKind, tol: f64) -> Result<UncertaintyCurve> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    trace(g, u0, kind, |_| tol)
}

/// Traces the curve to tolerance `tol` relative to its maximum and returns it normalized.
pub fn normalized_sandwich_curve(
    g: &WeightedGraph,
    u0: usize,
    kind: &DistanceKind,
    tol: f64,
) -> Result<UncertaintyCurve> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let curve = trace(g, u0, kind, |top| tol * top)?;
    normalize_curve(&curve)
}

fn trace(
    g: &WeightedGraph,
    u0: usize,
    kind: &DistanceKind,
    tolerance_for: impl Fn(f64) -> f64,
) -> Result<UncertaintyCurve> {
    g.check_node(u0)?;
    if let Some(unreachable) = g.first_unreachable() {
        return Err(Error::Disconnected {
            source_node: 0,
            unreachable,
        });
    }
    let dist = distances(g, kind, u0)?;
    if dist.iter().all(|&d| d == 0.0) {
        return Err(Error::Degenerate(format!("all distances from node {u0} are zero")));
    }
    let p_squared = dist.map(|d| d * d);
    let l_norm = normalized_laplacian(g)?;

    let left = f1_endpoint(g, &l_norm, &p_squared)?;
    let f1 = left.witness.values().clone();
    let right = support(&l_norm, &p_squared, Some(&f1), 0.0)?.points.swap_remove(0);

    let mut tracer = Tracer {
        l_norm: &l_norm,
        p_squared: &p_squared,
        f1: &f1,
        tol: tolerance_for(left.g),
        gap: 0.0,
        solves: 0,
    };
    let mut points = vec![left.clone()];
    tracer.refine(&left, &right, 0, &mut points)?;
    points.push(right);
    log::debug!(
        "traced curve around node {u0} ({kind}): {} points, {} eigensolves, gap {:e}",
        points.len(),
        tracer.solves,
        tracer.gap
    );
    UncertaintyCurve::new(points, tracer.gap, u0, kind.clone())
}

struct Tracer<'a> {
    l_norm: &'a DMatrix<f64>,
    p_squared: &'a DVector<f64>,
    f1: &'a DVector<f64>,
    tol: f64,
    gap: f64,
    solves: usize,
}

impl Tracer<'_> {
    /// Appends the interior points between `a` and `b` (exclusive) to `out`.
    fn refine(&mut self, a: &CurvePoint, b: &CurvePoint, depth: usize, out: &mut Vec<CurvePoint>) -> Result<()> {
        let ds = b.s - a.s;
        let dg = b.g - a.g;
        // a narrow or flat segment cannot hide more than its own height
        if ds <= 0.0 || dg.abs() <= 1e-12 || (ds <= 1e-12 && dg.abs() <= self.tol) {
            self.gap = self.gap.max(dg.abs());
            return Ok(());
        }
        let m = dg / ds;
        if m > 0.0 {
            // a rising chord cannot belong to a non-increasing curve; nothing to refine
            return Ok(());
        }
        let line = support(self.l_norm, self.p_squared, Some(self.f1), m)?;
        self.solves += 1;
        // vertical distance of the touching point below the chord
        let gap = line
            .points
            .iter()
            .map(|p| a.g + m * (p.s - a.s) - p.g)
            .fold(0.0, f64::max);
        if gap <= self.tol {
            self.gap = self.gap.max(gap);
            return Ok(());
        }
        if depth >= MAX_REFINEMENT_DEPTH {
            return Err(Error::RefinementDepth {
                depth,
                s_lo: a.s,
                s_hi: b.s,
            });
        }
        let inner: Vec<CurvePoint> = line
            .points
            .into_iter()
            .filter(|p| p.s > a.s && p.s < b.s)
            .collect();
        if inner.is_empty() {
            // the touching point coincides with an end: the ends are not on the curve
            return Err(Error::RefinementDepth {
                depth,
                s_lo: a.s,
                s_hi: b.s,
            });
        }
        let mut prev = a.clone();
        for p in inner {
            self.refine(&prev, &p, depth + 1, out)?;
            out.push(p.clone());
            prev = p;
        }
        self.refine(&prev, b, depth + 1, out)
    }
}

/// Divides every graph spread by the value at `s = 0`, so the curve peaks at 1.
pub fn normalize_curve(c: &UncertaintyCurve) -> Result<UncertaintyCurve> {
    let top = c.first().g;
    if !(top > 0.0 && top.is_finite()) {
        return Err(Error::Degenerate(format!("cannot normalize a curve with maximum {top}")));
    }
    let points = c
        .points
        .iter()
        .map(|p| CurvePoint {
            s: p.s,
            g: p.g / top,
            slope: p.slope / top,
            witness: p.witness.clone(),
        })
        .collect();
    UncertaintyCurve::new(points, c.gap / top, c.u0, c.kind.clone())
}

/// Curves resampled on a common grid, with point-wise mean and deviation.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanCurve {
    pub s: Vec<f64>,
    pub mean_g: Vec<f64>,
    /// Sample standard deviation (zero for a single curve).
    pub stddev_g: Vec<f64>,
    pub trials: usize,
}

/// Averages curves on a uniform grid over `[0, min s_max]`.
pub fn mean_curve(curves: &[UncertaintyCurve], grid_size: usize) -> Result<MeanCurve> {
    if curves.is_empty() {
        return Err(Error::Empty("no curves to average".into()));
    }
    if grid_size < 2 {
        return Err(Error::InvalidParameter(format!("grid needs at least 2 points, got {grid_size}")));
    }
    let s_end = curves.iter().map(UncertaintyCurve::s_max).fold(f64::INFINITY, f64::min);
    let s: Vec<f64> = (0..grid_size)
        .map(|i| s_end * i as f64 / (grid_size - 1) as f64)
        .collect();
    let trials = curves.len();
    let mut mean_g = Vec::with_capacity(grid_size);
    let mut stddev_g = Vec::with_capacity(grid_size);
    for &si in &s {
        let values: Vec<f64> = curves.iter().map(|c| c.interpolate(si)).collect();
        let mean = values.iter().sum::<f64>() / trials as f64;
        let var = if trials > 1 {
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (trials - 1) as f64
        } else {
            0.0
        };
        mean_g.push(mean);
        stddev_g.push(var.sqrt());
    }
    Ok(MeanCurve {
        s,
        mean_g,
        stddev_g,
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete_graph, star_graph};

    fn line_curve(points: &[(f64, f64)]) -> UncertaintyCurve {
        let pts = points
            .iter()
            .map(|&(s, g)| CurvePoint {
                s,
                g,
                slope: 0.0,
                witness: GraphSignal::delta(1, 0),
            })
            .collect();
        UncertaintyCurve::new(pts, 0.0, 0, DistanceKind::NaiveGeodesic).unwrap()
    }

    #[test]
    fn m_zero_on_complete_graph_picks_delta() {
        let g = complete_graph(100).unwrap();
        let l = normalized_laplacian(&g).unwrap();
        let d = distances(&g, &DistanceKind::NaiveGeodesic, 0).unwrap();
        let p2 = d.map(|x| x * x);
        let p = supporting_point(&l, &p2, 0.0).unwrap();
        assert!((p.s - 1.0).abs() <= 1e-9);
        assert!(p.g.abs() <= 1e-12);
        let f1 = f1_endpoint(&g, &l, &p2).unwrap();
        assert!(f1.s.abs() <= 1e-12);
        assert!((f1.g - 0.99).abs() <= 1e-12);
    }

    #[test]
    fn rejects_positive_slope() {
        let l = DMatrix::identity(2, 2);
        let p2 = DVector::from_vec(vec![0.0, 1.0]);
        assert!(supporting_line(&l, &p2, 0.5).is_err());
    }

    #[test]
    fn multiple_zero_distance_nodes_minimize_s() {
        // nodes 0 and 1 at distance zero from each other
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let mut lengths = crate::distances::LengthMatrix::empty(3);
        lengths.set(0, 1, 0.0).unwrap();
        lengths.set(1, 2, 1.0).unwrap();
        let kind = DistanceKind::ExplicitLengths(lengths);
        let c = sandwich_curve(&g, 0, &kind, 1e-9).unwrap();
        let last = c.last();
        assert!(last.g.abs() <= 1e-12);
        // the smallest eigenvalue of the normalized Laplacian restricted to span{e0, e1}
        let l = normalized_laplacian(&g).unwrap();
        let sub = l.view((0, 0), (2, 2)).into_owned();
        let expected = eigendecompose_symmetric(&sub).unwrap().smallest();
        assert!((last.s - expected).abs() <= 1e-9);
        assert!(last.s < 1.0);
    }

    #[test]
    fn endpoints_on_star() {
        let g = star_graph(100).unwrap();
        let c = sandwich_curve(&g, 0, &DistanceKind::NaiveGeodesic, 1e-6).unwrap();
        assert!(c.first().s.abs() <= 1e-9);
        assert!((c.first().g - 0.5).abs() <= 1e-9);
        assert!((c.last().s - 1.0).abs() <= 1e-9);
        assert!(c.last().g.abs() <= 1e-9);
        assert!(c.gap() <= 1e-6);
    }

    #[test]
    fn degenerate_distances_are_rejected() {
        let g = WeightedGraph::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        let mut lengths = crate::distances::LengthMatrix::empty(2);
        lengths.set(0, 1, 0.0).unwrap();
        let err = sandwich_curve(&g, 0, &DistanceKind::ExplicitLengths(lengths), 1e-6);
        assert!(matches!(err, Err(Error::Degenerate(_))));
        let split = WeightedGraph::from_edges(3, &[(0, 1, 1.0)]).unwrap();
        assert!(matches!(
            sandwich_curve(&split, 0, &DistanceKind::NaiveGeodesic, 1e-6),
            Err(Error::Disconnected { unreachable: 2, .. })
        ));
        assert!(sandwich_curve(&g, 0, &DistanceKind::NaiveGeodesic, 0.0).is_err());
    }

    #[test]
    fn normalize_examples() {
        let c = line_curve(&[(0.0, 2.0), (1.0, 0.0)]);
        let n = normalize_curve(&c).unwrap();
        assert_eq!(n.points()[0].g, 1.0);
        assert_eq!(n.points()[1].g, 0.0);
        assert_eq!(normalize_curve(&n).unwrap(), n);
        assert!(normalize_curve(&line_curve(&[(0.0, 0.0), (1.0, 0.0)])).is_err());
    }

    #[test]
    fn mean_curve_examples() {
        let a = line_curve(&[(0.0, 1.0), (1.0, 0.0)]);
        let b = line_curve(&[(0.0, 0.5), (1.0, 0.0)]);
        let m = mean_curve(&[a.clone(), b], 11).unwrap();
        for (s, g) in m.s.iter().zip(&m.mean_g) {
            assert!((g - 0.75 * (1.0 - s)).abs() <= 1e-15);
        }
        let one = mean_curve(&[a.clone()], 5).unwrap();
        let two = mean_curve(&[a.clone(), a.clone()], 5).unwrap();
        assert_eq!(one.mean_g, two.mean_g);
        assert!(one.stddev_g.iter().all(|&x| x == 0.0));
        for (s, g) in one.s.iter().zip(&one.mean_g) {
            assert_eq!(*g, a.interpolate(*s));
        }
        assert!(mean_curve(&[], 5).is_err());
        assert!(mean_curve(&[a], 1).is_err());
    }

    #[test]
    fn grid_stops_at_shortest_curve() {
        let a = line_curve(&[(0.0, 1.0), (1.0, 0.0)]);
        let b = line_curve(&[(0.0, 1.0), (0.5, 0.2)]);
        let m = mean_curve(&[a, b], 3).unwrap();
        assert_eq!(m.s, vec![0.0, 0.25, 0.5]);
    }
}
