//! Graph families: unit-weight topologies, random weights, Gaussian-kernel
//! random geometric graphs and 8-neighbor image graphs.
//!
//! All randomness comes from [`trial_rng`]: a ChaCha8 generator seeded from a
//! 64-bit seed, with trial `i` on stream `i`. Distinct trials never share a
//! stream, so they can be generated in any order or in parallel.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distances::LengthMatrix;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Resampling budget for [`random_geometric`].
pub const GEOMETRIC_MAX_ATTEMPTS: usize = 1000;

/// Random source for trial `trial` of an experiment seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn require_nodes(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::InvalidParameter(format!("need at least {min} nodes, got {n}")));
    }
    Ok(())
}

fn unit_graph(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> Result<WeightedGraph> {
    let edges: Vec<_> = edges.map(|(u, v)| (u, v, 1.0)).collect();
    WeightedGraph::from_edges(n, &edges)
}

pub fn complete_graph(n: usize) -> Result<WeightedGraph> {
    require_nodes(n, 2)?;
    unit_graph(n, (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))))
}

/// Star with node 0 at the center.
pub fn star_graph(n: usize) -> Result<WeightedGraph> {
    require_nodes(n, 2)?;
    unit_graph(n, (1..n).map(|v| (0, v)))
}

/// Cycle `0 – 1 – … – (n−1) – 0`; for `n = 2` a single edge.
pub fn ring_graph(n: usize) -> Result<WeightedGraph> {
    require_nodes(n, 2)?;
    let closing = (n > 2).then_some((n - 1, 0));
    unit_graph(n, (0..n - 1).map(|u| (u, u + 1)).chain(closing))
}

pub fn path_graph(n: usize) -> Result<WeightedGraph> {
    require_nodes(n, 2)?;
    unit_graph(n, (0..n - 1).map(|u| (u, u + 1)))
}

/// Replaces every edge weight with an independent draw from uniform(0, 1).
pub fn randomize_weights(g: &WeightedGraph, seed: u64) -> Result<WeightedGraph> {
    randomize_weights_with(g, &mut trial_rng(seed, 0))
}

pub fn randomize_weights_with<R: Rng + ?Sized>(g: &WeightedGraph, rng: &mut R) -> Result<WeightedGraph> {
    let edges = g.edges();
    if edges.is_empty() {
        return Err(Error::Empty("graph has no edges to reweight".into()));
    }
    let edges: Vec<_> = edges
        .into_iter()
        .map(|(u, v, _)| {
            let mut w: f64 = rng.random();
            while w == 0.0 {
                w = rng.random();
            }
            (u, v, w)
        })
        .collect();
    WeightedGraph::from_edges(g.n(), &edges)
}

/// Points in the unit square.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    points: Vec<[f64; 2]>,
}

impl PointCloud {
    pub fn new(points: Vec<[f64; 2]>) -> Result<Self> {
        for p in &points {
            if !p.iter().all(|c| (0.0..=1.0).contains(c)) {
                return Err(Error::InvalidParameter(format!(
                    "point {p:?} lies outside the unit square"
                )));
            }
        }
        Ok(PointCloud { points })
    }

    pub fn uniform<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let points = (0..n).map(|_| [rng.random(), rng.random()]).collect();
        PointCloud { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn euclidean(&self, u: usize, v: usize) -> f64 {
        let [ax, ay] = self.points[u];
        let [bx, by] = self.points[v];
        (ax - bx).hypot(ay - by)
    }

    /// `x,y` header followed by one row per point.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y\n");
        for [x, y] in &self.points {
            let _ = writeln!(out, "{x:.17e},{y:.17e}");
        }
        out
    }
}

/// A random geometric graph: normalized Euclidean edge lengths and the sampled points.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricGraph {
    pub lengths: LengthMatrix,
    pub points: PointCloud,
    /// Number of samples drawn before a connected graph appeared.
    pub attempts: usize,
}

/// Edges join points closer than `r` (strictly); their length is the Euclidean
/// distance divided by the largest distance over all pairs.
pub fn geometric_lengths(points: &PointCloud, r: f64) -> LengthMatrix {
    let n = points.len();
    let mut max = 0.0f64;
    for u in 0..n {
        for v in (u + 1)..n {
            max = max.max(points.euclidean(u, v));
        }
    }
    let mut lengths = LengthMatrix::empty(n);
    for u in 0..n {
        for v in (u + 1)..n {
            let d = points.euclidean(u, v);
            if d < r {
                let x = if max > 0.0 { d / max } else { 0.0 };
                lengths.set(u, v, x).expect("valid length");
            }
        }
    }
    lengths
}

fn lengths_connected(lengths: &LengthMatrix) -> bool {
    let n = lengths.n();
    let w = DMatrix::from_fn(n, n, |u, v| if lengths.has_edge(u, v) { 1.0 } else { 0.0 });
    WeightedGraph::from_matrix(w).is_ok_and(|g| g.is_connected())
}

/// Samples `n` uniform points until the radius-`r` graph is connected.
pub fn random_geometric(n: usize, r: f64, seed: u64) -> Result<GeometricGraph> {
    random_geometric_with(n, r, &mut trial_rng(seed, 0))
}

pub fn random_geometric_with<R: Rng + ?Sized>(n: usize, r: f64, rng: &mut R) -> Result<GeometricGraph> {
    require_nodes(n, 2)?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {r}")));
    }
    for attempt in 1..=GEOMETRIC_MAX_ATTEMPTS {
        let points = PointCloud::uniform(n, rng);
        let lengths = geometric_lengths(&points, r);
        if lengths_connected(&lengths) {
            log::debug!("geometric graph connected after {attempt} attempts");
            return Ok(GeometricGraph {
                lengths,
                points,
                attempts: attempt,
            });
        }
    }
    Err(Error::ConnectivityNotAchieved {
        attempts: GEOMETRIC_MAX_ATTEMPTS,
        rate: 0.0,
    })
}

/// Gaussian kernel `α·exp(−β x²)`.
pub fn gaussian(x: f64, alpha: f64, beta: f64) -> f64 {
    alpha * (-beta * x * x).exp()
}

fn check_kernel(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) || !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "kernel needs alpha > 0 and beta >= 0, got ({alpha}, {beta})"
        )));
    }
    Ok(())
}

/// Weights from edge lengths through the Gaussian kernel; absent edges stay absent.
pub fn gaussian_kernel(lengths: &LengthMatrix, alpha: f64, beta: f64) -> Result<WeightedGraph> {
    check_kernel(alpha, beta)?;
    let n = lengths.n();
    let w = DMatrix::from_fn(n, n, |u, v| {
        if lengths.has_edge(u, v) {
            gaussian(lengths.get(u, v), alpha, beta)
        } else {
            0.0
        }
    });
    WeightedGraph::from_matrix(w)
}

/// Row-major grayscale intensities in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    intensities: Vec<f64>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, intensities: Vec<f64>) -> Result<Self> {
        if width * height != intensities.len() {
            return Err(Error::DimensionMismatch {
                expected: width * height,
                found: intensities.len(),
            });
        }
        if let Some(x) = intensities.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(Error::InvalidParameter(format!("intensity {x} outside [0, 1]")));
        }
        Ok(GrayImage {
            width,
            height,
            intensities,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn intensities(&self) -> &[f64] {
        &self.intensities
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.intensities[row * self.width + col]
    }

    /// Decodes an 8-bit binary (P5) or ASCII (P2) PGM, dividing by maxval.
    pub fn from_pgm(bytes: &[u8]) -> Result<Self> {
        let mut reader = PgmReader { bytes, pos: 0 };
        let magic = reader.token()?;
        let binary = match magic.as_str() {
            "P5" => true,
            "P2" => false,
            _ => return Err(Error::parse(1, format!("not a P2/P5 PGM (magic {magic:?})"))),
        };
        let width = reader.number()?;
        let height = reader.number()?;
        let maxval = reader.number()?;
        if maxval == 0 || maxval > 255 {
            return Err(Error::parse(1, format!("only 8-bit PGM is supported (maxval {maxval})")));
        }
        let count = width * height;
        let raw: Vec<usize> = if binary {
            // exactly one whitespace byte separates the header from the raster
            let start = reader.pos + 1;
            let data = bytes
                .get(start..start + count)
                .ok_or_else(|| Error::parse(1, "truncated PGM raster"))?;
            data.iter().map(|&b| b as usize).collect()
        } else {
            (0..count).map(|_| reader.number()).collect::<Result<_>>()?
        };
        if let Some(v) = raw.iter().find(|&&v| v > maxval) {
            return Err(Error::parse(1, format!("pixel value {v} exceeds maxval {maxval}")));
        }
        let intensities = raw.iter().map(|&v| v as f64 / maxval as f64).collect();
        GrayImage::new(width, height, intensities)
    }

    /// Encodes as binary P5 with maxval 255.
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend(self.intensities.iter().map(|x| (x * 255.0).round() as u8));
        out
    }

    /// Deterministic test image: a diagonal gradient with a bright disk and a dark bar.
    pub fn synthetic(width: usize, height: usize) -> Self {
        let mut intensities = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                let y = row as f64 / (height.max(2) - 1) as f64;
                let x = col as f64 / (width.max(2) - 1) as f64;
                let mut value = 0.15 + 0.35 * (x + y) / 2.0;
                if (x - 0.35).hypot(y - 0.4) < 0.22 {
                    value = 0.9;
                }
                if (0.7..0.85).contains(&x) && y > 0.3 {
                    value = 0.05;
                }
                intensities.push(value);
            }
        }
        GrayImage {
            width,
            height,
            intensities,
        }
    }
}

struct PgmReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl PgmReader<'_> {
    fn token(&mut self) -> Result<String> {
        loop {
            match self.bytes.get(self.pos) {
                Some(b'#') => {
                    while self.bytes.get(self.pos).is_some_and(|&b| b != b'\n') {
                        self.pos += 1;
                    }
                }
                Some(b) if b.is_ascii_whitespace() => self.pos += 1,
                Some(_) => break,
                None => return Err(Error::parse(1, "unexpected end of PGM header")),
            }
        }
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(|b| !b.is_ascii_whitespace()) {
            self.pos += 1;
        }
        String::from_utf8(self.bytes[start..self.pos].to_vec())
            .map_err(|_| Error::parse(1, "PGM header is not ASCII"))
    }

    fn number(&mut self) -> Result<usize> {
        let tok = self.token()?;
        tok.parse()
            .map_err(|_| Error::parse(1, format!("invalid PGM number {tok:?}")))
    }
}

/// 8-neighbor pixel graph weighted by `α·exp(−β (I(u) − I(v))²)`; node = `row·width + col`.
pub fn image_grid_graph(img: &GrayImage, alpha: f64, beta: f64) -> Result<WeightedGraph> {
    check_kernel(alpha, beta)?;
    let (w, h) = (img.width, img.height);
    if w < 2 || h < 2 {
        return Err(Error::InvalidParameter(format!("image too small: {w} x {h}")));
    }
    let mut edges = Vec::new();
    for row in 0..h {
        for col in 0..w {
            let u = row * w + col;
            // forward half of the stencil: right, down-left, down, down-right
            let forward = [(0isize, 1isize), (1, -1), (1, 0), (1, 1)];
            for (dr, dc) in forward {
                let (r2, c2) = (row as isize + dr, col as isize + dc);
                if r2 < 0 || c2 < 0 || r2 >= h as isize || c2 >= w as isize {
                    continue;
                }
                let v = r2 as usize * w + c2 as usize;
                let diff = img.intensities[u] - img.intensities[v];
                edges.push((u, v, gaussian(diff, alpha, beta)));
            }
        }
    }
    WeightedGraph::from_edges(w * h, &edges)
}
