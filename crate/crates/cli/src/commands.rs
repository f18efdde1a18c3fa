use std::io::Write;
use std::path::{Path, PathBuf};

use graphspread::generators::{random_geometric_with, randomize_weights_with};
use graphspread::{
    complete_graph, dirichlet_form, distances, gaussian_kernel, graph_spread, image_grid_graph,
    mean_curve, normalized_laplacian, normalized_sandwich_curve, path_graph, ring_graph,
    sandwich_curve, spectral, spectral_spread, star_graph, trial_rng, DistanceKind, GraphSignal,
    GrayImage, LengthMatrix, UncertaintyCurve, WeightedGraph,
};
use rand::Rng;
use rayon::prelude::*;

use crate::args::{CurveArgs, Family, GraphArgs, ImageCurveArgs, MeanCurveArgs, SpreadArgs};
use crate::error::{CliError, CliResult};
use crate::output::{
    curve_csv, gnuplot_block, gnuplot_path, manifest_path, mean_curve_csv, read_to_string,
    write_file, RunManifest,
};

/// A generated or loaded graph, plus the lengths it was built from, if any.
pub struct FamilyGraph {
    pub graph: WeightedGraph,
    pub lengths: Option<LengthMatrix>,
}

pub fn build_graph<R: Rng + ?Sized>(args: &GraphArgs, rng: &mut R) -> CliResult<FamilyGraph> {
    let graph = match args.family {
        Family::Complete => complete_graph(args.n)?,
        Family::Star => star_graph(args.n)?,
        Family::Ring => ring_graph(args.n)?,
        Family::Path => path_graph(args.n)?,
        Family::File => {
            let path = args
                .graph
                .as_ref()
                .ok_or_else(|| CliError::Usage("--family file requires --graph <path>".into()))?;
            let text = read_to_string(path)?;
            WeightedGraph::parse(&text).map_err(|e| CliError::from(e).context(path.display()))?
        }
        Family::RandomGeometric => {
            let geo = random_geometric_with(args.n, args.radius, rng)?;
            let graph = gaussian_kernel(&geo.lengths, args.alpha, args.beta)?;
            return Ok(FamilyGraph {
                graph,
                lengths: Some(geo.lengths),
            });
        }
    };
    Ok(FamilyGraph {
        graph,
        lengths: None,
    })
}

/// Parses a `--kind` value; `explicit` alone means the family's own lengths.
pub fn resolve_kind(spec: &str, family_lengths: Option<&LengthMatrix>) -> CliResult<DistanceKind> {
    if spec == "explicit" {
        return family_lengths
            .cloned()
            .map(DistanceKind::ExplicitLengths)
            .ok_or_else(|| {
                CliError::Usage("`--kind explicit` needs a family with lengths (random-geometric)".into())
            });
    }
    if let Some(file) = spec.strip_prefix("explicit:") {
        let path = Path::new(file);
        let lengths = LengthMatrix::parse(&read_to_string(path)?)
            .map_err(|e| CliError::from(e).context(path.display()))?;
        return Ok(DistanceKind::ExplicitLengths(lengths));
    }
    Ok(DistanceKind::parse(spec)?)
}

fn graph_manifest(manifest: RunManifest, args: &GraphArgs) -> RunManifest {
    let mut m = manifest.param("n", args.n);
    m.seed = Some(args.seed);
    m.family = Some(args.family.name().to_string());
    match args.family {
        Family::RandomGeometric => m
            .param("radius", args.radius)
            .param("alpha", args.alpha)
            .param("beta", args.beta),
        Family::File => {
            let path = args.graph.as_ref().map(|p| p.display().to_string());
            m.param("graph", path.unwrap_or_default())
        }
        _ => m,
    }
}

fn emit(
    out: Option<&Path>,
    csv: String,
    gnuplot: Option<String>,
    mut manifest: RunManifest,
    stdout: &mut dyn Write,
) -> CliResult<()> {
    let Some(out) = out else {
        let io = |e| CliError::Io(format!("stdout: {e}"));
        stdout.write_all(csv.as_bytes()).map_err(io)?;
        if let Some(block) = gnuplot {
            stdout.write_all(b"\n").map_err(io)?;
            stdout.write_all(block.as_bytes()).map_err(io)?;
        }
        return Ok(());
    };
    write_file(out, csv)?;
    manifest.outputs.push(out.to_path_buf());
    if let Some(block) = gnuplot {
        let path = gnuplot_path(out);
        write_file(&path, block)?;
        manifest.outputs.push(path);
    }
    manifest.write(&manifest_path(out))
}

fn plot_header(family: &str, kind: &str, u0: usize, tol: f64, seed: Option<u64>) -> Vec<(&'static str, String)> {
    vec![
        ("family", family.to_string()),
        ("kind", kind.to_string()),
        ("u0", u0.to_string()),
        ("tol", format!("{tol:e}")),
        ("seed", seed.map_or("none".into(), |s| s.to_string())),
    ]
}

fn curve_gnuplot(curve: &UncertaintyCurve, header: Vec<(&'static str, String)>) -> String {
    gnuplot_block(&header, curve.points().iter().map(|p| (p.s, p.g)))
}

pub fn cmd_curve(args: &CurveArgs, command_line: &[String], stdout: &mut dyn Write) -> CliResult<()> {
    let mut rng = trial_rng(args.graph.seed, 0);
    let family = build_graph(&args.graph, &mut rng)?;
    let graph = if args.random_weights {
        randomize_weights_with(&family.graph, &mut rng)?
    } else {
        family.graph
    };
    let kind = resolve_kind(&args.kind, family.lengths.as_ref())?;
    let curve = if args.normalize {
        normalized_sandwich_curve(&graph, args.u0, &kind, args.tol)?
    } else {
        sandwich_curve(&graph, args.u0, &kind, args.tol)?
    };
    log::info!("curve: {} points, certified gap {:e}", curve.points().len(), curve.gap());

    let mut manifest = graph_manifest(RunManifest::new(command_line, "curve"), &args.graph)
        .param("normalize", args.normalize)
        .param("random_weights", args.random_weights);
    manifest.kinds = vec![args.kind.clone()];
    manifest.u0 = args.u0;
    manifest.tolerance = args.tol;
    let gnuplot = args.output.gnuplot.then(|| {
        let header = plot_header(args.graph.family.name(), &args.kind, args.u0, args.tol, Some(args.graph.seed));
        curve_gnuplot(&curve, header)
    });
    emit(args.output.out.as_deref(), curve_csv(&curve), gnuplot, manifest, stdout)
}

/// Normalized curve of trial `trial`: fresh random weights, or a fresh
/// geometric sample for the random-geometric family.
pub fn trial_curve(args: &MeanCurveArgs, trial: usize) -> CliResult<UncertaintyCurve> {
    let mut rng = trial_rng(args.graph.seed, trial as u64);
    let family = build_graph(&args.graph, &mut rng)?;
    let graph = match args.graph.family {
        Family::RandomGeometric => family.graph,
        _ => randomize_weights_with(&family.graph, &mut rng)?,
    };
    let kind = resolve_kind(&args.kind, family.lengths.as_ref())?;
    Ok(normalized_sandwich_curve(&graph, args.u0, &kind, args.tol)?)
}

pub fn cmd_mean_curve(args: &MeanCurveArgs, command_line: &[String], stdout: &mut dyn Write) -> CliResult<()> {
    if args.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    if args.jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} workers: {e}", args.jobs)))?;
    let results: Vec<CliResult<UncertaintyCurve>> =
        pool.install(|| (0..args.trials).into_par_iter().map(|t| trial_curve(args, t)).collect());
    let mut curves = Vec::with_capacity(args.trials);
    for (trial, result) in results.into_iter().enumerate() {
        curves.push(result.map_err(|e| e.context(format!("trial {trial}")))?);
    }
    let mean = mean_curve(&curves, args.grid)?;

    let mut manifest = graph_manifest(RunManifest::new(command_line, "mean-curve"), &args.graph)
        .param("trials", args.trials)
        .param("grid", args.grid);
    manifest.kinds = vec![args.kind.clone()];
    manifest.u0 = args.u0;
    manifest.tolerance = args.tol;
    let gnuplot = args.output.gnuplot.then(|| {
        let mut header = plot_header(args.graph.family.name(), &args.kind, args.u0, args.tol, Some(args.graph.seed));
        header.push(("trials", args.trials.to_string()));
        gnuplot_block(&header, mean.s.iter().copied().zip(mean.mean_g.iter().copied()))
    });
    emit(args.output.out.as_deref(), mean_curve_csv(&mean), gnuplot, manifest, stdout)
}

pub fn cmd_spread(args: &SpreadArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let mut rng = trial_rng(args.graph.seed, 0);
    let family = build_graph(&args.graph, &mut rng)?;
    let g = family.graph;
    let kind = resolve_kind(&args.kind, family.lengths.as_ref())?;
    let text = read_to_string(&args.signal)?;
    let mut x = GraphSignal::parse(&text).map_err(|e| CliError::from(e).context(args.signal.display()))?;
    if x.len() != g.n() {
        return Err(CliError::Parse(format!(
            "signal has {} values but the graph has {} nodes",
            x.len(),
            g.n()
        )));
    }
    if args.normalize {
        x = x.normalize()?;
    }
    let decomp = spectral::eigendecompose(&normalized_laplacian(&g)?)?;
    let dist = distances(&g, &kind, args.u0)?;
    let spectral = spectral_spread(&decomp, &x)?;
    let graph = graph_spread(&dist, &x)?;
    let dirichlet = dirichlet_form(&g, &x, 2)?;
    writeln!(
        stdout,
        "spectral_spread_squared = {spectral:.16e}\ngraph_spread_squared = {graph:.16e}\ndirichlet_form_p2 = {dirichlet:.16e}"
    )
    .map_err(|e| CliError::Io(format!("stdout: {e}")))
}

fn kind_file_label(kind: &str) -> String {
    kind.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '.' { c } else { '-' })
        .collect()
}

/// `<dir>/<stem>.<kind>.csv` for each requested kind.
pub fn image_output_path(out: &Path, kind: &str) -> PathBuf {
    let stem = out.file_stem().map_or("curve".into(), |s| s.to_string_lossy().into_owned());
    out.with_file_name(format!("{stem}.{}.csv", kind_file_label(kind)))
}

pub fn cmd_image_curve(args: &ImageCurveArgs, command_line: &[String]) -> CliResult<()> {
    let img = match (&args.image, args.synthetic) {
        (Some(path), _) => {
            let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
            GrayImage::from_pgm(&bytes).map_err(|e| CliError::from(e).context(path.display()))?
        }
        (None, Some(side)) => GrayImage::synthetic(side, side),
        (None, None) => return Err(CliError::Usage("give --image <pgm> or --synthetic <side>".into())),
    };
    if img.width() < 2 || img.height() < 2 {
        return Err(CliError::Usage(format!(
            "image too small: {} x {}",
            img.width(),
            img.height()
        )));
    }
    let g = image_grid_graph(&img, args.alpha, args.beta)?;
    log::info!("image graph: {} nodes, {} edges", g.n(), g.edge_count());

    let mut manifest = RunManifest::new(command_line, "image-curve")
        .param("width", img.width())
        .param("height", img.height())
        .param("alpha", args.alpha)
        .param("beta", args.beta);
    manifest.family = Some(match &args.image {
        Some(p) => format!("image:{}", p.display()),
        None => format!("synthetic:{}", img.width()),
    });
    manifest.kinds = args.kinds.clone();
    manifest.u0 = args.u0;
    manifest.tolerance = args.tol;

    for spec in &args.kinds {
        let kind = resolve_kind(spec, None)?;
        let curve = normalized_sandwich_curve(&g, args.u0, &kind, args.tol)
            .map_err(|e| CliError::from(e).context(format!("kind {spec}")))?;
        let path = image_output_path(&args.out, spec);
        write_file(&path, curve_csv(&curve))?;
        manifest.outputs.push(path.clone());
        if args.gnuplot {
            let family = manifest.family.clone().unwrap_or_default();
            let block = curve_gnuplot(&curve, plot_header(&family, spec, args.u0, args.tol, None));
            let dat = gnuplot_path(&path);
            write_file(&dat, block)?;
            manifest.outputs.push(dat);
        }
    }
    manifest.write(&manifest_path(&args.out))
}
