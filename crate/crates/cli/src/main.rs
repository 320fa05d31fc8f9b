//! `tdspan`: build, certify, generate, render and benchmark degree-4 plane
//! spanners constructed from the triangular-distance Delaunay triangulation.
//!
//! Exit codes: 0 on success (and on verified-true), 2 on any certification
//! failure (the failing invariant is named on stderr), 1 on usage, parse or
//! IO errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use tdspan_cli::formats::{
    self, BoundClassStats, BoundSummary, FormatError, GraphFile, StatsFile, StretchStats,
};
use tdspan_cli::svg::render_svg;
use tdspan_core::verify::{
    self, Baseline, DEFAULT_MAX_EXACT_SOURCES,
};
use tdspan_core::{
    build_spanner_with_triangulation, charge_edges, check_convex_position, check_degree,
    check_planarity, classify_edges, ensure_general_position, generate, rotate_points, GenKind,
    GenSpec,
};

const STRETCH_LIMIT: f64 = 20.0;
const TD_STRETCH_LIMIT: f64 = 2.0;
const SLACK: f64 = 1e-9;

#[derive(Parser)]
#[command(name = "tdspan", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the spanner of a point file and write the graph file.
    Build {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Use the quadratic definition-level builder instead of the sweep.
        #[arg(long)]
        naive: bool,
        /// `auto` (rotation schedule) or an explicit angle in radians.
        #[arg(long, default_value = "auto")]
        rotate: String,
    },
    /// Certify a graph file against its point file and emit stats.
    Verify {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        /// Audit the per-edge-class reconstruction bounds.
        #[arg(long)]
        bounds: bool,
        /// Audit the degree-4 charging scheme.
        #[arg(long)]
        charging: bool,
        /// Stretch baseline: `complete` (Euclidean) or `td` (triangular).
        #[arg(long, default_value = "complete")]
        baseline: String,
        #[arg(long)]
        stats: PathBuf,
    },
    /// Generate a deterministic point set.
    Gen {
        /// uniform | convex | grid | clustered | lower_bound_rect
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Stretch parameter for lower_bound_rect (>= 1).
        #[arg(long)]
        rho: Option<f64>,
    },
    /// Render points and graph to an SVG file.
    Render {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Time spanner builds at increasing sizes.
    Bench {
        /// Comma-separated sizes; scientific notation accepted.
        #[arg(long, default_value = "1e3,1e4,1e5")]
        sizes: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum AppError {
    /// Usage, parse or IO problems.
    Input(String),
    /// A named guarantee failed on this input.
    Certification(Vec<String>),
}

impl From<FormatError> for AppError {
    fn from(e: FormatError) -> Self {
        AppError::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build { input, output, naive, rotate } => run_build(&input, &output, naive, &rotate),
        Command::Verify { points, graph, bounds, charging, baseline, stats } => {
            run_verify(&points, &graph, bounds, charging, &baseline, &stats)
        }
        Command::Gen { kind, n, seed, out, rho } => run_gen(&kind, n, seed, &out, rho),
        Command::Render { points, graph, out } => run_render(&points, &graph, &out),
        Command::Bench { sizes, seed } => run_bench(&sizes, seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(AppError::Certification(failures)) => {
            for f in &failures {
                eprintln!("certification failed: {f}");
            }
            ExitCode::from(2)
        }
    }
}

fn run_build(input: &Path, output: &Path, naive: bool, rotate: &str) -> Result<(), AppError> {
    let points = formats::read_points(input)?;
    let (graph, rotation) = if rotate == "auto" {
        let (s, _) = build_spanner_with_triangulation(&points, naive)
            .map_err(|e| AppError::Certification(vec![format!("construction: {e}")]))?;
        let rotation = s.rotation_applied();
        (GraphFile::from_spanner(&s), rotation)
    } else {
        let angle: f64 = rotate
            .parse()
            .map_err(|_| AppError::Input(format!("--rotate must be `auto` or radians, got {rotate:?}")))?;
        let rotated = rotate_points(&points, angle);
        match ensure_general_position(&rotated) {
            Ok((_, 0.0)) => {}
            Ok(_) | Err(_) => {
                return Err(AppError::Certification(vec![format!(
                    "general-position: rotation {angle} does not put the input in general position"
                )]))
            }
        }
        let (s, _) = build_spanner_with_triangulation(&rotated, naive)
            .map_err(|e| AppError::Certification(vec![format!("construction: {e}")]))?;
        let mut g = GraphFile::from_spanner(&s);
        g.rotation_applied = angle;
        (g, angle)
    };
    formats::write_graph(output, &graph)?;
    println!(
        "built spanner: n={} edges={} rotation_applied={}",
        graph.n,
        graph.edges.len(),
        rotation
    );
    Ok(())
}

fn run_verify(
    points_path: &Path,
    graph_path: &Path,
    bounds: bool,
    charging: bool,
    baseline: &str,
    stats_path: &Path,
) -> Result<(), AppError> {
    let baseline = match baseline {
        "complete" => Baseline::Complete,
        "td" => Baseline::Td,
        other => {
            return Err(AppError::Input(format!(
                "--baseline must be `complete` or `td`, got {other:?}"
            )))
        }
    };
    let original = formats::read_points(points_path)?;
    let graph = formats::read_graph(graph_path)?;
    if graph.n != original.len() {
        return Err(AppError::Input(format!(
            "graph file holds n={} but the point file has {} points",
            graph.n,
            original.len()
        )));
    }

    let points = rotate_points(&original, graph.rotation_applied);
    let mut failures: Vec<String> = Vec::new();

    match ensure_general_position(&points) {
        Ok((_, 0.0)) => {}
        Ok(_) | Err(_) => failures.push(
            "general-position: the recorded rotation does not put the points in general position"
                .into(),
        ),
    }
    if !failures.is_empty() {
        return Err(AppError::Certification(failures));
    }

    // deterministic rebuild; also the timing source for the stats file
    let started = Instant::now();
    let (rebuilt, d) = build_spanner_with_triangulation(&points, false)
        .map_err(|e| AppError::Certification(vec![format!("construction: {e}")]))?;
    let build_ms = started.elapsed().as_secs_f64() * 1e3;

    let pairs = graph.edge_pairs();
    let planarity = check_planarity(&pairs, &points);
    if let Some(((a, b), (c, dd))) = planarity.witness {
        failures.push(format!(
            "planarity: edges ({a}, {b}) and ({c}, {dd}) properly cross"
        ));
    }

    let convex_position = check_convex_position(&points);
    let limit = if convex_position { 3 } else { 4 };
    let degree = check_degree(&pairs, points.len(), limit);
    if !degree.within_limit {
        failures.push(format!(
            "degree: point {} has degree {} (limit {limit})",
            degree.witness.unwrap_or(0),
            degree.max_degree
        ));
    }

    let dists = verify::graph_distances(&points, &pairs, DEFAULT_MAX_EXACT_SOURCES);
    let euclid = verify::stretch_from_distances(&dists, &points, Baseline::Complete)
        .map_err(|e| AppError::Certification(vec![format!("connectivity: {e}")]))?;
    let vs_tri = verify::stretch_from_distances(&dists, &points, Baseline::Td)
        .map_err(|e| AppError::Certification(vec![format!("connectivity: {e}")]))?;
    for (name, value) in [("stretch vs complete", euclid.value), ("stretch vs triangular", vs_tri.value)] {
        if value > STRETCH_LIMIT * (1.0 + SLACK) {
            failures.push(format!("{name}: {value} exceeds {STRETCH_LIMIT}"));
        }
    }

    let td_pairs: Vec<(usize, usize)> = d.edges().iter().map(|e| e.pair()).collect();
    let td_stretch =
        verify::compute_stretch(&td_pairs, &points, Baseline::Complete, DEFAULT_MAX_EXACT_SOURCES)
            .map_err(|e| AppError::Certification(vec![format!("connectivity of the triangulation: {e}")]))?;
    if td_stretch.value > TD_STRETCH_LIMIT * (1.0 + SLACK) {
        failures.push(format!(
            "triangulation stretch: {} exceeds {TD_STRETCH_LIMIT}",
            td_stretch.value
        ));
    }

    let mut bound_audit = None;
    let mut charging_ok = None;
    if bounds || charging {
        let rebuilt_file = GraphFile::from_spanner(&rebuilt);
        if rebuilt_file.edges != graph.edges {
            failures.push(
                "graph-match: the graph file does not match the deterministic rebuild of its points"
                    .into(),
            );
        } else {
            if bounds {
                let classes = classify_edges(&d, &rebuilt);
                let audit = verify::audit_edge_bounds(&d, &rebuilt, &classes, &dists)
                    .map_err(|e| AppError::Certification(vec![format!("bound audit: {e}")]))?;
                if audit.total_violations > 0 {
                    failures.push(format!(
                        "edge reconstruction bounds: {} violation(s)",
                        audit.total_violations
                    ));
                }
                bound_audit = Some(BoundSummary {
                    total_violations: audit.total_violations,
                    worst_edge_ratio_vs_tri: audit.worst_edge_ratio_vs_tri,
                    stretch_vs_tri: vs_tri.value,
                    classes: audit
                        .classes
                        .iter()
                        .map(|c| BoundClassStats {
                            name: c.name.to_string(),
                            checked: c.checked,
                            violations: c.violations,
                            worst_ratio: c.worst_ratio,
                        })
                        .collect(),
                });
            }
            if charging {
                match charge_edges(&rebuilt) {
                    Ok(_) => charging_ok = Some(true),
                    Err(e) => {
                        charging_ok = Some(false);
                        failures.push(format!("charging: {e}"));
                    }
                }
            }
        }
    }

    let selected = match baseline {
        Baseline::Complete => &euclid,
        Baseline::Td => &vs_tri,
    };
    let stats = StatsFile {
        n: graph.n,
        m: graph.edges.len(),
        max_degree: degree.max_degree,
        is_plane: planarity.is_plane,
        stretch: StretchStats { value: selected.value, witness: selected.witness },
        td_stretch: td_stretch.value,
        bound_audit,
        charging_ok,
        convex_position,
        rotation_applied: graph.rotation_applied,
        build_ms,
    };
    formats::write_stats(stats_path, &stats)?;

    if failures.is_empty() {
        println!(
            "verified: n={} m={} max_degree={} stretch={:.6} td_stretch={:.6}",
            stats.n, stats.m, stats.max_degree, euclid.value, td_stretch.value
        );
        Ok(())
    } else {
        Err(AppError::Certification(failures))
    }
}

fn run_gen(kind: &str, n: usize, seed: u64, out: &Path, rho: Option<f64>) -> Result<(), AppError> {
    let kind = GenKind::from_str(kind)
        .ok_or_else(|| AppError::Input(format!("unknown generator kind {kind:?}")))?;
    let spec = GenSpec { kind, n, seed, rho };
    let points = generate(&spec).map_err(|e| AppError::Input(e.to_string()))?;
    formats::write_points(out, &points)?;
    println!("generated {} points ({})", points.len(), kind.as_str());
    Ok(())
}

fn run_render(points_path: &Path, graph_path: &Path, out: &Path) -> Result<(), AppError> {
    let original = formats::read_points(points_path)?;
    let graph = formats::read_graph(graph_path)?;
    if graph.n != original.len() {
        return Err(AppError::Input(format!(
            "graph file holds n={} but the point file has {} points",
            graph.n,
            original.len()
        )));
    }
    let points = rotate_points(&original, graph.rotation_applied);
    let svg = render_svg(&points, &graph);
    std::fs::write(out, svg)
        .map_err(|e| AppError::Input(format!("{}: {e}", out.display())))?;
    println!("rendered {} points and {} edges", graph.n, graph.edges.len());
    Ok(())
}

fn run_bench(sizes: &str, seed: u64) -> Result<(), AppError> {
    let sizes: Vec<usize> = sizes
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite() && *v >= 1.0)
                .map(|v| v as usize)
        })
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| AppError::Input(format!("bad --sizes list {sizes:?}")))?;

    println!("{:>10} {:>12} {:>12} {:>8}", "n", "median_ms", "mean_ms", "ratio");
    let mut prev_mean: Option<f64> = None;
    for &n in &sizes {
        let spec = GenSpec { kind: GenKind::Uniform, n, seed, rho: None };
        let points = generate(&spec).map_err(|e| AppError::Input(e.to_string()))?;
        // warmup
        build_spanner_with_triangulation(&points, false)
            .map_err(|e| AppError::Certification(vec![format!("construction: {e}")]))?;
        let mut runs = Vec::new();
        for _ in 0..5 {
            let t = Instant::now();
            let _ = build_spanner_with_triangulation(&points, false)
                .map_err(|e| AppError::Certification(vec![format!("construction: {e}")]))?;
            runs.push(t.elapsed().as_secs_f64() * 1e3);
        }
        runs.sort_by(|a, b| a.total_cmp(b));
        let median = runs[runs.len() / 2];
        let mean = runs.iter().sum::<f64>() / runs.len() as f64;
        let ratio = prev_mean.map(|p| mean / p);
        match ratio {
            Some(r) => println!("{n:>10} {median:>12.3} {mean:>12.3} {r:>8.3}"),
            None => println!("{n:>10} {median:>12.3} {mean:>12.3} {:>8}", "-"),
        }
        prev_mean = Some(mean);
    }
    Ok(())
}
