//! Acceptance suite: every guarantee the library makes, certified on a
//! deterministic randomized corpus with exact checks and independent
//! oracles. Runs as one sequential test so the timing criterion is not
//! disturbed by parallel test threads; prints one line per criterion
//! (visible with `--nocapture`).

use std::time::Instant;

use tdspan_core::generators::SplitMix64;
use tdspan_core::verify::{
    audit_edge_bounds, audit_monotone_path, audit_path_projections, graph_distances,
    monotone_from_point_seq, shortcut_cone_audit, stretch_from_distances, uncrossed_violations,
    Baseline,
};
use tdspan_core::*;

const SLACK: f64 = 1e-9;
const STRETCH_LIMIT: f64 = 20.0;
const TD_LIMIT: f64 = 2.0;
const SEEDS: u64 = 100;

struct Criterion {
    name: &'static str,
    failures: Vec<String>,
    detail: String,
}

impl Criterion {
    fn new(name: &'static str) -> Self {
        Criterion { name, failures: Vec::new(), detail: String::new() }
    }

    fn fail(&mut self, msg: String) {
        if self.failures.len() < 8 {
            self.failures.push(msg);
        } else if self.failures.len() == 8 {
            self.failures.push("...".into());
        }
    }

    fn report(&self) -> bool {
        if self.failures.is_empty() {
            println!("criterion {:<28} PASS  {}", self.name, self.detail);
            true
        } else {
            println!("criterion {:<28} FAIL  {}", self.name, self.failures.join("; "));
            false
        }
    }
}

fn corpus_specs() -> Vec<GenSpec> {
    let mut specs = Vec::new();
    for seed in 0..SEEDS {
        for kind in [GenKind::Uniform, GenKind::Clustered, GenKind::Convex] {
            for n in [10usize, 100, 1000] {
                specs.push(GenSpec { kind, n, seed, rho: None });
            }
        }
    }
    for rho in [1.0, 2.0, 5.0] {
        specs.push(GenSpec { kind: GenKind::LowerBoundRect, n: 0, seed: 0, rho: Some(rho) });
    }
    specs
}

fn spec_tag(spec: &GenSpec) -> String {
    format!("{}/n={}/seed={}", spec.kind.as_str(), spec.n, spec.seed)
}

#[test]
fn acceptance_criteria() {
    let mut planarity = Criterion::new("01-planarity");
    let mut degree = Criterion::new("02-degree-bound");
    let mut stretch = Criterion::new("03-spanner-stretch");
    let mut td_stretch = Criterion::new("04-triangulation-stretch");
    let mut oracle_eq = Criterion::new("05-builder-equivalence");
    let mut metric = Criterion::new("06-metric-oracle");
    let mut structural = Criterion::new("07-structural-audits");
    let mut paths = Criterion::new("08-path-bounds");
    let mut bounds = Criterion::new("09-edge-reconstruction-bounds");
    let mut perf = Criterion::new("10-build-performance");

    let started = Instant::now();
    let mut instances = 0usize;
    let mut worst_stretch: f64 = 0.0;
    let mut worst_stretch_tri: f64 = 0.0;
    let mut worst_td: f64 = 0.0;
    let mut max_degree_general = 0usize;
    let mut max_degree_convex = 0usize;
    let mut paths_checked = 0usize;
    let mut bound_checks = 0usize;

    for spec in corpus_specs() {
        let tag = spec_tag(&spec);
        instances += 1;
        let points = generate(&spec).expect("corpus specs are valid");
        let (s, d) = match build_spanner_with_triangulation(&points, false) {
            Ok(v) => v,
            Err(e) => {
                planarity.fail(format!("{tag}: construction failed: {e}"));
                continue;
            }
        };
        let pts = s.points();
        let pairs = s.undirected_pairs();

        // 1: no properly crossing pair of spanner edges
        let verdict = check_planarity(&pairs, pts);
        if let Some(w) = verdict.witness {
            planarity.fail(format!("{tag}: crossing {w:?}"));
        }

        // 2: degree at most 4, and at most 3 in convex position
        let convex = check_convex_position(pts);
        let expect_convex =
            matches!(spec.kind, GenKind::Convex | GenKind::LowerBoundRect) && pts.len() >= 3;
        if expect_convex && !convex {
            degree.fail(format!("{tag}: generator output not in convex position"));
        }
        let limit = if convex { 3 } else { 4 };
        let deg = check_degree(&pairs, pts.len(), limit);
        if !deg.within_limit {
            degree.fail(format!(
                "{tag}: degree {} at point {:?} (limit {limit})",
                deg.max_degree, deg.witness
            ));
        }
        if convex {
            max_degree_convex = max_degree_convex.max(deg.max_degree);
        } else {
            max_degree_general = max_degree_general.max(deg.max_degree);
        }

        // 3: exact all-pairs stretch, both baselines
        let dists = graph_distances(pts, &pairs, 2000);
        match (
            stretch_from_distances(&dists, pts, Baseline::Complete),
            stretch_from_distances(&dists, pts, Baseline::Td),
        ) {
            (Ok(eu), Ok(tri)) => {
                if eu.value > STRETCH_LIMIT * (1.0 + SLACK) {
                    stretch.fail(format!("{tag}: stretch {} at {:?}", eu.value, eu.witness));
                }
                if tri.value > STRETCH_LIMIT * (1.0 + SLACK) {
                    stretch.fail(format!(
                        "{tag}: triangular-baseline stretch {} at {:?}",
                        tri.value, tri.witness
                    ));
                }
                worst_stretch = worst_stretch.max(eu.value);
                worst_stretch_tri = worst_stretch_tri.max(tri.value);
            }
            (e1, e2) => stretch.fail(format!("{tag}: {e1:?} {e2:?}")),
        }

        // 4: the triangulation is a 2-spanner of the complete graph
        let d_pairs: Vec<(usize, usize)> = d.edges().iter().map(|e| e.pair()).collect();
        match compute_stretch(&d_pairs, pts, Baseline::Complete, 2000) {
            Ok(st) => {
                if st.value > TD_LIMIT * (1.0 + SLACK) {
                    td_stretch.fail(format!("{tag}: {} at {:?}", st.value, st.witness));
                }
                worst_td = worst_td.max(st.value);
            }
            Err(e) => td_stretch.fail(format!("{tag}: {e}")),
        }

        // 7: structural audits
        let l1 = canonical_edge_audit(&d);
        if !l1.is_empty() {
            structural.fail(format!("{tag}: canonical-edge audit {:?}", &l1[..l1.len().min(2)]));
        }
        let cones = shortcut_cone_audit(&s);
        if !cones.is_empty() {
            structural.fail(format!("{tag}: shortcut cones {:?}", &cones[..cones.len().min(2)]));
        }
        let classes = classify_edges(&d, &s);
        let uv = uncrossed_violations(&d, &classes);
        if !uv.is_empty() {
            structural.fail(format!("{tag}: protected edges crossed: {uv:?}"));
        }
        if let Err(e) = charge_edges(&s) {
            structural.fail(format!("{tag}: {e}"));
        }

        // 8: canonical paths between fan mates (monotone structure, length and
        // mass bounds, projection discipline; they may leave the endpoint
        // homothet) and extracted monotone paths (which also stay inside it)
        for fan in d.fans() {
            for lo in 0..fan.len() {
                for hi in (lo + 1)..fan.len() {
                    let seq = &fan.tails[lo..=hi];
                    let path = monotone_from_point_seq(&d, seq)
                        .expect("canonical paths follow triangulation edges");
                    let audit = audit_monotone_path(&d, &path);
                    paths_checked += 1;
                    let dt = audit.tri_between_ends;
                    if !audit.structurally_monotone()
                        || audit.length > 2.0 * dt * (1.0 + SLACK)
                        || audit.max_color_mass > dt * (1.0 + SLACK)
                        || !audit_path_projections(&d, &path)
                    {
                        paths.fail(format!(
                            "{tag}: canonical path {seq:?} of apex {}: {audit:?}",
                            fan.apex
                        ));
                    }
                }
            }
        }
        let mut rng = SplitMix64::new(spec.seed ^ 0xACCE_17ED);
        let n = pts.len();
        if n >= 2 {
            for _ in 0..20 {
                let a = (rng.next_u64() % n as u64) as usize;
                let b = (rng.next_u64() % n as u64) as usize;
                if a == b {
                    continue;
                }
                match extract_monotone_path(&d, a, b) {
                    Ok(path) => {
                        let audit = audit_monotone_path(&d, &path);
                        paths_checked += 1;
                        let dt = audit.tri_between_ends;
                        if !audit.ok()
                            || audit.length > 2.0 * dt * (1.0 + SLACK)
                            || audit.max_color_mass > dt * (1.0 + SLACK)
                        {
                            paths.fail(format!("{tag}: extracted {a}->{b}: {audit:?}"));
                        }
                        if !audit_path_projections(&d, &path) {
                            paths.fail(format!("{tag}: projections of {a}->{b} overlap"));
                        }
                    }
                    Err(e) => paths.fail(format!("{tag}: extraction {a}->{b}: {e}")),
                }
            }
        }

        // 9: per-class reconstruction bounds
        match audit_edge_bounds(&d, &s, &classes, &dists) {
            Ok(audit) => {
                bound_checks += audit.classes.iter().map(|c| c.checked).sum::<usize>();
                if audit.total_violations > 0 {
                    let worst = audit
                        .classes
                        .iter()
                        .filter(|c| c.violations > 0)
                        .map(|c| format!("{}:{}", c.name, c.violations))
                        .collect::<Vec<_>>()
                        .join(",");
                    bounds.fail(format!("{tag}: {worst}"));
                }
            }
            Err(e) => bounds.fail(format!("{tag}: {e}")),
        }
    }

    planarity.detail = format!("{instances} instances, zero crossings");
    degree.detail = format!(
        "max degree {max_degree_general} general / {max_degree_convex} convex"
    );
    stretch.detail = format!(
        "worst {:.4} vs complete, {:.4} vs triangular (limit {STRETCH_LIMIT})",
        worst_stretch, worst_stretch_tri
    );
    td_stretch.detail = format!("worst {:.6} (limit {TD_LIMIT})", worst_td);
    structural.detail = format!("{instances} instances audited");
    paths.detail = format!("{paths_checked} paths checked");
    bounds.detail = format!("{bound_checks} edge-class checks");

    criterion_05_builder_equivalence(&mut oracle_eq);
    criterion_06_metric_oracle(&mut metric);
    criterion_10_performance(&mut perf);

    println!("(corpus phase took {:.1?})", started.elapsed());
    let all = [
        planarity, degree, stretch, td_stretch, oracle_eq, metric, structural, paths, bounds, perf,
    ];
    let mut ok = true;
    for c in &all {
        ok &= c.report();
    }
    assert!(ok, "acceptance criteria failed");
}

/// The sweep builder must produce exactly the definition-level edge set.
fn criterion_05_builder_equivalence(c: &mut Criterion) {
    let kinds = [GenKind::Uniform, GenKind::Clustered, GenKind::Convex, GenKind::Grid];
    let mut rng = SplitMix64::new(0x0BAC_0BAC);
    let mut count = 0usize;
    while count < 1000 {
        let kind = kinds[(rng.next_u64() % 4) as usize];
        let n = (rng.next_u64() % 64 + 1) as usize;
        let seed = rng.next_u64();
        let spec = GenSpec { kind, n, seed, rho: None };
        let points = generate(&spec).expect("valid spec");
        let rotated = match ensure_general_position(&points) {
            Ok((p, _)) => p,
            Err(_) => continue, // clustered blobs can collide at tiny n
        };
        count += 1;
        let a = build_naive(&rotated);
        let b = build_sweep(&rotated);
        match (a, b) {
            (Ok(a), Ok(b)) => {
                let ea: Vec<_> = a.edges().iter().map(|e| (e.tail, e.head, e.color)).collect();
                let eb: Vec<_> = b.edges().iter().map(|e| (e.tail, e.head, e.color)).collect();
                if ea != eb {
                    c.fail(format!("{} n={n} seed={seed}: edge sets differ", kind.as_str()));
                }
            }
            (a, b) => c.fail(format!("{} n={n} seed={seed}: {a:?} {b:?}", kind.as_str())),
        }
    }
    c.detail = format!("{count} instances, identical edge sets");
}

/// Independent oracle for the triangular distance: bisection on the side
/// length, testing at each candidate the six homothets that pin one of the
/// two points at a vertex. Containment is a plain point-in-triangle test.
fn tri_dist_oracle(p: Point, q: Point) -> f64 {
    const SQRT_3: f64 = 1.732050807568877_f64;
    if p.x == q.x && p.y == q.y {
        return 0.0;
    }
    let euclid = ((p.x - q.x).powi(2) + (p.y - q.y).powi(2)).sqrt();

    let in_triangle = |corners: [(f64, f64); 3], pt: Point, tol: f64| -> bool {
        for i in 0..3 {
            let (ax, ay) = corners[i];
            let (bx, by) = corners[(i + 1) % 3];
            let cross = (bx - ax) * (pt.y - ay) - (by - ay) * (pt.x - ax);
            // corners are listed clockwise; inside means every cross <= tol
            if cross > tol {
                return false;
            }
        }
        true
    };

    // vertices of a downward homothet of side s with the green / blue / red
    // vertex pinned at (x, y); corners returned clockwise (green blue red)
    let candidates = |at: Point, s: f64| -> [[(f64, f64); 3]; 3] {
        let h = s * SQRT_3 / 2.0;
        [
            [(at.x, at.y), (at.x + s, at.y), (at.x + s / 2.0, at.y - h)],
            [(at.x - s, at.y), (at.x, at.y), (at.x - s / 2.0, at.y - h)],
            [(at.x - s / 2.0, at.y + h), (at.x + s / 2.0, at.y + h), (at.x, at.y)],
        ]
    };

    let feasible = |s: f64| -> bool {
        let tol = 1e-12 * s.max(euclid);
        for tri in candidates(p, s) {
            if in_triangle(tri, q, tol) {
                return true;
            }
        }
        for tri in candidates(q, s) {
            if in_triangle(tri, p, tol) {
                return true;
            }
        }
        false
    };

    let mut lo = 0.0;
    let mut hi = 2.0 * euclid;
    debug_assert!(feasible(hi));
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

fn criterion_06_metric_oracle(c: &mut Criterion) {
    let mut rng = SplitMix64::new(0x13_37_13_37);
    let mut pt = |id: usize| {
        Point::new(
            id,
            (rng.next_f64() - 0.5) * 2.0e3,
            (rng.next_f64() - 0.5) * 2.0e3,
        )
    };
    for i in 0..10_000 {
        let (p, q) = (pt(0), pt(1));
        let got = tri_dist(p, q);
        let want = tri_dist_oracle(p, q);
        if (got - want).abs() > 1e-6 * want.max(1e-12) {
            c.fail(format!("pair {i}: tri_dist {got} oracle {want}"));
        }
    }
    for i in 0..10_000 {
        let (p, q, r) = (pt(0), pt(1), pt(2));
        let pq = tri_dist(p, q);
        let qp = tri_dist(q, p);
        let pr = tri_dist(p, r);
        let rq = tri_dist(r, q);
        let euclid = ((p.x - q.x).powi(2) + (p.y - q.y).powi(2)).sqrt();
        if (pq - qp).abs() > 1e-9 * pq.max(1e-12)
            || euclid > pq * (1.0 + SLACK)
            || pq > (pr + rq) * (1.0 + SLACK)
            || tri_dist(p, p) != 0.0
        {
            c.fail(format!("triple {i}: metric axiom violated"));
        }
    }
    c.detail = "10000 oracle pairs within 1e-6, 10000 axiom triples".into();
}

/// Build-time gate: 1e5 points in at most five seconds, and doubling the
/// input size at most 2.6x the build time, averaged over five runs.
fn criterion_10_performance(c: &mut Criterion) {
    let sizes = [25_000usize, 50_000, 100_000];
    let mut times: Vec<Vec<f64>> = vec![Vec::new(); sizes.len()];
    let points: Vec<Vec<Point>> = sizes
        .iter()
        .map(|&n| generate(&GenSpec { kind: GenKind::Uniform, n, seed: 42, rho: None }).unwrap())
        .collect();
    for pts in &points {
        let _ = build_spanner_with_triangulation(pts, false).unwrap(); // warmup
    }
    for _run in 0..5 {
        for (i, pts) in points.iter().enumerate() {
            let t = Instant::now();
            let _ = build_spanner_with_triangulation(pts, false).unwrap();
            times[i].push(t.elapsed().as_secs_f64());
        }
    }
    let mut biggest_sorted = times[sizes.len() - 1].clone();
    biggest_sorted.sort_by(|a, b| a.total_cmp(b));
    let median_big = biggest_sorted[biggest_sorted.len() / 2];
    if median_big > 5.0 {
        c.fail(format!("median build at n=100000 took {median_big:.2}s (limit 5s)"));
    }
    let mut ratios = Vec::new();
    for i in 1..sizes.len() {
        let mean_ratio: f64 = (0..5).map(|r| times[i][r] / times[i - 1][r]).sum::<f64>() / 5.0;
        ratios.push(mean_ratio);
        if mean_ratio > 2.6 {
            c.fail(format!(
                "mean doubling ratio {}->{} is {mean_ratio:.3} (limit 2.6)",
                sizes[i - 1],
                sizes[i]
            ));
        }
    }
    c.detail = format!(
        "n=100000 median {:.3}s; doubling ratios {:.3}, {:.3}",
        median_big, ratios[0], ratios[1]
    );
}
