//! Point, graph and stats files.
//!
//! Graph files are written through a canonical serializer (fixed key order,
//! edges sorted by endpoint pair, floats with 17 significant digits) so that
//! equal graphs produce equal bytes.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use tdspan_core::spanner::{EdgeKind, SourceColor, SpannerGraph};
use tdspan_core::Point;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },

    #[error("{path}: duplicate points {a} and {b}")]
    DuplicatePoint { path: String, a: usize, b: usize },

    #[error("{path}: schema mismatch: {msg}")]
    SchemaMismatch { path: String, msg: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn io_err(path: &Path, source: std::io::Error) -> FormatError {
    FormatError::Io { path: path.display().to_string(), source }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointsFormat {
    Csv,
    Json,
}

impl PointsFormat {
    /// `.json` files are JSON, anything else is CSV.
    pub fn from_path(path: &Path) -> PointsFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => PointsFormat::Json,
            _ => PointsFormat::Csv,
        }
    }
}

/// Reads a point file; format chosen by extension. CSV holds one `x,y` pair
/// per line with an optional header line; JSON holds
/// `{"points": [[x, y], ...]}`. Ids are assigned in file order.
pub fn read_points(path: &Path) -> Result<Vec<Point>, FormatError> {
    read_points_as(path, PointsFormat::from_path(path))
}

pub fn read_points_as(path: &Path, format: PointsFormat) -> Result<Vec<Point>, FormatError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let coords = match format {
        PointsFormat::Csv => parse_csv(path, &text)?,
        PointsFormat::Json => parse_points_json(path, &text)?,
    };
    let points: Vec<Point> = coords
        .iter()
        .enumerate()
        .map(|(i, &(x, y))| Point::new(i, x, y))
        .collect();
    // exact duplicates are invalid inputs everywhere downstream
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        points[a]
            .x
            .total_cmp(&points[b].x)
            .then(points[a].y.total_cmp(&points[b].y))
    });
    for w in order.windows(2) {
        let (a, b) = (&points[w[0]], &points[w[1]]);
        if a.x == b.x && a.y == b.y {
            return Err(FormatError::DuplicatePoint {
                path: path.display().to_string(),
                a: a.id.min(b.id),
                b: a.id.max(b.id),
            });
        }
    }
    Ok(points)
}

fn parse_csv(path: &Path, text: &str) -> Result<Vec<(f64, f64)>, FormatError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        match parse_csv_pair(line) {
            Some(pair) => out.push(pair),
            None if idx == 0 => continue, // header
            None => {
                return Err(FormatError::Parse {
                    path: path.display().to_string(),
                    line: idx + 1,
                    msg: format!("expected `x,y`, got {line:?}"),
                })
            }
        }
        if let Some(&(x, y)) = out.last() {
            if !x.is_finite() || !y.is_finite() {
                return Err(FormatError::Parse {
                    path: path.display().to_string(),
                    line: idx + 1,
                    msg: "coordinates must be finite".into(),
                });
            }
        }
    }
    Ok(out)
}

fn parse_csv_pair(line: &str) -> Option<(f64, f64)> {
    let (xs, ys) = line.split_once(',')?;
    Some((xs.trim().parse().ok()?, ys.trim().parse().ok()?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PointsJson {
    points: Vec<(f64, f64)>,
}

fn parse_points_json(path: &Path, text: &str) -> Result<Vec<(f64, f64)>, FormatError> {
    let parsed: PointsJson = serde_json::from_str(text).map_err(|e| FormatError::Parse {
        path: path.display().to_string(),
        line: e.line(),
        msg: e.to_string(),
    })?;
    for (i, &(x, y)) in parsed.points.iter().enumerate() {
        if !x.is_finite() || !y.is_finite() {
            return Err(FormatError::Parse {
                path: path.display().to_string(),
                line: 0,
                msg: format!("point {i} has a non-finite coordinate"),
            });
        }
    }
    Ok(parsed.points)
}

/// Writes points in the format implied by the extension; the CSV form is
/// headerless `x,y` lines, shortest-roundtrip floats.
pub fn write_points(path: &Path, points: &[Point]) -> Result<(), FormatError> {
    let body = match PointsFormat::from_path(path) {
        PointsFormat::Csv => {
            let mut s = String::new();
            for p in points {
                s.push_str(&format!("{},{}\n", p.x, p.y));
            }
            s
        }
        PointsFormat::Json => {
            let mut s = String::from("{\"points\": [");
            for (i, p) in points.iter().enumerate() {
                if i > 0 {
                    s.push_str(", ");
                }
                s.push_str(&format!("[{}, {}]", p.x, p.y));
            }
            s.push_str("]}\n");
            s
        }
    };
    fs::write(path, body).map_err(|e| io_err(path, e))
}

// ---------------------------------------------------------------------------
// Graph files
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GraphFileEdge {
    pub u: usize,
    pub v: usize,
    pub color: SourceColor,
    pub kind: EdgeKind,
    pub in_anchor_subgraph: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GraphFile {
    pub n: usize,
    /// Rotation (radians) that was applied to the input points; the graph's
    /// geometry refers to the rotated frame.
    pub rotation_applied: f64,
    pub edges: Vec<GraphFileEdge>,
}

impl GraphFile {
    pub fn from_spanner(s: &SpannerGraph) -> GraphFile {
        let edges = s
            .edges()
            .map(|e| {
                let (u, v) = e.pair();
                GraphFileEdge {
                    u,
                    v,
                    color: e.source_color,
                    kind: e.kind,
                    in_anchor_subgraph: e.in_anchor_subgraph,
                }
            })
            .collect();
        GraphFile { n: s.n(), rotation_applied: s.rotation_applied(), edges }
    }

    pub fn edge_pairs(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|e| (e.u, e.v)).collect()
    }

    pub fn validate(&self) -> Result<(), String> {
        if !self.rotation_applied.is_finite() {
            return Err("rotation_applied must be finite".into());
        }
        let mut prev: Option<(usize, usize)> = None;
        for e in &self.edges {
            if e.u >= e.v {
                return Err(format!("edge ({}, {}) must satisfy u < v", e.u, e.v));
            }
            if e.v >= self.n {
                return Err(format!("edge ({}, {}) exceeds n = {}", e.u, e.v, self.n));
            }
            if let Some(p) = prev {
                if p >= (e.u, e.v) {
                    return Err(format!("edges not strictly sorted at ({}, {})", e.u, e.v));
                }
            }
            prev = Some((e.u, e.v));
            if e.in_anchor_subgraph != e.kind.is_anchor() {
                return Err(format!(
                    "edge ({}, {}): in_anchor_subgraph must match the kind",
                    e.u, e.v
                ));
            }
            let color_ok = match e.kind {
                EdgeKind::BlueAnchor => e.color == SourceColor::Blue,
                EdgeKind::ShortcutBlueCone | EdgeKind::ShortcutWhiteCone => {
                    e.color == SourceColor::White
                }
                _ => matches!(e.color, SourceColor::Red | SourceColor::Green),
            };
            if !color_ok {
                return Err(format!(
                    "edge ({}, {}): color {} is invalid for kind {}",
                    e.u,
                    e.v,
                    e.color.as_str(),
                    e.kind.as_str()
                ));
            }
        }
        Ok(())
    }

    /// Canonical textual form: fixed key order, sorted edges, floats with 17
    /// significant digits.
    pub fn canonical_json(&self) -> String {
        let mut s = String::new();
        s.push_str("{\n");
        s.push_str(&format!("  \"n\": {},\n", self.n));
        s.push_str(&format!(
            "  \"rotation_applied\": {},\n",
            format_f64_17(self.rotation_applied)
        ));
        s.push_str("  \"edges\": [");
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(&format!(
                "\n    {{\"u\": {}, \"v\": {}, \"color\": \"{}\", \"kind\": \"{}\", \"in_anchor_subgraph\": {}}}",
                e.u,
                e.v,
                e.color.as_str(),
                e.kind.as_str(),
                e.in_anchor_subgraph
            ));
        }
        if !self.edges.is_empty() {
            s.push_str("\n  ");
        }
        s.push_str("]\n}\n");
        s
    }
}

/// 17 significant digits, enough for a lossless f64 round trip.
fn format_f64_17(x: f64) -> String {
    format!("{:.16e}", x)
}

pub fn write_graph(path: &Path, graph: &GraphFile) -> Result<(), FormatError> {
    if let Err(msg) = graph.validate() {
        return Err(FormatError::SchemaMismatch { path: path.display().to_string(), msg });
    }
    fs::write(path, graph.canonical_json()).map_err(|e| io_err(path, e))
}

pub fn read_graph(path: &Path) -> Result<GraphFile, FormatError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| FormatError::Parse {
        path: path.display().to_string(),
        line: e.line(),
        msg: e.to_string(),
    })?;
    let mismatch = |msg: String| FormatError::SchemaMismatch {
        path: path.display().to_string(),
        msg,
    };

    let obj = value.as_object().ok_or_else(|| mismatch("top level must be an object".into()))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "n" | "rotation_applied" | "edges") {
            return Err(mismatch(format!("unknown key {key:?}")));
        }
    }
    let n = obj
        .get("n")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| mismatch("missing integer key \"n\"".into()))? as usize;
    let rotation_applied = obj
        .get("rotation_applied")
        .and_then(|v| v.as_f64())
        .ok_or_else(|| mismatch("missing number key \"rotation_applied\"".into()))?;
    let raw_edges = obj
        .get("edges")
        .and_then(|v| v.as_array())
        .ok_or_else(|| mismatch("missing array key \"edges\"".into()))?;

    let mut edges = Vec::with_capacity(raw_edges.len());
    for (i, e) in raw_edges.iter().enumerate() {
        let eo = e
            .as_object()
            .ok_or_else(|| mismatch(format!("edge {i} must be an object")))?;
        for key in eo.keys() {
            if !matches!(key.as_str(), "u" | "v" | "color" | "kind" | "in_anchor_subgraph") {
                return Err(mismatch(format!("edge {i}: unknown key {key:?}")));
            }
        }
        let get_u64 = |k: &str| {
            eo.get(k)
                .and_then(|v| v.as_u64())
                .ok_or_else(|| mismatch(format!("edge {i}: missing integer {k:?}")))
        };
        let u = get_u64("u")? as usize;
        let v = get_u64("v")? as usize;
        let color = eo
            .get("color")
            .and_then(|v| v.as_str())
            .and_then(SourceColor::from_str)
            .ok_or_else(|| mismatch(format!("edge {i}: bad color")))?;
        let kind = eo
            .get("kind")
            .and_then(|v| v.as_str())
            .and_then(EdgeKind::from_str)
            .ok_or_else(|| mismatch(format!("edge {i}: bad kind")))?;
        let in_anchor_subgraph = eo
            .get("in_anchor_subgraph")
            .and_then(|v| v.as_bool())
            .ok_or_else(|| mismatch(format!("edge {i}: missing bool in_anchor_subgraph")))?;
        edges.push(GraphFileEdge { u, v, color, kind, in_anchor_subgraph });
    }

    let graph = GraphFile { n, rotation_applied, edges };
    graph
        .validate()
        .map_err(|msg| FormatError::SchemaMismatch { path: path.display().to_string(), msg })?;
    Ok(graph)
}

// ---------------------------------------------------------------------------
// Stats files
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct StretchStats {
    pub value: f64,
    pub witness: Option<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundClassStats {
    pub name: String,
    pub checked: usize,
    pub violations: usize,
    pub worst_ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundSummary {
    pub total_violations: usize,
    pub worst_edge_ratio_vs_tri: f64,
    pub stretch_vs_tri: f64,
    pub classes: Vec<BoundClassStats>,
}

/// The stats emitted by `verify`; field order is the serialized key order.
#[derive(Clone, Debug, Serialize)]
pub struct StatsFile {
    pub n: usize,
    pub m: usize,
    pub max_degree: usize,
    pub is_plane: bool,
    pub stretch: StretchStats,
    pub td_stretch: f64,
    pub bound_audit: Option<BoundSummary>,
    pub charging_ok: Option<bool>,
    pub convex_position: bool,
    pub rotation_applied: f64,
    pub build_ms: f64,
}

pub fn write_stats(path: &Path, stats: &StatsFile) -> Result<(), FormatError> {
    let mut body = serde_json::to_string_pretty(stats).expect("stats serialize cannot fail");
    body.push('\n');
    fs::write(path, body).map_err(|e| io_err(path, e))
}
