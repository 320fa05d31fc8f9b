//! Deterministic SVG rendering of a spanner over its point set.
//!
//! Anchors are drawn solid, canonical edges thin, shortcuts dashed; strokes
//! take the edge's source color with white rendered dark gray. The y axis is
//! flipped so the picture matches the mathematical orientation.

use tdspan_core::spanner::{EdgeKind, SourceColor};
use tdspan_core::Point;

use crate::formats::GraphFile;

fn stroke_color(color: SourceColor) -> &'static str {
    match color {
        SourceColor::Red => "#c0392b",
        SourceColor::Green => "#1e8449",
        SourceColor::Blue => "#2762ba",
        SourceColor::White => "#444444",
    }
}

pub fn render_svg(points: &[Point], graph: &GraphFile) -> String {
    let (min_x, max_x) = min_max(points.iter().map(|p| p.x));
    let (min_y, max_y) = min_max(points.iter().map(|p| -p.y));
    let span = (max_x - min_x).max(max_y - min_y).max(1e-9);
    let margin = 0.05 * span;
    let view = (
        min_x - margin,
        min_y - margin,
        (max_x - min_x) + 2.0 * margin,
        (max_y - min_y) + 2.0 * margin,
    );
    let radius = 0.005 * span;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
        view.0, view.1, view.2, view.3
    ));
    for e in &graph.edges {
        let (a, b) = (&points[e.u], &points[e.v]);
        let width_factor = match e.kind {
            EdgeKind::BlueAnchor | EdgeKind::WhiteAnchor => 0.0035,
            EdgeKind::ShortcutBlueCone | EdgeKind::ShortcutWhiteCone => 0.0025,
            _ => 0.0012,
        };
        let dash = if e.kind.is_shortcut() {
            format!(" stroke-dasharray=\"{} {}\"", 0.01 * span, 0.006 * span)
        } else {
            String::new()
        };
        out.push_str(&format!(
            "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"{}\"{}/>\n",
            a.x,
            -a.y,
            b.x,
            -b.y,
            stroke_color(e.color),
            width_factor * span,
            dash
        ));
    }
    for p in points {
        out.push_str(&format!(
            "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#111111\"/>\n",
            p.x, -p.y, radius
        ));
    }
    out.push_str("</svg>\n");
    out
}

fn min_max(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo > hi {
        (0.0, 1.0)
    } else {
        (lo, hi)
    }
}
