//! File formats, SVG rendering and the orchestration used by the `tdspan`
//! binary. Everything that writes bytes here is deterministic: identical
//! inputs and flags produce identical files.

pub mod formats;
pub mod svg;

pub use formats::{
    read_graph, read_points, write_graph, write_points, BoundClassStats, BoundSummary, FormatError,
    GraphFile, GraphFileEdge, PointsFormat, StatsFile, StretchStats,
};
pub use svg::render_svg;
