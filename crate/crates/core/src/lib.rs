//! Degree-4 plane spanners built from the triangular-distance Delaunay
//! triangulation (the half-theta-six graph), together with the machinery to
//! certify every claimed guarantee on concrete inputs: planarity, degree,
//! stretch, and the per-edge-class path bounds.
//!
//! The crate is `no_std + alloc`; all float math goes through [`libm`].
//! Everything here is a pure function of its inputs, so the types are safe to
//! share across threads once built.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod delaunay;
pub mod generators;
pub mod geom;
pub mod spanner;
pub mod verify;

mod util;

pub use delaunay::{
    build_naive, build_sweep, canonical_subpath, compute_anchors_and_fans, extract_monotone_path,
    canonical_edge_audit, DirectedEdge, Fan, MonotonePath, TdError, TdGraph,
};
pub use generators::{generate, GenError, GenKind, GenSpec};
pub use geom::{
    cone_of, delta_values, ensure_general_position, orientation, rotate_points,
    segments_properly_cross, smallest_homothet, tri_dist, Color, ConeId, ConeSign, Coord,
    DeltaValues, GeomError, Homothet, Point,
};
pub use spanner::{
    build_anchor_subgraph, build_spanner, build_spanner_with_triangulation, charge_edges,
    reconstruct_blue_cones, reconstruct_white_cones, AnchorSide, BuildError, BuildStep, ChargeMap,
    EdgeKind, Sector, SourceColor, SpannerEdge, SpannerGraph,
};
pub use verify::{
    audit_edge_bounds, check_convex_position, check_degree, check_planarity, classify_edges,
    compute_stretch, verify_spanner, Baseline, BoundAudit, DegreeReport, EdgeClass, PathAudit,
    StretchResult, VerificationReport, VerifyError,
};
