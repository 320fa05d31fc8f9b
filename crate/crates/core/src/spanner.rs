//! The six-step construction of the bounded-degree plane spanner on top of
//! the triangulation: an anchor subgraph biased towards blue edges, then
//! reconstruction of canonical paths in blue cones (with valley shortcuts)
//! and in white cones (with visibility shortcuts along the white side of
//! each white anchor).
//!
//! The whole pipeline is deterministic: anchors are scanned in ascending
//! triangular length with an id tie-break, fans in apex order, and the
//! resulting graph is a sorted set of undirected edges.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use thiserror::Error;

use crate::delaunay::{
    build_naive, build_sweep, compute_anchors_and_fans, norm_pair, EdgeId, Fan, PointId, TdError,
    TdGraph,
};
use crate::geom::{
    cone_of, ensure_general_position, orientation, point_on_closed_segment,
    segments_properly_cross, tri_dist, Color, ConeId, GeomError, Point,
};
use crate::util::OrdF64;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum BuildError {
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error(transparent)]
    Triangulation(#[from] TdError),
}

/// How an edge entered the spanner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum EdgeKind {
    BlueAnchor,
    WhiteAnchor,
    CanonicalBlueCone,
    ShortcutBlueCone,
    CanonicalWhiteCone,
    ShortcutWhiteCone,
}

impl EdgeKind {
    pub fn is_anchor(self) -> bool {
        matches!(self, EdgeKind::BlueAnchor | EdgeKind::WhiteAnchor)
    }

    pub fn is_shortcut(self) -> bool {
        matches!(self, EdgeKind::ShortcutBlueCone | EdgeKind::ShortcutWhiteCone)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::BlueAnchor => "blue_anchor",
            EdgeKind::WhiteAnchor => "white_anchor",
            EdgeKind::CanonicalBlueCone => "canonical_blue_cone",
            EdgeKind::ShortcutBlueCone => "shortcut_blue_cone",
            EdgeKind::CanonicalWhiteCone => "canonical_white_cone",
            EdgeKind::ShortcutWhiteCone => "shortcut_white_cone",
        }
    }

    pub fn from_str(s: &str) -> Option<Self> {
        Some(match s {
            "blue_anchor" => EdgeKind::BlueAnchor,
            "white_anchor" => EdgeKind::WhiteAnchor,
            "canonical_blue_cone" => EdgeKind::CanonicalBlueCone,
            "shortcut_blue_cone" => EdgeKind::ShortcutBlueCone,
            "canonical_white_cone" => EdgeKind::CanonicalWhiteCone,
            "shortcut_white_cone" => EdgeKind::ShortcutWhiteCone,
            _ => return None,
        })
    }
}

/// Edge color carried into the spanner; shortcuts are white.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SourceColor {
    Red,
    Green,
    Blue,
    White,
}

impl From<Color> for SourceColor {
    fn from(c: Color) -> Self {
        match c {
            Color::Red => SourceColor::Red,
            Color::Green => SourceColor::Green,
            Color::Blue => SourceColor::Blue,
        }
    }
}

impl SourceColor {
    pub fn as_str(self) -> &'static str {
        match self {
            SourceColor::Red => "red",
            SourceColor::Green => "green",
            SourceColor::Blue => "blue",
            SourceColor::White => "white",
        }
    }

    pub fn from_str(s: &str) -> Option<Self> {
        Some(match s {
            "red" => SourceColor::Red,
            "green" => SourceColor::Green,
            "blue" => SourceColor::Blue,
            "white" => SourceColor::White,
            _ => return None,
        })
    }
}

/// An undirected spanner edge with its construction provenance. `tail` and
/// `head` keep the orientation the edge was added with (the triangulation
/// orientation for anchors and canonical edges, shortcut orientation for
/// shortcuts); the graph itself is undirected.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpannerEdge {
    pub tail: PointId,
    pub head: PointId,
    pub kind: EdgeKind,
    pub source_color: SourceColor,
    pub in_anchor_subgraph: bool,
}

impl SpannerEdge {
    pub fn pair(&self) -> (PointId, PointId) {
        norm_pair(self.tail, self.head)
    }
}

/// Side of a fan edge relative to its white anchor: the blue side of the
/// cone touches a blue cone of the apex, the white side touches a white one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnchorSide {
    White,
    Blue,
}

/// Side of the fan member at `pos` relative to the fan's anchor; `None` for
/// the anchor itself and for blue fans (sides are defined for white anchors).
pub fn member_side(fan: &Fan, pos: usize) -> Option<AnchorSide> {
    if fan.color == Color::Blue || pos == fan.anchor_pos {
        return None;
    }
    let white = match fan.color {
        // red negative cone: counterclockwise end touches the green cone
        Color::Red => pos > fan.anchor_pos,
        // green negative cone: clockwise end touches the red cone
        Color::Green => pos < fan.anchor_pos,
        Color::Blue => unreachable!(),
    };
    Some(if white { AnchorSide::White } else { AnchorSide::Blue })
}

/// Ordered record of construction events, kept for audits.
#[derive(Clone, Debug, PartialEq)]
pub enum BuildStep {
    BlueAnchor { tail: PointId, head: PointId },
    WhiteAnchorAdded { tail: PointId, head: PointId },
    WhiteAnchorSkipped { tail: PointId, head: PointId, blocker: (PointId, PointId) },
    BlueConeCanonical { tail: PointId, head: PointId },
    /// Valley shortcut `(p, r)` replacing the pair `(p, q), (r, q)`.
    BlueConeShortcut { p: PointId, q: PointId, r: PointId },
    WhiteConeCanonical { tail: PointId, head: PointId },
    /// Visibility shortcut from walk point `from` to `to` on the white side
    /// of the anchor `(anchor_tail, apex)`; `prev` is the walk point before
    /// `to` and `removed` tells whether the canonical edge `(to, prev)` was
    /// dropped from the spanner.
    WhiteConeShortcut {
        apex: PointId,
        anchor_tail: PointId,
        from: PointId,
        to: PointId,
        prev: PointId,
        removed: bool,
    },
    /// An insertion coincided with an existing edge; the earlier kind wins.
    DuplicateMerged { a: PointId, b: PointId, kept: EdgeKind, dropped: EdgeKind },
}

/// The undirected spanner with provenance per edge and the ordered build
/// log. Immutable once built.
#[derive(Clone, Debug)]
pub struct SpannerGraph {
    points: Vec<Point>,
    rotation_applied: f64,
    edges: BTreeMap<(PointId, PointId), SpannerEdge>,
    log: Vec<BuildStep>,
}

impl SpannerGraph {
    fn new(points: Vec<Point>) -> Self {
        SpannerGraph {
            points,
            rotation_applied: 0.0,
            edges: BTreeMap::new(),
            log: Vec::new(),
        }
    }

    /// An edgeless spanner over the given points, for composing individual
    /// construction steps directly.
    pub fn empty(points: Vec<Point>) -> Self {
        SpannerGraph::new(points)
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Rotation (radians) applied during general-position enforcement; the
    /// stored points are post-rotation.
    pub fn rotation_applied(&self) -> f64 {
        self.rotation_applied
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in sorted undirected order.
    pub fn edges(&self) -> impl Iterator<Item = &SpannerEdge> {
        self.edges.values()
    }

    pub fn get(&self, a: PointId, b: PointId) -> Option<&SpannerEdge> {
        self.edges.get(&norm_pair(a, b))
    }

    pub fn contains(&self, a: PointId, b: PointId) -> bool {
        self.edges.contains_key(&norm_pair(a, b))
    }

    pub fn in_anchor_subgraph(&self, a: PointId, b: PointId) -> bool {
        self.get(a, b).is_some_and(|e| e.in_anchor_subgraph)
    }

    pub fn log(&self) -> &[BuildStep] {
        &self.log
    }

    pub fn undirected_pairs(&self) -> Vec<(PointId, PointId)> {
        self.edges.keys().copied().collect()
    }

    fn insert(
        &mut self,
        kind: EdgeKind,
        tail: PointId,
        head: PointId,
        source_color: SourceColor,
        in_anchor_subgraph: bool,
    ) -> bool {
        let key = norm_pair(tail, head);
        if let Some(existing) = self.edges.get(&key) {
            self.log.push(BuildStep::DuplicateMerged {
                a: key.0,
                b: key.1,
                kept: existing.kind,
                dropped: kind,
            });
            return false;
        }
        self.edges.insert(
            key,
            SpannerEdge { tail, head, kind, source_color, in_anchor_subgraph },
        );
        true
    }

    /// Removes the undirected edge unless it belongs to the anchor subgraph.
    fn remove_if_non_anchor(&mut self, a: PointId, b: PointId) -> bool {
        let key = norm_pair(a, b);
        match self.edges.get(&key) {
            Some(e) if !e.in_anchor_subgraph => {
                self.edges.remove(&key);
                true
            }
            _ => false,
        }
    }
}

/// Steps 1 and 2: all blue anchors, then white anchors in ascending
/// triangular length, each added unless a previously added white anchor
/// occupies an adjacent cone at a shared endpoint. Blue anchors never block
/// white ones.
pub fn build_anchor_subgraph(g: &TdGraph) -> SpannerGraph {
    let mut s = SpannerGraph::new(g.points().to_vec());

    for fan in g.fans() {
        if fan.color == Color::Blue {
            let e = g.edge(fan.anchor_edge());
            s.insert(EdgeKind::BlueAnchor, e.tail, e.head, SourceColor::Blue, true);
            s.log.push(BuildStep::BlueAnchor { tail: e.tail, head: e.head });
        }
    }

    let mut whites: Vec<EdgeId> = g
        .fans()
        .iter()
        .filter(|f| f.color.is_white())
        .map(Fan::anchor_edge)
        .collect();
    whites.sort_by_cached_key(|&eid| {
        let e = g.edge(eid);
        (
            OrdF64(tri_dist(g.point(e.tail), g.point(e.head))),
            e.tail,
            e.head,
        )
    });

    // sectors occupied by white anchors already in the subgraph
    let mut occupied: BTreeMap<(PointId, u8), (PointId, PointId)> = BTreeMap::new();
    for eid in whites {
        let e = g.edge(eid);
        let slots = [
            (e.tail, ConeId::positive(e.color).sector()),
            (e.head, ConeId::negative(e.color).sector()),
        ];
        let blocker = slots.iter().find_map(|&(p, k)| {
            let left = occupied.get(&(p, (k + 5) % 6));
            let right = occupied.get(&(p, (k + 1) % 6));
            left.or(right).copied()
        });
        match blocker {
            Some(other) => {
                s.log.push(BuildStep::WhiteAnchorSkipped {
                    tail: e.tail,
                    head: e.head,
                    blocker: other,
                });
            }
            None => {
                s.insert(EdgeKind::WhiteAnchor, e.tail, e.head, e.color.into(), true);
                s.log.push(BuildStep::WhiteAnchorAdded { tail: e.tail, head: e.head });
                for (p, k) in slots {
                    occupied.insert((p, k), (e.tail, e.head));
                }
            }
        }
    }
    s
}

/// Steps 3 and 4: every white canonical edge in a blue cone (unless already
/// an anchor), then each valley pair of such edges incoming at a shared
/// point is replaced by a white shortcut between the outer endpoints.
pub fn reconstruct_blue_cones(g: &TdGraph, mut s: SpannerGraph) -> SpannerGraph {
    for fan in g.fans() {
        if fan.color != Color::Blue {
            continue;
        }
        for &link in &fan.links {
            let e = g.edge(link);
            debug_assert!(e.color.is_white(), "canonical edges in blue cones are white");
            if !s.contains(e.tail, e.head)
                && s.insert(EdgeKind::CanonicalBlueCone, e.tail, e.head, e.color.into(), false)
            {
                s.log.push(BuildStep::BlueConeCanonical { tail: e.tail, head: e.head });
            }
        }
    }

    for fan in g.fans() {
        if fan.color != Color::Blue {
            continue;
        }
        for i in 0..fan.links.len().saturating_sub(1) {
            let l1 = g.edge(fan.links[i]);
            let l2 = g.edge(fan.links[i + 1]);
            let mid = fan.tails[i + 1];
            if l1.head != mid || l2.head != mid {
                continue;
            }
            let both_plain = [l1, l2].iter().all(|l| {
                s.get(l.tail, l.head).is_some_and(|se| !se.in_anchor_subgraph)
            });
            if !both_plain {
                continue;
            }
            s.remove_if_non_anchor(l1.tail, l1.head);
            s.remove_if_non_anchor(l2.tail, l2.head);
            s.insert(EdgeKind::ShortcutBlueCone, l1.tail, l2.tail, SourceColor::White, false);
            s.log.push(BuildStep::BlueConeShortcut { p: l1.tail, q: mid, r: l2.tail });
        }
    }
    s
}

/// True iff the segment from walk point `i` to walk point `j` meets the
/// canonical subpath between them only at its endpoints, with every skipped
/// path vertex strictly on the opposite side of the segment from the fan
/// apex. The side condition keeps the shortcut inside the fan triangles, so
/// it can cross nothing but the skipped spokes.
fn clear_sight(points: &[Point], path: &[PointId], i: usize, j: usize, apex: Point) -> bool {
    let a = points[path[i]];
    let b = points[path[j]];
    let apex_side = orientation(a, b, apex);
    if apex_side == 0 {
        return false;
    }
    for t in i..j {
        if segments_properly_cross(a, b, points[path[t]], points[path[t + 1]]) {
            return false;
        }
    }
    for t in (i + 1)..j {
        let v = points[path[t]];
        if point_on_closed_segment(v, a, b) || orientation(a, b, v) != -apex_side {
            return false;
        }
    }
    true
}

/// Steps 5 and 6: white canonical edges in white cones are added unless they
/// lie on the blue side of their own anchor or that anchor is already in the
/// anchor subgraph; then every white anchor's white side is walked from its
/// boundary edge towards the anchor, taking the farthest visible shortcut
/// over every blue canonical edge encountered.
///
/// A canonical edge that is its own (blocked) anchor has no side; it counts
/// as white-side here, which is what keeps every missing white canonical
/// edge reconstructible through its anchor.
pub fn reconstruct_white_cones(g: &TdGraph, mut s: SpannerGraph) -> Result<SpannerGraph, BuildError> {
    for fan in g.fans() {
        if fan.color == Color::Blue {
            continue;
        }
        for &link in &fan.links {
            let e = g.edge(link);
            if e.color == Color::Blue {
                continue;
            }
            let (own_idx, pos) = g.edge_fan(link);
            let own = &g.fans()[own_idx];
            if member_side(own, pos) == Some(AnchorSide::Blue) {
                continue;
            }
            let anchor = g.edge(own.anchor_edge());
            if s.in_anchor_subgraph(anchor.tail, anchor.head) {
                continue;
            }
            if !s.contains(e.tail, e.head)
                && s.insert(EdgeKind::CanonicalWhiteCone, e.tail, e.head, e.color.into(), false)
            {
                s.log.push(BuildStep::WhiteConeCanonical { tail: e.tail, head: e.head });
            }
        }
    }

    for fan in g.fans() {
        if fan.color == Color::Blue {
            continue;
        }
        let last = fan.len() - 1;
        // walk from the white-side boundary member towards the anchor
        let positions: Vec<usize> = match fan.color {
            Color::Red if fan.anchor_pos < last => (fan.anchor_pos..=last).rev().collect(),
            Color::Green if fan.anchor_pos > 0 => (0..=fan.anchor_pos).collect(),
            _ => continue,
        };
        let path: Vec<PointId> = positions.iter().map(|&p| fan.tails[p]).collect();
        let k = path.len() - 1;
        let apex = fan.apex;

        let mut i = 0;
        while i < k {
            let link = fan.links[positions[i].min(positions[i + 1])];
            let e = g.edge(link);
            if e.color.is_white() {
                if e.tail != path[i + 1] || e.head != path[i] {
                    return Err(TdError::BrokenTriangulation {
                        apex,
                        a: path[i],
                        b: path[i + 1],
                    }
                    .into());
                }
                i += 1;
                continue;
            }
            if e.tail != path[i] || e.head != path[i + 1] {
                return Err(TdError::BrokenTriangulation { apex, a: path[i], b: path[i + 1] }.into());
            }
            // Jump to the farthest point that (a) is reached over a white
            // canonical edge, and (b) sees the current point past the
            // skipped subpath. (a) always holds at the anchor end, since the
            // canonical edge next to the anchor points out of the anchor
            // tail; (b) holds there at the latest when nothing in between
            // qualifies.
            let mut chosen = None;
            for cand in ((i + 1)..=k).rev() {
                let landing = g.edge(fan.links[positions[cand - 1].min(positions[cand])]);
                if landing.color == Color::Blue {
                    continue;
                }
                if clear_sight(g.points(), &path, i, cand, g.point(apex)) {
                    chosen = Some(cand);
                    break;
                }
            }
            let j = match chosen {
                Some(j) => j,
                None => {
                    return Err(
                        TdError::BrokenTriangulation { apex, a: path[i], b: path[i + 1] }.into()
                    )
                }
            };
            let removed = s.remove_if_non_anchor(path[j], path[j - 1]);
            s.insert(EdgeKind::ShortcutWhiteCone, path[j], path[i], SourceColor::White, false);
            s.log.push(BuildStep::WhiteConeShortcut {
                apex,
                anchor_tail: path[k],
                from: path[i],
                to: path[j],
                prev: path[j - 1],
                removed,
            });
            i = j;
        }
    }
    Ok(s)
}

/// The full pipeline: general-position rotation, triangulation, anchors,
/// then construction steps 1 through 6. Returns the spanner with the applied
/// rotation recorded (point coordinates are post-rotation).
pub fn build_spanner(points: &[Point]) -> Result<SpannerGraph, BuildError> {
    build_spanner_with_triangulation(points, false).map(|(s, _)| s)
}

/// Same pipeline, also returning the enriched triangulation. `naive` selects
/// the quadratic definition-level builder instead of the sweep.
pub fn build_spanner_with_triangulation(
    points: &[Point],
    naive: bool,
) -> Result<(SpannerGraph, TdGraph), BuildError> {
    let (rotated, angle) = ensure_general_position(points)?;
    let g = if naive { build_naive(&rotated)? } else { build_sweep(&rotated)? };
    let g = compute_anchors_and_fans(g)?;
    let s = build_anchor_subgraph(&g);
    let s = reconstruct_blue_cones(&g, s);
    let mut s = reconstruct_white_cones(&g, s)?;
    s.rotation_applied = angle;
    Ok((s, g))
}

// ---------------------------------------------------------------------------
// Charging scheme
// ---------------------------------------------------------------------------

/// The four sectors at a point: the two blue cones, and the two white cone
/// pairs above and below the horizontal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Sector {
    LeftBlue,
    RightBlue,
    UpperWhite,
    LowerWhite,
}

impl Sector {
    pub fn of_cone(cone: ConeId) -> Sector {
        match cone.sector() {
            0 => Sector::RightBlue,
            3 => Sector::LeftBlue,
            1 | 2 => Sector::UpperWhite,
            _ => Sector::LowerWhite,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sector::LeftBlue => "left_blue",
            Sector::RightBlue => "right_blue",
            Sector::UpperWhite => "upper_white",
            Sector::LowerWhite => "lower_white",
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum ChargeError {
    #[error(transparent)]
    Geometry(#[from] GeomError),

    /// Two edges charged to one sector at one point; must never happen.
    #[error("charge collision at point {point} sector {sector:?}: edges {first:?} and {second:?}")]
    Collision {
        point: PointId,
        sector: Sector,
        first: (PointId, PointId),
        second: (PointId, PointId),
    },
}

/// Sector charges per edge endpoint.
#[derive(Clone, Debug, Default)]
pub struct ChargeMap {
    /// `(point, sector)` -> the undirected edge charged there.
    pub slots: BTreeMap<(PointId, Sector), (PointId, PointId)>,
    /// Per edge: charge at its recorded tail, charge at its recorded head.
    pub per_edge: Vec<((PointId, PointId), Sector, Sector)>,
}

fn natural_sector(points: &[Point], from: PointId, to: PointId) -> Result<Sector, GeomError> {
    Ok(Sector::of_cone(cone_of(points[from], points[to])?))
}

/// Assigns every spanner edge to one sector at each endpoint following the
/// per-kind scheme; at most one edge may land in each sector of each point
/// (that is the degree-4 argument, checked here as data).
pub fn charge_edges(s: &SpannerGraph) -> Result<ChargeMap, ChargeError> {
    let points = s.points();
    let mut map = ChargeMap::default();
    for e in s.edges() {
        let (at_tail, at_head) = match e.kind {
            EdgeKind::BlueAnchor => (Sector::LeftBlue, Sector::RightBlue),
            EdgeKind::WhiteAnchor | EdgeKind::ShortcutBlueCone => (
                natural_sector(points, e.tail, e.head)?,
                natural_sector(points, e.head, e.tail)?,
            ),
            EdgeKind::CanonicalBlueCone => {
                (natural_sector(points, e.tail, e.head)?, Sector::LeftBlue)
            }
            EdgeKind::CanonicalWhiteCone | EdgeKind::ShortcutWhiteCone => {
                (Sector::RightBlue, natural_sector(points, e.head, e.tail)?)
            }
        };
        for (p, sector) in [(e.tail, at_tail), (e.head, at_head)] {
            if let Some(&first) = map.slots.get(&(p, sector)) {
                return Err(ChargeError::Collision {
                    point: p,
                    sector,
                    first,
                    second: e.pair(),
                });
            }
            map.slots.insert((p, sector), e.pair());
        }
        map.per_edge.push((e.pair(), at_tail, at_head));
    }
    Ok(map)
}
