//! The triangulation under the triangular distance (equivalently the
//! half-theta-six graph): every point links, in each of its three positive
//! cones, to the point minimizing the triangular distance. Fans, anchors and
//! canonical paths are derived on top.
//!
//! `build_naive` is the quadratic definition-level oracle; `build_sweep`
//! produces the identical edge set in `O(n log n)`. Both pick minima by the
//! same per-point sweep keys (see `geom::family_key`), so their outputs match
//! edge for edge, not just up to ties.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use thiserror::Error;

use crate::geom::{
    cone_forms, cone_of, family_f, family_g, family_key, orientation, Color, ConeId, GeomError,
    Point,
};
use crate::util::OrdF64;

pub type PointId = usize;
pub type EdgeId = usize;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum TdError {
    #[error(transparent)]
    Geometry(#[from] GeomError),

    /// Consecutive fan tails are not adjacent in the triangulation; signals
    /// an upstream bug or a degenerate input that slipped past enforcement.
    #[error("broken triangulation: fan of point {apex} has non-adjacent tails {a} and {b}")]
    BrokenTriangulation { apex: PointId, a: PointId, b: PointId },

    #[error("point {0} is not on the requested canonical path")]
    NotOnPath(PointId),

    #[error("monotone path between {p} and {q} did not terminate")]
    NonTermination { p: PointId, q: PointId },

    #[error("anchors and fans have not been computed")]
    AnchorsNotComputed,
}

/// An edge of the triangulation, oriented outwards from the point that
/// selected it; its color is the color of the tail's positive cone
/// containing the head.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DirectedEdge {
    pub tail: PointId,
    pub head: PointId,
    pub color: Color,
}

impl DirectedEdge {
    pub fn pair(&self) -> (PointId, PointId) {
        norm_pair(self.tail, self.head)
    }
}

pub(crate) fn norm_pair(a: PointId, b: PointId) -> (PointId, PointId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// All incoming edges of one negative cone, in counterclockwise order, plus
/// the derived anchor and canonical path.
#[derive(Clone, Debug)]
pub struct Fan {
    pub apex: PointId,
    pub color: Color,
    /// Member edges (all directed into `apex`), counterclockwise.
    pub members: Vec<EdgeId>,
    /// Tails of `members`, i.e. the canonical path `v1..vk`.
    pub tails: Vec<PointId>,
    pub anchor_pos: usize,
    /// Triangulation edges joining consecutive tails (`links[i]` joins
    /// `tails[i]` and `tails[i+1]`).
    pub links: Vec<EdgeId>,
}

impl Fan {
    pub fn anchor_edge(&self) -> EdgeId {
        self.members[self.anchor_pos]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// The triangulation plus (after [`compute_anchors_and_fans`]) its fans,
/// anchors and canonical paths. Immutable once built; safe to read from any
/// number of threads.
#[derive(Clone, Debug)]
pub struct TdGraph {
    points: Vec<Point>,
    edges: Vec<DirectedEdge>,
    out: Vec<[Option<EdgeId>; 3]>,
    /// Sorted by normalized endpoint pair, for binary-search lookups.
    undirected: Vec<((PointId, PointId), EdgeId)>,
    fans: Vec<Fan>,
    cone_fan: Vec<[Option<usize>; 3]>,
    edge_fan: Vec<(usize, usize)>,
    anchors_ready: bool,
}

impl TdGraph {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, id: PointId) -> Point {
        self.points[id]
    }

    pub fn edges(&self) -> &[DirectedEdge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> DirectedEdge {
        self.edges[id]
    }

    /// The unique outgoing edge of `p` in its positive cone of `color`.
    pub fn out_edge(&self, p: PointId, color: Color) -> Option<EdgeId> {
        self.out[p][color.index()]
    }

    pub fn undirected_edge(&self, a: PointId, b: PointId) -> Option<EdgeId> {
        let key = norm_pair(a, b);
        self.undirected
            .binary_search_by_key(&key, |&(pair, _)| pair)
            .ok()
            .map(|i| self.undirected[i].1)
    }

    pub fn has_edge(&self, a: PointId, b: PointId) -> bool {
        self.undirected_edge(a, b).is_some()
    }

    pub fn anchors_ready(&self) -> bool {
        self.anchors_ready
    }

    pub fn fans(&self) -> &[Fan] {
        &self.fans
    }

    /// The fan of the negative cone of `color` at `p`, if any edge comes in
    /// there.
    pub fn fan_at(&self, p: PointId, color: Color) -> Option<&Fan> {
        self.cone_fan[p][color.index()].map(|i| &self.fans[i])
    }

    /// Fan index and member position of an edge (every edge is in exactly
    /// one fan once anchors are computed).
    pub fn edge_fan(&self, e: EdgeId) -> (usize, usize) {
        self.edge_fan[e]
    }

    /// The anchor of the fan that `e` belongs to (possibly `e` itself).
    pub fn anchor_of_edge(&self, e: EdgeId) -> EdgeId {
        let (fan, _) = self.edge_fan[e];
        self.fans[fan].anchor_edge()
    }

    pub fn is_anchor(&self, e: EdgeId) -> bool {
        self.anchor_of_edge(e) == e
    }

    /// First or last member of its fan.
    pub fn is_boundary_edge(&self, e: EdgeId) -> bool {
        let (fan, pos) = self.edge_fan[e];
        pos == 0 || pos + 1 == self.fans[fan].len()
    }

    pub fn is_canonical_link(&self, e: EdgeId) -> bool {
        self.canonical_apexes(e).next().is_some()
    }

    /// Apexes for which `e` is a canonical edge (at most one per side).
    pub fn canonical_apexes(&self, e: EdgeId) -> impl Iterator<Item = PointId> + '_ {
        self.fans
            .iter()
            .filter(move |f| f.links.contains(&e))
            .map(|f| f.apex)
    }
}

fn finish(points: Vec<Point>, mut raw: Vec<DirectedEdge>) -> TdGraph {
    raw.sort_by_key(|e| (e.tail, e.color.index()));
    let n = points.len();
    let mut out = vec![[None; 3]; n];
    let mut undirected = Vec::with_capacity(raw.len());
    for (id, e) in raw.iter().enumerate() {
        debug_assert!(out[e.tail][e.color.index()].is_none());
        out[e.tail][e.color.index()] = Some(id);
        undirected.push((e.pair(), id));
    }
    undirected.sort_unstable_by_key(|&(pair, _)| pair);
    // Both orientations of one segment cannot coexist: the cone partition
    // at the shared endpoints forbids it.
    debug_assert!(undirected.windows(2).all(|w| w[0].0 != w[1].0));
    TdGraph {
        points,
        edges: raw,
        out,
        undirected,
        fans: Vec::new(),
        cone_fan: vec![[None; 3]; n],
        edge_fan: Vec::new(),
        anchors_ready: false,
    }
}

/// Definition-level quadratic construction: for every point and every
/// positive cone containing at least one other point, one edge to the
/// triangular-distance minimizer.
pub fn build_naive(points: &[Point]) -> Result<TdGraph, TdError> {
    let n = points.len();
    let forms: Vec<[f64; 3]> = points.iter().map(|p| cone_forms(*p)).collect();
    let mut raw = Vec::new();
    for w in 0..n {
        let mut best: [Option<(f64, PointId)>; 3] = [None; 3];
        for v in 0..n {
            if v == w {
                continue;
            }
            let cone = cone_of(points[w], points[v])?;
            if !cone.is_positive() {
                continue;
            }
            let key = (family_key(cone.color, &forms[v]), v);
            let slot = &mut best[cone.color.index()];
            if slot.is_none_or(|cur| key < cur) {
                *slot = Some(key);
            }
        }
        for (ci, slot) in best.iter().enumerate() {
            if let Some((_, v)) = slot {
                raw.push(DirectedEdge { tail: w, head: *v, color: Color::ALL[ci] });
            }
        }
    }
    Ok(finish(points.to_vec(), raw))
}

/// Ascending sweep for one positive cone family. Points are processed in
/// sweep-key order; the frontier holds points whose cone has not been hit
/// yet, and is an antichain under the `(f, g)` dominance that defines cone
/// membership, so the points dominated by the current one form a contiguous
/// run next to its `f` value.
fn family_sweep(
    points: &[Point],
    forms: &[[f64; 3]],
    color: Color,
    raw: &mut Vec<DirectedEdge>,
) {
    let n = points.len();
    let f: Vec<f64> = forms.iter().map(|fo| family_f(color, fo)).collect();
    let g: Vec<f64> = forms.iter().map(|fo| family_g(color, fo)).collect();
    let mut order: Vec<PointId> = (0..n).collect();
    order.sort_by(|&a, &b| family_key(color, &forms[a])
        .total_cmp(&family_key(color, &forms[b]))
        .then(a.cmp(&b)));

    let mut frontier: BTreeSet<(OrdF64, PointId)> = BTreeSet::new();
    for &v in &order {
        loop {
            let candidate = frontier
                .range(..(OrdF64(f[v]), 0))
                .next_back()
                .copied();
            match candidate {
                Some((fw, w)) if g[w] < g[v] => {
                    frontier.remove(&(fw, w));
                    raw.push(DirectedEdge { tail: w, head: v, color });
                }
                _ => break,
            }
        }
        frontier.insert((OrdF64(f[v]), v));
    }
}

/// Sweep construction; same edge set as [`build_naive`], `O(n log n)`.
pub fn build_sweep(points: &[Point]) -> Result<TdGraph, TdError> {
    let forms: Vec<[f64; 3]> = points.iter().map(|p| cone_forms(*p)).collect();
    let mut raw = Vec::new();
    for color in Color::ALL {
        family_sweep(points, &forms, color, &mut raw);
    }
    Ok(finish(points.to_vec(), raw))
}

/// Derives, for every (point, negative cone) with incoming edges: the
/// counterclockwise fan, its anchor (the triangular-distance minimizer), and
/// the canonical path joining consecutive tails.
pub fn compute_anchors_and_fans(g: TdGraph) -> Result<TdGraph, TdError> {
    let mut g = g;
    let n = g.points.len();
    let m = g.edges.len();
    let forms: Vec<[f64; 3]> = g.points.iter().map(|p| cone_forms(*p)).collect();

    // bucket incoming edges by (head, color) with one counting pass
    let slot = |e: &DirectedEdge| e.head * 3 + e.color.index();
    let mut start = vec![0usize; 3 * n + 1];
    for e in &g.edges {
        start[slot(e) + 1] += 1;
    }
    for i in 0..3 * n {
        start[i + 1] += start[i];
    }
    let mut bucket = vec![0 as EdgeId; m];
    let mut cursor = start.clone();
    for (id, e) in g.edges.iter().enumerate() {
        bucket[cursor[slot(e)]] = id;
        cursor[slot(e)] += 1;
    }

    // the triangulation edge joining a and b, found through the out tables
    let find_link = |a: PointId, b: PointId| -> Option<EdgeId> {
        let hit = |from: PointId, to: PointId| {
            g.out[from]
                .iter()
                .flatten()
                .copied()
                .find(|&eid| g.edges[eid].head == to)
        };
        hit(a, b).or_else(|| hit(b, a))
    };

    let mut fans = Vec::new();
    let mut cone_fan = vec![[None; 3]; n];
    let mut edge_fan = vec![(usize::MAX, usize::MAX); m];

    for w in 0..n {
        for color in Color::ALL {
            let idx = w * 3 + color.index();
            let mut members = bucket[start[idx]..start[idx + 1]].to_vec();
            if members.is_empty() {
                continue;
            }
            let apex = g.points[w];
            members.sort_by(|&a, &b| {
                let (ta, tb) = (g.edges[a].tail, g.edges[b].tail);
                let o = orientation(apex, g.points[ta], g.points[tb]);
                debug_assert!(o != 0, "fan members collinear with apex");
                o.cmp(&0).reverse().then(ta.cmp(&tb))
            });
            let tails: Vec<PointId> = members.iter().map(|&e| g.edges[e].tail).collect();

            // anchor: minimum triangular distance = maximum sweep key
            let mut anchor_pos = 0;
            for (pos, &t) in tails.iter().enumerate() {
                let better = (
                    OrdF64(family_key(color, &forms[t])),
                    core::cmp::Reverse(t),
                ) > (
                    OrdF64(family_key(color, &forms[tails[anchor_pos]])),
                    core::cmp::Reverse(tails[anchor_pos]),
                );
                if better {
                    anchor_pos = pos;
                }
            }

            let mut links = Vec::with_capacity(tails.len().saturating_sub(1));
            for pair in tails.windows(2) {
                match find_link(pair[0], pair[1]) {
                    Some(eid) => links.push(eid),
                    None => {
                        return Err(TdError::BrokenTriangulation {
                            apex: w,
                            a: pair[0],
                            b: pair[1],
                        })
                    }
                }
            }

            let fan_idx = fans.len();
            for (pos, &eid) in members.iter().enumerate() {
                edge_fan[eid] = (fan_idx, pos);
            }
            cone_fan[w][color.index()] = Some(fan_idx);
            fans.push(Fan { apex: w, color, members, tails, anchor_pos, links });
        }
    }

    g.fans = fans;
    g.cone_fan = cone_fan;
    g.edge_fan = edge_fan;
    g.anchors_ready = true;
    Ok(g)
}

/// Contiguous stretch of the canonical path of `(w, cone)` between `r` and
/// `s`, inclusive, ordered from `r` to `s`.
pub fn canonical_subpath(
    g: &TdGraph,
    w: PointId,
    cone: ConeId,
    r: PointId,
    s: PointId,
) -> Result<Vec<PointId>, TdError> {
    if !g.anchors_ready {
        return Err(TdError::AnchorsNotComputed);
    }
    let fan = g.fan_at(w, cone.color).ok_or(TdError::NotOnPath(r))?;
    let pos_r = fan.tails.iter().position(|&t| t == r).ok_or(TdError::NotOnPath(r))?;
    let pos_s = fan.tails.iter().position(|&t| t == s).ok_or(TdError::NotOnPath(s))?;
    let seq: Vec<PointId> = if pos_r <= pos_s {
        fan.tails[pos_r..=pos_s].to_vec()
    } else {
        fan.tails[pos_s..=pos_r].iter().rev().copied().collect()
    };
    Ok(seq)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CanonicalEdgeCheck {
    /// `(s, w)` or `(t, w)` missing from the triangulation.
    FanEdgeMissing,
    /// `(s, w)` is a canonical edge of a point on the side containing `t`.
    CanonicalOnForbiddenSide,
    /// `(t, w)` is an anchor.
    HeadFanEdgeIsAnchor,
    /// `(s, t)` is not a boundary edge of its own fan.
    NotBoundaryOfOwnFan,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CanonicalEdgeViolation {
    pub apex: PointId,
    pub s: PointId,
    pub t: PointId,
    pub check: CanonicalEdgeCheck,
}

/// Audits the four structural facts about every canonical edge `(s, t)` of
/// every point `w`: both fan edges exist, `(s, w)` is not canonical on the
/// side containing `t`, `(t, w)` is not an anchor, and `(s, t)` is a
/// boundary edge of its own fan. Violations are returned as data; an empty
/// list is the expected outcome.
pub fn canonical_edge_audit(g: &TdGraph) -> Vec<CanonicalEdgeViolation> {
    let mut violations = Vec::new();
    if !g.anchors_ready {
        return violations;
    }

    // which points each triangulation edge is a canonical edge of
    let mut canonical_for: BTreeMap<(PointId, PointId), Vec<PointId>> = BTreeMap::new();
    for fan in &g.fans {
        for &link in &fan.links {
            canonical_for.entry(g.edges[link].pair()).or_default().push(fan.apex);
        }
    }

    for fan in &g.fans {
        let w = fan.apex;
        for &link in &fan.links {
            let e = g.edges[link];
            let (s, t) = (e.tail, e.head);
            let mut flag = |check| violations.push(CanonicalEdgeViolation { apex: w, s, t, check });

            if !g.has_edge(s, w) || !g.has_edge(t, w) {
                flag(CanonicalEdgeCheck::FanEdgeMissing);
                continue;
            }

            let side_of_t = orientation(g.points[s], g.points[w], g.points[t]);
            if let Some(apexes) = canonical_for.get(&norm_pair(s, w)) {
                for &x in apexes {
                    let side_of_x = orientation(g.points[s], g.points[w], g.points[x]);
                    if side_of_t != 0 && side_of_x == side_of_t {
                        flag(CanonicalEdgeCheck::CanonicalOnForbiddenSide);
                    }
                }
            }

            if let Some(tw) = g.undirected_edge(t, w) {
                if g.edges[tw].tail == t && g.is_anchor(tw) {
                    flag(CanonicalEdgeCheck::HeadFanEdgeIsAnchor);
                }
            }

            if !g.is_boundary_edge(link) {
                flag(CanonicalEdgeCheck::NotBoundaryOfOwnFan);
            }
        }
    }
    violations
}

/// A path through triangulation edges with its per-edge colors. Monotone
/// paths are bi-colored and their consecutive edges never lie in neighboring
/// cones of the shared endpoint; `verify::audit_monotone_path` checks this.
#[derive(Clone, Debug)]
pub struct MonotonePath {
    pub points: Vec<PointId>,
    /// Color of the edge joining `points[i]` and `points[i + 1]`.
    pub colors: Vec<Color>,
}

/// Builds the diagnostic monotone path between `p` and `q` by the
/// pair-advancing rule: whichever of the current pair sees the other in a
/// positive cone advances along its unique outgoing edge in that cone, until
/// the pair coincides. The two branches are concatenated.
///
/// Unlike general canonical paths, the result stays inside the smallest
/// homothet of `(p, q)`.
pub fn extract_monotone_path(
    g: &TdGraph,
    p: PointId,
    q: PointId,
) -> Result<MonotonePath, TdError> {
    let mut left = vec![p];
    let mut right = vec![q];
    let (mut a, mut b) = (p, q);
    let guard = 2 * g.n() + 2;

    for _ in 0..guard {
        if a == b {
            let mut points = left;
            points.extend(right.iter().rev().skip(1));
            let mut colors = Vec::with_capacity(points.len().saturating_sub(1));
            for pair in points.windows(2) {
                let eid = g
                    .undirected_edge(pair[0], pair[1])
                    .expect("branch steps follow triangulation edges");
                colors.push(g.edges[eid].color);
            }
            return Ok(MonotonePath { points, colors });
        }
        let cone = cone_of(g.points[a], g.points[b])?;
        if cone.is_positive() {
            let eid = g.out_edge(a, cone.color).expect("cone holding b is nonempty");
            a = g.edges[eid].head;
            left.push(a);
        } else {
            let eid = g.out_edge(b, cone.color).expect("cone holding a is nonempty");
            b = g.edges[eid].head;
            right.push(b);
        }
    }
    Err(TdError::NonTermination { p, q })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{ensure_general_position, tri_dist, SQRT_3};
    use proptest::prelude::*;
    use std::collections::BTreeSet as StdBTreeSet;

    fn pts(coords: &[(f64, f64)]) -> Vec<Point> {
        coords
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| Point::new(i, x, y))
            .collect()
    }

    /// The worked 3-point instance: p=(0,0), q=(0,2), r=(2,0.5).
    fn three_points() -> Vec<Point> {
        pts(&[(0.0, 0.0), (0.0, 2.0), (2.0, 0.5)])
    }

    fn edge_set(g: &TdGraph) -> StdBTreeSet<(usize, usize, Color)> {
        g.edges().iter().map(|e| (e.tail, e.head, e.color)).collect()
    }

    #[test]
    fn single_point_is_empty() {
        let g = build_naive(&pts(&[(0.3, 0.4)])).unwrap();
        assert!(g.edges().is_empty());
    }

    #[test]
    fn three_point_example_edges() {
        let g = build_naive(&three_points()).unwrap();
        let expect: StdBTreeSet<_> = [
            (0, 1, Color::Red),
            (1, 2, Color::Green),
            (2, 0, Color::Blue),
        ]
        .into_iter()
        .collect();
        assert_eq!(edge_set(&g), expect);
        let s = build_sweep(&three_points()).unwrap();
        assert_eq!(edge_set(&s), expect);
    }

    #[test]
    fn ascending_red_chain() {
        // near-vertical ascending points: each links red to its successor
        let p = pts(&[(0.0, 0.0), (0.01, 1.0), (0.02, 2.0), (0.03, 3.0)]);
        let g = build_naive(&p).unwrap();
        for i in 0..3 {
            let e = g.edge(g.out_edge(i, Color::Red).unwrap());
            assert_eq!((e.tail, e.head), (i, i + 1));
        }
        assert_eq!(g.edges().len(), 3);
    }

    #[test]
    fn three_point_anchors_are_self() {
        let g = compute_anchors_and_fans(build_sweep(&three_points()).unwrap()).unwrap();
        assert_eq!(g.fans().len(), 3);
        for fan in g.fans() {
            assert_eq!(fan.len(), 1);
            assert_eq!(fan.anchor_pos, 0);
            assert!(fan.links.is_empty());
        }
        assert!(canonical_edge_audit(&g).is_empty());
    }

    #[test]
    fn fan_order_and_anchor_in_wide_fan() {
        // five points below an apex, horizontally spread so none falls in a
        // red cone of another; all link red to the apex
        let mut coords = vec![(0.0, 0.0)];
        coords.extend([
            (-0.9, -2.05),
            (-0.45, -1.95),
            (0.02, -2.12),
            (0.5, -1.9),
            (0.93, -2.02),
        ]);
        let (p, _) = ensure_general_position(&pts(&coords)).unwrap();
        let g = compute_anchors_and_fans(build_sweep(&p).unwrap()).unwrap();
        let fan = g.fan_at(0, Color::Red).expect("red fan at apex");
        assert_eq!(fan.len(), 5);
        // counterclockwise by direction angle
        let angle = |t: PointId| {
            let d = (p[t].y - p[0].y).atan2(p[t].x - p[0].x);
            d.rem_euclid(2.0 * std::f64::consts::PI)
        };
        for w in fan.tails.windows(2) {
            assert!(angle(w[0]) < angle(w[1]));
        }
        // anchor minimizes the triangular distance
        let anchor_tail = fan.tails[fan.anchor_pos];
        for &t in &fan.tails {
            assert!(tri_dist(p[t], p[0]) >= tri_dist(p[anchor_tail], p[0]) - 1e-12);
        }
        // canonical path endpoints via subpath
        let cone = ConeId::negative(Color::Red);
        let full = canonical_subpath(&g, 0, cone, fan.tails[0], fan.tails[4]).unwrap();
        assert_eq!(full, fan.tails);
        let single = canonical_subpath(&g, 0, cone, fan.tails[2], fan.tails[2]).unwrap();
        assert_eq!(single, vec![fan.tails[2]]);
        let rev = canonical_subpath(&g, 0, cone, fan.tails[4], fan.tails[0]).unwrap();
        let mut expect = fan.tails.clone();
        expect.reverse();
        assert_eq!(rev, expect);
        assert!(matches!(
            canonical_subpath(&g, 0, cone, 0, fan.tails[1]),
            Err(TdError::NotOnPath(0))
        ));
        assert!(canonical_edge_audit(&g).is_empty());
    }

    #[test]
    fn monotone_path_single_edge() {
        let g = compute_anchors_and_fans(build_sweep(&three_points()).unwrap()).unwrap();
        let path = extract_monotone_path(&g, 0, 2).unwrap();
        assert_eq!(path.points, vec![0, 2]);
        assert_eq!(path.colors, vec![Color::Blue]);
    }

    #[test]
    fn monotone_path_respects_homothet() {
        let coords = vec![
            (0.02, 0.01),
            (1.3, 0.42),
            (2.1, 1.9),
            (0.7, 1.1),
            (1.8, 0.2),
            (2.9, 0.9),
        ];
        let (p, _) = ensure_general_position(&pts(&coords)).unwrap();
        let g = compute_anchors_and_fans(build_sweep(&p).unwrap()).unwrap();
        for a in 0..p.len() {
            for b in 0..p.len() {
                if a == b {
                    continue;
                }
                let path = extract_monotone_path(&g, a, b).unwrap();
                assert_eq!(path.points.first(), Some(&a));
                assert_eq!(path.points.last(), Some(&b));
                let audit = crate::verify::audit_monotone_path(&g, &path);
                assert!(audit.ok(), "{a}->{b}: {audit:?}");
            }
        }
    }

    #[test]
    fn sector_signs_match_atan2() {
        // the sign-triple classifier agrees with direct angle arithmetic
        let apex = Point::new(0, 0.2, -0.1);
        for k in 0..360 {
            let ang = (k as f64 + 0.5) * std::f64::consts::PI / 180.0;
            let target = Point::new(1, apex.x + ang.cos(), apex.y + ang.sin());
            let cone = cone_of(apex, target).unwrap();
            let deg = (k as f64 + 0.5) as u32;
            let expect = (deg / 60) as u8;
            assert_eq!(cone.sector(), expect % 6, "angle {deg}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn sweep_equals_naive(
            xs in proptest::collection::vec((0.0..1.0f64, 0.0..1.0f64), 1..48)
        ) {
            let raw = pts(&xs);
            let (p, _) = match ensure_general_position(&raw) {
                Ok(v) => v,
                Err(_) => return Ok(()), // duplicates from the generator
            };
            let a = build_naive(&p).unwrap();
            let b = build_sweep(&p).unwrap();
            prop_assert_eq!(edge_set(&a), edge_set(&b));
        }

        #[test]
        fn triangulation_support_is_plane(
            xs in proptest::collection::vec((0.0..1.0f64, 0.0..1.0f64), 4..40)
        ) {
            let raw = pts(&xs);
            let (p, _) = match ensure_general_position(&raw) {
                Ok(v) => v,
                Err(_) => return Ok(()),
            };
            let g = build_sweep(&p).unwrap();
            let edges: Vec<(usize, usize)> = g.edges().iter().map(|e| e.pair()).collect();
            let verdict = crate::verify::check_planarity(&edges, &p);
            prop_assert!(verdict.is_plane, "crossing {:?}", verdict.witness);
        }

        #[test]
        fn minimal_homothet_of_each_edge_is_empty(
            xs in proptest::collection::vec((0.0..1.0f64, 0.0..1.0f64), 4..32)
        ) {
            let raw = pts(&xs);
            let (p, _) = match ensure_general_position(&raw) {
                Ok(v) => v,
                Err(_) => return Ok(()),
            };
            let g = build_sweep(&p).unwrap();
            for e in g.edges() {
                let h = crate::geom::smallest_homothet(p[e.tail], p[e.head]).unwrap();
                for other in &p {
                    if other.id == e.tail || other.id == e.head {
                        continue;
                    }
                    // strictly interior points would contradict minimality
                    prop_assert!(
                        !h.contains(other.x, other.y, -1e-9),
                        "point {} strictly inside the homothet of ({}, {})",
                        other.id, e.tail, e.head
                    );
                }
            }
        }
    }

    #[test]
    fn collinear_direction_is_degenerate_for_naive() {
        // two points exactly aligned at 60 degrees: naive must refuse
        let p = pts(&[(0.0, 0.0), (1.0, SQRT_3), (0.3, 2.4)]);
        let err = build_naive(&p).unwrap_err();
        assert!(matches!(err, TdError::Geometry(GeomError::DegenerateDirection { .. })));
    }
}
