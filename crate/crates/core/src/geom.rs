//! Cone classification, the triangular metric and its derived delta
//! quantities, robust planar predicates, and general-position enforcement.
//!
//! The plane around every point is split into six 60-degree cones, numbered
//! by sector `k` spanning direction angles `[60k, 60(k+1))` degrees measured
//! counterclockwise from the positive x-axis:
//!
//! ```text
//!   k = 0  blue  negative        k = 3  blue  positive
//!   k = 1  red   positive        k = 4  red   negative
//!   k = 2  green negative        k = 5  green positive
//! ```
//!
//! The triangular metric `tri_dist(p, q)` is the side length of the smallest
//! downward equilateral triangle (a "homothet") with both points on its
//! boundary. Its vertices are labelled green (upper left), blue (upper
//! right) and red (bottom).
//!
//! All sign decisions reduce to comparisons of three per-point linear forms
//! (see [`cone_forms`]), so every algorithm in this crate makes literally the
//! same floating-point decisions about the same pair of points.

use alloc::vec::Vec;
use thiserror::Error;

use crate::util::hypot;

pub const SQRT_3: f64 = 1.732050807568877293527446341505872367_f64;

/// Directions closer than this (in radians) to a cone boundary are treated
/// as degenerate; `ensure_general_position` guarantees a larger margin.
pub const DIRECTION_TOLERANCE: f64 = 1e-12;

/// Margin enforced by `ensure_general_position`, with headroom over
/// `DIRECTION_TOLERANCE` so downstream predicates never see a borderline
/// direction.
const ENFORCED_MARGIN: f64 = 4e-12;

/// Rotation schedule step, an irrational-flavored angle in radians.
fn rotation_step() -> f64 {
    1e-3 * (libm::sqrt(5.0) - 1.0)
}

const MAX_ROTATION_STEPS: u32 = 64;

/// An indexed input point. Ids are expected to be unique and contiguous
/// `0..n`; coordinates must be finite and desk-scale (|x|, |y| <= 1e6 is the
/// documented assumption for the floating-point error analysis).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub id: usize,
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(id: usize, x: f64, y: f64) -> Self {
        Point { id, x, y }
    }
}

/// A bare coordinate pair (homothet vertices are not input points).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coord {
    pub x: f64,
    pub y: f64,
}

impl Coord {
    pub fn dist(self, other: Coord) -> f64 {
        hypot(self.x - other.x, self.y - other.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Red,
    Green,
    Blue,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::Red, Color::Green, Color::Blue];

    pub fn index(self) -> usize {
        match self {
            Color::Red => 0,
            Color::Green => 1,
            Color::Blue => 2,
        }
    }

    pub fn is_white(self) -> bool {
        self != Color::Blue
    }

    /// Next homothet vertex color in clockwise order (green, blue, red).
    pub fn clockwise_next(self) -> Color {
        match self {
            Color::Green => Color::Blue,
            Color::Blue => Color::Red,
            Color::Red => Color::Green,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Color::Red => "red",
            Color::Green => "green",
            Color::Blue => "blue",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConeSign {
    Positive,
    Negative,
}

/// One of the six cones at a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ConeId {
    pub color: Color,
    pub sign: ConeSign,
}

impl ConeId {
    pub fn positive(color: Color) -> Self {
        ConeId { color, sign: ConeSign::Positive }
    }

    pub fn negative(color: Color) -> Self {
        ConeId { color, sign: ConeSign::Negative }
    }

    pub fn is_positive(self) -> bool {
        self.sign == ConeSign::Positive
    }

    /// Sector index `k` in `0..6`; sector `k` spans `[60k, 60(k+1))` degrees.
    pub fn sector(self) -> u8 {
        match (self.color, self.sign) {
            (Color::Blue, ConeSign::Negative) => 0,
            (Color::Red, ConeSign::Positive) => 1,
            (Color::Green, ConeSign::Negative) => 2,
            (Color::Blue, ConeSign::Positive) => 3,
            (Color::Red, ConeSign::Negative) => 4,
            (Color::Green, ConeSign::Positive) => 5,
        }
    }

    pub fn from_sector(k: u8) -> Self {
        match k % 6 {
            0 => ConeId::negative(Color::Blue),
            1 => ConeId::positive(Color::Red),
            2 => ConeId::negative(Color::Green),
            3 => ConeId::positive(Color::Blue),
            4 => ConeId::negative(Color::Red),
            _ => ConeId::positive(Color::Green),
        }
    }

    /// The antipodal cone (same color, opposite sign).
    pub fn opposite(self) -> Self {
        ConeId {
            color: self.color,
            sign: match self.sign {
                ConeSign::Positive => ConeSign::Negative,
                ConeSign::Negative => ConeSign::Positive,
            },
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum GeomError {
    /// A pairwise direction lies on (or within `DIRECTION_TOLERANCE` of) a
    /// cone boundary; general-position enforcement was skipped or bypassed.
    #[error("direction from point {apex} to point {target} is degenerate (on a cone boundary)")]
    DegenerateDirection { apex: usize, target: usize },

    #[error("duplicate points {a} and {b}")]
    DuplicatePoints { a: usize, b: usize },

    #[error("point {id} has a non-finite coordinate")]
    NonFiniteCoordinate { id: usize },

    /// The rotation schedule was exhausted without reaching general
    /// position; practically unreachable for valid inputs.
    #[error("general position unreachable after {0} rotation steps")]
    GeneralPositionFailure(u32),

    #[error("delta is undefined at the {0:?} vertex (it is the apex)")]
    UndefinedDelta(Color),
}

// ---------------------------------------------------------------------------
// Robust predicates
// ---------------------------------------------------------------------------

const EPSILON: f64 = f64::EPSILON / 2.0; // 2^-53
const CCW_ERRBOUND_A: f64 = (3.0 + 16.0 * EPSILON) * EPSILON;
const CCW_ERRBOUND_B: f64 = (2.0 + 12.0 * EPSILON) * EPSILON;
const SPLITTER: f64 = 134217729.0; // 2^27 + 1

#[inline]
fn split(a: f64) -> (f64, f64) {
    let c = SPLITTER * a;
    let hi = c - (c - a);
    (hi, a - hi)
}

#[inline]
fn two_product(a: f64, b: f64) -> (f64, f64) {
    let x = a * b;
    let (ahi, alo) = split(a);
    let (bhi, blo) = split(b);
    let err = x - ahi * bhi - alo * bhi - ahi * blo;
    (x, alo * blo - err)
}

#[inline]
fn two_diff(a: f64, b: f64) -> (f64, f64) {
    let x = a - b;
    (x, two_diff_tail(a, b, x))
}

#[inline]
fn two_diff_tail(a: f64, b: f64, x: f64) -> f64 {
    let bvirt = a - x;
    let avirt = x + bvirt;
    let bround = bvirt - b;
    let around = a - avirt;
    around + bround
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let x = a + b;
    let bvirt = x - a;
    let avirt = x - bvirt;
    let bround = b - bvirt;
    let around = a - avirt;
    (x, around + bround)
}

/// Difference of two double-doubles as an exact four-term expansion,
/// components in increasing magnitude order.
#[inline]
fn two_two_diff(a1: f64, a0: f64, b1: f64, b0: f64) -> [f64; 4] {
    let (i0, x0) = two_diff(a0, b0);
    let (i1, i0b) = two_sum(a1, i0);
    let (j0, x1) = two_diff(i0b, b1);
    let (x3, x2) = two_sum(i1, j0);
    [x0, x1, x2, x3]
}

/// Sign of the cross product `(b - a) x (c - a)`.
///
/// Evaluated with an extended-precision stage so the sign is certified
/// whenever the true magnitude exceeds `(2 + 12eps) * eps * detsum` (the
/// Shewchuk B-stage bound), or whenever the coordinate differences are exact
/// (then the expansion itself is exact). Below the bound the result is `0`.
pub fn orientation(a: Point, b: Point, c: Point) -> i8 {
    let detleft = (a.x - c.x) * (b.y - c.y);
    let detright = (a.y - c.y) * (b.x - c.x);
    let det = detleft - detright;

    let detsum = if detleft > 0.0 {
        if detright <= 0.0 {
            return sign_of(det);
        }
        detleft + detright
    } else if detleft < 0.0 {
        if detright >= 0.0 {
            return sign_of(det);
        }
        -detleft - detright
    } else {
        return sign_of(det);
    };

    if det >= CCW_ERRBOUND_A * detsum || -det >= CCW_ERRBOUND_A * detsum {
        return sign_of(det);
    }

    let acx = a.x - c.x;
    let bcx = b.x - c.x;
    let acy = a.y - c.y;
    let bcy = b.y - c.y;

    let (dl, dl_tail) = two_product(acx, bcy);
    let (dr, dr_tail) = two_product(acy, bcx);
    let expansion = two_two_diff(dl, dl_tail, dr, dr_tail);
    let est: f64 = expansion.iter().sum();

    if est >= CCW_ERRBOUND_B * detsum || -est >= CCW_ERRBOUND_B * detsum {
        return sign_of(est);
    }

    let tails_exact = two_diff_tail(a.x, c.x, acx) == 0.0
        && two_diff_tail(a.y, c.y, acy) == 0.0
        && two_diff_tail(b.x, c.x, bcx) == 0.0
        && two_diff_tail(b.y, c.y, bcy) == 0.0;
    if tails_exact {
        // The expansion is the exact determinant; its sign is the sign of the
        // largest-magnitude nonzero component.
        for &component in expansion.iter().rev() {
            if component != 0.0 {
                return sign_of(component);
            }
        }
    }
    0
}

#[inline]
fn sign_of(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// True iff `p` lies on the closed segment `[a, b]` (collinear and between).
pub fn point_on_closed_segment(p: Point, a: Point, b: Point) -> bool {
    if orientation(a, b, p) != 0 {
        return false;
    }
    let lo_x = a.x.min(b.x);
    let hi_x = a.x.max(b.x);
    let lo_y = a.y.min(b.y);
    let hi_y = a.y.max(b.y);
    p.x >= lo_x && p.x <= hi_x && p.y >= lo_y && p.y <= hi_y
}

/// True iff the open segments `(a, b)` and `(c, d)` intersect. Shared
/// endpoints and endpoint-on-interior contacts do not count.
pub fn segments_properly_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = orientation(c, d, a);
    let d2 = orientation(c, d, b);
    let d3 = orientation(a, b, c);
    let d4 = orientation(a, b, d);

    if d1 * d2 < 0 && d3 * d4 < 0 {
        return true;
    }

    if d1 == 0 && d2 == 0 && d3 == 0 && d4 == 0 {
        // Collinear: the open segments intersect iff their 1-D projections
        // onto the dominant axis overlap with positive length.
        let use_x = (b.x - a.x).abs().max((d.x - c.x).abs())
            >= (b.y - a.y).abs().max((d.y - c.y).abs());
        let (p0, p1, q0, q1) = if use_x {
            (a.x, b.x, c.x, d.x)
        } else {
            (a.y, b.y, c.y, d.y)
        };
        let (lo1, hi1) = (p0.min(p1), p0.max(p1));
        let (lo2, hi2) = (q0.min(q1), q0.max(q1));
        return lo1.max(lo2) < hi1.min(hi2);
    }
    false
}

// ---------------------------------------------------------------------------
// Cone classification
// ---------------------------------------------------------------------------

/// The three per-point linear forms from which every cone decision is made.
///
/// `F0 = y`, `F1 = (y - sqrt(3) x) / 2`, `F2 = (y + sqrt(3) x) / 2`; each has
/// a unit gradient and vanishes along one cone-boundary direction (0, 60 and
/// 120 degrees respectively), so `F_i(b) - F_i(a)` equals the distance from
/// `a` to `b` times the sine of the direction's angle to that boundary.
#[inline]
pub(crate) fn cone_forms(p: Point) -> [f64; 3] {
    [p.y, 0.5 * (p.y - SQRT_3 * p.x), 0.5 * (p.y + SQRT_3 * p.x)]
}

/// Sweep-order functional `f` for the positive cone family of `color`:
/// membership of `v` in the cone of `w` is exactly `f(v) > f(w) && g(v) > g(w)`.
#[inline]
pub(crate) fn family_f(color: Color, forms: &[f64; 3]) -> f64 {
    match color {
        Color::Red => forms[1],
        Color::Blue => -forms[0],
        Color::Green => forms[2],
    }
}

#[inline]
pub(crate) fn family_g(color: Color, forms: &[f64; 3]) -> f64 {
    match color {
        Color::Red => forms[2],
        Color::Blue => forms[1],
        Color::Green => -forms[0],
    }
}

/// Processing key for the family sweep: the projection onto the cone
/// bisector, which within a positive cone of `color` is proportional to the
/// triangular distance. Both builders pick minima by this exact value.
#[inline]
pub(crate) fn family_key(color: Color, forms: &[f64; 3]) -> f64 {
    family_f(color, forms) + family_g(color, forms)
}

/// The cone of `apex` whose angular sector contains the direction to
/// `target`.
///
/// Errors with [`GeomError::DegenerateDirection`] when the direction lies
/// within [`DIRECTION_TOLERANCE`] radians of a cone boundary, which signals
/// that general-position enforcement was skipped.
pub fn cone_of(apex: Point, target: Point) -> Result<ConeId, GeomError> {
    let fa = cone_forms(apex);
    let ft = cone_forms(target);
    let d = [ft[0] - fa[0], ft[1] - fa[1], ft[2] - fa[2]];
    let dist = hypot(target.x - apex.x, target.y - apex.y);
    let err = GeomError::DegenerateDirection { apex: apex.id, target: target.id };

    if dist == 0.0
        || d[0].abs() < DIRECTION_TOLERANCE * dist
        || d[1].abs() < DIRECTION_TOLERANCE * dist
        || d[2].abs() < DIRECTION_TOLERANCE * dist
    {
        return Err(err);
    }

    let sector = match (d[0] > 0.0, d[1] > 0.0, d[2] > 0.0) {
        (true, false, true) => 0,
        (true, true, true) => 1,
        (true, true, false) => 2,
        (false, true, false) => 3,
        (false, false, false) => 4,
        (false, false, true) => 5,
        // Impossible in exact arithmetic (d0 = d1 + d2); only float noise at
        // a boundary can produce these, and the margin test above screens it.
        _ => return Err(err),
    };
    Ok(ConeId::from_sector(sector))
}

// ---------------------------------------------------------------------------
// Triangular metric
// ---------------------------------------------------------------------------

// Outward unit normals of the downward equilateral triangle: top,
// lower-right, lower-left. Support of a point p against each side.
#[inline]
fn supports(p: Point) -> [f64; 3] {
    [p.y, 0.5 * (SQRT_3 * p.x - p.y), 0.5 * (-SQRT_3 * p.x - p.y)]
}

/// The triangular distance: the side length of the smallest downward
/// equilateral homothet containing both points on its boundary.
///
/// Computed by the support form `(2/sqrt(3)) * sum_i max(0, <q - p, n_i>)`
/// over the three outward side normals; symmetric, satisfies the metric
/// axioms, and dominates the Euclidean distance.
pub fn tri_dist(p: Point, q: Point) -> f64 {
    let dx = q.x - p.x;
    let dy = q.y - p.y;
    let t0 = dy;
    let t1 = 0.5 * (SQRT_3 * dx - dy);
    let t2 = 0.5 * (-SQRT_3 * dx - dy);
    (2.0 / SQRT_3) * (t0.max(0.0) + t1.max(0.0) + t2.max(0.0))
}

/// The smallest downward equilateral homothet with `p` and `q` on its
/// boundary. Vertex labels run clockwise from the upper left: green, blue,
/// red. The point whose positive cone contains the other sits at the vertex
/// of that cone's color.
#[derive(Clone, Copy, Debug)]
pub struct Homothet {
    pub green: Coord,
    pub blue: Coord,
    pub red: Coord,
    pub side: f64,
}

impl Homothet {
    pub fn vertex(&self, color: Color) -> Coord {
        match color {
            Color::Green => self.green,
            Color::Blue => self.blue,
            Color::Red => self.red,
        }
    }

    /// Closed containment with a tolerance proportional to the side length.
    pub fn contains(&self, x: f64, y: f64, rel_tol: f64) -> bool {
        let p = Point::new(usize::MAX, x, y);
        let s = supports(p);
        let c = self.support_values();
        let slack = rel_tol * self.side.max(1e-300);
        s[0] <= c[0] + slack && s[1] <= c[1] + slack && s[2] <= c[2] + slack
    }

    fn support_values(&self) -> [f64; 3] {
        [
            self.green.y,
            0.5 * (SQRT_3 * self.blue.x - self.blue.y),
            0.5 * (-SQRT_3 * self.green.x - self.green.y),
        ]
    }
}

/// Constructs `Homothet` for the pair, with the apex rule documented on the
/// type. Errors when the direction is degenerate.
pub fn smallest_homothet(p: Point, q: Point) -> Result<Homothet, GeomError> {
    cone_of(p, q)?; // validates the precondition
    let sp = supports(p);
    let sq = supports(q);
    let c_top = sp[0].max(sq[0]);
    let c_lr = sp[1].max(sq[1]);
    let c_ll = sp[2].max(sq[2]);

    let green = Coord { x: -(2.0 * c_ll + c_top) / SQRT_3, y: c_top };
    let blue = Coord { x: (2.0 * c_lr + c_top) / SQRT_3, y: c_top };
    let red = Coord { x: (c_lr - c_ll) / SQRT_3, y: -(c_ll + c_lr) };
    let side = (2.0 / SQRT_3) * (c_top + c_lr + c_ll);
    Ok(Homothet { green, blue, red, side })
}

/// The two non-apex vertex distances of the smallest homothet of a pair.
///
/// `delta_c2` and `delta_c3` are the distances from the non-apex point to
/// the homothet vertices of colors `c2` and `c3`, the two non-apex colors in
/// clockwise vertex order starting from the apex color. Symmetric in the
/// argument pair.
#[derive(Clone, Copy, Debug)]
pub struct DeltaValues {
    pub d_tri: f64,
    pub apex_color: Color,
    pub delta_c2: f64,
    pub delta_c3: f64,
}

impl DeltaValues {
    pub fn c2_color(&self) -> Color {
        self.apex_color.clockwise_next()
    }

    pub fn c3_color(&self) -> Color {
        self.c2_color().clockwise_next()
    }

    pub fn delta_min(&self) -> f64 {
        self.delta_c2.min(self.delta_c3)
    }

    /// Delta at the vertex of the given color; undefined at the apex.
    pub fn delta(&self, color: Color) -> Result<f64, GeomError> {
        if color == self.apex_color {
            Err(GeomError::UndefinedDelta(color))
        } else if color == self.c2_color() {
            Ok(self.delta_c2)
        } else {
            Ok(self.delta_c3)
        }
    }

    pub fn delta_blue(&self) -> Result<f64, GeomError> {
        self.delta(Color::Blue)
    }

    /// `d_tri - delta_blue`, defined for pairs in each other's white cones.
    pub fn delta_white(&self) -> Result<f64, GeomError> {
        Ok(self.d_tri - self.delta_blue()?)
    }
}

/// Delta quantities for a pair with one point in a positive cone of the
/// other (either argument order).
pub fn delta_values(u: Point, v: Point) -> Result<DeltaValues, GeomError> {
    let cone = cone_of(u, v)?;
    let on_side = if cone.is_positive() { v } else { u };
    let h = smallest_homothet(u, v)?;
    let apex_color = cone.color;
    let c2 = apex_color.clockwise_next();
    let c3 = c2.clockwise_next();
    let at = Coord { x: on_side.x, y: on_side.y };
    Ok(DeltaValues {
        d_tri: h.side,
        apex_color,
        delta_c2: h.vertex(c2).dist(at),
        delta_c3: h.vertex(c3).dist(at),
    })
}

// ---------------------------------------------------------------------------
// General position
// ---------------------------------------------------------------------------

/// Rotates all points about the origin; an angle of zero is the identity
/// (bit for bit).
pub fn rotate_points(points: &[Point], angle: f64) -> Vec<Point> {
    if angle == 0.0 {
        return points.to_vec();
    }
    let (sin, cos) = (libm::sin(angle), libm::cos(angle));
    points
        .iter()
        .map(|p| Point::new(p.id, p.x * cos - p.y * sin, p.x * sin + p.y * cos))
        .collect()
}

/// Checks the enforced direction margin: for each of the three boundary
/// forms, adjacent values in sorted order must differ by at least
/// `ENFORCED_MARGIN` times the pair's Euclidean distance. By telescoping
/// (and the triangle inequality) this bounds every pair's direction away
/// from every cone boundary, not just adjacent ones.
fn in_general_position(points: &[Point]) -> bool {
    let n = points.len();
    if n < 2 {
        return true;
    }
    let forms: Vec<[f64; 3]> = points.iter().map(|p| cone_forms(*p)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    for axis in 0..3 {
        order.sort_by(|&a, &b| forms[a][axis].total_cmp(&forms[b][axis]));
        for w in order.windows(2) {
            let (a, b) = (w[0], w[1]);
            let gap = forms[b][axis] - forms[a][axis];
            let dist = hypot(points[b].x - points[a].x, points[b].y - points[a].y);
            if gap < ENFORCED_MARGIN * dist {
                return false;
            }
        }
    }
    true
}

/// Rotates the input about the origin by the smallest angle from the
/// schedule `{0, t, 2t, ...}` (`t` = `1e-3 * (sqrt(5) - 1)` rad) such that
/// no pairwise direction is within `DIRECTION_TOLERANCE` of a multiple of 60
/// degrees. Returns the rotated points and the applied angle.
///
/// Idempotent: a second call on the output applies rotation 0.
pub fn ensure_general_position(points: &[Point]) -> Result<(Vec<Point>, f64), GeomError> {
    for p in points {
        if !p.x.is_finite() || !p.y.is_finite() {
            return Err(GeomError::NonFiniteCoordinate { id: p.id });
        }
    }
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
            return Err(GeomError::DuplicatePoints { a: a.id, b: b.id });
        }
    }

    let step = rotation_step();
    for k in 0..MAX_ROTATION_STEPS {
        let angle = f64::from(k) * step;
        let rotated = rotate_points(points, angle);
        if in_general_position(&rotated) {
            return Ok((rotated, angle));
        }
    }
    Err(GeomError::GeneralPositionFailure(MAX_ROTATION_STEPS))
}
