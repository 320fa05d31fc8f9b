//! Deterministic point-set generators for fuzzing and fixtures.
//!
//! Randomness comes from a hand-rolled splitmix64 stream so that identical
//! specs produce byte-identical point sets on every platform and toolchain.

use alloc::vec::Vec;
use thiserror::Error;

use crate::geom::Point;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    Uniform,
    Convex,
    Grid,
    Clustered,
    /// Two perturbed vertical columns of points on a tall rectangle; convex
    /// position, and adversarial for low-degree spanners.
    LowerBoundRect,
}

impl GenKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GenKind::Uniform => "uniform",
            GenKind::Convex => "convex",
            GenKind::Grid => "grid",
            GenKind::Clustered => "clustered",
            GenKind::LowerBoundRect => "lower_bound_rect",
        }
    }

    pub fn from_str(s: &str) -> Option<Self> {
        Some(match s {
            "uniform" => GenKind::Uniform,
            "convex" => GenKind::Convex,
            "grid" => GenKind::Grid,
            "clustered" => GenKind::Clustered,
            "lower_bound_rect" => GenKind::LowerBoundRect,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenSpec {
    pub kind: GenKind,
    pub n: usize,
    pub seed: u64,
    /// Stretch parameter for `LowerBoundRect` (>= 1); ignored otherwise.
    pub rho: Option<f64>,
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum GenError {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(&'static str),
}

/// splitmix64; public-domain mixing constants.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` with 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    /// Uniform in `(0, 1]`, safe for logarithms.
    fn next_f64_open_left(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / 9007199254740992.0)
    }

    /// Standard normal via Box-Muller.
    fn next_gaussian_pair(&mut self) -> (f64, f64) {
        let r = libm::sqrt(-2.0 * libm::log(self.next_f64_open_left()));
        let theta = core::f64::consts::TAU * self.next_f64();
        (r * libm::cos(theta), r * libm::sin(theta))
    }
}

/// Generates the spec's point sequence; ids are assigned in order.
pub fn generate(spec: &GenSpec) -> Result<Vec<Point>, GenError> {
    match spec.kind {
        GenKind::Uniform => Ok(uniform(spec.n, spec.seed)),
        GenKind::Convex => Ok(convex(spec.n, spec.seed)),
        GenKind::Grid => Ok(grid(spec.n)),
        GenKind::Clustered => Ok(clustered(spec.n, spec.seed)),
        GenKind::LowerBoundRect => {
            let rho = spec.rho.unwrap_or(1.0);
            if !rho.is_finite() || rho < 1.0 {
                return Err(GenError::InvalidSpec("rho must be a finite value >= 1"));
            }
            Ok(lower_bound_rect(rho))
        }
    }
}

fn uniform(n: usize, seed: u64) -> Vec<Point> {
    let mut rng = SplitMix64::new(seed);
    (0..n)
        .map(|i| {
            let x = rng.next_f64();
            let y = rng.next_f64();
            Point::new(i, x, y)
        })
        .collect()
}

/// Points on a unit-diameter circle at jittered but strictly increasing
/// angles; always in strictly convex position.
fn convex(n: usize, seed: u64) -> Vec<Point> {
    let mut rng = SplitMix64::new(seed);
    (0..n)
        .map(|i| {
            let jitter = 0.1 + 0.8 * rng.next_f64();
            let angle = core::f64::consts::TAU * (i as f64 + jitter) / n as f64;
            Point::new(i, 0.5 + 0.5 * libm::cos(angle), 0.5 + 0.5 * libm::sin(angle))
        })
        .collect()
}

/// Exact integer lattice, deliberately degenerate to exercise the rotation
/// fallback. Row-major, `ceil(sqrt(n))` columns.
fn grid(n: usize) -> Vec<Point> {
    let cols = (libm::ceil(libm::sqrt(n as f64)) as usize).max(1);
    (0..n)
        .map(|i| Point::new(i, (i % cols) as f64, (i / cols) as f64))
        .collect()
}

/// Gaussian blobs: `clamp(ceil(n / 64), 1, 16)` centers in the unit square,
/// sigma 0.05.
fn clustered(n: usize, seed: u64) -> Vec<Point> {
    let mut rng = SplitMix64::new(seed);
    let k = n.div_ceil(64).clamp(1, 16);
    let centers: Vec<(f64, f64)> = (0..k)
        .map(|_| (0.2 + 0.6 * rng.next_f64(), 0.2 + 0.6 * rng.next_f64()))
        .collect();
    (0..n)
        .map(|i| {
            let (cx, cy) = centers[i % k];
            let (gx, gy) = rng.next_gaussian_pair();
            Point::new(i, cx + 0.05 * gx, cy + 0.05 * gy)
        })
        .collect()
}

/// Two vertical columns of `N` unit-spaced points on the sides of a tall
/// `b x (N - 1)` rectangle, with `b = floor(rho) + 1` and
/// `N = 3 (ceil(rho) b + 1) + 1`. A quadratic inward offset (coefficient
/// 1e-6) bows each column so the whole set is strictly convex.
fn lower_bound_rect(rho: f64) -> Vec<Point> {
    let b = libm::floor(rho) as i64 + 1;
    let n_side = 3 * (libm::ceil(rho) as i64 * b + 1) + 1;
    let b = b as f64;
    let mid = (n_side - 1) as f64 / 2.0;
    const EPS: f64 = 1e-6;

    let mut out = Vec::with_capacity(2 * n_side as usize);
    for i in 0..n_side {
        let y = i as f64;
        let off = EPS * (y - mid) * (y - mid);
        out.push(Point::new(out.len(), off, y));
    }
    for i in 0..n_side {
        let y = i as f64;
        let off = EPS * (y - mid) * (y - mid);
        out.push(Point::new(out.len(), b - off, y));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::hypot;
    use crate::verify::check_convex_position;

    #[test]
    fn empty_and_determinism() {
        let spec = GenSpec { kind: GenKind::Uniform, n: 0, seed: 7, rho: None };
        assert!(generate(&spec).unwrap().is_empty());

        let spec = GenSpec { kind: GenKind::Uniform, n: 50, seed: 42, rho: None };
        let a = generate(&spec).unwrap();
        let b = generate(&spec).unwrap();
        assert_eq!(a, b);
        let other = generate(&GenSpec { seed: 43, ..spec }).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn grid_is_integral() {
        let spec = GenSpec { kind: GenKind::Grid, n: 9, seed: 0, rho: None };
        let p = generate(&spec).unwrap();
        assert_eq!(p.len(), 9);
        assert!(p.iter().all(|q| q.x.fract() == 0.0 && q.y.fract() == 0.0));
        assert_eq!((p[8].x, p[8].y), (2.0, 2.0));
    }

    #[test]
    fn convex_kinds_pass_hull_test() {
        for n in [3usize, 8, 50] {
            let spec = GenSpec { kind: GenKind::Convex, n, seed: 11, rho: None };
            assert!(check_convex_position(&generate(&spec).unwrap()), "n={n}");
        }
        for rho in [1.0, 2.0, 5.0] {
            let spec = GenSpec { kind: GenKind::LowerBoundRect, n: 0, seed: 0, rho: Some(rho) };
            assert!(check_convex_position(&generate(&spec).unwrap()), "rho={rho}");
        }
    }

    #[test]
    fn lower_bound_rect_dimensions() {
        // rho = 2: b = 3, N = 22, hence 44 points at near-unit spacing
        let spec = GenSpec { kind: GenKind::LowerBoundRect, n: 0, seed: 0, rho: Some(2.0) };
        let p = generate(&spec).unwrap();
        assert_eq!(p.len(), 44);
        for side in [&p[..22], &p[22..]] {
            for w in side.windows(2) {
                let d = hypot(w[1].x - w[0].x, w[1].y - w[0].y);
                assert!((d - 1.0).abs() < 1e-5, "spacing {d}");
            }
        }
        assert!(generate(&GenSpec {
            kind: GenKind::LowerBoundRect,
            n: 0,
            seed: 0,
            rho: Some(0.5)
        })
        .is_err());
    }

    #[test]
    fn clustered_points_stay_deskscale() {
        let spec = GenSpec { kind: GenKind::Clustered, n: 300, seed: 5, rho: None };
        let p = generate(&spec).unwrap();
        assert_eq!(p.len(), 300);
        assert!(p.iter().all(|q| q.x.abs() < 10.0 && q.y.abs() < 10.0));
    }
}
