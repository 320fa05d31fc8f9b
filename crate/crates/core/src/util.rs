//! Small shared helpers.

use core::cmp::Ordering;

/// Total-order wrapper so finite `f64` keys can live in ordered collections.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct OrdF64(pub f64);

impl Eq for OrdF64 {}

impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

pub(crate) fn hypot(dx: f64, dy: f64) -> f64 {
    // Coordinates are assumed desk-scale (|x|,|y| <= 1e6), so the naive form
    // cannot overflow.
    libm::sqrt(dx * dx + dy * dy)
}
