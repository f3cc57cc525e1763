//! Exact and rasterized 2D geometry in the board frame.
//!
//! All coordinates are millimeters with the origin at the board's lower-left
//! corner. [`Polygon`] is the exact ground-truth representation, [`RasterMask`]
//! the perceptual one; both are pure values, so every operation here is safe
//! to call concurrently.

mod polygon;
mod raster;

pub use polygon::Polygon;
pub use raster::RasterMask;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("polygon is degenerate (fewer than 3 distinct vertices or zero area)")]
    DegeneratePolygon,
    #[error("resolution must be positive, got {0}")]
    NonPositiveResolution(f64),
    #[error("mask has no set cells")]
    EmptyMask,
    #[error("operation requires at least {required} set cells, mask has {actual}")]
    TooFewCells { required: usize, actual: usize },
    #[error("masks are on mismatched grids (origin, resolution, or extent differ)")]
    GridMismatch,
}

/// A point in the board frame, in millimeters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance_to(self, other: Point2) -> f64 {
        self.distance2_to(other).sqrt()
    }

    pub fn distance2_to(self, other: Point2) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn offset(self, dx: f64, dy: f64) -> Point2 {
        Point2::new(self.x + dx, self.y + dy)
    }
}

/// Axis-aligned rectangle, `min` inclusive to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub min: Point2,
    pub max: Point2,
}

impl Rect {
    pub fn new(min: Point2, max: Point2) -> Self {
        Self { min, max }
    }

    pub fn from_points<I: IntoIterator<Item = Point2>>(points: I) -> Option<Self> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let mut r = Rect::new(first, first);
        for p in it {
            r.min.x = r.min.x.min(p.x);
            r.min.y = r.min.y.min(p.y);
            r.max.x = r.max.x.max(p.x);
            r.max.y = r.max.y.max(p.y);
        }
        Some(r)
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn inflate(&self, margin: f64) -> Rect {
        Rect::new(
            Point2::new(self.min.x - margin, self.min.y - margin),
            Point2::new(self.max.x + margin, self.max.y + margin),
        )
    }

    pub fn intersects(&self, other: &Rect) -> bool {
        self.min.x <= other.max.x
            && other.min.x <= self.max.x
            && self.min.y <= other.max.y
            && other.min.y <= self.max.y
    }

    /// Separation between two rectangles (0 when they touch or overlap).
    pub fn gap_to(&self, other: &Rect) -> f64 {
        let dx = (other.min.x - self.max.x).max(self.min.x - other.max.x).max(0.0);
        let dy = (other.min.y - self.max.y).max(self.min.y - other.max.y).max(0.0);
        (dx * dx + dy * dy).sqrt()
    }
}

/// A maximal-distance pair of mask points: the "longest diameter" used to
/// orient cuts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chord {
    pub a: Point2,
    pub b: Point2,
    pub length: f64,
}

impl Chord {
    /// Direction of the chord, normalized to [0, pi).
    pub fn angle(&self) -> f64 {
        normalize_angle_pi((self.b.y - self.a.y).atan2(self.b.x - self.a.x))
    }
}

/// Oriented rectangle (the blade footprint). The blade is symmetric under a
/// half-turn, so `angle` is normalized to [0, pi).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientedRect {
    pub center: Point2,
    pub length: f64,
    pub width: f64,
    pub angle: f64,
}

impl OrientedRect {
    pub fn new(center: Point2, length: f64, width: f64, angle: f64) -> Self {
        assert!(length > 0.0 && width > 0.0, "degenerate oriented rect");
        Self { center, length, width, angle: normalize_angle_pi(angle) }
    }

    /// Boundary-inclusive containment test.
    pub fn contains(&self, p: Point2) -> bool {
        let (sin, cos) = self.angle.sin_cos();
        let dx = p.x - self.center.x;
        let dy = p.y - self.center.y;
        let u = dx * cos + dy * sin;
        let v = -dx * sin + dy * cos;
        u.abs() <= self.length * 0.5 && v.abs() <= self.width * 0.5
    }

    pub fn inflate(&self, margin: f64) -> OrientedRect {
        OrientedRect::new(self.center, self.length + 2.0 * margin, self.width + 2.0 * margin, self.angle)
    }

    pub fn corners(&self) -> [Point2; 4] {
        let (sin, cos) = self.angle.sin_cos();
        let hl = self.length * 0.5;
        let hw = self.width * 0.5;
        let ex = (hl * cos, hl * sin);
        let ey = (-hw * sin, hw * cos);
        [
            Point2::new(self.center.x + ex.0 + ey.0, self.center.y + ex.1 + ey.1),
            Point2::new(self.center.x - ex.0 + ey.0, self.center.y - ex.1 + ey.1),
            Point2::new(self.center.x - ex.0 - ey.0, self.center.y - ex.1 - ey.1),
            Point2::new(self.center.x + ex.0 - ey.0, self.center.y + ex.1 - ey.1),
        ]
    }

    pub fn bbox(&self) -> Rect {
        Rect::from_points(self.corners()).expect("rect has corners")
    }
}

/// Infinite line through `point` at `angle` (the cut line).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub point: Point2,
    pub angle: f64,
}

impl Line {
    pub fn new(point: Point2, angle: f64) -> Self {
        Self { point, angle: normalize_angle_pi(angle) }
    }

    /// Unit normal (left of the direction vector).
    pub fn normal(&self) -> (f64, f64) {
        let (sin, cos) = self.angle.sin_cos();
        (-sin, cos)
    }

    /// Unit direction along the line.
    pub fn direction(&self) -> (f64, f64) {
        let (sin, cos) = self.angle.sin_cos();
        (cos, sin)
    }

    /// Signed distance from `p` to the line (positive on the normal side).
    pub fn signed_distance(&self, p: Point2) -> f64 {
        let (nx, ny) = self.normal();
        (p.x - self.point.x) * nx + (p.y - self.point.y) * ny
    }
}

/// Normalize an angle to [0, pi). Directions and blades are unsigned.
pub fn normalize_angle_pi(angle: f64) -> f64 {
    let mut a = angle % std::f64::consts::PI;
    if a < 0.0 {
        a += std::f64::consts::PI;
    }
    if a >= std::f64::consts::PI {
        a = 0.0;
    }
    a
}

/// Smallest difference between two undirected angles, in [0, pi/2].
pub fn angle_diff_pi(a: f64, b: f64) -> f64 {
    let d = (normalize_angle_pi(a) - normalize_angle_pi(b)).abs();
    d.min(std::f64::consts::PI - d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn angle_normalization() {
        assert!((normalize_angle_pi(PI) - 0.0).abs() < 1e-12);
        assert!((normalize_angle_pi(-PI / 4.0) - 3.0 * PI / 4.0).abs() < 1e-12);
        assert!((normalize_angle_pi(3.0 * PI / 2.0) - PI / 2.0).abs() < 1e-12);
        assert_eq!(normalize_angle_pi(0.0), 0.0);
    }

    #[test]
    fn angle_diff_wraps() {
        assert!((angle_diff_pi(0.1, PI - 0.1) - 0.2).abs() < 1e-12);
        assert!((angle_diff_pi(0.3, 0.3 + PI) - 0.0).abs() < 1e-12);
    }

    #[test]
    fn oriented_rect_contains_is_inclusive() {
        let r = OrientedRect::new(Point2::new(50.0, 50.0), 100.0, 5.0, 0.0);
        assert!(r.contains(Point2::new(50.0, 50.0)));
        assert!(r.contains(Point2::new(100.0, 52.5))); // corner, boundary inclusive
        assert!(!r.contains(Point2::new(50.0, 52.6)));
        assert!(!r.contains(Point2::new(100.1, 50.0)));
    }

    #[test]
    fn oriented_rect_half_turn_symmetry() {
        let a = OrientedRect::new(Point2::new(10.0, 20.0), 40.0, 6.0, 0.7);
        let b = OrientedRect::new(Point2::new(10.0, 20.0), 40.0, 6.0, 0.7 + PI);
        for p in [Point2::new(12.0, 21.0), Point2::new(30.0, 35.0), Point2::new(9.0, 18.5)] {
            assert_eq!(a.contains(p), b.contains(p));
        }
    }

    #[test]
    fn rect_gap() {
        let a = Rect::new(Point2::new(0.0, 0.0), Point2::new(10.0, 10.0));
        let b = Rect::new(Point2::new(13.0, 0.0), Point2::new(20.0, 10.0));
        assert!((a.gap_to(&b) - 3.0).abs() < 1e-12);
        assert_eq!(a.gap_to(&a), 0.0);
    }
}
