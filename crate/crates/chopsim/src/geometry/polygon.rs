//! Simple polygons: construction, measures, transforms, and splitting by an
//! infinite line into connected pieces.

use serde::{Deserialize, Serialize};

use super::{GeometryError, Line, Point2, Rect};

/// Vertices closer than this are merged at construction; areas below
/// `AREA_EPS` are rejected as degenerate.
const VERTEX_EPS: f64 = 1e-9;
const AREA_EPS: f64 = 1e-9;

/// Tolerance for classifying a vertex as lying on a cut line, in mm.
const ON_LINE_EPS: f64 = 1e-9;

/// A simple polygon with counter-clockwise orientation and positive area.
///
/// Construction normalizes orientation; callers are responsible for not
/// feeding in self-intersecting boundaries (every producer in this crate
/// yields convex shapes or half-plane pieces of them).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polygon {
    vertices: Vec<Point2>,
}

impl Polygon {
    pub fn new(mut vertices: Vec<Point2>) -> Result<Self, GeometryError> {
        vertices.dedup_by(|a, b| a.distance_to(*b) < VERTEX_EPS);
        if vertices.len() > 1
            && vertices[0].distance_to(*vertices.last().unwrap()) < VERTEX_EPS
        {
            vertices.pop();
        }
        if vertices.len() < 3 {
            return Err(GeometryError::DegeneratePolygon);
        }
        let signed = signed_area(&vertices);
        if signed.abs() < AREA_EPS {
            return Err(GeometryError::DegeneratePolygon);
        }
        if signed < 0.0 {
            vertices.reverse();
        }
        Ok(Self { vertices })
    }

    /// Convex hull of a point cloud (monotone chain, strict turns).
    pub fn convex_hull_of(points: &[Point2]) -> Result<Self, GeometryError> {
        let hull = convex_hull(points);
        Polygon::new(hull)
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices).abs()
    }

    pub fn centroid(&self) -> Point2 {
        // Area-weighted centroid; falls back to the vertex mean only for
        // near-degenerate inputs, which construction already rejects.
        let mut cx = 0.0;
        let mut cy = 0.0;
        let mut a = 0.0;
        let n = self.vertices.len();
        for i in 0..n {
            let p = self.vertices[i];
            let q = self.vertices[(i + 1) % n];
            let cross = p.x * q.y - q.x * p.y;
            cx += (p.x + q.x) * cross;
            cy += (p.y + q.y) * cross;
            a += cross;
        }
        Point2::new(cx / (3.0 * a), cy / (3.0 * a))
    }

    pub fn bbox(&self) -> Rect {
        Rect::from_points(self.vertices.iter().copied()).expect("polygon has vertices")
    }

    /// Even-odd containment; points on the boundary are not guaranteed either
    /// way, consistently with the raster convention.
    pub fn contains(&self, p: Point2) -> bool {
        let mut inside = false;
        let n = self.vertices.len();
        let mut j = n - 1;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[j];
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if p.x < x {
                    inside = !inside;
                }
            }
            j = i;
        }
        inside
    }

    pub fn translate(&self, dx: f64, dy: f64) -> Polygon {
        Polygon {
            vertices: self.vertices.iter().map(|p| p.offset(dx, dy)).collect(),
        }
    }

    pub fn rotate_about(&self, center: Point2, angle: f64) -> Polygon {
        let (sin, cos) = angle.sin_cos();
        Polygon {
            vertices: self
                .vertices
                .iter()
                .map(|p| {
                    let dx = p.x - center.x;
                    let dy = p.y - center.y;
                    Point2::new(center.x + dx * cos - dy * sin, center.y + dx * sin + dy * cos)
                })
                .collect(),
        }
    }

    /// Split by an infinite line into the connected pieces on each side.
    ///
    /// If the line misses the interior the original polygon is returned as
    /// the single piece. Pieces share the exact intersection vertices, so the
    /// piece areas sum to the input area up to floating-point rounding.
    pub fn split(&self, line: &Line) -> Vec<Polygon> {
        let dist: Vec<f64> = self.vertices.iter().map(|&v| line.signed_distance(v)).collect();
        let any_pos = dist.iter().any(|&d| d > ON_LINE_EPS);
        let any_neg = dist.iter().any(|&d| d < -ON_LINE_EPS);
        if !any_pos || !any_neg {
            return vec![self.clone()];
        }
        let mut pieces = clip_connected(&self.vertices, &dist, line, 1.0);
        pieces.extend(clip_connected(&self.vertices, &dist, line, -1.0));
        if pieces.is_empty() {
            // Numerical corner case: fall back to the unsplit polygon rather
            // than losing area.
            return vec![self.clone()];
        }
        pieces
    }

    /// Maximal-distance vertex pair; the ground-truth long axis of a shape.
    pub fn longest_vertex_chord(&self) -> (Point2, Point2) {
        let hull = convex_hull(&self.vertices);
        let candidates = if hull.len() >= 2 { &hull } else { &self.vertices };
        let mut best = (candidates[0], candidates[1]);
        let mut best_d2 = -1.0;
        for i in 0..candidates.len() {
            for j in (i + 1)..candidates.len() {
                let d2 = candidates[i].distance2_to(candidates[j]);
                if d2 > best_d2 {
                    best_d2 = d2;
                    best = (candidates[i], candidates[j]);
                }
            }
        }
        best
    }

    /// Minimum distance to another polygon; 0 when they touch or overlap.
    pub fn distance_to(&self, other: &Polygon) -> f64 {
        if self.intersects(other) {
            return 0.0;
        }
        let mut best = f64::INFINITY;
        for &v in &self.vertices {
            best = best.min(other.distance_to_point(v));
        }
        for &v in &other.vertices {
            best = best.min(self.distance_to_point(v));
        }
        best
    }

    /// Distance from a point to the polygon (0 when inside).
    pub fn distance_to_point(&self, p: Point2) -> f64 {
        if self.contains(p) {
            return 0.0;
        }
        let n = self.vertices.len();
        let mut best = f64::INFINITY;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            best = best.min(point_segment_distance(p, a, b));
        }
        best
    }

    pub fn intersects(&self, other: &Polygon) -> bool {
        if !self.bbox().intersects(&other.bbox()) {
            return false;
        }
        let n = self.vertices.len();
        let m = other.vertices.len();
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            for j in 0..m {
                let c = other.vertices[j];
                let d = other.vertices[(j + 1) % m];
                if segments_intersect(a, b, c, d) {
                    return true;
                }
            }
        }
        self.contains(other.vertices[0]) || other.contains(self.vertices[0])
    }

    /// Overlap with an oriented rectangle via separating-axis test.
    /// Exact for convex polygons, which is all the scene ever holds.
    pub fn intersects_rect(&self, rect: &super::OrientedRect) -> bool {
        let corners = rect.corners();
        let mut axes: Vec<(f64, f64)> = Vec::with_capacity(self.vertices.len() + 2);
        let (sin, cos) = rect.angle.sin_cos();
        axes.push((cos, sin));
        axes.push((-sin, cos));
        let n = self.vertices.len();
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let (ex, ey) = (b.x - a.x, b.y - a.y);
            let len = (ex * ex + ey * ey).sqrt();
            if len > 0.0 {
                axes.push((-ey / len, ex / len));
            }
        }
        for (ax, ay) in axes {
            let project = |pts: &[Point2]| {
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for p in pts {
                    let t = p.x * ax + p.y * ay;
                    lo = lo.min(t);
                    hi = hi.max(t);
                }
                (lo, hi)
            };
            let (alo, ahi) = project(&self.vertices);
            let (blo, bhi) = project(&corners);
            if ahi < blo || bhi < alo {
                return false;
            }
        }
        true
    }
}

pub(crate) fn signed_area(vertices: &[Point2]) -> f64 {
    let n = vertices.len();
    let mut s = 0.0;
    for i in 0..n {
        let p = vertices[i];
        let q = vertices[(i + 1) % n];
        s += p.x * q.y - q.x * p.y;
    }
    s * 0.5
}

pub(crate) fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let abx = b.x - a.x;
    let aby = b.y - a.y;
    let len2 = abx * abx + aby * aby;
    if len2 == 0.0 {
        return p.distance_to(a);
    }
    let t = (((p.x - a.x) * abx + (p.y - a.y) * aby) / len2).clamp(0.0, 1.0);
    p.distance_to(Point2::new(a.x + t * abx, a.y + t * aby))
}

fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

fn segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |p: Point2, q: Point2, r: Point2| {
        orient(p, q, r) == 0.0
            && r.x >= p.x.min(q.x)
            && r.x <= p.x.max(q.x)
            && r.y >= p.y.min(q.y)
            && r.y <= p.y.max(q.y)
    };
    on(c, d, a) || on(c, d, b) || on(a, b, c) || on(a, b, d)
}

/// Monotone-chain convex hull with strict turns; collinear interior points
/// are dropped, so every hull vertex is an extreme point.
pub(crate) fn convex_hull(points: &[Point2]) -> Vec<Point2> {
    let mut pts: Vec<Point2> = points.to_vec();
    pts.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap().then(a.y.partial_cmp(&b.y).unwrap()));
    pts.dedup_by(|a, b| a.x == b.x && a.y == b.y);
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point2> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len
            && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// One half-plane side of a polygon/line split, as connected pieces.
///
/// Boundary arcs on the keep side are stitched along the line: crossing
/// points sorted along the travel direction alternate leave/enter, and
/// pairing k-th exit with k-th entry yields the boundary cycles of each
/// connected component.
fn clip_connected(vertices: &[Point2], dist: &[f64], line: &Line, keep: f64) -> Vec<Polygon> {
    #[derive(Clone, Copy, PartialEq)]
    enum Side {
        In,
        On,
        Out,
    }
    let side_of = |d: f64| {
        let s = keep * d;
        if s > ON_LINE_EPS {
            Side::In
        } else if s < -ON_LINE_EPS {
            Side::Out
        } else {
            Side::On
        }
    };

    let n = vertices.len();
    // Augmented ring: original vertices plus edge/line crossing points.
    let mut ring: Vec<(Point2, Side)> = Vec::with_capacity(n + 4);
    for i in 0..n {
        let j = (i + 1) % n;
        ring.push((vertices[i], side_of(dist[i])));
        let (di, dj) = (dist[i], dist[j]);
        if (di > ON_LINE_EPS && dj < -ON_LINE_EPS) || (di < -ON_LINE_EPS && dj > ON_LINE_EPS) {
            let t = di / (di - dj);
            let p = Point2::new(
                vertices[i].x + t * (vertices[j].x - vertices[i].x),
                vertices[i].y + t * (vertices[j].y - vertices[i].y),
            );
            ring.push((p, Side::On));
        }
    }

    // Rotate so the ring starts strictly outside; then kept runs don't wrap.
    let start = match ring.iter().position(|&(_, s)| s == Side::Out) {
        Some(i) => i,
        None => return vec![],
    };
    ring.rotate_left(start);

    let mut arcs: Vec<Vec<Point2>> = Vec::new();
    let mut current: Option<Vec<Point2>> = None;
    for &(p, s) in &ring {
        match s {
            Side::Out => {
                if let Some(arc) = current.take() {
                    if arc.len() >= 2 {
                        arcs.push(arc);
                    }
                }
            }
            _ => current.get_or_insert_with(Vec::new).push(p),
        }
    }
    if let Some(arc) = current.take() {
        if arc.len() >= 2 {
            arcs.push(arc);
        }
    }
    if arcs.is_empty() {
        return vec![];
    }

    // Travel direction along the line with the keep side on the left.
    let (nx, ny) = line.normal();
    let (vx, vy) = (keep * ny, -keep * nx);
    let param = |p: Point2| p.x * vx + p.y * vy;

    let mut exits: Vec<(f64, usize)> =
        arcs.iter().enumerate().map(|(i, a)| (param(*a.last().unwrap()), i)).collect();
    let mut entries: Vec<(f64, usize)> =
        arcs.iter().enumerate().map(|(i, a)| (param(a[0]), i)).collect();
    exits.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    entries.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));

    let mut successor = vec![usize::MAX; arcs.len()];
    for (x, e) in exits.iter().zip(entries.iter()) {
        successor[x.1] = e.1;
    }

    let mut visited = vec![false; arcs.len()];
    let mut pieces = Vec::new();
    for start in 0..arcs.len() {
        if visited[start] {
            continue;
        }
        let mut cycle: Vec<Point2> = Vec::new();
        let mut i = start;
        loop {
            visited[i] = true;
            cycle.extend_from_slice(&arcs[i]);
            i = successor[i];
            if i == usize::MAX || visited[i] {
                break;
            }
        }
        if let Ok(poly) = Polygon::new(cycle) {
            pieces.push(poly);
        }
    }
    pieces
}
