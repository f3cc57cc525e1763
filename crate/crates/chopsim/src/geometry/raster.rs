//! Binary occupancy grids over the board.
//!
//! Grids are lattice-aligned: the origin is always an integer multiple of the
//! resolution, so masks built independently at the same resolution can be
//! compared cell-for-cell in world coordinates.

use super::polygon::convex_hull;
use super::{Chord, GeometryError, OrientedRect, Point2, Polygon, Rect};

/// Binary occupancy grid. A cell (ix, iy) covers the world square
/// `[origin + ix*res, origin + (ix+1)*res) x [...)`; its sample point is the
/// cell center.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterMask {
    origin: Point2,
    resolution: f64,
    width: usize,
    height: usize,
    words: Vec<u64>,
    count: usize,
}

const WORD_BITS: usize = 64;

impl RasterMask {
    pub fn new_empty(
        origin: Point2,
        resolution: f64,
        width: usize,
        height: usize,
    ) -> Result<Self, GeometryError> {
        if resolution <= 0.0 {
            return Err(GeometryError::NonPositiveResolution(resolution));
        }
        let stride = width.div_ceil(WORD_BITS);
        Ok(Self {
            origin,
            resolution,
            width,
            height,
            words: vec![0; stride * height.max(1)],
            count: 0,
        })
    }

    /// Empty lattice-aligned grid covering `rect` (plus one cell of slack).
    pub fn grid_covering(rect: &Rect, resolution: f64) -> Result<Self, GeometryError> {
        if resolution <= 0.0 {
            return Err(GeometryError::NonPositiveResolution(resolution));
        }
        let ix0 = (rect.min.x / resolution).floor() as i64 - 1;
        let iy0 = (rect.min.y / resolution).floor() as i64 - 1;
        let ix1 = (rect.max.x / resolution).ceil() as i64 + 1;
        let iy1 = (rect.max.y / resolution).ceil() as i64 + 1;
        let origin = Point2::new(ix0 as f64 * resolution, iy0 as f64 * resolution);
        Self::new_empty(origin, resolution, (ix1 - ix0) as usize, (iy1 - iy0) as usize)
    }

    /// Rasterize a polygon on its own tight grid: a cell is set iff its
    /// center lies inside the polygon.
    pub fn from_polygon(poly: &Polygon, resolution: f64) -> Result<Self, GeometryError> {
        let mut mask = Self::grid_covering(&poly.bbox(), resolution)?;
        mask.fill_polygon(poly);
        Ok(mask)
    }

    /// Scanline even-odd fill, clipped to this grid. Cells whose center lies
    /// in a half-open span `[x_enter, x_exit)` are set; the half-open rule
    /// assigns a center sitting exactly on a shared edge to exactly one side.
    pub fn fill_polygon(&mut self, poly: &Polygon) {
        let verts = poly.vertices();
        let n = verts.len();
        let res = self.resolution;
        let bbox = poly.bbox();
        let iy_min = (((bbox.min.y - self.origin.y) / res - 0.5).ceil().max(0.0)) as usize;
        let iy_max_f = (bbox.max.y - self.origin.y) / res - 0.5;
        if iy_max_f < 0.0 {
            return;
        }
        let iy_max = (iy_max_f.floor() as usize).min(self.height.saturating_sub(1));
        let mut crossings: Vec<f64> = Vec::with_capacity(8);
        for iy in iy_min..=iy_max {
            let yc = self.origin.y + (iy as f64 + 0.5) * res;
            crossings.clear();
            for i in 0..n {
                let a = verts[i];
                let b = verts[(i + 1) % n];
                if (a.y > yc) != (b.y > yc) {
                    crossings.push(a.x + (yc - a.y) * (b.x - a.x) / (b.y - a.y));
                }
            }
            crossings.sort_unstable_by(|p, q| p.partial_cmp(q).unwrap());
            let mut k = 0;
            while k + 1 < crossings.len() {
                let x0 = crossings[k];
                let x1 = crossings[k + 1];
                k += 2;
                let ix_start = ((x0 - self.origin.x) / res - 0.5).ceil().max(0.0) as usize;
                let ix_end = ((x1 - self.origin.x) / res - 0.5).ceil().max(0.0) as usize;
                for ix in ix_start..ix_end.min(self.width) {
                    self.set(ix, iy);
                }
            }
        }
    }

    pub fn origin(&self) -> Point2 {
        self.origin
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    fn stride(&self) -> usize {
        self.width.div_ceil(WORD_BITS)
    }

    pub fn get(&self, ix: usize, iy: usize) -> bool {
        if ix >= self.width || iy >= self.height {
            return false;
        }
        let w = self.words[iy * self.stride() + ix / WORD_BITS];
        (w >> (ix % WORD_BITS)) & 1 == 1
    }

    pub fn set(&mut self, ix: usize, iy: usize) {
        assert!(ix < self.width && iy < self.height, "cell out of grid bounds");
        let stride = self.stride();
        let w = &mut self.words[iy * stride + ix / WORD_BITS];
        let bit = 1u64 << (ix % WORD_BITS);
        if *w & bit == 0 {
            *w |= bit;
            self.count += 1;
        }
    }

    /// Number of set cells.
    pub fn set_count(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Occupied area in mm^2.
    pub fn area_mm2(&self) -> f64 {
        self.count as f64 * self.resolution * self.resolution
    }

    pub fn cell_center(&self, ix: usize, iy: usize) -> Point2 {
        Point2::new(
            self.origin.x + (ix as f64 + 0.5) * self.resolution,
            self.origin.y + (iy as f64 + 0.5) * self.resolution,
        )
    }

    /// Grid cell containing a world point, if inside the grid.
    pub fn cell_of(&self, p: Point2) -> Option<(usize, usize)> {
        let fx = (p.x - self.origin.x) / self.resolution;
        let fy = (p.y - self.origin.y) / self.resolution;
        if fx < 0.0 || fy < 0.0 {
            return None;
        }
        let (ix, iy) = (fx.floor() as usize, fy.floor() as usize);
        (ix < self.width && iy < self.height).then_some((ix, iy))
    }

    pub fn iter_set(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let stride = self.stride();
        (0..self.height).flat_map(move |iy| {
            (0..stride).flat_map(move |wi| {
                let mut w = self.words[iy * stride + wi];
                std::iter::from_fn(move || {
                    if w == 0 {
                        return None;
                    }
                    let bit = w.trailing_zeros() as usize;
                    w &= w - 1;
                    let ix = wi * WORD_BITS + bit;
                    Some((ix, iy))
                })
            })
        })
        .filter(move |&(ix, _)| ix < self.width)
    }

    /// Mean of set-cell centers, in world millimeters.
    pub fn centroid(&self) -> Result<Point2, GeometryError> {
        if self.count == 0 {
            return Err(GeometryError::EmptyMask);
        }
        let mut sx = 0.0;
        let mut sy = 0.0;
        for (ix, iy) in self.iter_set() {
            let c = self.cell_center(ix, iy);
            sx += c.x;
            sy += c.y;
        }
        let n = self.count as f64;
        Ok(Point2::new(sx / n, sy / n))
    }

    /// Cell-index bounding box of set cells: (ix0, iy0, ix1, iy1) inclusive.
    pub fn cell_bbox(&self) -> Option<(usize, usize, usize, usize)> {
        if self.count == 0 {
            return None;
        }
        let mut b: Option<(usize, usize, usize, usize)> = None;
        for (ix, iy) in self.iter_set() {
            b = Some(match b {
                None => (ix, iy, ix, iy),
                Some((x0, y0, x1, y1)) => (x0.min(ix), y0.min(iy), x1.max(ix), y1.max(iy)),
            });
        }
        b
    }

    /// World bounding box of occupied cells (cell extents, not centers).
    pub fn bbox_world(&self) -> Option<Rect> {
        let (x0, y0, x1, y1) = self.cell_bbox()?;
        Some(Rect::new(
            Point2::new(
                self.origin.x + x0 as f64 * self.resolution,
                self.origin.y + y0 as f64 * self.resolution,
            ),
            Point2::new(
                self.origin.x + (x1 + 1) as f64 * self.resolution,
                self.origin.y + (y1 + 1) as f64 * self.resolution,
            ),
        ))
    }

    pub fn same_grid(&self, other: &RasterMask) -> bool {
        self.width == other.width
            && self.height == other.height
            && self.resolution == other.resolution
            && (self.origin.x - other.origin.x).abs() < 1e-9
            && (self.origin.y - other.origin.y).abs() < 1e-9
    }

    /// Union of masks sharing one grid. Commutative and associative.
    pub fn union(parts: &[&RasterMask]) -> Result<RasterMask, GeometryError> {
        let first = parts.first().ok_or(GeometryError::EmptyMask)?;
        let mut out = (*first).clone();
        for part in &parts[1..] {
            if !out.same_grid(part) {
                return Err(GeometryError::GridMismatch);
            }
            for (w, p) in out.words.iter_mut().zip(part.words.iter()) {
                *w |= p;
            }
        }
        out.count = out.words.iter().map(|w| w.count_ones() as usize).sum();
        Ok(out)
    }

    pub fn intersection_count(&self, other: &RasterMask) -> usize {
        if self.same_grid(other) {
            return self
                .words
                .iter()
                .zip(other.words.iter())
                .map(|(a, b)| (a & b).count_ones() as usize)
                .sum();
        }
        // Aligned lattices with different extents: translate cell indices.
        assert!(
            (self.resolution - other.resolution).abs() < 1e-12,
            "intersection requires a common resolution"
        );
        let ox = (other.origin.x - self.origin.x) / self.resolution;
        let oy = (other.origin.y - self.origin.y) / self.resolution;
        let (dx, dy) = (ox.round() as i64, oy.round() as i64);
        debug_assert!((ox - dx as f64).abs() < 1e-6 && (oy - dy as f64).abs() < 1e-6);
        let (small, big, sx, sy) = if self.count <= other.count {
            (self, other, -dx, -dy)
        } else {
            (other, self, dx, dy)
        };
        let mut n = 0;
        for (ix, iy) in small.iter_set() {
            let jx = ix as i64 + sx;
            let jy = iy as i64 + sy;
            if jx >= 0 && jy >= 0 && big.get(jx as usize, jy as usize) {
                n += 1;
            }
        }
        n
    }

    /// Intersection-over-union on the common lattice.
    pub fn iou(&self, other: &RasterMask) -> f64 {
        let inter = self.intersection_count(other);
        let union = self.count + other.count - inter;
        if union == 0 {
            return 0.0;
        }
        inter as f64 / union as f64
    }

    /// Set cells with an unset (or out-of-grid) 8-neighbor.
    pub fn boundary_cells(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (ix, iy) in self.iter_set() {
            let mut boundary = false;
            'scan: for dy in -1i64..=1 {
                for dx in -1i64..=1 {
                    if dx == 0 && dy == 0 {
                        continue;
                    }
                    let jx = ix as i64 + dx;
                    let jy = iy as i64 + dy;
                    if jx < 0
                        || jy < 0
                        || jx >= self.width as i64
                        || jy >= self.height as i64
                        || !self.get(jx as usize, jy as usize)
                    {
                        boundary = true;
                        break 'scan;
                    }
                }
            }
            if boundary {
                out.push((ix, iy));
            }
        }
        out
    }

    /// 8-connected components, sorted by descending size with ties broken by
    /// the scan-order-first set cell. Each component lives on this grid.
    pub fn connected_components(&self) -> Vec<RasterMask> {
        let mut visited = vec![false; self.width * self.height];
        let mut comps: Vec<(RasterMask, usize, (usize, usize))> = Vec::new();
        let mut stack = Vec::new();
        for (ix, iy) in self.iter_set() {
            if visited[iy * self.width + ix] {
                continue;
            }
            let mut comp =
                RasterMask::new_empty(self.origin, self.resolution, self.width, self.height)
                    .expect("grid parameters already validated");
            stack.push((ix, iy));
            visited[iy * self.width + ix] = true;
            let mut first = (iy, ix);
            while let Some((cx, cy)) = stack.pop() {
                comp.set(cx, cy);
                if (cy, cx) < first {
                    first = (cy, cx);
                }
                for dy in -1i64..=1 {
                    for dx in -1i64..=1 {
                        if dx == 0 && dy == 0 {
                            continue;
                        }
                        let jx = cx as i64 + dx;
                        let jy = cy as i64 + dy;
                        if jx < 0 || jy < 0 || jx >= self.width as i64 || jy >= self.height as i64
                        {
                            continue;
                        }
                        let (jx, jy) = (jx as usize, jy as usize);
                        if self.get(jx, jy) && !visited[jy * self.width + jx] {
                            visited[jy * self.width + jx] = true;
                            stack.push((jx, jy));
                        }
                    }
                }
            }
            let size = comp.set_count();
            comps.push((comp, size, first));
        }
        comps.sort_by(|a, b| b.1.cmp(&a.1).then(a.2.cmp(&b.2)));
        comps.into_iter().map(|(m, _, _)| m).collect()
    }

    /// Maximal-distance pair of set-cell centers. The maximum over hull
    /// vertices of the boundary cells equals the maximum over all pairs, so
    /// the search is restricted to the hull; ties are broken lexicographically
    /// on (a.x, a.y, b.x, b.y).
    pub fn longest_diameter(&self) -> Result<Chord, GeometryError> {
        if self.count < 2 {
            return Err(GeometryError::TooFewCells { required: 2, actual: self.count });
        }
        let pts: Vec<Point2> = self
            .boundary_cells()
            .into_iter()
            .map(|(ix, iy)| self.cell_center(ix, iy))
            .collect();
        let hull = convex_hull(&pts);
        let candidates: &[Point2] = if hull.len() >= 2 { &hull } else { &pts };
        Ok(diameter_of_points(candidates).expect("at least two candidate points"))
    }

    /// True iff any set-cell center lies inside the rectangle (inclusive).
    pub fn overlaps_rect(&self, rect: &OrientedRect) -> bool {
        if self.count == 0 {
            return false;
        }
        let Some(mask_bbox) = self.bbox_world() else { return false };
        if !mask_bbox.intersects(&rect.bbox()) {
            return false;
        }
        let (sin, cos) = rect.angle.sin_cos();
        let hl = rect.length * 0.5;
        let hw = rect.width * 0.5;
        for (ix, iy) in self.iter_set() {
            let c = self.cell_center(ix, iy);
            let dx = c.x - rect.center.x;
            let dy = c.y - rect.center.y;
            let u = dx * cos + dy * sin;
            if u.abs() > hl {
                continue;
            }
            let v = -dx * sin + dy * cos;
            if v.abs() <= hw {
                return true;
            }
        }
        false
    }

    /// Count of set-cell centers inside the rectangle (inclusive).
    pub fn rect_overlap_cells(&self, rect: &OrientedRect) -> usize {
        if self.count == 0 {
            return 0;
        }
        let Some(mask_bbox) = self.bbox_world() else { return 0 };
        if !mask_bbox.intersects(&rect.bbox()) {
            return 0;
        }
        let (sin, cos) = rect.angle.sin_cos();
        let hl = rect.length * 0.5;
        let hw = rect.width * 0.5;
        let mut n = 0;
        for (ix, iy) in self.iter_set() {
            let c = self.cell_center(ix, iy);
            let dx = c.x - rect.center.x;
            let dy = c.y - rect.center.y;
            let u = dx * cos + dy * sin;
            let v = -dx * sin + dy * cos;
            if u.abs() <= hl && v.abs() <= hw {
                n += 1;
            }
        }
        n
    }

    /// True iff some pair of set-cell centers (one from each mask) lies
    /// within `dist` mm. Boundary cells suffice for disjoint masks.
    pub fn centers_within(&self, other: &RasterMask, dist: f64) -> bool {
        let (Some(a), Some(b)) = (self.bbox_world(), other.bbox_world()) else {
            return false;
        };
        if a.gap_to(&b) > dist {
            return false;
        }
        let d2 = dist * dist;
        let pa = self.boundary_cells();
        let pb = other.boundary_cells();
        for &(ax, ay) in &pa {
            let ca = self.cell_center(ax, ay);
            for &(bx, by) in &pb {
                let cb = other.cell_center(bx, by);
                if ca.distance2_to(cb) <= d2 {
                    return true;
                }
            }
        }
        false
    }
}

/// Lexicographically-tie-broken diameter of a point set.
pub(crate) fn diameter_of_points(points: &[Point2]) -> Option<Chord> {
    if points.len() < 2 {
        return None;
    }
    let key = |a: Point2, b: Point2| -> (Point2, Point2) {
        if (a.x, a.y) <= (b.x, b.y) {
            (a, b)
        } else {
            (b, a)
        }
    };
    let mut best: Option<((Point2, Point2), f64)> = None;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let d2 = points[i].distance2_to(points[j]);
            let pair = key(points[i], points[j]);
            best = Some(match best {
                None => (pair, d2),
                Some((bp, bd2)) => {
                    if d2 > bd2
                        || (d2 == bd2
                            && (pair.0.x, pair.0.y, pair.1.x, pair.1.y)
                                < (bp.0.x, bp.0.y, bp.1.x, bp.1.y))
                    {
                        (pair, d2)
                    } else {
                        (bp, bd2)
                    }
                }
            });
        }
    }
    best.map(|((a, b), d2)| Chord { a, b, length: d2.sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square_poly(x0: f64, y0: f64, w: f64, h: f64) -> Polygon {
        Polygon::new(vec![
            Point2::new(x0, y0),
            Point2::new(x0 + w, y0),
            Point2::new(x0 + w, y0 + h),
            Point2::new(x0, y0 + h),
        ])
        .unwrap()
    }

    #[test]
    fn rasterize_axis_aligned_square_exact() {
        let sq = square_poly(0.0, 0.0, 10.0, 10.0);
        let m = RasterMask::from_polygon(&sq, 1.0).unwrap();
        assert_eq!(m.set_count(), 100);
        let m_half = RasterMask::from_polygon(&sq, 0.5).unwrap();
        assert_eq!(m_half.set_count(), 400);
    }

    #[test]
    fn rasterize_64gon_matches_shoelace_area_within_1pct() {
        let n = 64;
        let r = 40.0;
        let verts: Vec<Point2> = (0..n)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                Point2::new(103.3 + r * t.cos(), 77.7 + r * t.sin())
            })
            .collect();
        let poly = Polygon::new(verts).unwrap();
        let exact = poly.area();
        let m = RasterMask::from_polygon(&poly, 1.0).unwrap();
        let raster_area = m.area_mm2();
        assert!(
            (raster_area - exact).abs() / exact < 0.01,
            "raster {raster_area} vs exact {exact}"
        );
    }

    #[test]
    fn centroid_examples() {
        let mut m = RasterMask::new_empty(Point2::new(0.0, 0.0), 1.0, 10, 10).unwrap();
        m.set(3, 7);
        let c = m.centroid().unwrap();
        assert_eq!((c.x, c.y), (3.5, 7.5));
        m.set(0, 0);
        m.set(2, 0);
        let mut two = RasterMask::new_empty(Point2::new(0.0, 0.0), 1.0, 10, 10).unwrap();
        two.set(0, 0);
        two.set(2, 0);
        let c2 = two.centroid().unwrap();
        assert_eq!((c2.x, c2.y), (1.5, 0.5));
    }

    #[test]
    fn centroid_of_centered_rectangle() {
        let rect = square_poly(80.0, 90.0, 40.0, 20.0);
        let m = RasterMask::from_polygon(&rect, 1.0).unwrap();
        let c = m.centroid().unwrap();
        assert!((c.x - 100.0).abs() <= 0.5 && (c.y - 100.0).abs() <= 0.5);
    }

    #[test]
    fn centroid_rejects_empty() {
        let m = RasterMask::new_empty(Point2::new(0.0, 0.0), 1.0, 4, 4).unwrap();
        assert!(matches!(m.centroid(), Err(GeometryError::EmptyMask)));
    }

    #[test]
    fn longest_diameter_of_rectangle() {
        let rect = square_poly(10.0, 10.0, 40.0, 20.0);
        let m = RasterMask::from_polygon(&rect, 1.0).unwrap();
        let chord = m.longest_diameter().unwrap();
        let expect = (40.0f64 * 40.0 + 20.0 * 20.0).sqrt();
        assert!((chord.length - expect).abs() <= 2.0f64.sqrt() * 1.0 + 1e-9);
    }

    #[test]
    fn longest_diameter_of_disc() {
        let r = 15.0;
        let mut m = RasterMask::new_empty(Point2::new(0.0, 0.0), 1.0, 40, 40).unwrap();
        let c = Point2::new(20.0, 20.0);
        for iy in 0..40 {
            for ix in 0..40 {
                if m.cell_center(ix, iy).distance_to(c) <= r {
                    m.set(ix, iy);
                }
            }
        }
        let chord = m.longest_diameter().unwrap();
        assert!((chord.length - 2.0 * r).abs() <= 2.0f64.sqrt() + 1e-9);
    }

    #[test]
    fn diameter_requires_two_cells() {
        let mut m = RasterMask::new_empty(Point2::new(0.0, 0.0), 1.0, 4, 4).unwrap();
        m.set(1, 1);
        assert!(m.longest_diameter().is_err());
    }

    #[test]
    fn union_laws() {
        let a = {
            let mut m = RasterMask::new_empty(Point2::new(0.0, 0.0), 1.0, 8, 8).unwrap();
            m.set(0, 0);
            m.set(1, 0);
            m
        };
        let b = {
            let mut m = RasterMask::new_empty(Point2::new(0.0, 0.0), 1.0, 8, 8).unwrap();
            m.set(5, 5);
            m
        };
        let u = RasterMask::union(&[&a, &b]).unwrap();
        assert_eq!(u.set_count(), a.set_count() + b.set_count());
        let idem = RasterMask::union(&[&a, &a]).unwrap();
        assert_eq!(idem, a);
        let ba = RasterMask::union(&[&b, &a]).unwrap();
        assert_eq!(u, ba);
    }

    #[test]
    fn union_rejects_mismatched_grids() {
        let a = RasterMask::new_empty(Point2::new(0.0, 0.0), 1.0, 8, 8).unwrap();
        let b = RasterMask::new_empty(Point2::new(1.0, 0.0), 1.0, 8, 8).unwrap();
        assert!(matches!(
            RasterMask::union(&[&a, &b]),
            Err(GeometryError::GridMismatch)
        ));
    }

    #[test]
    fn connected_components_blocks() {
        let mut m = RasterMask::new_empty(Point2::new(0.0, 0.0), 1.0, 16, 16).unwrap();
        for dy in 0..3 {
            for dx in 0..3 {
                m.set(1 + dx, 1 + dy);
                m.set(10 + dx, 10 + dy);
            }
        }
        let comps = m.connected_components();
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.set_count() == 9));
        let single = {
            let mut s = RasterMask::new_empty(Point2::new(0.0, 0.0), 1.0, 16, 16).unwrap();
            for dy in 0..5 {
                for dx in 0..5 {
                    s.set(2 + dx, 2 + dy);
                }
            }
            s
        };
        assert_eq!(single.connected_components().len(), 1);
        let empty = RasterMask::new_empty(Point2::new(0.0, 0.0), 1.0, 4, 4).unwrap();
        assert!(empty.connected_components().is_empty());
    }

    #[test]
    fn blade_overlap_examples() {
        let blade = OrientedRect::new(Point2::new(50.0, 50.0), 100.0, 5.0, 0.0);
        let mut hit = RasterMask::new_empty(Point2::new(0.0, 0.0), 1.0, 100, 100).unwrap();
        hit.set(50, 50); // center (50.5, 50.5): 0.5 off-axis < 2.5
        assert!(hit.overlaps_rect(&blade));
        let mut miss = RasterMask::new_empty(Point2::new(0.0, 0.0), 1.0, 100, 100).unwrap();
        miss.set(50, 60);
        assert!(!miss.overlaps_rect(&blade));
        let empty = RasterMask::new_empty(Point2::new(0.0, 0.0), 1.0, 4, 4).unwrap();
        assert!(!empty.overlaps_rect(&blade));
    }

    #[test]
    fn centers_within_distance() {
        let left = RasterMask::from_polygon(&square_poly(0.0, 0.0, 10.0, 10.0), 1.0).unwrap();
        let near = RasterMask::from_polygon(&square_poly(11.0, 0.0, 10.0, 10.0), 1.0).unwrap();
        let far = RasterMask::from_polygon(&square_poly(30.0, 0.0, 10.0, 10.0), 1.0).unwrap();
        assert!(left.centers_within(&near, 2.5));
        assert!(!left.centers_within(&far, 2.5));
    }

    #[test]
    fn iou_of_translated_copies() {
        let a = RasterMask::from_polygon(&square_poly(0.0, 0.0, 10.0, 10.0), 1.0).unwrap();
        let b = RasterMask::from_polygon(&square_poly(5.0, 0.0, 10.0, 10.0), 1.0).unwrap();
        let iou = a.iou(&b);
        assert!((iou - 50.0 / 150.0).abs() < 1e-9);
        assert_eq!(a.iou(&a), 1.0);
    }
}
