//! Planar shape algebra shared by the simulation and limit-shape sides:
//! polygons, support functions, offsets, Hausdorff distances and
//! sandwich-inclusion verdicts.
//!
//! Shapes are simple polygons stored counterclockwise. Convex shapes get
//! exact treatment (half-plane intersection, vertex-resolution Hausdorff);
//! rasterized droplet boundaries go through the sampling paths.

use std::f64::consts::TAU;

use thiserror::Error;

/// Default arc tolerance for polygonizing circular arcs, in rescaled units.
pub const ARC_TOLERANCE: f64 = 1e-4;

const EPS: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("offset of a non-convex shape is not supported")]
    NonConvexOffset,
    #[error("operation requires a non-empty shape")]
    EmptyShape,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    /// Unit vector at angle `theta` from the horizontal axis.
    pub fn unit(theta: f64) -> Point {
        Point::new(theta.cos(), theta.sin())
    }

    /// Rotation by +90 degrees.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn scale(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl std::ops::Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl std::ops::Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        self.scale(s)
    }
}

/// Distance from `p` to the segment `a`-`b`.
pub fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let d = b - a;
    let l2 = d.dot(d);
    if l2 <= 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(d) / l2).clamp(0.0, 1.0);
    p.dist(a + d * t)
}

/// Simple polygon with counterclockwise orientation.
///
/// The empty shape (no vertices) stands for the empty region; it shows up
/// as a legitimate result of erosions and shrinking flows.
#[derive(Clone, Debug, Default)]
pub struct PlanarShape {
    vertices: Vec<Point>,
    convex: bool,
}

impl PlanarShape {
    /// Builds a shape from a vertex loop. Orientation is normalized to
    /// counterclockwise and consecutive duplicates are dropped. Degenerate
    /// input (fewer than 3 distinct vertices or vanishing area) collapses
    /// to the empty shape.
    pub fn new(vertices: Vec<Point>) -> Self {
        let mut v = dedup_ring(vertices);
        if v.len() < 3 {
            return Self::empty();
        }
        let signed = signed_area(&v);
        if signed.abs() < 1e-300 {
            return Self::empty();
        }
        if signed < 0.0 {
            v.reverse();
        }
        let convex = ring_is_convex(&v);
        Self { vertices: v, convex }
    }

    pub fn empty() -> Self {
        Self { vertices: Vec::new(), convex: true }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn is_convex(&self) -> bool {
        self.convex
    }

    pub fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Self::new(vec![
            Point::new(x0, y0),
            Point::new(x1, y0),
            Point::new(x1, y1),
            Point::new(x0, y1),
        ])
    }

    /// Axis-aligned square `[-half, half]^2`.
    pub fn square(half: f64) -> Self {
        Self::rectangle(-half, -half, half, half)
    }

    /// Regular `n`-gon approximation of a disk.
    pub fn circle(center: Point, radius: f64, n: usize) -> Self {
        let v = (0..n)
            .map(|i| center + Point::unit(TAU * i as f64 / n as f64) * radius)
            .collect();
        Self::new(v)
    }

    /// Shoelace area (non-negative for the stored ccw ring).
    pub fn area(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        signed_area(&self.vertices)
    }

    pub fn perimeter(&self) -> f64 {
        edge_iter(&self.vertices).map(|(a, b)| a.dist(b)).sum()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.vertices.iter().map(|&p| p * s).collect())
    }

    pub fn translated(&self, v: Point) -> Self {
        Self::new(self.vertices.iter().map(|&p| p + v).collect())
    }

    /// Rotation by `quarter_turns * 90` degrees about the origin.
    pub fn rotated_quarters(&self, quarter_turns: usize) -> Self {
        let mut pts = self.vertices.clone();
        for _ in 0..(quarter_turns % 4) {
            for p in &mut pts {
                *p = p.perp();
            }
        }
        Self::new(pts)
    }

    pub fn bounding_box(&self) -> Option<(Point, Point)> {
        if self.is_empty() {
            return None;
        }
        let mut lo = self.vertices[0];
        let mut hi = self.vertices[0];
        for p in &self.vertices {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        Some((lo, hi))
    }

    /// Boundary-inclusive containment test. Points on edges count as inside
    /// (the lattice initial condition resolves boundary ties to the minus
    /// side, i.e. into the region).
    pub fn contains(&self, p: Point) -> bool {
        if self.is_empty() {
            return false;
        }
        if self.convex {
            return edge_iter(&self.vertices).all(|(a, b)| (b - a).cross(p - a) >= -EPS);
        }
        // On-boundary check, then a crossing count with the half-open rule.
        for (a, b) in edge_iter(&self.vertices) {
            if segment_distance(p, a, b) <= EPS {
                return true;
            }
        }
        let mut inside = false;
        for (a, b) in edge_iter(&self.vertices) {
            if (a.y > p.y) != (b.y > p.y) {
                let xc = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if p.x < xc {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Distance from `p` to the polygon boundary.
    pub fn distance_to_boundary(&self, p: Point) -> f64 {
        edge_iter(&self.vertices)
            .map(|(a, b)| segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Distance from `p` to the closed region (zero inside).
    pub fn distance_to_region(&self, p: Point) -> f64 {
        if self.is_empty() {
            return f64::INFINITY;
        }
        if self.contains(p) {
            0.0
        } else {
            self.distance_to_boundary(p)
        }
    }

    /// Clips the shape by the half-plane `x . normal <= offset`.
    pub fn clip_halfplane(&self, normal: Point, offset: f64) -> PlanarShape {
        if self.is_empty() {
            return Self::empty();
        }
        let mut out = Vec::with_capacity(self.vertices.len() + 2);
        for (a, b) in edge_iter(&self.vertices) {
            let da = offset - a.dot(normal);
            let db = offset - b.dot(normal);
            if da >= 0.0 {
                out.push(a);
            }
            if (da > 0.0 && db < 0.0) || (da < 0.0 && db > 0.0) {
                let t = da / (da - db);
                out.push(a + (b - a) * t);
            }
        }
        Self::new(out)
    }

    /// Intersection with a convex clip region (Sutherland-Hodgman).
    pub fn intersect_convex(&self, clip: &PlanarShape) -> PlanarShape {
        if self.is_empty() || clip.is_empty() {
            return Self::empty();
        }
        debug_assert!(clip.convex);
        let mut cur = self.clone();
        for (a, b) in edge_iter(&clip.vertices) {
            let d = b - a;
            // interior is on the left of each ccw edge: cross(d, p - a) >= 0,
            // i.e. p . n <= a . n with n = -perp(d).
            let n = Point::new(d.y, -d.x);
            cur = cur.clip_halfplane(n, a.dot(n));
            if cur.is_empty() {
                return Self::empty();
            }
        }
        cur
    }

    /// Boundary points: all vertices plus subdivision points so that no two
    /// consecutive samples are farther apart than `max_spacing`.
    pub fn boundary_samples(&self, max_spacing: f64) -> Vec<Point> {
        let mut out = Vec::new();
        for (a, b) in edge_iter(&self.vertices) {
            out.push(a);
            let len = a.dist(b);
            if max_spacing > 0.0 && len > max_spacing {
                let k = (len / max_spacing).ceil() as usize;
                for j in 1..k {
                    out.push(a + (b - a) * (j as f64 / k as f64));
                }
            }
        }
        out
    }
}

fn dedup_ring(vertices: Vec<Point>) -> Vec<Point> {
    let mut v: Vec<Point> = Vec::with_capacity(vertices.len());
    for p in vertices {
        if v.last().is_none_or(|q| q.dist(p) > EPS) {
            v.push(p);
        }
    }
    while v.len() > 1 && v[0].dist(*v.last().unwrap()) <= EPS {
        v.pop();
    }
    v
}

fn signed_area(v: &[Point]) -> f64 {
    0.5 * edge_iter(v).map(|(a, b)| a.cross(b)).sum::<f64>()
}

fn ring_is_convex(v: &[Point]) -> bool {
    let n = v.len();
    let scale: f64 = v.iter().map(|p| p.norm()).fold(1.0, f64::max);
    let tol = -1e-12 * scale * scale;
    (0..n).all(|i| {
        let a = v[i];
        let b = v[(i + 1) % n];
        let c = v[(i + 2) % n];
        (b - a).cross(c - b) >= tol
    })
}

fn edge_iter(v: &[Point]) -> impl Iterator<Item = (Point, Point)> + '_ {
    (0..v.len()).map(move |i| (v[i], v[(i + 1) % v.len()]))
}

// ---------------------------------------------------------------------------
// Half-plane intersection
// ---------------------------------------------------------------------------

#[derive(Clone, Copy)]
struct DirectedLine {
    p: Point, // a point on the line
    d: Point, // direction; feasible side on the left
    ang: f64,
}

fn line_intersection(l1: &DirectedLine, l2: &DirectedLine) -> Point {
    let denom = l1.d.cross(l2.d);
    let t = (l2.p - l1.p).cross(l2.d) / denom;
    l1.p + l1.d * t
}

fn point_outside(l: &DirectedLine, q: Point) -> bool {
    l.d.cross(q - l.p) < -EPS * (1.0 + q.norm())
}

/// Intersection of half-planes `x . n_i <= c_i`. Returns the empty shape
/// when the region is empty or unbounded constraints collapse.
pub fn halfplane_intersection(planes: &[(Point, f64)]) -> PlanarShape {
    if planes.len() < 3 {
        return PlanarShape::empty();
    }
    let mut lines: Vec<DirectedLine> = planes
        .iter()
        .map(|&(n, c)| {
            let d = n.perp();
            DirectedLine { p: n * c, d, ang: d.y.atan2(d.x) }
        })
        .collect();
    lines.sort_by(|a, b| a.ang.total_cmp(&b.ang));
    // Same direction: keep the most restrictive line only.
    let mut dedup: Vec<DirectedLine> = Vec::with_capacity(lines.len());
    for l in lines {
        if let Some(last) = dedup.last_mut() {
            if (l.ang - last.ang).abs() < 1e-12 {
                if point_outside(&l, last.p) {
                    *last = l;
                }
                continue;
            }
        }
        dedup.push(l);
    }
    let lines = dedup;
    if lines.len() < 3 {
        return PlanarShape::empty();
    }

    let mut dq: std::collections::VecDeque<DirectedLine> = std::collections::VecDeque::new();
    for l in lines {
        while dq.len() >= 2
            && point_outside(&l, line_intersection(&dq[dq.len() - 2], &dq[dq.len() - 1]))
        {
            dq.pop_back();
        }
        while dq.len() >= 2 && point_outside(&l, line_intersection(&dq[0], &dq[1])) {
            dq.pop_front();
        }
        if dq.len() == 1 {
            // Antiparallel pair with no feasible strip means the region is empty.
            let back = dq.back().unwrap();
            if back.d.cross(l.d).abs() < 1e-12 && back.d.dot(l.d) < 0.0 && point_outside(&l, back.p)
            {
                return PlanarShape::empty();
            }
        }
        dq.push_back(l);
    }
    loop {
        let mut changed = false;
        if dq.len() >= 3
            && point_outside(&dq[0], line_intersection(&dq[dq.len() - 2], &dq[dq.len() - 1]))
        {
            dq.pop_back();
            changed = true;
        }
        if dq.len() >= 3 && point_outside(&dq[dq.len() - 1], line_intersection(&dq[0], &dq[1])) {
            dq.pop_front();
            changed = true;
        }
        if !changed {
            break;
        }
    }
    if dq.len() < 3 {
        return PlanarShape::empty();
    }
    let n = dq.len();
    let verts: Vec<Point> = (0..n).map(|i| line_intersection(&dq[i], &dq[(i + 1) % n])).collect();
    let shape = PlanarShape::new(verts);
    if shape.area() < 1e-12 {
        PlanarShape::empty()
    } else {
        shape
    }
}

// ---------------------------------------------------------------------------
// Support functions
// ---------------------------------------------------------------------------

/// Support function sampled on the uniform angle grid `theta_i = 22 pi i / n`.
///
/// This is the codec between convex shapes and periodic scalar functions:
/// `h(theta) = sup { x . v(theta) }` and the shape is recovered as the
/// intersection of the half-planes `x . v(theta_i) <= h(theta_i)`.
#[derive(Clone, Debug)]
pub struct SupportFunction {
    values: Vec<f64>,
    /// Set when the source shape was not convex, in which case the values
    /// describe its convex hull.
    pub hull_of_nonconvex: bool,
}

impl SupportFunction {
    pub fn new(values: Vec<f64>) -> Self {
        assert!(values.len() >= 8, "angle grid too coarse");
        Self { values, hull_of_nonconvex: false }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn theta(&self, i: usize) -> f64 {
        TAU * i as f64 / self.values.len() as f64
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn from_shape(shape: &PlanarShape, n: usize) -> Self {
        assert!(!shape.is_empty(), "support function of the empty shape");
        let values = (0..n)
            .map(|i| {
                let v = Point::unit(TAU * i as f64 / n as f64);
                shape
                    .vertices()
                    .iter()
                    .map(|p| p.dot(v))
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect();
        Self { values, hull_of_nonconvex: !shape.is_convex() }
    }

    /// Support function of the square `[-half, half]^2`:
    /// `h(theta) = half (|cos theta| + |sin theta|)`.
    pub fn square(half: f64, n: usize) -> Self {
        Self::new(
            (0..n)
                .map(|i| {
                    let t = TAU * i as f64 / n as f64;
                    half * (t.cos().abs() + t.sin().abs())
                })
                .collect(),
        )
    }

    pub fn circle(center: Point, radius: f64, n: usize) -> Self {
        Self::new(
            (0..n)
                .map(|i| radius + center.dot(Point::unit(TAU * i as f64 / n as f64)))
                .collect(),
        )
    }

    /// Discrete radius of curvature `h + h''` by periodic second differences.
    pub fn curvature_radius(&self) -> Vec<f64> {
        let n = self.values.len();
        let dt = TAU / n as f64;
        let dt2 = dt * dt;
        (0..n)
            .map(|i| {
                let hm = self.values[(i + n - 1) % n];
                let h0 = self.values[i];
                let hp = self.values[(i + 1) % n];
                h0 + (hp - 2.0 * h0 + hm) / dt2
            })
            .collect()
    }

    /// Minimum of the discrete convexity certificate `h + h''`.
    pub fn convexity_margin(&self) -> f64 {
        self.curvature_radius().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Reconstruction by half-plane intersection.
    pub fn to_shape(&self) -> PlanarShape {
        let planes: Vec<(Point, f64)> = (0..self.values.len())
            .map(|i| (Point::unit(self.theta(i)), self.values[i]))
            .collect();
        halfplane_intersection(&planes)
    }

    /// New support values `h_i - offsets_i` (used by the drift flow).
    pub fn with_offsets(&self, offsets: &[f64]) -> Self {
        assert_eq!(offsets.len(), self.values.len());
        Self {
            values: self.values.iter().zip(offsets).map(|(h, o)| h - o).collect(),
            hull_of_nonconvex: self.hull_of_nonconvex,
        }
    }

    /// Discrete enclosed-area estimate `1/2 sum (h^2 - h'^2) d theta`.
    pub fn enclosed_area_estimate(&self) -> f64 {
        let n = self.values.len();
        let dt = TAU / n as f64;
        let mut acc = 0.0;
        for i in 0..n {
            let hp = self.values[(i + 1) % n];
            let hm = self.values[(i + n - 1) % n];
            let dh = (hp - hm) / (2.0 * dt);
            acc += self.values[i] * self.values[i] - dh * dh;
        }
        0.5 * acc * dt
    }
}

pub fn support_function_of(shape: &PlanarShape, n: usize) -> SupportFunction {
    SupportFunction::from_shape(shape, n)
}

pub fn shape_from_support(h: &SupportFunction) -> PlanarShape {
    h.to_shape()
}

// ---------------------------------------------------------------------------
// Offsets
// ---------------------------------------------------------------------------

/// Outer (`delta > 0`) or inner (`delta < 0`) parallel body of a convex
/// shape. Outer offsets insert vertex arcs polygonized at [`ARC_TOLERANCE`];
/// inner offsets erode by half-plane translation and may legitimately come
/// out empty when `|delta|` exceeds the inradius.
pub fn offset_shape(shape: &PlanarShape, delta: f64) -> Result<PlanarShape, GeometryError> {
    if shape.is_empty() {
        return Ok(PlanarShape::empty());
    }
    if !shape.is_convex() {
        return Err(GeometryError::NonConvexOffset);
    }
    if delta == 0.0 {
        return Ok(shape.clone());
    }
    let v = shape.vertices();
    let n = v.len();
    if delta < 0.0 {
        let planes: Vec<(Point, f64)> = (0..n)
            .map(|i| {
                let a = v[i];
                let b = v[(i + 1) % n];
                let d = b - a;
                let nrm = Point::new(d.y, -d.x).scale(1.0 / d.norm());
                (nrm, a.dot(nrm) + delta)
            })
            .collect();
        return Ok(halfplane_intersection(&planes));
    }
    // Outward edge normals, then arcs joining them at each vertex.
    let mut out = Vec::new();
    for i in 0..n {
        let prev = v[(i + n - 1) % n];
        let cur = v[i];
        let next = v[(i + 1) % n];
        let n_in = outward_normal(prev, cur);
        let n_out = outward_normal(cur, next);
        let a0 = n_in.y.atan2(n_in.x);
        let mut a1 = n_out.y.atan2(n_out.x);
        if a1 < a0 {
            a1 += TAU;
        }
        let span = a1 - a0;
        let max_step = (8.0 * ARC_TOLERANCE / delta).sqrt().max(1e-3);
        let steps = (span / max_step).ceil() as usize;
        for k in 0..=steps {
            let ang = a0 + span * k as f64 / steps.max(1) as f64;
            out.push(cur + Point::unit(ang) * delta);
        }
    }
    Ok(PlanarShape::new(out))
}

fn outward_normal(a: Point, b: Point) -> Point {
    let d = b - a;
    Point::new(d.y, -d.x).scale(1.0 / d.norm())
}

// ---------------------------------------------------------------------------
// Hausdorff distance and sandwich checks
// ---------------------------------------------------------------------------

/// Symmetric Hausdorff distance between two closed regions.
///
/// Both empty: 0. One empty: +infinity. For a convex pair the result is
/// exact at vertex resolution (the distance-to-a-convex-region function is
/// convex, so the maximum over a region sits on a vertex); otherwise edges
/// are subdivided at roughly `perimeter / 4096`.
pub fn hausdorff_distance(a: &PlanarShape, b: &PlanarShape) -> f64 {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return 0.0,
        (true, false) | (false, true) => return f64::INFINITY,
        _ => {}
    }
    let spacing = if a.is_convex() && b.is_convex() {
        0.0
    } else {
        let p = a.perimeter().max(b.perimeter());
        (p / 4096.0).max(ARC_TOLERANCE)
    };
    hausdorff_distance_with(a, b, spacing)
}

/// Hausdorff distance with an explicit boundary sample spacing
/// (`0.0` = vertices only).
pub fn hausdorff_distance_with(a: &PlanarShape, b: &PlanarShape, spacing: f64) -> f64 {
    let d_ab = directed_hausdorff(a, b, spacing);
    let d_ba = directed_hausdorff(b, a, spacing);
    d_ab.max(d_ba)
}

fn directed_hausdorff(a: &PlanarShape, b: &PlanarShape, spacing: f64) -> f64 {
    a.boundary_samples(spacing)
        .into_iter()
        .map(|p| b.distance_to_region(p))
        .fold(0.0, f64::max)
}

/// Verdict of the sandwich inclusion `inner subset observed subset outer`.
#[derive(Clone, Copy, Debug)]
pub struct SandwichVerdict {
    pub inner_inside: bool,
    pub outer_covers: bool,
    /// Worst distance by which the inner boundary escapes `observed`.
    pub inner_violation: f64,
    /// Worst distance by which the observed boundary escapes `outer`.
    pub outer_violation: f64,
}

impl SandwichVerdict {
    pub fn holds(&self) -> bool {
        self.inner_inside && self.outer_covers
    }
}

/// Checks `inner subset observed` and `observed subset outer` by boundary
/// sampling, reporting the violating margin when an inclusion fails.
pub fn sandwich_check(
    inner: &PlanarShape,
    observed: &PlanarShape,
    outer: &PlanarShape,
) -> SandwichVerdict {
    let inner_violation = containment_violation(inner, observed);
    let outer_violation = containment_violation(observed, outer);
    SandwichVerdict {
        inner_inside: inner_violation <= EPS,
        outer_covers: outer_violation <= EPS,
        inner_violation,
        outer_violation,
    }
}

fn containment_violation(sub: &PlanarShape, sup: &PlanarShape) -> f64 {
    if sub.is_empty() {
        return 0.0;
    }
    if sup.is_empty() {
        return f64::INFINITY;
    }
    let spacing = if sub.is_convex() && sup.is_convex() {
        0.0
    } else {
        (sub.perimeter().max(sup.perimeter()) / 4096.0).max(ARC_TOLERANCE)
    };
    sub.boundary_samples(spacing)
        .into_iter()
        .map(|p| sup.distance_to_region(p))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn square_area_and_orientation() {
        let s = PlanarShape::square(1.0);
        assert_relative_eq!(s.area(), 4.0);
        assert!(s.is_convex());
        // clockwise input gets normalized
        let cw = PlanarShape::new(vec![
            Point::new(0.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 0.0),
        ]);
        assert_relative_eq!(cw.area(), 1.0);
    }

    #[test]
    fn disk_area_converges() {
        let c = PlanarShape::circle(Point::new(0.0, 0.0), 1.0, 4096);
        assert!((c.area() - std::f64::consts::PI).abs() < 1e-5);
    }

    #[test]
    fn area_scales_quadratically() {
        let s = PlanarShape::new(vec![
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.3),
            Point::new(1.5, 1.8),
            Point::new(-0.2, 1.0),
        ]);
        for lambda in [0.5, 2.0, 3.7] {
            assert_relative_eq!(s.scaled(lambda).area(), s.area() * lambda * lambda, epsilon = 1e-12);
        }
    }

    #[test]
    fn containment_is_boundary_inclusive() {
        let s = PlanarShape::square(1.0);
        assert!(s.contains(Point::new(1.0, 0.0)));
        assert!(s.contains(Point::new(1.0, 1.0)));
        assert!(s.contains(Point::new(0.3, -0.2)));
        assert!(!s.contains(Point::new(1.0 + 1e-6, 0.0)));
    }

    #[test]
    fn nonconvex_containment() {
        // L-shaped region
        let s = PlanarShape::new(vec![
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(2.0, 1.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 2.0),
            Point::new(0.0, 2.0),
        ]);
        assert!(!s.is_convex());
        assert!(s.contains(Point::new(0.5, 1.5)));
        assert!(s.contains(Point::new(1.5, 0.5)));
        assert!(!s.contains(Point::new(1.5, 1.5)));
    }

    #[test]
    fn support_of_square() {
        let s = PlanarShape::square(1.0);
        let h = SupportFunction::from_shape(&s, 4096);
        assert_relative_eq!(h.value(0), 1.0, epsilon = 1e-12);
        assert_relative_eq!(h.value(4096 / 8), 2f64.sqrt(), epsilon = 1e-12);
        // matches the closed form on the whole grid
        let hf = SupportFunction::square(1.0, 4096);
        for i in 0..4096 {
            assert_relative_eq!(h.value(i), hf.value(i), epsilon = 1e-12);
        }
    }

    #[test]
    fn support_of_shifted_disk() {
        let c = Point::new(0.2, -0.1);
        let s = PlanarShape::circle(c, 0.7, 2048);
        let h = SupportFunction::from_shape(&s, 256);
        for i in 0..256 {
            let expect = 0.7 + c.dot(Point::unit(h.theta(i)));
            assert!((h.value(i) - expect).abs() < 1e-5);
        }
    }

    #[test]
    fn support_round_trip() {
        let n = 1024;
        let s = PlanarShape::circle(Point::new(0.1, 0.2), 0.8, 512);
        let h = SupportFunction::from_shape(&s, n);
        let r = h.to_shape();
        let d = hausdorff_distance(&s, &r);
        let diam = 1.6;
        assert!(d <= TAU * diam / n as f64, "round trip error {d}");
    }

    #[test]
    fn round_trip_is_contraction_stable() {
        let s = PlanarShape::new(vec![
            Point::new(0.9, 0.0),
            Point::new(0.3, 0.75),
            Point::new(-0.6, 0.5),
            Point::new(-0.8, -0.4),
            Point::new(0.2, -0.9),
        ]);
        let n = 512;
        let s1 = SupportFunction::from_shape(&s, n).to_shape();
        let s2 = SupportFunction::from_shape(&s1, n).to_shape();
        let d1 = hausdorff_distance(&s, &s1);
        let d2 = hausdorff_distance(&s1, &s2);
        assert!(d2 <= d1 + 1e-9, "d1={d1} d2={d2}");
    }

    #[test]
    fn square_reconstruction_is_exact() {
        let h = SupportFunction::square(1.0, 4096);
        let s = h.to_shape();
        let d = hausdorff_distance(&s, &PlanarShape::square(1.0));
        assert!(d < 1e-9, "d={d}");
    }

    #[test]
    fn halfplane_intersection_empty() {
        let planes = vec![
            (Point::new(1.0, 0.0), -1.0),
            (Point::new(-1.0, 0.0), -1.0),
            (Point::new(0.0, 1.0), 10.0),
            (Point::new(0.0, -1.0), 10.0),
        ];
        assert!(halfplane_intersection(&planes).is_empty());
    }

    #[test]
    fn hausdorff_basics() {
        let a = PlanarShape::circle(Point::new(0.0, 0.0), 1.0, 1024);
        let b = PlanarShape::circle(Point::new(0.0, 0.0), 2.0, 1024);
        assert!((hausdorff_distance(&a, &b) - 1.0).abs() < 1e-3);
        assert_eq!(hausdorff_distance(&a, &a), 0.0);
        let t = a.translated(Point::new(0.3, -0.4));
        assert!((hausdorff_distance(&a, &t) - 0.5).abs() < 1e-3);
        assert_eq!(hausdorff_distance(&PlanarShape::empty(), &PlanarShape::empty()), 0.0);
        assert!(hausdorff_distance(&a, &PlanarShape::empty()).is_infinite());
    }

    #[test]
    fn hausdorff_metric_properties() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                let c = Point::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
                PlanarShape::circle(c, rng.gen_range(0.2..1.0), 128)
            };
            let a = mk(&mut rng);
            let b = mk(&mut rng);
            let c = mk(&mut rng);
            let dab = hausdorff_distance(&a, &b);
            let dba = hausdorff_distance(&b, &a);
            assert!((dab - dba).abs() < 1e-9);
            let dac = hausdorff_distance(&a, &c);
            let dcb = hausdorff_distance(&c, &b);
            assert!(dab <= dac + dcb + 1e-9);
        }
    }

    #[test]
    fn offset_square_inner() {
        let s = PlanarShape::square(1.0);
        let inner = offset_shape(&s, -0.25).unwrap();
        let d = hausdorff_distance(&inner, &PlanarShape::square(0.75));
        assert!(d < 1e-9, "d={d}");
    }

    #[test]
    fn offset_disk_outer() {
        let s = PlanarShape::circle(Point::new(0.0, 0.0), 1.0, 2048);
        let o = offset_shape(&s, 0.5).unwrap();
        let d = hausdorff_distance(&o, &PlanarShape::circle(Point::new(0.0, 0.0), 1.5, 2048));
        assert!(d < 2e-3, "d={d}");
    }

    #[test]
    fn offset_past_inradius_is_empty() {
        let s = PlanarShape::square(1.0);
        assert!(offset_shape(&s, -1.5).unwrap().is_empty());
    }

    #[test]
    fn opening_is_contained() {
        let s = PlanarShape::new(vec![
            Point::new(1.0, 0.0),
            Point::new(0.4, 0.9),
            Point::new(-0.7, 0.6),
            Point::new(-0.9, -0.5),
            Point::new(0.3, -1.0),
        ]);
        let d = 0.15;
        let opened = offset_shape(&offset_shape(&s, -d).unwrap(), d).unwrap();
        let v = containment_violation(&opened, &s);
        assert!(v < 1e-6, "violation {v}");
    }

    #[test]
    fn offset_monotone_in_delta() {
        let s = PlanarShape::circle(Point::new(0.1, 0.0), 0.8, 256);
        let d1 = offset_shape(&s, 0.1).unwrap();
        let d2 = offset_shape(&s, 0.3).unwrap();
        assert!(containment_violation(&d1, &d2) < 1e-9);
        let e1 = offset_shape(&s, -0.3).unwrap();
        let e2 = offset_shape(&s, -0.1).unwrap();
        assert!(containment_violation(&e1, &e2) < 1e-9);
    }

    #[test]
    fn sandwich_verdicts() {
        let shape = PlanarShape::square(1.0);
        let inner = offset_shape(&shape, -0.1).unwrap();
        let outer = offset_shape(&shape, 0.1).unwrap();
        assert!(sandwich_check(&inner, &shape, &outer).holds());
        let shifted = shape.translated(Point::new(0.2, 0.0));
        let v = sandwich_check(&inner, &shifted, &outer);
        assert!(!v.holds());
        assert!(v.inner_violation > 0.05 || v.outer_violation > 0.05);
    }
}
