//! Spin configurations on the dual lattice, droplet extraction, and
//! structural predicates.
//!
//! Sites live on `(Z + 1/2)^2`; a site is stored as integer indices
//! `(i, j)` with center `(i + 1/2, j + 1/2)`. The dynamic window is
//! `[-L, L]^2` (indices `-L..L`), surrounded by a margin of ghost sites
//! whose values realize the boundary rule and never change.

use crate::geometry::{PlanarShape, Point};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

/// Ghost margin width. Two rings so neighbor reads never branch and the
/// window-overflow detector has a buffer to watch.
pub const MARGIN: i64 = 2;

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("initial shape must lie inside [-1,1]^2")]
    ShapeOutOfBounds,
    #[error("half-width must be positive")]
    BadHalfWidth,
    #[error("height function does not span the window")]
    HeightDomainMismatch,
}

/// A dual-lattice site: center `(i + 1/2, j + 1/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Site {
    pub i: i64,
    pub j: i64,
}

impl Site {
    pub const fn new(i: i64, j: i64) -> Self {
        Self { i, j }
    }

    pub fn center(self) -> Point {
        Point::new(self.i as f64 + 0.5, self.j as f64 + 0.5)
    }

    /// Key for the clock-field streams.
    pub fn key(self) -> (i64, i64) {
        (self.i, self.j)
    }
}

/// Boundary behavior outside the dynamic window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum BoundaryRule {
    /// Plus spins everywhere outside the window.
    AllPlus,
    /// Plus on the up and right sides, minus on the down and left sides
    /// (up/right wins at the corners of the margin frame).
    MixedCorner,
    /// Updates cancelled on an explicit set of window sites; ghost values
    /// are whatever the initial condition put there.
    FrozenMask(Vec<Site>),
}

/// External field and inverse temperature. `beta` defaults to infinity;
/// all scaling-limit claims live at `beta = inf`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldParameter {
    h: f64,
    beta: f64,
}

impl FieldParameter {
    pub fn new(h: f64, beta: f64) -> Self {
        assert!(h >= 0.0 && !h.is_nan(), "field must be nonnegative");
        assert!(beta > 0.0 && !beta.is_nan(), "inverse temperature must be positive");
        Self { h, beta }
    }

    /// Zero-temperature dynamics with field `h` (possibly infinite).
    pub fn zero_temperature(h: f64) -> Self {
        Self::new(h, f64::INFINITY)
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn is_zero_temperature(&self) -> bool {
        self.beta.is_infinite()
    }
}

/// Bit-packed spin configuration. A set bit is a minus spin.
#[derive(Clone, Debug)]
pub struct SpinConfiguration {
    half_width: i64,
    width: usize, // 2 * (half_width + MARGIN)
    bits: Vec<u64>,
    frozen: Option<Vec<u64>>,
    boundary: BoundaryRule,
    minus_count: usize, // interior window only
}

impl SpinConfiguration {
    fn blank(half_width: i64, boundary: BoundaryRule) -> Result<Self, LatticeError> {
        if half_width <= 0 {
            return Err(LatticeError::BadHalfWidth);
        }
        let width = (2 * (half_width + MARGIN)) as usize;
        let words = (width * width).div_ceil(64);
        let mut cfg = Self {
            half_width,
            width,
            bits: vec![0; words],
            frozen: None,
            boundary: boundary.clone(),
            minus_count: 0,
        };
        // Ghost values per rule.
        match &boundary {
            BoundaryRule::AllPlus | BoundaryRule::FrozenMask(_) => {}
            BoundaryRule::MixedCorner => {
                let lo = -(half_width + MARGIN);
                let hi = half_width + MARGIN;
                for j in lo..hi {
                    for i in lo..hi {
                        let s = Site::new(i, j);
                        if !cfg.in_window(s) && !(i >= half_width || j >= half_width) {
                            cfg.set_bit(s, true);
                        }
                    }
                }
            }
        }
        if let BoundaryRule::FrozenMask(sites) = &boundary {
            let mut mask = vec![0u64; words];
            for s in sites {
                if cfg.in_store(*s) {
                    let idx = cfg.idx(*s);
                    mask[idx / 64] |= 1 << (idx % 64);
                }
            }
            cfg.frozen = Some(mask);
        }
        Ok(cfg)
    }

    /// Initial condition of the rescaled droplet problem: minus exactly on
    /// the sites whose center lies in `L * shape` (boundary ties resolve to
    /// minus).
    pub fn init_from_shape(
        shape: &PlanarShape,
        half_width: i64,
        boundary: BoundaryRule,
    ) -> Result<Self, LatticeError> {
        if let Some((lo, hi)) = shape.bounding_box() {
            let tol = 1e-9;
            if lo.x < -1.0 - tol || lo.y < -1.0 - tol || hi.x > 1.0 + tol || hi.y > 1.0 + tol {
                return Err(LatticeError::ShapeOutOfBounds);
            }
        }
        let mut cfg = Self::blank(half_width, boundary)?;
        let inv = 1.0 / half_width as f64;
        let sites: Vec<Site> = cfg.window_sites().collect();
        for s in sites {
            let p = s.center();
            if shape.contains(Point::new(p.x * inv, p.y * inv)) {
                cfg.set_bit(s, true);
                cfg.minus_count += 1;
            }
        }
        Ok(cfg)
    }

    /// All-plus configuration.
    pub fn all_plus(half_width: i64, boundary: BoundaryRule) -> Result<Self, LatticeError> {
        Self::blank(half_width, boundary)
    }

    /// Configuration with an explicit interior minus set.
    pub fn with_minus_sites(
        half_width: i64,
        boundary: BoundaryRule,
        minus: &[Site],
    ) -> Result<Self, LatticeError> {
        let mut cfg = Self::blank(half_width, boundary)?;
        for &s in minus {
            if cfg.in_window(s) && !cfg.bit(s) {
                cfg.set_bit(s, true);
                cfg.minus_count += 1;
            }
        }
        Ok(cfg)
    }

    /// Monotone interface configuration: minus above the staircase graph of
    /// `eta` in the diagonal frame (the corner-growth orientation), plus
    /// below, ghosts included. `eta` is indexed by the diagonal column
    /// `a = x1 - x2` over `[-2(L+m), 2(L+m)]`; outside its domain the path
    /// continues with slope +-1. Updates run freely in the window; ghosts
    /// keep their initial values.
    pub fn from_height_profile(
        half_width: i64,
        eta: impl Fn(i64) -> i64,
    ) -> Result<Self, LatticeError> {
        let mut cfg = Self::blank(half_width, BoundaryRule::FrozenMask(Vec::new()))?;
        let lo = -(half_width + MARGIN);
        let hi = half_width + MARGIN;
        for j in lo..hi {
            for i in lo..hi {
                let s = Site::new(i, j);
                // f-frame cell coordinates: a = x1 - x2, b = x1 + x2
                let a = s.i - s.j;
                let b = s.i + s.j + 1;
                if b > eta(a) {
                    cfg.set_bit(s, true);
                    if cfg.in_window(s) {
                        cfg.minus_count += 1;
                    }
                }
            }
        }
        Ok(cfg)
    }

    pub fn half_width(&self) -> i64 {
        self.half_width
    }

    pub fn boundary_rule(&self) -> &BoundaryRule {
        &self.boundary
    }

    pub fn window_width(&self) -> usize {
        (2 * self.half_width) as usize
    }

    fn idx(&self, s: Site) -> usize {
        let off = self.half_width + MARGIN;
        ((s.j + off) as usize) * self.width + (s.i + off) as usize
    }

    pub fn in_window(&self, s: Site) -> bool {
        s.i >= -self.half_width
            && s.i < self.half_width
            && s.j >= -self.half_width
            && s.j < self.half_width
    }

    fn in_store(&self, s: Site) -> bool {
        let m = self.half_width + MARGIN;
        s.i >= -m && s.i < m && s.j >= -m && s.j < m
    }

    fn bit(&self, s: Site) -> bool {
        let idx = self.idx(s);
        self.bits[idx / 64] >> (idx % 64) & 1 == 1
    }

    fn set_bit(&mut self, s: Site, minus: bool) {
        let idx = self.idx(s);
        if minus {
            self.bits[idx / 64] |= 1 << (idx % 64);
        } else {
            self.bits[idx / 64] &= !(1 << (idx % 64));
        }
    }

    /// Spin value at a site. Sites beyond the stored margin read the
    /// boundary rule's extension.
    pub fn spin(&self, s: Site) -> i8 {
        if self.in_store(s) {
            if self.bit(s) {
                -1
            } else {
                1
            }
        } else {
            match &self.boundary {
                BoundaryRule::AllPlus | BoundaryRule::FrozenMask(_) => 1,
                BoundaryRule::MixedCorner => {
                    if s.i >= self.half_width || s.j >= self.half_width {
                        1
                    } else {
                        -1
                    }
                }
            }
        }
    }

    /// Overwrites the spin at a window site (test and construction helper;
    /// dynamics go through the engines).
    pub fn set_spin(&mut self, s: Site, value: i8) {
        assert!(self.in_window(s), "set_spin outside the window");
        let was = self.bit(s);
        let now = value < 0;
        if was != now {
            self.set_bit(s, now);
            if now {
                self.minus_count += 1;
            } else {
                self.minus_count -= 1;
            }
        }
    }

    /// Cancels updates on every window site matching the predicate, on top
    /// of whatever the boundary rule already froze. Ghost values are
    /// untouched (they never update anyway).
    pub fn freeze_sites_where(&mut self, pred: impl Fn(Site) -> bool) {
        let words = self.bits.len();
        let sites: Vec<Site> = self.window_sites().filter(|&s| pred(s)).collect();
        let mask = self.frozen.get_or_insert_with(|| vec![0u64; words]);
        let off = self.half_width + MARGIN;
        for s in sites {
            let idx = ((s.j + off) as usize) * self.width + (s.i + off) as usize;
            mask[idx / 64] |= 1 << (idx % 64);
        }
    }

    pub fn is_frozen(&self, s: Site) -> bool {
        match &self.frozen {
            None => false,
            Some(mask) => {
                if !self.in_store(s) {
                    return false;
                }
                let idx = self.idx(s);
                mask[idx / 64] >> (idx % 64) & 1 == 1
            }
        }
    }

    /// Number of minus spins in the dynamic window.
    pub fn minus_count(&self) -> usize {
        self.minus_count
    }

    /// Sum of the four neighbor spins.
    pub fn neighbor_sum(&self, s: Site) -> i32 {
        self.spin(Site::new(s.i + 1, s.j)) as i32
            + self.spin(Site::new(s.i - 1, s.j)) as i32
            + self.spin(Site::new(s.i, s.j + 1)) as i32
            + self.spin(Site::new(s.i, s.j - 1)) as i32
    }

    /// Iterator over the dynamic window.
    pub fn window_sites(&self) -> impl Iterator<Item = Site> + '_ {
        let l = self.half_width;
        (-l..l).flat_map(move |j| (-l..l).map(move |i| Site::new(i, j)))
    }

    /// True iff every ghost value is plus (the droplet-extinction absorbing
    /// check relies on this).
    pub fn ghosts_all_plus(&self) -> bool {
        let m = self.half_width + MARGIN;
        for j in -m..m {
            for i in -m..m {
                let s = Site::new(i, j);
                if !self.in_window(s) && self.bit(s) {
                    return false;
                }
            }
        }
        true
    }

    /// True iff the set of plus spins is increasing for the coordinatewise
    /// partial order, scanned over the stored window including ghosts.
    pub fn is_increasing_set(&self) -> bool {
        let m = self.half_width + MARGIN;
        for j in -m..m {
            for i in -m..m {
                let s = Site::new(i, j);
                if self.spin(s) == 1 {
                    if i + 1 < m && self.spin(Site::new(i + 1, j)) == -1 {
                        return false;
                    }
                    if j + 1 < m && self.spin(Site::new(i, j + 1)) == -1 {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// True iff the set of minus spins is increasing (the corner-growth
    /// orientation used by the interface bijection).
    pub fn is_minus_increasing(&self) -> bool {
        let m = self.half_width + MARGIN;
        for j in -m..m {
            for i in -m..m {
                let s = Site::new(i, j);
                if self.spin(s) == -1 {
                    if i + 1 < m && self.spin(Site::new(i + 1, j)) == 1 {
                        return false;
                    }
                    if j + 1 < m && self.spin(Site::new(i, j + 1)) == 1 {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Extracts the minus droplet of the window.
    pub fn droplet(&self) -> DropletSet {
        let l = self.half_width;
        let w = (2 * l) as usize;
        let words = (w * w).div_ceil(64);
        let mut bits = vec![0u64; words];
        let mut count = 0;
        for s in self.window_sites() {
            if self.bit(s) {
                let idx = ((s.j + l) as usize) * w + (s.i + l) as usize;
                bits[idx / 64] |= 1 << (idx % 64);
                count += 1;
            }
        }
        DropletSet { half_width: l, width: w, bits, count }
    }
}

/// The `droplet_of` operation.
pub fn droplet_of(config: &SpinConfiguration) -> DropletSet {
    config.droplet()
}

/// The `is_increasing_set` operation (plus spins, coordinatewise order).
pub fn is_increasing_set(config: &SpinConfiguration) -> bool {
    config.is_increasing_set()
}

// ---------------------------------------------------------------------------
// Droplets
// ---------------------------------------------------------------------------

/// Axis direction of a unit boundary edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Dir {
    E,
    N,
    W,
    S,
}

impl Dir {
    fn left_rank(self, incoming: Dir) -> u8 {
        // rank 0 = left turn, 1 = straight, 2 = right turn, 3 = back
        let di = incoming as i8;
        let ds = self as i8;
        ((ds - di - 1).rem_euclid(4)) as u8
    }
}

/// The minus droplet of a window: a boolean raster over `[-L, L)^2` site
/// indices, in lattice units. The region it stands for is the union of the
/// closed unit squares centered at the minus sites.
#[derive(Clone, Debug)]
pub struct DropletSet {
    half_width: i64,
    width: usize,
    bits: Vec<u64>,
    count: usize,
}

impl DropletSet {
    pub fn half_width(&self) -> i64 {
        self.half_width
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn minus_count(&self) -> usize {
        self.count
    }

    /// Total area in lattice units: one per minus site.
    pub fn area(&self) -> f64 {
        self.count as f64
    }

    pub fn contains_site(&self, s: Site) -> bool {
        let l = self.half_width;
        if s.i < -l || s.i >= l || s.j < -l || s.j >= l {
            return false;
        }
        let idx = ((s.j + l) as usize) * self.width + (s.i + l) as usize;
        self.bits[idx / 64] >> (idx % 64) & 1 == 1
    }

    /// True when the point (lattice units) lies in a minus cell.
    pub fn contains_point(&self, p: Point) -> bool {
        let i = p.x.floor() as i64;
        let j = p.y.floor() as i64;
        // on-edge points may belong to either adjacent cell
        for di in [0, -1] {
            for dj in [0, -1] {
                let cand = Site::new(
                    if p.x.fract() == 0.0 { i + di } else { i },
                    if p.y.fract() == 0.0 { j + dj } else { j },
                );
                if self.contains_site(cand) {
                    return true;
                }
            }
        }
        false
    }

    pub fn minus_sites(&self) -> Vec<Site> {
        let l = self.half_width;
        let mut out = Vec::with_capacity(self.count);
        for j in -l..l {
            for i in -l..l {
                if self.contains_site(Site::new(i, j)) {
                    out.push(Site::new(i, j));
                }
            }
        }
        out
    }

    /// Directed boundary edges (unit lattice segments with the minus cell
    /// on the left), as integer corner pairs.
    pub fn boundary_edges(&self) -> Vec<((i64, i64), (i64, i64))> {
        let mut edges = Vec::new();
        for s in self.minus_sites() {
            let (i, j) = (s.i, s.j);
            if !self.contains_site(Site::new(i, j - 1)) {
                edges.push(((i, j), (i + 1, j)));
            }
            if !self.contains_site(Site::new(i + 1, j)) {
                edges.push(((i + 1, j), (i + 1, j + 1)));
            }
            if !self.contains_site(Site::new(i, j + 1)) {
                edges.push(((i + 1, j + 1), (i, j + 1)));
            }
            if !self.contains_site(Site::new(i - 1, j)) {
                edges.push(((i, j + 1), (i, j)));
            }
        }
        edges
    }

    /// Closed boundary loops as integer corner sequences. Outer loops come
    /// out counterclockwise, holes clockwise. At checkerboard corners the
    /// walk prefers the left turn, which keeps diagonally-touching
    /// components on separate loops.
    pub fn boundary_loops(&self) -> Vec<Vec<(i64, i64)>> {
        let edges = self.boundary_edges();
        let mut by_start: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (k, e) in edges.iter().enumerate() {
            by_start.entry(e.0).or_default().push(k);
        }
        let dir_of = |e: &((i64, i64), (i64, i64))| -> Dir {
            match (e.1 .0 - e.0 .0, e.1 .1 - e.0 .1) {
                (1, 0) => Dir::E,
                (0, 1) => Dir::N,
                (-1, 0) => Dir::W,
                _ => Dir::S,
            }
        };
        let mut used = vec![false; edges.len()];
        let mut loops = Vec::new();
        for start in 0..edges.len() {
            if used[start] {
                continue;
            }
            let mut path = Vec::new();
            let mut cur = start;
            loop {
                used[cur] = true;
                path.push(edges[cur].0);
                let end = edges[cur].1;
                let incoming = dir_of(&edges[cur]);
                let next = by_start
                    .get(&end)
                    .into_iter()
                    .flatten()
                    .copied()
                    .filter(|&k| !used[k] || k == start)
                    .min_by_key(|&k| dir_of(&edges[k]).left_rank(incoming));
                match next {
                    Some(k) if k == start => break,
                    Some(k) => cur = k,
                    None => break, // should not happen on closed rasters
                }
            }
            if path.len() >= 4 {
                loops.push(merge_collinear(path));
            }
        }
        loops
    }

    /// Outer boundary polygon (largest counterclockwise loop), in lattice
    /// units. Holes are not represented; the raster itself stays the source
    /// of truth for containment.
    pub fn to_shape(&self) -> PlanarShape {
        let mut best: Option<(f64, Vec<(i64, i64)>)> = None;
        for l in self.boundary_loops() {
            let pts: Vec<Point> =
                l.iter().map(|&(x, y)| Point::new(x as f64, y as f64)).collect();
            let a = 0.5
                * (0..pts.len())
                    .map(|i| pts[i].cross(pts[(i + 1) % pts.len()]))
                    .sum::<f64>();
            if a > 0.0 && best.as_ref().is_none_or(|(ba, _)| a > *ba) {
                best = Some((a, l));
            }
        }
        match best {
            None => PlanarShape::empty(),
            Some((_, l)) => PlanarShape::new(
                l.into_iter().map(|(x, y)| Point::new(x as f64, y as f64)).collect(),
            ),
        }
    }

    /// Outer boundary polygon rescaled by `1/L`.
    pub fn to_shape_rescaled(&self) -> PlanarShape {
        self.to_shape().scaled(1.0 / self.half_width as f64)
    }

    /// Hausdorff distance (lattice units) between this droplet region and a
    /// target region given in lattice units. Exact on the droplet side
    /// (distance to a convex target is maximized at boundary corners) and
    /// sampled at unit spacing on the target side, with boundary-edge
    /// queries accelerated by a bucket grid. Empty droplet: +infinity
    /// unless the target is empty too.
    pub fn hausdorff_to(&self, target: &PlanarShape) -> f64 {
        if self.is_empty() {
            return if target.is_empty() { 0.0 } else { f64::INFINITY };
        }
        if target.is_empty() {
            return f64::INFINITY;
        }
        let edges = self.boundary_edges();
        let mut corners: Vec<(i64, i64)> = edges.iter().map(|e| e.0).collect();
        corners.sort_unstable();
        corners.dedup();

        // droplet -> target
        let mut d1: f64 = 0.0;
        for &(x, y) in &corners {
            let p = Point::new(x as f64, y as f64);
            d1 = d1.max(target.distance_to_region(p));
        }

        // target -> droplet
        let grid = EdgeGrid::new(&edges);
        let mut d2: f64 = 0.0;
        for p in target.boundary_samples(0.5) {
            if !self.contains_point(p) {
                d2 = d2.max(grid.distance(p));
            }
        }
        d1.max(d2)
    }
}

fn merge_collinear(path: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    let n = path.len();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let prev = path[(k + n - 1) % n];
        let cur = path[k];
        let next = path[(k + 1) % n];
        let d1 = (cur.0 - prev.0, cur.1 - prev.1);
        let d2 = (next.0 - cur.0, next.1 - cur.1);
        if d1.0 * d2.1 - d1.1 * d2.0 != 0 {
            out.push(cur);
        }
    }
    out
}

type CornerPair = ((i64, i64), (i64, i64));

/// Bucketed unit-edge index for nearest-boundary queries.
struct EdgeGrid {
    cell: f64,
    buckets: HashMap<(i64, i64), Vec<(Point, Point)>>,
}

impl EdgeGrid {
    fn new(edges: &[CornerPair]) -> Self {
        let cell = 8.0;
        let mut buckets: HashMap<(i64, i64), Vec<(Point, Point)>> = HashMap::new();
        for &(a, b) in edges {
            let pa = Point::new(a.0 as f64, a.1 as f64);
            let pb = Point::new(b.0 as f64, b.1 as f64);
            let key = (
                ((pa.x + pb.x) * 0.5 / cell).floor() as i64,
                ((pa.y + pb.y) * 0.5 / cell).floor() as i64,
            );
            buckets.entry(key).or_default().push((pa, pb));
        }
        Self { cell, buckets }
    }

    fn distance(&self, p: Point) -> f64 {
        let ci = (p.x / self.cell).floor() as i64;
        let cj = (p.y / self.cell).floor() as i64;
        let mut best = f64::INFINITY;
        let mut r = 0i64;
        loop {
            let mut any = false;
            for dj in -r..=r {
                for di in -r..=r {
                    if di.abs() != r && dj.abs() != r {
                        continue; // ring only
                    }
                    if let Some(es) = self.buckets.get(&(ci + di, cj + dj)) {
                        any = true;
                        for &(a, b) in es {
                            best = best.min(crate::geometry::segment_distance(p, a, b));
                        }
                    }
                }
            }
            // A ring at radius r covers everything closer than (r-1)*cell.
            if best < (r as f64) * self.cell || (r > 2 && !any && best.is_finite()) {
                return best;
            }
            r += 1;
            if r > 1_000_000 {
                return best;
            }
        }
    }
}
