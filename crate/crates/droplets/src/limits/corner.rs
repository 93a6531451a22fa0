//! Explicit strong-field limit shapes: the corner-growth profile, the
//! square's shrinking limit shape built from four rotated epigraphs, the
//! drift-flow weak solution by half-plane intersection, and the clipped
//! shape with flattened poles.

use super::{drift_speed, LimitsError};
use crate::geometry::{halfplane_intersection, PlanarShape, Point, SupportFunction};

/// The corner-growth scaling profile:
/// `g(x, t) = (x^2 + t^2) / (2t)` for `|x| <= t`, `|x|` otherwise
/// (and `g(x, 0) = |x|`).
pub fn corner_growth_profile(x: f64, t: f64) -> f64 {
    debug_assert!(t >= 0.0);
    if t <= 0.0 || x.abs() >= t {
        x.abs()
    } else {
        (x * x + t * t) / (2.0 * t)
    }
}

/// Inscribed half-width of the square limit shape for `t` in `[1, 4]`:
/// `d(t) = 2 sqrt(t) - t`.
pub fn pole_gap(t: f64) -> f64 {
    2.0 * t.sqrt() - t
}

// Diagonal frame: f1 = (e1 - e2)/2, f2 = (e1 + e2)/2.
fn frame_to_plane(a: f64, b: f64) -> Point {
    Point::new((a + b) * 0.5, (b - a) * 0.5)
}

const BIG: f64 = 24.0;
const PARABOLA_SAMPLES: usize = 2000;

/// Epigraph `{ a f1 + b f2 : b >= curve(a) }` clipped to a big box, as a
/// convex polygon rotated by `quarter_turns * 90` degrees. The curve is
/// sampled on `[-x_lo tail] + [parabolic arc] + [x_hi tail]`; the tails must
/// be straight lines for the polygon to stay convex.
fn epigraph_polygon(
    curve: impl Fn(f64) -> f64,
    arc_lo: f64,
    arc_hi: f64,
    tail: f64,
    quarter_turns: usize,
) -> PlanarShape {
    let mut pts: Vec<Point> = Vec::with_capacity(PARABOLA_SAMPLES + 8);
    let x_left = arc_lo - tail;
    let x_right = arc_hi + tail;
    pts.push(frame_to_plane(x_left, curve(x_left)));
    if arc_hi > arc_lo {
        for k in 0..=PARABOLA_SAMPLES {
            let a = arc_lo + (arc_hi - arc_lo) * k as f64 / PARABOLA_SAMPLES as f64;
            pts.push(frame_to_plane(a, curve(a)));
        }
    } else {
        // degenerate arc: keep the kink of the V profile
        pts.push(frame_to_plane(arc_lo, curve(arc_lo)));
    }
    pts.push(frame_to_plane(x_right, curve(x_right)));
    // close the region far above
    pts.push(frame_to_plane(x_right, BIG));
    pts.push(frame_to_plane(x_left, BIG));
    PlanarShape::new(pts).rotated_quarters(quarter_turns)
}

fn four_corner_intersection(curve: impl Fn(f64) -> f64 + Copy, arc_half: f64) -> PlanarShape {
    let mut shape = epigraph_polygon(curve, -arc_half, arc_half, 8.0, 0);
    for q in 1..4 {
        let rotated = epigraph_polygon(curve, -arc_half, arc_half, 8.0, q);
        shape = shape.intersect_convex(&rotated);
        if shape.is_empty() {
            return shape;
        }
    }
    shape
}

/// The square's limit shape at rescaled time `t`: the intersection of the
/// four rotated epigraphs of `g(., t) - 2` in the diagonal frame. Empty from
/// `t = 4` on.
pub fn square_limit_shape(t: f64) -> Result<PlanarShape, LimitsError> {
    if t < 0.0 {
        return Err(LimitsError::NegativeTime);
    }
    if t >= 4.0 {
        return Ok(PlanarShape::empty());
    }
    let curve = move |a: f64| corner_growth_profile(a, t) - 2.0;
    let shape = four_corner_intersection(curve, t);
    if shape.area() < 1e-9 {
        Ok(PlanarShape::empty())
    } else {
        Ok(shape)
    }
}

/// Weak solution of the drift flow: the intersection of the half-planes
/// `x . v(theta_i) <= h(theta_i) - (b(theta_i)/2) t` over the angle grid.
///
/// The half converts the drift function to the boundary's normal velocity:
/// the corner-growth profile raises the interface height at rate
/// `(1 - slope^2)/2` in frame units, and pushing that through the diagonal
/// frame gives a normal speed of exactly `b(theta)/2` at every angle
/// (`sqrt(2)/4` at the diagonals, zero at the poles). With this
/// normalization the weak solution started from the unit square coincides
/// with [`square_limit_shape`].
pub fn weak_solution_shape(h0: &SupportFunction, t: f64) -> PlanarShape {
    let offsets: Vec<f64> =
        (0..h0.len()).map(|i| 0.5 * drift_speed(h0.theta(i)) * t).collect();
    shrunk_halfplane_shape(h0, &offsets)
}

/// Half-plane intersection with per-angle offsets subtracted from the
/// support values; empty when the constraints become infeasible.
pub fn shrunk_halfplane_shape(h0: &SupportFunction, offsets: &[f64]) -> PlanarShape {
    let shifted = h0.with_offsets(offsets);
    let planes: Vec<(Point, f64)> = (0..shifted.len())
        .map(|i| (Point::unit(shifted.theta(i)), shifted.value(i)))
        .collect();
    halfplane_intersection(&planes)
}

/// The clipped shape used to decouple the four corners for `t` in `[1, 4)`:
/// the four epigraphs of the modified profile (parabola inside
/// `|x| <= d(t) - delta`, slope +-1 tails outside), intersected. Returns
/// `(shape, d(t), r(t))` where `r(t)` solves `g_bar(x, t) = -x` by
/// bisection; the shape equals the limit shape clipped to `[-r, r]^2`.
pub fn clipped_square_limit(
    t: f64,
    delta: f64,
) -> Result<(PlanarShape, f64, f64), LimitsError> {
    if !(1.0..=4.0).contains(&t) {
        return Err(LimitsError::ParameterRange("t must lie in [1, 4]"));
    }
    if delta <= 0.0 {
        return Err(LimitsError::ParameterRange("delta must be positive"));
    }
    if t > 4.0 * (1.0 - delta) {
        return Err(LimitsError::ParameterRange("t must be at most 4(1 - delta)"));
    }
    let d = pole_gap(t);
    if d < delta {
        return Err(LimitsError::ParameterRange("delta must not exceed d(t)"));
    }
    let seam = d - delta;
    let seam_value = corner_growth_profile(seam, t) - 2.0;
    let g_bar = move |x: f64| -> f64 {
        if x.abs() <= seam {
            corner_growth_profile(x, t) - 2.0
        } else {
            x.abs() - seam + seam_value
        }
    };
    // root of g_bar(x) + x on the slope +1 tail; the function is linear
    // there, so bisection converges to the crossing of the flat pole side
    let mut lo = seam;
    let mut hi = seam + 8.0;
    debug_assert!(g_bar(lo) + lo < 0.0 && g_bar(hi) + hi > 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g_bar(mid) + mid < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r = 0.5 * (lo + hi);
    let shape = four_corner_intersection(g_bar, seam);
    Ok((shape, d, r))
}
