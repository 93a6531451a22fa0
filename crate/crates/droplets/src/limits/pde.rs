//! One-dimensional profiles and their solvers: the inf-convolution
//! viscosity solution of the interface equation, the Dirichlet heat
//! equation by discrete sine series, and explicit finite-difference schemes
//! for the weakly-asymmetric and pole equations.

use super::{corner_growth_profile, LimitsError};

/// Sampled profile on a uniform grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Profile1D {
    x0: f64,
    dx: f64,
    values: Vec<f64>,
}

impl Profile1D {
    pub fn new(x0: f64, dx: f64, values: Vec<f64>) -> Self {
        assert!(dx > 0.0 && values.len() >= 2);
        Self { x0, dx, values }
    }

    /// Samples `f` on `[a, b]` with `cells + 1` nodes.
    pub fn from_fn(a: f64, b: f64, cells: usize, f: impl Fn(f64) -> f64) -> Self {
        let dx = (b - a) / cells as f64;
        let values = (0..=cells).map(|k| f(a + dx * k as f64)).collect();
        Self::new(a, dx, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn x(&self, k: usize) -> f64 {
        self.x0 + self.dx * k as f64
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn x_end(&self) -> f64 {
        self.x(self.values.len() - 1)
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, k: usize) -> f64 {
        self.values[k]
    }

    /// Linear interpolation, clamped to the grid range.
    pub fn sample(&self, x: f64) -> f64 {
        let s = ((x - self.x0) / self.dx).clamp(0.0, (self.values.len() - 1) as f64);
        let k = (s.floor() as usize).min(self.values.len() - 2);
        let w = s - k as f64;
        self.values[k] * (1.0 - w) + self.values[k + 1] * w
    }

    /// Largest slope magnitude between neighboring nodes.
    pub fn lipschitz_bound(&self) -> f64 {
        self.values
            .windows(2)
            .map(|w| (w[1] - w[0]).abs() / self.dx)
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Profile1D) -> f64 {
        assert_eq!(self.len(), other.len());
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn require_lipschitz(u0: &Profile1D) -> Result<(), LimitsError> {
    if u0.lipschitz_bound() > 1.0 + 1e-9 {
        return Err(LimitsError::NotLipschitz);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Viscosity solution by inf-convolution
// ---------------------------------------------------------------------------

/// `u(x, t) = inf_y { u0(y) + g(x - y, t) }` for a 1-Lipschitz `u0` sampled
/// on a grid and interpolated linearly between nodes.
///
/// The infimum is exact for the piecewise-linear interpolant: grid nodes
/// cover the linear branch of `g`, and on each segment intersecting the
/// parabolic window the quadratic has a closed-form stationary point.
pub fn viscosity_solution(u0: &Profile1D, x: f64, t: f64) -> f64 {
    debug_assert!(t >= 0.0);
    if t <= 0.0 {
        return u0.sample(x);
    }
    let n = u0.len();
    let mut best = f64::INFINITY;
    for k in 0..n {
        let y = u0.x(k);
        best = best.min(u0.value(k) + corner_growth_profile(x - y, t));
    }
    // refine on segments overlapping the parabolic window (x - t, x + t)
    let lo = ((x - t - u0.x0()) / u0.dx()).floor().max(0.0) as usize;
    let hi = (((x + t - u0.x0()) / u0.dx()).ceil() as usize).min(n - 1);
    for k in lo..hi {
        let y0 = u0.x(k);
        let y1 = u0.x(k + 1);
        let m = (u0.value(k + 1) - u0.value(k)) / u0.dx();
        // d/dy [u0(y) + ((x-y)^2 + t^2)/(2t)] = m - (x - y)/t
        let y_star = x - m * t;
        let y_min = y0.max(x - t);
        let y_max = y1.min(x + t);
        if y_star >= y_min && y_star <= y_max && y_min <= y_max {
            let u_lin = u0.value(k) + m * (y_star - y0);
            best = best.min(u_lin + corner_growth_profile(x - y_star, t));
        }
    }
    best
}

/// Applies the inf-convolution on the whole grid.
pub fn viscosity_profile(u0: &Profile1D, t: f64) -> Result<Profile1D, LimitsError> {
    require_lipschitz(u0)?;
    if t < 0.0 {
        return Err(LimitsError::NegativeTime);
    }
    let values = (0..u0.len()).map(|k| viscosity_solution(u0, u0.x(k), t)).collect();
    Ok(Profile1D::new(u0.x0(), u0.dx(), values))
}

// ---------------------------------------------------------------------------
// Heat equation with zero Dirichlet data
// ---------------------------------------------------------------------------

/// Solves `dv/dt = (1/2) v_xx` on `[-2, 2]` with `v(+-2) = 0` by the
/// discrete sine transform of the sampled data, decaying each mode by its
/// continuum rate `exp(-(k pi / 4)^2 t / 2)`.
pub fn heat_dirichlet(v0: &Profile1D, t: f64) -> Result<Profile1D, LimitsError> {
    if t < 0.0 {
        return Err(LimitsError::NegativeTime);
    }
    if (v0.x0() + 2.0).abs() > 1e-9 || (v0.x_end() - 2.0).abs() > 1e-9 {
        return Err(LimitsError::ParameterRange("heat profile must span [-2, 2]"));
    }
    if v0.value(0).abs() > 1e-9 || v0.value(v0.len() - 1).abs() > 1e-9 {
        return Err(LimitsError::BoundaryNotZero);
    }
    let m = v0.len() - 1; // cells
    let mf = m as f64;
    // DST-I coefficients of the interior samples
    let mut coef = vec![0.0f64; m];
    for (k, c) in coef.iter_mut().enumerate().skip(1) {
        let mut acc = 0.0;
        for j in 1..m {
            acc += v0.value(j) * (std::f64::consts::PI * k as f64 * j as f64 / mf).sin();
        }
        *c = 2.0 / mf * acc;
    }
    let mut values = vec![0.0f64; m + 1];
    for (j, out) in values.iter_mut().enumerate().take(m).skip(1) {
        let mut acc = 0.0;
        for (k, c) in coef.iter().enumerate().skip(1) {
            let lambda = 0.5 * (k as f64 * std::f64::consts::PI / 4.0).powi(2);
            acc += c
                * (-lambda * t).exp()
                * (std::f64::consts::PI * k as f64 * j as f64 / mf).sin();
        }
        *out = acc;
    }
    Ok(Profile1D::new(v0.x0(), v0.dx(), values))
}

// ---------------------------------------------------------------------------
// Explicit schemes
// ---------------------------------------------------------------------------

fn explicit_march(
    u0: &Profile1D,
    t: f64,
    dt: Option<f64>,
    dt_default: f64,
    dt_max: f64,
    rhs: impl Fn(&[f64], usize, f64) -> f64,
) -> Result<Profile1D, LimitsError> {
    if t < 0.0 {
        return Err(LimitsError::NegativeTime);
    }
    let step0 = dt.unwrap_or(dt_default);
    if step0 > dt_max {
        return Err(LimitsError::CflViolation);
    }
    let n = u0.len();
    let dx = u0.dx();
    let mut cur = u0.values().to_vec();
    let mut next = vec![0.0; n];
    let mut time = 0.0;
    while time < t {
        let step = step0.min(t - time);
        for k in 0..n {
            next[k] = cur[k] + step * rhs(&cur, k, dx);
        }
        std::mem::swap(&mut cur, &mut next);
        time += step;
    }
    Ok(Profile1D::new(u0.x0(), dx, cur))
}

/// Ghost values by linear extrapolation, so end nodes carry zero second
/// difference but still feel the gradient terms.
fn stencil(u: &[f64], k: usize) -> (f64, f64, f64) {
    let n = u.len();
    let um = if k == 0 { 2.0 * u[0] - u[1] } else { u[k - 1] };
    let up = if k == n - 1 { 2.0 * u[n - 1] - u[n - 2] } else { u[k + 1] };
    (um, u[k], up)
}

/// Explicit solver for `du/dt = (1/2) u_xx + (1/2)(1 - u_x)^2` (the
/// weakly-asymmetric interface equation). Experimental: no convergence
/// claim attaches to it. The default step is `0.4 dx^2`; an explicit `dt`
/// above `dx^2` is rejected as a stability violation.
pub fn wasep_pde(u0: &Profile1D, t: f64, dt: Option<f64>) -> Result<Profile1D, LimitsError> {
    require_lipschitz(u0)?;
    let dx = u0.dx();
    explicit_march(u0, t, dt, 0.4 * dx * dx, dx * dx, |u, k, dx| {
        let (um, uc, up) = stencil(u, k);
        let uxx = (up - 2.0 * uc + um) / (dx * dx);
        let ux = (up - um) / (2.0 * dx);
        0.5 * uxx + 0.5 * (1.0 - ux) * (1.0 - ux)
    })
}

/// Explicit solver for the pole equation `dw/dt = w_xx / (1 + w_x^2)`,
/// used only for property-level comparison with zero-range simulations.
pub fn pole_pde(w0: &Profile1D, t: f64, dt: Option<f64>) -> Result<Profile1D, LimitsError> {
    let dx = w0.dx();
    explicit_march(w0, t, dt, 0.25 * dx * dx, 0.5 * dx * dx, |u, k, dx| {
        let (um, uc, up) = stencil(u, k);
        let uxx = (up - 2.0 * uc + um) / (dx * dx);
        let ux = (up - um) / (2.0 * dx);
        uxx / (1.0 + ux * ux)
    })
}
