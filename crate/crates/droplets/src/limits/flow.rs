//! Support-function evolution `dh/dt = -a(theta) k(theta) - alpha b(theta)`
//! with `k = 1 / (h + h'')` from periodic second differences.
//!
//! `alpha = 0` is the anisotropic curve-shortening flow; `alpha > 0` adds
//! the crossover drift term. The crossover mode is an experimental solver:
//! it carries no convergence claim.

use super::{anisotropy, drift_speed, LimitsError};
use crate::geometry::SupportFunction;
use std::f64::consts::TAU;

/// Where and why the integrator stopped early.
#[derive(Clone, Copy, Debug)]
pub struct FlowStop {
    /// Time at which the convexity certificate `h + h'' > floor` failed,
    /// i.e. the shrink-to-point detection.
    pub time: f64,
    /// Certificate value at the stop.
    pub min_radius: f64,
}

#[derive(Clone, Debug)]
pub struct FlowResult {
    pub support: SupportFunction,
    /// Time actually reached (equals the requested time unless stopped).
    pub reached_time: f64,
    pub stop: Option<FlowStop>,
    pub steps: u64,
}

const CERT_FLOOR: f64 = 1e-3;
const SPEC_STEP_FACTOR: f64 = 0.25;

/// Integrates the flow to time `t`. Explicit first-order stepping; the step
/// is bounded by `0.25 d_theta^2 min(h + h'')` and additionally by the
/// linear stability limit `0.45 d_theta^2 / max(a / (h+h'')^2)`, which takes
/// over near extinction where the curvature blows up. An optional `dt` caps
/// the step further (for consistency checks).
///
/// Requires a strictly convex start; returns a partial result with the
/// recorded stop time once the certificate floor is hit.
pub fn evolve_flow(
    h0: &SupportFunction,
    alpha: f64,
    t: f64,
    dt: Option<f64>,
) -> Result<FlowResult, LimitsError> {
    if t < 0.0 {
        return Err(LimitsError::NegativeTime);
    }
    let margin = h0.convexity_margin();
    if margin <= CERT_FLOOR {
        return Err(LimitsError::NotStrictlyConvex { margin });
    }
    let n = h0.len();
    let dtheta = TAU / n as f64;
    let dtheta2 = dtheta * dtheta;
    let a: Vec<f64> = (0..n).map(|i| anisotropy(h0.theta(i))).collect();
    let b: Vec<f64> = (0..n).map(|i| drift_speed(h0.theta(i))).collect();

    let mut h = h0.values().to_vec();
    let mut time = 0.0f64;
    let mut steps = 0u64;
    let mut stop = None;

    while time < t {
        // radius of curvature by periodic second differences
        let mut rho_min = f64::INFINITY;
        let mut stiffness: f64 = 0.0; // max a / rho^2
        let mut rho = vec![0.0; n];
        for i in 0..n {
            let hm = h[(i + n - 1) % n];
            let hp = h[(i + 1) % n];
            let r = h[i] + (hp - 2.0 * h[i] + hm) / dtheta2;
            rho[i] = r;
            rho_min = rho_min.min(r);
            if r > 0.0 {
                stiffness = stiffness.max(a[i] / (r * r));
            }
        }
        if rho_min <= CERT_FLOOR {
            stop = Some(FlowStop { time, min_radius: rho_min });
            break;
        }
        let mut step = (SPEC_STEP_FACTOR * dtheta2 * rho_min)
            .min(0.45 * dtheta2 / stiffness)
            .min(t - time);
        if let Some(cap) = dt {
            step = step.min(cap);
        }
        for i in 0..n {
            h[i] -= step * (a[i] / rho[i] + alpha * b[i]);
        }
        time += step;
        steps += 1;
    }

    Ok(FlowResult { support: SupportFunction::new(h), reached_time: time, stop, steps })
}
