//! Deterministic scaling-limit objects: the lattice anisotropy and drift
//! functions, the curve-shortening support-function flow, the explicit
//! strong-field limit shapes, viscosity solutions, and auxiliary PDE
//! solvers.

mod corner;
mod flow;
mod pde;

pub use corner::{
    clipped_square_limit, corner_growth_profile, pole_gap, square_limit_shape,
    weak_solution_shape,
};
pub use flow::{evolve_flow, FlowResult, FlowStop};
pub use pde::{
    heat_dirichlet, pole_pde, viscosity_profile, viscosity_solution, wasep_pde, Profile1D,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LimitsError {
    #[error("initial support function is not strictly convex (margin {margin})")]
    NotStrictlyConvex { margin: f64 },
    #[error("time must be nonnegative")]
    NegativeTime,
    #[error("parameter out of range: {0}")]
    ParameterRange(&'static str),
    #[error("explicit step exceeds the stability bound")]
    CflViolation,
    #[error("profile must vanish at the boundary")]
    BoundaryNotZero,
    #[error("profile must be 1-Lipschitz")]
    NotLipschitz,
}

/// Anisotropy of the curvature flow:
/// `a(theta) = 1 / (2 (|cos theta| + |sin theta|)^2)`.
pub fn anisotropy(theta: f64) -> f64 {
    let c = theta.cos().abs();
    let s = theta.sin().abs();
    1.0 / (2.0 * (c + s) * (c + s))
}

/// Drift speed of the strong-field interface:
/// `b(theta) = |sin 2 theta| (|cos theta| + |sin theta|) / (1 + |sin 2 theta|)`.
/// Vanishes at the four pole directions.
pub fn drift_speed(theta: f64) -> f64 {
    let s2 = (2.0 * theta).sin().abs();
    let c = theta.cos().abs();
    let s = theta.sin().abs();
    s2 * (c + s) / (1.0 + s2)
}

/// `integral over [0, 2pi] of a(theta)`, by composite Simpson quadrature on
/// panels aligned with the quarter-period kinks. The exact value is 2.
pub fn anisotropy_integral(panels_per_quarter: usize) -> f64 {
    let mut total = 0.0;
    for q in 0..4 {
        let a = q as f64 * std::f64::consts::FRAC_PI_2;
        total += simpson(anisotropy, a, a + std::f64::consts::FRAC_PI_2, panels_per_quarter);
    }
    total
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n.max(2) & !1; // even panel count
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + h * k as f64);
    }
    acc * h / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn anisotropy_values() {
        assert_relative_eq!(anisotropy(0.0), 0.5);
        assert_relative_eq!(anisotropy(FRAC_PI_4), 0.25);
    }

    #[test]
    fn anisotropy_quarter_periodic() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let t: f64 = rng.gen_range(-10.0..10.0);
            assert_relative_eq!(anisotropy(t + FRAC_PI_2), anisotropy(t), epsilon = 1e-12);
            assert_relative_eq!(anisotropy(-t), anisotropy(t), epsilon = 1e-12);
        }
    }

    #[test]
    fn drift_values() {
        assert_eq!(drift_speed(0.0), 0.0);
        assert!(drift_speed(FRAC_PI_2) < 1e-15);
        assert_relative_eq!(drift_speed(FRAC_PI_4), 2f64.sqrt() / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn drift_symmetric_about_quarter_pi() {
        for k in 0..=40 {
            let d = k as f64 / 40.0 * FRAC_PI_4;
            assert_relative_eq!(
                drift_speed(FRAC_PI_4 - d),
                drift_speed(FRAC_PI_4 + d),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn drift_nonnegative_and_periodic() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let t: f64 = rng.gen_range(-10.0..10.0);
            assert!(drift_speed(t) >= 0.0);
            assert!(anisotropy(t) >= 0.0);
            assert_relative_eq!(drift_speed(t + FRAC_PI_2), drift_speed(t), epsilon = 1e-12);
        }
    }

    #[test]
    fn anisotropy_integrates_to_two() {
        let i = anisotropy_integral(512);
        assert!((i - 2.0).abs() < 1e-9, "integral = {i}");
        // closed form cross-check on one quarter:
        // 2 int_0^{pi/2} a = 1 exactly
        let quarter = simpson(anisotropy, 0.0, FRAC_PI_2, 2048);
        assert!((quarter - 0.5).abs() < 1e-10);
        let _ = PI;
    }
}
