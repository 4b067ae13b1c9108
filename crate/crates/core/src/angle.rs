//! The implicit angle of the explicit oscillator and the closed-form
//! unperturbed and variational solutions built on it.
//!
//! In Urabe coordinates the orbits of `ẍ + 1 − 1/√(2x+1) = 0` are circles of
//! radius `r ∈ [0, 1)` traversed with angular speed `θ̇ = −1/(1 + r cos θ)`.
//! Starting from `θ = 0` this integrates to the Kepler-like relation
//! `θ + r sin θ = −t`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::QuadratureRule;

/// Absolute residual accepted by [`solve_theta`].
pub const RESIDUAL_TOL: f64 = 1e-12;
pub const MAX_ITERATIONS: usize = 50;

pub(crate) fn check_radius(r: f64) -> Result<()> {
    if (0.0..1.0).contains(&r) {
        Ok(())
    } else {
        Err(Error::InvalidRadius(r))
    }
}

/// The unique `θ` with `θ + r sin θ = −t`.
///
/// `t` is first reduced to `[0, 2π)`, so `θ(t + 2π, r) = θ(t, r) − 2π` holds
/// exactly in the number of periods removed.
pub fn solve_theta(t: f64, r: f64) -> Result<f64> {
    check_radius(r)?;
    if !t.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "time must be finite, got {t}"
        )));
    }
    if r == 0.0 {
        return Ok(-t);
    }
    let periods = (t / TAU).floor();
    let tr = t - periods * TAU;
    let theta = solve_reduced(tr, r)?;
    Ok(theta - periods * TAU)
}

// Newton on g(θ) = θ + r sin θ + t, safeguarded by bisection on the
// bracket [−t − r, −t + r]. g' = 1 + r cos θ ≥ 1 − r > 0.
fn solve_reduced(t: f64, r: f64) -> Result<f64> {
    let g = |th: f64| th + r * th.sin() + t;
    let mut lo = -t - r;
    let mut hi = -t + r;
    let mut theta = -t;
    for _ in 0..MAX_ITERATIONS {
        let gv = g(theta);
        if gv.abs() < 0.25 * RESIDUAL_TOL {
            return Ok(theta);
        }
        if gv < 0.0 {
            lo = theta;
        } else {
            hi = theta;
        }
        let newton = theta - gv / (1.0 + r * theta.cos());
        theta = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo < 4.0 * f64::EPSILON * theta.abs().max(1.0) {
            break;
        }
    }
    if g(theta).abs() < RESIDUAL_TOL {
        Ok(theta)
    } else {
        Err(Error::NoConvergence {
            t,
            r,
            iterations: MAX_ITERATIONS,
        })
    }
}

/// Position of the unperturbed solution starting at `x₀ = r²/2 + r`, `ẋ₀ = 0`.
pub fn phi(t: f64, r: f64) -> Result<f64> {
    let c = r * solve_theta(t, r)?.cos();
    Ok(0.5 * c * c + c)
}

/// Velocity of the unperturbed solution, `r sin θ(t, r)`.
pub fn phi_dot(t: f64, r: f64) -> Result<f64> {
    Ok(r * solve_theta(t, r)?.sin())
}

/// The complex variational solution `r + cos θ − (r + 1) sin θ · i`.
///
/// Its initial data are `ψ(0) = 1 + r`, `ψ̇(0) = i`.
pub fn psi(t: f64, r: f64) -> Result<Complex64> {
    let theta = solve_theta(t, r)?;
    Ok(psi_from_theta(theta, r))
}

pub(crate) fn psi_from_theta(theta: f64, r: f64) -> Complex64 {
    let (s, c) = theta.sin_cos();
    Complex64::new(r + c, -(r + 1.0) * s)
}

/// Quadrature nodes for integrals over one period in `t` against `ψ(·, r)`.
///
/// The rule's nodes are placed in the anomaly `u = −θ`, where
/// `t = u + r sin u` and `dt = (1 + r cos u) du`. Integrands built from `ψ`
/// are entire in `u`, so the periodic trapezoid converges spectrally for
/// every `r < 1`, whereas in `t` the convergence rate degrades like the
/// Kepler series as `r → 1`. Returns `(t_k, weight_k, ψ(t_k, r))` with the
/// Jacobian folded into the weights.
pub fn anomaly_nodes(r: f64, rule: &QuadratureRule) -> Result<Vec<(f64, f64, Complex64)>> {
    check_radius(r)?;
    Ok(rule
        .nodes()
        .into_iter()
        .map(|(u, w)| {
            let (s, c) = u.sin_cos();
            let t = u + r * s;
            (t, w * (1.0 + r * c), psi_from_theta(-u, r))
        })
        .collect())
}

/// Initial position `r²/2 + r` of the orbit with radius `r`.
pub fn initial_position(r: f64) -> f64 {
    0.5 * r * r + r
}

/// Radius of the orbit through `(x, 0)` for `x ∈ (−1/2, 3/2)`, the inverse
/// of [`initial_position`] on the right half.
pub fn radius_of_position(x: f64) -> f64 {
    (2.0 * x + 1.0).sqrt() - 1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleState {
    pub t: f64,
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
    pub phi_dot: f64,
    pub psi_re: f64,
    pub psi_im: f64,
}

impl AngleState {
    pub fn at(t: f64, r: f64) -> Result<Self> {
        let theta = solve_theta(t, r)?;
        let (s, c) = theta.sin_cos();
        let x = r * c;
        let z = psi_from_theta(theta, r);
        Ok(AngleState {
            t,
            r,
            theta,
            phi: 0.5 * x * x + x,
            phi_dot: r * s,
            psi_re: z.re,
            psi_im: z.im,
        })
    }

    pub fn residual(&self) -> f64 {
        (self.theta + self.r * self.theta.sin() + self.t).abs()
    }

    pub fn psi(&self) -> Complex64 {
        Complex64::new(self.psi_re, self.psi_im)
    }
}
