//! The resonance functional
//!
//! ```text
//! Φ_p(θ, r) = (1/2π) ∫₀^{2π} p(t − θ) ψ(t, r) dt
//! ```
//!
//! on the cylinder `(θ, r) ∈ ℝ/2πℤ × [0, 1)` of the explicit oscillator,
//! its infimum over a grid, and the closed-form resonance test for
//! trigonometric forcing.

pub mod forcing;
mod scan;

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::angle::{self, check_radius};
use crate::error::{Error, Result};
use crate::special::{c_zero, d_minus, d_plus, threshold_constant, QuadratureRule};

pub use forcing::{FnForcing, Forcing, ForcingRegistry, SampledForcing, TrigForcing};
pub use scan::{inf_scan, CylinderGrid, CylinderPoint, ScanResult};

/// `Φ_p(θ, r)` for `p = a₀ + a₁ cos t + b₁ sin t` through the Fourier
/// coefficients of `ψ`:
///
/// `Φ_p = a₀c₀ + d₊(a₁ cos θ − b₁ sin θ) + i d₋(b₁ cos θ + a₁ sin θ)`.
///
/// This is exactly `(1/2π)∫ p(t − θ) ψ(t, r) dt` with `c₀ = 3r/2` and
/// `d±` the mean-normalised coefficients, so there is no extra `1/2π`.
pub fn phi_p_trig(theta: f64, r: f64, f: &TrigForcing) -> Result<Complex64> {
    check_radius(r)?;
    let (s, c) = theta.sin_cos();
    let re = f.a0 * c_zero(r)? + d_plus(r)? * (f.a1 * c - f.b1 * s);
    let im = d_minus(r)? * (f.b1 * c + f.a1 * s);
    Ok(Complex64::new(re, im))
}

/// `Φ_p(θ, r)` straight from its defining integral, with `rule` placed in
/// the anomaly variable (see [`angle::anomaly_nodes`]). Sampled forcings
/// enter through their periodic linear interpolant.
pub fn phi_p_quadrature(
    theta: f64,
    r: f64,
    f: &dyn Forcing,
    rule: &QuadratureRule,
) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (t, w, z) in angle::anomaly_nodes(r, rule)? {
        acc += z * (w * f.eval(t - theta));
    }
    Ok(acc / TAU)
}

/// Closed form when the forcing is trigonometric, quadrature otherwise.
pub fn phi_p(theta: f64, r: f64, f: &dyn Forcing, rule: &QuadratureRule) -> Result<Complex64> {
    match f.as_trig() {
        Some(trig) => phi_p_trig(theta, r, &trig),
        None => phi_p_quadrature(theta, r, f, rule),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonanceCheck {
    pub holds: bool,
    /// `a₁² + b₁² − 9a₀²/(4K²)` with `K = J₁(1) − J₂(1)`.
    pub margin: f64,
    pub threshold_rhs: f64,
    /// The amplitude `√(a₁² + b₁²)` at which the condition switches,
    /// `3|a₀|/(2K)`.
    pub critical_amplitude: f64,
}

/// Sufficient condition for resonance under trigonometric forcing:
/// `a₁² + b₁² > 9a₀² / (4(J₁(1) − J₂(1))²)`.
pub fn resonance_condition_trig(f: &TrigForcing) -> ResonanceCheck {
    let k = threshold_constant();
    let rhs = 9.0 * f.a0 * f.a0 / (4.0 * k * k);
    let lhs = f.a1 * f.a1 + f.b1 * f.b1;
    ResonanceCheck {
        holds: lhs > rhs,
        margin: lhs - rhs,
        threshold_rhs: rhs,
        critical_amplitude: 3.0 * f.a0.abs() / (2.0 * k),
    }
}

/// `(1/2π) K (√(a₁² + b₁²) − 3|a₀|/(2K))`, a lower bound for `|Φ_p|` on the
/// whole cylinder whenever it is positive.
pub fn phi_p_lower_bound_trig(f: &TrigForcing) -> f64 {
    let k = threshold_constant();
    k * (f.amplitude() - 3.0 * f.a0.abs() / (2.0 * k)) / TAU
}

/// Fourier coefficients `c_m(r)`, `|m| ≤ m_max`, of `t ↦ ψ(t, r)`.
#[derive(Debug, Clone, Serialize)]
pub struct PsiSpectrum {
    pub r: f64,
    pub m_max: usize,
    coeffs: Vec<Complex64>,
}

impl PsiSpectrum {
    pub fn get(&self, m: i64) -> Option<Complex64> {
        let idx = m + self.m_max as i64;
        if idx < 0 {
            return None;
        }
        self.coeffs.get(idx as usize).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let m_max = self.m_max as i64;
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(k, c)| (k as i64 - m_max, *c))
    }

    pub fn d_plus(&self) -> f64 {
        0.5 * (self.get(1).unwrap().re + self.get(-1).unwrap().re)
    }

    pub fn d_minus(&self) -> f64 {
        0.5 * (self.get(1).unwrap().re - self.get(-1).unwrap().re)
    }
}

/// `c_m(r) = (1/2π) ∫ ψ(t, r) e^{−imt} dt` by the periodic trapezoid rule
/// in the anomaly variable.
pub fn fourier_spectrum_psi(r: f64, m_max: usize) -> Result<PsiSpectrum> {
    check_radius(r)?;
    if m_max < 2 {
        return Err(Error::InvalidParameter(format!(
            "m_max must be at least 2, got {m_max}"
        )));
    }
    let n = QuadratureRule::DEFAULT_NODES.max(8 * m_max);
    let nodes = angle::anomaly_nodes(r, &QuadratureRule::trapezoid(n)?)?;
    let coeffs = (-(m_max as i64)..=m_max as i64)
        .map(|m| {
            let sum: Complex64 = nodes
                .iter()
                .map(|&(t, w, z)| z * Complex64::from_polar(w, -(m as f64) * t))
                .sum();
            sum / TAU
        })
        .collect();
    Ok(PsiSpectrum { r, m_max, coeffs })
}
