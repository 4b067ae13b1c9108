//! Low-order Fourier coefficients of the variational solution `ψ(t, r)` of
//! the explicit oscillator, in closed form through Bessel functions.
//!
//! With `ψ(t, r) = Σ c_m(r) e^{imt}` the quantities used by the resonance
//! functional are
//!
//! * `c₀(r)  = (1/2π) ∫ Re ψ dt           = 3r/2`
//! * `d₊(r)  = (c₁ + c₋₁)/2 = (1/2π) ∫ Re ψ cos t dt = J₁(r)/r − J₂(r)`
//! * `d₋(r)  = (c₁ − c₋₁)/2 = (1/2π) ∫ Im ψ sin t dt = (1 + r) J₁(r)/r`
//!
//! The `d₋` expression follows from substituting `t = −θ − r sin θ`,
//! integrating by parts and expanding `cos(θ + r sin θ)` with the
//! Jacobi–Anger identity. It is pinned against quadrature in the tests.

use serde::{Deserialize, Serialize};

use super::bessel::{j0, j1, j1_over_x, j2};
use super::quadrature::QuadratureRule;
use crate::angle;
use crate::error::{Error, Result};

fn check_closed_unit(r: f64) -> Result<()> {
    if (0.0..=1.0).contains(&r) {
        Ok(())
    } else {
        Err(Error::InvalidRadius(r))
    }
}

/// `c₀(r) = 3r/2`.
pub fn c_zero(r: f64) -> Result<f64> {
    check_closed_unit(r)?;
    Ok(1.5 * r)
}

/// `d₊(r) = J₁(r)/r − J₂(r)`, equal to `1/2` at `r = 0`.
///
/// Defined on the closed interval `[0, 1]` so that the endpoint value
/// `J₁(1) − J₂(1)` is reachable.
pub fn d_plus(r: f64) -> Result<f64> {
    check_closed_unit(r)?;
    Ok(j1_over_x(r)? - j2(r)?)
}

/// `d₋(r) = (1 + r) J₁(r)/r`, equal to `1/2` at `r = 0`.
pub fn d_minus(r: f64) -> Result<f64> {
    check_closed_unit(r)?;
    Ok((1.0 + r) * j1_over_x(r)?)
}

/// `d₊′(r) = (2 − r²) J₁(r)/r² − J₀(r)/r` on `(0, 1]`.
///
/// Below `r = 1e-4` the two terms cancel to about `1/r` relative precision,
/// so the term-wise derivative of the `d₊` series is used instead.
pub fn d_plus_derivative(r: f64) -> Result<f64> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::InvalidRadius(r));
    }
    if r < 1e-4 {
        // d₊(r) = 1/2 − 3r²/16 + 5r⁴/384 − …
        return Ok(-0.375 * r + 5.0 / 96.0 * r.powi(3));
    }
    Ok((2.0 - r * r) * j1(r)? / (r * r) - j0(r)? / r)
}

/// `J₁(1) − J₂(1)`: the lower bound of `d₊` on `[0, 1]`, which sets the
/// resonance threshold for trigonometric forcing.
pub fn threshold_constant() -> f64 {
    j1(1.0).unwrap() - j2(1.0).unwrap()
}

/// The coefficients `c₀`, `d₊`, `d₋` at one radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourierCoefficients {
    pub r: f64,
    pub c0: f64,
    pub d_plus: f64,
    pub d_minus: f64,
}

impl FourierCoefficients {
    pub fn closed_form(r: f64) -> Result<Self> {
        Ok(FourierCoefficients {
            r,
            c0: c_zero(r)?,
            d_plus: d_plus(r)?,
            d_minus: d_minus(r)?,
        })
    }

    /// The same coefficients from their defining integrals over `ψ`,
    /// evaluated on [`angle::anomaly_nodes`].
    pub fn by_quadrature(r: f64, rule: &QuadratureRule) -> Result<Self> {
        if r >= 1.0 {
            return Err(Error::InvalidRadius(r));
        }
        let (mut c0, mut dp, mut dm) = (0.0, 0.0, 0.0);
        for (t, w, z) in angle::anomaly_nodes(r, rule)? {
            c0 += w * z.re;
            dp += w * z.re * t.cos();
            dm += w * z.im * t.sin();
        }
        let scale = 1.0 / std::f64::consts::TAU;
        Ok(FourierCoefficients {
            r,
            c0: c0 * scale,
            d_plus: dp * scale,
            d_minus: dm * scale,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from an independent 40-term series in f64
    // (terms summed smallest-first).
    fn oracle_j(n: i32, x: f64) -> f64 {
        let mut terms = Vec::new();
        let mut fact_k = 1.0;
        for k in 0..40 {
            if k > 0 {
                fact_k *= k as f64;
            }
            let fact_kn: f64 = (1..=(k + n)).map(|i| i as f64).product();
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            terms.push(sign * (x / 2.0).powi(2 * k + n) / (fact_k * fact_kn));
        }
        terms.iter().rev().sum()
    }

    #[test]
    fn limits_at_zero() {
        assert_eq!(d_plus(0.0).unwrap(), 0.5);
        assert_eq!(d_minus(0.0).unwrap(), 0.5);
        assert_eq!(c_zero(0.0).unwrap(), 0.0);
        assert!(d_plus_derivative(1e-9).unwrap().abs() < 1e-8);
    }

    #[test]
    fn endpoint_values() {
        let j1_1 = oracle_j(1, 1.0);
        let j2_1 = oracle_j(2, 1.0);
        assert!((d_plus(1.0).unwrap() - (j1_1 - j2_1)).abs() < 1e-15);
        assert!((d_minus(1.0).unwrap() - 2.0 * j1_1).abs() < 1e-15);
        assert!((threshold_constant() - 0.325_147_100_813_033_05).abs() < 1e-15);
        assert!(d_plus_derivative(1.0).unwrap() < 0.0);
    }

    #[test]
    fn c_zero_formula() {
        assert_eq!(c_zero(0.5).unwrap(), 0.75);
        assert!(c_zero(1.01).is_err());
        assert!(c_zero(-0.1).is_err());
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let h = 1e-6;
        for &r in &[0.05, 0.5, 0.9] {
            let fd = (d_plus(r + h).unwrap() - d_plus(r - h).unwrap()) / (2.0 * h);
            assert!((d_plus_derivative(r).unwrap() - fd).abs() < 1e-6);
        }
        // series branch joins the closed form
        let r = 0.999_9e-4;
        let closed = (2.0 - r * r) * j1(r).unwrap() / (r * r) - j0(r).unwrap() / r;
        assert!((d_plus_derivative(r).unwrap() - closed).abs() < 1e-10);
    }

    #[test]
    fn derivative_rejects_zero() {
        assert!(d_plus_derivative(0.0).is_err());
        assert!(d_plus_derivative(1.5).is_err());
    }

    #[test]
    fn quadrature_matches_closed_form() {
        let rule = QuadratureRule::default();
        for &r in &[0.0, 0.25, 0.5, 0.75, 0.99] {
            let q = FourierCoefficients::by_quadrature(r, &rule).unwrap();
            let c = FourierCoefficients::closed_form(r).unwrap();
            assert!((q.c0 - c.c0).abs() < 1e-8, "c0 at {r}");
            assert!((q.d_plus - c.d_plus).abs() < 1e-8, "d+ at {r}");
            assert!((q.d_minus - c.d_minus).abs() < 1e-8, "d- at {r}");
        }
    }
}
