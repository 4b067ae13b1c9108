use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureKind {
    PeriodicTrapezoid,
    Simpson,
}

/// A rule for integrating over one period `[0, 2π]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureRule {
    n_nodes: usize,
    kind: QuadratureKind,
}

impl QuadratureRule {
    pub const DEFAULT_NODES: usize = 512;

    pub fn new(n_nodes: usize, kind: QuadratureKind) -> Result<Self> {
        if n_nodes < 8 {
            return Err(Error::InvalidRule(format!(
                "need at least 8 nodes, got {n_nodes}"
            )));
        }
        if kind == QuadratureKind::Simpson && !n_nodes.is_multiple_of(2) {
            return Err(Error::InvalidRule(format!(
                "Simpson needs an even number of intervals, got {n_nodes}"
            )));
        }
        Ok(QuadratureRule { n_nodes, kind })
    }

    pub fn trapezoid(n_nodes: usize) -> Result<Self> {
        Self::new(n_nodes, QuadratureKind::PeriodicTrapezoid)
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn kind(&self) -> QuadratureKind {
        self.kind
    }

    /// Node abscissae and weights on `[0, 2π]`.
    ///
    /// The periodic trapezoid uses `n` equispaced nodes `2πk/n` with equal
    /// weights (the endpoint `2π` is identified with `0`). Simpson uses
    /// `n` intervals, i.e. `n + 1` nodes including both endpoints.
    pub fn nodes(&self) -> Vec<(f64, f64)> {
        let n = self.n_nodes;
        let h = TAU / n as f64;
        match self.kind {
            QuadratureKind::PeriodicTrapezoid => (0..n).map(|k| (k as f64 * h, h)).collect(),
            QuadratureKind::Simpson => (0..=n)
                .map(|k| {
                    let w = if k == 0 || k == n {
                        1.0
                    } else if k % 2 == 1 {
                        4.0
                    } else {
                        2.0
                    };
                    (k as f64 * h, w * h / 3.0)
                })
                .collect(),
        }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes().into_iter().map(|(t, w)| w * f(t)).sum()
    }
}

impl Default for QuadratureRule {
    fn default() -> Self {
        QuadratureRule {
            n_nodes: Self::DEFAULT_NODES,
            kind: QuadratureKind::PeriodicTrapezoid,
        }
    }
}

/// `∫₀^{2π} f(t) dt` under `rule`.
pub fn periodic_quadrature<F: FnMut(f64) -> f64>(f: F, rule: &QuadratureRule) -> f64 {
    rule.integrate(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn constant_and_cos_squared() {
        let rule = QuadratureRule::default();
        assert!((periodic_quadrature(|_| 1.0, &rule) - TAU).abs() < 1e-13);
        assert!((periodic_quadrature(|t| t.cos().powi(2), &rule) - PI).abs() < 1e-13);
        let simpson = QuadratureRule::new(64, QuadratureKind::Simpson).unwrap();
        assert!((periodic_quadrature(|_| 1.0, &simpson) - TAU).abs() < 1e-13);
        assert!((periodic_quadrature(|t| t.cos().powi(2), &simpson) - PI).abs() < 1e-12);
    }

    #[test]
    fn trapezoid_is_spectral_for_periodic_integrands() {
        // ∫ exp(cos t) dt = 2π I0(1)
        let exact = TAU * 1.266_065_877_752_008_4;
        let rule = QuadratureRule::trapezoid(16).unwrap();
        assert!((periodic_quadrature(|t| t.cos().exp(), &rule) - exact).abs() < 1e-13);
    }

    #[test]
    fn rule_validation() {
        assert!(QuadratureRule::trapezoid(7).is_err());
        assert!(QuadratureRule::new(9, QuadratureKind::Simpson).is_err());
        assert!(QuadratureRule::new(10, QuadratureKind::Simpson).is_ok());
    }
}
