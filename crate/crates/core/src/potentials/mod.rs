//! Bounded isochronous potentials with a weak singularity at the left end
//! of their domain.
//!
//! Every potential is exposed through the [`Potential`] trait so that the
//! dynamics and the CLI can work with the explicit example and with
//! numerically constructed Urabe potentials interchangeably. Concrete
//! potentials are selected by name through [`PotentialRegistry`].

mod example;
mod registry;
pub mod urabe;

use std::f64::consts::TAU;
use std::fmt::Debug;

use serde::Serialize;

use crate::error::{Error, Result};

pub use example::ExamplePotential;
pub use registry::PotentialRegistry;
pub use urabe::{
    urabe_build, urabe_verify, UrabeCheck, UrabeFunction, UrabePotential, UrabeRegistry,
    UrabeReport, UrabeShape,
};

/// Evaluators accept `x ∈ [alpha + DOMAIN_MARGIN, beta − DOMAIN_MARGIN]`.
pub const DOMAIN_MARGIN: f64 = 1e-12;

pub trait Potential: Debug + Send + Sync {
    fn name(&self) -> &str;

    /// Left endpoint, where `V′ → −∞`.
    fn alpha(&self) -> f64;

    fn beta(&self) -> f64;

    /// Common limit of `V` at both endpoints.
    fn vbar(&self) -> f64;

    /// Period of every orbit in the period annulus.
    fn period(&self) -> f64 {
        TAU
    }

    /// `V`, `V′`, `V″` without the domain check. Callers must keep `x`
    /// inside `(alpha, beta)`.
    fn v_unchecked(&self, x: f64) -> f64;
    fn dv_unchecked(&self, x: f64) -> f64;
    fn d2v_unchecked(&self, x: f64) -> f64;

    fn check_domain(&self, x: f64) -> Result<()> {
        let (a, b) = (self.alpha(), self.beta());
        if x >= a + DOMAIN_MARGIN && x <= b - DOMAIN_MARGIN {
            Ok(())
        } else {
            Err(Error::Domain {
                x,
                alpha: a,
                beta: b,
            })
        }
    }

    fn v(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(self.v_unchecked(x))
    }

    fn dv(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(self.dv_unchecked(x))
    }

    fn d2v(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(self.d2v_unchecked(x))
    }
}

/// Energy `v²/2 + V(x)`.
pub fn hamiltonian(p: &dyn Potential, x: f64, v: f64) -> Result<f64> {
    Ok(0.5 * v * v + p.v(x)?)
}

/// Summary of a potential's shape, echoed in reports.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct PotentialInfo {
    pub name: String,
    pub alpha: f64,
    pub beta: f64,
    pub vbar: f64,
    pub period: f64,
}

impl PotentialInfo {
    pub fn of(p: &dyn Potential) -> Self {
        PotentialInfo {
            name: p.name().to_string(),
            alpha: p.alpha(),
            beta: p.beta(),
            vbar: p.vbar(),
            period: p.period(),
        }
    }
}

/// One violated potential invariant, with the sample that exposed it.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct InvariantViolation {
    pub invariant: &'static str,
    pub x: f64,
    pub value: f64,
}

/// Checks the structural invariants of a bounded isochronous potential on an
/// `n`-point grid and at the endpoints. Returns every violation found.
pub fn check_invariants(p: &dyn Potential, n: usize) -> Vec<InvariantViolation> {
    let mut out = Vec::new();
    let (a, b, vbar) = (p.alpha(), p.beta(), p.vbar());

    let v0 = p.v_unchecked(0.0);
    if v0.abs() > 1e-12 {
        out.push(InvariantViolation {
            invariant: "V(0) = 0",
            x: 0.0,
            value: v0,
        });
    }
    let dv0 = p.dv_unchecked(0.0);
    if dv0.abs() > 1e-10 {
        out.push(InvariantViolation {
            invariant: "V'(0) = 0",
            x: 0.0,
            value: dv0,
        });
    }

    let lo = a + 1e-9;
    let hi = b - 1e-9;
    for k in 0..n {
        let x = lo + (hi - lo) * (k as f64 + 0.5) / n as f64;
        if x == 0.0 {
            continue;
        }
        let xdv = x * p.dv_unchecked(x);
        if !(xdv > 0.0) {
            out.push(InvariantViolation {
                invariant: "x V'(x) > 0",
                x,
                value: xdv,
            });
        }
    }

    let delta = 1e-6;
    for x in [a + delta, b - delta] {
        let gap = (p.v_unchecked(x) - vbar).abs();
        let allowed = 4.0 * p.dv_unchecked(x).abs() * delta + 1e-12;
        if gap > allowed {
            out.push(InvariantViolation {
                invariant: "V -> Vbar at the endpoints",
                x,
                value: gap,
            });
        }
    }

    let x = a + 1e-8;
    let slope = p.dv_unchecked(x);
    if !(slope < -1e2) {
        out.push(InvariantViolation {
            invariant: "V'(x) -> -inf at alpha",
            x,
            value: slope,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamiltonian_examples() {
        let p = ExamplePotential;
        assert_eq!(hamiltonian(&p, 0.0, 0.0).unwrap(), 0.0);
        let h = hamiltonian(&p, 0.0, 1.0 - 1e-9).unwrap();
        assert!(h < 0.5 && h > 0.5 - 1e-8);
        let h = hamiltonian(&p, 1.5 - 1e-9, 0.0).unwrap();
        assert!((h - 0.5).abs() < 1e-4);
        assert!(hamiltonian(&p, 1.5, 0.0).is_err());
        assert!(hamiltonian(&p, -0.6, 0.0).is_err());
    }

    #[test]
    fn example_satisfies_invariants() {
        assert!(check_invariants(&ExamplePotential, 1000).is_empty());
    }
}
