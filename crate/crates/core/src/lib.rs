//! Resonance in forced bounded isochronous oscillators.
//!
//! The crate builds isochronous potentials with a weak singularity (the
//! explicit `V(x) = 1 + x − √(2x+1)` and numerically from Urabe functions),
//! solves the Kepler-like angle equation of the explicit example, evaluates
//! the resonance functional `Φ_p` on the cylinder, checks the closed-form
//! resonance condition for trigonometric forcing, and runs ensemble escape
//! experiments for `ẍ + V′(x) = ε p(t)`.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod angle;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod interp;
pub mod potentials;
pub mod resonance;
pub mod special;

pub use error::{Error, Result};
