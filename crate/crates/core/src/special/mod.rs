//! Bessel functions, periodic quadrature and the closed-form Fourier
//! coefficients of the explicit oscillator's variational solution.

pub mod bessel;
pub mod fourier;
pub mod quadrature;

pub use bessel::{bessel_j, j0, j1, j1_over_x, j2};
pub use fourier::{
    c_zero, d_minus, d_plus, d_plus_derivative, threshold_constant, FourierCoefficients,
};
pub use quadrature::{periodic_quadrature, QuadratureKind, QuadratureRule};
