use super::Potential;

/// `V(x) = 1 + x − √(2x+1)` on `(−1/2, 3/2)`, the isochronous potential
/// generated by the Urabe function `S(X) = X`. Its energy ceiling is `1/2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExamplePotential;

impl Potential for ExamplePotential {
    fn name(&self) -> &str {
        "example"
    }

    fn alpha(&self) -> f64 {
        -0.5
    }

    fn beta(&self) -> f64 {
        1.5
    }

    fn vbar(&self) -> f64 {
        0.5
    }

    // (√(2x+1) − 1)²/2, with √(2x+1) − 1 = 2x/(√(2x+1) + 1)
    fn v_unchecked(&self, x: f64) -> f64 {
        let s = (2.0 * x + 1.0).sqrt();
        let u = 2.0 * x / (s + 1.0);
        0.5 * u * u
    }

    fn dv_unchecked(&self, x: f64) -> f64 {
        let s = (2.0 * x + 1.0).sqrt();
        2.0 * x / ((s + 1.0) * s)
    }

    fn d2v_unchecked(&self, x: f64) -> f64 {
        (2.0 * x + 1.0).powf(-1.5)
    }
}
