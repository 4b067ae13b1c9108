//! Piecewise cubic Hermite interpolation with shape-preserving slopes.

use crate::error::{Error, Result};

/// Monotone piecewise cubic (Fritsch–Carlson slopes) through `(x_k, y_k)`.
/// The interpolant is C¹; outside the node range it is clamped to the
/// end values.
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        let n = xs.len();
        if n < 2 || ys.len() != n {
            return Err(Error::InvalidParameter(format!(
                "interpolation needs matching tables of at least 2 points, got {} and {}",
                xs.len(),
                ys.len()
            )));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter(
                "interpolation nodes must be strictly increasing".into(),
            ));
        }
        let secants: Vec<f64> = (0..n - 1)
            .map(|k| (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k]))
            .collect();
        let mut slopes = vec![0.0; n];
        slopes[0] = secants[0];
        slopes[n - 1] = secants[n - 2];
        for k in 1..n - 1 {
            let (a, b) = (secants[k - 1], secants[k]);
            if a * b <= 0.0 {
                slopes[k] = 0.0;
            } else {
                let h0 = xs[k] - xs[k - 1];
                let h1 = xs[k + 1] - xs[k];
                let w0 = 2.0 * h1 + h0;
                let w1 = h1 + 2.0 * h0;
                slopes[k] = (w0 + w1) / (w0 / a + w1 / b);
            }
        }
        Ok(MonotoneCubic { xs, ys, slopes })
    }

    pub fn x_range(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }

    fn segment(&self, x: f64) -> usize {
        let k = self.xs.partition_point(|&xk| xk <= x);
        k.saturating_sub(1).min(self.xs.len() - 2)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (lo, hi) = self.x_range();
        let x = x.clamp(lo, hi);
        let k = self.segment(x);
        hermite(
            self.xs[k],
            self.xs[k + 1],
            self.ys[k],
            self.ys[k + 1],
            self.slopes[k],
            self.slopes[k + 1],
            x,
        )
        .0
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let (lo, hi) = self.x_range();
        if x < lo || x > hi {
            return 0.0;
        }
        let k = self.segment(x);
        hermite(
            self.xs[k],
            self.xs[k + 1],
            self.ys[k],
            self.ys[k + 1],
            self.slopes[k],
            self.slopes[k + 1],
            x,
        )
        .1
    }
}

/// Value and derivative of the cubic Hermite interpolant on `[x0, x1]`.
pub(crate) fn hermite(x0: f64, x1: f64, y0: f64, y1: f64, m0: f64, m1: f64, x: f64) -> (f64, f64) {
    let h = x1 - x0;
    let s = (x - x0) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    let value = h00 * y0 + h10 * h * m0 + h01 * y1 + h11 * h * m1;
    let d00 = (6.0 * s2 - 6.0 * s) / h;
    let d10 = 3.0 * s2 - 4.0 * s + 1.0;
    let d01 = (-6.0 * s2 + 6.0 * s) / h;
    let d11 = 3.0 * s2 - 2.0 * s;
    let deriv = d00 * y0 + d10 * m0 + d01 * y1 + d11 * m1;
    (value, deriv)
}
