//! Bessel functions of the first kind, orders 0 to 2, by power series.
//!
//! The resonance analysis only ever evaluates these on `[0, 1]`, where the
//! alternating series converges in a handful of terms with no cancellation
//! worth mentioning. Arguments up to `|x| = 30` are accepted.

use crate::error::{Error, Result};

/// Largest argument magnitude accepted by the series evaluators.
pub const SERIES_LIMIT: f64 = 30.0;

const MAX_TERMS: usize = 200;

/// `J_n(x)` for `n ∈ {0, 1, 2}`.
pub fn bessel_j(n: u32, x: f64) -> Result<f64> {
    if n > 2 {
        return Err(Error::BesselOrder(n));
    }
    if !(x.abs() <= SERIES_LIMIT) {
        return Err(Error::BesselRange(x.abs()));
    }
    Ok(series(n, x))
}

pub fn j0(x: f64) -> Result<f64> {
    bessel_j(0, x)
}

pub fn j1(x: f64) -> Result<f64> {
    bessel_j(1, x)
}

pub fn j2(x: f64) -> Result<f64> {
    bessel_j(2, x)
}

/// `J_1(x) / x`, continuous through `x = 0` where it equals `1/2`.
pub fn j1_over_x(x: f64) -> Result<f64> {
    if !(x.abs() <= SERIES_LIMIT) {
        return Err(Error::BesselRange(x.abs()));
    }
    // J1(x)/x = 1/2 * sum_k (-1)^k (x/2)^{2k} / (k! (k+1)!)
    let q = -0.25 * x * x;
    let mut term = 0.5;
    let mut sum = term;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        term *= q / (kf * (kf + 1.0));
        sum += term;
        if term.abs() < 1e-16 * sum.abs() {
            break;
        }
    }
    Ok(sum)
}

// sum_k (-1)^k (x/2)^{2k+n} / (k! (k+n)!)
fn series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let nf = n as f64;
    let mut term = half.powi(n as i32) / factorial(n);
    if term == 0.0 {
        return 0.0;
    }
    let q = -half * half;
    let mut sum = term;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        term *= q / (kf * (kf + nf));
        sum += term;
        if term.abs() < 1e-16 * sum.abs() {
            break;
        }
    }
    sum
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_zero() {
        assert_eq!(j0(0.0).unwrap(), 1.0);
        assert_eq!(j1(0.0).unwrap(), 0.0);
        assert_eq!(j2(0.0).unwrap(), 0.0);
        assert_eq!(j1_over_x(0.0).unwrap(), 0.5);
    }

    #[test]
    fn rejects_large_arguments_and_orders() {
        assert!(matches!(j0(30.5), Err(Error::BesselRange(_))));
        assert!(matches!(j1(f64::NAN), Err(Error::BesselRange(_))));
        assert!(matches!(bessel_j(3, 1.0), Err(Error::BesselOrder(3))));
    }

    #[test]
    fn odd_and_even_symmetry() {
        for &x in &[0.3, 1.7, 5.0] {
            assert_eq!(j0(-x).unwrap(), j0(x).unwrap());
            assert_eq!(j1(-x).unwrap(), -j1(x).unwrap());
            assert_eq!(j2(-x).unwrap(), j2(x).unwrap());
        }
    }

    #[test]
    fn moderate_arguments_match_tabulated_zeros() {
        // first zeros of J0 and J1
        assert!(j0(2.404_825_557_695_773).unwrap().abs() < 1e-14);
        assert!(j1(3.831_705_970_207_512).unwrap().abs() < 1e-14);
        assert!(j2(5.135_622_301_840_683).unwrap().abs() < 1e-13);
    }

    #[test]
    fn j1_over_x_agrees_with_quotient() {
        for i in 1..=20 {
            let x = 0.05 * i as f64;
            let direct = j1(x).unwrap() / x;
            assert!((j1_over_x(x).unwrap() - direct).abs() < 1e-15);
        }
    }
}
