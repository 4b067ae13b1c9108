//! Dormand–Prince 5(4) with PI step-size control (Hairer–Wanner `DOPRI5`
//! coefficients and controller constants).
//!
//! The right-hand side may refuse a stage point by returning `None` (e.g. a
//! position beyond the singularity); the step is then retried with a smaller
//! size. Every accepted step is reported to an observer that can stop the
//! integration.

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// 5th-order weights minus embedded 4th-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const BETA: f64 = 0.04;
const EXPO1: f64 = 0.2 - BETA * 0.75;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    pub h_min: f64,
    pub h_max: f64,
}

impl Tolerances {
    pub const DEFAULT_TOL: f64 = 1e-10;
    pub const DEFAULT_H_MIN: f64 = 1e-13;

    pub fn new(tol: f64) -> Self {
        Tolerances {
            rtol: tol,
            atol: tol,
            h_min: Self::DEFAULT_H_MIN,
            h_max: 0.5,
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::new(Self::DEFAULT_TOL)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Reached the final time.
    Reached,
    /// The observer asked to stop.
    Stopped,
    /// The step size fell below `h_min`.
    Stalled,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outcome<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
    pub termination: Termination,
    pub accepted: usize,
    pub rejected: usize,
}

#[inline]
fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for i in 0..N {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        out[i] += h * acc;
    }
    out
}

/// Integrates `y′ = f(t, y)` from `t0` to `t1 > t0`.
pub fn integrate<const N: usize, F, O>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    tol: &Tolerances,
    mut observer: O,
) -> Outcome<N>
where
    F: FnMut(f64, &[f64; N]) -> Option<[f64; N]>,
    O: FnMut(f64, &[f64; N]) -> Control,
{
    let mut t = t0;
    let mut y = y0;
    let mut accepted = 0;
    let mut rejected = 0;
    let done = |t: f64, y: [f64; N], termination, accepted, rejected| Outcome {
        t,
        y,
        termination,
        accepted,
        rejected,
    };
    if !(t1 > t0) {
        return done(t, y, Termination::Reached, 0, 0);
    }
    let mut k1 = match f(t, &y) {
        Some(k) => k,
        None => return done(t, y, Termination::Stalled, 0, 0),
    };
    let mut h = initial_step(&y, &k1, tol).min(tol.h_max).min(t1 - t0);
    let mut err_old: f64 = 1e-4;
    let mut last_rejected = false;

    loop {
        let remaining = t1 - t;
        let last = h >= remaining * (1.0 - 1e-12);
        if last {
            h = remaining;
        }
        if h < tol.h_min && !last {
            return done(t, y, Termination::Stalled, accepted, rejected);
        }

        let trial = (|| {
            let k2 = f(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]))?;
            let k3 = f(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]))?;
            let k4 = f(
                t + C4 * h,
                &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
            )?;
            let k5 = f(
                t + C5 * h,
                &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            )?;
            let k6 = f(
                t + h,
                &axpy(
                    &y,
                    h,
                    &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                ),
            )?;
            let y_new = axpy(
                &y,
                h,
                &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
            );
            let k7 = f(t + h, &y_new)?;
            let mut err = 0.0;
            for i in 0..N {
                let e = h
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = tol.atol + tol.rtol * y[i].abs().max(y_new[i].abs());
                err += (e / sc) * (e / sc);
            }
            Some((y_new, k7, (err / N as f64).sqrt()))
        })();

        match trial {
            Some((y_new, k7, err)) if err <= 1.0 && err.is_finite() => {
                let fac11 = err.max(1e-300).powf(EXPO1);
                let mut fac = fac11 / err_old.powf(BETA);
                fac = (fac / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
                let mut h_new = h / fac;
                if last_rejected {
                    h_new = h_new.min(h);
                }
                err_old = err.max(1e-4);
                t = if last { t1 } else { t + h };
                y = y_new;
                k1 = k7;
                accepted += 1;
                last_rejected = false;
                if observer(t, &y) == Control::Stop {
                    return done(t, y, Termination::Stopped, accepted, rejected);
                }
                if last {
                    return done(t, y, Termination::Reached, accepted, rejected);
                }
                h = h_new.min(tol.h_max);
            }
            Some((_, _, err)) if err.is_finite() => {
                let fac11 = err.powf(EXPO1);
                h /= (fac11 / SAFETY).min(1.0 / FAC_MIN);
                rejected += 1;
                last_rejected = true;
            }
            _ => {
                // a stage left the domain or produced non-finite values
                h *= 0.25;
                rejected += 1;
                last_rejected = true;
            }
        }
        if h < tol.h_min {
            return done(t, y, Termination::Stalled, accepted, rejected);
        }
    }
}

// Hairer's starting step heuristic, without the extra f evaluation.
fn initial_step<const N: usize>(y: &[f64; N], dy: &[f64; N], tol: &Tolerances) -> f64 {
    let mut dnf = 0.0;
    let mut dny = 0.0;
    for i in 0..N {
        let sk = tol.atol + tol.rtol * y[i].abs();
        dnf += (dy[i] / sk).powi(2);
        dny += (y[i] / sk).powi(2);
    }
    let h = if dnf <= 1e-10 || dny <= 1e-10 {
        1e-6
    } else {
        (dny / dnf).sqrt() * 0.01
    };
    h.max(tol.h_min * 10.0)
}
