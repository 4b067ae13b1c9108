//! Forced and unforced motion `ẍ + V′(x) = ε p(t)` in a bounded isochronous
//! potential: trajectories, the period map, integrator quality gates and the
//! variational oracle.

mod escape;
pub mod ode;

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angle::{self, check_radius};
use crate::error::{Error, Result};
use crate::potentials::{ExamplePotential, Potential};
use crate::resonance::Forcing;

pub use escape::{
    ball_samples, escape_experiment, CompactRegion, EscapeConfig, EscapeKind, EscapeReport,
    EscapeSummary, SampleRecord,
};
pub use ode::Tolerances;

use ode::{Control, Termination};

/// Distance above `alpha` at which a trajectory is declared to have reached
/// the singularity.
pub const SINGULARITY_GUARD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub x: f64,
    pub v: f64,
    pub t: f64,
}

impl State {
    pub fn new(x: f64, v: f64, t: f64) -> Self {
        State { x, v, t }
    }

    pub fn at_rest(x: f64) -> Self {
        State { x, v: 0.0, t: 0.0 }
    }

    /// Phase-space distance, ignoring time.
    pub fn distance(&self, other: &State) -> f64 {
        (self.x - other.x).hypot(self.v - other.v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StopReason {
    Completed,
    /// Came within [`SINGULARITY_GUARD`] of `alpha`, or the step size
    /// collapsed on the way there.
    Singularity {
        t: f64,
        x: f64,
    },
    /// Left the domain through `beta`.
    DomainExit {
        t: f64,
        x: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub samples: Vec<State>,
    pub stop: StopReason,
}

impl Trajectory {
    pub fn last(&self) -> State {
        *self.samples.last().unwrap()
    }
}

/// The perturbed equation as a first-order system with a domain guard.
#[derive(Clone, Copy)]
pub(crate) struct ForcedSystem<'a> {
    pub potential: &'a dyn Potential,
    pub forcing: &'a dyn Forcing,
    pub epsilon: f64,
}

impl ForcedSystem<'_> {
    fn rhs(&self, t: f64, y: &[f64; 2]) -> Option<[f64; 2]> {
        let x = y[0];
        if !(x > self.potential.alpha() && x < self.potential.beta()) {
            return None;
        }
        let force = if self.epsilon == 0.0 {
            0.0
        } else {
            self.epsilon * self.forcing.eval(t)
        };
        let a = -self.potential.dv_unchecked(x) + force;
        a.is_finite().then_some([y[1], a])
    }

    fn boundary_hit(&self, x: f64) -> Option<StopReason> {
        if x < self.potential.alpha() + SINGULARITY_GUARD {
            Some(StopReason::Singularity { t: f64::NAN, x })
        } else if x > self.potential.beta() - SINGULARITY_GUARD {
            Some(StopReason::DomainExit { t: f64::NAN, x })
        } else {
            None
        }
    }

    /// Runs from `s0` to `t1`, calling `visit` on every accepted state. The
    /// visitor returns `true` to stop early.
    pub(crate) fn run<V>(
        &self,
        s0: State,
        t1: f64,
        tol: &Tolerances,
        mut visit: V,
    ) -> (State, StopReason)
    where
        V: FnMut(&State) -> bool,
    {
        let mut hit: Option<StopReason> = None;
        let out = ode::integrate(
            |t, y| self.rhs(t, y),
            s0.t,
            [s0.x, s0.v],
            t1,
            tol,
            |t, y| {
                let s = State::new(y[0], y[1], t);
                if let Some(reason) = self.boundary_hit(y[0]) {
                    hit = Some(stamp(reason, t));
                    visit(&s);
                    return Control::Stop;
                }
                if visit(&s) {
                    Control::Stop
                } else {
                    Control::Continue
                }
            },
        );
        let last = State::new(out.y[0], out.y[1], out.t);
        let stop = match (hit, out.termination) {
            (Some(reason), _) => reason,
            (None, Termination::Reached) | (None, Termination::Stopped) => StopReason::Completed,
            (None, Termination::Stalled) => {
                let mid = 0.5 * (self.potential.alpha() + self.potential.beta());
                if last.x < mid {
                    StopReason::Singularity {
                        t: last.t,
                        x: last.x,
                    }
                } else {
                    StopReason::DomainExit {
                        t: last.t,
                        x: last.x,
                    }
                }
            }
        };
        (last, stop)
    }
}

fn stamp(reason: StopReason, t: f64) -> StopReason {
    match reason {
        StopReason::Singularity { x, .. } => StopReason::Singularity { t, x },
        StopReason::DomainExit { x, .. } => StopReason::DomainExit { t, x },
        StopReason::Completed => StopReason::Completed,
    }
}

fn check_start(p: &dyn Potential, s0: &State, tol: f64) -> Result<()> {
    p.check_domain(s0.x)?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if !(s0.v.is_finite() && s0.t.is_finite()) {
        return Err(Error::InvalidParameter(
            "initial state must be finite".into(),
        ));
    }
    Ok(())
}

/// Solves `ẋ = v, v̇ = −V′(x) + ε p(t)` from `s0` to `t1`, recording every
/// accepted step. Reaching the singularity ends the trajectory early and is
/// reported in [`Trajectory::stop`].
pub fn integrate(
    s0: State,
    t1: f64,
    epsilon: f64,
    f: &dyn Forcing,
    p: &dyn Potential,
    tol: f64,
) -> Result<Trajectory> {
    check_start(p, &s0, tol)?;
    let sys = ForcedSystem {
        potential: p,
        forcing: f,
        epsilon,
    };
    let mut samples = vec![s0];
    let (_, stop) = sys.run(s0, t1, &Tolerances::new(tol), |s| {
        samples.push(*s);
        false
    });
    Ok(Trajectory { samples, stop })
}

/// The state one period `2π` after `s0`.
pub fn poincare_map(
    s0: State,
    epsilon: f64,
    f: &dyn Forcing,
    p: &dyn Potential,
    tol: f64,
) -> Result<State> {
    check_start(p, &s0, tol)?;
    let sys = ForcedSystem {
        potential: p,
        forcing: f,
        epsilon,
    };
    let (last, stop) = sys.run(s0, s0.t + TAU, &Tolerances::new(tol), |_| false);
    match stop {
        StopReason::Completed => Ok(last),
        StopReason::Singularity { t, x } => Err(Error::SingularityApproach { t, x }),
        StopReason::DomainExit { t, x } => Err(Error::DomainExit { t, x }),
    }
}

/// Largest deviation of `H` from its initial value along the unforced orbit
/// of the explicit oscillator through `(r²/2 + r, 0)`, over `n_periods`.
pub fn energy_drift(r: f64, n_periods: usize, tol: f64) -> Result<f64> {
    check_radius(r)?;
    let p = ExamplePotential;
    let zero = crate::resonance::TrigForcing::zero();
    let s0 = State::at_rest(angle::initial_position(r));
    check_start(&p, &s0, tol)?;
    let h0 = 0.5 * s0.v * s0.v + p.v_unchecked(s0.x);
    let sys = ForcedSystem {
        potential: &p,
        forcing: &zero,
        epsilon: 0.0,
    };
    let mut drift: f64 = 0.0;
    let (_, stop) = sys.run(s0, TAU * n_periods as f64, &Tolerances::new(tol), |s| {
        let h = 0.5 * s.v * s.v + p.v_unchecked(s.x);
        drift = drift.max((h - h0).abs());
        false
    });
    match stop {
        StopReason::Completed => Ok(drift),
        StopReason::Singularity { t, x } => Err(Error::SingularityApproach { t, x }),
        StopReason::DomainExit { t, x } => Err(Error::DomainExit { t, x }),
    }
}

/// Numerical solution of `ÿ + V″(φ(t, r)) y = 0`, `y(0) = 1 + r`,
/// `ẏ(0) = i`, along the explicit oscillator's orbit, sampled on `t_grid`.
///
/// The orbit `φ` is integrated alongside `y` rather than taken from the
/// angle solver, so the result is independent of the closed form of `ψ`.
pub fn variational_solution(r: f64, t_grid: &[f64], tol: f64) -> Result<Vec<Complex64>> {
    check_radius(r)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if t_grid.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(Error::InvalidParameter(
            "t_grid must hold finite, non-negative times".into(),
        ));
    }
    let p = ExamplePotential;
    let tols = Tolerances::new(tol);
    // state: x, ẋ, Re y, Re ẏ, Im y, Im ẏ
    let rhs = |_t: f64, s: &[f64; 6]| -> Option<[f64; 6]> {
        let x = s[0];
        if !(x > p.alpha() && x < p.beta()) {
            return None;
        }
        let k = p.d2v_unchecked(x);
        Some([s[1], -p.dv_unchecked(x), s[3], -k * s[2], s[5], -k * s[4]])
    };

    let mut order: Vec<usize> = (0..t_grid.len()).collect();
    order.sort_by(|&a, &b| t_grid[a].total_cmp(&t_grid[b]));
    let mut out = vec![Complex64::new(0.0, 0.0); t_grid.len()];
    let mut t = 0.0;
    let mut y = [angle::initial_position(r), 0.0, 1.0 + r, 0.0, 0.0, 1.0];
    for idx in order {
        let target = t_grid[idx];
        if target > t {
            let res = ode::integrate(rhs, t, y, target, &tols, |_, _| Control::Continue);
            if res.termination != Termination::Reached {
                return Err(Error::StepUnderflow(res.t));
            }
            t = target;
            y = res.y;
        }
        out[idx] = Complex64::new(y[2], y[4]);
    }
    Ok(out)
}
