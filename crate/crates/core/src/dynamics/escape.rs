//! Ensemble escape experiment: does a ball of initial conditions inside an
//! energy band leave the band under the forced flow?

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ForcedSystem, State, StopReason, Tolerances};
use crate::error::{Error, Result};
use crate::potentials::{Potential, PotentialInfo};
use crate::resonance::{resonance_condition_trig, Forcing, ResonanceCheck, TrigForcing};

/// The energy band `{h_min ≤ H(x, v) ≤ h_max}` of the period annulus.
/// With `h_min = 0` it is the closed sublevel disk `H ≤ h_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompactRegion {
    pub h_min: f64,
    pub h_max: f64,
}

impl CompactRegion {
    pub fn new(h_min: f64, h_max: f64, vbar: f64) -> Result<Self> {
        let region = CompactRegion { h_min, h_max };
        let problems = region.violations(vbar);
        if problems.is_empty() {
            Ok(region)
        } else {
            Err(Error::InvalidParameter(problems.join("; ")))
        }
    }

    pub fn sublevel(h_max: f64, vbar: f64) -> Result<Self> {
        Self::new(0.0, h_max, vbar)
    }

    pub fn violations(&self, vbar: f64) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.h_min >= 0.0) {
            out.push(format!("h_min must be non-negative, got {}", self.h_min));
        }
        if !(self.h_max > self.h_min) {
            out.push(format!(
                "h_max must exceed h_min, got h_min = {}, h_max = {}",
                self.h_min, self.h_max
            ));
        }
        if !(self.h_max < vbar) {
            out.push(format!(
                "h_max must stay below the energy ceiling {vbar}, got {}",
                self.h_max
            ));
        }
        out
    }

    pub fn contains_energy(&self, h: f64) -> bool {
        h >= self.h_min && h <= self.h_max
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EscapeConfig {
    pub region: CompactRegion,
    /// Centre of the ball in the `(x, v)` plane; its time is the start time.
    pub ball_center: State,
    pub ball_diameter: f64,
    pub n_samples: usize,
    pub epsilon: f64,
    pub max_periods: usize,
    pub tol: f64,
    /// Offset into the low-discrepancy sequence.
    pub seed: u64,
}

impl EscapeConfig {
    pub const DEFAULT_SAMPLES: usize = 64;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EscapeKind {
    /// The energy left the band.
    EnergyBand,
    /// The trajectory reached the singularity.
    Singularity,
    /// The trajectory left the domain through its right end.
    DomainExit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub index: usize,
    pub initial: State,
    pub escaped: bool,
    pub escape_time: Option<f64>,
    pub escape_kind: Option<EscapeKind>,
    pub final_state: State,
    pub final_energy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EscapeSummary {
    pub n_samples: usize,
    pub n_escaped: usize,
    pub fraction_escaped: f64,
    /// At least one sample left the region, so the ball is not contained.
    pub ball_escaped: bool,
    pub min_escape_time: Option<f64>,
    pub median_escape_time: Option<f64>,
    pub max_escape_time: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EscapeReport {
    pub experiment: EscapeConfig,
    pub potential: PotentialInfo,
    pub forcing: String,
    pub trig_coefficients: Option<TrigForcing>,
    pub resonance_condition: Option<ResonanceCheck>,
    pub samples: Vec<SampleRecord>,
    pub summary: EscapeSummary,
    pub note: &'static str,
}

const WITNESS_NOTE: &str = "escape is decided on a finite sample of the ball: an escaped \
verdict is certain, a trapped verdict only means no sampled point left the region";

fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let mut result = 0.0;
    let mut frac = 1.0 / base as f64;
    while index > 0 {
        result += (index % base) as f64 * frac;
        index /= base;
        frac /= base as f64;
    }
    result
}

/// The centre followed by `n − 1` Halton points (bases 2 and 3, starting
/// after index `seed`) mapped uniformly onto the open disk of the given
/// diameter.
pub fn ball_samples(center: State, diameter: f64, n: usize, seed: u64) -> Vec<State> {
    let radius = 0.5 * diameter;
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    out.push(center);
    for k in 1..n as u64 {
        let idx = seed + k;
        let u = radical_inverse(idx, 2);
        let w = radical_inverse(idx, 3);
        let rho = radius * u.sqrt() * (1.0 - 1e-12);
        let (s, c) = (TAU * w).sin_cos();
        out.push(State::new(center.x + rho * c, center.v + rho * s, center.t));
    }
    out
}

fn energy(p: &dyn Potential, s: &State) -> Option<f64> {
    (s.x > p.alpha() && s.x < p.beta()).then(|| 0.5 * s.v * s.v + p.v_unchecked(s.x))
}

fn validate(cfg: &EscapeConfig, p: &dyn Potential) -> Result<()> {
    let mut problems = cfg.region.violations(p.vbar());
    if cfg.n_samples < 1 {
        problems.push("n_samples must be at least 1".into());
    }
    if cfg.max_periods < 1 {
        problems.push("max_periods must be at least 1".into());
    }
    if !(cfg.ball_diameter > 0.0 && cfg.ball_diameter.is_finite()) {
        problems.push(format!(
            "ball_diameter must be positive, got {}",
            cfg.ball_diameter
        ));
    }
    if !(cfg.tol > 0.0 && cfg.tol.is_finite()) {
        problems.push(format!("tol must be positive, got {}", cfg.tol));
    }
    if !cfg.epsilon.is_finite() {
        problems.push(format!("epsilon must be finite, got {}", cfg.epsilon));
    }
    if problems.is_empty() {
        // the closed ball must sit inside the region
        let c = cfg.ball_center;
        let rad = 0.5 * cfg.ball_diameter;
        let inside = std::iter::once(c)
            .chain((0..360).map(|k| {
                let (s, co) = (TAU * k as f64 / 360.0).sin_cos();
                State::new(c.x + rad * co, c.v + rad * s, c.t)
            }))
            .all(|s| energy(p, &s).is_some_and(|h| cfg.region.contains_energy(h)));
        if !inside {
            problems.push(format!(
                "ball of diameter {} at ({}, {}) is not inside the region {} <= H <= {}",
                cfg.ball_diameter, c.x, c.v, cfg.region.h_min, cfg.region.h_max
            ));
        }
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(problems.join("; ")))
    }
}

/// Follows every sampled initial condition for up to `max_periods` periods
/// and records when it first leaves the energy band. The energy is checked
/// at every accepted integrator step. Reaching the singularity counts as
/// escape.
pub fn escape_experiment(
    cfg: &EscapeConfig,
    f: &dyn Forcing,
    p: &dyn Potential,
) -> Result<EscapeReport> {
    validate(cfg, p)?;
    let tols = Tolerances::new(cfg.tol);
    let sys = ForcedSystem {
        potential: p,
        forcing: f,
        epsilon: cfg.epsilon,
    };
    let t_end = cfg.ball_center.t + TAU * cfg.max_periods as f64;
    let starts = ball_samples(cfg.ball_center, cfg.ball_diameter, cfg.n_samples, cfg.seed);

    let samples: Vec<SampleRecord> = starts
        .par_iter()
        .enumerate()
        .map(|(index, &s0)| {
            let mut exit: Option<State> = None;
            let (last, stop) = sys.run(s0, t_end, &tols, |s| match energy(p, s) {
                Some(h) if cfg.region.contains_energy(h) => false,
                _ => {
                    exit = Some(*s);
                    true
                }
            });
            let (escaped, kind, time) = match (stop, exit) {
                (StopReason::Singularity { t, .. }, _) => {
                    (true, Some(EscapeKind::Singularity), Some(t))
                }
                (StopReason::DomainExit { t, .. }, _) => {
                    (true, Some(EscapeKind::DomainExit), Some(t))
                }
                (StopReason::Completed, Some(s)) => (true, Some(EscapeKind::EnergyBand), Some(s.t)),
                (StopReason::Completed, None) => (false, None, None),
            };
            SampleRecord {
                index,
                initial: s0,
                escaped,
                escape_time: time.map(|t| t - s0.t),
                escape_kind: kind,
                final_state: last,
                final_energy: energy(p, &last),
            }
        })
        .collect();

    let summary = summarize(&samples);
    let trig = f.as_trig();
    Ok(EscapeReport {
        experiment: cfg.clone(),
        potential: PotentialInfo::of(p),
        forcing: f.name().to_string(),
        trig_coefficients: trig,
        resonance_condition: trig.as_ref().map(resonance_condition_trig),
        samples,
        summary,
        note: WITNESS_NOTE,
    })
}

fn summarize(samples: &[SampleRecord]) -> EscapeSummary {
    let mut times: Vec<f64> = samples.iter().filter_map(|s| s.escape_time).collect();
    times.sort_by(f64::total_cmp);
    let n = samples.len();
    let k = times.len();
    let median = match k {
        0 => None,
        _ if k % 2 == 1 => Some(times[k / 2]),
        _ => Some(0.5 * (times[k / 2 - 1] + times[k / 2])),
    };
    EscapeSummary {
        n_samples: n,
        n_escaped: k,
        fraction_escaped: if n == 0 { 0.0 } else { k as f64 / n as f64 },
        ball_escaped: k > 0,
        min_escape_time: times.first().copied(),
        median_escape_time: median,
        max_escape_time: times.last().copied(),
    }
}
