//! Periodic forcings `p(t)` with period `2π`.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_SAMPLES: usize = 16;

pub trait Forcing: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;

    /// `p(t)`; implementations reduce `t` modulo `2π` as needed.
    fn eval(&self, t: f64) -> f64;

    /// The coefficients when the forcing is `a₀ + a₁ cos t + b₁ sin t`.
    fn as_trig(&self) -> Option<TrigForcing> {
        None
    }
}

/// `p(t) = a₀ + a₁ cos t + b₁ sin t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrigForcing {
    pub a0: f64,
    pub a1: f64,
    pub b1: f64,
}

impl TrigForcing {
    pub fn new(a0: f64, a1: f64, b1: f64) -> Result<Self> {
        if !(a0.is_finite() && a1.is_finite() && b1.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "forcing coefficients must be finite, got ({a0}, {a1}, {b1})"
            )));
        }
        Ok(TrigForcing { a0, a1, b1 })
    }

    pub fn zero() -> Self {
        TrigForcing {
            a0: 0.0,
            a1: 0.0,
            b1: 0.0,
        }
    }

    /// `√(a₁² + b₁²)`.
    pub fn amplitude(&self) -> f64 {
        self.a1.hypot(self.b1)
    }
}

impl Forcing for TrigForcing {
    fn name(&self) -> &str {
        "trig"
    }

    fn eval(&self, t: f64) -> f64 {
        let (s, c) = t.sin_cos();
        self.a0 + self.a1 * c + self.b1 * s
    }

    fn as_trig(&self) -> Option<TrigForcing> {
        Some(*self)
    }
}

/// A forcing known through samples `(t_k, p_k)` over one period,
/// interpolated linearly with periodic wrap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledForcing {
    ts: Vec<f64>,
    ps: Vec<f64>,
}

impl SampledForcing {
    /// Times are reduced modulo `2π` and sorted; a sample at `2π` coincides
    /// with the one at `0` and is dropped.
    pub fn new(samples: &[(f64, f64)]) -> Result<Self> {
        let mut pts: Vec<(f64, f64)> = Vec::with_capacity(samples.len());
        for &(t, p) in samples {
            if !t.is_finite() || !p.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "forcing sample ({t}, {p}) is not finite"
                )));
            }
            pts.push((t.rem_euclid(TAU), p));
        }
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        pts.dedup_by(|b, a| (b.0 - a.0).abs() < 1e-12 || (TAU - b.0) < 1e-12);
        if pts.len() >= 2 && TAU - pts.last().unwrap().0 < 1e-12 {
            pts.pop();
        }
        if pts.len() < MIN_SAMPLES {
            return Err(Error::TooFewSamples(pts.len()));
        }
        let (ts, ps) = pts.into_iter().unzip();
        Ok(SampledForcing { ts, ps })
    }

    /// `n` equispaced samples of `f` on `[0, 2π)`.
    pub fn from_fn<F: Fn(f64) -> f64>(f: F, n: usize) -> Result<Self> {
        let samples: Vec<(f64, f64)> = (0..n)
            .map(|k| {
                let t = TAU * k as f64 / n as f64;
                (t, f(t))
            })
            .collect();
        Self::new(&samples)
    }

    /// Reads a two-column CSV `t, p` (optional header, `#` comments).
    pub fn from_csv(path: &Path) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_path(path)?;
        let mut samples = Vec::new();
        for (line, record) in reader.records().enumerate() {
            let record = record?;
            if record.len() != 2 {
                return Err(Error::Parse(format!(
                    "{}: row {} has {} columns, expected 2",
                    path.display(),
                    line + 1,
                    record.len()
                )));
            }
            let parsed: std::result::Result<Vec<f64>, _> =
                record.iter().map(str::parse::<f64>).collect();
            match parsed {
                Ok(v) => samples.push((v[0], v[1])),
                Err(_) if line == 0 => continue,
                Err(e) => {
                    return Err(Error::Parse(format!(
                        "{}: row {}: {e}",
                        path.display(),
                        line + 1
                    )))
                }
            }
        }
        Self::new(&samples)
    }

    pub fn len(&self) -> usize {
        self.ts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ts.is_empty()
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.ts.iter().copied().zip(self.ps.iter().copied())
    }
}

impl Forcing for SampledForcing {
    fn name(&self) -> &str {
        "sampled"
    }

    fn eval(&self, t: f64) -> f64 {
        let t = t.rem_euclid(TAU);
        let n = self.ts.len();
        let k = self.ts.partition_point(|&tk| tk <= t);
        // bracketing samples, wrapping across 2π
        let (t0, p0, t1, p1) = if k == 0 {
            (self.ts[n - 1] - TAU, self.ps[n - 1], self.ts[0], self.ps[0])
        } else if k == n {
            (self.ts[n - 1], self.ps[n - 1], self.ts[0] + TAU, self.ps[0])
        } else {
            (self.ts[k - 1], self.ps[k - 1], self.ts[k], self.ps[k])
        };
        p0 + (p1 - p0) * (t - t0) / (t1 - t0)
    }
}

/// A forcing given by a closure.
#[derive(Clone)]
pub struct FnForcing {
    name: String,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl FnForcing {
    pub fn new<F>(name: &str, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        FnForcing {
            name: name.to_string(),
            f: Arc::new(f),
        }
    }
}

impl fmt::Debug for FnForcing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FnForcing({})", self.name)
    }
}

impl Forcing for FnForcing {
    fn name(&self) -> &str {
        &self.name
    }

    fn eval(&self, t: f64) -> f64 {
        (self.f)(t)
    }
}

type ForcingCtor = Arc<dyn Fn() -> Arc<dyn Forcing> + Send + Sync>;

/// Named forcing presets.
#[derive(Clone)]
pub struct ForcingRegistry {
    entries: BTreeMap<String, ForcingCtor>,
}

impl ForcingRegistry {
    pub fn empty() -> Self {
        ForcingRegistry {
            entries: BTreeMap::new(),
        }
    }

    pub fn builtin() -> Self {
        let mut reg = Self::empty();
        reg.register("zero", || Arc::new(TrigForcing::zero()));
        reg.register("constant", || {
            Arc::new(TrigForcing {
                a0: 1.0,
                a1: 0.0,
                b1: 0.0,
            })
        });
        reg.register("cos", || {
            Arc::new(TrigForcing {
                a0: 0.0,
                a1: 1.0,
                b1: 0.0,
            })
        });
        reg.register("sin", || {
            Arc::new(TrigForcing {
                a0: 0.0,
                a1: 0.0,
                b1: 1.0,
            })
        });
        reg.register("cos2", || {
            Arc::new(FnForcing::new("cos2", |t: f64| (2.0 * t).cos()))
        });
        reg.register("square", || {
            Arc::new(FnForcing::new("square", |t: f64| {
                if t.rem_euclid(TAU) < std::f64::consts::PI {
                    1.0
                } else {
                    -1.0
                }
            }))
        });
        reg
    }

    pub fn register<F>(&mut self, name: &str, ctor: F)
    where
        F: Fn() -> Arc<dyn Forcing> + Send + Sync + 'static,
    {
        self.entries.insert(name.to_string(), Arc::new(ctor));
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.keys().map(String::as_str).collect()
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn Forcing>> {
        self.entries
            .get(name)
            .map(|ctor| ctor())
            .ok_or_else(|| Error::UnknownName {
                kind: "forcing",
                name: name.to_string(),
                known: self.names().join(", "),
            })
    }
}

impl Default for ForcingRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}
