//! Isochronous potentials from Urabe functions.
//!
//! An odd function `S` with `|S| < 1` on `J = (−w, w)` and `S(−w) = −1`
//! generates, through `dX/dx = 1/(1 + S(X))`, `X(0) = 0`, a potential
//! `V(x) = X(x)²/2` whose orbits all have period `2π` and whose period
//! annulus is bounded with energy ceiling `w²/2`.
//!
//! The construction integrates the inverse relation `dx/dX = 1 + S(X)`,
//! which stays bounded all the way to `X = ±w`, and inverts the resulting
//! monotone table with cubic Hermite segments.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::Serialize;

use super::Potential;
use crate::error::{Error, Result};
use crate::interp::{hermite, MonotoneCubic};

pub const DEFAULT_GRID_STEP: f64 = 1e-4;

/// An odd shape function `S` for the Urabe construction.
pub trait UrabeShape: Send + Sync {
    fn name(&self) -> &str;

    fn s(&self, x: f64) -> f64;

    /// `S′(X)` when known in closed form.
    fn ds(&self, _x: f64) -> Option<f64> {
        None
    }

    /// The negative point `A` with `S(A) = −1`, which also fixes the
    /// half-width `w = −A` of the interval `J`.
    fn boundary_root(&self) -> f64;
}

impl fmt::Debug for dyn UrabeShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UrabeShape({})", self.name())
    }
}

/// `S(X) = X` on `(−1, 1)`. Generates `V(x) = 1 + x − √(2x+1)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Linear;

impl UrabeShape for Linear {
    fn name(&self) -> &str {
        "linear"
    }
    fn s(&self, x: f64) -> f64 {
        x
    }
    fn ds(&self, _x: f64) -> Option<f64> {
        Some(1.0)
    }
    fn boundary_root(&self) -> f64 {
        -1.0
    }
}

/// `S(X) = sin X` on `(−π/2, π/2)`. The generated `X(x)` solves
/// `X − cos X = x − 1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sine;

impl UrabeShape for Sine {
    fn name(&self) -> &str {
        "sine"
    }
    fn s(&self, x: f64) -> f64 {
        x.sin()
    }
    fn ds(&self, x: f64) -> Option<f64> {
        Some(x.cos())
    }
    fn boundary_root(&self) -> f64 {
        -FRAC_PI_2
    }
}

/// A shape given by a closure.
pub struct FnShape<F> {
    name: String,
    f: F,
    root: f64,
}

impl<F: Fn(f64) -> f64 + Send + Sync> UrabeShape for FnShape<F> {
    fn name(&self) -> &str {
        &self.name
    }
    fn s(&self, x: f64) -> f64 {
        (self.f)(x)
    }
    fn boundary_root(&self) -> f64 {
        self.root
    }
}

/// A shape interpolated from odd samples `(X, S(X))`.
#[derive(Debug, Clone)]
pub struct Tabulated {
    name: String,
    curve: MonotoneCubic,
    half_width: f64,
}

impl Tabulated {
    /// Builds the shape from samples on either side of zero. Samples with
    /// `X < 0` are reflected to `(−X, −S)`, duplicates are averaged, the
    /// origin is pinned to `S(0) = 0`, and the positive half is mirrored, so
    /// the result is odd by construction. The last sample fixes `w` and must
    /// have `S(w) = 1`.
    pub fn from_samples(name: &str, samples: &[(f64, f64)]) -> Result<Self> {
        let mut half: Vec<(f64, f64)> = samples
            .iter()
            .filter(|(x, _)| *x != 0.0)
            .map(|&(x, s)| if x < 0.0 { (-x, -s) } else { (x, s) })
            .collect();
        if half.iter().any(|(x, s)| !x.is_finite() || !s.is_finite()) {
            return Err(Error::InvalidUrabe("non-finite sample".into()));
        }
        half.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64, usize)> = Vec::new();
        for (x, s) in half {
            match merged.last_mut() {
                Some(last) if last.0 == x => {
                    last.1 += s;
                    last.2 += 1;
                }
                _ => merged.push((x, s, 1)),
            }
        }
        if merged.len() < 2 {
            return Err(Error::InvalidUrabe(
                "need at least two samples away from X = 0".into(),
            ));
        }
        let positive: Vec<(f64, f64)> = merged
            .into_iter()
            .map(|(x, s, n)| (x, s / n as f64))
            .collect();
        let (w, s_w) = *positive.last().unwrap();
        if (s_w - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidUrabe(format!(
                "last sample must reach S(w) = 1, got S({w}) = {s_w}"
            )));
        }
        let mut xs = Vec::with_capacity(2 * positive.len() + 1);
        let mut ys = Vec::with_capacity(2 * positive.len() + 1);
        for &(x, s) in positive.iter().rev() {
            xs.push(-x);
            ys.push(-s);
        }
        xs.push(0.0);
        ys.push(0.0);
        for &(x, s) in &positive {
            xs.push(x);
            ys.push(s);
        }
        Ok(Tabulated {
            name: name.to_string(),
            curve: MonotoneCubic::new(xs, ys)?,
            half_width: w,
        })
    }

    /// Reads a headerless or headed two-column CSV of `X, S(X)` samples.
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
                // a header row
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
        let name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("tabulated");
        Self::from_samples(name, &samples)
    }
}

impl UrabeShape for Tabulated {
    fn name(&self) -> &str {
        &self.name
    }
    fn s(&self, x: f64) -> f64 {
        self.curve.eval(x)
    }
    fn ds(&self, x: f64) -> Option<f64> {
        Some(self.curve.derivative(x))
    }
    fn boundary_root(&self) -> f64 {
        -self.half_width
    }
}

/// An Urabe shape together with the interval `J = (−w, w)` it is used on.
#[derive(Clone, Debug)]
pub struct UrabeFunction {
    shape: Arc<dyn UrabeShape>,
    domain_half_width: f64,
    boundary_root: f64,
}

impl UrabeFunction {
    /// Uses the shape's own boundary root `A` and `J = (A, −A)`.
    pub fn new(shape: Arc<dyn UrabeShape>) -> Self {
        let root = shape.boundary_root();
        UrabeFunction {
            shape,
            domain_half_width: -root,
            boundary_root: root,
        }
    }

    /// Uses `J = (−w, w)` and locates the boundary root as the first point
    /// left of zero where `S + 1` changes sign (or `−w` if there is none).
    pub fn with_domain(shape: Arc<dyn UrabeShape>, half_width: f64) -> Self {
        let root = find_boundary_root(shape.as_ref(), half_width);
        UrabeFunction {
            shape,
            domain_half_width: half_width,
            boundary_root: root,
        }
    }

    pub fn from_fn<F>(name: &str, f: F, half_width: f64) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let shape = FnShape {
            name: name.to_string(),
            f,
            root: -half_width,
        };
        Self::with_domain(Arc::new(shape), half_width)
    }

    pub fn linear() -> Self {
        Self::new(Arc::new(Linear))
    }

    pub fn sine() -> Self {
        Self::new(Arc::new(Sine))
    }

    pub fn from_csv(path: &Path) -> Result<Self> {
        Ok(Self::new(Arc::new(Tabulated::from_csv(path)?)))
    }

    pub fn name(&self) -> &str {
        self.shape.name()
    }

    pub fn s(&self, x: f64) -> f64 {
        self.shape.s(x)
    }

    /// `S′(X)`, by central difference when the shape has no closed form.
    pub fn ds(&self, x: f64) -> f64 {
        if let Some(d) = self.shape.ds(x) {
            return d;
        }
        let w = self.domain_half_width;
        let h = 1e-6 * w.max(1.0);
        let lo = (x - h).max(-w);
        let hi = (x + h).min(w);
        (self.s(hi) - self.s(lo)) / (hi - lo)
    }

    pub fn domain_half_width(&self) -> f64 {
        self.domain_half_width
    }

    pub fn boundary_root(&self) -> f64 {
        self.boundary_root
    }

    /// Energy ceiling `w²/2` of the generated potential.
    pub fn vbar(&self) -> f64 {
        0.5 * self.domain_half_width * self.domain_half_width
    }
}

fn find_boundary_root(shape: &dyn UrabeShape, w: f64) -> f64 {
    let g = |x: f64| shape.s(x) + 1.0;
    let n = 4096;
    let mut prev = 0.0;
    for k in 1..=n {
        let x = -w * k as f64 / n as f64;
        if g(x) <= 0.0 {
            let (mut lo, mut hi) = (x, prev);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if g(mid) <= 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return if g(lo) == 0.0 { lo } else { 0.5 * (lo + hi) };
        }
        prev = x;
    }
    -w
}

type ShapeCtor = Arc<dyn Fn() -> Arc<dyn UrabeShape> + Send + Sync>;

/// Named Urabe shapes available to the CLI.
#[derive(Clone)]
pub struct UrabeRegistry {
    entries: BTreeMap<String, ShapeCtor>,
}

impl UrabeRegistry {
    pub fn empty() -> Self {
        UrabeRegistry {
            entries: BTreeMap::new(),
        }
    }

    pub fn builtin() -> Self {
        let mut reg = Self::empty();
        reg.register("linear", || Arc::new(Linear));
        reg.register("sine", || Arc::new(Sine));
        reg
    }

    pub fn register<F>(&mut self, name: &str, ctor: F)
    where
        F: Fn() -> Arc<dyn UrabeShape> + Send + Sync + 'static,
    {
        self.entries.insert(name.to_string(), Arc::new(ctor));
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.keys().map(String::as_str).collect()
    }

    pub fn get(&self, name: &str) -> Result<UrabeFunction> {
        match self.entries.get(name) {
            Some(ctor) => Ok(UrabeFunction::new(ctor())),
            None => Err(Error::UnknownName {
                kind: "Urabe function",
                name: name.to_string(),
                known: self.names().join(", "),
            }),
        }
    }
}

impl Default for UrabeRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct UrabeCheck {
    pub name: &'static str,
    pub passed: bool,
    /// The sample with the largest violation (or the closest call).
    pub worst_x: f64,
    pub worst_value: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct UrabeReport {
    pub function: String,
    pub domain_half_width: f64,
    pub boundary_root: f64,
    pub n_samples: usize,
    pub passed: bool,
    pub checks: Vec<UrabeCheck>,
}

impl UrabeReport {
    pub fn failures(&self) -> impl Iterator<Item = &UrabeCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Checks the Urabe-class requirements on `n_samples` points of `J`.
pub fn urabe_verify(func: &UrabeFunction, n_samples: usize) -> Result<UrabeReport> {
    if n_samples < 16 {
        return Err(Error::InvalidParameter(format!(
            "n_samples must be at least 16, got {n_samples}"
        )));
    }
    let w = func.domain_half_width();
    let n = n_samples;
    let mut checks = Vec::with_capacity(5);

    let s0 = func.s(0.0);
    checks.push(UrabeCheck {
        name: "S(0) = 0",
        passed: s0.abs() <= 1e-12,
        worst_x: 0.0,
        worst_value: s0,
    });

    let mut worst = (0.0, 0.0);
    for j in 1..n {
        let x = w * j as f64 / n as f64;
        let gap = (func.s(-x) + func.s(x)).abs();
        if gap >= worst.1 {
            worst = (x, gap);
        }
    }
    checks.push(UrabeCheck {
        name: "odd symmetry",
        passed: worst.1 <= 1e-10,
        worst_x: worst.0,
        worst_value: worst.1,
    });

    let mut worst = (0.0, f64::NEG_INFINITY);
    for j in 1..n {
        let x = -w + 2.0 * w * j as f64 / n as f64;
        let m = func.s(x).abs();
        if m > worst.1 {
            worst = (x, m);
        }
    }
    checks.push(UrabeCheck {
        name: "|S| < 1 inside J",
        passed: worst.1 < 1.0,
        worst_x: worst.0,
        worst_value: worst.1,
    });

    let a = func.boundary_root();
    let gap = (func.s(a) + 1.0).abs();
    let at_edge = (a + w).abs() <= 1e-9 * w.max(1.0);
    checks.push(UrabeCheck {
        name: "S(A) = -1 at A = -w",
        passed: gap <= 1e-9 && at_edge,
        worst_x: a,
        worst_value: gap.max((a + w).abs()),
    });

    let (jump_coarse, _) = derivative_jump(func, n);
    let (jump_fine, x_fine) = derivative_jump(func, 2 * n);
    checks.push(UrabeCheck {
        name: "X S(X) continuously differentiable",
        passed: jump_fine <= 0.75 * jump_coarse + 1e-8,
        worst_x: x_fine,
        worst_value: jump_fine,
    });

    let passed = checks.iter().all(|c| c.passed);
    Ok(UrabeReport {
        function: func.name().to_string(),
        domain_half_width: w,
        boundary_root: a,
        n_samples,
        passed,
        checks,
    })
}

// Largest jump between adjacent difference quotients of X·S(X) on an
// m-interval grid covering 98% of J. Shrinks with the grid iff the
// derivative is continuous.
fn derivative_jump(func: &UrabeFunction, m: usize) -> (f64, f64) {
    let w = 0.98 * func.domain_half_width();
    let step = 2.0 * w / m as f64;
    let g = |x: f64| x * func.s(x);
    let quotients: Vec<f64> = (0..m)
        .map(|j| {
            let x0 = -w + step * j as f64;
            (g(x0 + step) - g(x0)) / step
        })
        .collect();
    quotients
        .windows(2)
        .enumerate()
        .map(|(j, q)| (-w + step * (j + 1) as f64, (q[1] - q[0]).abs()))
        .fold(
            (0.0, 0.0),
            |best, (x, d)| if d > best.0 { (d, x) } else { best },
        )
}

/// A potential generated from an Urabe function.
#[derive(Debug, Clone)]
pub struct UrabePotential {
    name: String,
    func: UrabeFunction,
    /// Urabe coordinate nodes from `−w` to `w`.
    big_x: Vec<f64>,
    /// Positions `x(X)` at the nodes.
    xs: Vec<f64>,
    /// `dx/dX = 1 + S(X)` at the nodes.
    slopes: Vec<f64>,
}

/// Solves the Urabe equation for `func` and returns the potential it
/// generates. `grid_step` is the step in the Urabe coordinate `X`.
pub fn urabe_build(func: &UrabeFunction, grid_step: f64) -> Result<UrabePotential> {
    if !(grid_step > 0.0 && grid_step.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "grid_step must be positive, got {grid_step}"
        )));
    }
    let w = func.domain_half_width();
    if !(w > 0.0 && w.is_finite()) {
        return Err(Error::InvalidUrabe(format!(
            "half-width must be positive, got {w}"
        )));
    }
    let n = (w / grid_step).ceil() as usize;
    if n > 50_000_000 {
        return Err(Error::InvalidParameter(format!(
            "grid_step {grid_step} needs {n} steps per side"
        )));
    }
    let n = n.max(16);

    let right = integrate_side(func, w, n)?;
    let left = integrate_side(func, -w, n)?;

    let report = urabe_verify(func, 256)?;
    if !report.passed {
        let failed: Vec<&str> = report.failures().map(|c| c.name).collect();
        return Err(Error::InvalidUrabe(format!(
            "{}: {}",
            func.name(),
            failed.join(", ")
        )));
    }

    let mut big_x = Vec::with_capacity(2 * n + 1);
    let mut xs = Vec::with_capacity(2 * n + 1);
    for &(bx, x) in left.iter().rev() {
        big_x.push(bx);
        xs.push(x);
    }
    for &(bx, x) in right.iter().skip(1) {
        big_x.push(bx);
        xs.push(x);
    }
    let slopes = big_x.iter().map(|&bx| 1.0 + func.s(bx)).collect();
    if xs.windows(2).any(|p| !(p[1] > p[0])) {
        return Err(Error::InvalidUrabe(format!(
            "{}: x(X) is not strictly increasing",
            func.name()
        )));
    }
    Ok(UrabePotential {
        name: format!("urabe:{}", func.name()),
        func: func.clone(),
        big_x,
        xs,
        slopes,
    })
}

// Classical RK4 for dx/dX = 1 + S(X), x(0) = 0, from X = 0 to X = end in n
// steps. Returns (X_k, x_k) for k = 0..=n.
fn integrate_side(func: &UrabeFunction, end: f64, n: usize) -> Result<Vec<(f64, f64)>> {
    let h = end / n as f64;
    let rhs = |bx: f64| -> Result<f64> {
        let f = 1.0 + func.s(bx);
        let terminal = (bx - end).abs() <= 1e-12 * end.abs().max(1.0);
        if f > 0.0 || (terminal && f > -1e-9) {
            Ok(f.max(0.0))
        } else {
            Err(Error::NonIntegrable(bx))
        }
    };
    let mut out = Vec::with_capacity(n + 1);
    let mut x = 0.0;
    out.push((0.0, 0.0));
    for k in 0..n {
        let b0 = h * k as f64;
        let b1 = if k + 1 == n { end } else { h * (k + 1) as f64 };
        let k1 = rhs(b0)?;
        let k23 = rhs(b0 + 0.5 * h)?;
        let k4 = rhs(b1)?;
        x += (b1 - b0) / 6.0 * (k1 + 4.0 * k23 + k4);
        out.push((b1, x));
    }
    Ok(out)
}

impl UrabePotential {
    pub fn function(&self) -> &UrabeFunction {
        &self.func
    }

    /// The Urabe coordinate `X(x)`, with `V(x) = X(x)²/2`.
    pub fn urabe_coordinate(&self, x: f64) -> f64 {
        let n = self.xs.len();
        let x = x.clamp(self.xs[0], self.xs[n - 1]);
        let k = self
            .xs
            .partition_point(|&xk| xk <= x)
            .saturating_sub(1)
            .min(n - 2);
        let (b0, b1) = (self.big_x[k], self.big_x[k + 1]);
        let (x0, x1) = (self.xs[k], self.xs[k + 1]);
        let (m0, m1) = (self.slopes[k], self.slopes[k + 1]);
        let seg = |bx: f64| hermite(b0, b1, x0, x1, m0, m1, bx);

        let (mut lo, mut hi) = (b0, b1);
        let mut bx = b0 + (b1 - b0) * (x - x0) / (x1 - x0);
        for _ in 0..60 {
            let (val, der) = seg(bx);
            let gap = val - x;
            if gap == 0.0 {
                return bx;
            }
            if gap < 0.0 {
                lo = bx;
            } else {
                hi = bx;
            }
            let newton = if der > 0.0 { bx - gap / der } else { f64::NAN };
            let next = if newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if (next - bx).abs() <= 1e-16 * (1.0 + bx.abs()) {
                return next;
            }
            bx = next;
        }
        bx
    }
}

impl Potential for UrabePotential {
    fn name(&self) -> &str {
        &self.name
    }

    fn alpha(&self) -> f64 {
        self.xs[0]
    }

    fn beta(&self) -> f64 {
        *self.xs.last().unwrap()
    }

    fn vbar(&self) -> f64 {
        self.func.vbar()
    }

    fn v_unchecked(&self, x: f64) -> f64 {
        let bx = self.urabe_coordinate(x);
        0.5 * bx * bx
    }

    fn dv_unchecked(&self, x: f64) -> f64 {
        let bx = self.urabe_coordinate(x);
        bx / (1.0 + self.func.s(bx))
    }

    // d/dx [X/(1+S)] = (dX/dx)·[(1+S) − X S′]/(1+S)², with dX/dx = 1/(1+S)
    fn d2v_unchecked(&self, x: f64) -> f64 {
        let bx = self.urabe_coordinate(x);
        let q = 1.0 + self.func.s(bx);
        (q - bx * self.func.ds(bx)) / (q * q * q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::{check_invariants, ExamplePotential};
    use std::f64::consts::PI;

    #[test]
    fn verify_builtins() {
        let lin = urabe_verify(&UrabeFunction::linear(), 64).unwrap();
        assert!(lin.passed, "{lin:?}");
        assert_eq!(lin.boundary_root, -1.0);
        let sine = urabe_verify(&UrabeFunction::sine(), 64).unwrap();
        assert!(sine.passed, "{sine:?}");
        assert_eq!(sine.boundary_root, -PI / 2.0);
    }

    #[test]
    fn verify_rejects_steep_shape() {
        let f = UrabeFunction::from_fn("double", |x| 2.0 * x, 1.0);
        let report = urabe_verify(&f, 64).unwrap();
        assert!(!report.passed);
        let bound = report
            .checks
            .iter()
            .find(|c| c.name == "|S| < 1 inside J")
            .unwrap();
        assert!(!bound.passed);
        assert!(bound.worst_value >= 1.0);
    }

    #[test]
    fn verify_rejects_even_and_kinked_shapes() {
        let even = UrabeFunction::from_fn("even", |x: f64| 0.5 * x * x, 1.0);
        let report = urabe_verify(&even, 64).unwrap();
        assert!(report.failures().any(|c| c.name == "odd symmetry"));

        // X·S(X) = X·|X|·sign… has a kinked derivative when S jumps at 0.5
        let kinked = UrabeFunction::from_fn(
            "kinked",
            |x: f64| {
                let y = x.abs();
                let s = if y < 0.5 {
                    0.5 * y
                } else {
                    0.25 + 1.5 * (y - 0.5)
                };
                s.copysign(x)
            },
            1.0,
        );
        let report = urabe_verify(&kinked, 64).unwrap();
        assert!(report
            .failures()
            .any(|c| c.name == "X S(X) continuously differentiable"));
    }

    #[test]
    fn verify_needs_enough_samples() {
        assert!(urabe_verify(&UrabeFunction::linear(), 15).is_err());
    }

    #[test]
    fn linear_reproduces_example() {
        let built = urabe_build(&UrabeFunction::linear(), DEFAULT_GRID_STEP).unwrap();
        assert!((built.alpha() + 0.5).abs() < 1e-14);
        assert!((built.beta() - 1.5).abs() < 1e-14);
        assert_eq!(built.vbar(), 0.5);
        let bx = built.urabe_coordinate(0.5);
        assert!((bx - (2f64.sqrt() - 1.0)).abs() < 1e-12);
        let ex = ExamplePotential;
        for i in 1..1000 {
            let x = -0.5 + 2.0 * i as f64 / 1000.0;
            assert!((built.v(x).unwrap() - ex.v(x).unwrap()).abs() < 1e-12);
            assert!((built.dv(x).unwrap() - ex.dv(x).unwrap()).abs() < 1e-9);
            assert!((built.d2v(x).unwrap() - ex.d2v(x).unwrap()).abs() < 1e-6);
        }
    }

    #[test]
    fn sine_solves_kepler_like_relation() {
        let built = urabe_build(&UrabeFunction::sine(), DEFAULT_GRID_STEP).unwrap();
        // x(X) = X + 1 − cos X
        assert!((built.alpha() - (1.0 - PI / 2.0)).abs() < 1e-13);
        assert!((built.beta() - (1.0 + PI / 2.0)).abs() < 1e-13);
        for i in 1..1000 {
            let x = built.alpha() + (built.beta() - built.alpha()) * i as f64 / 1000.0;
            let bx = built.urabe_coordinate(x);
            assert!((bx - bx.cos() - (x - 1.0)).abs() < 1e-10, "x = {x}");
        }
    }

    #[test]
    fn built_potentials_satisfy_invariants() {
        for f in [UrabeFunction::linear(), UrabeFunction::sine()] {
            let p = urabe_build(&f, DEFAULT_GRID_STEP).unwrap();
            let v = check_invariants(&p, 1000);
            assert!(v.is_empty(), "{}: {v:?}", f.name());
        }
    }

    #[test]
    fn build_errors() {
        let steep = UrabeFunction::from_fn("double", |x| 2.0 * x, 1.0);
        assert!(matches!(
            urabe_build(&steep, 1e-3),
            Err(Error::NonIntegrable(x)) if (x + 0.5).abs() < 1e-3
        ));
        let even = UrabeFunction::from_fn("shifted", |x: f64| 0.5 * x + 0.1 * x * x, 2.0);
        assert!(urabe_build(&even, 1e-3).is_err());
        assert!(urabe_build(&UrabeFunction::linear(), 0.0).is_err());
    }

    #[test]
    fn tabulated_mirrors_and_matches_sine() {
        let samples: Vec<(f64, f64)> = (1..=200)
            .map(|k| {
                let x = PI / 2.0 * k as f64 / 200.0;
                (x, x.sin())
            })
            .collect();
        let tab = Tabulated::from_samples("sine-table", &samples).unwrap();
        assert!((tab.s(-0.3) + tab.s(0.3)).abs() < 1e-15);
        assert!((tab.s(0.3) - 0.3f64.sin()).abs() < 1e-6);
        let f = UrabeFunction::new(Arc::new(tab));
        assert!((f.boundary_root() + PI / 2.0).abs() < 1e-15);
        assert!(urabe_verify(&f, 128).unwrap().passed);
        let p = urabe_build(&f, 1e-3).unwrap();
        assert!((p.alpha() - (1.0 - PI / 2.0)).abs() < 1e-6);
    }

    #[test]
    fn tabulated_requires_unit_endpoint() {
        let samples = vec![(0.5, 0.4), (1.0, 0.8)];
        assert!(Tabulated::from_samples("short", &samples).is_err());
    }

    #[test]
    fn registry_lookup() {
        let reg = UrabeRegistry::builtin();
        assert_eq!(reg.names(), vec!["linear", "sine"]);
        assert_eq!(reg.get("sine").unwrap().name(), "sine");
        assert!(matches!(reg.get("cubic"), Err(Error::UnknownName { .. })));
    }
}
