//! Energy level curves of `H(x, v) = v²/2 + V(x)` for phase portraits.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potentials::Potential;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PortraitPoint {
    pub level: f64,
    pub x: f64,
    pub v: f64,
}

/// `{x : V(x) ≤ h}` for `0 < h ≤ V̄`, using that `V` falls on `(α, 0)`
/// and rises on `(0, β)`.
pub fn level_extent(p: &dyn Potential, h: f64) -> Result<(f64, f64)> {
    if !(h > 0.0 && h <= p.vbar()) {
        return Err(Error::InvalidParameter(format!(
            "level {h} outside (0, {}]",
            p.vbar()
        )));
    }
    if h == p.vbar() {
        return Ok((p.alpha(), p.beta()));
    }
    // `inside` is the end where V < h
    let root = |mut inside: f64, mut outside: f64| {
        for _ in 0..200 {
            let mid = 0.5 * (inside + outside);
            if mid == inside || mid == outside {
                break;
            }
            if p.v_unchecked(mid) < h {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        0.5 * (inside + outside)
    };
    Ok((root(0.0, p.alpha()), root(0.0, p.beta())))
}

/// Closed level curves `v = ±√(2(h − V(x)))`, one per level, followed by
/// the outer boundary `h = V̄` unless it was requested already. Each curve
/// runs along the upper branch from left to right and back along the lower
/// branch, ending where it started; nodes cluster at the turning points.
pub fn phase_portrait(
    p: &dyn Potential,
    levels: &[f64],
    points: usize,
) -> Result<Vec<PortraitPoint>> {
    let vbar = p.vbar();
    let mut problems: Vec<String> = levels
        .iter()
        .filter(|&&h| !(h > 0.0 && h <= vbar))
        .map(|h| format!("level {h} outside (0, {vbar}]"))
        .collect();
    if levels.is_empty() {
        problems.push("at least one level is required".into());
    }
    if points < 4 {
        problems.push(format!("points must be at least 4, got {points}"));
    }
    if !problems.is_empty() {
        return Err(Error::InvalidParameter(problems.join("; ")));
    }

    let mut all: Vec<f64> = levels.to_vec();
    if !all.contains(&vbar) {
        all.push(vbar);
    }
    let mut out = Vec::with_capacity(all.len() * 2 * points);
    for &h in &all {
        let (a, b) = level_extent(p, h)?;
        let xs: Vec<f64> = (0..points)
            .map(|i| {
                let s = 0.5 * (1.0 - (PI * i as f64 / (points - 1) as f64).cos());
                a + (b - a) * s
            })
            .collect();
        let speed = |x: f64| {
            let v = (2.0 * (h - p.v_unchecked(x))).max(0.0).sqrt();
            if v.is_finite() {
                v
            } else {
                0.0
            }
        };
        out.extend(xs.iter().map(|&x| PortraitPoint {
            level: h,
            x,
            v: speed(x),
        }));
        out.extend(xs.iter().rev().skip(1).map(|&x| PortraitPoint {
            level: h,
            x,
            v: -speed(x),
        }));
    }
    Ok(out)
}
