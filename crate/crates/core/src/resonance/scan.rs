use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{phi_p_trig, Forcing};
use crate::angle;
use crate::error::{Error, Result};
use crate::special::QuadratureRule;

/// A tensor grid on `[0, 2π) × [0, r_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylinderGrid {
    pub theta_nodes: usize,
    pub r_nodes: usize,
    pub r_max: f64,
}

impl CylinderGrid {
    pub const DEFAULT_R_MAX: f64 = 0.999;

    pub fn new(theta_nodes: usize, r_nodes: usize, r_max: f64) -> Result<Self> {
        let grid = CylinderGrid {
            theta_nodes,
            r_nodes,
            r_max,
        };
        let problems = grid.violations();
        if problems.is_empty() {
            Ok(grid)
        } else {
            Err(Error::InvalidParameter(problems.join("; ")))
        }
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.theta_nodes < 8 {
            out.push(format!(
                "theta_nodes must be at least 8, got {}",
                self.theta_nodes
            ));
        }
        if self.r_nodes < 8 {
            out.push(format!("r_nodes must be at least 8, got {}", self.r_nodes));
        }
        if !(self.r_max > 0.0 && self.r_max < 1.0) {
            out.push(format!("r_max must lie in (0, 1), got {}", self.r_max));
        }
        out
    }

    pub fn theta(&self, i: usize) -> f64 {
        TAU * i as f64 / self.theta_nodes as f64
    }

    /// Radii from `0` to `r_max` inclusive.
    pub fn r(&self, j: usize) -> f64 {
        self.r_max * j as f64 / (self.r_nodes - 1) as f64
    }
}

impl Default for CylinderGrid {
    fn default() -> Self {
        CylinderGrid {
            theta_nodes: 128,
            r_nodes: 128,
            r_max: Self::DEFAULT_R_MAX,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylinderPoint {
    pub theta: f64,
    pub r: f64,
    pub theta_index: usize,
    pub r_index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanResult {
    pub min_value: f64,
    pub argmin: CylinderPoint,
    pub grid: CylinderGrid,
    /// The scan covers `r ∈ [0, r_max]` only, not the whole cylinder.
    pub r_range: (f64, f64),
}

/// Minimum of `|Φ_p|` over the grid. Ties go to the smallest θ index, then
/// the smallest r index, so the result does not depend on evaluation order.
pub fn inf_scan(f: &dyn Forcing, grid: &CylinderGrid, rule: &QuadratureRule) -> Result<ScanResult> {
    let problems = grid.violations();
    if !problems.is_empty() {
        return Err(Error::InvalidParameter(problems.join("; ")));
    }
    let trig = f.as_trig();
    // nodes for each radius, shared by every angle
    let nodes: Vec<Vec<(f64, f64, Complex64)>> = if trig.is_some() {
        Vec::new()
    } else {
        (0..grid.r_nodes)
            .into_par_iter()
            .map(|j| angle::anomaly_nodes(grid.r(j), rule))
            .collect::<Result<_>>()?
    };

    let rows: Vec<Vec<f64>> = (0..grid.theta_nodes)
        .into_par_iter()
        .map(|i| {
            let theta = grid.theta(i);
            (0..grid.r_nodes)
                .map(|j| match &trig {
                    Some(t) => phi_p_trig(theta, grid.r(j), t).map(|z| z.norm()),
                    None => {
                        let acc: Complex64 = nodes[j]
                            .iter()
                            .map(|&(t, w, z)| z * (w * f.eval(t - theta)))
                            .sum();
                        Ok((acc / TAU).norm())
                    }
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;

    let mut best = (f64::INFINITY, 0, 0);
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v < best.0 {
                best = (v, i, j);
            }
        }
    }
    let (min_value, i, j) = best;
    Ok(ScanResult {
        min_value,
        argmin: CylinderPoint {
            theta: grid.theta(i),
            r: grid.r(j),
            theta_index: i,
            r_index: j,
        },
        grid: *grid,
        r_range: (0.0, grid.r_max),
    })
}
