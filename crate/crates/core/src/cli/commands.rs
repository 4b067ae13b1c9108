//! The subcommands, each a [`CliCommand`] registered by name.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value as Json};

use super::config::{KeySpec, Kind, RunConfig};
use super::portrait::phase_portrait;
use crate::dynamics::{self, CompactRegion, EscapeConfig, State};
use crate::error::{Error, Result};
use crate::potentials::{
    hamiltonian, urabe_build, urabe_verify, Potential, PotentialInfo, PotentialRegistry,
    UrabeFunction, UrabeRegistry,
};
use crate::resonance::{
    inf_scan, phi_p_lower_bound_trig, resonance_condition_trig, CylinderGrid, Forcing,
    ForcingRegistry, SampledForcing, TrigForcing,
};
use crate::special::QuadratureRule;

/// What a command produces before it is rendered.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Json(Json),
    Csv {
        /// Extra `# name: json` lines written after the config echo.
        notes: Vec<(String, Json)>,
        columns: Vec<&'static str>,
        rows: Vec<Vec<f64>>,
    },
}

pub trait CliCommand: Send + Sync {
    fn name(&self) -> &'static str;
    fn about(&self) -> &'static str;
    fn schema(&self) -> Vec<KeySpec>;
    /// Range checks that need no computation; every violation is listed.
    fn validate(&self, cfg: &RunConfig) -> Vec<String>;
    fn execute(&self, cfg: &RunConfig) -> Result<Output>;
}

const OUTPUT: KeySpec = KeySpec::new(
    "output",
    Kind::Text,
    "",
    "write the result to this file instead of stdout",
);
const POTENTIAL: KeySpec = KeySpec::new(
    "potential",
    Kind::Text,
    "example",
    "potential: example, urabe:linear, urabe:sine",
);
const TOL: KeySpec = KeySpec::new("tol", Kind::Float, "1e-10", "integrator tolerance");
const SHAPE: KeySpec = KeySpec::new(
    "shape",
    Kind::Text,
    "linear",
    "built-in Urabe function: linear or sine",
);
const TABLE: KeySpec = KeySpec::new(
    "table",
    Kind::Text,
    "",
    "CSV of (X, S(X)) samples; overrides shape",
);

fn trig_keys(a1: &'static str) -> [KeySpec; 3] {
    [
        KeySpec::new("a0", Kind::Float, "0", "forcing coefficient a0"),
        KeySpec::new("a1", Kind::Float, a1, "forcing coefficient a1 (cos t)"),
        KeySpec::new("b1", Kind::Float, "0", "forcing coefficient b1 (sin t)"),
    ]
}

fn forcing_keys() -> Vec<KeySpec> {
    let mut keys = trig_keys("1").to_vec();
    keys.push(KeySpec::new(
        "forcing",
        Kind::Text,
        "trig",
        "trig (use a0, a1, b1) or a preset: zero, constant, cos, sin, cos2, square",
    ));
    keys.push(KeySpec::new(
        "forcing_file",
        Kind::Text,
        "",
        "CSV of (t, p) samples over [0, 2pi)",
    ));
    keys
}

fn check_forcing(cfg: &RunConfig, out: &mut Vec<String>) {
    let name = cfg.text("forcing");
    if name != "trig" {
        let presets = ForcingRegistry::builtin();
        if !presets.names().contains(&name) {
            out.push(format!(
                "forcing: unknown `{name}` (known: trig, {})",
                presets.names().join(", ")
            ));
        }
        if !cfg.text("forcing_file").is_empty() {
            out.push("forcing_file cannot be combined with a forcing preset".into());
        }
    }
}

fn forcing_from(cfg: &RunConfig) -> Result<Arc<dyn Forcing>> {
    let file = cfg.text("forcing_file");
    if !file.is_empty() {
        return Ok(Arc::new(SampledForcing::from_csv(Path::new(file))?));
    }
    match cfg.text("forcing") {
        "trig" => Ok(Arc::new(trig_from(cfg)?)),
        name => ForcingRegistry::builtin().get(name),
    }
}

fn trig_from(cfg: &RunConfig) -> Result<TrigForcing> {
    TrigForcing::new(cfg.float("a0"), cfg.float("a1"), cfg.float("b1"))
}

fn check_potential(cfg: &RunConfig, out: &mut Vec<String>) {
    let name = cfg.text("potential");
    let reg = PotentialRegistry::builtin();
    if !reg.names().contains(&name) {
        out.push(format!(
            "potential: unknown `{name}` (known: {})",
            reg.names().join(", ")
        ));
    }
}

fn check_shape(cfg: &RunConfig, out: &mut Vec<String>) {
    if cfg.text("table").is_empty() {
        let reg = UrabeRegistry::builtin();
        let name = cfg.text("shape");
        if !reg.names().contains(&name) {
            out.push(format!(
                "shape: unknown `{name}` (known: {})",
                reg.names().join(", ")
            ));
        }
    }
}

fn urabe_function(cfg: &RunConfig) -> Result<UrabeFunction> {
    match cfg.text("table") {
        "" => UrabeRegistry::builtin().get(cfg.text("shape")),
        path => UrabeFunction::from_csv(Path::new(path)),
    }
}

fn positive(cfg: &RunConfig, key: &str, out: &mut Vec<String>) {
    let v = cfg.float(key);
    if !(v > 0.0) {
        out.push(format!("{key} must be positive, got {v}"));
    }
}

fn at_least(cfg: &RunConfig, key: &str, min: u64, out: &mut Vec<String>) {
    let v = cfg.int(key);
    if v < min {
        out.push(format!("{key} must be at least {min}, got {v}"));
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Json {
    serde_json::to_value(value).expect("report types serialize")
}

struct UrabeBuild;

impl CliCommand for UrabeBuild {
    fn name(&self) -> &'static str {
        "urabe-build"
    }
    fn about(&self) -> &'static str {
        "Build the isochronous potential generated by an Urabe function and tabulate it"
    }
    fn schema(&self) -> Vec<KeySpec> {
        vec![
            SHAPE,
            TABLE,
            KeySpec::new(
                "grid_step",
                Kind::Float,
                "1e-4",
                "step in the Urabe coordinate X",
            ),
            KeySpec::new("points", Kind::Int, "201", "number of tabulated positions"),
            OUTPUT,
        ]
    }
    fn validate(&self, cfg: &RunConfig) -> Vec<String> {
        let mut out = Vec::new();
        check_shape(cfg, &mut out);
        positive(cfg, "grid_step", &mut out);
        at_least(cfg, "points", 2, &mut out);
        out
    }
    fn execute(&self, cfg: &RunConfig) -> Result<Output> {
        let pot = urabe_build(&urabe_function(cfg)?, cfg.float("grid_step"))?;
        let n = cfg.int("points") as usize;
        let (a, b) = (pot.alpha(), pot.beta());
        // interior cell midpoints, so both open ends are avoided
        let rows = (0..n)
            .map(|i| {
                let x = a + (b - a) * (i as f64 + 0.5) / n as f64;
                vec![
                    x,
                    pot.urabe_coordinate(x),
                    pot.v_unchecked(x),
                    pot.dv_unchecked(x),
                    pot.d2v_unchecked(x),
                ]
            })
            .collect();
        Ok(Output::Csv {
            notes: vec![("potential".into(), to_json(&PotentialInfo::of(&pot)))],
            columns: vec!["x", "X", "V", "dV", "d2V"],
            rows,
        })
    }
}

struct UrabeVerify;

impl CliCommand for UrabeVerify {
    fn name(&self) -> &'static str {
        "urabe-verify"
    }
    fn about(&self) -> &'static str {
        "Check the Urabe-function requirements and report the worst sample of each"
    }
    fn schema(&self) -> Vec<KeySpec> {
        vec![
            SHAPE,
            TABLE,
            KeySpec::new(
                "samples",
                Kind::Int,
                "256",
                "number of sample points (at least 16)",
            ),
            OUTPUT,
        ]
    }
    fn validate(&self, cfg: &RunConfig) -> Vec<String> {
        let mut out = Vec::new();
        check_shape(cfg, &mut out);
        at_least(cfg, "samples", 16, &mut out);
        out
    }
    fn execute(&self, cfg: &RunConfig) -> Result<Output> {
        let report = urabe_verify(&urabe_function(cfg)?, cfg.int("samples") as usize)?;
        Ok(Output::Json(to_json(&report)))
    }
}

struct ResonanceCheckCmd;

impl CliCommand for ResonanceCheckCmd {
    fn name(&self) -> &'static str {
        "resonance-check"
    }
    fn about(&self) -> &'static str {
        "Decide the resonance condition for p(t) = a0 + a1 cos t + b1 sin t"
    }
    fn schema(&self) -> Vec<KeySpec> {
        let mut keys = trig_keys("0").to_vec();
        keys.push(OUTPUT);
        keys
    }
    fn validate(&self, _cfg: &RunConfig) -> Vec<String> {
        Vec::new()
    }
    fn execute(&self, cfg: &RunConfig) -> Result<Output> {
        let f = trig_from(cfg)?;
        let mut out = to_json(&resonance_condition_trig(&f));
        out["lower_bound"] = json!(phi_p_lower_bound_trig(&f));
        Ok(Output::Json(out))
    }
}

struct InfScan;

impl CliCommand for InfScan {
    fn name(&self) -> &'static str {
        "inf-scan"
    }
    fn about(&self) -> &'static str {
        "Minimum of |Phi_p| over a (theta, r) grid of the cylinder"
    }
    fn schema(&self) -> Vec<KeySpec> {
        let mut keys = forcing_keys();
        keys.extend([
            KeySpec::new("grid", Kind::Grid, "128x128", "theta nodes x r nodes"),
            KeySpec::new(
                "rmax",
                Kind::Float,
                "0.999",
                "largest radius scanned, below 1",
            ),
            KeySpec::new(
                "nodes",
                Kind::Int,
                "512",
                "quadrature nodes for non-trigonometric forcing",
            ),
            OUTPUT,
        ]);
        keys
    }
    fn validate(&self, cfg: &RunConfig) -> Vec<String> {
        let mut out = Vec::new();
        check_forcing(cfg, &mut out);
        let (nt, nr) = cfg.grid("grid");
        let grid = CylinderGrid {
            theta_nodes: nt,
            r_nodes: nr,
            r_max: cfg.float("rmax"),
        };
        out.extend(grid.violations());
        at_least(cfg, "nodes", 8, &mut out);
        out
    }
    fn execute(&self, cfg: &RunConfig) -> Result<Output> {
        let f = forcing_from(cfg)?;
        let (nt, nr) = cfg.grid("grid");
        let grid = CylinderGrid::new(nt, nr, cfg.float("rmax"))?;
        let rule = QuadratureRule::trapezoid(cfg.int("nodes") as usize)?;
        let scan = inf_scan(f.as_ref(), &grid, &rule)?;
        let mut out = to_json(&scan);
        out["forcing"] = json!(f.name());
        if let Some(trig) = f.as_trig() {
            let bound = phi_p_lower_bound_trig(&trig);
            out["lower_bound"] = json!(bound);
            out["bound_respected"] = json!(bound <= 0.0 || scan.min_value >= bound - 1e-8);
            out["resonance_condition"] = to_json(&resonance_condition_trig(&trig));
        }
        out["note"] = json!("the scan covers r in [0, rmax] only, not the whole cylinder");
        Ok(Output::Json(out))
    }
}

struct Simulate;

impl CliCommand for Simulate {
    fn name(&self) -> &'static str {
        "simulate"
    }
    fn about(&self) -> &'static str {
        "Integrate x'' + V'(x) = epsilon p(t) and write the trajectory (t, x, v, H)"
    }
    fn schema(&self) -> Vec<KeySpec> {
        let mut keys = vec![
            POTENTIAL,
            KeySpec::new("x0", Kind::Float, "0.78", "initial position"),
            KeySpec::new("v0", Kind::Float, "0", "initial velocity"),
            KeySpec::new("t0", Kind::Float, "0", "initial time"),
            KeySpec::new("periods", Kind::Float, "1", "duration in periods of 2pi"),
            KeySpec::new("epsilon", Kind::Float, "0", "forcing strength"),
        ];
        keys.extend(forcing_keys());
        keys.extend([TOL, OUTPUT]);
        keys
    }
    fn validate(&self, cfg: &RunConfig) -> Vec<String> {
        let mut out = Vec::new();
        check_potential(cfg, &mut out);
        check_forcing(cfg, &mut out);
        positive(cfg, "periods", &mut out);
        positive(cfg, "tol", &mut out);
        out
    }
    fn execute(&self, cfg: &RunConfig) -> Result<Output> {
        let p = PotentialRegistry::builtin().get(cfg.text("potential"))?;
        let f = forcing_from(cfg)?;
        let s0 = State::new(cfg.float("x0"), cfg.float("v0"), cfg.float("t0"));
        let t1 = s0.t + TAU * cfg.float("periods");
        let traj = dynamics::integrate(
            s0,
            t1,
            cfg.float("epsilon"),
            f.as_ref(),
            p.as_ref(),
            cfg.float("tol"),
        )?;
        let rows = traj
            .samples
            .iter()
            .map(|s| {
                let h = hamiltonian(p.as_ref(), s.x, s.v).unwrap_or(f64::NAN);
                vec![s.t, s.x, s.v, h]
            })
            .collect();
        Ok(Output::Csv {
            notes: vec![
                ("potential".into(), to_json(&PotentialInfo::of(p.as_ref()))),
                ("stop".into(), to_json(&traj.stop)),
            ],
            columns: vec!["t", "x", "v", "H"],
            rows,
        })
    }
}

struct Escape;

impl CliCommand for Escape {
    fn name(&self) -> &'static str {
        "escape"
    }
    fn about(&self) -> &'static str {
        "Ensemble escape experiment for a ball of initial conditions in an energy band"
    }
    fn schema(&self) -> Vec<KeySpec> {
        let mut keys = vec![
            POTENTIAL,
            KeySpec::new(
                "h_min",
                Kind::Float,
                "0",
                "lower energy of the region (0 for a sublevel disk)",
            ),
            KeySpec::new(
                "h_max",
                Kind::Float,
                "0.45",
                "upper energy of the region, below the ceiling",
            ),
            KeySpec::new("center_x", Kind::Float, "0.3", "ball centre position"),
            KeySpec::new("center_v", Kind::Float, "0", "ball centre velocity"),
            KeySpec::new("diameter", Kind::Float, "0.05", "ball diameter"),
            KeySpec::new(
                "samples",
                Kind::Int,
                "64",
                "initial conditions sampled in the ball",
            ),
            KeySpec::new("epsilon", Kind::Float, "0.01", "forcing strength"),
            KeySpec::new(
                "max_periods",
                Kind::Int,
                "2000",
                "periods to follow each sample",
            ),
            KeySpec::new(
                "seed",
                Kind::Int,
                "0",
                "offset into the low-discrepancy sequence",
            ),
        ];
        keys.extend(forcing_keys());
        keys.extend([TOL, OUTPUT]);
        keys
    }
    fn validate(&self, cfg: &RunConfig) -> Vec<String> {
        let mut out = Vec::new();
        check_potential(cfg, &mut out);
        check_forcing(cfg, &mut out);
        positive(cfg, "diameter", &mut out);
        positive(cfg, "tol", &mut out);
        at_least(cfg, "samples", 1, &mut out);
        at_least(cfg, "max_periods", 1, &mut out);
        out
    }
    fn execute(&self, cfg: &RunConfig) -> Result<Output> {
        let p = PotentialRegistry::builtin().get(cfg.text("potential"))?;
        let f = forcing_from(cfg)?;
        let config = EscapeConfig {
            region: CompactRegion::new(cfg.float("h_min"), cfg.float("h_max"), p.vbar())?,
            ball_center: State::new(cfg.float("center_x"), cfg.float("center_v"), 0.0),
            ball_diameter: cfg.float("diameter"),
            n_samples: cfg.int("samples") as usize,
            epsilon: cfg.float("epsilon"),
            max_periods: cfg.int("max_periods") as usize,
            tol: cfg.float("tol"),
            seed: cfg.int("seed"),
        };
        let report = dynamics::escape_experiment(&config, f.as_ref(), p.as_ref())?;
        Ok(Output::Json(to_json(&report)))
    }
}

struct PhasePortrait;

impl CliCommand for PhasePortrait {
    fn name(&self) -> &'static str {
        "phase-portrait"
    }
    fn about(&self) -> &'static str {
        "Energy level curves H(x, v) = h and the outer boundary of the period annulus"
    }
    fn schema(&self) -> Vec<KeySpec> {
        vec![
            POTENTIAL,
            KeySpec::new(
                "levels",
                Kind::FloatList,
                "0.1,0.2,0.3,0.4,0.49",
                "energy levels in (0, ceiling]",
            ),
            KeySpec::new(
                "points",
                Kind::Int,
                "200",
                "positions per branch of each curve",
            ),
            OUTPUT,
        ]
    }
    fn validate(&self, cfg: &RunConfig) -> Vec<String> {
        let mut out = Vec::new();
        check_potential(cfg, &mut out);
        at_least(cfg, "points", 4, &mut out);
        if cfg.list("levels").is_empty() {
            out.push("levels must list at least one energy".into());
        }
        out
    }
    fn execute(&self, cfg: &RunConfig) -> Result<Output> {
        let p = PotentialRegistry::builtin().get(cfg.text("potential"))?;
        let pts = phase_portrait(p.as_ref(), cfg.list("levels"), cfg.int("points") as usize)?;
        Ok(Output::Csv {
            notes: vec![("potential".into(), to_json(&PotentialInfo::of(p.as_ref())))],
            columns: vec!["level", "x", "v"],
            rows: pts.iter().map(|q| vec![q.level, q.x, q.v]).collect(),
        })
    }
}

/// Subcommands by name.
#[derive(Clone)]
pub struct CommandRegistry {
    entries: BTreeMap<&'static str, Arc<dyn CliCommand>>,
}

impl CommandRegistry {
    pub fn empty() -> Self {
        CommandRegistry {
            entries: BTreeMap::new(),
        }
    }

    pub fn builtin() -> Self {
        let mut reg = Self::empty();
        reg.register(Arc::new(UrabeBuild));
        reg.register(Arc::new(UrabeVerify));
        reg.register(Arc::new(ResonanceCheckCmd));
        reg.register(Arc::new(InfScan));
        reg.register(Arc::new(Simulate));
        reg.register(Arc::new(Escape));
        reg.register(Arc::new(PhasePortrait));
        reg
    }

    pub fn register(&mut self, cmd: Arc<dyn CliCommand>) {
        self.entries.insert(cmd.name(), cmd);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arc<dyn CliCommand>> {
        self.entries.values()
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn CliCommand>> {
        self.entries
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownName {
                kind: "command",
                name: name.to_string(),
                known: self.names().join(", "),
            })
    }
}

impl Default for CommandRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_resolve_and_validate() {
        for cmd in CommandRegistry::builtin().iter() {
            let cfg = RunConfig::resolve(cmd.name(), &cmd.schema(), &[]).unwrap();
            assert!(cmd.validate(&cfg).is_empty(), "{}", cmd.name());
            let mut names: Vec<_> = cmd.schema().iter().map(|k| k.name).collect();
            let n = names.len();
            names.dedup();
            names.sort();
            names.dedup();
            assert_eq!(names.len(), n, "duplicate key in {}", cmd.name());
        }
    }

    #[test]
    fn resonance_check_example() {
        let cmd = ResonanceCheckCmd;
        let flags = vec![("a1".to_string(), "1".to_string())];
        let cfg = RunConfig::resolve(cmd.name(), &cmd.schema(), &[("flag", flags)]).unwrap();
        let Output::Json(out) = cmd.execute(&cfg).unwrap() else {
            panic!()
        };
        assert_eq!(out["holds"], json!(true));
        assert_eq!(out["margin"], json!(1.0));
        assert_eq!(out["threshold_rhs"], json!(0.0));
    }

    #[test]
    fn unknown_presets_are_reported_together() {
        let cmd = Escape;
        let flags = vec![
            ("potential".to_string(), "nope".to_string()),
            ("forcing".to_string(), "nada".to_string()),
            ("samples".to_string(), "0".to_string()),
            ("diameter".to_string(), "-1".to_string()),
        ];
        let cfg = RunConfig::resolve(cmd.name(), &cmd.schema(), &[("flag", flags)]).unwrap();
        assert_eq!(cmd.validate(&cfg).len(), 4);
    }

    #[test]
    fn registry_lookup() {
        let reg = CommandRegistry::builtin();
        assert_eq!(reg.names().len(), 7);
        assert!(reg.get("escape").is_ok());
        assert!(matches!(reg.get("fly"), Err(Error::UnknownName { .. })));
    }
}
