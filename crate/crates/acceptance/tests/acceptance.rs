//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Reference values come from oracles written here (Bessel's integral for
//! J_n, direct residuals, bisection) rather than from the library.

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use isores::angle::{self, solve_theta};
use isores::dynamics::{
    energy_drift, escape_experiment, integrate, poincare_map, variational_solution, CompactRegion,
    EscapeConfig, EscapeSummary, State, StopReason,
};
use isores::potentials::{urabe_build, ExamplePotential, Potential, UrabeFunction};
use isores::resonance::{
    inf_scan, phi_p_lower_bound_trig, phi_p_quadrature, phi_p_trig, resonance_condition_trig,
    CylinderGrid, TrigForcing,
};
use isores::special::{c_zero, d_minus, d_plus, FourierCoefficients, QuadratureRule};

/// J_n(x) = (1/2π) ∫ cos(nτ − x sin τ) dτ over one period; the trapezoid
/// rule is spectrally accurate for this periodic integrand.
fn bessel_oracle(n: u32, x: f64) -> f64 {
    let m = 128;
    let h = TAU / m as f64;
    (0..m)
        .map(|k| {
            let tau = k as f64 * h;
            (n as f64 * tau - x * tau.sin()).cos()
        })
        .sum::<f64>()
        / m as f64
}

/// J₁(r)/r with its limit 1/2 at r = 0.
fn j1_over_r_oracle(r: f64) -> f64 {
    if r == 0.0 {
        0.5
    } else {
        bessel_oracle(1, r) / r
    }
}

fn k_oracle() -> f64 {
    bessel_oracle(1, 1.0) - bessel_oracle(2, 1.0)
}

/// Deterministic pseudo-random reals in [lo, hi).
struct XorShift(u64);

impl XorShift {
    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        lo + (hi - lo) * (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let t = TAU * i as f64 / 200.0;
        for j in 0..100 {
            let r = 0.99 * j as f64 / 99.0;
            let th = solve_theta(t, r).unwrap();
            worst = worst.max((th + r * th.sin() + t).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst < 1e-12 && secs < 1.0,
        format!("Kepler-like solver: max residual {worst:.2e} on 200x100 grid in {secs:.3} s"),
    )
}

fn criterion_2() -> Outcome {
    let grid: Vec<f64> = (0..=200).map(|k| TAU * k as f64 / 200.0).collect();
    let mut worst: f64 = 0.0;
    for &r in &[0.1, 0.3, 0.5, 0.7, 0.9] {
        let numeric = variational_solution(r, &grid, 1e-12).unwrap();
        for (&t, y) in grid.iter().zip(&numeric) {
            worst = worst.max((angle::psi(t, r).unwrap() - y).norm());
        }
    }
    outcome(
        worst < 1e-6,
        format!("variational closed form: max |psi - numeric| {worst:.2e}"),
    )
}

fn criterion_3() -> Outcome {
    let rule = QuadratureRule::default();
    let (mut e0, mut ep, mut em) = (0.0f64, 0.0f64, 0.0f64);
    for &r in &[0.0, 0.25, 0.5, 0.75, 0.99] {
        let q = FourierCoefficients::by_quadrature(r, &rule).unwrap();
        let jr = j1_over_r_oracle(r);
        let j2 = if r == 0.0 { 0.0 } else { bessel_oracle(2, r) };
        e0 = e0.max((q.c0 - 1.5 * r).abs());
        ep = ep.max((q.d_plus - (jr - j2)).abs());
        em = em.max((q.d_minus - (-jr)).abs());
    }
    let ok = |e: f64| if e < 1e-8 { "ok" } else { "FAILED" };
    outcome(
        e0 < 1e-8 && ep < 1e-8 && em < 1e-8,
        format!(
            "Fourier/Bessel identities: c0 vs 3r/2 {e0:.2e} {}, d+ vs J1/r - J2 {ep:.2e} {}, d- vs -J1/r {em:.2e} {}",
            ok(e0),
            ok(ep),
            ok(em)
        ),
    )
}

fn criterion_4() -> Outcome {
    let k = k_oracle();
    let j1_1 = bessel_oracle(1, 1.0);
    let rs: Vec<f64> = (0..100).map(|i| i as f64 / 99.0).collect();
    let mut v_plus = 0;
    let mut v_minus = 0;
    let mut v_c0 = 0;
    let mut v_mono = 0;
    let mut prev = f64::INFINITY;
    for &r in &rs {
        let dp = d_plus(r).unwrap();
        let dm = d_minus(r).unwrap().abs();
        let c0 = c_zero(r).unwrap();
        if !(dp >= k && dp <= 0.5) {
            v_plus += 1;
        }
        if !(dm >= j1_1 && dm <= 0.5) {
            v_minus += 1;
        }
        if !(0.0..=1.5).contains(&c0) {
            v_c0 += 1;
        }
        if r > 0.0 && dp >= prev {
            v_mono += 1;
        }
        prev = dp;
    }
    let total = v_plus + v_minus + v_c0 + v_mono;
    outcome(
        total == 0,
        format!(
            "coefficient bounds on 100 radii: violations K<=d+<=1/2 {v_plus}, J1(1)<=|d-|<=1/2 {v_minus}, 0<=c0<=3/2 {v_c0}, d+ decreasing {v_mono}"
        ),
    )
}

fn criterion_5() -> Outcome {
    let k = k_oracle();
    let expected = 3.0 / (2.0 * k);
    let got =
        resonance_condition_trig(&TrigForcing::new(1.0, 0.0, 0.0).unwrap()).critical_amplitude;
    // the condition itself against the inequality evaluated with the oracle
    let mut rng = XorShift(0x5eed_0005);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let f = TrigForcing::new(
            rng.uniform(-2.0, 2.0),
            rng.uniform(-8.0, 8.0),
            rng.uniform(-8.0, 8.0),
        )
        .unwrap();
        let lhs = f.a1 * f.a1 + f.b1 * f.b1;
        let rhs = 9.0 * f.a0 * f.a0 / (4.0 * k * k);
        if (lhs - rhs).abs() > 1e-9 && resonance_condition_trig(&f).holds != (lhs > rhs) {
            mismatches += 1;
        }
    }
    let err = (got - expected).abs();
    outcome(
        err < 1e-10 && mismatches == 0 && (got - 4.613).abs() < 1e-3,
        format!("resonance threshold: critical amplitude {got:.12} vs oracle {expected:.12} (error {err:.1e}), {mismatches} condition mismatches"),
    )
}

fn criterion_6() -> Outcome {
    let mut rng = XorShift(0x5eed_0006);
    let grid = CylinderGrid::new(128, 128, 0.999).unwrap();
    let rule = QuadratureRule::default();
    let mut n = 0;
    let mut failures = 0;
    let mut tightest = f64::INFINITY;
    while n < 20 {
        let f = TrigForcing::new(
            rng.uniform(-1.0, 1.0),
            rng.uniform(-6.0, 6.0),
            rng.uniform(-6.0, 6.0),
        )
        .unwrap();
        let bound = phi_p_lower_bound_trig(&f);
        if bound <= 0.0 {
            continue;
        }
        n += 1;
        let scan = inf_scan(&f, &grid, &rule).unwrap();
        tightest = tightest.min(scan.min_value - bound);
        if scan.min_value < bound - 1e-8 {
            failures += 1;
        }
    }
    outcome(
        failures == 0,
        format!("lower bound vs 128x128 scan: {failures} of 20 forcings below bound, smallest slack {tightest:.3e}"),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = XorShift(0x5eed_0007);
    let rule = QuadratureRule::default();
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let f = TrigForcing::new(
            rng.uniform(-2.0, 2.0),
            rng.uniform(-2.0, 2.0),
            rng.uniform(-2.0, 2.0),
        )
        .unwrap();
        for i in 0..16 {
            let theta = TAU * i as f64 / 16.0;
            for j in 0..16 {
                let r = 0.99 * j as f64 / 15.0;
                let a = phi_p_trig(theta, r, &f).unwrap();
                let b = phi_p_quadrature(theta, r, &f, &rule).unwrap();
                worst = worst.max((a - b).norm());
            }
        }
    }
    outcome(
        worst < 1e-8,
        format!("closed form vs definition: max difference {worst:.2e} on 16x16 grid, 5 forcings"),
    )
}

fn criterion_8() -> Outcome {
    let p = ExamplePotential;
    let zero = TrigForcing::zero();
    let tol = 1e-10;
    let mut iso: f64 = 0.0;
    let mut orbit: f64 = 0.0;
    for k in 1..=9 {
        let r = k as f64 / 10.0;
        let s0 = State::at_rest(angle::initial_position(r));
        let s1 = poincare_map(s0, 0.0, &zero, &p, tol).unwrap();
        iso = iso.max(s1.distance(&s0));
        let traj = integrate(s0, TAU, 0.0, &zero, &p, tol).unwrap();
        assert_eq!(traj.stop, StopReason::Completed);
        for s in &traj.samples {
            orbit = orbit.max((s.x - angle::phi(s.t, r).unwrap()).abs());
        }
    }
    let drift = energy_drift(0.5, 100, tol).unwrap();
    outcome(
        iso < 1e-8 && drift < 1e-8 && orbit < 1e-8,
        format!("integrator gates: |P0(s) - s| {iso:.2e}, drift over 100 periods {drift:.2e}, |x - phi| {orbit:.2e}"),
    )
}

/// Escape-time summary of the first passing run, frozen as a regression
/// baseline: (escaped samples, min, median, max escape time).
const ESCAPE_BASELINE: Option<(usize, f64, f64, f64)> = Some((
    64,
    186.104_956_826_322_65,
    192.343_009_052_867_27,
    198.665_220_500_441_05,
));

fn escape_config(epsilon: f64) -> EscapeConfig {
    EscapeConfig {
        region: CompactRegion::sublevel(0.45, 0.5).unwrap(),
        ball_center: State::at_rest(0.3),
        ball_diameter: 0.05,
        n_samples: 64,
        epsilon,
        max_periods: 2000,
        tol: 1e-10,
        seed: 0,
    }
}

fn baseline_matches(s: &EscapeSummary) -> Result<(), String> {
    let Some((n, lo, mid, hi)) = ESCAPE_BASELINE else {
        return Err(format!(
            "no baseline frozen yet; observed ({}, {:?}, {:?}, {:?})",
            s.n_escaped, s.min_escape_time, s.median_escape_time, s.max_escape_time
        ));
    };
    let close = |a: Option<f64>, b: f64| a.is_some_and(|a| (a - b).abs() <= 1e-9 * b.abs());
    if s.n_escaped == n
        && close(s.min_escape_time, lo)
        && close(s.median_escape_time, mid)
        && close(s.max_escape_time, hi)
    {
        Ok(())
    } else {
        Err(format!(
            "summary drifted from baseline: ({}, {:?}, {:?}, {:?})",
            s.n_escaped, s.min_escape_time, s.median_escape_time, s.max_escape_time
        ))
    }
}

fn criterion_9() -> Outcome {
    let p = ExamplePotential;
    let cos = TrigForcing::new(0.0, 1.0, 0.0).unwrap();
    let start = Instant::now();
    let forced = escape_experiment(&escape_config(0.01), &cos, &p).unwrap();
    let free = escape_experiment(&escape_config(0.0), &cos, &p).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let again = escape_experiment(&escape_config(0.01), &cos, &p).unwrap();
    let deterministic = again == forced;
    let baseline = baseline_matches(&forced.summary);
    let s = &forced.summary;
    outcome(
        s.ball_escaped && !free.summary.ball_escaped && secs < 60.0 && deterministic && baseline.is_ok(),
        format!(
            "escape experiment: eps=0.01 escaped {}/{} (max time {:.3}), eps=0 escaped {}, {secs:.1} s, repeat identical {deterministic}, baseline {}",
            s.n_escaped,
            s.n_samples,
            s.max_escape_time.unwrap_or(f64::NAN),
            free.summary.n_escaped,
            baseline.err().unwrap_or_else(|| "ok".into())
        ),
    )
}

fn criterion_10() -> Outcome {
    let tol = 1e-10;
    let zero = TrigForcing::zero();
    let example = ExamplePotential;

    let linear = urabe_build(&UrabeFunction::linear(), 1e-4).unwrap();
    let mut v_err: f64 = 0.0;
    for i in 1..2000 {
        let x = -0.5 + 2.0 * i as f64 / 2000.0;
        v_err = v_err.max((linear.v(x).unwrap() - example.v(x).unwrap()).abs());
    }

    let sine = urabe_build(&UrabeFunction::sine(), 1e-4).unwrap();
    let mut residual: f64 = 0.0;
    let (a, b) = (sine.alpha(), sine.beta());
    for i in 1..2000 {
        let x = a + (b - a) * i as f64 / 2000.0;
        let big_x = sine.urabe_coordinate(x);
        residual = residual.max((big_x - big_x.cos() - (x - 1.0)).abs());
    }

    let mut iso: f64 = 0.0;
    for &frac in &[0.25, 0.5, 0.75] {
        let xl = frac + 0.5 * frac * frac;
        let big = frac * PI / 2.0;
        let xs = big + 1.0 - big.cos();
        for (pot, x0) in [(&linear, xl), (&sine, xs)] {
            let s0 = State::at_rest(x0);
            let s1 = poincare_map(s0, 0.0, &zero, pot, tol).unwrap();
            iso = iso.max(s1.distance(&s0));
        }
    }
    outcome(
        v_err < 1e-6 && residual < 1e-8 && iso < 1e-8,
        format!("Urabe construction: linear |V - example| {v_err:.2e}, sine residual {residual:.2e}, isochronicity {iso:.2e} at 3 amplitudes"),
    )
}

fn main() {
    let criteria: [(usize, fn() -> Outcome); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut failed = Vec::new();
    for (n, check) in criteria {
        let o = check();
        println!(
            "criterion {n:>2}: {}  {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if !o.pass {
            failed.push(n);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 10 criteria pass");
    } else {
        println!(
            "acceptance: {} of 10 criteria fail: {failed:?}",
            failed.len()
        );
        std::process::exit(1);
    }
}
