use std::f64::consts::{FRAC_PI_2, TAU};
use std::io::Write;

use isores::dynamics::{poincare_map, State};
use isores::potentials::{
    check_invariants, hamiltonian, urabe_build, urabe_verify, ExamplePotential, Potential,
    PotentialRegistry, UrabeFunction,
};
use isores::resonance::TrigForcing;
use proptest::prelude::*;

fn isochronicity_defect(p: &dyn Potential, x0: f64) -> f64 {
    let s0 = State::at_rest(x0);
    poincare_map(s0, 0.0, &TrigForcing::zero(), p, 1e-10)
        .unwrap()
        .distance(&s0)
}

#[test]
fn cubic_urabe_function_is_isochronous() {
    // S(X) = X³ on (−1, 1): odd, |S| < 1 inside, S(−1) = −1, so x = X + X⁴/4
    let func = UrabeFunction::from_fn("cubic", |x| x * x * x, 1.0);
    assert!(urabe_verify(&func, 256).unwrap().passed);
    let p = urabe_build(&func, 1e-4).unwrap();
    assert!((p.alpha() + 0.75).abs() < 1e-12 && (p.beta() - 1.25).abs() < 1e-12);
    assert!((p.vbar() - 0.5).abs() < 1e-15);
    assert!(check_invariants(&p, 400).is_empty());
    for big_x in [0.2f64, 0.5, 0.8, -0.6] {
        let x = big_x + big_x.powi(4) / 4.0;
        assert!((p.urabe_coordinate(x) - big_x).abs() < 1e-10);
        assert!(isochronicity_defect(&p, x) < 1e-8, "X = {big_x}");
    }
}

#[test]
fn tabulated_sine_matches_builtin() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "X,S").unwrap();
    for k in 0..=400 {
        let x = FRAC_PI_2 * k as f64 / 400.0;
        writeln!(file, "{x},{}", x.sin()).unwrap();
    }
    file.flush().unwrap();
    let table = UrabeFunction::from_csv(file.path()).unwrap();
    assert!((table.boundary_root() + FRAC_PI_2).abs() < 1e-9);
    let built = urabe_build(&table, 1e-3).unwrap();
    let exact = urabe_build(&UrabeFunction::sine(), 1e-3).unwrap();
    for x in [-0.5, 0.0, 0.4, 1.2, 2.0] {
        assert!(
            (built.v(x).unwrap() - exact.v(x).unwrap()).abs() < 1e-6,
            "x = {x}"
        );
    }
}

#[test]
fn registry_potentials_are_isochronous() {
    let reg = PotentialRegistry::builtin();
    for name in reg.names() {
        let p = reg.get(name).unwrap();
        for frac in [0.2, 0.6, 0.9] {
            // start on the right at energy frac·V̄
            let target = frac * p.vbar();
            let (mut lo, mut hi) = (0.0, p.beta());
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if p.v_unchecked(mid) < target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            assert!(
                isochronicity_defect(p.as_ref(), lo) < 1e-8,
                "{name} at {frac}"
            );
        }
    }
}

#[test]
fn sine_potential_period_is_two_pi_in_time() {
    let p = urabe_build(&UrabeFunction::sine(), 1e-4).unwrap();
    assert_eq!(p.period(), TAU);
    assert!((p.vbar() - FRAC_PI_2 * FRAC_PI_2 / 2.0).abs() < 1e-12);
    assert!((p.alpha() - (1.0 - FRAC_PI_2)).abs() < 1e-10);
    assert!((p.beta() - (1.0 + FRAC_PI_2)).abs() < 1e-10);
}

proptest! {
    #[test]
    fn example_potential_shape(x in -0.4999f64..1.4999) {
        let p = ExamplePotential;
        let v = p.v(x).unwrap();
        prop_assert!((0.0..0.5).contains(&v));
        prop_assert!(p.dv(x).unwrap() * x >= 0.0);
        prop_assert!(p.d2v(x).unwrap() > 0.0);
        let direct = 1.0 + x - (2.0 * x + 1.0).sqrt();
        prop_assert!((v - direct).abs() < 1e-14);
        prop_assert!((hamiltonian(&p, x, 0.3).unwrap() - (0.045 + v)).abs() < 1e-15);
    }

    #[test]
    fn linear_urabe_agrees_with_example(x in -0.499f64..1.499) {
        let lin = urabe_build(&UrabeFunction::linear(), 1e-3).unwrap();
        let p = ExamplePotential;
        prop_assert!((lin.v(x).unwrap() - p.v(x).unwrap()).abs() < 1e-9);
        prop_assert!((lin.dv(x).unwrap() - p.dv(x).unwrap()).abs() < 1e-7);
    }
}
