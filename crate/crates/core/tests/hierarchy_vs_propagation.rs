//! The perturbative hierarchy against full density-matrix propagation from
//! the ground state, over the first ten collective decay times.

use num_complex::Complex64;
use superchi::ode::StepperOptions;
use superchi::oracle::extract::fit_power_series;
use superchi::oracle::{build_generator, expectations, propagate, CollectiveMoments, DensityMatrix};
use superchi::transient::{integrate, relaxation_times, TimeGrid, TransientOptions};
use superchi::{DampingRates, SystemDrive};

fn oracle_moments(drive: &SystemDrive, rates: &DampingRates, times: &[f64], rtol: f64) -> Vec<CollectiveMoments> {
    let g = build_generator(drive, rates).unwrap();
    let p = propagate(
        &g,
        &DensityMatrix::ground(drive.n_atoms),
        times,
        StepperOptions::with_tolerances(rtol, 1e-18),
    )
    .unwrap();
    assert!(p.worst.is_physical(1e-10, -1e-8));
    p.states.iter().map(|r| expectations(r).unwrap()).collect()
}

/// max |a − b| / max |b| over the window.
fn window_error(a: &[Complex64], b: &[Complex64]) -> f64 {
    let scale = b.iter().map(|z| z.norm()).fold(0.0, f64::max);
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale
}

fn cases() -> Vec<(usize, DampingRates, f64)> {
    vec![
        (2, DampingRates::unit_radiative(0.05, 0.05).unwrap(), 1.0),
        (3, DampingRates::unit_radiative(0.1, 0.0).unwrap(), 0.0),
        (3, DampingRates::unit_radiative(0.0, 0.1).unwrap(), -2.0),
    ]
}

#[test]
fn first_and_second_order_moments_at_weak_drive() {
    let e = 1e-3;
    for (n, rates, d) in cases() {
        let drive = SystemDrive::real(n, d, e).unwrap();
        let horizon = 10.0 * relaxation_times(&drive, &rates).tau1;
        let grid = TimeGrid::linear(horizon, 41);
        let traj = integrate(&drive, &rates, &grid, TransientOptions::default()).unwrap();
        let m = oracle_moments(&drive, &rates, &grid.times().unwrap(), 1e-10);

        let pairs: [(fn(&CollectiveMoments) -> Complex64, fn(&superchi::PerturbativeState) -> Complex64, i32); 4] = [
            (|m| m.s, |s| s.s1, 1),
            (|m| m.ss.unwrap(), |s| s.ss, 2),
            (|m| m.sds, |s| s.sds, 2),
            (|m| m.sdsp.unwrap(), |s| s.sdsp, 2),
        ];
        for (k, (om, hm, p)) in pairs.iter().enumerate() {
            let a: Vec<Complex64> = m.iter().map(|x| om(x) / e.powi(*p)).collect();
            let b: Vec<Complex64> = traj.states.iter().map(|x| hm(x) / e.powi(*p)).collect();
            let err = window_error(&a, &b);
            assert!(err < 1e-3, "N={n} moment {k}: {err:e}");
        }
    }
}

// ⟨s⟩(t) = s₁ + s₃ + O(E⁵): s₃ is read off by fitting the odd series over
// several amplitudes, which needs a tighter integrator than the moments above.
#[test]
fn third_order_response_from_amplitude_fit() {
    let amps = [0.04, 0.02, 0.01];
    for (n, rates, d) in cases() {
        let template = SystemDrive::real(n, d, 1.0).unwrap();
        let horizon = 10.0 * relaxation_times(&template, &rates).tau1;
        let grid = TimeGrid::linear(horizon, 21);
        let times = grid.times().unwrap();
        let traj = integrate(&template, &rates, &grid, TransientOptions::default()).unwrap();
        let runs: Vec<Vec<CollectiveMoments>> = amps
            .iter()
            .map(|&a| oracle_moments(&template.with_field(Complex64::new(a, 0.0)), &rates, &times, 1e-13))
            .collect();
        let fitted: Vec<Complex64> = (1..times.len())
            .map(|i| {
                let vals: Vec<Complex64> = runs.iter().map(|r| r[i].s).collect();
                fit_power_series(&amps, &vals, 1, 3).unwrap().0[1]
            })
            .collect();
        let err = window_error(&fitted, &traj.chi3_t[1..]);
        assert!(err < 1e-3, "N={n}: chi3(t) {err:e}");
    }
}
