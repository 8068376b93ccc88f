//! Fully inverted atoms decaying through the collective channel only. The
//! excitation leaves faster than for independent atoms and the density
//! matrix stays physical along the way.

use superchi::ode::StepperOptions;
use superchi::oracle::{build_generator, propagate, DensityMatrix};
use superchi::{DampingRates, SystemDrive};

fn main() -> superchi::Result<()> {
    let rates = DampingRates::new(1.0, 0.0, 0.0)?;
    let times: Vec<f64> = (0..=20).map(|i| 0.1 * i as f64).collect();
    for n in [2, 4, 6] {
        let g = build_generator(&SystemDrive::real(n, 0.0, 0.0)?, &rates)?;
        let p = propagate(&g, &DensityMatrix::fully_excited(n), &times, StepperOptions::default())?;
        println!("N = {n}");
        for (t, rho) in p.times.iter().zip(&p.states).step_by(4) {
            let independent = n as f64 * (-t).exp();
            println!("  t = {t:.1}: excitation {:.5} (independent {:.5})", rho.excitation(), independent);
        }
        println!(
            "  worst trace error {:.1e}, hermiticity {:.1e}, min eigenvalue {:.1e}",
            p.worst.trace_error, p.worst.hermiticity_error, p.worst.min_eigenvalue
        );
    }
    Ok(())
}
