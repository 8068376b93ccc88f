//! The two building blocks of every closed form: combined widths and
//! single-pole resonance factors.

use superchi::{gamma_combine, resonance_fn, DampingRates, GammaTriple};

fn main() -> superchi::Result<()> {
    let rates = DampingRates::unit_radiative(0.0, 0.1)?;
    let n = 5.0;

    let width = gamma_combine(GammaTriple::new(n, 1.0, 1.0), &rates)?;
    println!("Gamma_(N,1,1) = {width}");

    println!("{:>8} {:>14} {:>14} {:>12}", "detuning", "re f", "im f", "|f|");
    for d in [-10.0, -2.55, -1.0, 0.0, 1.0, 2.55, 10.0] {
        let f = resonance_fn(GammaTriple::new(n, 1.0, 1.0), &rates, d)?;
        println!("{d:>8.2} {:>14.6e} {:>14.6e} {:>12.6}", f.re, f.im, f.norm());
    }

    // Δ = Γ = 0 has no finite value
    let err = resonance_fn(GammaTriple::new(0.0, 0.0, 1.0), &DampingRates::unit_radiative(0.1, 0.0)?, 0.0);
    println!("f_(0,0,1) at gamma_n = 0, detuning = 0: {err:?}");
    Ok(())
}
