//! |χ⁽³⁾| and its approximation across the resonance for N = 5 at the three
//! rate settings (γd, γn) = (0, 0.1), (0.05, 0.05), (0.1, 0).

use superchi::{spectral_point, DampingRates};

fn main() -> superchi::Result<()> {
    let settings = [(0.0, 0.1), (0.05, 0.05), (0.1, 0.0)];
    let rates: Vec<DampingRates> = settings
        .iter()
        .map(|&(d, n)| DampingRates::unit_radiative(d, n))
        .collect::<Result<_, _>>()?;

    print!("{:>8}", "detuning");
    for (d, n) in settings {
        print!("   |chi3|({d},{n})  |approx|");
    }
    println!();
    for i in 0..=40 {
        let detuning = -20.0 + i as f64;
        print!("{detuning:>8.1}");
        for r in &rates {
            match spectral_point(5, r, detuning) {
                Ok(p) => print!("   {:>12.5e}  {:>9.3e}", p.chi3.norm(), p.chi3_approx.norm()),
                // (0.1, 0) has a pole of the γd → 0 limit at Δ = 0
                Err(e) => print!("   {:>24}", format!("{e:?}")),
            }
        }
        println!();
    }
    Ok(())
}
