//! Dephasing raises |χ⁽³⁾| by up to a factor N relative to nonradiative
//! dissipation of the same strength, while χ⁽¹⁾ cannot tell them apart.

use superchi::{chi1, chi3, chi3_limit_gd0, enhancement_factor, DampingRates, SystemDrive};

fn main() -> superchi::Result<()> {
    let dephasing = DampingRates::unit_radiative(0.1, 0.0)?;
    let dissipation = dephasing.swapped();

    println!("{:>3} {:>10} {:>10} {:>12}", "N", "ratio", "predicted", "chi1 equal");
    for n in [2, 3, 5, 10, 20, 50] {
        let drive = SystemDrive::real(n, 20.0 * n as f64, 1.0)?;
        let ratio = chi3(&drive, &dephasing)?.norm() / chi3(&drive, &dissipation)?.norm();
        let same = chi1(&drive, &dephasing)? == chi1(&drive, &dissipation)?;
        println!("{n:>3} {ratio:>10.4} {:>10.4} {same:>12}", enhancement_factor(n, &dephasing)?);
    }

    // far off resonance the γd → 0 limit approaches −2/Δ³ for every N
    println!();
    for n in [2, 5, 20] {
        let d = 100.0 * n as f64 / 2.0;
        let x = chi3_limit_gd0(&SystemDrive::real(n, d, 1.0)?, &dissipation)?;
        println!("N = {n:>2}: chi3_gd0 * detuning^3 / -2 = {:.5}", x * d.powi(3) / -2.0);
    }
    Ok(())
}
