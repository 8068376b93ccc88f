//! |χ⁽³⁾(t)| after the drive is switched on, N = 5, Δ = 5, γn = 0. With
//! dephasing the response first settles on the unenhanced plateau and then
//! climbs to the enhanced stationary value on the slow population time scale.

use superchi::stationary::chi3;
use superchi::transient::{integrate, TimeGrid, TransientOptions};
use superchi::{DampingRates, SystemDrive};

fn main() -> superchi::Result<()> {
    let drive = SystemDrive::real(5, 5.0, 1.0)?;
    let grid = TimeGrid::log(1e-2, 2e4, 29);
    let settings = [0.0, 0.01, 0.05];

    let runs = settings
        .iter()
        .map(|&gd| integrate(&drive, &DampingRates::unit_radiative(gd, 0.0)?, &grid, TransientOptions::default()))
        .collect::<Result<Vec<_>, _>>()?;

    println!("{:>10} {:>14} {:>14} {:>14}", "t", "gd = 0", "gd = 0.01", "gd = 0.05");
    for (i, t) in runs[0].times.iter().enumerate() {
        print!("{t:>10.3e}");
        for r in &runs {
            print!(" {:>14.6e}", r.chi3_t[i].norm());
        }
        println!();
    }
    for (&gd, run) in settings.iter().zip(&runs).skip(1) {
        let stationary = chi3(&drive, &DampingRates::unit_radiative(gd, 0.0)?)?;
        println!(
            "gd = {gd}: final {:.6e}, stationary {:.6e}",
            run.final_chi3().norm(),
            stationary.norm()
        );
    }
    Ok(())
}
