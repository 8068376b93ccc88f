//! χ⁽¹⁾ and χ⁽³⁾ read off exact master-equation steady states at weak drive,
//! compared against the closed forms.

use superchi::oracle::{extract_susceptibilities, ExtractionOptions};
use superchi::{chi1, chi3, DampingRates, SystemDrive};

fn main() -> superchi::Result<()> {
    let opts = ExtractionOptions::default();
    for n in [2, 3] {
        for (gd, gn) in [(0.0, 0.1), (0.05, 0.05), (0.1, 0.0)] {
            let rates = DampingRates::unit_radiative(gd, gn)?;
            for d in [0.0, 1.0, 5.0] {
                let drive = SystemDrive::real(n, d, 1.0)?;
                let report = extract_susceptibilities(&drive, &rates, &opts)?;
                let c1 = chi1(&drive, &rates)?;
                let c3 = chi3(&drive, &rates)?;
                println!(
                    "N={n} ({gd:.2},{gn:.2}) detuning {d:>4}: chi1 err {:.1e}  chi3 err {:.1e}  fit stability {:.1e}",
                    (report.chi1 - c1).norm() / c1.norm(),
                    (report.chi3 - c3).norm() / c3.norm(),
                    report.stability
                );
            }
        }
    }
    Ok(())
}
