//! Drives the same pipeline as the `superchi` binary from code: load a
//! config, override a key, run and render.

use superchi::app::{output, run_sweep, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/fig1.toml");
    let config = RunConfig::load(path.as_ref())?.with_overrides(&["detuning_count=9", "gamma_d=0.05", "gamma_n=0.05"])?;
    let rows = run_sweep(&config, None)?;
    print!("{}", output::sweep_csv(&config, &rows));
    Ok(())
}
