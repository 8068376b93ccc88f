use num_complex::Complex64;

use crate::error::Result;
use crate::ode::{sample_at, StepperOptions};

use super::density::{DensityMatrix, Diagnostics};
use super::generator::LiouvillianOperator;
use super::operators::CMatrix;

/// Sampled density-matrix trajectory and the worst invariant deviations seen.
#[derive(Debug, Clone)]
pub struct Propagation {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    pub worst: Diagnostics,
}

/// Evolves `rho0` under the (time-independent) rotating-frame generator and
/// checks trace, Hermiticity and positivity at every sample.
pub fn propagate(
    generator: &LiouvillianOperator,
    rho0: &DensityMatrix,
    times: &[f64],
    stepper: StepperOptions,
) -> Result<Propagation> {
    let n = generator.n_atoms();
    let dim = generator.dim();
    let mut states = Vec::with_capacity(times.len());
    let mut worst = Diagnostics {
        trace_error: 0.0,
        hermiticity_error: 0.0,
        min_eigenvalue: f64::INFINITY,
    };
    sample_at(
        |_t, y: &[Complex64], dy: &mut [Complex64]| generator.apply_slice(y, dy),
        0.0,
        rho0.matrix().as_slice(),
        times,
        stepper,
        |_, _, y| {
            let rho = DensityMatrix::from_matrix(n, CMatrix::from_column_slice(dim, dim, y));
            worst = worst.worst(rho.diagnostics());
            states.push(rho);
            Ok(())
        },
    )?;
    Ok(Propagation {
        times: times.to_vec(),
        states,
        worst,
    })
}
