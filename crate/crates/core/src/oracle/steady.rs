use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ode::{Dopri5, StepperOptions};

use super::density::DensityMatrix;
use super::generator::{LiouvillianOperator, MAX_DENSE_ATOMS};
use super::operators::CMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SteadyStateMethod {
    /// Dense solve up to [`MAX_DENSE_ATOMS`], propagation beyond.
    Auto,
    Dense,
    Propagation,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyStateOptions {
    pub method: SteadyStateMethod,
    /// Required `max |L ρ|` of the returned state.
    pub residual_target: f64,
    /// Propagation horizon before giving up.
    pub t_max: f64,
    pub stepper: StepperOptions,
}

impl Default for SteadyStateOptions {
    fn default() -> Self {
        Self {
            method: SteadyStateMethod::Auto,
            residual_target: 1e-11,
            t_max: 1e5,
            stepper: StepperOptions::with_tolerances(1e-10, 1e-14),
        }
    }
}

/// `max |L ρ|` over all entries.
pub fn residual(generator: &LiouvillianOperator, rho: &DensityMatrix) -> f64 {
    let mut out = CMatrix::zeros(rho.dim(), rho.dim());
    generator.apply(rho.matrix(), &mut out);
    out.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn steady_state(generator: &LiouvillianOperator) -> Result<DensityMatrix> {
    steady_state_with(generator, &SteadyStateOptions::default())
}

/// Solves `L ρ = 0`, `Tr ρ = 1`.
pub fn steady_state_with(
    generator: &LiouvillianOperator,
    opts: &SteadyStateOptions,
) -> Result<DensityMatrix> {
    let dense = match opts.method {
        SteadyStateMethod::Auto => generator.n_atoms() <= MAX_DENSE_ATOMS,
        SteadyStateMethod::Dense => true,
        SteadyStateMethod::Propagation => false,
    };
    if dense {
        dense_null_vector(generator, opts)
    } else {
        propagate_to_rest(generator, opts)
    }
}

fn dense_null_vector(
    generator: &LiouvillianOperator,
    opts: &SteadyStateOptions,
) -> Result<DensityMatrix> {
    let dim = generator.dim();
    let mut l = generator.dense_superoperator()?;
    // the ρ₀₀ row is redundant under trace preservation; replace it by Tr ρ = 1
    l.row_mut(0).fill(Complex64::new(0.0, 0.0));
    for k in 0..dim {
        l[(0, k * (dim + 1))] = Complex64::new(1.0, 0.0);
    }
    let mut rhs = nalgebra::DVector::zeros(dim * dim);
    rhs[0] = Complex64::new(1.0, 0.0);
    let x = l
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::LinearSolve("steady-state system is singular".into()))?;
    let mut rho = DensityMatrix::from_matrix(
        generator.n_atoms(),
        CMatrix::from_column_slice(dim, dim, x.as_slice()),
    );
    rho.hermitize();
    let res = residual(generator, &rho);
    if res > opts.residual_target {
        return Err(Error::NonConvergence { residual: res, t: 0.0 });
    }
    Ok(rho)
}

fn propagate_to_rest(
    generator: &LiouvillianOperator,
    opts: &SteadyStateOptions,
) -> Result<DensityMatrix> {
    let n = generator.n_atoms();
    let y0 = DensityMatrix::ground(n).into_matrix();
    let mut stepper = Dopri5::new(
        |_t, y: &[Complex64], dy: &mut [Complex64]| generator.apply_slice(y, dy),
        0.0,
        y0.as_slice(),
        opts.stepper,
    )?;
    let mut res = f64::INFINITY;
    while stepper.t() < opts.t_max {
        stepper.step(opts.t_max)?;
        // FSAL: the stored derivative is L ρ at the new point
        res = stepper.derivative().iter().map(|z| z.norm()).fold(0.0, f64::max);
        if res < opts.residual_target {
            let dim = generator.dim();
            let mut rho =
                DensityMatrix::from_matrix(n, CMatrix::from_column_slice(dim, dim, stepper.y()));
            rho.hermitize();
            return Ok(rho);
        }
    }
    Err(Error::NonConvergence {
        residual: res,
        t: stepper.t(),
    })
}
