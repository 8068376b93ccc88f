use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Error;
use crate::model::{DampingRates, SystemDrive};
use crate::ode::StepperOptions;
use crate::oracle::{
    build_generator, extract_susceptibilities, propagate, steady_state, DensityMatrix, ExtractionOptions,
};
use crate::stationary::{
    chi1, chi3, chi3_approx, chi3_limit_gd0, enhancement_factor, stationary_expectations, verify_stationarity,
};
use crate::transient::{integrate, relaxation_times, Trajectory};

use super::config::{Mode, RunConfig};
use super::AppError;

/// Stand-in for a value that has no finite stationary limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Marker {
    IndefiniteLimit,
    Pole,
}

impl Marker {
    pub fn as_str(self) -> &'static str {
        match self {
            Marker::IndefiniteLimit => "IndefiniteLimit",
            Marker::Pole => "Pole",
        }
    }
}

pub type Entry<T> = std::result::Result<T, Marker>;

/// One detuning of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub detuning: f64,
    pub chi1: Entry<Complex64>,
    pub chi3: Entry<Complex64>,
    pub chi3_approx: Entry<Complex64>,
    pub chi3_gd0: Entry<Complex64>,
    pub enhancement: Entry<f64>,
}

fn entry<T>(r: crate::Result<T>) -> Result<Entry<T>, Error> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(Error::IndefiniteLimit) => Ok(Err(Marker::IndefiniteLimit)),
        Err(Error::Pole) => Ok(Err(Marker::Pole)),
        Err(e) => Err(e),
    }
}

fn sweep_point(n: usize, rates: &DampingRates, field: Complex64, detuning: f64) -> Result<SweepRecord, Error> {
    let drive = SystemDrive::new(n, detuning, field)?;
    Ok(SweepRecord {
        detuning,
        chi1: entry(chi1(&drive, rates))?,
        chi3: entry(chi3(&drive, rates))?,
        chi3_approx: entry(chi3_approx(&drive, rates))?,
        chi3_gd0: entry(chi3_limit_gd0(&drive, rates))?,
        enhancement: entry(enhancement_factor(n, rates))?,
    })
}

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool, AppError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        if j == 0 {
            return Err(AppError::Validation("--jobs must be >= 1".into()));
        }
        b = b.num_threads(j);
    }
    b.build().map_err(|e| AppError::Io(e.to_string()))
}

fn expect_mode(config: &RunConfig, mode: Mode) -> Result<(), AppError> {
    if config.mode != mode {
        return Err(AppError::Validation(format!(
            "config mode is `{}`, expected `{}`",
            config.mode.as_str(),
            mode.as_str()
        )));
    }
    config.validate()
}

/// Closed-form susceptibilities on the detuning grid, one row per detuning
/// in grid order. `jobs = None` uses every core.
pub fn run_sweep(config: &RunConfig, jobs: Option<usize>) -> Result<Vec<SweepRecord>, AppError> {
    expect_mode(config, Mode::Sweep)?;
    let rates = config.rates()?;
    let detunings = config.detunings();
    let (n, field) = (config.n_atoms, config.field());
    let rows: Result<Vec<_>, Error> = pool(jobs)?.install(|| {
        detunings
            .par_iter()
            .map(|&d| sweep_point(n, &rates, field, d))
            .collect()
    });
    Ok(rows?)
}

/// Switch-on trajectory at the configured detuning.
pub fn run_transient(config: &RunConfig) -> Result<Trajectory, AppError> {
    expect_mode(config, Mode::Transient)?;
    let drive = config.drive(config.detuning)?;
    Ok(integrate(
        &drive,
        &config.rates()?,
        &config.time_grid(),
        config.transient_options(),
    )?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub n_atoms: usize,
    pub detuning: Option<f64>,
    /// `None` when the quantity could not be computed.
    pub measured: Option<f64>,
    pub threshold: f64,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }
}

fn below(name: &'static str, n: usize, detuning: Option<f64>, value: crate::Result<f64>, limit: f64) -> Check {
    match value {
        Ok(v) => Check {
            name,
            n_atoms: n,
            detuning,
            measured: Some(v),
            threshold: limit,
            passed: v < limit,
            detail: String::new(),
        },
        Err(e) => Check {
            name,
            n_atoms: n,
            detuning,
            measured: None,
            threshold: limit,
            passed: false,
            detail: e.to_string(),
        },
    }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

/// Plug-back, `γd → 0` consistency, oracle equivalence and oracle
/// physicality checks for the configured system.
pub fn run_verify(config: &RunConfig) -> Result<VerifyReport, AppError> {
    expect_mode(config, Mode::Verify)?;
    let rates = config.rates()?;
    let n = config.n_atoms;
    let mut checks = Vec::new();

    for &d in &config.verify_detunings {
        let drive = config.drive(d)?;
        let res = stationary_expectations(&drive, &rates).and_then(|st| verify_stationarity(&drive, &rates, &st));
        checks.push(below("plug_back", n, Some(d), res, config.plug_back_tolerance));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut worst: crate::Result<f64> = Ok(0.0);
    for _ in 0..config.random_samples {
        let r = DampingRates::new(1.0, rng.random_range(0.0..0.2), rng.random_range(0.0..0.2))?;
        let d = rng.random_range(-10.0..10.0) * n as f64;
        let e = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let drive = SystemDrive::new(n, d, e)?;
        let res = stationary_expectations(&drive, &r).and_then(|st| verify_stationarity(&drive, &r, &st));
        worst = match (worst, res) {
            (Ok(a), Ok(b)) => Ok(a.max(b)),
            (Err(e), _) | (_, Err(e)) => Err(e),
        };
    }
    if config.random_samples > 0 {
        let mut c = below("plug_back_random", n, None, worst, config.plug_back_tolerance);
        c.detail = format!("{} samples, seed {}", config.random_samples, config.seed);
        checks.push(c);
    }

    if rates.gamma_n > 0.0 {
        let r0 = rates.without_dephasing();
        for &d in &config.verify_detunings {
            let drive = config.drive(d)?;
            let res = chi3(&drive, &r0)
                .and_then(|a| chi3_limit_gd0(&drive, &r0).map(|b| rel(a, b)));
            checks.push(below("gd0_limit", n, Some(d), res, 1e-12));
        }
    }

    let opts = ExtractionOptions {
        amplitudes: config.oracle_amplitudes.clone(),
        tolerance: config.oracle_tolerance,
        ..ExtractionOptions::default()
    };
    let oracle_rows: Vec<(f64, crate::Result<(f64, f64)>)> = config
        .verify_detunings
        .par_iter()
        .map(|&d| {
            let res = (|| {
                let drive = SystemDrive::real(n, d, 1.0)?;
                let oracle = extract_susceptibilities(&drive, &rates, &opts)?;
                Ok((
                    rel(oracle.chi1, chi1(&drive, &rates)?),
                    rel(oracle.chi3, chi3(&drive, &rates)?),
                ))
            })();
            (d, res)
        })
        .collect();
    for (d, res) in oracle_rows {
        checks.push(below("oracle_chi1", n, Some(d), res.clone().map(|r| r.0), config.oracle_chi1_tolerance));
        checks.push(below("oracle_chi3", n, Some(d), res.map(|r| r.1), config.oracle_tolerance));
    }

    // physicality of exact states: steady states at the configured field and
    // a switch-on propagation from the ground state
    let diag = (|| {
        let mut worst = None::<crate::oracle::Diagnostics>;
        let mut take = |d: crate::oracle::Diagnostics| {
            worst = Some(worst.map_or(d, |w| w.worst(d)));
        };
        for &d in &config.verify_detunings {
            let g = build_generator(&SystemDrive::new(n, d, config.field())?, &rates)?;
            take(steady_state(&g)?.diagnostics());
        }
        let drive = SystemDrive::new(n, config.detuning, config.field())?;
        let g = build_generator(&drive, &rates)?;
        let horizon = 10.0 * relaxation_times(&drive, &rates).tau1;
        let times: Vec<f64> = (0..=20).map(|i| horizon * i as f64 / 20.0).collect();
        let p = propagate(&g, &DensityMatrix::ground(n), &times, StepperOptions::default())?;
        take(p.worst);
        Ok::<_, Error>(worst.expect("at least one state"))
    })();
    checks.push(below("trace_error", n, None, diag.clone().map(|d| d.trace_error), 1e-10));
    checks.push(below("hermiticity_error", n, None, diag.clone().map(|d| d.hermiticity_error), 1e-10));
    let mut c = below("negative_eigenvalue", n, None, diag.map(|d| (-d.min_eigenvalue).max(0.0)), 1e-8);
    c.passed = c.measured.is_some_and(|v| v <= 1e-8);
    checks.push(c);

    Ok(VerifyReport { checks })
}
