//! Weak-field extraction of susceptibilities from exact steady states.
//!
//! For a real amplitude `E` the per-atom coherence is an odd series
//! `⟨s⟩ = χ₁E + χ₃E³ + χ₅E⁵ + …`. It is fitted by least squares over a set of
//! small amplitudes; the `E⁵` term is kept by default because near resonance
//! `χ₃` is suppressed by `γn/Γ` while `χ₅` is not.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::model::{DampingRates, SystemDrive};

use super::generator::build_generator;
use super::moments::{expectations, CollectiveMoments};
use super::steady::{steady_state_with, SteadyStateOptions};

#[derive(Debug, Clone, PartialEq)]
pub struct ExtractionOptions {
    /// Real field strengths, in units of `γr`.
    pub amplitudes: Vec<f64>,
    /// Number of series terms fitted (`χ₁, χ₃, χ₅, …`).
    pub odd_terms: usize,
    /// Target relative accuracy of `χ₃`; the halving test fails above
    /// `10 × tolerance`.
    pub tolerance: f64,
    /// Relative rms residual above which the fit is rejected.
    pub max_fit_residual: f64,
    /// Phase of the complex amplitude `|E| e^{iφ}`.
    pub phase: f64,
    pub steady: SteadyStateOptions,
}

impl Default for ExtractionOptions {
    fn default() -> Self {
        Self {
            amplitudes: vec![0.02, 0.01, 0.005],
            odd_terms: 3,
            tolerance: 1e-3,
            max_fit_residual: 1e-6,
            phase: 0.0,
            steady: SteadyStateOptions::default(),
        }
    }
}

impl ExtractionOptions {
    fn validate(&self) -> Result<()> {
        if self.odd_terms < 2 {
            return Err(invalid("odd_terms", "need at least chi1 and chi3"));
        }
        if self.amplitudes.len() < self.odd_terms {
            return Err(invalid(
                "amplitudes",
                format!("{} amplitudes cannot fit {} terms", self.amplitudes.len(), self.odd_terms),
            ));
        }
        if self.amplitudes.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
            return Err(invalid("amplitudes", "must be positive and finite"));
        }
        let mut sorted = self.amplitudes.clone();
        sorted.sort_by(f64::total_cmp);
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("amplitudes", "must be distinct"));
        }
        if !(self.tolerance > 0.0) {
            return Err(invalid("tolerance", "must be > 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtractionReport {
    pub chi1: Complex64,
    pub chi3: Complex64,
    pub amplitudes: Vec<f64>,
    pub fit_residual: f64,
    /// `|χ₃(E/2) − χ₃(E)| / |χ₃(E)|` from refitting on halved amplitudes.
    pub stability: f64,
}

/// Least-squares fit `values_k ≈ Σ_m c_m E_k^{p + 2m}`, `m < terms`.
/// Returns the coefficients and the relative rms residual.
pub fn fit_power_series(
    amplitudes: &[f64],
    values: &[Complex64],
    leading_power: i32,
    terms: usize,
) -> Result<(Vec<Complex64>, f64)> {
    if amplitudes.len() != values.len() || amplitudes.len() < terms || terms == 0 {
        return Err(invalid("amplitudes", "not enough samples for the requested fit"));
    }
    let emax = amplitudes.iter().copied().fold(0.0, f64::max);
    let k = amplitudes.len();
    // scaled variable x = (E/Emax)² keeps the Vandermonde matrix well conditioned
    let a = DMatrix::from_fn(k, terms, |r, c| (amplitudes[r] / emax).powi(2 * c as i32));
    let reduced: Vec<Complex64> = amplitudes
        .iter()
        .zip(values)
        .map(|(&e, &v)| v / e.powi(leading_power))
        .collect();
    let svd = a.clone().svd(true, true);
    let solve = |part: fn(&Complex64) -> f64| -> Result<DVector<f64>> {
        let b = DVector::from_iterator(k, reduced.iter().map(part));
        svd.solve(&b, 1e-15).map_err(|e| Error::LinearSolve(e.to_string()))
    };
    let re = solve(|z| z.re)?;
    let im = solve(|z| z.im)?;
    let coeffs: Vec<Complex64> = (0..terms)
        .map(|c| Complex64::new(re[c], im[c]) / emax.powi(2 * c as i32))
        .collect();

    let mut num = 0.0;
    let mut den = 0.0;
    for (r, y) in reduced.iter().enumerate() {
        let fit: Complex64 = (0..terms).map(|c| a[(r, c)] * Complex64::new(re[c], im[c])).sum();
        num += (fit - y).norm_sqr();
        den += y.norm_sqr();
    }
    let residual = if den > 0.0 { (num / den).sqrt() } else { 0.0 };
    Ok((coeffs, residual))
}

/// Exact steady-state moments at each amplitude, rotated back by the drive
/// phase so that every class is a real-amplitude series.
fn moments_at(
    template: &SystemDrive,
    rates: &DampingRates,
    amplitudes: &[f64],
    opts: &ExtractionOptions,
) -> Result<Vec<CollectiveMoments>> {
    let phase = Complex64::from_polar(1.0, opts.phase);
    amplitudes
        .iter()
        .map(|&a| {
            let drive = template.with_field(a * phase);
            let rho = steady_state_with(&build_generator(&drive, rates)?, &opts.steady)?;
            let m = expectations(&rho)?;
            let p1 = phase.conj();
            let p2 = p1 * p1;
            Ok(CollectiveMoments {
                s: m.s * p1,
                sds: m.sds,
                ss: m.ss.map(|z| z * p2),
                sdsp: m.sdsp,
                sdss: m.sdss.map(|z| z * p1),
                sdssp: m.sdssp.map(|z| z * p1),
            })
        })
        .collect()
}

fn fit_chi(amplitudes: &[f64], moments: &[CollectiveMoments], terms: usize) -> Result<(Complex64, Complex64, f64)> {
    let s: Vec<Complex64> = moments.iter().map(|m| m.s).collect();
    let (c, res) = fit_power_series(amplitudes, &s, 1, terms)?;
    Ok((c[0], c[1], res))
}

/// Fits `χ₁`, `χ₃` from exact steady states at the configured amplitudes and
/// checks the result against a refit on the halved amplitudes.
pub fn extract_susceptibilities(
    template: &SystemDrive,
    rates: &DampingRates,
    opts: &ExtractionOptions,
) -> Result<ExtractionReport> {
    opts.validate()?;
    let m = moments_at(template, rates, &opts.amplitudes, opts)?;
    let (chi1, chi3, fit_residual) = fit_chi(&opts.amplitudes, &m, opts.odd_terms)?;

    let halved: Vec<f64> = opts.amplitudes.iter().map(|a| 0.5 * a).collect();
    let mh = moments_at(template, rates, &halved, opts)?;
    let (_, chi3_half, _) = fit_chi(&halved, &mh, opts.odd_terms)?;
    let stability = (chi3_half - chi3).norm() / chi3.norm();

    if fit_residual > opts.max_fit_residual {
        return Err(Error::UnstableFit {
            shift: fit_residual,
            limit: opts.max_fit_residual,
        });
    }
    let limit = 10.0 * opts.tolerance;
    if !(stability <= limit) {
        return Err(Error::UnstableFit {
            shift: stability,
            limit,
        });
    }
    Ok(ExtractionReport {
        chi1,
        chi3,
        amplitudes: opts.amplitudes.clone(),
        fit_residual,
        stability,
    })
}

/// Leading weak-field coefficients of every moment class: `⟨s⟩ → (χ₁, χ₃)`,
/// `⟨ss⟩, ⟨s†s⟩, ⟨s†s′⟩ → /E²`, `⟨s†ss⟩, ⟨s†ss′⟩ → /E³`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentCoefficients {
    pub s1: Complex64,
    pub s3: Complex64,
    pub sds: Complex64,
    pub ss: Option<Complex64>,
    pub sdsp: Option<Complex64>,
    pub sdss: Option<Complex64>,
    pub sdssp: Option<Complex64>,
}

pub fn extract_moments(
    template: &SystemDrive,
    rates: &DampingRates,
    opts: &ExtractionOptions,
) -> Result<MomentCoefficients> {
    opts.validate()?;
    let amps = &opts.amplitudes;
    let m = moments_at(template, rates, amps, opts)?;
    let terms = opts.odd_terms;
    let lead = |get: fn(&CollectiveMoments) -> Option<Complex64>, p: i32| -> Result<Option<Complex64>> {
        let vals: Option<Vec<Complex64>> = m.iter().map(get).collect();
        match vals {
            Some(v) => Ok(Some(fit_power_series(amps, &v, p, terms)?.0[0])),
            None => Ok(None),
        }
    };
    let (s1, s3, _) = fit_chi(amps, &m, terms)?;
    Ok(MomentCoefficients {
        s1,
        s3,
        sds: lead(|x| Some(x.sds), 2)?.expect("always present"),
        ss: lead(|x| x.ss, 2)?,
        sdsp: lead(|x| x.sdsp, 2)?,
        sdss: lead(|x| x.sdss, 3)?,
        sdssp: lead(|x| x.sdssp, 3)?,
    })
}
