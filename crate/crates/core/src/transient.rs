//! Switch-on dynamics: the drive `E e^{-iωt}` is turned on at `t = 0` with the
//! atoms in their ground state, and the perturbative hierarchy is integrated
//! in the rotating frame.
//!
//! The transient susceptibilities are the envelope ratios
//! `χ⁽¹⁾(t) = s₁(t)/E` and `χ⁽³⁾(t) = s₃(t)/(|E|²E)`, which tend to the
//! stationary values as `t → ∞`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::hierarchy::{rhs_with_widths, HierarchyWidths, PerturbativeState};
use crate::model::{DampingRates, SystemDrive};
use crate::ode::{sample_at, StepperOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridScale {
    Linear,
    Log,
}

/// Sample times: `0` followed by `count − 1` points up to `t_end`, spaced
/// linearly or logarithmically from `t_min`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t_end: f64,
    pub count: usize,
    pub scale: GridScale,
    pub t_min: f64,
}

impl TimeGrid {
    pub fn log(t_min: f64, t_end: f64, count: usize) -> Self {
        Self {
            t_end,
            count,
            scale: GridScale::Log,
            t_min,
        }
    }

    pub fn linear(t_end: f64, count: usize) -> Self {
        Self {
            t_end,
            count,
            scale: GridScale::Linear,
            t_min: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(invalid("t_end", format!("must be > 0, got {}", self.t_end)));
        }
        if self.count < 2 {
            return Err(invalid("time_count", "need at least 2 samples"));
        }
        if self.scale == GridScale::Log && !(self.t_min > 0.0 && self.t_min < self.t_end) {
            return Err(invalid("t_min", "log grid needs 0 < t_min < t_end"));
        }
        Ok(())
    }

    pub fn times(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let m = self.count - 1;
        let mut out = Vec::with_capacity(self.count);
        out.push(0.0);
        match self.scale {
            GridScale::Linear => {
                out.extend((1..=m).map(|i| self.t_end * i as f64 / m as f64));
            }
            GridScale::Log => {
                let (a, b) = (self.t_min.ln(), self.t_end.ln());
                if m == 1 {
                    out.push(self.t_end);
                } else {
                    out.extend((0..m).map(|i| (a + (b - a) * i as f64 / (m - 1) as f64).exp()));
                }
            }
        }
        // pin the endpoint exactly
        *out.last_mut().unwrap() = self.t_end;
        Ok(out)
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub chi1_t: Vec<Complex64>,
    pub chi3_t: Vec<Complex64>,
    /// Raw envelopes at each sample.
    pub states: Vec<PerturbativeState>,
}

impl Trajectory {
    pub fn final_chi3(&self) -> Complex64 {
        *self.chi3_t.last().expect("trajectory is never empty")
    }

    /// Linear interpolation of `|χ⁽³⁾(t)|` between samples.
    pub fn abs_chi3_at(&self, t: f64) -> f64 {
        let k = self.times.partition_point(|&x| x < t);
        if k == 0 {
            return self.chi3_t[0].norm();
        }
        if k >= self.times.len() {
            return self.final_chi3().norm();
        }
        let (t0, t1) = (self.times[k - 1], self.times[k]);
        let (a, b) = (self.chi3_t[k - 1].norm(), self.chi3_t[k].norm());
        a + (b - a) * (t - t0) / (t1 - t0)
    }
}

/// The two quoted relaxation times `τ₁ = 1/(Nγr)` and
/// `τ₂ = 1/(2γd/N + 2γn)`; `τ₂` is infinite when `γd = γn = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxationTimes {
    pub tau1: f64,
    pub tau2: f64,
}

impl RelaxationTimes {
    pub fn tau2_is_infinite(&self) -> bool {
        self.tau2.is_infinite()
    }
}

pub fn relaxation_times(drive: &SystemDrive, rates: &DampingRates) -> RelaxationTimes {
    let n = drive.n();
    let slow = 2.0 * rates.gamma_d / n + 2.0 * rates.gamma_n;
    RelaxationTimes {
        tau1: 1.0 / (n * rates.gamma_r),
        tau2: if slow > 0.0 { 1.0 / slow } else { f64::INFINITY },
    }
}

/// Eigenvalues `(fast, slow)` of the damping matrix coupling `⟨s†s⟩` and
/// `⟨s†s′⟩`. These are the decay rates of the population amplitudes; for
/// small `γd`, `γn` they approach `Nγr` and `γd/N + γn`.
pub fn population_rates(n_atoms: usize, rates: &DampingRates) -> Result<(f64, f64)> {
    let w = HierarchyWidths::new(n_atoms, rates)?;
    let (a, b, c, d) = (w.two_0_2, w.twon2_0_0, w.two_0_0, w.twon2_2_2);
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
    let fast = tr / 2.0 + disc;
    // slow = det / fast avoids cancellation when det is tiny
    Ok((fast, if fast > 0.0 { det / fast } else { 0.0 }))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransientOptions {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for TransientOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-14,
        }
    }
}

/// Integrates the hierarchy from the ground state at `t = 0`.
pub fn integrate(
    drive: &SystemDrive,
    rates: &DampingRates,
    grid: &TimeGrid,
    opts: TransientOptions,
) -> Result<Trajectory> {
    drive.require_collective()?;
    if drive.field.norm_sqr() == 0.0 {
        return Err(invalid("field_amplitude", "transient susceptibilities need E != 0"));
    }
    let times = grid.times()?;
    let w = HierarchyWidths::new(drive.n_atoms, rates)?;
    let e = drive.field;
    let e3 = e.norm_sqr() * e;

    let mut traj = Trajectory {
        times: times.clone(),
        chi1_t: Vec::with_capacity(times.len()),
        chi3_t: Vec::with_capacity(times.len()),
        states: Vec::with_capacity(times.len()),
    };
    let drive = *drive;
    sample_at(
        move |_t, y, dy| {
            let d = rhs_with_widths(&PerturbativeState::from_slice(y), &drive, &w);
            dy.copy_from_slice(&d.to_array());
        },
        0.0,
        &[Complex64::new(0.0, 0.0); PerturbativeState::LEN],
        &times,
        StepperOptions::with_tolerances(opts.rtol, opts.atol),
        |_, _, y| {
            let s = PerturbativeState::from_slice(y);
            traj.chi1_t.push(s.s1 / e);
            traj.chi3_t.push(s.s3 / e3);
            traj.states.push(s);
            Ok(())
        },
    )?;
    Ok(traj)
}
