//! Dormand–Prince 5(4) integrator for complex-valued linear and nonlinear
//! systems, with step-size control and the 4th-order continuous extension
//! for output at arbitrary times.
//!
//! Used by the perturbative hierarchy (7 complex unknowns) and by the
//! density-matrix propagation of the oracle (`4^N` unknowns).

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// continuous extension
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Tolerances and limits of the adaptive stepper.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepperOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: Option<f64>,
    pub max_steps: usize,
}

impl Default for StepperOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-14,
            h_max: None,
            max_steps: 2_000_000,
        }
    }
}

impl StepperOptions {
    pub fn with_tolerances(rtol: f64, atol: f64) -> Self {
        Self {
            rtol,
            atol,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.rtol > 0.0 && self.rtol.is_finite()) {
            return Err(invalid("rtol", format!("must be > 0, got {}", self.rtol)));
        }
        if !(self.atol > 0.0 && self.atol.is_finite()) {
            return Err(invalid("atol", format!("must be > 0, got {}", self.atol)));
        }
        Ok(())
    }
}

/// Adaptive Dormand–Prince stepper over `y' = f(t, y)` with `y ∈ ℂⁿ`.
pub struct Dopri5<F> {
    rhs: F,
    opts: StepperOptions,
    t: f64,
    t_old: f64,
    h: f64,
    y: Vec<Complex64>,
    y_old: Vec<Complex64>,
    // k[0] holds f(t, y) at the current point (FSAL)
    k: [Vec<Complex64>; 7],
    // continuous-extension coefficients of the last step
    cont: [Vec<Complex64>; 5],
    scratch: Vec<Complex64>,
    steps: usize,
    rejected: usize,
}

impl<F> Dopri5<F>
where
    F: FnMut(f64, &[Complex64], &mut [Complex64]),
{
    pub fn new(mut rhs: F, t0: f64, y0: &[Complex64], opts: StepperOptions) -> Result<Self> {
        opts.validate()?;
        let n = y0.len();
        let zeros = || vec![Complex64::new(0.0, 0.0); n];
        let mut k: [Vec<Complex64>; 7] = std::array::from_fn(|_| zeros());
        rhs(t0, y0, &mut k[0]);
        let h = initial_step(&mut rhs, t0, y0, &k[0], &opts);
        Ok(Self {
            rhs,
            opts,
            t: t0,
            t_old: t0,
            h,
            y: y0.to_vec(),
            y_old: y0.to_vec(),
            k,
            cont: std::array::from_fn(|_| zeros()),
            scratch: zeros(),
            steps: 0,
            rejected: 0,
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> &[Complex64] {
        &self.y
    }

    /// `f(t, y)` at the current point.
    pub fn derivative(&self) -> &[Complex64] {
        &self.k[0]
    }

    pub fn accepted_steps(&self) -> usize {
        self.steps
    }

    pub fn rejected_steps(&self) -> usize {
        self.rejected
    }

    /// Advance by one accepted step, never past `t_limit`.
    pub fn step(&mut self, t_limit: f64) -> Result<()> {
        let n = self.y.len();
        loop {
            if self.steps + self.rejected >= self.opts.max_steps {
                return Err(Error::TooManySteps {
                    steps: self.opts.max_steps,
                    t: self.t,
                });
            }
            let mut h = self.h;
            if let Some(hm) = self.opts.h_max {
                h = h.min(hm);
            }
            let remaining = t_limit - self.t;
            let mut last = false;
            if h >= remaining {
                h = remaining;
                last = true;
            }
            if h <= f64::EPSILON * 16.0 * self.t.abs().max(1.0) && !last {
                return Err(Error::StepSizeUnderflow { t: self.t });
            }

            let t = self.t;
            let (k, rest) = self.k.split_at_mut(1);
            let k1 = &k[0];
            let [k2, k3, k4, k5, k6, k7] = rest else {
                unreachable!()
            };
            let y = &self.y;
            let ys = &mut self.scratch;

            for i in 0..n {
                ys[i] = y[i] + h * A21 * k1[i];
            }
            (self.rhs)(t + C2 * h, ys, k2);
            for i in 0..n {
                ys[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
            }
            (self.rhs)(t + C3 * h, ys, k3);
            for i in 0..n {
                ys[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
            }
            (self.rhs)(t + C4 * h, ys, k4);
            for i in 0..n {
                ys[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
            }
            (self.rhs)(t + C5 * h, ys, k5);
            for i in 0..n {
                ys[i] = y[i]
                    + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
            }
            (self.rhs)(t + h, ys, k6);
            for i in 0..n {
                ys[i] = y[i]
                    + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
            }
            (self.rhs)(t + h, ys, k7);

            let mut err = 0.0;
            for i in 0..n {
                let e = h
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i]
                        + E7 * k7[i]);
                let sk = self.opts.atol + self.opts.rtol * y[i].norm().max(ys[i].norm());
                err += (e.norm() / sk).powi(2);
            }
            let err = (err / n.max(1) as f64).sqrt();

            if err.is_nan() {
                return Err(Error::StepSizeUnderflow { t: self.t });
            }

            if err <= 1.0 {
                for i in 0..n {
                    let ydiff = ys[i] - y[i];
                    let bspl = h * k1[i] - ydiff;
                    self.cont[0][i] = y[i];
                    self.cont[1][i] = ydiff;
                    self.cont[2][i] = bspl;
                    self.cont[3][i] = ydiff - h * k7[i] - bspl;
                    self.cont[4][i] = h
                        * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i]
                            + D7 * k7[i]);
                }
                std::mem::swap(&mut self.y_old, &mut self.y);
                std::mem::swap(&mut self.y, &mut self.scratch);
                self.k.swap(0, 6);
                self.t_old = self.t;
                self.t = if last { t_limit } else { t + h };
                self.steps += 1;
                let fac = (0.9 * err.max(1e-10).powf(-0.2)).clamp(0.2, 10.0);
                // keep the proposed step when the last step was truncated
                if !last || fac * h > self.h {
                    self.h = h * fac;
                }
                return Ok(());
            }
            self.rejected += 1;
            self.h = h * (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
        }
    }

    /// Continuous-extension value at `t` within the last accepted step.
    pub fn dense(&self, t: f64, out: &mut [Complex64]) {
        let h = self.t - self.t_old;
        if h == 0.0 {
            out.copy_from_slice(&self.y);
            return;
        }
        let th = (t - self.t_old) / h;
        let th1 = 1.0 - th;
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.cont[0][i]
                + th * (self.cont[1][i]
                    + th1 * (self.cont[2][i] + th * (self.cont[3][i] + th1 * self.cont[4][i])));
        }
    }
}

fn rms_scaled(v: &[Complex64], y: &[Complex64], opts: &StepperOptions) -> f64 {
    let n = v.len().max(1) as f64;
    let s: f64 = v
        .iter()
        .zip(y)
        .map(|(vi, yi)| (vi.norm() / (opts.atol + opts.rtol * yi.norm())).powi(2))
        .sum();
    (s / n).sqrt()
}

fn initial_step<F>(
    rhs: &mut F,
    t0: f64,
    y0: &[Complex64],
    f0: &[Complex64],
    opts: &StepperOptions,
) -> f64
where
    F: FnMut(f64, &[Complex64], &mut [Complex64]),
{
    let d0 = rms_scaled(y0, y0, opts);
    let d1 = rms_scaled(f0, y0, opts);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let y1: Vec<Complex64> = y0.iter().zip(f0).map(|(y, f)| y + h0 * f).collect();
    let mut f1 = vec![Complex64::new(0.0, 0.0); y0.len()];
    rhs(t0 + h0, &y1, &mut f1);
    let df: Vec<Complex64> = f1.iter().zip(f0).map(|(a, b)| a - b).collect();
    let d2 = rms_scaled(&df, y0, opts) / h0;
    let dm = d1.max(d2);
    let h1 = if dm <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / dm).powf(0.2)
    };
    let h = (100.0 * h0).min(h1);
    match opts.h_max {
        Some(hm) => h.min(hm),
        None => h,
    }
}

/// Integrate from `t0` and report the state at each of `times`
/// (non-decreasing, all `>= t0`). `on_sample` may abort by returning an error.
pub fn sample_at<F, O>(
    rhs: F,
    t0: f64,
    y0: &[Complex64],
    times: &[f64],
    opts: StepperOptions,
    mut on_sample: O,
) -> Result<()>
where
    F: FnMut(f64, &[Complex64], &mut [Complex64]),
    O: FnMut(usize, f64, &[Complex64]) -> Result<()>,
{
    if times.windows(2).any(|w| w[1] < w[0]) || times.first().is_some_and(|&t| t < t0) {
        return Err(invalid("times", "sample times must be sorted and >= t0"));
    }
    let Some(&t_end) = times.last() else {
        return Ok(());
    };
    let mut stepper = Dopri5::new(rhs, t0, y0, opts)?;
    let mut buf = vec![Complex64::new(0.0, 0.0); y0.len()];
    let mut next = 0;
    while next < times.len() && times[next] <= t0 {
        on_sample(next, times[next], y0)?;
        next += 1;
    }
    while next < times.len() {
        stepper.step(t_end)?;
        while next < times.len() && times[next] <= stepper.t() {
            if times[next] == stepper.t() {
                buf.copy_from_slice(stepper.y());
            } else {
                stepper.dense(times[next], &mut buf);
            }
            on_sample(next, times[next], &buf)?;
            next += 1;
        }
    }
    Ok(())
}
