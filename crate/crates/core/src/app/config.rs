//! Flat TOML run configuration with `key=value` overrides.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::model::{DampingRates, SystemDrive};
use crate::oracle::MAX_ATOMS;
use crate::transient::{GridScale, TimeGrid, TransientOptions};

use super::AppError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Sweep,
    Transient,
    Verify,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Sweep => "sweep",
            Mode::Transient => "transient",
            Mode::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Every input of a run. Rates, detunings, fields and times are in units of
/// `γr` (or `1/γr`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub mode: Mode,
    pub n_atoms: usize,
    pub gamma_r: f64,
    pub gamma_d: f64,
    pub gamma_n: f64,
    pub field_re: f64,
    pub field_im: f64,

    pub detuning_min: f64,
    pub detuning_max: f64,
    pub detuning_count: usize,
    pub detuning_scale: GridScale,

    /// Single detuning of a transient run.
    pub detuning: f64,
    pub t_end: f64,
    pub time_count: usize,
    pub time_scale: GridScale,
    /// First nonzero sample of a log time grid.
    pub t_min: f64,
    pub rtol: f64,
    pub atol: f64,

    pub oracle_max_n: usize,
    pub oracle_amplitudes: Vec<f64>,
    pub oracle_chi1_tolerance: f64,
    pub oracle_tolerance: f64,
    pub verify_detunings: Vec<f64>,
    pub plug_back_tolerance: f64,
    pub random_samples: usize,
    pub seed: u64,

    pub format: OutputFormat,
    /// Empty writes to stdout.
    pub out: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Sweep,
            n_atoms: 5,
            gamma_r: 1.0,
            gamma_d: 0.0,
            gamma_n: 0.1,
            field_re: 1.0,
            field_im: 0.0,
            detuning_min: -20.0,
            detuning_max: 20.0,
            detuning_count: 2001,
            detuning_scale: GridScale::Linear,
            detuning: 5.0,
            t_end: 2000.0,
            time_count: 401,
            time_scale: GridScale::Log,
            t_min: 1e-2,
            rtol: 1e-10,
            atol: 1e-14,
            oracle_max_n: MAX_ATOMS,
            oracle_amplitudes: vec![0.02, 0.01, 0.005],
            oracle_chi1_tolerance: 1e-6,
            oracle_tolerance: 1e-3,
            verify_detunings: vec![-20.0, -5.0, -1.0, 0.0, 1.0, 5.0, 20.0],
            plug_back_tolerance: 1e-10,
            random_samples: 200,
            seed: 42,
            format: OutputFormat::Csv,
            out: String::new(),
        }
    }
}

fn bad(msg: impl Into<String>) -> AppError {
    AppError::Validation(msg.into())
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, AppError> {
        toml::from_str(text).map_err(|e| bad(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, AppError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| bad(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Applies `key=value` overrides. Values are parsed as TOML literals
    /// and fall back to bare strings, so `format=json` and `gamma_d=0.05`
    /// both work.
    pub fn with_overrides<S: AsRef<str>>(self, sets: &[S]) -> Result<Self, AppError> {
        if sets.is_empty() {
            return Ok(self);
        }
        let mut table = toml::Table::try_from(&self).map_err(|e| bad(e.to_string()))?;
        for s in sets {
            let s = s.as_ref();
            let (key, raw) = s
                .split_once('=')
                .ok_or_else(|| bad(format!("--set expects key=value, got `{s}`")))?;
            let key = key.trim();
            if !table.contains_key(key) {
                return Err(bad(format!("unknown config key `{key}`")));
            }
            let raw = raw.trim();
            let value = format!("v = {raw}")
                .parse::<toml::Table>()
                .ok()
                .and_then(|mut t| t.remove("v"))
                .unwrap_or_else(|| toml::Value::String(raw.to_string()));
            table.insert(key.to_string(), value);
        }
        table
            .try_into()
            .map_err(|e: toml::de::Error| bad(format!("--set: {e}")))
    }

    /// The resolved config as TOML, as written into output headers.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn rates(&self) -> Result<DampingRates, AppError> {
        Ok(DampingRates::new(self.gamma_r, self.gamma_d, self.gamma_n)?)
    }

    pub fn field(&self) -> Complex64 {
        Complex64::new(self.field_re, self.field_im)
    }

    pub fn drive(&self, detuning: f64) -> Result<SystemDrive, AppError> {
        Ok(SystemDrive::new(self.n_atoms, detuning, self.field())?)
    }

    pub fn time_grid(&self) -> TimeGrid {
        TimeGrid {
            t_end: self.t_end,
            count: self.time_count,
            scale: self.time_scale,
            t_min: self.t_min,
        }
    }

    pub fn transient_options(&self) -> TransientOptions {
        TransientOptions {
            rtol: self.rtol,
            atol: self.atol,
        }
    }

    /// Detuning samples of a sweep. A log grid needs `0 < min < max`.
    pub fn detunings(&self) -> Vec<f64> {
        let m = (self.detuning_count - 1) as f64;
        let (a, b) = (self.detuning_min, self.detuning_max);
        let mut out: Vec<f64> = match self.detuning_scale {
            GridScale::Linear => (0..self.detuning_count)
                .map(|i| a + (b - a) * i as f64 / m)
                .collect(),
            GridScale::Log => {
                let (la, lb) = (a.ln(), b.ln());
                (0..self.detuning_count)
                    .map(|i| (la + (lb - la) * i as f64 / m).exp())
                    .collect()
            }
        };
        out[0] = a;
        *out.last_mut().unwrap() = b;
        out
    }

    /// Checks everything the current mode reads, before any computation.
    pub fn validate(&self) -> Result<(), AppError> {
        self.rates()?;
        if self.n_atoms < 2 {
            return Err(bad(format!(
                "n_atoms must be >= 2 for the collective hierarchy, got {}",
                self.n_atoms
            )));
        }
        if !(self.field_re.is_finite() && self.field_im.is_finite()) {
            return Err(bad("field amplitude must be finite"));
        }
        let positive = |name: &str, v: f64| -> Result<(), AppError> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(bad(format!("{name} must be > 0, got {v}")))
            }
        };
        match self.mode {
            Mode::Sweep => {
                if self.detuning_count < 2 {
                    return Err(bad(format!(
                        "detuning_count must be >= 2, got {}",
                        self.detuning_count
                    )));
                }
                if !(self.detuning_min.is_finite() && self.detuning_max.is_finite()) {
                    return Err(bad("detuning bounds must be finite"));
                }
                if !(self.detuning_min < self.detuning_max) {
                    return Err(bad(format!(
                        "detuning_min ({}) must be < detuning_max ({})",
                        self.detuning_min, self.detuning_max
                    )));
                }
                if self.detuning_scale == GridScale::Log && self.detuning_min <= 0.0 {
                    return Err(bad("log detuning grid needs detuning_min > 0"));
                }
            }
            Mode::Transient => {
                if !self.detuning.is_finite() {
                    return Err(bad("detuning must be finite"));
                }
                if self.field().norm_sqr() == 0.0 {
                    return Err(bad("transient runs need a nonzero field"));
                }
                positive("rtol", self.rtol)?;
                positive("atol", self.atol)?;
                self.time_grid().validate()?;
            }
            Mode::Verify => {
                if self.n_atoms > MAX_ATOMS {
                    return Err(crate::Error::SizeLimit {
                        n: self.n_atoms,
                        limit: MAX_ATOMS,
                        what: "master-equation oracle",
                    }
                    .into());
                }
                if self.oracle_max_n > MAX_ATOMS {
                    return Err(bad(format!("oracle_max_n must be <= {MAX_ATOMS}")));
                }
                if self.n_atoms > self.oracle_max_n {
                    return Err(crate::Error::SizeLimit {
                        n: self.n_atoms,
                        limit: self.oracle_max_n,
                        what: "oracle_max_n",
                    }
                    .into());
                }
                if self.verify_detunings.is_empty() {
                    return Err(bad("verify_detunings is empty"));
                }
                if self.verify_detunings.iter().any(|d| !d.is_finite()) {
                    return Err(bad("verify_detunings must be finite"));
                }
                if self.oracle_amplitudes.len() < 3 {
                    return Err(bad("oracle_amplitudes needs at least 3 values"));
                }
                if self.oracle_amplitudes.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
                    return Err(bad("oracle_amplitudes must be positive"));
                }
                positive("oracle_tolerance", self.oracle_tolerance)?;
                positive("oracle_chi1_tolerance", self.oracle_chi1_tolerance)?;
                positive("plug_back_tolerance", self.plug_back_tolerance)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid_in_every_mode() {
        for mode in [Mode::Sweep, Mode::Transient, Mode::Verify] {
            let c = RunConfig {
                mode,
                ..RunConfig::default()
            };
            c.validate().unwrap();
        }
    }

    #[test]
    fn default_grid() {
        let d = RunConfig::default().detunings();
        assert_eq!(d.len(), 2001);
        assert_eq!(d[0], -20.0);
        assert_eq!(d[1000], 0.0);
        assert_eq!(d[2000], 20.0);
    }

    #[test]
    fn toml_round_trip() {
        let c = RunConfig {
            gamma_d: 0.05,
            verify_detunings: vec![1.0],
            ..RunConfig::default()
        };
        assert_eq!(RunConfig::from_toml_str(&c.to_toml()).unwrap(), c);
    }

    #[test]
    fn partial_file_keeps_defaults() {
        let c = RunConfig::from_toml_str("n_atoms = 3\ngamma_d = 0.1\n").unwrap();
        assert_eq!(c.n_atoms, 3);
        assert_eq!(c.gamma_n, 0.1);
        assert!(RunConfig::from_toml_str("n_atom = 3").is_err());
    }

    #[test]
    fn overrides() {
        let c = RunConfig::default()
            .with_overrides(&["gamma_d=0.05", "format=json", "detuning_scale = log", "n_atoms=3"])
            .unwrap();
        assert_eq!(c.gamma_d, 0.05);
        assert_eq!(c.format, OutputFormat::Json);
        assert_eq!(c.detuning_scale, GridScale::Log);
        assert_eq!(c.n_atoms, 3);
        assert!(RunConfig::default().with_overrides(&["nope=1"]).is_err());
        assert!(RunConfig::default().with_overrides(&["gamma_d"]).is_err());
        assert!(RunConfig::default().with_overrides(&["n_atoms=two"]).is_err());
    }

    #[test]
    fn rejects_bad_grids() {
        let c = RunConfig {
            detuning_count: 0,
            ..RunConfig::default()
        };
        assert!(matches!(c.validate(), Err(AppError::Validation(_))));
        let c = RunConfig {
            detuning_min: 1.0,
            detuning_max: 1.0,
            ..RunConfig::default()
        };
        assert!(c.validate().is_err());
        let c = RunConfig {
            mode: Mode::Transient,
            t_end: 0.0,
            ..RunConfig::default()
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn verify_size_limit() {
        let c = RunConfig {
            mode: Mode::Verify,
            n_atoms: 9,
            ..RunConfig::default()
        };
        assert!(matches!(
            c.validate(),
            Err(AppError::Core(crate::Error::SizeLimit { n: 9, .. }))
        ));
        assert_eq!(c.validate().unwrap_err().exit_code(), 1);
    }
}
