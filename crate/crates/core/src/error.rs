use thiserror::Error;

/// Errors raised by the closed-form, transient and oracle computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("negative damping coefficient {value} in ({a}, {b}, {c}); unsupported system size")]
    NegativeCoefficient { a: f64, b: f64, c: f64, value: f64 },

    #[error("resonance pole: detuning and width are both zero")]
    Pole,

    #[error("closed-form stationary solution requires at least 2 atoms, got {0}")]
    TooFewAtoms(usize),

    /// The stationary third-order response is not defined when both
    /// non-radiative rates vanish; the transient module gives the plateau.
    #[error("stationary response is indefinite at gamma_d = gamma_n = 0")]
    IndefiniteLimit,

    #[error("singular 2x2 system (|det| = {det:e})")]
    SingularMatrix { det: f64 },

    #[error("system size {n} exceeds limit {limit} for {what}")]
    SizeLimit {
        n: usize,
        limit: usize,
        what: &'static str,
    },

    #[error("integrator step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },

    #[error("integrator exceeded {steps} steps at t = {t}")]
    TooManySteps { steps: usize, t: f64 },

    #[error("steady-state propagation did not converge (residual {residual:e} after t = {t})")]
    NonConvergence { residual: f64, t: f64 },

    #[error("site-permutation symmetry violated in class `{class}` (spread {spread:e})")]
    SymmetryViolation { class: &'static str, spread: f64 },

    #[error("unstable weak-field fit: halving amplitudes moved chi3 by {shift:e} (limit {limit:e})")]
    UnstableFit { shift: f64, limit: f64 },

    #[error("linear solve failed: {0}")]
    LinearSolve(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

impl Error {
    /// True for errors caused by the inputs rather than by the numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::NegativeCoefficient { .. }
                | Error::TooFewAtoms(_)
                | Error::SizeLimit { .. }
        )
    }
}
