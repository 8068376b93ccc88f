//! Linear and third-order optical susceptibilities of `N` identical driven
//! two-level emitters with collective radiative decay, per-atom dephasing and
//! per-atom nonradiative dissipation.
//!
//! * [`model`]: damping rates, drive, and the `Γ_{a,b,c}` / `f_{a,b,c}` primitives.
//! * [`stationary`]: closed-form stationary moments, `χ⁽¹⁾`, `χ⁽³⁾` and its
//!   `γd → 0` limit and approximation.
//! * [`transient`]: switch-on dynamics of the perturbative hierarchy.
//! * [`oracle`]: brute-force `2^N`-dimensional master equation used as ground truth.
//! * [`app`]: config-driven sweeps, transient runs and verification suites
//!   behind the `superchi` binary.

pub mod app;
pub mod error;
pub mod hierarchy;
pub mod model;
pub mod ode;
pub mod oracle;
pub mod stationary;
pub mod transient;

pub use error::{Error, Result};
pub use hierarchy::{rotating_frame_rhs, PerturbativeState};
pub use model::{gamma_combine, resonance_fn, DampingRates, GammaTriple, SystemDrive};
pub use stationary::{
    chi1, chi3, chi3_approx, chi3_limit_gd0, enhancement_factor, spectral_point, SpectralPoint,
    StationaryExpectations,
};
