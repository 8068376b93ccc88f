//! Brute-force ground truth: the full `2^N`-dimensional master equation with
//! collective radiative decay, per-atom dephasing and per-atom nonradiative
//! dissipation, solved without reference to any closed form.

pub mod density;
pub mod extract;
pub mod generator;
pub mod moments;
pub mod operators;
pub mod propagate;
pub mod steady;

pub use density::{DensityMatrix, Diagnostics};
pub use extract::{extract_moments, extract_susceptibilities, ExtractionOptions, ExtractionReport, MomentCoefficients};
pub use generator::{build_generator, LiouvillianOperator, MAX_ATOMS, MAX_DENSE_ATOMS};
pub use moments::{expectations, CollectiveMoments};
pub use propagate::{propagate, Propagation};
pub use steady::{steady_state, steady_state_with, SteadyStateMethod, SteadyStateOptions};
