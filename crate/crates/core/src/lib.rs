//! Reduced atomic dynamics of the `l`-photon Jaynes-Cummings model with the
//! field initially in a thermal state, at zero detuning.
//!
//! * [`model`]: closed-form thermal series for the Bloch vector.
//! * [`analysis`]: discrete sampling, equidistribution, cloud comparisons
//!   and near-zero `S_z` scans.
//! * [`diophantine`]: continued fractions, candidate denominators and the
//!   low-temperature filter.
//! * [`precision`]: exact fractional parts of `q sqrt(m)` for huge `q`.
//! * [`oracle`]: brute-force density-matrix reference.
//!
//! Work over many independent points (time samples, candidates, `beta`
//! values) fans out over rayon unless the `parallel` feature is disabled.

pub mod analysis;
pub mod diophantine;
pub mod error;
pub mod exec;
pub mod model;
pub mod oracle;
pub mod output;
pub mod precision;

pub use error::{Error, Result};
pub use model::{
    a_elements, bloch_propagate, l3_cosine_form, l_coefficients, AElements, BlochVector, LCoefficients, ModelParams,
    SeriesConfig, ThermalSeries, TrajectoryFrame,
};
