//! Parametric amplifiers: gain parameters, pair generators, closed-form
//! output states, the disentangled engine and the numeric oracle.

pub mod closed_form;
pub mod disentangled;
pub mod gain;
pub mod geometry;
pub mod integrator;
pub mod truncation;

pub use closed_form::{
    collinear_amplified_2photon, collinear_amplified_3photon, collinear_spontaneous, noncollinear_amplified_noon,
};
pub use disentangled::{amplify, collinear_amplify, noncollinear_amplify};
pub use gain::GainParams;
pub use geometry::{AmplifierGeometry, PairGenerator};
pub use integrator::{default_steps, numeric_evolve, NORM_DRIFT_BOUND};
pub use truncation::{Truncation, DEFAULT_LEAKAGE_BUDGET, MAX_CUTOFF};
