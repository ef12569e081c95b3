use thiserror::Error;

use crate::fock::ModeLabel;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("polarization basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("mode {0} is not part of the state's mode set")]
    ModeNotPresent(ModeLabel),

    #[error("at most {max} modes are supported, got {got}")]
    TooManyModes { got: usize, max: usize },

    #[error("photon count {count} exceeds cutoff {cutoff}")]
    CountExceedsCutoff { count: u32, cutoff: u16 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("truncation leakage {leakage:.3e} exceeds budget {budget:.3e}")]
    LeakageExceeded { leakage: f64, budget: f64 },

    #[error("integrator norm drift {drift:.3e} exceeds {bound:.1e}; increase the step count")]
    NormDrift { drift: f64, bound: f64 },

    #[error("the idler spatial mode must be in vacuum at the amplifier input")]
    NonVacuumIdler,

    #[error("state has no terms")]
    EmptyState,

    #[error("expectation value {re} + {im}i is not real")]
    NonRealExpectation { re: f64, im: f64 },

    #[error("correlation order {order} exceeds the configured maximum {max}")]
    OrderTooLarge { order: usize, max: usize },

    #[error("invalid phase grid: {0}")]
    InvalidGrid(String),

    #[error("visibility undefined: fringe maximum plus minimum is zero")]
    UndefinedVisibility,

    #[error("formula {formula} cannot be evaluated: {reason}")]
    InvalidFormulaParams { formula: &'static str, reason: String },

    #[error("formula {0} has no phase dependence")]
    NotOscillatory(&'static str),

    #[error("ratio diverges: {0}")]
    Divergent(String),
}
