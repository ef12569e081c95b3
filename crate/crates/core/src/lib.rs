//! Simulation of polarization NOON states amplified by quantum-injected optical
//! parametric amplifiers: sparse Fock states, collinear and non-collinear
//! amplifiers, loss channels, correlation fringes and closed-form oracles.

pub mod analytic;
pub mod channels;
pub mod correlators;
pub mod error;
pub mod fock;
pub mod math;
pub mod opa;
pub mod photonic;

pub use analytic::{eval_formula, visibility_from_formula, FormulaId, FormulaParams};
pub use channels::{apply_loss_to_seed, lossy_correlation, purify, LossChannel, WeightedMixture};
pub use correlators::{
    fringe_scan, heisenberg_fringe, stimulated_vs_spontaneous_ratio, theta_grid, visibility, Analyzer, FringeScan,
    VisibilityReport,
};
pub use error::{Error, Result};
pub use fock::{
    apply_ladder, fidelity, inner_product, normally_ordered_expectation, FockBasisState, LadderKind, LadderOp,
    LinearForm, ModeLabel, ModeSet, Polarization, PolarizationBasis, PureState, Spatial,
};
pub use num_complex::Complex64;
pub use opa::{AmplifierGeometry, GainParams, Truncation};
pub use photonic::{apply_phase_shift, change_basis, make_noon, make_seed, NoonSpec, PhaseShift, RelativeSign};
