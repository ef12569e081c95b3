//! Correlation fringes `G^(M)(θ)`, their visibility and harmonic content, on
//! evolved states (Schrödinger picture) or directly from the seed (Heisenberg
//! picture).

pub mod analyzer;
pub mod heisenberg;
pub mod ratio;
pub mod scan;
pub mod visibility;

pub use analyzer::Analyzer;
pub use heisenberg::{
    default_analyzer, evolved_form, heisenberg_fringe, heisenberg_fringe_with, HeisenbergOptions, DEFAULT_MAX_ORDER,
};
pub use ratio::stimulated_vs_spontaneous_ratio;
pub use scan::{fringe_scan, fringe_scan_direct, mixture_fringe_scan, theta_grid, validate_grid, FringeScan};
pub use visibility::{visibility, visibility_with, Harmonic, VisibilityReport, DEFAULT_HARMONICS};
