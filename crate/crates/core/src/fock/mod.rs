//! Multi-mode bosonic Fock space: mode labels, sparse states, ladder algebra.

mod ladder;
mod linear;
mod mode;
mod state;

pub use ladder::{apply_ladder, inner_product, normally_ordered_expectation, LadderKind, LadderOp};
pub use linear::LinearForm;
pub use mode::{ModeLabel, ModeSet, Polarization, PolarizationBasis, Spatial, MAX_MODES};
pub(crate) use state::TermMap;
pub use state::{fidelity, FockBasisState, PureState, PRUNE_RELATIVE};
