use super::gain::GainParams;
use crate::error::{Error, Result};

pub const DEFAULT_LEAKAGE_BUDGET: f64 = 1e-8;
pub const MAX_CUTOFF: u16 = 2000;

/// Per-mode photon cutoff and the leakage an evolution may discard.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub cutoff: u16,
    pub leakage_budget: f64,
}

impl Truncation {
    pub fn new(cutoff: u16) -> Self {
        Self {
            cutoff,
            leakage_budget: DEFAULT_LEAKAGE_BUDGET,
        }
    }

    /// Default cutoff for an `n_seed`-photon input at `gain`.
    ///
    /// Amplitudes fall off as `Γ^n`, so the cutoff must reach well past
    /// `ln(1e-20)/ln Γ²` pairs; `N + 10 + 20 n̄` alone leaves ~1e-6 of the
    /// weight out at `g = 2`.
    pub fn auto(n_seed: u32, gain: &GainParams) -> Self {
        let base = n_seed as f64 + 10.0;
        let linear = base + 20.0 * gain.n_bar();
        let gamma_sq = gain.gamma() * gain.gamma();
        let tail = if gamma_sq > 0.0 {
            base + (20.0 * std::f64::consts::LN_10) / (-gamma_sq.ln())
        } else {
            base
        };
        let cutoff = linear.max(tail).ceil().min(MAX_CUTOFF as f64) as u16;
        Self::new(cutoff)
    }

    pub fn with_budget(mut self, budget: f64) -> Self {
        self.leakage_budget = budget;
        self
    }

    pub fn check(&self, leakage: f64) -> Result<()> {
        if leakage > self.leakage_budget {
            Err(Error::LeakageExceeded {
                leakage,
                budget: self.leakage_budget,
            })
        } else {
            Ok(())
        }
    }
}
