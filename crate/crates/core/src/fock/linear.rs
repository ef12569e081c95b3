use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::ladder::LadderKind;
use super::mode::{ModeLabel, PolarizationBasis};
use super::state::{PureState, TermMap};
use crate::error::Result;

/// A linear combination of single-photon ladder operators, `Σ_k w_k b_k` with each
/// `b_k` either `a_k` or `a†_k`. Analyzer modes and Heisenberg-evolved field
/// operators are both of this form.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinearForm {
    terms: Vec<(ModeLabel, LadderKind, Complex64)>,
}

impl LinearForm {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn annihilators(weights: impl IntoIterator<Item = (ModeLabel, Complex64)>) -> Self {
        let mut out = Self::new();
        for (m, w) in weights {
            out.push(m, LadderKind::Annihilate, w);
        }
        out
    }

    pub fn push(&mut self, mode: ModeLabel, kind: LadderKind, weight: Complex64) {
        if weight == Complex64::default() {
            return;
        }
        if let Some(t) = self.terms.iter_mut().find(|(m, k, _)| *m == mode && *k == kind) {
            t.2 += weight;
        } else {
            self.terms.push((mode, kind, weight));
        }
    }

    pub fn terms(&self) -> &[(ModeLabel, LadderKind, Complex64)] {
        &self.terms
    }

    pub fn scaled(mut self, factor: Complex64) -> Self {
        for t in &mut self.terms {
            t.2 *= factor;
        }
        self
    }

    pub fn plus(mut self, other: &LinearForm) -> Self {
        for &(m, k, w) in &other.terms {
            self.push(m, k, w);
        }
        self
    }

    /// Rewrite every mode in `basis` using `a_± = (a_H ± a_V)/√2` and its inverse
    /// (the same real orthogonal matrix).
    pub fn express_in(&self, basis: PolarizationBasis) -> Self {
        let mut out = Self::new();
        for &(mode, kind, w) in &self.terms {
            if mode.basis() == basis {
                out.push(mode, kind, w);
                continue;
            }
            let first = mode.polarization.slot() == 0;
            let [p0, p1] = basis.pair();
            let s = FRAC_1_SQRT_2;
            out.push(ModeLabel::new(mode.spatial, p0), kind, w * s);
            out.push(ModeLabel::new(mode.spatial, p1), kind, w * if first { s } else { -s });
        }
        out
    }

    /// `form |ψ⟩`; creation terms beyond the cutoff are dropped into the leakage.
    pub fn apply(&self, state: &PureState) -> Result<PureState> {
        let resolved = self.express_in(state.modes().basis());
        let cutoff = state.cutoff();
        let mut idx = Vec::with_capacity(resolved.terms.len());
        for &(m, k, w) in &resolved.terms {
            idx.push((state.modes().require(m)?, k, w));
        }
        let mut out = TermMap::default();
        out.reserve(state.len() * idx.len());
        let mut dropped = 0.0;
        for (bs, amp) in state.term_map() {
            for &(i, kind, w) in &idx {
                let n = bs.count(i);
                match kind {
                    LadderKind::Annihilate => {
                        if n == 0 {
                            continue;
                        }
                        let f = (n as f64).sqrt();
                        *out.entry(bs.with_count(i, n - 1)).or_default() += amp * w * f;
                    }
                    LadderKind::Create => {
                        let f = (n as f64 + 1.0).sqrt();
                        if n >= cutoff {
                            dropped += (amp * w * f).norm_sqr();
                            continue;
                        }
                        *out.entry(bs.with_count(i, n + 1)).or_default() += amp * w * f;
                    }
                }
            }
        }
        Ok(PureState::from_parts(
            state.modes().clone(),
            cutoff,
            state.leakage() + dropped,
            out,
        ))
    }

    /// `‖form^order |ψ⟩‖²`, which equals ⟨(form†)^order form^order⟩.
    pub fn power_norm_sqr(&self, state: &PureState, order: usize) -> Result<f64> {
        let mut s = state.clone();
        for _ in 0..order {
            s = self.apply(&s)?;
        }
        Ok(s.norm_sqr())
    }
}
