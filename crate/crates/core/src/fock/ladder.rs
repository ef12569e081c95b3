use num_complex::Complex64;

use super::mode::ModeLabel;
use super::state::{PureState, TermMap};
use crate::error::{Error, Result};
use crate::math::falling_sqrt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LadderKind {
    Create,
    Annihilate,
}

/// `(a†)^power` or `a^power` on one mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LadderOp {
    pub kind: LadderKind,
    pub mode: ModeLabel,
    pub power: u32,
}

impl LadderOp {
    pub fn create(mode: ModeLabel, power: u32) -> Self {
        Self {
            kind: LadderKind::Create,
            mode,
            power,
        }
    }

    pub fn annihilate(mode: ModeLabel, power: u32) -> Self {
        Self {
            kind: LadderKind::Annihilate,
            mode,
            power,
        }
    }

    pub fn adjoint(self) -> Self {
        let kind = match self.kind {
            LadderKind::Create => LadderKind::Annihilate,
            LadderKind::Annihilate => LadderKind::Create,
        };
        Self { kind, ..self }
    }
}

/// Image of `state` under `op`, unnormalized. Creation terms that would exceed the
/// cutoff are dropped and their weight is added to the leakage.
pub fn apply_ladder(state: &PureState, op: LadderOp) -> Result<PureState> {
    if op.power == 0 {
        return Err(Error::InvalidParameter("ladder power must be positive".into()));
    }
    let idx = state.modes().require(op.mode)?;
    let cutoff = state.cutoff() as u64;
    let p = op.power as u64;
    let mut out = TermMap::default();
    out.reserve(state.len());
    let mut dropped = 0.0;
    for (bs, amp) in state.term_map() {
        let n = bs.count(idx) as u64;
        match op.kind {
            LadderKind::Annihilate => {
                if n < p {
                    continue;
                }
                let f = falling_sqrt(n, p);
                *out.entry(bs.with_count(idx, (n - p) as u16)).or_default() += amp * f;
            }
            LadderKind::Create => {
                let f = falling_sqrt(n + p, p);
                if n + p > cutoff {
                    dropped += amp.norm_sqr() * f * f;
                    continue;
                }
                *out.entry(bs.with_count(idx, (n + p) as u16)).or_default() += amp * f;
            }
        }
    }
    Ok(PureState::from_parts(
        state.modes().clone(),
        state.cutoff(),
        state.leakage() + dropped,
        out,
    ))
}

/// ⟨a|b⟩, conjugate-linear in `a`.
pub fn inner_product(a: &PureState, b: &PureState) -> Result<Complex64> {
    a.check_compatible(b)?;
    let (small, large, conj_small) = if a.len() <= b.len() {
        (a, b, true)
    } else {
        (b, a, false)
    };
    let mut acc = Complex64::default();
    for (bs, x) in small.term_map() {
        if let Some(y) = large.term_map().get(bs) {
            acc += if conj_small { x.conj() * y } else { y.conj() * x };
        }
    }
    Ok(acc)
}

/// ⟨ψ| c_1 c_2 … c_k · a_1 a_2 … a_j |ψ⟩ for creators `c_i` and annihilators `a_i`.
///
/// When the creators are exactly the adjoint of the annihilator product (the
/// Ĝ-type ordering), the result must be real; a non-negligible imaginary part is
/// reported as an error.
pub fn normally_ordered_expectation(
    state: &PureState,
    creators: &[LadderOp],
    annihilators: &[LadderOp],
) -> Result<Complex64> {
    if state.is_empty() {
        return Err(Error::EmptyState);
    }
    if creators.iter().any(|op| op.kind != LadderKind::Create)
        || annihilators.iter().any(|op| op.kind != LadderKind::Annihilate)
    {
        return Err(Error::InvalidParameter(
            "creators must all create and annihilators must all annihilate".into(),
        ));
    }
    let mut right = state.clone();
    for op in annihilators.iter().rev() {
        right = apply_ladder(&right, *op)?;
    }
    // (c_1 … c_k)† = c_k† … c_1†, so c_1† acts on |ψ⟩ first.
    let mut left = state.clone();
    for op in creators {
        left = apply_ladder(&left, op.adjoint())?;
    }
    let value = inner_product(&left, &right)?;

    let hermitian = creators.len() == annihilators.len()
        && creators
            .iter()
            .zip(annihilators.iter().rev())
            .all(|(c, a)| c.adjoint() == *a);
    if hermitian && value.im.abs() > 1e-10 * value.norm().max(1e-300) {
        return Err(Error::NonRealExpectation {
            re: value.re,
            im: value.im,
        });
    }
    Ok(value)
}
