//! Output states of the amplifiers written out term by term.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::gain::GainParams;
use super::truncation::Truncation;
use crate::error::Result;
use crate::fock::{FockBasisState, ModeSet, PolarizationBasis, PureState, Spatial, TermMap, PRUNE_RELATIVE};
use crate::math::ln_factorial;
use crate::photonic::change_basis;

fn finish(modes: ModeSet, trunc: &Truncation, terms: TermMap) -> Result<PureState> {
    check_norm(
        PureState::from_parts(modes, trunc.cutoff, 0.0, terms).pruned(PRUNE_RELATIVE),
        trunc,
    )
}

fn check_norm(state: PureState, trunc: &Truncation) -> Result<PureState> {
    let leakage = (1.0 - state.norm_sqr()).max(0.0) + state.leakage();
    trunc.check(leakage)?;
    Ok(state.with_leakage(leakage))
}

/// Collinear amplifier fed with `|1H;1V⟩`:
/// `(1/C) Σ_n Γ^{n−1}(n/C² − Γ²) |nH;nV⟩`, in the `{H,V}` basis.
pub fn collinear_amplified_2photon(gain: &GainParams, trunc: &Truncation) -> Result<PureState> {
    let (c, gamma) = (gain.c(), gain.gamma());
    let modes = ModeSet::spatial(&[Spatial::K1], PolarizationBasis::Linear)?;
    let mut terms = TermMap::default();
    terms.insert(FockBasisState::default(), Complex64::new(-gamma / c, 0.0));
    for n in 1..=trunc.cutoff {
        let amp = gamma.powi(n as i32 - 1) * (n as f64 / (c * c) - gamma * gamma) / c;
        if amp == 0.0 && n > 1 {
            break;
        }
        terms.insert(FockBasisState::from_counts(&[n, n]), Complex64::new(amp, 0.0));
    }
    finish(modes, trunc, terms)
}

/// Collinear amplifier, vacuum input: `(1/C) Σ_n Γ^n |nH;nV⟩`.
pub fn collinear_spontaneous(gain: &GainParams, trunc: &Truncation) -> Result<PureState> {
    let (c, gamma) = (gain.c(), gain.gamma());
    let modes = ModeSet::spatial(&[Spatial::K1], PolarizationBasis::Linear)?;
    let mut terms = TermMap::default();
    for n in 0..=trunc.cutoff {
        let amp = gamma.powi(n as i32) / c;
        if amp == 0.0 {
            break;
        }
        terms.insert(FockBasisState::from_counts(&[n, n]), Complex64::new(amp, 0.0));
    }
    finish(modes, trunc, terms)
}

/// ln((Γ/2)^i / i!) plus the bookkeeping for Γ = 0, where only i = 0 survives.
fn ln_half_gamma_power(gamma: f64, i: u32) -> Option<f64> {
    if i == 0 {
        return Some(0.0);
    }
    if gamma == 0.0 {
        return None;
    }
    Some(i as f64 * (gamma / 2.0).ln() - ln_factorial(i as u64))
}

/// Collinear amplifier fed with `(|3+⟩ − |3−⟩)/√2`. The expansion is a double
/// sum in the `{+,−}` basis, where each polarization is squeezed independently
/// (even backgrounds `2i`, `2j` on top of three- and one-photon imbalances);
/// the result is returned in `{H,V}`, where it is sparse. Single-mode squeezing
/// spreads over twice as many photons per mode as pair emission, so the sum
/// runs to twice the cutoff before the basis change.
pub fn collinear_amplified_3photon(gain: &GainParams, trunc: &Truncation) -> Result<PureState> {
    let (c, gamma) = (gain.c(), gain.gamma());
    let modes = ModeSet::spatial(&[Spatial::K1], PolarizationBasis::Diagonal)?;
    let wide = trunc.cutoff.saturating_mul(2).saturating_add(3);
    let cutoff = wide as u32;
    let mut terms = TermMap::default();
    let outer_a = 1.0 / (12f64.sqrt() * c.powi(4));
    let outer_b = -gamma * 3f64.sqrt() / (2.0 * c * c);
    let half_max = cutoff / 2 + 1;
    for i in 0..=half_max {
        let Some(li) = ln_half_gamma_power(gamma, i) else { break };
        for j in 0..=half_max {
            let Some(lj) = ln_half_gamma_power(gamma, j) else { break };
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let base = li + lj;
            let lf = |k: u32| ln_factorial(k as u64);
            let mut put = |p: u32, m: u32, amp: f64| {
                if p <= cutoff && m <= cutoff && amp != 0.0 {
                    *terms
                        .entry(FockBasisState::from_counts(&[p as u16, m as u16]))
                        .or_default() += Complex64::new(amp, 0.0);
                }
            };
            let (ti, tj) = (2 * i, 2 * j);
            put(ti + 3, tj, sign * outer_a * (base + 0.5 * (lf(ti + 3) + lf(tj))).exp());
            put(ti, tj + 3, -sign * outer_a * (base + 0.5 * (lf(ti) + lf(tj + 3))).exp());
            put(ti + 1, tj, sign * outer_b * (base + 0.5 * (lf(ti + 1) + lf(tj))).exp());
            put(ti, tj + 1, sign * outer_b * (base + 0.5 * (lf(ti) + lf(tj + 1))).exp());
        }
    }
    let diagonal = PureState::from_parts(modes, wide, 0.0, terms).pruned(PRUNE_RELATIVE);
    let linear = change_basis(&diagonal, PolarizationBasis::Linear)?;
    check_norm(linear.truncated(trunc.cutoff), trunc)
}

/// Non-collinear amplifier fed with an `N`-photon NOON state on `k1`:
///
/// `(1/(√2 √N! C^{N+2})) Σ_n Γ^n Σ_m (−1)^m [ √((n−m+N)!/(n−m)!) |(n−m+N)+, m−⟩₁
///   − √((m+N)!/m!) |(n−m)+, (m+N)−⟩₁ ] |m+, (n−m)−⟩₂`
///
/// Mode order is `(k1+, k1−, k2+, k2−)`. `N = 0` gives the spontaneous state
/// `(1/C²) Σ_n Γ^n Σ_m (−1)^m |(n−m)+, m−⟩₁|m+, (n−m)−⟩₂`.
pub fn noncollinear_amplified_noon(photons: u32, gain: &GainParams, trunc: &Truncation) -> Result<PureState> {
    let (c, gamma) = (gain.c(), gain.gamma());
    let modes = ModeSet::spatial(&[Spatial::K1, Spatial::K2], PolarizationBasis::Diagonal)?;
    let cutoff = trunc.cutoff as u32;
    let nn = photons;
    let mut terms = TermMap::default();
    let ln_gamma = if gamma > 0.0 { gamma.ln() } else { f64::NEG_INFINITY };
    let (ln_pref, pair_weight) = if nn == 0 {
        (-2.0 * c.ln(), 1.0)
    } else {
        (
            -(0.5 * ln_factorial(nn as u64) + (nn as f64 + 2.0) * c.ln()),
            FRAC_1_SQRT_2,
        )
    };
    let max_n = 2 * cutoff;
    for n in 0..=max_n {
        if n > 0 && gamma == 0.0 {
            break;
        }
        let ln_gn = if n == 0 { 0.0 } else { n as f64 * ln_gamma };
        for m in 0..=n {
            let p = n - m;
            if m > cutoff || p > cutoff {
                continue;
            }
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let idler = [m as u16, p as u16];
            if nn == 0 {
                let amp = sign * (ln_pref + ln_gn).exp();
                terms.insert(
                    FockBasisState::from_counts(&[p as u16, m as u16, idler[0], idler[1]]),
                    Complex64::new(amp, 0.0),
                );
                continue;
            }
            let lf = |k: u32| ln_factorial(k as u64);
            if p + nn <= cutoff {
                let amp = sign * pair_weight * (ln_pref + ln_gn + 0.5 * (lf(p + nn) - lf(p))).exp();
                *terms
                    .entry(FockBasisState::from_counts(&[
                        (p + nn) as u16,
                        m as u16,
                        idler[0],
                        idler[1],
                    ]))
                    .or_default() += Complex64::new(amp, 0.0);
            }
            if m + nn <= cutoff {
                let amp = -sign * pair_weight * (ln_pref + ln_gn + 0.5 * (lf(m + nn) - lf(m))).exp();
                *terms
                    .entry(FockBasisState::from_counts(&[
                        p as u16,
                        (m + nn) as u16,
                        idler[0],
                        idler[1],
                    ]))
                    .or_default() += Complex64::new(amp, 0.0);
            }
        }
    }
    finish(modes, trunc, terms)
}
