//! Input states: polarization NOON seeds, the `{H,V} ↔ {+,−}` basis change and the
//! interferometric phase shift.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rustc_hash::{FxHashMap, FxHashSet};

use crate::error::{Error, Result};
use crate::fock::{
    FockBasisState, ModeLabel, ModeSet, Polarization, PolarizationBasis, PureState, Spatial, TermMap, PRUNE_RELATIVE,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RelativeSign {
    #[default]
    Minus,
    Plus,
}

/// `(|N+⟩ ∓ e^{iNφ}|N−⟩)/√2` on one spatial mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoonSpec {
    pub photons: u32,
    pub phase: f64,
    pub spatial: Spatial,
    pub sign: RelativeSign,
}

impl NoonSpec {
    pub fn new(photons: u32, phase: f64) -> Self {
        Self {
            photons,
            phase,
            spatial: Spatial::K1,
            sign: RelativeSign::Minus,
        }
    }
}

pub fn make_noon(spec: &NoonSpec, cutoff: u16) -> Result<PureState> {
    if spec.photons == 0 {
        return Err(Error::InvalidParameter("a NOON state needs N >= 1".into()));
    }
    if spec.photons > cutoff as u32 {
        return Err(Error::CountExceedsCutoff {
            count: spec.photons,
            cutoff,
        });
    }
    let modes = ModeSet::spatial(&[spec.spatial], PolarizationBasis::Diagonal)?;
    let plus = ModeLabel::new(spec.spatial, Polarization::Plus);
    let minus = ModeLabel::new(spec.spatial, Polarization::Minus);
    let n = spec.photons;
    let sign = match spec.sign {
        RelativeSign::Minus => -1.0,
        RelativeSign::Plus => 1.0,
    };
    let rel = Complex64::from_polar(sign * FRAC_1_SQRT_2, n as f64 * spec.phase);
    PureState::from_terms(
        modes,
        cutoff,
        [
            (&[(plus, n)][..], Complex64::new(FRAC_1_SQRT_2, 0.0)),
            (&[(minus, n)][..], rel),
        ],
    )
}

/// NOON seed for `photons >= 1`, vacuum on `k1` for `photons == 0`.
pub fn make_seed(photons: u32, phase: f64, cutoff: u16) -> Result<PureState> {
    if photons == 0 {
        let modes = ModeSet::spatial(&[Spatial::K1], PolarizationBasis::Diagonal)?;
        return Ok(PureState::vacuum(modes, cutoff));
    }
    make_noon(&NoonSpec::new(photons, phase), cutoff)
}

/// Beam-splitter columns for the requested source pairs `(p, q)`: entry `j` is
/// the amplitude of target `|j, p+q−j⟩` in source `|p, q⟩`.
///
/// Whole levels of fixed total `n` are built from `n − 1` with
/// `|p,q⟩ = (√p a†₀|p−1,q⟩ + √q a†₁|p,q−1⟩)/n`, an averaging step that keeps
/// rounding errors from growing with `n` (unlike applying normalized creation
/// operators one at a time). Only the previous level is kept in memory.
fn pair_columns(needed: &FxHashSet<(u16, u16)>) -> FxHashMap<(u16, u16), Vec<f64>> {
    let mut out = FxHashMap::default();
    let Some(max_n) = needed.iter().map(|&(p, q)| (p + q) as usize).max() else {
        return out;
    };
    let mut level = vec![1.0];
    if needed.contains(&(0, 0)) {
        out.insert((0, 0), vec![1.0]);
    }
    for m in 1..=max_n {
        let mut next = vec![0.0; (m + 1) * (m + 1)];
        let s = FRAC_1_SQRT_2 / m as f64;
        for pp in 0..=m {
            let row = &mut next[pp * (m + 1)..(pp + 1) * (m + 1)];
            let qq = m - pp;
            // a†₀ = (b†₀ + b†₁)/√2 on |pp−1, qq⟩ and a†₁ = (b†₀ − b†₁)/√2 on |pp, qq−1⟩.
            for (src, weight, sign) in [(pp.checked_sub(1), pp, 1.0), ((qq > 0).then_some(pp), qq, -1.0)] {
                let Some(src) = src else { continue };
                let w = s * (weight as f64).sqrt();
                for (j, &v) in level[src * m..(src + 1) * m].iter().enumerate() {
                    row[j + 1] += w * v * ((j + 1) as f64).sqrt();
                    row[j] += sign * w * v * ((m - j) as f64).sqrt();
                }
            }
        }
        for pp in 0..=m {
            let key = (pp as u16, (m - pp) as u16);
            if needed.contains(&key) {
                out.insert(key, next[pp * (m + 1)..(pp + 1) * (m + 1)].to_vec());
            }
        }
        level = next;
    }
    out
}

/// Re-expand `state` in the other polarization basis (`a†_± = (a†_H ± a†_V)/√2`).
/// Target terms with a count above the cutoff are dropped into the leakage.
pub fn change_basis(state: &PureState, target: PolarizationBasis) -> Result<PureState> {
    let source = state.modes().basis();
    if source == target {
        return Ok(state.clone());
    }
    let modes = state.modes().in_basis(target);
    // Pair up slots by spatial mode.
    let mut pairs: Vec<(Spatial, Option<usize>, Option<usize>)> = Vec::new();
    for (i, m) in state.modes().labels().iter().enumerate() {
        let entry = match pairs.iter_mut().find(|p| p.0 == m.spatial) {
            Some(e) => e,
            None => {
                pairs.push((m.spatial, None, None));
                pairs.last_mut().unwrap()
            }
        };
        if m.polarization.slot() == 0 {
            entry.1 = Some(i);
        } else {
            entry.2 = Some(i);
        }
    }
    // A half-populated pair cannot be rotated within the same mode set.
    let modes = if pairs.iter().any(|p| p.1.is_none() || p.2.is_none()) {
        let spatial: Vec<Spatial> = pairs.iter().map(|p| p.0).collect();
        let full = ModeSet::spatial(&spatial, source)?;
        return change_basis(&state.embed(&full)?, target);
    } else {
        modes
    };
    let target_index: Vec<(usize, usize)> = pairs
        .iter()
        .map(|(s, _, _)| {
            let [t0, t1] = target.pair();
            (
                modes.index_of(ModeLabel::new(*s, t0)).unwrap(),
                modes.index_of(ModeLabel::new(*s, t1)).unwrap(),
            )
        })
        .collect();

    let cutoff = state.cutoff();
    let mut needed = FxHashSet::default();
    for bs in state.term_map().keys() {
        for &(_, i0, i1) in &pairs {
            needed.insert((bs.count(i0.unwrap()), bs.count(i1.unwrap())));
        }
    }
    let columns = pair_columns(&needed);
    let mut out = TermMap::default();
    let mut dropped = 0.0;
    for (bs, amp) in state.term_map() {
        // Partial products over the spatial pairs processed so far.
        let mut partial: Vec<(FockBasisState, f64)> = vec![(FockBasisState::default(), 1.0)];
        for (pi, &(_, i0, i1)) in pairs.iter().enumerate() {
            let (p, q) = (bs.count(i0.unwrap()), bs.count(i1.unwrap()));
            let coeffs = &columns[&(p, q)];
            let total = p + q;
            let (t0, t1) = target_index[pi];
            let mut next = Vec::with_capacity(partial.len() * coeffs.len());
            for &(acc, w) in &partial {
                for (j, &c) in coeffs.iter().enumerate() {
                    if c == 0.0 {
                        continue;
                    }
                    let j = j as u16;
                    next.push((acc.with_count(t0, j).with_count(t1, total - j), w * c));
                }
            }
            partial = next;
        }
        for (tbs, w) in partial {
            if tbs.max_count() > cutoff {
                dropped += (amp * w).norm_sqr();
                continue;
            }
            *out.entry(tbs).or_default() += amp * w;
        }
    }
    Ok(PureState::from_parts(modes, cutoff, state.leakage() + dropped, out).pruned(PRUNE_RELATIVE))
}

/// `e^{iθ n̂₋}` on the `{+,−}` pair of one spatial mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseShift {
    pub theta: f64,
    pub spatial: Spatial,
}

impl PhaseShift {
    pub fn new(theta: f64) -> Self {
        Self {
            theta,
            spatial: Spatial::K1,
        }
    }
}

pub fn apply_phase_shift(state: &PureState, shift: &PhaseShift) -> Result<PureState> {
    let source = state.modes().basis();
    let diag = change_basis(state, PolarizationBasis::Diagonal)?;
    let minus = ModeLabel::new(shift.spatial, Polarization::Minus);
    let Some(idx) = diag.modes().index_of(minus) else {
        // Mode absent means zero occupation: the shift is the identity.
        return Ok(state.clone());
    };
    let mut out = TermMap::default();
    for (bs, amp) in diag.term_map() {
        let phase = Complex64::from_polar(1.0, shift.theta * bs.count(idx) as f64);
        out.insert(*bs, amp * phase);
    }
    let shifted = PureState::from_parts(diag.modes().clone(), diag.cutoff(), diag.leakage(), out);
    change_basis(&shifted, source)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::fock::{fidelity, inner_product};

    const H: ModeLabel = ModeLabel::new(Spatial::K1, Polarization::H);
    const V: ModeLabel = ModeLabel::new(Spatial::K1, Polarization::V);
    const P: ModeLabel = ModeLabel::new(Spatial::K1, Polarization::Plus);
    const M: ModeLabel = ModeLabel::new(Spatial::K1, Polarization::Minus);

    #[test]
    fn two_photon_noon_is_one_h_one_v() {
        let s = make_noon(&NoonSpec::new(2, 0.0), 4).unwrap();
        let hv = change_basis(&s, PolarizationBasis::Linear).unwrap();
        assert_eq!(hv.len(), 1);
        assert!((hv.amplitude(&[(H, 1), (V, 1)]).unwrap() - 1.0).norm() < 1e-15);
    }

    #[test]
    fn single_photon_noon() {
        let s = make_noon(&NoonSpec::new(1, 0.0), 2).unwrap();
        assert!((s.amplitude(&[(P, 1)]).unwrap().re - FRAC_1_SQRT_2).abs() < 1e-16);
        assert!((s.amplitude(&[(M, 1)]).unwrap().re + FRAC_1_SQRT_2).abs() < 1e-16);
    }

    #[test]
    fn three_photon_noon_at_pi_over_three() {
        let s = make_noon(&NoonSpec::new(3, PI / 3.0), 4).unwrap();
        assert!((s.amplitude(&[(M, 3)]).unwrap() - FRAC_1_SQRT_2).norm() < 1e-15);
    }

    #[test]
    fn too_many_photons_for_cutoff() {
        assert!(matches!(
            make_noon(&NoonSpec::new(5, 0.0), 4),
            Err(Error::CountExceedsCutoff { .. })
        ));
    }

    #[test]
    fn single_photon_rotation() {
        let modes = ModeSet::spatial(&[Spatial::K1], PolarizationBasis::Linear).unwrap();
        let s = PureState::from_terms(modes, 3, [(&[(H, 1u32)][..], Complex64::new(1.0, 0.0))]).unwrap();
        let d = change_basis(&s, PolarizationBasis::Diagonal).unwrap();
        assert!((d.amplitude(&[(P, 1)]).unwrap().re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((d.amplitude(&[(M, 1)]).unwrap().re - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn vacuum_fixed_by_basis_change() {
        let modes = ModeSet::spatial(&[Spatial::K1, Spatial::K2], PolarizationBasis::Linear).unwrap();
        let d = change_basis(&PureState::vacuum(modes, 3), PolarizationBasis::Diagonal).unwrap();
        assert_eq!(d.len(), 1);
        assert!((d.amplitude(&[]).unwrap() - 1.0).norm() < 1e-16);
    }

    #[test]
    fn zero_phase_is_identity() {
        let s = make_noon(&NoonSpec::new(3, 0.4), 5).unwrap();
        let t = apply_phase_shift(&s, &PhaseShift::new(0.0)).unwrap();
        assert!((inner_product(&s, &t).unwrap() - 1.0).norm() < 1e-14);
    }

    #[test]
    fn phase_shift_builds_phased_noon() {
        let phi = 0.37;
        for n in 1..=4 {
            let s0 = make_noon(&NoonSpec::new(n, 0.0), 6).unwrap();
            let shifted = apply_phase_shift(&s0, &PhaseShift::new(phi)).unwrap();
            let direct = make_noon(&NoonSpec::new(n, phi), 6).unwrap();
            assert!((inner_product(&direct, &shifted).unwrap() - 1.0).norm() < 1e-14);
        }
    }

    #[test]
    fn full_period_shift_returns_seed_up_to_global_phase() {
        for n in 1..=5u32 {
            let s0 = make_noon(&NoonSpec::new(n, 0.0), 6).unwrap();
            let shifted = apply_phase_shift(&s0, &PhaseShift::new(2.0 * PI / n as f64)).unwrap();
            assert!((fidelity(&s0, &shifted).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn phase_shift_on_linear_basis_state_returns_linear_basis() {
        let s = change_basis(
            &make_noon(&NoonSpec::new(2, 0.0), 4).unwrap(),
            PolarizationBasis::Linear,
        )
        .unwrap();
        let t = apply_phase_shift(&s, &PhaseShift::new(0.5)).unwrap();
        assert_eq!(t.modes().basis(), PolarizationBasis::Linear);
        assert!((t.norm_sqr() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn large_pair_columns_stay_orthonormal() {
        let needed: FxHashSet<(u16, u16)> = [(150, 150), (151, 149), (300, 0), (7, 293)].into_iter().collect();
        let cols = pair_columns(&needed);
        for c in cols.values() {
            let norm: f64 = c.iter().map(|x| x * x).sum();
            assert!((norm - 1.0).abs() < 1e-12, "{norm}");
        }
        let dot: f64 = cols[&(150, 150)]
            .iter()
            .zip(&cols[&(151, 149)])
            .map(|(a, b)| a * b)
            .sum();
        assert!(dot.abs() < 1e-12);
    }
}
