//! Independent Schrödinger-picture oracle: fixed-step RK4 integration of
//! `d|ψ⟩/dτ = (K₊ − K₋)|ψ⟩` on the truncated space reachable from the seed.

use num_complex::Complex64;
use rustc_hash::FxHashMap;

use super::gain::GainParams;
use super::geometry::AmplifierGeometry;
use super::truncation::Truncation;
use crate::error::{Error, Result};
use crate::fock::{FockBasisState, PureState, TermMap, PRUNE_RELATIVE};
use crate::photonic::change_basis;

/// Largest relative norm change tolerated before the step count is deemed too small.
pub const NORM_DRIFT_BOUND: f64 = 1e-9;

/// Default RK4 step count; linear in `g · n_max` as the generator norm scales with the cutoff.
pub fn default_steps(gain: &GainParams, cutoff: u16) -> usize {
    ((4.0 * gain.g() * cutoff as f64).ceil() as usize).max(64)
}

/// Sparse real matrix in compressed-row form.
struct Csr {
    row_start: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl Csr {
    fn mul(&self, x: &[Complex64], y: &mut [Complex64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in self.row_start[i]..self.row_start[i + 1] {
                acc += x[self.cols[k]] * self.vals[k];
            }
            *yi = acc;
        }
    }
}

pub fn numeric_evolve(
    seed: &PureState,
    geometry: AmplifierGeometry,
    gain: &GainParams,
    trunc: &Truncation,
    steps: Option<usize>,
) -> Result<PureState> {
    let seed = change_basis(seed, geometry.natural_basis())?;
    let modes = seed.modes().union(&geometry.modes(seed.modes().basis()))?;
    let seed = seed.embed(&modes)?.with_cutoff(trunc.cutoff)?;
    let gen = geometry.generator(&modes)?;
    let cutoff = trunc.cutoff;

    // Reachable basis by breadth-first search under K₊ and K₋.
    let mut index: FxHashMap<FockBasisState, usize> = FxHashMap::default();
    let mut basis: Vec<FockBasisState> = Vec::new();
    for (bs, _) in seed.sorted_terms() {
        index.entry(bs).or_insert_with(|| {
            basis.push(bs);
            basis.len() - 1
        });
    }
    let mut triplets: Vec<(usize, usize, f64)> = Vec::new();
    let mut head = 0;
    while head < basis.len() {
        let bs = basis[head];
        let mut single = TermMap::default();
        single.insert(bs, Complex64::new(1.0, 0.0));
        let (up, _) = gen.raise(&single, 1.0, cutoff);
        let down = gen.lower(&single, -1.0);
        for (target, v) in up.into_iter().chain(down) {
            if v.re == 0.0 {
                continue;
            }
            let row = *index.entry(target).or_insert_with(|| {
                basis.push(target);
                basis.len() - 1
            });
            triplets.push((row, head, v.re));
        }
        head += 1;
    }
    triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
    let dim = basis.len();
    let mut row_start = vec![0usize; dim + 1];
    for &(r, _, _) in &triplets {
        row_start[r + 1] += 1;
    }
    for i in 0..dim {
        row_start[i + 1] += row_start[i];
    }
    let matrix = Csr {
        row_start,
        cols: triplets.iter().map(|t| t.1).collect(),
        vals: triplets.iter().map(|t| t.2).collect(),
    };

    let mut psi = vec![Complex64::new(0.0, 0.0); dim];
    for (bs, a) in seed.terms() {
        psi[index[bs]] = *a;
    }
    let initial_norm: f64 = psi.iter().map(|a| a.norm_sqr()).sum();

    let steps = steps.unwrap_or_else(|| default_steps(gain, cutoff));
    if gain.g() > 0.0 {
        if steps == 0 {
            return Err(Error::InvalidParameter("step count must be positive".into()));
        }
        let h = gain.g() / steps as f64;
        let (mut k1, mut k2, mut k3, mut k4) = (psi.clone(), psi.clone(), psi.clone(), psi.clone());
        let mut tmp = psi.clone();
        for _ in 0..steps {
            matrix.mul(&psi, &mut k1);
            for i in 0..dim {
                tmp[i] = psi[i] + k1[i] * (0.5 * h);
            }
            matrix.mul(&tmp, &mut k2);
            for i in 0..dim {
                tmp[i] = psi[i] + k2[i] * (0.5 * h);
            }
            matrix.mul(&tmp, &mut k3);
            for i in 0..dim {
                tmp[i] = psi[i] + k3[i] * h;
            }
            matrix.mul(&tmp, &mut k4);
            for i in 0..dim {
                psi[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0);
            }
        }
    }

    let final_norm: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
    let drift = ((final_norm - initial_norm) / initial_norm).abs();
    if drift > NORM_DRIFT_BOUND {
        return Err(Error::NormDrift {
            drift,
            bound: NORM_DRIFT_BOUND,
        });
    }

    // The truncated generator is norm-preserving, so leakage is estimated
    // from the weight that has reached the boundary.
    let mut terms = TermMap::default();
    let mut boundary = 0.0;
    for (bs, a) in basis.iter().zip(psi) {
        if bs.max_count() >= cutoff {
            boundary += a.norm_sqr();
        }
        terms.insert(*bs, a);
    }
    let leakage = boundary + seed.leakage();
    trunc.check(leakage)?;
    Ok(PureState::from_parts(modes, cutoff, leakage, terms).pruned(PRUNE_RELATIVE))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{fidelity, ModeLabel, ModeSet, Polarization, PolarizationBasis, Spatial};
    use crate::opa::closed_form::*;
    use crate::photonic::{make_noon, NoonSpec};

    #[test]
    fn zero_gain_returns_seed() {
        let seed = make_noon(&NoonSpec::new(2, 0.0), 10).unwrap();
        let g = GainParams::new(0.0).unwrap();
        let out = numeric_evolve(&seed, AmplifierGeometry::Collinear, &g, &Truncation::new(10), None).unwrap();
        let seed = change_basis(&seed, PolarizationBasis::Linear).unwrap();
        assert!((fidelity(&out, &seed).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn squeezed_vacuum_mean_occupation() {
        let modes = ModeSet::spatial(&[Spatial::K1], PolarizationBasis::Linear).unwrap();
        let g = 0.7f64;
        let gain = GainParams::new(g).unwrap();
        let t = Truncation::auto(0, &gain);
        let out = numeric_evolve(
            &PureState::vacuum(modes, t.cutoff),
            AmplifierGeometry::Collinear,
            &gain,
            &t,
            None,
        )
        .unwrap();
        let nh = out
            .mean_occupation(ModeLabel::new(Spatial::K1, Polarization::H))
            .unwrap();
        assert!((nh - g.sinh().powi(2)).abs() < 1e-8 * nh);
    }

    #[test]
    fn agrees_with_closed_forms() {
        for g in [0.2, 0.5, 1.0] {
            let gain = GainParams::new(g).unwrap();
            let t = Truncation::auto(3, &gain);
            let seed = make_noon(&NoonSpec::new(3, 0.0), t.cutoff).unwrap();
            let num = numeric_evolve(&seed, AmplifierGeometry::Collinear, &gain, &t, None).unwrap();
            let closed = collinear_amplified_3photon(&gain, &t).unwrap();
            assert!(1.0 - fidelity(&num, &closed).unwrap() < 1e-7, "g = {g}");

            let seed = make_noon(&NoonSpec::new(2, 0.0), t.cutoff).unwrap();
            let num = numeric_evolve(&seed, AmplifierGeometry::Noncollinear, &gain, &t, None).unwrap();
            let closed = noncollinear_amplified_noon(2, &gain, &t).unwrap();
            assert!(1.0 - fidelity(&num, &closed).unwrap() < 1e-7, "g = {g}");
        }
    }

    #[test]
    fn too_few_steps_is_reported() {
        let gain = GainParams::new(1.0).unwrap();
        let t = Truncation::auto(2, &gain);
        let seed = make_noon(&NoonSpec::new(2, 0.0), t.cutoff).unwrap();
        let err = numeric_evolve(&seed, AmplifierGeometry::Collinear, &gain, &t, Some(3)).unwrap_err();
        assert!(matches!(err, Error::NormDrift { .. }));
    }
}
