//! Amplifier unitary applied in normal-ordered (disentangled) form,
//! `U(g) = e^{ΓK₊} C^{−(n̂ + d/2)} e^{−ΓK₋}`, where `n̂` counts photons in the
//! `d` coupled modes. Each exponential is applied as a Taylor series; `K₋`
//! terminates on its own and `K₊` only raises, so retained amplitudes are exact
//! and everything past the cutoff is accounted as leakage.

use num_complex::Complex64;

use super::gain::GainParams;
use super::geometry::{AmplifierGeometry, PairGenerator};
use super::truncation::Truncation;
use crate::error::{Error, Result};
use crate::fock::{PureState, Spatial, TermMap, PRUNE_RELATIVE};
use crate::photonic::change_basis;

/// Relative size below which a further Taylor term is treated as converged.
const SERIES_TOLERANCE: f64 = 1e-16;

fn norm_sqr(terms: &TermMap) -> f64 {
    terms.values().map(|a| a.norm_sqr()).sum()
}

fn add_into(acc: &mut TermMap, term: &TermMap) {
    for (bs, a) in term {
        *acc.entry(*bs).or_default() += *a;
    }
}

fn lower_series(gen: &PairGenerator, terms: &TermMap, gamma: f64) -> TermMap {
    let mut acc = terms.clone();
    let mut term = terms.clone();
    let mut k = 1.0;
    while !term.is_empty() {
        term = gen.lower(&term, -gamma / k);
        term.retain(|_, a| *a != Complex64::new(0.0, 0.0));
        add_into(&mut acc, &term);
        k += 1.0;
    }
    acc
}

fn raise_series(gen: &PairGenerator, terms: &TermMap, gamma: f64, cutoff: u16) -> TermMap {
    let mut acc = terms.clone();
    let mut term = terms.clone();
    let mut k = 1.0;
    let mut previous = norm_sqr(&term);
    loop {
        let (next, _) = gen.raise(&term, gamma / k, cutoff);
        if next.is_empty() {
            break;
        }
        let size = norm_sqr(&next);
        add_into(&mut acc, &next);
        let total = norm_sqr(&acc);
        // Term norms are unimodal in k; stop once they are shrinking and negligible.
        if size <= previous && size.sqrt() < SERIES_TOLERANCE * total.sqrt() {
            break;
        }
        previous = size;
        term = next;
        k += 1.0;
    }
    acc
}

/// Applies the amplifier of `geometry` to `seed`. The seed may live on any
/// superset of the geometry's modes (extra modes are spectators) in either
/// polarization basis. The output is expressed in the geometry's natural basis,
/// where the state stays sparse.
pub fn amplify(
    seed: &PureState,
    geometry: AmplifierGeometry,
    gain: &GainParams,
    trunc: &Truncation,
) -> Result<PureState> {
    let seed = change_basis(seed, geometry.natural_basis())?;
    let geom_modes = geometry.modes(seed.modes().basis());
    let modes = seed.modes().union(&geom_modes)?;
    let seed = seed.embed(&modes)?.with_cutoff(trunc.cutoff)?;
    let gen = geometry.generator(&modes)?;
    let coupled: Vec<usize> = geom_modes
        .labels()
        .iter()
        .map(|&m| modes.require(m))
        .collect::<Result<_>>()?;

    let input_norm = seed.norm_sqr();
    let prior_leakage = seed.leakage();
    let gamma = gain.gamma();
    let ln_c = gain.c().ln();
    let half_d = gen.coupled_modes() as f64 / 2.0;

    let lowered = lower_series(&gen, seed.term_map(), gamma);
    let scaled: TermMap = lowered
        .into_iter()
        .map(|(bs, a)| {
            let n: f64 = coupled.iter().map(|&i| bs.count(i) as f64).sum();
            (bs, a * (-(n + half_d) * ln_c).exp())
        })
        .collect();
    let out = raise_series(&gen, &scaled, gamma, trunc.cutoff);

    let state = PureState::from_parts(modes, trunc.cutoff, 0.0, out).pruned(PRUNE_RELATIVE);
    let leakage = (input_norm - state.norm_sqr()).max(0.0) + prior_leakage;
    trunc.check(leakage)?;
    Ok(state.with_leakage(leakage))
}

/// Collinear amplifier on a `k1` seed.
pub fn collinear_amplify(seed: &PureState, gain: &GainParams, trunc: &Truncation) -> Result<PureState> {
    amplify(seed, AmplifierGeometry::Collinear, gain, trunc)
}

/// Non-collinear amplifier; the `k2` (idler) input must be vacuum.
pub fn noncollinear_amplify(seed: &PureState, gain: &GainParams, trunc: &Truncation) -> Result<PureState> {
    let idler: Vec<usize> = seed
        .modes()
        .labels()
        .iter()
        .enumerate()
        .filter(|(_, m)| m.spatial == Spatial::K2)
        .map(|(i, _)| i)
        .collect();
    if seed
        .terms()
        .any(|(bs, a)| a.norm_sqr() > 0.0 && idler.iter().any(|&i| bs.count(i) > 0))
    {
        return Err(Error::NonVacuumIdler);
    }
    amplify(seed, AmplifierGeometry::Noncollinear, gain, trunc)
}
