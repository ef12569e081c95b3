//! Photon loss as a beam splitter of intensity transmittivity `η` whose
//! reflected port is discarded.

use num_complex::Complex64;

use crate::correlators::{fringe_scan, Analyzer, FringeScan};
use crate::error::{Error, Result};
use crate::fock::{FockBasisState, ModeLabel, ModeSet, PureState, Spatial, TermMap, PRUNE_RELATIVE};
use crate::math::{binomial, ln_factorial};
use crate::photonic::{make_noon, NoonSpec};

/// Equal loss on both polarizations of one spatial mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossChannel {
    eta: f64,
    spatial: Spatial,
}

fn check_eta(eta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidParameter(format!(
            "transmittivity {eta} is outside [0, 1]"
        )));
    }
    Ok(())
}

impl LossChannel {
    pub fn new(eta: f64, spatial: Spatial) -> Result<Self> {
        check_eta(eta)?;
        if spatial == Spatial::B1 {
            return Err(Error::InvalidParameter(
                "the ancilla mode cannot be a loss target".into(),
            ));
        }
        Ok(Self { eta, spatial })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn spatial(&self) -> Spatial {
        self.spatial
    }
}

/// Probability-weighted ensemble of pure states.
#[derive(Debug, Clone)]
pub struct WeightedMixture {
    components: Vec<(f64, PureState)>,
}

impl WeightedMixture {
    pub fn new(components: Vec<(f64, PureState)>) -> Result<Self> {
        if components.iter().any(|(w, _)| *w < 0.0 || !w.is_finite()) {
            return Err(Error::InvalidParameter("mixture weights must be non-negative".into()));
        }
        let total: f64 = components.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "mixture weights sum to {total}, not 1"
            )));
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[(f64, PureState)] {
        &self.components
    }

    /// `Σ_k w_k f(ψ_k)` for any per-state expectation `f`.
    pub fn expectation(&self, mut f: impl FnMut(&PureState) -> Result<f64>) -> Result<f64> {
        let mut acc = 0.0;
        for (w, s) in &self.components {
            if *w > 0.0 {
                acc += w * f(s)?;
            }
        }
        Ok(acc)
    }
}

/// The NOON seed after loss: the coherent `N`-photon part survives with weight
/// `ηᴺ`; `i < N` surviving photons leave the incoherent mixture
/// `½(|i+,0−⟩⟨·| + |0+,i−⟩⟨·|)` with binomial weight `C(N,i) ηⁱ (1−η)^{N−i}`.
pub fn apply_loss_to_seed(seed: &NoonSpec, eta: f64, cutoff: u16) -> Result<WeightedMixture> {
    check_eta(eta)?;
    let noon = make_noon(seed, cutoff)?;
    let n = seed.photons;
    let modes = noon.modes().clone();
    let [plus, minus] = crate::fock::PolarizationBasis::Diagonal
        .pair()
        .map(|p| ModeLabel::new(seed.spatial, p));
    let mut components = vec![(eta.powi(n as i32), noon)];
    for i in 0..n {
        let w = binomial(n, i) as f64 * eta.powi(i as i32) * (1.0 - eta).powi((n - i) as i32);
        let one = Complex64::new(1.0, 0.0);
        if i == 0 {
            components.push((w, PureState::vacuum(modes.clone(), cutoff)));
            continue;
        }
        for mode in [plus, minus] {
            let s = PureState::from_terms(modes.clone(), cutoff, [(&[(mode, i)][..], one)])?;
            components.push((0.5 * w, s));
        }
    }
    WeightedMixture::new(components)
}

/// Beam splitter `d† = √η c† + i√(1−η) b†` on each polarization of the target
/// mode, with fresh vacuum ancillae `b` on spatial mode `B1`. Tracing the
/// ancillae is implicit: any expectation of system operators on the enlarged
/// pure state equals the lossy-channel value.
pub fn purify(state: &PureState, channel: &LossChannel) -> Result<PureState> {
    let basis = state.modes().basis();
    if state.modes().labels().iter().any(|m| m.spatial == Spatial::B1) {
        return Err(Error::InvalidParameter("state already carries loss ancillae".into()));
    }
    let targets = basis.pair().map(|p| ModeLabel::new(channel.spatial, p));
    let ancillae = basis.pair().map(|p| ModeLabel::new(Spatial::B1, p));
    let modes = state
        .modes()
        .union(&ModeSet::new(targets.iter().chain(ancillae.iter()).copied())?)?;
    let state = state.embed(&modes)?;
    let slots: Vec<(usize, usize)> = targets
        .iter()
        .zip(&ancillae)
        .map(|(t, a)| Ok((modes.require(*t)?, modes.require(*a)?)))
        .collect::<Result<_>>()?;

    let (t, r) = (channel.eta.sqrt(), (1.0 - channel.eta).sqrt());
    let split = |n: u16| -> Vec<(u16, Complex64)> {
        let phase = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
        ];
        (0..=n)
            .filter_map(|j| {
                let lost = n - j;
                let mag = (0.5 * (ln_factorial(n as u64) - ln_factorial(j as u64) - ln_factorial(lost as u64))).exp()
                    * t.powi(j as i32)
                    * r.powi(lost as i32);
                (mag != 0.0).then(|| (j, phase[(lost % 4) as usize] * mag))
            })
            .collect()
    };

    let mut terms: TermMap = state.term_map().clone();
    for &(sys, anc) in &slots {
        let mut next = TermMap::default();
        for (bs, amp) in &terms {
            for (kept, f) in split(bs.count(sys)) {
                let lost = bs.count(sys) - kept;
                let out: FockBasisState = bs.with_count(sys, kept).with_count(anc, lost);
                *next.entry(out).or_default() += amp * f;
            }
        }
        terms = next;
    }
    Ok(PureState::from_parts(modes, state.cutoff(), state.leakage(), terms).pruned(PRUNE_RELATIVE))
}

/// Fringe through a loss channel, evaluated on the ancilla-purified state.
pub fn lossy_correlation(
    state: &PureState,
    channel: &LossChannel,
    analyzer: Analyzer,
    order: usize,
    grid: &[f64],
) -> Result<FringeScan> {
    fringe_scan(&purify(state, channel)?, analyzer, order, grid)
}
