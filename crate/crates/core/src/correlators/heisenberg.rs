//! Heisenberg-picture backend. The amplifier maps each input annihilator to
//! `a_k → C a_k + S Σ_j G_kj a†_j`, so the analyzed field after the amplifier
//! is a linear form in input operators and
//! `G^(M)(θ) = ‖c(θ, g)^M |seed⟩‖²`. Only `M` creations ever act, so a cutoff
//! of the seed's largest occupation plus `M` is exact at any gain.

use num_complex::Complex64;
use rayon::prelude::*;

use super::analyzer::Analyzer;
use super::scan::{validate_grid, FringeScan};
use crate::error::{Error, Result};
use crate::fock::{LadderKind, LinearForm, ModeLabel, ModeSet, PureState, Spatial};
use crate::opa::{AmplifierGeometry, GainParams};

pub const DEFAULT_MAX_ORDER: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeisenbergOptions {
    pub max_order: usize,
    /// Transmittivity of a beam splitter on `k1` after the amplifier.
    pub eta: f64,
}

impl Default for HeisenbergOptions {
    fn default() -> Self {
        Self {
            max_order: DEFAULT_MAX_ORDER,
            eta: 1.0,
        }
    }
}

/// Output field `c(θ, g)` in terms of input operators, on `modes`.
pub fn evolved_form(
    analyzer: Analyzer,
    theta: f64,
    geometry: AmplifierGeometry,
    gain: &GainParams,
    modes: &ModeSet,
) -> Result<LinearForm> {
    let basis = modes.basis();
    let couplings = geometry.couplings(basis);
    let partners = |m: ModeLabel| -> Vec<(ModeLabel, f64)> {
        couplings
            .iter()
            .filter_map(|&(a, b, w)| {
                if a == m {
                    Some((b, w))
                } else if b == m {
                    Some((a, w))
                } else {
                    None
                }
            })
            .collect()
    };
    let (c, s) = (gain.c(), gain.s());
    let mut out = LinearForm::new();
    for &(mode, kind, w) in analyzer.form(Spatial::K1, theta).express_in(basis).terms() {
        debug_assert_eq!(kind, LadderKind::Annihilate);
        out.push(mode, LadderKind::Annihilate, w * c);
        for (p, g) in partners(mode) {
            out.push(p, LadderKind::Create, w * (s * g));
        }
    }
    for &(mode, _, _) in out.terms() {
        modes.require(mode)?;
    }
    Ok(out)
}

pub fn heisenberg_fringe(
    seed: &PureState,
    geometry: AmplifierGeometry,
    gain: &GainParams,
    analyzer: Analyzer,
    order: usize,
    grid: &[f64],
) -> Result<FringeScan> {
    heisenberg_fringe_with(
        seed,
        geometry,
        gain,
        analyzer,
        order,
        grid,
        &HeisenbergOptions::default(),
    )
}

pub fn heisenberg_fringe_with(
    seed: &PureState,
    geometry: AmplifierGeometry,
    gain: &GainParams,
    analyzer: Analyzer,
    order: usize,
    grid: &[f64],
    options: &HeisenbergOptions,
) -> Result<FringeScan> {
    validate_grid(grid)?;
    if order > options.max_order {
        return Err(Error::OrderTooLarge {
            order,
            max: options.max_order,
        });
    }
    if !(0.0..=1.0).contains(&options.eta) {
        return Err(Error::InvalidParameter(format!(
            "transmittivity {} is outside [0, 1]",
            options.eta
        )));
    }
    if seed.is_empty() {
        return Err(Error::EmptyState);
    }
    let basis = seed.modes().basis();
    let lossy = options.eta < 1.0;
    let mut modes = seed.modes().union(&geometry.modes(basis))?;
    if lossy {
        let ancillae = ModeSet::spatial(&[Spatial::B1], basis)?;
        modes = modes.union(&ancillae)?;
    }
    let cutoff = seed.max_count() + order as u16 + 1;
    let state = seed.embed(&modes)?.with_cutoff(cutoff)?;

    let values = grid
        .par_iter()
        .map(|&theta| {
            let mut form = evolved_form(analyzer, theta, geometry, gain, &modes)?;
            if lossy {
                // d = √η c − i√(1−η) b, with b the vacuum ancilla of matching polarization.
                let mut loss = LinearForm::new();
                for &(mode, kind, w) in analyzer.form(Spatial::K1, theta).express_in(basis).terms() {
                    let anc = ModeLabel::new(Spatial::B1, mode.polarization);
                    loss.push(anc, kind, w * Complex64::new(0.0, -(1.0 - options.eta).sqrt()));
                }
                form = form.scaled(Complex64::new(options.eta.sqrt(), 0.0)).plus(&loss);
            }
            form.power_norm_sqr(&state, order)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(FringeScan {
        order,
        theta: grid.to_vec(),
        values,
        geometry: Some(geometry),
        seed: String::new(),
    })
}

/// Convenience used by sweeps: the analyzer matching each geometry's fringe.
pub fn default_analyzer(geometry: AmplifierGeometry, seed_photons: u32) -> Analyzer {
    match (geometry, seed_photons) {
        (AmplifierGeometry::Collinear, 0..=2) => Analyzer::Rotation,
        _ => Analyzer::PhaseReveal,
    }
}
