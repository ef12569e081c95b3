use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::fock::{LinearForm, ModeLabel, Polarization, Spatial};

/// Which single-mode annihilator `c(θ)` of the analyzed spatial mode a fringe
/// records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Analyzer {
    /// Polarization rotation by `θ/2`: `c = cos(θ/2) a_H − sin(θ/2) a_V`.
    Rotation,
    /// Interference of the two diagonal polarizations: `c = (a_+ − e^{−iθ} a_−)/√2`,
    /// i.e. `c† = (a†_+ − e^{iθ} a†_−)/√2`.
    PhaseReveal,
    /// Phase shift `e^{iθ n̂₋}` followed by an H polarizer, written as the
    /// equivalent annihilator `c = (a_+ + e^{iθ} a_−)/√2`. This is the seed
    /// interferometer with `θ` playing the role of `φ`.
    PhaseScan,
}

impl Analyzer {
    pub fn name(self) -> &'static str {
        match self {
            Analyzer::Rotation => "rotation",
            Analyzer::PhaseReveal => "phase-reveal",
            Analyzer::PhaseScan => "phase-scan",
        }
    }

    pub fn form(self, spatial: Spatial, theta: f64) -> LinearForm {
        let m = |p| ModeLabel::new(spatial, p);
        let s = FRAC_1_SQRT_2;
        match self {
            Analyzer::Rotation => LinearForm::annihilators([
                (m(Polarization::H), Complex64::new((theta / 2.0).cos(), 0.0)),
                (m(Polarization::V), Complex64::new(-(theta / 2.0).sin(), 0.0)),
            ]),
            Analyzer::PhaseReveal => LinearForm::annihilators([
                (m(Polarization::Plus), Complex64::new(s, 0.0)),
                (m(Polarization::Minus), -Complex64::from_polar(s, -theta)),
            ]),
            Analyzer::PhaseScan => LinearForm::annihilators([
                (m(Polarization::Plus), Complex64::new(s, 0.0)),
                (m(Polarization::Minus), Complex64::from_polar(s, theta)),
            ]),
        }
    }
}
