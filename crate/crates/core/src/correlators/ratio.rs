use super::analyzer::Analyzer;
use super::heisenberg::heisenberg_fringe;
use super::scan::theta_grid;
use crate::error::{Error, Result};
use crate::opa::{AmplifierGeometry, GainParams};
use crate::photonic::make_seed;

/// Ratio of the second-order fringe maxima of the collinear amplifier with
/// `|1H;1V⟩` injected and with vacuum input, at equal gain.
pub fn stimulated_vs_spontaneous_ratio(gain: &GainParams) -> Result<f64> {
    let grid = theta_grid(720)?;
    let run = |photons| -> Result<f64> {
        let seed = make_seed(photons, 0.0, photons as u16 + 2)?;
        Ok(heisenberg_fringe(&seed, AmplifierGeometry::Collinear, gain, Analyzer::Rotation, 2, &grid)?.max())
    };
    let stimulated = run(2)?;
    let spontaneous = run(0)?;
    if spontaneous == 0.0 {
        return Err(Error::Divergent(format!(
            "no spontaneous emission at g = {}; stimulated maximum is {stimulated}",
            gain.g()
        )));
    }
    Ok(stimulated / spontaneous)
}
