use noonamp_core::correlators::default_analyzer;
use noonamp_core::opa::amplify;
use noonamp_core::{
    fringe_scan, lossy_correlation, make_seed, theta_grid, AmplifierGeometry, GainParams, LossChannel, Spatial,
    Truncation,
};
use rayon::prelude::*;
use serde_json::json;

use crate::config::{echo_lines, ScanConfig};
use crate::error::Result;
use crate::output::{Cell, Table};

pub const COLUMNS: [&str; 8] = ["geometry", "N", "g", "n_bar", "M", "eta", "theta", "G_value"];

/// Fringe values for one gain, one block of rows per order.
fn scan_gain(config: &ScanConfig, g: f64, grid: &[f64]) -> Result<Vec<Vec<Cell>>> {
    let geometry = AmplifierGeometry::from(config.geometry);
    let gain = GainParams::new(g)?;
    let trunc = config
        .cutoff
        .map_or_else(|| Truncation::auto(config.seed_n, &gain), Truncation::new)
        .with_budget(config.tolerance);
    let seed = make_seed(config.seed_n, config.phi, trunc.cutoff)?;
    let state = amplify(&seed, geometry, &gain, &trunc)?;
    let analyzer = default_analyzer(geometry, config.seed_n);
    let channel = LossChannel::new(config.eta, Spatial::K1)?;

    let mut rows = Vec::with_capacity(config.order.len() * grid.len());
    for &m in &config.order {
        let scan = if config.eta < 1.0 {
            lossy_correlation(&state, &channel, analyzer, m as usize, grid)?
        } else {
            fringe_scan(&state, analyzer, m as usize, grid)?
        };
        for (theta, value) in grid.iter().zip(&scan.values) {
            rows.push(vec![
                Cell::Text(geometry.name().to_string()),
                Cell::Int(config.seed_n as i64),
                Cell::Real(g),
                Cell::Real(gain.n_bar()),
                Cell::Int(m as i64),
                Cell::Real(config.eta),
                Cell::Real(*theta),
                Cell::Real(*value),
            ]);
        }
    }
    Ok(rows)
}

/// One row per (g, M, θ), in configuration order regardless of which worker
/// finishes first.
pub fn run(config: &ScanConfig, pool: &rayon::ThreadPool) -> Result<Table> {
    let grid = theta_grid(config.grid_points)?;
    let blocks: Vec<Vec<Vec<Cell>>> = pool.install(|| {
        config
            .gain
            .par_iter()
            .map(|&g| scan_gain(config, g, &grid))
            .collect::<Result<_>>()
    })?;

    let mut table = Table::new(&COLUMNS);
    table.header = echo_lines(config);
    table.meta.push(("config", json!(config)));
    table.rows = blocks.into_iter().flatten().collect();
    Ok(table)
}
