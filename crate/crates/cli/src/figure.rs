//! Theoretical curves as plain tables, ready for external plotting.

use clap::ValueEnum;
use noonamp_core::{eval_formula, FormulaId, FormulaParams, GainParams};
use serde_json::json;

use crate::error::Result;
use crate::output::{Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureId {
    /// Second-order visibility against mean photon number, amplified seed and
    /// vacuum input.
    Fig3,
    /// Published visibilities of orders 2 to 6 against gain.
    Fig4,
    /// Large-gain visibilities against correlation order for N = 2, 3, 4.
    Fig8,
}

impl FigureId {
    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig8 => "fig8",
        }
    }
}

const GAIN_STEP: f64 = 0.05;
const GAIN_STEPS: u32 = 80;
const MAX_FIGURE_ORDER: u32 = 12;

/// `g = k · 0.05` for `k = 0..=80`, computed from the index so every point is
/// reproducible.
fn gain_grid() -> impl Iterator<Item = f64> {
    (0..=GAIN_STEPS).map(|k| k as f64 * GAIN_STEP)
}

fn at(g: f64) -> Result<FormulaParams> {
    Ok(FormulaParams::new().gain(GainParams::new(g)?))
}

fn fig3() -> Result<Table> {
    let mut table = Table::new(&["branch", "g", "mean_photons", "visibility"]);
    let branches = [
        ("stimulated", FormulaId::MeanPhotonsStimulated, FormulaId::CollinearV2),
        (
            "spontaneous",
            FormulaId::MeanPhotonsSpontaneous,
            FormulaId::CollinearSpontaneousV2,
        ),
    ];
    for (branch, photons, vis) in branches {
        for g in gain_grid() {
            let p = at(g)?;
            table.rows.push(vec![
                Cell::Text(branch.into()),
                Cell::Real(g),
                Cell::Real(eval_formula(photons, &p)?),
                Cell::Real(eval_formula(vis, &p)?),
            ]);
        }
    }
    Ok(table)
}

fn fig4() -> Result<Table> {
    let mut table = Table::new(&["g", "V2", "V3", "V4", "V5", "V6"]);
    for g in gain_grid() {
        let p = at(g)?;
        let mut row = vec![Cell::Real(g)];
        for m in 2..=6 {
            let id = FormulaId::collinear_visibility(m).expect("orders 2..=6 are tabulated");
            row.push(Cell::Real(eval_formula(id, &p)?));
        }
        table.rows.push(row);
    }
    Ok(table)
}

fn fig8() -> Result<Table> {
    let mut table = Table::new(&["M", "V_N2", "V_N3", "V_N4"]);
    for m in 1..=MAX_FIGURE_ORDER {
        let p = FormulaParams::new().order(m);
        let mut row = vec![Cell::Int(m as i64)];
        for id in [
            FormulaId::AsymptoticVN2,
            FormulaId::AsymptoticVN3,
            FormulaId::AsymptoticVN4,
        ] {
            row.push(Cell::Real(eval_formula(id, &p)?));
        }
        table.rows.push(row);
    }
    Ok(table)
}

pub fn run(id: FigureId) -> Result<Table> {
    let mut table = match id {
        FigureId::Fig3 => fig3()?,
        FigureId::Fig4 => fig4()?,
        FigureId::Fig8 => fig8()?,
    };
    table.header.push(format!("# figure: {}", id.name()));
    table.meta.push(("figure", json!(id.name())));
    Ok(table)
}
