//! Simulation against the closed forms, one report line per formula.

use std::f64::consts::PI;

use noonamp_core::correlators::{default_analyzer, heisenberg_fringe_with, mixture_fringe_scan, HeisenbergOptions};
use noonamp_core::opa::amplify;
use noonamp_core::{
    apply_loss_to_seed, eval_formula, fringe_scan, heisenberg_fringe, make_seed, stimulated_vs_spontaneous_ratio,
    theta_grid, visibility, visibility_from_formula, AmplifierGeometry, Analyzer, FormulaId, FormulaParams, GainParams,
    NoonSpec, PureState, Truncation,
};
use rayon::prelude::*;
use serde_json::json;

use crate::config::{echo_lines, Block, VerifyConfig};
use crate::error::Result;
use crate::output::{Cell, Table};

pub const COLUMNS: [&str; 6] = ["block", "formula", "status", "max_deviation", "tolerance", "checks"];

const POINTWISE_TOL: f64 = 1e-8;
const ASYMPTOTIC_TOL: f64 = 1e-6;
const RATIO_TOL: f64 = 1e-2;
const ASYMPTOTIC_GAIN: f64 = 10.0;
const RATIO_MEAN_PAIRS: f64 = 1e4;

#[derive(Debug, Clone)]
pub struct Comparison {
    pub block: Block,
    pub formula: String,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub checks: usize,
}

impl Comparison {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

/// Accumulates the worst deviation per formula, in first-seen order.
struct Tally {
    block: Block,
    tolerance: Option<f64>,
    lines: Vec<Comparison>,
}

impl Tally {
    fn new(block: Block, tolerance: Option<f64>) -> Self {
        Self {
            block,
            tolerance,
            lines: Vec::new(),
        }
    }

    fn record(&mut self, formula: &str, deviation: f64, default_tol: f64) {
        let deviation = if deviation.is_nan() { f64::INFINITY } else { deviation };
        if let Some(line) = self.lines.iter_mut().find(|l| l.formula == formula) {
            line.max_deviation = line.max_deviation.max(deviation);
            line.checks += 1;
            return;
        }
        self.lines.push(Comparison {
            block: self.block,
            formula: formula.to_string(),
            max_deviation: deviation,
            tolerance: self.tolerance.unwrap_or(default_tol),
            checks: 1,
        });
    }

    fn id(&mut self, id: FormulaId, deviation: f64, default_tol: f64) {
        self.record(id.name(), deviation, default_tol);
    }
}

/// Largest pointwise deviation relative to the largest expected magnitude.
fn scaled_dev(sim: &[f64], expected: &[f64]) -> f64 {
    let scale = expected.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let worst = sim.iter().zip(expected).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if scale > 0.0 {
        worst / scale
    } else {
        worst
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

struct Ctx<'a> {
    config: &'a VerifyConfig,
    grid: Vec<f64>,
}

impl Ctx<'_> {
    fn evolved(&self, n: u32, geometry: AmplifierGeometry, gain: &GainParams) -> Result<PureState> {
        let trunc = self
            .config
            .cutoff
            .map_or_else(|| Truncation::auto(n, gain), Truncation::new);
        let seed = make_seed(n, 0.0, trunc.cutoff)?;
        Ok(amplify(&seed, geometry, gain, &trunc)?)
    }

    fn expected(&self, id: FormulaId, params: FormulaParams, offset: f64) -> Result<Vec<f64>> {
        self.grid
            .iter()
            .map(|&t| Ok(eval_formula(id, &params.phase(t + offset))?))
            .collect()
    }
}

/// The seed fringe behind a fixed-phase analyzer sits π/N away from the
/// published pattern for odd N.
fn seed_offset(n: u32) -> f64 {
    if n % 2 == 1 {
        PI / n as f64
    } else {
        0.0
    }
}

fn seed_block(ctx: &Ctx, b: &mut Tally) -> Result<()> {
    for n in 1..=4u32 {
        let seed = make_seed(n, 0.0, n as u16)?;
        let scan = fringe_scan(&seed, Analyzer::PhaseScan, n as usize, &ctx.grid)?;
        let want = ctx.expected(FormulaId::SeedFringe, FormulaParams::new().photons(n), seed_offset(n))?;
        b.id(FormulaId::SeedFringe, scaled_dev(&scan.values, &want), POINTWISE_TOL);
        for m in 1..n {
            let scan = fringe_scan(&seed, Analyzer::PhaseScan, m as usize, &ctx.grid)?;
            let flat = eval_formula(FormulaId::SeedFlat, &FormulaParams::new().photons(n).order(m))?;
            b.id(
                FormulaId::SeedFlat,
                scaled_dev(&scan.values, &vec![flat; ctx.grid.len()]),
                POINTWISE_TOL,
            );
        }
        let eta = ctx.config.eta;
        let mixture = apply_loss_to_seed(&NoonSpec::new(n, 0.0), eta, n as u16)?;
        let lossy = mixture_fringe_scan(&mixture, Analyzer::PhaseScan, n as usize, &ctx.grid)?;
        let want = ctx.expected(
            FormulaId::SeedLoss,
            FormulaParams::new().photons(n).eta(eta),
            seed_offset(n),
        )?;
        b.id(FormulaId::SeedLoss, scaled_dev(&lossy.values, &want), POINTWISE_TOL);
    }
    Ok(())
}

fn collinear_block(ctx: &Ctx, b: &mut Tally) -> Result<()> {
    let seed = make_seed(2, 0.0, 2)?;
    for &g in &ctx.config.gain {
        let gain = GainParams::new(g)?;
        let p = FormulaParams::new().gain(gain);
        let state = ctx.evolved(2, AmplifierGeometry::Collinear, &gain)?;
        let g1 = fringe_scan(&state, Analyzer::Rotation, 1, &ctx.grid)?;
        let flat = eval_formula(FormulaId::CollinearG1, &p)?;
        b.id(
            FormulaId::CollinearG1,
            scaled_dev(&g1.values, &vec![flat; ctx.grid.len()]),
            POINTWISE_TOL,
        );
        let g2 = fringe_scan(&state, Analyzer::Rotation, 2, &ctx.grid)?;
        b.id(
            FormulaId::CollinearG2,
            scaled_dev(&g2.values, &ctx.expected(FormulaId::CollinearG2, p, 0.0)?),
            POINTWISE_TOL,
        );
        let v2 = visibility(&g2)?.visibility;
        b.id(
            FormulaId::CollinearV2,
            rel(v2, eval_formula(FormulaId::CollinearV2, &p)?),
            POINTWISE_TOL,
        );
        for m in 2..=6u32 {
            let scan = heisenberg_fringe(
                &seed,
                AmplifierGeometry::Collinear,
                &gain,
                Analyzer::Rotation,
                m as usize,
                &ctx.grid,
            )?;
            let id = FormulaId::collinear_visibility(m).expect("orders 2..=6 are tabulated");
            b.id(
                id,
                rel(visibility(&scan)?.visibility, eval_formula(id, &p)?),
                POINTWISE_TOL,
            );
        }
        let stimulated = eval_formula(FormulaId::MeanPhotonsStimulated, &p)?;
        b.id(
            FormulaId::MeanPhotonsStimulated,
            rel(state.mean_total_photons(), stimulated),
            POINTWISE_TOL,
        );

        let vacuum = ctx.evolved(0, AmplifierGeometry::Collinear, &gain)?;
        let s2 = fringe_scan(&vacuum, Analyzer::Rotation, 2, &ctx.grid)?;
        let want = ctx.expected(FormulaId::CollinearSpontaneousG2, p, 0.0)?;
        b.id(
            FormulaId::CollinearSpontaneousG2,
            scaled_dev(&s2.values, &want),
            POINTWISE_TOL,
        );
        let vs = visibility(&s2)?.visibility;
        b.id(
            FormulaId::CollinearSpontaneousV2,
            rel(vs, eval_formula(FormulaId::CollinearSpontaneousV2, &p)?),
            POINTWISE_TOL,
        );
        let spontaneous = eval_formula(FormulaId::MeanPhotonsSpontaneous, &p)?;
        b.id(
            FormulaId::MeanPhotonsSpontaneous,
            rel(vacuum.mean_total_photons(), spontaneous),
            POINTWISE_TOL,
        );
    }
    Ok(())
}

fn three_photon_block(ctx: &Ctx, b: &mut Tally) -> Result<()> {
    for &g in &ctx.config.gain {
        let gain = GainParams::new(g)?;
        let state = ctx.evolved(3, AmplifierGeometry::Collinear, &gain)?;
        let scan = fringe_scan(&state, Analyzer::PhaseReveal, 3, &ctx.grid)?;
        let want = ctx.expected(FormulaId::CollinearThreePhotonG3, FormulaParams::new().gain(gain), 0.0)?;
        b.id(
            FormulaId::CollinearThreePhotonG3,
            scaled_dev(&scan.values, &want),
            POINTWISE_TOL,
        );
    }
    Ok(())
}

fn noncollinear_block(ctx: &Ctx, b: &mut Tally) -> Result<()> {
    for &g in &ctx.config.gain {
        let gain = GainParams::new(g)?;
        let p = FormulaParams::new().gain(gain);
        let vacuum = ctx.evolved(0, AmplifierGeometry::Noncollinear, &gain)?;
        for m in 1..=4u32 {
            let scan = fringe_scan(&vacuum, Analyzer::PhaseReveal, m as usize, &ctx.grid)?;
            let flat = eval_formula(FormulaId::NoncollinearSpontaneousG, &p.order(m))?;
            b.id(
                FormulaId::NoncollinearSpontaneousG,
                scaled_dev(&scan.values, &vec![flat; ctx.grid.len()]),
                POINTWISE_TOL,
            );
        }
        for n in 1..=4u32 {
            let state = ctx.evolved(n, AmplifierGeometry::Noncollinear, &gain)?;
            for m in 1..=4u32 {
                let scan = fringe_scan(&state, Analyzer::PhaseReveal, m as usize, &ctx.grid)?;
                let id = if m >= n {
                    FormulaId::NoncollinearG
                } else {
                    FormulaId::NoncollinearGBelow
                };
                let want = ctx.expected(id, p.photons(n).order(m), 0.0)?;
                b.id(id, scaled_dev(&scan.values, &want), POINTWISE_TOL);
            }
        }
    }
    Ok(())
}

fn loss_block(ctx: &Ctx, b: &mut Tally) -> Result<()> {
    let eta = ctx.config.eta;
    let seed = make_seed(2, 0.0, 2)?;
    let geometry = AmplifierGeometry::Noncollinear;
    let options = HeisenbergOptions {
        eta,
        ..Default::default()
    };
    for &g in &ctx.config.gain {
        let gain = GainParams::new(g)?;
        for m in 1..=4u32 {
            let analyzer = default_analyzer(geometry, 2);
            let lossy = heisenberg_fringe_with(&seed, geometry, &gain, analyzer, m as usize, &ctx.grid, &options)?;
            let want = ctx.expected(
                FormulaId::NoncollinearLoss,
                FormulaParams::new().gain(gain).photons(2).order(m).eta(eta),
                0.0,
            )?;
            b.id(
                FormulaId::NoncollinearLoss,
                scaled_dev(&lossy.values, &want),
                POINTWISE_TOL,
            );
        }
    }
    Ok(())
}

fn asymptotic_block(b: &mut Tally) -> Result<()> {
    let gain = GainParams::new(ASYMPTOTIC_GAIN)?;
    for n in 2..=4u32 {
        let id = FormulaId::asymptotic_visibility(n).expect("N in 2..=4 has a limit");
        for m in 1..=8u32 {
            let limit = eval_formula(id, &FormulaParams::new().order(m))?;
            let finite = if m >= n {
                visibility_from_formula(
                    FormulaId::NoncollinearG,
                    &FormulaParams::new().gain(gain).photons(n).order(m),
                )?
            } else {
                0.0
            };
            b.id(id, (finite - limit).abs(), ASYMPTOTIC_TOL);
        }
    }
    Ok(())
}

fn ratio_block(b: &mut Tally) -> Result<()> {
    let r = stimulated_vs_spontaneous_ratio(&GainParams::from_mean_pairs(RATIO_MEAN_PAIRS)?)?;
    b.record("stimulated_to_spontaneous_ratio", rel(r, 7.0), RATIO_TOL);
    Ok(())
}

fn run_block(ctx: &Ctx, block: Block) -> Result<Vec<Comparison>> {
    let mut b = Tally::new(block, ctx.config.tolerance);
    match block {
        Block::Seed => seed_block(ctx, &mut b)?,
        Block::Collinear => collinear_block(ctx, &mut b)?,
        Block::ThreePhoton => three_photon_block(ctx, &mut b)?,
        Block::Noncollinear => noncollinear_block(ctx, &mut b)?,
        Block::Loss => loss_block(ctx, &mut b)?,
        Block::Asym => asymptotic_block(&mut b)?,
        Block::Ratio => ratio_block(&mut b)?,
    }
    Ok(b.lines)
}

pub fn compare(config: &VerifyConfig, pool: &rayon::ThreadPool) -> Result<Vec<Comparison>> {
    let ctx = Ctx {
        config,
        grid: theta_grid(config.grid_points)?,
    };
    let blocks: Vec<Vec<Comparison>> = pool.install(|| {
        config
            .block
            .par_iter()
            .map(|&b| run_block(&ctx, b))
            .collect::<Result<_>>()
    })?;
    Ok(blocks.into_iter().flatten().collect())
}

pub fn report(config: &VerifyConfig, comparisons: &[Comparison]) -> Table {
    let mut table = Table::new(&COLUMNS);
    table.header = echo_lines(config);
    table.meta.push(("config", json!(config)));
    for c in comparisons {
        table.rows.push(vec![
            Cell::Text(c.block.name().into()),
            Cell::Text(c.formula.clone()),
            Cell::Text(if c.passed() { "PASS" } else { "FAIL" }.into()),
            Cell::Real(c.max_deviation),
            Cell::Real(c.tolerance),
            Cell::Int(c.checks as i64),
        ]);
    }
    table
}
