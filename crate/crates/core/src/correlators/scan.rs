use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use super::analyzer::Analyzer;
use crate::channels::WeightedMixture;
use crate::error::{Error, Result};
use crate::fock::{FockBasisState, ModeLabel, PureState, Spatial};
use crate::math::{binomial, falling_sqrt};
use crate::opa::AmplifierGeometry;

/// `G^(M)(θ)` sampled on a phase grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FringeScan {
    pub order: usize,
    pub theta: Vec<f64>,
    pub values: Vec<f64>,
    pub geometry: Option<AmplifierGeometry>,
    pub seed: String,
}

impl FringeScan {
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn scaled(mut self, factor: f64) -> Self {
        self.values.iter_mut().for_each(|v| *v *= factor);
        self
    }
}

/// `points` equally spaced phases `2πk/points` on `[0, 2π)`.
pub fn theta_grid(points: usize) -> Result<Vec<f64>> {
    if points == 0 {
        return Err(Error::InvalidGrid("need at least one point".into()));
    }
    Ok((0..points).map(|k| TAU * k as f64 / points as f64).collect())
}

pub fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("empty grid".into()));
    }
    if grid.iter().any(|t| !(0.0..TAU).contains(t)) {
        return Err(Error::InvalidGrid("phases must lie in [0, 2π)".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid("phases must be strictly increasing".into()));
    }
    Ok(())
}

const GRAM_CHUNK: usize = 4096;

/// Gram matrix `W_kl = ⟨φ_k|φ_l⟩` of `φ_k = a_x^k a_y^{M−k} |ψ⟩`, row-major.
///
/// Any analyzer `c = α a_x + β a_y` on one spatial mode then gives
/// `G^(M) = Σ_kl conj(w_k) w_l W_kl` with `w_k = C(M,k) α^k β^{M−k}`, so a whole
/// phase scan costs one pass over the state.
fn moment_gram(state: &PureState, x: Option<usize>, y: Option<usize>, order: usize) -> Vec<Complex64> {
    let m = order;
    let count = |bs: &FockBasisState, i: Option<usize>| i.map_or(0, |i| bs.count(i) as usize);
    let zero = || vec![Complex64::default(); (m + 1) * (m + 1)];
    let accumulate = |mut w: Vec<Complex64>, (bs, amp): (&FockBasisState, &Complex64)| {
        let (nx, ny) = (count(bs, x), count(bs, y));
        for k in 0..=m {
            if nx < k || ny < m - k {
                continue;
            }
            let left = (amp * falling_sqrt(nx as u64, k as u64) * falling_sqrt(ny as u64, (m - k) as u64)).conj();
            for l in 0..=m {
                // Partner term with the same reduced state t = bs − (k, M−k).
                let (px, py) = (nx - k + l, ny + k - l);
                let partner = if l == k {
                    Some(*amp)
                } else {
                    let mut other = *bs;
                    if let Some(i) = x {
                        other = other.with_count(i, px as u16);
                    } else if px > 0 {
                        continue;
                    }
                    if let Some(i) = y {
                        other = other.with_count(i, py as u16);
                    } else if py > 0 {
                        continue;
                    }
                    state.term_map().get(&other).copied()
                };
                if let Some(b) = partner {
                    let right = b * falling_sqrt(px as u64, l as u64) * falling_sqrt(py as u64, (m - l) as u64);
                    w[k * (m + 1) + l] += left * right;
                }
            }
        }
        w
    };
    // Fixed chunks summed in order keep the result independent of the thread count.
    let terms: Vec<_> = state.term_map().iter().collect();
    let partials: Vec<Vec<Complex64>> = terms
        .par_chunks(GRAM_CHUNK)
        .map(|chunk| chunk.iter().copied().fold(zero(), accumulate))
        .collect();
    partials.into_iter().fold(zero(), |mut a, b| {
        a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        a
    })
}

/// Evaluates `⟨(c†)^M c^M⟩` for every phase, analyzing spatial mode `k1`.
pub fn fringe_scan(state: &PureState, analyzer: Analyzer, order: usize, grid: &[f64]) -> Result<FringeScan> {
    validate_grid(grid)?;
    if state.is_empty() {
        return Err(Error::EmptyState);
    }
    let basis = state.modes().basis();
    let [px, py] = basis.pair().map(|p| ModeLabel::new(Spatial::K1, p));
    let (x, y) = (state.modes().index_of(px), state.modes().index_of(py));
    let gram = moment_gram(state, x, y, order);
    let m = order;
    let values = grid
        .iter()
        .map(|&theta| {
            let form = analyzer.form(Spatial::K1, theta).express_in(basis);
            let weight = |mode| {
                form.terms()
                    .iter()
                    .filter(|t| t.0 == mode)
                    .map(|t| t.2)
                    .sum::<Complex64>()
            };
            let (alpha, beta) = (weight(px), weight(py));
            let w: Vec<Complex64> = (0..=m)
                .map(|k| alpha.powu(k as u32) * beta.powu((m - k) as u32) * binomial(m as u32, k as u32) as f64)
                .collect();
            let mut g = Complex64::default();
            for k in 0..=m {
                for l in 0..=m {
                    g += w[k].conj() * w[l] * gram[k * (m + 1) + l];
                }
            }
            g.re
        })
        .collect();
    Ok(FringeScan {
        order,
        theta: grid.to_vec(),
        values,
        geometry: None,
        seed: String::new(),
    })
}

/// Reference evaluation of [`fringe_scan`]: applies `c(θ)` to the state `M`
/// times for every phase and takes the squared norm.
pub fn fringe_scan_direct(state: &PureState, analyzer: Analyzer, order: usize, grid: &[f64]) -> Result<FringeScan> {
    validate_grid(grid)?;
    if state.is_empty() {
        return Err(Error::EmptyState);
    }
    let values = grid
        .par_iter()
        .map(|&theta| analyzer.form(Spatial::K1, theta).power_norm_sqr(state, order))
        .collect::<Result<Vec<f64>>>()?;
    Ok(FringeScan {
        order,
        theta: grid.to_vec(),
        values,
        geometry: None,
        seed: String::new(),
    })
}

/// Weighted sum of the component fringes of a mixture.
pub fn mixture_fringe_scan(
    mixture: &WeightedMixture,
    analyzer: Analyzer,
    order: usize,
    grid: &[f64],
) -> Result<FringeScan> {
    let mut values = vec![0.0; grid.len()];
    for (w, s) in mixture.components() {
        if *w == 0.0 {
            continue;
        }
        let scan = fringe_scan(s, analyzer, order, grid)?;
        for (acc, v) in values.iter_mut().zip(scan.values) {
            *acc += w * v;
        }
    }
    Ok(FringeScan {
        order,
        theta: grid.to_vec(),
        values,
        geometry: None,
        seed: "mixture".into(),
    })
}
