//! Closed-form correlation functions, visibilities and photon numbers, written
//! exactly as published so that simulations can be checked against them.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::math::{binomial, factorial, multinomial};
use crate::opa::GainParams;

/// Largest correlation order for which multinomial sums are evaluated exactly.
pub const MAX_FORMULA_ORDER: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormulaId {
    /// `N!/2^N [1 + (−1)^{N+1} cos Nφ]`, order `N` on the bare NOON seed.
    SeedFringe,
    /// `N!/(2^M (N−M)!)`, order `M < N` on the bare seed.
    SeedFlat,
    /// `ηᴺ` times [`FormulaId::SeedFringe`].
    SeedLoss,
    /// `3n̄ + 1`, collinear first order with two photons injected.
    CollinearG1,
    /// `2n̄(4 + 7n̄) + ½(7n̄² + 7n̄ + 1)(1 − cos 2θ)`.
    CollinearG2,
    /// `(7n̄² + 7n̄ + 1)/(35n̄² + 23n̄ + 1)`, the visibility of [`FormulaId::CollinearG2`].
    CollinearV2,
    /// `(1 + 7n̄ + 7n̄²)/(1 + 25n̄ + 35n̄²)`, second order of the published higher-order table.
    CollinearV2Series,
    CollinearV3,
    CollinearV4,
    CollinearV5,
    CollinearV6,
    /// `(n̄ + 1)/(5n̄ + 1)`, collinear vacuum input.
    CollinearSpontaneousV2,
    /// `2n̄² + ½(n̄² + n̄)(1 − cos 2θ)`, collinear vacuum input; obtained from the
    /// simulator rather than published.
    CollinearSpontaneousG2,
    /// `a + b cos θ + c cos 2θ + d cos 3θ`, collinear third order with three photons injected.
    CollinearThreePhotonG3,
    /// `M! S^{2M}`, non-collinear vacuum input.
    NoncollinearSpontaneousG,
    /// Non-collinear order `M ≥ N` with an `N`-photon seed.
    NoncollinearG,
    /// Non-collinear order `M < N`; flat in `θ`.
    NoncollinearGBelow,
    /// `η^M` times the lossless non-collinear correlation.
    NoncollinearLoss,
    /// `(M² − M)/(M² + 7M + 8)`, large-gain visibility with `N = 2`.
    AsymptoticVN2,
    /// `(M³ − 3M² + 2M)/(M³ + 15M² + 56M + 48)`.
    AsymptoticVN3,
    /// `(M⁴ − 6M³ + 11M² − 6M)/(M⁴ + 26M³ + 203M² + 538M + 384)`.
    AsymptoticVN4,
    /// `2 sinh²g`.
    MeanPhotonsSpontaneous,
    /// `2 + 6 sinh²g`.
    MeanPhotonsStimulated,
}

impl FormulaId {
    pub const ALL: [FormulaId; 23] = [
        FormulaId::SeedFringe,
        FormulaId::SeedFlat,
        FormulaId::SeedLoss,
        FormulaId::CollinearG1,
        FormulaId::CollinearG2,
        FormulaId::CollinearV2,
        FormulaId::CollinearV2Series,
        FormulaId::CollinearV3,
        FormulaId::CollinearV4,
        FormulaId::CollinearV5,
        FormulaId::CollinearV6,
        FormulaId::CollinearSpontaneousV2,
        FormulaId::CollinearSpontaneousG2,
        FormulaId::CollinearThreePhotonG3,
        FormulaId::NoncollinearSpontaneousG,
        FormulaId::NoncollinearG,
        FormulaId::NoncollinearGBelow,
        FormulaId::NoncollinearLoss,
        FormulaId::AsymptoticVN2,
        FormulaId::AsymptoticVN3,
        FormulaId::AsymptoticVN4,
        FormulaId::MeanPhotonsSpontaneous,
        FormulaId::MeanPhotonsStimulated,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FormulaId::SeedFringe => "seed_fringe",
            FormulaId::SeedFlat => "seed_flat",
            FormulaId::SeedLoss => "seed_loss",
            FormulaId::CollinearG1 => "collinear_g1",
            FormulaId::CollinearG2 => "collinear_g2",
            FormulaId::CollinearV2 => "collinear_v2",
            FormulaId::CollinearV2Series => "collinear_v2_series",
            FormulaId::CollinearV3 => "collinear_v3",
            FormulaId::CollinearV4 => "collinear_v4",
            FormulaId::CollinearV5 => "collinear_v5",
            FormulaId::CollinearV6 => "collinear_v6",
            FormulaId::CollinearSpontaneousV2 => "collinear_spontaneous_v2",
            FormulaId::CollinearSpontaneousG2 => "collinear_spontaneous_g2",
            FormulaId::CollinearThreePhotonG3 => "collinear_three_photon_g3",
            FormulaId::NoncollinearSpontaneousG => "noncollinear_spontaneous_g",
            FormulaId::NoncollinearG => "noncollinear_g",
            FormulaId::NoncollinearGBelow => "noncollinear_g_below",
            FormulaId::NoncollinearLoss => "noncollinear_loss",
            FormulaId::AsymptoticVN2 => "asymptotic_v_n2",
            FormulaId::AsymptoticVN3 => "asymptotic_v_n3",
            FormulaId::AsymptoticVN4 => "asymptotic_v_n4",
            FormulaId::MeanPhotonsSpontaneous => "mean_photons_spontaneous",
            FormulaId::MeanPhotonsStimulated => "mean_photons_stimulated",
        }
    }

    /// The collinear two-photon visibility of order `m` from the published table.
    pub fn collinear_visibility(m: u32) -> Option<FormulaId> {
        Some(match m {
            2 => FormulaId::CollinearV2Series,
            3 => FormulaId::CollinearV3,
            4 => FormulaId::CollinearV4,
            5 => FormulaId::CollinearV5,
            6 => FormulaId::CollinearV6,
            _ => return None,
        })
    }

    pub fn asymptotic_visibility(n: u32) -> Option<FormulaId> {
        Some(match n {
            2 => FormulaId::AsymptoticVN2,
            3 => FormulaId::AsymptoticVN3,
            4 => FormulaId::AsymptoticVN4,
            _ => return None,
        })
    }

    fn is_visibility(self) -> bool {
        matches!(
            self,
            FormulaId::CollinearV2
                | FormulaId::CollinearV2Series
                | FormulaId::CollinearV3
                | FormulaId::CollinearV4
                | FormulaId::CollinearV5
                | FormulaId::CollinearV6
                | FormulaId::CollinearSpontaneousV2
                | FormulaId::AsymptoticVN2
                | FormulaId::AsymptoticVN3
                | FormulaId::AsymptoticVN4
        )
    }
}

/// Inputs to [`eval_formula`]; each formula reads only what it needs.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FormulaParams {
    pub photons: Option<u32>,
    pub order: Option<u32>,
    pub gain: Option<GainParams>,
    pub phase: Option<f64>,
    pub eta: Option<f64>,
}

impl FormulaParams {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn photons(mut self, n: u32) -> Self {
        self.photons = Some(n);
        self
    }

    pub fn order(mut self, m: u32) -> Self {
        self.order = Some(m);
        self
    }

    pub fn gain(mut self, gain: GainParams) -> Self {
        self.gain = Some(gain);
        self
    }

    pub fn phase(mut self, phase: f64) -> Self {
        self.phase = Some(phase);
        self
    }

    pub fn eta(mut self, eta: f64) -> Self {
        self.eta = Some(eta);
        self
    }
}

struct Reader<'a> {
    id: FormulaId,
    p: &'a FormulaParams,
}

impl Reader<'_> {
    fn missing(&self, what: &str) -> Error {
        Error::InvalidFormulaParams {
            formula: self.id.name(),
            reason: format!("missing {what}"),
        }
    }

    fn invalid(&self, reason: String) -> Error {
        Error::InvalidFormulaParams {
            formula: self.id.name(),
            reason,
        }
    }

    fn n(&self) -> Result<u32> {
        self.p.photons.ok_or_else(|| self.missing("photon number N"))
    }

    fn m(&self) -> Result<u32> {
        let m = self.p.order.ok_or_else(|| self.missing("order M"))?;
        if m > MAX_FORMULA_ORDER {
            return Err(self.invalid(format!("order {m} exceeds {MAX_FORMULA_ORDER}")));
        }
        Ok(m)
    }

    fn gain(&self) -> Result<GainParams> {
        self.p.gain.ok_or_else(|| self.missing("gain"))
    }

    fn n_bar(&self) -> Result<f64> {
        Ok(self.gain()?.n_bar())
    }

    fn phase(&self) -> Result<f64> {
        self.p.phase.ok_or_else(|| self.missing("phase"))
    }

    fn eta(&self) -> Result<f64> {
        let eta = self.p.eta.ok_or_else(|| self.missing("transmittivity"))?;
        if !(0.0..=1.0).contains(&eta) {
            return Err(self.invalid(format!("transmittivity {eta} is outside [0, 1]")));
        }
        Ok(eta)
    }
}

fn poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// `(a, b, c, d)` of the collinear three-photon third-order fringe.
pub fn three_photon_coefficients(n: f64) -> [f64; 4] {
    [
        poly(&[6.0, 342.0, 1782.0, 1824.0], n),
        1.5 * poly(&[1.0, 3.0, 3.0], n),
        0.5 * poly(&[0.0, 81.0, 369.0, 288.0], n),
        -13.5 * (n + n * n),
    ]
}

/// Constant part and `cos Nθ` coefficient of the non-collinear correlation for `M ≥ N`.
pub fn noncollinear_terms(n: u32, m: u32, gain: &GainParams) -> (f64, f64) {
    let (c2, s2) = (gain.c() * gain.c(), gain.s() * gain.s());
    let weight = |j: u32| c2.powi(j as i32) * s2.powi((m - j) as i32) * binomial(n, j) as f64;
    let mut constant = 0.0;
    for i in 0..=(m - n) {
        for j in 0..=n {
            constant += weight(j) * multinomial(m, &[i, j]) as f64;
        }
    }
    for i in (m - n + 1)..=m {
        for j in 0..=(m - i) {
            constant += weight(j) * multinomial(m, &[i, j]) as f64;
        }
    }
    let bracket: f64 = (0..=(m - n)).map(|i| multinomial(m, &[i, n]) as f64).sum();
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let oscillation = -sign * c2.powi(n as i32) * s2.powi((m - n) as i32) * bracket;
    let pref = factorial(m) as f64 / 2f64.powi(m as i32);
    (pref * constant, pref * oscillation)
}

fn noncollinear_below(n: u32, m: u32, gain: &GainParams) -> f64 {
    let (c2, s2) = (gain.c() * gain.c(), gain.s() * gain.s());
    let mut acc = 0.0;
    for i in 0..=m {
        for j in 0..=(m - i) {
            acc += c2.powi(j as i32) * s2.powi((m - j) as i32) * multinomial(m, &[i, j]) as f64 * binomial(n, j) as f64;
        }
    }
    factorial(m) as f64 / 2f64.powi(m as i32) * acc
}

fn seed_fringe(n: u32, phase: f64) -> f64 {
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    factorial(n) as f64 / 2f64.powi(n as i32) * (1.0 + sign * (n as f64 * phase).cos())
}

pub fn eval_formula(id: FormulaId, params: &FormulaParams) -> Result<f64> {
    let r = Reader { id, p: params };
    let m_at_least = |m: u32, min: u32| {
        if m < min {
            Err(r.invalid(format!("order {m} must be at least {min}")))
        } else {
            Ok(m)
        }
    };
    Ok(match id {
        FormulaId::SeedFringe => {
            let n = r.n()?;
            if n == 0 || n > 20 {
                return Err(r.invalid(format!("N = {n} must be in 1..=20")));
            }
            seed_fringe(n, r.phase()?)
        }
        FormulaId::SeedFlat => {
            let (n, m) = (r.n()?, r.m()?);
            if m >= n || n > 20 {
                return Err(r.invalid(format!("needs M < N <= 20, got M = {m}, N = {n}")));
            }
            factorial(n) as f64 / (2f64.powi(m as i32) * factorial(n - m) as f64)
        }
        FormulaId::SeedLoss => {
            let n = r.n()?;
            if n == 0 || n > 20 {
                return Err(r.invalid(format!("N = {n} must be in 1..=20")));
            }
            r.eta()?.powi(n as i32) * seed_fringe(n, r.phase()?)
        }
        FormulaId::CollinearG1 => 3.0 * r.n_bar()? + 1.0,
        FormulaId::CollinearG2 => {
            let n = r.n_bar()?;
            2.0 * n * (4.0 + 7.0 * n) + 0.5 * (7.0 * n * n + 7.0 * n + 1.0) * (1.0 - (2.0 * r.phase()?).cos())
        }
        FormulaId::CollinearV2 => {
            let n = r.n_bar()?;
            poly(&[1.0, 7.0, 7.0], n) / poly(&[1.0, 23.0, 35.0], n)
        }
        FormulaId::CollinearV2Series => {
            let n = r.n_bar()?;
            poly(&[1.0, 7.0, 7.0], n) / poly(&[1.0, 25.0, 35.0], n)
        }
        FormulaId::CollinearV3 => {
            let n = r.n_bar()?;
            poly(&[12.0, 48.0, 39.0], n) / poly(&[12.0, 84.0, 91.0], n)
        }
        FormulaId::CollinearV4 => {
            let n = r.n_bar()?;
            poly(&[12.0, 291.0, 822.0, 567.0], n) / poly(&[12.0, 291.0, 1078.0, 903.0], n)
        }
        FormulaId::CollinearV5 => {
            let n = r.n_bar()?;
            poly(&[135.0, 1315.0, 2845.0, 1705.0], n) / poly(&[135.0, 1315.0, 3245.0, 2201.0], n)
        }
        FormulaId::CollinearV6 => {
            let n = r.n_bar()?;
            poly(&[45.0, 1745.0, 10080.0, 17507.0, 9245.0], n) / poly(&[45.0, 1745.0, 10080.0, 18657.0, 10621.0], n)
        }
        FormulaId::CollinearSpontaneousV2 => {
            let n = r.n_bar()?;
            (n + 1.0) / (5.0 * n + 1.0)
        }
        FormulaId::CollinearSpontaneousG2 => {
            let n = r.n_bar()?;
            2.0 * n * n + 0.5 * (n * n + n) * (1.0 - (2.0 * r.phase()?).cos())
        }
        FormulaId::CollinearThreePhotonG3 => {
            let [a, b, c, d] = three_photon_coefficients(r.n_bar()?);
            let t = r.phase()?;
            a + b * t.cos() + c * (2.0 * t).cos() + d * (3.0 * t).cos()
        }
        FormulaId::NoncollinearSpontaneousG => {
            let m = r.m()?;
            factorial(m) as f64 * r.gain()?.s().powi(2 * m as i32)
        }
        FormulaId::NoncollinearG => {
            let (n, m) = (r.n()?, r.m()?);
            if n == 0 {
                return Err(r.invalid("needs N >= 1".into()));
            }
            let m = m_at_least(m, n)?;
            let (constant, osc) = noncollinear_terms(n, m, &r.gain()?);
            constant + osc * (n as f64 * r.phase()?).cos()
        }
        FormulaId::NoncollinearGBelow => {
            let (n, m) = (r.n()?, r.m()?);
            if m >= n {
                return Err(r.invalid(format!("needs M < N, got M = {m}, N = {n}")));
            }
            noncollinear_below(n, m, &r.gain()?)
        }
        FormulaId::NoncollinearLoss => {
            let (n, m, eta) = (r.n()?, r.m()?, r.eta()?);
            let lossless = if m < n {
                noncollinear_below(n, m, &r.gain()?)
            } else {
                eval_formula(FormulaId::NoncollinearG, params)?
            };
            eta.powi(m as i32) * lossless
        }
        FormulaId::AsymptoticVN2 => {
            let m = m_at_least(r.m()?, 1)? as f64;
            (m * m - m) / poly(&[8.0, 7.0, 1.0], m)
        }
        FormulaId::AsymptoticVN3 => {
            let m = m_at_least(r.m()?, 1)? as f64;
            poly(&[0.0, 2.0, -3.0, 1.0], m) / poly(&[48.0, 56.0, 15.0, 1.0], m)
        }
        FormulaId::AsymptoticVN4 => {
            let m = m_at_least(r.m()?, 1)? as f64;
            poly(&[0.0, -6.0, 11.0, -6.0, 1.0], m) / poly(&[384.0, 538.0, 203.0, 26.0, 1.0], m)
        }
        FormulaId::MeanPhotonsSpontaneous => 2.0 * r.n_bar()?,
        FormulaId::MeanPhotonsStimulated => 2.0 + 6.0 * r.n_bar()?,
    })
}

fn ratio(max: f64, min: f64) -> Result<f64> {
    if max + min == 0.0 {
        return Err(Error::UndefinedVisibility);
    }
    Ok((max - min) / (max + min))
}

/// Maximum and minimum of a smooth `2π`-periodic function: dense sampling,
/// then golden-section refinement around the best samples.
fn periodic_extrema(f: impl Fn(f64) -> f64) -> (f64, f64) {
    const SAMPLES: usize = 4096;
    let step = TAU / SAMPLES as f64;
    let refine = |center: f64, sign: f64| {
        let (mut lo, mut hi) = (center - step, center + step);
        let g = |t: f64| sign * f(t);
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..100 {
            let a = hi - phi * (hi - lo);
            let b = lo + phi * (hi - lo);
            if g(a) > g(b) {
                hi = b;
            } else {
                lo = a;
            }
        }
        f(0.5 * (lo + hi))
    };
    let samples: Vec<f64> = (0..SAMPLES).map(|k| f(k as f64 * step)).collect();
    let arg = |better: fn(f64, f64) -> bool| {
        let mut best = 0;
        for (k, v) in samples.iter().enumerate() {
            if better(*v, samples[best]) {
                best = k;
            }
        }
        best as f64 * step
    };
    let max = refine(arg(|a, b| a > b), 1.0).max(samples.iter().copied().fold(f64::MIN, f64::max));
    let min = refine(arg(|a, b| a < b), -1.0).min(samples.iter().copied().fold(f64::MAX, f64::min));
    (max, min)
}

/// Visibility implied by an oscillatory closed form (or the value itself for
/// formulas that already are visibilities).
pub fn visibility_from_formula(id: FormulaId, params: &FormulaParams) -> Result<f64> {
    if id.is_visibility() {
        return eval_formula(id, params);
    }
    let at = |phase: f64| eval_formula(id, &params.phase(phase));
    match id {
        FormulaId::SeedFringe | FormulaId::SeedLoss => {
            let n = params.photons.unwrap_or(1).max(1) as f64;
            let (a, b) = (at(0.0)?, at(std::f64::consts::PI / n)?);
            ratio(a.max(b), a.min(b))
        }
        FormulaId::CollinearG2 | FormulaId::CollinearSpontaneousG2 => ratio(at(std::f64::consts::FRAC_PI_2)?, at(0.0)?),
        FormulaId::CollinearThreePhotonG3 => {
            at(0.0)?;
            let [a, b, c, d] = three_photon_coefficients(params.gain.expect("checked above").n_bar());
            let (max, min) = periodic_extrema(|t| a + b * t.cos() + c * (2.0 * t).cos() + d * (3.0 * t).cos());
            ratio(max, min)
        }
        FormulaId::NoncollinearG | FormulaId::NoncollinearLoss => {
            at(0.0)?;
            let (n, m) = (params.photons.unwrap_or(0), params.order.unwrap_or(0));
            if m < n {
                return Err(Error::NotOscillatory(id.name()));
            }
            let (constant, osc) = noncollinear_terms(n, m, params.gain.as_ref().expect("checked above"));
            ratio(constant + osc.abs(), constant - osc.abs())
        }
        _ => Err(Error::NotOscillatory(id.name())),
    }
}
