use std::f64::consts::TAU;

use super::scan::FringeScan;
use crate::error::{Error, Result};

/// Harmonics reported by [`visibility`].
pub const DEFAULT_HARMONICS: usize = 12;

/// Fourier component `cosine·cos(hθ) + sine·sin(hθ)` of a fringe; index 0 holds the mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Harmonic {
    pub index: usize,
    pub cosine: f64,
    pub sine: f64,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VisibilityReport {
    pub visibility: f64,
    pub max: f64,
    pub min: f64,
    /// Empty unless the scan covers one period on a uniform grid.
    pub harmonics: Vec<Harmonic>,
}

impl VisibilityReport {
    pub fn harmonic(&self, index: usize) -> Option<&Harmonic> {
        self.harmonics.iter().find(|h| h.index == index)
    }
}

fn is_uniform_period(theta: &[f64]) -> bool {
    let k = theta.len() as f64;
    theta
        .iter()
        .enumerate()
        .all(|(i, t)| (t - TAU * i as f64 / k).abs() < 1e-12)
}

pub fn visibility(scan: &FringeScan) -> Result<VisibilityReport> {
    visibility_with(scan, DEFAULT_HARMONICS)
}

/// Visibility `(max − min)/(max + min)` from the global extrema of the scan,
/// plus DFT harmonics `0..=max_harmonic` (capped below the Nyquist index).
pub fn visibility_with(scan: &FringeScan, max_harmonic: usize) -> Result<VisibilityReport> {
    if scan.values.is_empty() {
        return Err(Error::InvalidGrid("empty scan".into()));
    }
    let (max, min) = (scan.max(), scan.min());
    if max + min == 0.0 {
        return Err(Error::UndefinedVisibility);
    }
    let visibility = (max - min) / (max + min);

    let mut harmonics = Vec::new();
    if is_uniform_period(&scan.theta) {
        let k = scan.values.len();
        let top = max_harmonic.min(k.saturating_sub(1) / 2);
        for h in 0..=top {
            let (mut cs, mut sn) = (0.0, 0.0);
            for (t, v) in scan.theta.iter().zip(&scan.values) {
                let (s, c) = (h as f64 * t).sin_cos();
                cs += v * c;
                sn += v * s;
            }
            let norm = if h == 0 { 1.0 } else { 2.0 } / k as f64;
            let (cosine, sine) = (cs * norm, sn * norm);
            harmonics.push(Harmonic {
                index: h,
                cosine,
                sine,
                magnitude: cosine.hypot(sine),
            });
        }
    }
    Ok(VisibilityReport {
        visibility,
        max,
        min,
        harmonics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlators::theta_grid;

    fn scan_of(f: impl Fn(f64) -> f64, points: usize) -> FringeScan {
        let theta = theta_grid(points).unwrap();
        FringeScan {
            order: 1,
            values: theta.iter().map(|&t| f(t)).collect(),
            theta,
            geometry: None,
            seed: String::new(),
        }
    }

    #[test]
    fn flat_scan_has_zero_visibility() {
        let r = visibility(&scan_of(|_| 3.0, 36)).unwrap();
        assert_eq!(r.visibility, 0.0);
        assert!((r.harmonic(0).unwrap().cosine - 3.0).abs() < 1e-14);
    }

    #[test]
    fn zero_scan_is_undefined() {
        assert_eq!(
            visibility(&scan_of(|_| 0.0, 8)).unwrap_err(),
            Error::UndefinedVisibility
        );
    }

    #[test]
    fn recovers_harmonics() {
        let r = visibility(&scan_of(|t| 5.0 - 2.0 * (2.0 * t).cos() + 0.5 * (3.0 * t).sin(), 72)).unwrap();
        assert!((r.harmonic(2).unwrap().cosine + 2.0).abs() < 1e-13);
        assert!((r.harmonic(3).unwrap().sine - 0.5).abs() < 1e-13);
        assert!(r.harmonic(1).unwrap().magnitude < 1e-13);
        assert!((r.visibility - (r.max - r.min) / (r.max + r.min)).abs() < 1e-15);
    }

    #[test]
    fn nonuniform_grid_skips_harmonics() {
        let mut s = scan_of(|t| 1.0 + t.cos(), 10);
        s.theta[3] += 0.01;
        assert!(visibility(&s).unwrap().harmonics.is_empty());
    }
}
