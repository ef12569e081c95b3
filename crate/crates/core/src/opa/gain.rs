use crate::error::{Error, Result};

/// Nonlinear gain `g` with its hyperbolic functions; `n̄ = sinh²g` is the mean
/// pair number per mode pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainParams {
    g: f64,
    cosh: f64,
    sinh: f64,
    tanh: f64,
}

impl GainParams {
    pub fn new(g: f64) -> Result<Self> {
        if !g.is_finite() || g < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "gain must be finite and >= 0, got {g}"
            )));
        }
        Ok(Self {
            g,
            cosh: g.cosh(),
            sinh: g.sinh(),
            tanh: g.tanh(),
        })
    }

    /// Gain producing mean pair number `n̄` (`g = asinh √n̄`).
    pub fn from_mean_pairs(n_bar: f64) -> Result<Self> {
        if !n_bar.is_finite() || n_bar < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "n_bar must be finite and >= 0, got {n_bar}"
            )));
        }
        let mut out = Self::new(n_bar.sqrt().asinh())?;
        // Keep S² = n̄ exact rather than round-tripping through asinh.
        out.sinh = n_bar.sqrt();
        out.cosh = (1.0 + n_bar).sqrt();
        out.tanh = out.sinh / out.cosh;
        Ok(out)
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    /// `C = cosh g`
    pub fn c(&self) -> f64 {
        self.cosh
    }

    /// `S = sinh g`
    pub fn s(&self) -> f64 {
        self.sinh
    }

    /// `Γ = tanh g`
    pub fn gamma(&self) -> f64 {
        self.tanh
    }

    pub fn n_bar(&self) -> f64 {
        self.sinh * self.sinh
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn hyperbolic_identities(g in 0.0f64..6.0) {
            let p = GainParams::new(g).unwrap();
            let rel = (p.c() * p.c() - p.s() * p.s() - 1.0).abs() / (p.c() * p.c());
            prop_assert!(rel < 1e-12);
            prop_assert!((p.gamma() - p.s() / p.c()).abs() < 1e-15);
            prop_assert!(p.gamma() >= 0.0 && p.gamma() < 1.0);
        }
    }

    #[test]
    fn from_mean_pairs_is_exact_in_n_bar() {
        let p = GainParams::from_mean_pairs(1e4).unwrap();
        assert_eq!(p.n_bar(), 1e4);
        assert!((p.g() - 100f64.asinh()).abs() < 1e-14);
    }

    #[test]
    fn negative_gain_rejected() {
        assert!(GainParams::new(-0.1).is_err());
        assert!(GainParams::new(f64::NAN).is_err());
    }
}
