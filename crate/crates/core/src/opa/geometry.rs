use crate::error::Result;
use crate::fock::{ModeLabel, ModeSet, Polarization, PolarizationBasis, Spatial, TermMap};

/// Amplifier configuration. Both are quadratic pair emitters whose creation
/// part is `K₊ = ½ Σ_ij G_ij a†_i a†_j` with a real symmetric `G` satisfying `G² = 1`
/// on the coupled modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AmplifierGeometry {
    /// `a†_{1H} a†_{1V}` on `k1`.
    Collinear,
    /// `a†_{1+} a†_{2−} − a†_{1−} a†_{2+}` on `k1`, `k2`.
    Noncollinear,
}

impl AmplifierGeometry {
    pub fn name(self) -> &'static str {
        match self {
            AmplifierGeometry::Collinear => "collinear",
            AmplifierGeometry::Noncollinear => "noncollinear",
        }
    }

    /// Basis in which the generator is a sum of two-mode pair terms, so each
    /// seed term only spreads along a line of basis states.
    pub fn natural_basis(self) -> PolarizationBasis {
        match self {
            AmplifierGeometry::Collinear => PolarizationBasis::Linear,
            AmplifierGeometry::Noncollinear => PolarizationBasis::Diagonal,
        }
    }

    pub fn spatial_modes(self) -> &'static [Spatial] {
        match self {
            AmplifierGeometry::Collinear => &[Spatial::K1],
            AmplifierGeometry::Noncollinear => &[Spatial::K1, Spatial::K2],
        }
    }

    pub fn modes(self, basis: PolarizationBasis) -> ModeSet {
        ModeSet::spatial(self.spatial_modes(), basis).expect("geometry modes are valid")
    }

    /// Nonzero entries of `G` with `i <= j`, in `basis`.
    pub fn couplings(self, basis: PolarizationBasis) -> Vec<(ModeLabel, ModeLabel, f64)> {
        use Polarization::*;
        use Spatial::*;
        let m = ModeLabel::new;
        match (self, basis) {
            (AmplifierGeometry::Collinear, PolarizationBasis::Linear) => vec![(m(K1, H), m(K1, V), 1.0)],
            // a†_H a†_V = ½(a†_+² − a†_−²)
            (AmplifierGeometry::Collinear, PolarizationBasis::Diagonal) => {
                vec![(m(K1, Plus), m(K1, Plus), 1.0), (m(K1, Minus), m(K1, Minus), -1.0)]
            }
            (AmplifierGeometry::Noncollinear, PolarizationBasis::Diagonal) => {
                vec![(m(K1, Plus), m(K2, Minus), 1.0), (m(K1, Minus), m(K2, Plus), -1.0)]
            }
            // The singlet form is basis independent up to an overall sign.
            (AmplifierGeometry::Noncollinear, PolarizationBasis::Linear) => {
                vec![(m(K1, H), m(K2, V), -1.0), (m(K1, V), m(K2, H), 1.0)]
            }
        }
    }

    pub fn generator(self, modes: &ModeSet) -> Result<PairGenerator> {
        let mut couplings = Vec::new();
        for (a, b, w) in self.couplings(modes.basis()) {
            couplings.push((modes.require(a)?, modes.require(b)?, w));
        }
        Ok(PairGenerator {
            couplings,
            coupled_modes: self.modes(modes.basis()).len(),
        })
    }
}

/// `K₊` and `K₋ = K₊†` resolved against a concrete mode set.
#[derive(Debug, Clone)]
pub struct PairGenerator {
    couplings: Vec<(usize, usize, f64)>,
    coupled_modes: usize,
}

impl PairGenerator {
    pub fn couplings(&self) -> &[(usize, usize, f64)] {
        &self.couplings
    }

    /// Number of modes `G` acts on; the vacuum factor of the disentangled unitary is `C^{-d/2}`.
    pub fn coupled_modes(&self) -> usize {
        self.coupled_modes
    }

    /// `Σ_j G_kj` partners of mode index `k`.
    pub fn partners(&self, k: usize) -> Vec<(usize, f64)> {
        let mut out = Vec::new();
        for &(i, j, w) in &self.couplings {
            if i == k {
                out.push((j, w));
            } else if j == k {
                out.push((i, w));
            }
        }
        out
    }

    /// `scale · K₊ |ψ⟩`; returns the image and the weight of terms past `cutoff`.
    pub(crate) fn raise(&self, terms: &TermMap, scale: f64, cutoff: u16) -> (TermMap, f64) {
        let mut out = TermMap::default();
        out.reserve(terms.len() * self.couplings.len());
        let mut dropped = 0.0;
        for (bs, amp) in terms {
            for &(i, j, w) in &self.couplings {
                let (bs2, f) = if i == j {
                    let n = bs.count(i) as f64;
                    (
                        bs.with_count(i, bs.count(i) + 2),
                        0.5 * w * ((n + 1.0) * (n + 2.0)).sqrt(),
                    )
                } else {
                    let (ni, nj) = (bs.count(i) as f64, bs.count(j) as f64);
                    (
                        bs.with_count(i, bs.count(i) + 1).with_count(j, bs.count(j) + 1),
                        w * ((ni + 1.0) * (nj + 1.0)).sqrt(),
                    )
                };
                let v = amp * (scale * f);
                if bs2.max_count() > cutoff {
                    dropped += v.norm_sqr();
                } else {
                    *out.entry(bs2).or_default() += v;
                }
            }
        }
        (out, dropped)
    }

    /// `scale · K₋ |ψ⟩`
    pub(crate) fn lower(&self, terms: &TermMap, scale: f64) -> TermMap {
        let mut out = TermMap::default();
        for (bs, amp) in terms {
            for &(i, j, w) in &self.couplings {
                if i == j {
                    let n = bs.count(i);
                    if n < 2 {
                        continue;
                    }
                    let f = 0.5 * w * ((n as f64) * (n as f64 - 1.0)).sqrt();
                    *out.entry(bs.with_count(i, n - 2)).or_default() += amp * (scale * f);
                } else {
                    let (ni, nj) = (bs.count(i), bs.count(j));
                    if ni == 0 || nj == 0 {
                        continue;
                    }
                    let f = w * ((ni as f64) * (nj as f64)).sqrt();
                    *out.entry(bs.with_count(i, ni - 1).with_count(j, nj - 1)).or_default() += amp * (scale * f);
                }
            }
        }
        out
    }
}
