use std::fmt;

use crate::error::{Error, Result};

/// Spatial modes: the signal `k1`, the idler `k2`, and `b1`, the vacuum port of a
/// loss beam splitter acting on `k1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spatial {
    K1,
    K2,
    B1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarization {
    H,
    V,
    Plus,
    Minus,
}

/// The two orthonormal polarization pairs a state may be expanded in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolarizationBasis {
    /// `{H, V}`
    Linear,
    /// `{+, -}` with `a†_± = (a†_H ± a†_V)/√2`
    Diagonal,
}

impl PolarizationBasis {
    pub fn pair(self) -> [Polarization; 2] {
        match self {
            PolarizationBasis::Linear => [Polarization::H, Polarization::V],
            PolarizationBasis::Diagonal => [Polarization::Plus, Polarization::Minus],
        }
    }

    pub fn other(self) -> Self {
        match self {
            PolarizationBasis::Linear => PolarizationBasis::Diagonal,
            PolarizationBasis::Diagonal => PolarizationBasis::Linear,
        }
    }
}

impl Polarization {
    pub fn basis(self) -> PolarizationBasis {
        match self {
            Polarization::H | Polarization::V => PolarizationBasis::Linear,
            Polarization::Plus | Polarization::Minus => PolarizationBasis::Diagonal,
        }
    }

    /// Position within its basis pair (H, + → 0; V, − → 1).
    pub fn slot(self) -> usize {
        match self {
            Polarization::H | Polarization::Plus => 0,
            Polarization::V | Polarization::Minus => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeLabel {
    pub spatial: Spatial,
    pub polarization: Polarization,
}

impl ModeLabel {
    pub const fn new(spatial: Spatial, polarization: Polarization) -> Self {
        Self { spatial, polarization }
    }

    pub fn basis(self) -> PolarizationBasis {
        self.polarization.basis()
    }

    /// Same spatial mode and slot, polarization taken from `basis`.
    pub fn in_basis(self, basis: PolarizationBasis) -> Self {
        Self::new(self.spatial, basis.pair()[self.polarization.slot()])
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.spatial {
            Spatial::K1 => "k1",
            Spatial::K2 => "k2",
            Spatial::B1 => "b1",
        };
        let p = match self.polarization {
            Polarization::H => "H",
            Polarization::V => "V",
            Polarization::Plus => "+",
            Polarization::Minus => "-",
        };
        write!(f, "{s}{p}")
    }
}

pub const MAX_MODES: usize = 6;

/// Canonically ordered, duplicate-free list of modes sharing one polarization basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModeSet {
    modes: Vec<ModeLabel>,
    basis: PolarizationBasis,
}

impl ModeSet {
    pub fn new(modes: impl IntoIterator<Item = ModeLabel>) -> Result<Self> {
        let mut modes: Vec<ModeLabel> = modes.into_iter().collect();
        modes.sort();
        modes.dedup();
        let Some(first) = modes.first() else {
            return Err(Error::InvalidParameter("mode set must not be empty".into()));
        };
        let basis = first.basis();
        if let Some(odd) = modes.iter().find(|m| m.basis() != basis) {
            return Err(Error::BasisMismatch(format!(
                "mode {odd} mixes polarization bases with {first}"
            )));
        }
        if modes.len() > MAX_MODES {
            return Err(Error::TooManyModes {
                got: modes.len(),
                max: MAX_MODES,
            });
        }
        Ok(Self { modes, basis })
    }

    /// Both polarizations of each listed spatial mode.
    pub fn spatial(spatial: &[Spatial], basis: PolarizationBasis) -> Result<Self> {
        Self::new(spatial.iter().flat_map(|&s| basis.pair().map(|p| ModeLabel::new(s, p))))
    }

    pub fn basis(&self) -> PolarizationBasis {
        self.basis
    }

    pub fn labels(&self) -> &[ModeLabel] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn index_of(&self, mode: ModeLabel) -> Option<usize> {
        self.modes.binary_search(&mode).ok()
    }

    pub fn require(&self, mode: ModeLabel) -> Result<usize> {
        if mode.basis() != self.basis {
            return Err(Error::BasisMismatch(format!(
                "mode {mode} is not expressed in the state's {:?} basis",
                self.basis
            )));
        }
        self.index_of(mode).ok_or(Error::ModeNotPresent(mode))
    }

    pub fn in_basis(&self, basis: PolarizationBasis) -> Self {
        Self::new(self.modes.iter().map(|m| m.in_basis(basis))).expect("relabeling preserves validity")
    }

    pub fn union(&self, other: &ModeSet) -> Result<Self> {
        Self::new(self.modes.iter().chain(other.modes.iter()).copied())
    }

    pub fn contains_set(&self, other: &ModeSet) -> bool {
        other.modes.iter().all(|m| self.index_of(*m).is_some())
    }
}
