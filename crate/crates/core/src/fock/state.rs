use std::collections::BTreeMap;

use num_complex::Complex64;
use rustc_hash::FxHashMap;

use super::mode::{ModeLabel, ModeSet, MAX_MODES};
use crate::error::{Error, Result};

/// Relative amplitude below which terms are dropped after an operation.
pub const PRUNE_RELATIVE: f64 = 1e-15;

/// Occupation numbers, indexed by position in the owning state's [`ModeSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FockBasisState([u16; MAX_MODES]);

impl FockBasisState {
    pub fn from_counts(counts: &[u16]) -> Self {
        let mut occ = [0u16; MAX_MODES];
        occ[..counts.len()].copy_from_slice(counts);
        Self(occ)
    }

    pub fn count(&self, index: usize) -> u16 {
        self.0[index]
    }

    pub fn counts(&self) -> &[u16; MAX_MODES] {
        &self.0
    }

    pub fn total(&self) -> u32 {
        self.0.iter().map(|&c| c as u32).sum()
    }

    pub fn max_count(&self) -> u16 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub(crate) fn with_count(mut self, index: usize, count: u16) -> Self {
        self.0[index] = count;
        self
    }
}

pub(crate) type TermMap = FxHashMap<FockBasisState, Complex64>;

/// Sparse superposition of Fock basis states over a fixed mode set.
///
/// `leakage` records the probability weight discarded by truncation so far; for
/// a state that should be normalized, `|1 - <ψ|ψ>| <= leakage` up to rounding.
#[derive(Debug, Clone)]
pub struct PureState {
    modes: ModeSet,
    cutoff: u16,
    leakage: f64,
    terms: TermMap,
}

impl PureState {
    pub fn vacuum(modes: ModeSet, cutoff: u16) -> Self {
        let mut terms = TermMap::default();
        terms.insert(FockBasisState::default(), Complex64::new(1.0, 0.0));
        Self {
            modes,
            cutoff,
            leakage: 0.0,
            terms,
        }
    }

    /// An empty (zero) vector over `modes`.
    pub fn zero(modes: ModeSet, cutoff: u16) -> Self {
        Self {
            modes,
            cutoff,
            leakage: 0.0,
            terms: TermMap::default(),
        }
    }

    pub(crate) fn from_parts(modes: ModeSet, cutoff: u16, leakage: f64, terms: TermMap) -> Self {
        Self {
            modes,
            cutoff,
            leakage,
            terms,
        }
    }

    /// Build from `(occupations, amplitude)` pairs; unlisted modes are empty.
    pub fn from_terms<'a, I>(modes: ModeSet, cutoff: u16, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a [(ModeLabel, u32)], Complex64)>,
    {
        let mut state = Self::zero(modes, cutoff);
        for (occ, amp) in terms {
            let bs = state.basis_state(occ)?;
            state.add_amplitude(bs, amp);
        }
        Ok(state)
    }

    pub fn basis_state(&self, occupations: &[(ModeLabel, u32)]) -> Result<FockBasisState> {
        let mut bs = FockBasisState::default();
        for &(mode, count) in occupations {
            let idx = self.modes.require(mode)?;
            if count > self.cutoff as u32 {
                return Err(Error::CountExceedsCutoff {
                    count,
                    cutoff: self.cutoff,
                });
            }
            bs = bs.with_count(idx, count as u16);
        }
        Ok(bs)
    }

    pub fn add_amplitude(&mut self, bs: FockBasisState, amp: Complex64) {
        *self.terms.entry(bs).or_default() += amp;
    }

    pub fn modes(&self) -> &ModeSet {
        &self.modes
    }

    pub fn cutoff(&self) -> u16 {
        self.cutoff
    }

    pub fn leakage(&self) -> f64 {
        self.leakage
    }

    pub fn with_leakage(mut self, leakage: f64) -> Self {
        self.leakage = leakage;
        self
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FockBasisState, &Complex64)> {
        self.terms.iter()
    }

    pub(crate) fn term_map(&self) -> &TermMap {
        &self.terms
    }

    /// Terms in ascending basis-state order; use where output must not depend on hashing.
    pub fn sorted_terms(&self) -> Vec<(FockBasisState, Complex64)> {
        let mut v: Vec<_> = self.terms.iter().map(|(k, v)| (*k, *v)).collect();
        v.sort_by_key(|t| t.0);
        v
    }

    pub fn amplitude(&self, occupations: &[(ModeLabel, u32)]) -> Result<Complex64> {
        let bs = self.basis_state(occupations)?;
        Ok(self.terms.get(&bs).copied().unwrap_or_default())
    }

    pub fn count_of(&self, bs: &FockBasisState, mode: ModeLabel) -> Result<u16> {
        Ok(bs.count(self.modes.require(mode)?))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn scaled(mut self, factor: Complex64) -> Self {
        for amp in self.terms.values_mut() {
            *amp *= factor;
        }
        self
    }

    pub fn normalized(self) -> Result<Self> {
        let n = self.norm_sqr();
        if n == 0.0 {
            return Err(Error::EmptyState);
        }
        Ok(self.scaled(Complex64::new(1.0 / n.sqrt(), 0.0)))
    }

    pub fn max_count(&self) -> u16 {
        self.terms.keys().map(|k| k.max_count()).max().unwrap_or(0)
    }

    /// Drop terms with |amplitude| below `relative` × the largest amplitude,
    /// charging their weight to `leakage`.
    pub fn pruned(mut self, relative: f64) -> Self {
        let max = self.terms.values().map(|a| a.norm()).fold(0.0, f64::max);
        let threshold = max * relative;
        let mut dropped = 0.0;
        self.terms.retain(|_, a| {
            let keep = a.norm() > threshold;
            if !keep {
                dropped += a.norm_sqr();
            }
            keep
        });
        self.leakage += dropped;
        self
    }

    /// Re-express over a larger mode set (same basis); the new modes are empty.
    pub fn embed(&self, target: &ModeSet) -> Result<Self> {
        if target.basis() != self.modes.basis() {
            return Err(Error::BasisMismatch(format!(
                "cannot embed a {:?}-basis state into {:?} modes",
                self.modes.basis(),
                target.basis()
            )));
        }
        if !target.contains_set(&self.modes) {
            return Err(Error::InvalidParameter(
                "embedding target must contain every mode of the state".into(),
            ));
        }
        if target == &self.modes {
            return Ok(self.clone());
        }
        let map: Vec<usize> = self
            .modes
            .labels()
            .iter()
            .map(|m| target.index_of(*m).expect("checked above"))
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|(bs, a)| {
                let mut out = FockBasisState::default();
                for (i, &j) in map.iter().enumerate() {
                    out = out.with_count(j, bs.count(i));
                }
                (out, *a)
            })
            .collect();
        Ok(Self::from_parts(target.clone(), self.cutoff, self.leakage, terms))
    }

    /// Same amplitudes under a larger per-mode cutoff.
    pub fn with_cutoff(mut self, cutoff: u16) -> Result<Self> {
        if cutoff < self.max_count() {
            return Err(Error::CountExceedsCutoff {
                count: self.max_count() as u32,
                cutoff,
            });
        }
        self.cutoff = cutoff;
        Ok(self)
    }

    /// Lowers the cutoff, moving the weight of terms above it into the leakage.
    pub fn truncated(mut self, cutoff: u16) -> Self {
        let mut dropped = 0.0;
        self.terms.retain(|bs, a| {
            let keep = bs.max_count() <= cutoff;
            if !keep {
                dropped += a.norm_sqr();
            }
            keep
        });
        self.leakage += dropped;
        self.cutoff = cutoff;
        self
    }

    /// Probability of each total photon number.
    pub fn photon_number_distribution(&self) -> BTreeMap<u32, f64> {
        let mut out = BTreeMap::new();
        for (bs, a) in &self.terms {
            *out.entry(bs.total()).or_insert(0.0) += a.norm_sqr();
        }
        out
    }

    /// ⟨n̂_mode⟩
    pub fn mean_occupation(&self, mode: ModeLabel) -> Result<f64> {
        let idx = self.modes.require(mode)?;
        Ok(self
            .terms
            .iter()
            .map(|(bs, a)| bs.count(idx) as f64 * a.norm_sqr())
            .sum::<f64>()
            / self.norm_sqr())
    }

    pub fn mean_total_photons(&self) -> f64 {
        self.terms
            .iter()
            .map(|(bs, a)| bs.total() as f64 * a.norm_sqr())
            .sum::<f64>()
            / self.norm_sqr()
    }

    pub(crate) fn check_compatible(&self, other: &PureState) -> Result<()> {
        if self.modes != other.modes {
            return Err(Error::BasisMismatch(format!(
                "mode sets differ: {:?} vs {:?}",
                self.modes.labels(),
                other.modes.labels()
            )));
        }
        Ok(())
    }
}

/// |⟨a|b⟩|² / (⟨a|a⟩⟨b|b⟩)
pub fn fidelity(a: &PureState, b: &PureState) -> Result<f64> {
    let overlap = super::ladder::inner_product(a, b)?;
    let na = a.norm_sqr();
    let nb = b.norm_sqr();
    if na == 0.0 || nb == 0.0 {
        return Err(Error::EmptyState);
    }
    Ok(overlap.norm_sqr() / (na * nb))
}
