//! Single-seed ash census in two-state Game of Life.
//!
//! A seed is run alone on an unbounded grid until the whole pattern repeats,
//! up to per-component translation (so escaping spaceships count as settled).
//! The settled pattern is split into ash objects, each object classified as a
//! still life, oscillator or spaceship, and identified by a canonical code
//! that is invariant under translation, the 8 square symmetries and phase
//! shifts. The report aggregates counts per type; productivity is the object
//! count and diversity the type count.

mod names;
mod objects;
mod stabilize;

pub use names::{reference_rank, NamedAsh, NAMED_ASH};
pub use objects::{canonical_code, extract_objects, AshClass, AshObject, AshType};
pub use stabilize::{stabilize, StabilizedPattern};

use crate::genome::Seed;
use crate::rle::seed_digest;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

/// Knobs for stabilization detection and object separation.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CensusLimits {
    /// Largest pattern period the detector will recognise.
    pub p_max: u32,
    /// Number of consecutive periods the repeat must hold before the pattern
    /// counts as settled.
    pub confirm_periods: u32,
    /// Give up after this many generations.
    pub g_max: u64,
    /// Split clusters whose touching-parts evolve independently (bi-blocks,
    /// traffic lights) into their constituent objects, the way the reference
    /// censuses count them.
    pub split_pseudo_objects: bool,
}

impl Default for CensusLimits {
    fn default() -> Self {
        Self { p_max: 30, confirm_periods: 10, g_max: 20_000, split_pseudo_objects: true }
    }
}

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("pattern did not stabilize within {generations} generations (population {population})")]
    Unstabilized { generations: u64, population: usize },
}

/// Ash census of one seed: counts per canonical ash type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusReport {
    pub counts: BTreeMap<AshType, u32>,
    pub seed_digest: String,
}

impl CensusReport {
    pub fn from_counts(counts: BTreeMap<AshType, u32>, seed_digest: String) -> Self {
        Self { counts, seed_digest }
    }

    /// Total number of ash objects.
    pub fn num_objects(&self) -> u32 {
        self.counts.values().sum()
    }

    /// Number of distinct ash types.
    pub fn num_types(&self) -> u32 {
        self.counts.len() as u32
    }
}

/// Quantity of ash a seed generates.
pub fn productivity(report: &CensusReport) -> u32 {
    report.num_objects()
}

/// Number of distinct ash types a seed generates.
pub fn diversity(report: &CensusReport) -> u32 {
    report.num_types()
}

/// Runs the full pipeline: stabilize, extract, classify, aggregate.
pub fn census(seed: &Seed, limits: &CensusLimits) -> Result<CensusReport, CensusError> {
    let stab = stabilize(seed, limits)?;
    let objects = extract_objects(&stab, limits);
    let mut counts: BTreeMap<AshType, u32> = BTreeMap::new();
    for obj in &objects {
        *counts.entry(canonical_code(obj)).or_insert(0) += 1;
    }
    Ok(CensusReport::from_counts(counts, seed_digest(seed)))
}
