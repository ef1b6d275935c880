//! Run configuration: a TOML file with `[evolution]`, `[match]`, `[genome]`
//! and `[census]` sections. Every key has a default, so an empty file is a
//! valid full-scale configuration; unknown keys are rejected.

use crate::arena::MatchParams;
use crate::census::CensusLimits;
use crate::evolution::{EvoParams, FitnessMode, GenomeParams};
use crate::genome::CutAxis;
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

/// Environment variable that overrides `[evolution].rng_seed`.
pub const RNG_SEED_ENV: &str = "SEEDLIFE_RNG_SEED";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("invalid value for {key}: {reason}")]
    Invalid { key: &'static str, reason: String },
}

fn invalid(key: &'static str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { key, reason: reason.into() }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvolutionSection {
    pub pop_size: usize,
    pub generations: u32,
    pub tournament_size: usize,
    pub elite_k: usize,
    pub layer2: bool,
    pub layer3: bool,
    pub layer4: bool,
    pub p_sexual: f64,
    pub p_fusion: f64,
    pub fitness_mode: FitnessMode,
    pub rng_seed: u64,
}

impl Default for EvolutionSection {
    fn default() -> Self {
        let d = EvoParams::default();
        Self {
            pop_size: d.pop_size,
            generations: d.generations,
            tournament_size: d.tournament_size,
            elite_k: d.elite_k,
            layer2: d.layer2,
            layer3: d.layer3,
            layer4: d.layer4,
            p_sexual: d.p_sexual,
            p_fusion: d.p_fusion,
            fitness_mode: d.fitness_mode,
            rng_seed: d.rng_seed,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MatchSection {
    pub space_factor: f64,
    pub time_factor: f64,
    pub min_gap: u32,
    pub random_orientation: bool,
}

impl Default for MatchSection {
    fn default() -> Self {
        let d = MatchParams::default();
        Self {
            space_factor: d.space_factor,
            time_factor: d.time_factor,
            min_gap: d.min_gap,
            random_orientation: d.random_orientation,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GenomeSection {
    pub init_rows: usize,
    pub init_cols: usize,
    pub init_density: f64,
    pub p_flip: f64,
    pub p_grow: f64,
    pub fuse_gap: usize,
    pub crossover_axis: CutAxis,
}

impl Default for GenomeSection {
    fn default() -> Self {
        let d = GenomeParams::default();
        Self {
            init_rows: d.init_rows,
            init_cols: d.init_cols,
            init_density: d.init_density,
            p_flip: d.p_flip,
            p_grow: d.p_grow,
            fuse_gap: d.fuse_gap,
            crossover_axis: d.crossover_axis,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CensusSection {
    pub p_max: u32,
    pub confirm_periods: u32,
    pub g_max: u64,
    pub split_pseudo_objects: bool,
}

impl Default for CensusSection {
    fn default() -> Self {
        let d = CensusLimits::default();
        Self {
            p_max: d.p_max,
            confirm_periods: d.confirm_periods,
            g_max: d.g_max,
            split_pseudo_objects: d.split_pseudo_objects,
        }
    }
}

/// Fully resolved configuration; serialized verbatim into run manifests.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub evolution: EvolutionSection,
    #[serde(rename = "match")]
    pub match_params: MatchSection,
    pub genome: GenomeSection,
    pub census: CensusSection,
}

impl Config {
    /// Parses a TOML string and validates every key.
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let config: Config =
            toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Loads from a file; an empty or absent-section file yields defaults.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        Self::from_toml(&text)
    }

    /// Applies the rng-seed environment override, returning the seed used.
    pub fn apply_env_override(&mut self) -> Result<Option<u64>, ConfigError> {
        match std::env::var(RNG_SEED_ENV) {
            Ok(value) => {
                let seed: u64 = value
                    .parse()
                    .map_err(|_| invalid("rng_seed", format!("{RNG_SEED_ENV}={value} is not a u64")))?;
                self.evolution.rng_seed = seed;
                Ok(Some(seed))
            }
            Err(_) => Ok(None),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let e = &self.evolution;
        if e.pop_size < 2 {
            return Err(invalid("pop_size", "population must have at least 2 members"));
        }
        if e.pop_size > 4096 {
            return Err(invalid("pop_size", "populations above 4096 are not supported"));
        }
        if e.generations == 0 {
            return Err(invalid("generations", "must be at least 1"));
        }
        if e.tournament_size < 2 || e.tournament_size > e.pop_size {
            return Err(invalid("tournament_size", "must be in 2..=pop_size"));
        }
        if e.elite_k == 0 || e.elite_k > e.pop_size {
            return Err(invalid(
                "elite_k",
                format!("{} is outside 1..=pop_size ({})", e.elite_k, e.pop_size),
            ));
        }
        let probabilities = [
            ("p_sexual", e.p_sexual),
            ("p_fusion", e.p_fusion),
            ("p_flip", self.genome.p_flip),
            ("p_grow", self.genome.p_grow),
            ("init_density", self.genome.init_density),
        ];
        for (key, p) in probabilities {
            if !(0.0..=1.0).contains(&p) {
                return Err(invalid(key, format!("{p} is outside [0, 1]")));
            }
        }
        if self.genome.init_rows == 0 {
            return Err(invalid("init_rows", "must be at least 1"));
        }
        if self.genome.init_cols == 0 {
            return Err(invalid("init_cols", "must be at least 1"));
        }
        let m = &self.match_params;
        if !(m.space_factor > 0.0) {
            return Err(invalid("space_factor", "must be positive"));
        }
        if !(m.time_factor > 0.0) {
            return Err(invalid("time_factor", "must be positive"));
        }
        let c = &self.census;
        if c.p_max == 0 {
            return Err(invalid("p_max", "must be at least 1"));
        }
        if c.confirm_periods == 0 {
            return Err(invalid("confirm_periods", "must be at least 1"));
        }
        if c.g_max == 0 {
            return Err(invalid("g_max", "must be at least 1"));
        }
        Ok(())
    }

    pub fn evo_params(&self) -> EvoParams {
        EvoParams {
            pop_size: self.evolution.pop_size,
            generations: self.evolution.generations,
            tournament_size: self.evolution.tournament_size,
            elite_k: self.evolution.elite_k,
            layer2: self.evolution.layer2,
            layer3: self.evolution.layer3,
            layer4: self.evolution.layer4,
            p_sexual: self.evolution.p_sexual,
            p_fusion: self.evolution.p_fusion,
            fitness_mode: self.evolution.fitness_mode,
            match_params: self.match_params(),
            genome: self.genome_params(),
            rng_seed: self.evolution.rng_seed,
        }
    }

    pub fn match_params(&self) -> MatchParams {
        MatchParams {
            space_factor: self.match_params.space_factor,
            time_factor: self.match_params.time_factor,
            min_gap: self.match_params.min_gap,
            random_orientation: self.match_params.random_orientation,
        }
    }

    pub fn genome_params(&self) -> GenomeParams {
        GenomeParams {
            init_rows: self.genome.init_rows,
            init_cols: self.genome.init_cols,
            init_density: self.genome.init_density,
            p_flip: self.genome.p_flip,
            p_grow: self.genome.p_grow,
            fuse_gap: self.genome.fuse_gap,
            crossover_axis: self.genome.crossover_axis,
        }
    }

    pub fn census_limits(&self) -> CensusLimits {
        CensusLimits {
            p_max: self.census.p_max,
            confirm_periods: self.census.confirm_periods,
            g_max: self.census.g_max,
            split_pseudo_objects: self.census.split_pseudo_objects,
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }
}
