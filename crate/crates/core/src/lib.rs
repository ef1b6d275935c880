//! Evolution of seed patterns competing in the Immigration Game, a two-colour
//! variant of Conway's Game of Life, plus an ash census engine and the
//! statistics used to analyse evolved populations.
//!
//! The crate is organised around the pipeline:
//!
//! - [`genome`] — binary-matrix seeds and the reproduction operators
//!   (bit-flip mutation, resizing, crossover, side-by-side fusion, shuffling)
//! - [`ca`] — the cellular-automaton engine (B3/S23 and the two-colour
//!   Immigration rules) on toroidal and unbounded grids
//! - [`arena`] — one-on-one Immigration Game matches with growth scoring
//! - [`evolution`] — the steady-state evolutionary loop with tournament
//!   selection and replace-worst
//! - [`census`] — runs a single seed to quiescence and classifies its ash
//!   (still lifes, oscillators, spaceships) under a canonical code
//! - [`analysis`] — absolute fitness against shuffled copies, rank tables,
//!   Pearson correlations with two-tailed t-tests
//! - [`rle`], [`config`], [`rundir`] — pattern I/O, configuration and
//!   run-directory persistence

pub mod analysis;
pub mod arena;
pub mod ca;
pub mod census;
pub mod config;
pub mod evolution;
pub mod genome;
pub mod rle;
pub mod rng;
pub mod rundir;
pub mod stats;

mod fxhash;

pub use arena::{MatchParams, MatchResult, Outcome};
pub use ca::{CellState, Grid, Topology};
pub use census::{AshClass, AshObject, AshType, CensusLimits, CensusReport};
pub use config::Config;
pub use evolution::{EvoParams, Population, RunLog};
pub use genome::Seed;
