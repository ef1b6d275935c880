//! One-on-one Immigration Game matches.
//!
//! A match builds a square torus sized from the seeds, drops one seed in as
//! red and the other as blue at random positions and orientations with some
//! dead space between them, runs a step budget proportional to the torus
//! side, and scores each player by how much it grew. Shrinking scores zero.

use crate::ca::dense::TorusBoard;
use crate::ca::{CaError, CellState, CountTarget, Grid, Topology};
use crate::genome::{Seed, ALL_TRANSFORMS};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArenaError {
    #[error(
        "torus side {side} cannot hold both seeds ({dims_sum} cells of pattern) plus min_gap {min_gap}; \
         increase space_factor"
    )]
    Geometry { side: i32, dims_sum: i32, min_gap: u32 },
    #[error("placement failed: {0}")]
    Placement(#[from] CaError),
}

/// Sizing and placement knobs for a match.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct MatchParams {
    /// Torus side = ceil(space_factor × max seed dimension).
    pub space_factor: f64,
    /// Step budget = ceil(time_factor × torus side).
    pub time_factor: f64,
    /// Minimum Chebyshev separation between the two bounding boxes.
    pub min_gap: u32,
    /// Rotate/reflect each seed uniformly over the 8 square symmetries.
    pub random_orientation: bool,
}

impl Default for MatchParams {
    fn default() -> Self {
        Self { space_factor: 5.0, time_factor: 10.0, min_gap: 4, random_orientation: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    RedWins,
    BlueWins,
    Tie,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatchResult {
    pub red_growth: usize,
    pub blue_growth: usize,
    pub outcome: Outcome,
}

impl MatchResult {
    fn from_growths(red_growth: usize, blue_growth: usize) -> Self {
        let outcome = match red_growth.cmp(&blue_growth) {
            std::cmp::Ordering::Greater => Outcome::RedWins,
            std::cmp::Ordering::Less => Outcome::BlueWins,
            std::cmp::Ordering::Equal => Outcome::Tie,
        };
        Self { red_growth, blue_growth, outcome }
    }

    /// Win credit for one player: 1 for a win, ½ for a tie, 0 for a loss.
    pub fn credit(&self, player_is_red: bool) -> f64 {
        match (self.outcome, player_is_red) {
            (Outcome::Tie, _) => 0.5,
            (Outcome::RedWins, true) | (Outcome::BlueWins, false) => 1.0,
            _ => 0.0,
        }
    }
}

/// Growth score: max(final − initial, 0). A seed that shrinks scores zero.
pub fn score_growth(initial_count: usize, final_count: usize) -> usize {
    final_count.saturating_sub(initial_count)
}

/// Plays one Immigration Game: `a` as red, `b` as blue.
pub fn play_match(
    a: &Seed,
    b: &Seed,
    params: &MatchParams,
    rng: &mut impl Rng,
) -> Result<MatchResult, ArenaError> {
    let (a, b) = if params.random_orientation {
        (
            a.transformed(ALL_TRANSFORMS[rng.gen_range(0..8)]),
            b.transformed(ALL_TRANSFORMS[rng.gen_range(0..8)]),
        )
    } else {
        (a.clone(), b.clone())
    };

    let max_dim = a.rows().max(a.cols()).max(b.rows()).max(b.cols()) as i32;
    let side = (params.space_factor * max_dim as f64).ceil() as i32;
    let dims_sum = a.rows().max(a.cols()) as i32 + b.rows().max(b.cols()) as i32;
    if side < dims_sum + params.min_gap as i32 {
        return Err(ArenaError::Geometry { side, dims_sum, min_gap: params.min_gap });
    }

    let (origin_a, origin_b) = sample_placements(&a, &b, side, params.min_gap as i32, rng)
        .ok_or(ArenaError::Geometry { side, dims_sum, min_gap: params.min_gap })?;

    let mut grid = Grid::new(Topology::Torus { width: side, height: side });
    grid.place_pattern(&a, origin_a, CellState::Red)?;
    grid.place_pattern(&b, origin_b, CellState::Blue)?;

    let initial_red = a.ones();
    let initial_blue = b.ones();
    let steps = (params.time_factor * side as f64).ceil() as u64;

    let mut board = TorusBoard::from_grid(&grid);
    board.run(steps);
    let final_red = board.count(CountTarget::Colour(CellState::Red));
    let final_blue = board.count(CountTarget::Colour(CellState::Blue));

    Ok(MatchResult::from_growths(
        score_growth(initial_red, final_red),
        score_growth(initial_blue, final_blue),
    ))
}

/// Plays the colour-swapped pair: game 1 has `a` red, game 2 has `b` red.
/// Placements are drawn fresh for each game.
pub fn play_pair(
    a: &Seed,
    b: &Seed,
    params: &MatchParams,
    rng: &mut impl Rng,
) -> Result<(MatchResult, MatchResult), ArenaError> {
    let first = play_match(a, b, params, rng)?;
    let second = play_match(b, a, params, rng)?;
    Ok((first, second))
}

/// Total win credit for `a` over a colour-swapped pair.
pub fn pair_credit(pair: &(MatchResult, MatchResult)) -> f64 {
    pair.0.credit(true) + pair.1.credit(false)
}

fn sample_placements(
    a: &Seed,
    b: &Seed,
    side: i32,
    min_gap: i32,
    rng: &mut impl Rng,
) -> Option<((i32, i32), (i32, i32))> {
    let (aw, ah) = (a.cols() as i32, a.rows() as i32);
    let (bw, bh) = (b.cols() as i32, b.rows() as i32);
    for _ in 0..10_000 {
        let oa = (rng.gen_range(0..=side - aw), rng.gen_range(0..=side - ah));
        let ob = (rng.gen_range(0..=side - bw), rng.gen_range(0..=side - bh));
        let gap_x = torus_interval_gap(oa.0, aw, ob.0, bw, side);
        let gap_y = torus_interval_gap(oa.1, ah, ob.1, bh, side);
        if gap_x.max(gap_y) >= min_gap {
            return Some((oa, ob));
        }
    }
    // Deterministic fallback: split along whichever axis leaves a two-sided
    // gap, otherwise report failure.
    if side >= aw + bw + 2 * min_gap {
        return Some(((0, 0), (aw + min_gap, 0)));
    }
    if side >= ah + bh + 2 * min_gap {
        return Some(((0, 0), (0, ah + min_gap)));
    }
    None
}

/// Gap between the projections of two non-wrapping boxes onto one torus axis:
/// 0 if the intervals overlap, otherwise the shorter arc between them.
fn torus_interval_gap(start_a: i32, len_a: i32, start_b: i32, len_b: i32, side: i32) -> i32 {
    let end_a = start_a + len_a; // exclusive
    let end_b = start_b + len_b;
    if start_b < end_a && start_a < end_b {
        return 0;
    }
    if end_a <= start_b {
        (start_b - end_a).min(side - end_b + start_a)
    } else {
        (start_a - end_b).min(side - end_a + start_b)
    }
}
