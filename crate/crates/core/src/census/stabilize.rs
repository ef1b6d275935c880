//! Stabilization detection.
//!
//! Detection is staged. The population sequence is the cheap filter: a
//! counter per candidate period P tracks how long pop(t) == pop(t-P) has held
//! continuously. Once a candidate has held for `confirm_periods` full
//! periods, the expensive check runs: a digest of the state that first
//! factors out per-component translation (cluster, normalise each cluster to
//! its corner, hash the sorted shapes) must match across the whole window.
//! Escaping gliders therefore do not block detection — their normalised shape
//! cycle is what repeats, not their position.
//!
//! The reported stabilization generation is found by walking the digest
//! match backwards through the retained history to the earliest generation
//! the periodicity holds.

use super::{CensusError, CensusLimits};
use crate::ca::{CellState, Grid, Topology};
use crate::fxhash::FxHashSet;
use crate::genome::Seed;
use sha2::{Digest, Sha256};
use std::collections::VecDeque;

/// A settled pattern: one full period of states plus where it settled.
#[derive(Clone, Debug)]
pub struct StabilizedPattern {
    /// Minimal whole-pattern period (up to per-component translation).
    pub period: u32,
    /// `period` consecutive states from the confirmed window, oldest first;
    /// each state is a sorted cell list.
    pub phases: Vec<Vec<(i32, i32)>>,
    /// Earliest generation from which the pattern repeats.
    pub stabilization_generation: u64,
}

struct HistoryEntry {
    cells: Vec<(i32, i32)>,
    digest: Option<[u8; 32]>,
}

struct History {
    entries: VecDeque<HistoryEntry>,
    /// Generation of entries.front().
    base: u64,
    capacity: usize,
}

impl History {
    fn new(capacity: usize) -> Self {
        Self { entries: VecDeque::with_capacity(capacity), base: 0, capacity }
    }

    fn push(&mut self, generation: u64, cells: Vec<(i32, i32)>) {
        debug_assert_eq!(self.base + self.entries.len() as u64, generation);
        if self.entries.len() == self.capacity {
            self.entries.pop_front();
            self.base += 1;
        }
        self.entries.push_back(HistoryEntry { cells, digest: None });
    }

    fn contains(&self, generation: u64) -> bool {
        generation >= self.base && generation < self.base + self.entries.len() as u64
    }

    fn cells(&self, generation: u64) -> &[(i32, i32)] {
        &self.entries[(generation - self.base) as usize].cells
    }

    /// Translation-factored digest of the state at `generation`, memoised.
    fn digest(&mut self, generation: u64) -> [u8; 32] {
        let idx = (generation - self.base) as usize;
        if let Some(d) = self.entries[idx].digest {
            return d;
        }
        let d = component_digest(&self.entries[idx].cells);
        self.entries[idx].digest = Some(d);
        d
    }
}

/// Hash of the multiset of translation-normalised connected components.
fn component_digest(cells: &[(i32, i32)]) -> [u8; 32] {
    let clusters = cluster(cells, 2);
    let mut shapes: Vec<Vec<(i32, i32)>> = clusters.into_iter().map(|c| normalize(&c)).collect();
    shapes.sort();
    let mut hasher = Sha256::new();
    for shape in &shapes {
        for &(x, y) in shape {
            hasher.update(x.to_le_bytes());
            hasher.update(y.to_le_bytes());
        }
        hasher.update([0xff; 8]);
    }
    hasher.finalize().into()
}

/// Groups cells into clusters by Chebyshev distance <= `radius`.
pub(super) fn cluster(cells: &[(i32, i32)], radius: i32) -> Vec<Vec<(i32, i32)>> {
    let set: FxHashSet<(i32, i32)> = cells.iter().copied().collect();
    let mut seen: FxHashSet<(i32, i32)> = FxHashSet::default();
    let mut out = Vec::new();
    for &start in cells {
        if seen.contains(&start) {
            continue;
        }
        let mut component = Vec::new();
        let mut queue = vec![start];
        seen.insert(start);
        while let Some((x, y)) = queue.pop() {
            component.push((x, y));
            for dy in -radius..=radius {
                for dx in -radius..=radius {
                    if dx == 0 && dy == 0 {
                        continue;
                    }
                    let p = (x + dx, y + dy);
                    if set.contains(&p) && seen.insert(p) {
                        queue.push(p);
                    }
                }
            }
        }
        component.sort_unstable_by_key(|&(x, y)| (y, x));
        out.push(component);
    }
    out
}

/// Translates a cell set so its bounding-box corner sits at the origin.
pub(super) fn normalize(cells: &[(i32, i32)]) -> Vec<(i32, i32)> {
    if cells.is_empty() {
        return Vec::new();
    }
    let min_x = cells.iter().map(|&(x, _)| x).min().unwrap();
    let min_y = cells.iter().map(|&(_, y)| y).min().unwrap();
    let mut out: Vec<(i32, i32)> = cells.iter().map(|&(x, y)| (x - min_x, y - min_y)).collect();
    out.sort_unstable_by_key(|&(x, y)| (y, x));
    out
}

fn sorted_live(grid: &Grid) -> Vec<(i32, i32)> {
    let mut v: Vec<(i32, i32)> = grid.live_cells().map(|(p, _)| p).collect();
    v.sort_unstable_by_key(|&(x, y)| (y, x));
    v
}

/// Runs `seed` alone on an unbounded grid until the pattern repeats with some
/// period P <= `p_max`, confirmed over `confirm_periods` consecutive periods.
pub fn stabilize(seed: &Seed, limits: &CensusLimits) -> Result<StabilizedPattern, CensusError> {
    let p_max = limits.p_max.max(1) as u64;
    let confirm = limits.confirm_periods.max(1) as u64;

    let mut grid = Grid::new(Topology::Unbounded);
    grid.place_pattern(seed, (0, 0), CellState::Red).expect("unbounded placement cannot fail");

    // Room for the confirmation window plus backtracking slack.
    let capacity = ((confirm + 3) * p_max + 64) as usize;
    let mut history = History::new(capacity);
    let mut pops: VecDeque<usize> = VecDeque::with_capacity(p_max as usize + 1);
    let mut run_len = vec![0u64; p_max as usize + 1];

    for t in 0..=limits.g_max {
        let cells = sorted_live(&grid);
        let pop = cells.len();
        history.push(t, cells);

        for p in 1..=p_max as usize {
            if pops.len() >= p && pops[pops.len() - p] == pop {
                run_len[p] += 1;
            } else {
                run_len[p] = 0;
            }
        }
        pops.push_back(pop);
        if pops.len() > p_max as usize {
            pops.pop_front();
        }

        for p in 1..=p_max {
            if run_len[p as usize] < confirm * p {
                continue;
            }
            if confirmed(&mut history, t, p, confirm) {
                return Ok(finish(&mut history, t, p, confirm));
            }
        }

        grid = grid.step();
    }

    let population = history.cells(limits.g_max).len();
    Err(CensusError::Unstabilized { generations: limits.g_max, population })
}

/// Digest-checks periodicity of the last `confirm` periods ending at `t`.
fn confirmed(history: &mut History, t: u64, p: u64, confirm: u64) -> bool {
    let span = confirm * p;
    if t < span || !history.contains(t - span) {
        return false;
    }
    for j in 0..span - p + 1 {
        let a = history.digest(t - j);
        let b = history.digest(t - j - p);
        if a != b {
            return false;
        }
    }
    true
}

fn finish(history: &mut History, t: u64, p: u64, confirm: u64) -> StabilizedPattern {
    // Walk back to the earliest generation where state(g) matches state(g+P).
    let mut g = t - confirm * p;
    while g > 0 && history.contains(g - 1) && history.digest(g - 1) == history.digest(g - 1 + p) {
        g -= 1;
    }
    // Extract the freshest full period so escapees sit as far out as possible.
    let phases: Vec<Vec<(i32, i32)>> =
        (0..p).map(|k| history.cells(t - p + 1 + k).to_vec()).collect();
    StabilizedPattern { period: p as u32, phases, stabilization_generation: g }
}
