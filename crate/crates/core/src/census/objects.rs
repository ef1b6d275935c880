//! Ash object extraction and canonical identity.
//!
//! Objects are clusters of the union of live cells over one full period,
//! using Chebyshev-distance <= 2 adjacency. Each cluster is re-simulated in
//! isolation (clusters are >= 3 apart, so in-situ and solo evolution agree)
//! to find its own period and per-period displacement, which decides the
//! class: still life (period 1, no displacement), oscillator (period > 1, no
//! displacement) or spaceship (net displacement).
//!
//! The canonical code of an object is the lexicographically minimal
//! serialised cell set over all 8 square symmetries and all phases,
//! translated to the corner — so translated, rotated, reflected and
//! phase-shifted copies of an object share one code.

use super::stabilize::{cluster, normalize, StabilizedPattern};
use super::CensusLimits;
use crate::ca::{CellState, Grid, Topology};
use crate::fxhash::FxHashSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AshClass {
    StillLife,
    Oscillator,
    Spaceship,
}

impl AshClass {
    fn tag(self) -> &'static str {
        match self {
            AshClass::StillLife => "sl",
            AshClass::Oscillator => "os",
            AshClass::Spaceship => "sp",
        }
    }
}

/// One ash object at its reference phase.
#[derive(Clone, Debug)]
pub struct AshObject {
    /// Cells at phase 0, absolute coordinates from the settled pattern.
    pub cells: Vec<(i32, i32)>,
    /// Minimal period at which the object recurs, up to translation.
    pub period: u32,
    /// Net translation per period; zero unless the object is a spaceship.
    pub displacement: (i32, i32),
    pub class: AshClass,
    /// False for the rare cluster that never recurs in solo simulation
    /// (a mis-detected late interaction); such objects code from phase 0.
    pub settled: bool,
}

impl AshObject {
    /// Spaceships are the components that escaped the settled core.
    pub fn is_escaped(&self) -> bool {
        self.class == AshClass::Spaceship
    }
}

/// Canonical identity of an ash type: class, period and minimal shape code.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AshType {
    code: String,
}

impl AshType {
    pub(super) fn from_code(code: String) -> Self {
        Self { code }
    }

    pub fn code(&self) -> &str {
        &self.code
    }

    /// Common name from the bundled table, when the type has one.
    pub fn name(&self) -> Option<&'static str> {
        super::names::lookup_name(&self.code)
    }

    /// Common name when known, canonical code otherwise.
    pub fn display_name(&self) -> String {
        self.name().map(str::to_owned).unwrap_or_else(|| self.code.clone())
    }
}

impl std::fmt::Display for AshType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.display_name())
    }
}

/// Evolves an isolated cell set one step on an unbounded grid.
fn step_free(cells: &[(i32, i32)]) -> Vec<(i32, i32)> {
    let mut grid = Grid::new(Topology::Unbounded);
    for &(x, y) in cells {
        grid.set(x, y, CellState::Red);
    }
    let mut out: Vec<(i32, i32)> = grid.step().live_cells().map(|(p, _)| p).collect();
    out.sort_unstable_by_key(|&(x, y)| (y, x));
    out
}

/// Solo phase list: `steps + 1` states starting from `cells`.
fn free_phases(cells: &[(i32, i32)], steps: u32) -> Vec<Vec<(i32, i32)>> {
    let mut phases = Vec::with_capacity(steps as usize + 1);
    let mut sorted = cells.to_vec();
    sorted.sort_unstable_by_key(|&(x, y)| (y, x));
    phases.push(sorted);
    for _ in 0..steps {
        phases.push(step_free(phases.last().unwrap()));
    }
    phases
}

fn min_corner(cells: &[(i32, i32)]) -> (i32, i32) {
    let min_x = cells.iter().map(|&(x, _)| x).min().unwrap();
    let min_y = cells.iter().map(|&(_, y)| y).min().unwrap();
    (min_x, min_y)
}

/// Finds the cell set's own period and displacement by solo simulation;
/// `None` when it does not recur within the limit (a cluster holding several
/// objects that drift apart).
fn identify_opt(cells: &[(i32, i32)], search_limit: u32) -> Option<AshObject> {
    let phases = free_phases(cells, search_limit);
    let base = normalize(&phases[0]);
    for p in 1..=search_limit as usize {
        if phases[p].len() == phases[0].len() && normalize(&phases[p]) == base {
            let displacement = if phases[p] == phases[0] {
                (0, 0)
            } else {
                let (ax, ay) = min_corner(&phases[0]);
                let (bx, by) = min_corner(&phases[p]);
                (bx - ax, by - ay)
            };
            let class = if displacement != (0, 0) {
                AshClass::Spaceship
            } else if p == 1 {
                AshClass::StillLife
            } else {
                AshClass::Oscillator
            };
            return Some(AshObject {
                cells: phases[0].clone(),
                period: p as u32,
                displacement,
                class,
                settled: true,
            });
        }
    }
    None
}

/// Identification for cell sets known to be a single ash object.
pub(super) fn identify_free(cells: &[(i32, i32)], search_limit: u32) -> AshObject {
    identify_opt(cells, search_limit).expect("cell set is a recurring ash object")
}

/// Splits a cluster into its king-connected parts when those parts evolve
/// independently — separating constellations like bi-blocks and traffic
/// lights into the objects the reference censuses count.
fn try_split(
    cells: &[(i32, i32)],
    whole_phases: &[Vec<(i32, i32)>],
) -> Option<Vec<Vec<(i32, i32)>>> {
    let parts = cluster(cells, 1);
    if parts.len() < 2 {
        return None;
    }
    let steps = whole_phases.len() - 1;
    let part_phases: Vec<Vec<Vec<(i32, i32)>>> =
        parts.iter().map(|p| free_phases(p, steps as u32)).collect();
    for (t, whole) in whole_phases.iter().enumerate() {
        let total: usize = part_phases.iter().map(|pp| pp[t].len()).sum();
        if total != whole.len() {
            return None;
        }
        let mut union: Vec<(i32, i32)> =
            part_phases.iter().flat_map(|pp| pp[t].iter().copied()).collect();
        union.sort_unstable_by_key(|&(x, y)| (y, x));
        if &union != whole {
            return None;
        }
    }
    Some(parts)
}

/// Extracts all ash objects from a settled pattern.
pub fn extract_objects(stab: &StabilizedPattern, limits: &CensusLimits) -> Vec<AshObject> {
    if stab.phases.is_empty() || stab.phases[0].is_empty() {
        return Vec::new();
    }
    let union: Vec<(i32, i32)> = {
        let set: FxHashSet<(i32, i32)> =
            stab.phases.iter().flat_map(|p| p.iter().copied()).collect();
        let mut v: Vec<(i32, i32)> = set.into_iter().collect();
        v.sort_unstable_by_key(|&(x, y)| (y, x));
        v
    };
    let phase0: FxHashSet<(i32, i32)> = stab.phases[0].iter().copied().collect();
    // Object periods can exceed the detected whole-pattern period when the
    // population filter aliases (e.g. gliders in counter-balanced phases), so
    // the solo search runs to the configured cap.
    let search_limit = stab.period.max(limits.p_max).max(4);

    let mut objects = Vec::new();
    let mut extracted_cells = 0usize;
    let mut pending: Vec<Vec<(i32, i32)>> = Vec::new();
    for cl in cluster(&union, 2) {
        let cells0: Vec<(i32, i32)> =
            cl.iter().copied().filter(|p| phase0.contains(p)).collect();
        if cells0.is_empty() {
            continue;
        }
        extracted_cells += cells0.len();
        pending.push(cells0);
    }
    while let Some(cells0) = pending.pop() {
        let Some(whole) = identify_opt(&cells0, search_limit) else {
            // Several objects drifting apart were merged because their
            // period-union tracks touch. Their phase-0 states are separated,
            // so re-clustering at phase 0 pulls them apart.
            let parts = cluster(&cells0, 2);
            if parts.len() > 1 {
                pending.extend(parts);
            } else {
                objects.push(AshObject {
                    cells: cells0,
                    period: search_limit,
                    displacement: (0, 0),
                    class: AshClass::Oscillator,
                    settled: false,
                });
            }
            continue;
        };
        if limits.split_pseudo_objects {
            let whole_phases = free_phases(&cells0, whole.period);
            if let Some(parts) = try_split(&cells0, &whole_phases) {
                for part in parts {
                    let obj = identify_opt(&part, search_limit).unwrap_or(AshObject {
                        cells: part,
                        period: search_limit,
                        displacement: (0, 0),
                        class: AshClass::Oscillator,
                        settled: false,
                    });
                    objects.push(obj);
                }
                continue;
            }
        }
        objects.push(whole);
    }
    debug_assert_eq!(extracted_cells, stab.phases[0].len(), "objects must partition phase 0");
    objects
}

const TRANSFORMS: [fn(i32, i32) -> (i32, i32); 8] = [
    |x, y| (x, y),
    |x, y| (-y, x),
    |x, y| (-x, -y),
    |x, y| (y, -x),
    |x, y| (-x, y),
    |x, y| (x, -y),
    |x, y| (y, x),
    |x, y| (-y, -x),
];

/// Canonical type of an object: minimal serialised shape over all phases and
/// all 8 symmetries, prefixed with the class tag and period.
pub fn canonical_code(obj: &AshObject) -> AshType {
    let phase_steps = if obj.settled { obj.period.saturating_sub(1) } else { 0 };
    let phases = free_phases(&obj.cells, phase_steps);
    let mut best: Option<Vec<(i32, i32)>> = None;
    for phase in &phases {
        for t in TRANSFORMS {
            let cells: Vec<(i32, i32)> = phase.iter().map(|&(x, y)| t(x, y)).collect();
            let shape = normalize(&cells);
            if best.as_ref().is_none_or(|b| shape < *b) {
                best = Some(shape);
            }
        }
    }
    let shape = best.unwrap_or_default();
    AshType::from_code(format!("{}{}-{}", obj.class.tag(), obj.period, render_shape(&shape)))
}

/// Compact shape rendering: WxH plus one hex number per row (bit 0 = left).
fn render_shape(shape: &[(i32, i32)]) -> String {
    if shape.is_empty() {
        return "0x0".to_owned();
    }
    let w = shape.iter().map(|&(x, _)| x).max().unwrap() + 1;
    let h = shape.iter().map(|&(_, y)| y).max().unwrap() + 1;
    let mut rows = vec![0u128; h as usize];
    for &(x, y) in shape {
        rows[y as usize] |= 1u128 << x;
    }
    let mut out = format!("{w}x{h}");
    for row in rows {
        out.push('.');
        out.push_str(&format!("{row:x}"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::stabilize::stabilize;
    use crate::genome::Seed;

    fn limits() -> CensusLimits {
        CensusLimits::default()
    }

    fn objects_of(art: &str) -> Vec<AshObject> {
        let seed = Seed::from_art(art).unwrap();
        let stab = stabilize(&seed, &limits()).unwrap();
        extract_objects(&stab, &limits())
    }

    #[test]
    fn lone_block_is_one_still_life() {
        let objs = objects_of("oo\noo");
        assert_eq!(objs.len(), 1);
        assert_eq!(objs[0].class, AshClass::StillLife);
        assert_eq!(objs[0].period, 1);
        assert_eq!(objs[0].cells.len(), 4);
        assert!(!objs[0].is_escaped());
    }

    #[test]
    fn two_distant_blocks_are_two_objects() {
        let objs = objects_of("oo..........oo\noo..........oo");
        assert_eq!(objs.len(), 2);
        assert!(objs.iter().all(|o| o.class == AshClass::StillLife));
    }

    #[test]
    fn glider_is_an_escaped_spaceship() {
        let objs = objects_of(".o.\n..o\nooo");
        assert_eq!(objs.len(), 1);
        assert_eq!(objs[0].class, AshClass::Spaceship);
        assert_eq!(objs[0].period, 4);
        let (dx, dy) = objs[0].displacement;
        assert_eq!((dx.abs(), dy.abs()), (1, 1));
        assert!(objs[0].is_escaped());
    }

    #[test]
    fn blinker_is_an_oscillator() {
        let objs = objects_of("ooo");
        assert_eq!(objs.len(), 1);
        assert_eq!(objs[0].class, AshClass::Oscillator);
        assert_eq!(objs[0].period, 2);
        assert_eq!(objs[0].displacement, (0, 0));
    }

    #[test]
    fn all_glider_variants_share_one_code() {
        // 4 phases x 8 orientations must collapse to a single type.
        use crate::genome::ALL_TRANSFORMS;
        let glider = Seed::from_art(".o.\n..o\nooo").unwrap();
        let mut codes = std::collections::BTreeSet::new();
        for t in ALL_TRANSFORMS {
            let oriented = glider.transformed(t);
            let mut cells: Vec<(i32, i32)> = oriented
                .live_offsets()
                .map(|(r, c)| (c as i32, r as i32))
                .collect();
            for _ in 0..4 {
                let obj = identify_free(&cells, 8);
                codes.insert(canonical_code(&obj).code().to_owned());
                cells = step_free(&cells);
            }
        }
        assert_eq!(codes.len(), 1, "{codes:?}");
    }

    #[test]
    fn boat_and_its_mirror_share_one_code() {
        let boat = Seed::from_art("oo.\no.o\n.o.").unwrap();
        let as_cells = |s: &Seed| -> Vec<(i32, i32)> {
            s.live_offsets().map(|(r, c)| (c as i32, r as i32)).collect()
        };
        let a = canonical_code(&identify_free(&as_cells(&boat), 4));
        let b = canonical_code(&identify_free(
            &as_cells(&boat.transformed(crate::genome::Transform::FlipH)),
            4,
        ));
        assert_eq!(a, b);
    }

    #[test]
    fn bi_block_splits_into_two_blocks() {
        // Two blocks separated by one dead column interact with nothing:
        // the pseudo-object splitter must count two blocks.
        let objs = objects_of("oo.oo\noo.oo");
        assert_eq!(objs.len(), 2);
        assert!(objs.iter().all(|o| o.class == AshClass::StillLife && o.cells.len() == 4));
    }

    #[test]
    fn beacon_does_not_split() {
        // The beacon's two halves interact; it must stay one oscillator.
        let objs = objects_of("oo..\no...\n...o\n..oo");
        assert_eq!(objs.len(), 1);
        assert_eq!(objs[0].class, AshClass::Oscillator);
        assert_eq!(objs[0].period, 2);
    }

    #[test]
    fn merged_counting_without_split() {
        let seed = Seed::from_art("oo.oo\noo.oo").unwrap();
        let stab = stabilize(&seed, &limits()).unwrap();
        let merged = CensusLimits { split_pseudo_objects: false, ..limits() };
        let objs = extract_objects(&stab, &merged);
        assert_eq!(objs.len(), 1);
        assert_eq!(objs[0].cells.len(), 8);
    }
}
