//! Cellular-automaton engine: B3/S23 Game of Life and the two-colour
//! Immigration Game on toroidal and unbounded grids.
//!
//! The canonical representation is sparse (only live cells are stored) so
//! unbounded census runs with escaping spaceships work. Matches on tori go
//! through [`dense::TorusBoard`], a bit-parallel fast path with identical
//! behaviour (see the equivalence property test).
//!
//! Immigration rules: life and death are plain B3/S23 with both colours
//! counting as live. A newborn takes the majority colour of its exactly three
//! live neighbours — with two colours and three parents there is always a
//! clear majority — and survivors never change colour.

pub mod dense;

use crate::fxhash::FxHashMap;
use crate::genome::Seed;
use thiserror::Error;

pub type Coord = (i32, i32);

const OFFSETS: [(i32, i32); 8] = [
    (-1, -1),
    (0, -1),
    (1, -1),
    (-1, 0),
    (1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CaError {
    #[error("cannot count Dead cells; use a live colour or CountTarget::All")]
    CountDead,
    #[error("placement at ({x}, {y}) overlaps a live cell of a different colour")]
    PlacementOverlap { x: i32, y: i32 },
    #[error("pattern bounding box ({w}x{h} at {x}, {y}) does not fit the {width}x{height} torus")]
    OutOfBounds { x: i32, y: i32, w: usize, h: usize, width: i32, height: i32 },
}

/// State of one grid cell. `Dead` is never stored.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum CellState {
    Dead = 0,
    Red = 1,
    Blue = 2,
}

impl CellState {
    pub fn is_live(self) -> bool {
        self != CellState::Dead
    }
}

/// Grid topology. Torus coordinates satisfy 0 <= x < width, 0 <= y < height.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Topology {
    Torus { width: i32, height: i32 },
    Unbounded,
}

/// What [`Grid::count_live`] should count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountTarget {
    All,
    Colour(CellState),
}

/// Sparse CA state: a map from coordinates to live-cell colours.
#[derive(Clone, Debug)]
pub struct Grid {
    topology: Topology,
    cells: FxHashMap<Coord, CellState>,
    generation: u64,
}

impl Grid {
    pub fn new(topology: Topology) -> Self {
        if let Topology::Torus { width, height } = topology {
            assert!(width > 0 && height > 0, "torus dimensions must be positive");
        }
        Self { topology, cells: FxHashMap::default(), generation: 0 }
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub(crate) fn set_generation(&mut self, generation: u64) {
        self.generation = generation;
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// State of the cell at `(x, y)`; `Dead` when nothing is stored there.
    pub fn get(&self, x: i32, y: i32) -> CellState {
        self.cells.get(&(x, y)).copied().unwrap_or(CellState::Dead)
    }

    /// Sets a cell directly. Storing `Dead` removes the entry.
    pub fn set(&mut self, x: i32, y: i32, state: CellState) {
        if let Topology::Torus { width, height } = self.topology {
            assert!((0..width).contains(&x) && (0..height).contains(&y), "torus coordinate out of range");
        }
        match state {
            CellState::Dead => {
                self.cells.remove(&(x, y));
            }
            live => {
                self.cells.insert((x, y), live);
            }
        }
    }

    /// Iterator over the live cells.
    pub fn live_cells(&self) -> impl Iterator<Item = (Coord, CellState)> + '_ {
        self.cells.iter().map(|(&c, &s)| (c, s))
    }

    /// Live cells as a sorted vector; canonical order for digests and tests.
    pub fn sorted_cells(&self) -> Vec<(Coord, CellState)> {
        let mut v: Vec<_> = self.live_cells().collect();
        v.sort_unstable_by_key(|&((x, y), s)| (y, x, s as u8));
        v
    }

    pub fn count_live(&self, target: CountTarget) -> Result<usize, CaError> {
        match target {
            CountTarget::All => Ok(self.cells.len()),
            CountTarget::Colour(CellState::Dead) => Err(CaError::CountDead),
            CountTarget::Colour(c) => Ok(self.cells.values().filter(|&&s| s == c).count()),
        }
    }

    /// Places each 1-bit of `seed` as a live cell of `colour` at
    /// `origin + offset` (offsets are (col, row)). Cells outside the seed
    /// footprint are untouched; overlapping a live cell of the other colour is
    /// an error, as is a bounding box that leaves a torus.
    pub fn place_pattern(
        &mut self,
        seed: &Seed,
        origin: Coord,
        colour: CellState,
    ) -> Result<(), CaError> {
        assert!(colour.is_live(), "placement colour must be live");
        let (ox, oy) = origin;
        if let Topology::Torus { width, height } = self.topology {
            let fits = ox >= 0
                && oy >= 0
                && ox + seed.cols() as i32 <= width
                && oy + seed.rows() as i32 <= height;
            if !fits {
                return Err(CaError::OutOfBounds {
                    x: ox,
                    y: oy,
                    w: seed.cols(),
                    h: seed.rows(),
                    width,
                    height,
                });
            }
        }
        for (r, c) in seed.live_offsets() {
            let p = (ox + c as i32, oy + r as i32);
            match self.cells.get(&p) {
                Some(&existing) if existing != colour => {
                    return Err(CaError::PlacementOverlap { x: p.0, y: p.1 });
                }
                _ => {
                    self.cells.insert(p, colour);
                }
            }
        }
        Ok(())
    }

    #[inline]
    fn wrap(&self, x: i32, y: i32) -> Coord {
        match self.topology {
            Topology::Unbounded => (x, y),
            Topology::Torus { width, height } => {
                let wx = if x < 0 {
                    x + width
                } else if x >= width {
                    x - width
                } else {
                    x
                };
                let wy = if y < 0 {
                    y + height
                } else if y >= height {
                    y - height
                } else {
                    y
                };
                (wx, wy)
            }
        }
    }

    /// One synchronous update of every cell. Pure: the receiver is untouched.
    pub fn step(&self) -> Grid {
        // (live neighbour count, red neighbour count) accumulated per cell.
        // On small tori several offsets can reach the same cell; each offset
        // counts, which matches the dense path's wrapped shifts.
        let mut counts: FxHashMap<Coord, (u8, u8)> = FxHashMap::default();
        counts.reserve(self.cells.len() * 4);
        for (&(x, y), &state) in &self.cells {
            let red = (state == CellState::Red) as u8;
            for (dx, dy) in OFFSETS {
                let p = self.wrap(x + dx, y + dy);
                let e = counts.entry(p).or_insert((0, 0));
                e.0 += 1;
                e.1 += red;
            }
        }
        let mut next: FxHashMap<Coord, CellState> = FxHashMap::default();
        next.reserve(self.cells.len() + 8);
        for (&p, &(live, red)) in &counts {
            match self.cells.get(&p) {
                Some(&colour) => {
                    if live == 2 || live == 3 {
                        next.insert(p, colour);
                    }
                }
                None => {
                    if live == 3 {
                        let colour = if red >= 2 { CellState::Red } else { CellState::Blue };
                        next.insert(p, colour);
                    }
                }
            }
        }
        Grid { topology: self.topology, cells: next, generation: self.generation + 1 }
    }

    /// Applies [`Grid::step`] exactly `steps` times.
    pub fn run(&self, steps: u64) -> Grid {
        let mut g = self.clone();
        for _ in 0..steps {
            g = g.step();
        }
        g
    }

    /// Maps Blue to Red, erasing colour information.
    pub fn colour_blind(&self) -> Grid {
        let cells = self.cells.keys().map(|&p| (p, CellState::Red)).collect();
        Grid { topology: self.topology, cells, generation: self.generation }
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.topology == other.topology && self.cells == other.cells
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unbounded() -> Grid {
        Grid::new(Topology::Unbounded)
    }

    fn cellset(g: &Grid) -> Vec<(Coord, CellState)> {
        g.sorted_cells()
    }

    #[test]
    fn place_single_cell() {
        let mut g = unbounded();
        let s = Seed::new(1, 1, vec![1]).unwrap();
        g.place_pattern(&s, (0, 0), CellState::Red).unwrap();
        assert_eq!(g.get(0, 0), CellState::Red);
        assert_eq!(g.count_live(CountTarget::All).unwrap(), 1);
    }

    #[test]
    fn place_block_footprint() {
        let mut g = unbounded();
        let s = Seed::new(2, 2, vec![1; 4]).unwrap();
        g.place_pattern(&s, (3, 3), CellState::Blue).unwrap();
        for (x, y) in [(3, 3), (4, 3), (3, 4), (4, 4)] {
            assert_eq!(g.get(x, y), CellState::Blue);
        }
        assert_eq!(g.count_live(CountTarget::Colour(CellState::Blue)).unwrap(), 4);
    }

    #[test]
    fn place_two_disjoint_seeds() {
        let mut g = unbounded();
        let s = Seed::from_art("ooo\no.o").unwrap(); // 5 cells
        g.place_pattern(&s, (0, 0), CellState::Red).unwrap();
        g.place_pattern(&s, (10, 10), CellState::Blue).unwrap();
        assert_eq!(g.count_live(CountTarget::Colour(CellState::Red)).unwrap(), 5);
        assert_eq!(g.count_live(CountTarget::Colour(CellState::Blue)).unwrap(), 5);
        assert_eq!(g.count_live(CountTarget::All).unwrap(), 10);
    }

    #[test]
    fn place_overlap_other_colour_errors() {
        let mut g = unbounded();
        let s = Seed::new(1, 1, vec![1]).unwrap();
        g.place_pattern(&s, (0, 0), CellState::Red).unwrap();
        let err = g.place_pattern(&s, (0, 0), CellState::Blue).unwrap_err();
        assert_eq!(err, CaError::PlacementOverlap { x: 0, y: 0 });
        // Same colour is fine.
        g.place_pattern(&s, (0, 0), CellState::Red).unwrap();
    }

    #[test]
    fn place_outside_torus_errors() {
        let mut g = Grid::new(Topology::Torus { width: 4, height: 4 });
        let s = Seed::new(2, 2, vec![1; 4]).unwrap();
        assert!(matches!(
            g.place_pattern(&s, (3, 0), CellState::Red),
            Err(CaError::OutOfBounds { .. })
        ));
    }

    #[test]
    fn count_dead_is_an_error() {
        let g = unbounded();
        assert_eq!(
            g.count_live(CountTarget::Colour(CellState::Dead)),
            Err(CaError::CountDead)
        );
    }

    #[test]
    fn blinker_oscillates() {
        let mut g = unbounded();
        for y in 0..3 {
            g.set(1, y, CellState::Red);
        }
        let next = g.step();
        let expect: Vec<_> = [(0, 1), (1, 1), (2, 1)]
            .into_iter()
            .map(|p| (p, CellState::Red))
            .collect();
        assert_eq!(cellset(&next), expect);
        assert_eq!(next.generation(), 1);
        assert_eq!(next.count_live(CountTarget::All).unwrap(), 3);
        let back = next.step();
        assert_eq!(cellset(&back), cellset(&g));
    }

    #[test]
    fn majority_colour_births() {
        // Dead cell at (1,1) with three live neighbours: two red, one blue.
        let mut g = unbounded();
        g.set(0, 0, CellState::Red);
        g.set(2, 0, CellState::Red);
        g.set(1, 2, CellState::Blue);
        let next = g.step();
        assert_eq!(next.get(1, 1), CellState::Red);

        let mut g = unbounded();
        g.set(0, 0, CellState::Blue);
        g.set(2, 0, CellState::Blue);
        g.set(1, 2, CellState::Red);
        let next = g.step();
        assert_eq!(next.get(1, 1), CellState::Blue);
    }

    #[test]
    fn empty_grid_stays_empty() {
        let g = unbounded();
        assert!(g.step().is_empty());
    }

    #[test]
    fn glider_translates() {
        let glider = Seed::from_art(".o.\n..o\nooo").unwrap();
        let mut g = unbounded();
        g.place_pattern(&glider, (0, 0), CellState::Red).unwrap();
        let moved = g.run(4);
        let expect: Vec<_> = cellset(&g)
            .into_iter()
            .map(|((x, y), s)| ((x + 1, y + 1), s))
            .collect();
        assert_eq!(cellset(&moved), expect);
        assert_eq!(moved.generation(), 4);
    }

    #[test]
    fn run_zero_steps_is_identity() {
        let mut g = unbounded();
        g.set(5, 5, CellState::Blue);
        let same = g.run(0);
        assert_eq!(same, g);
        assert_eq!(same.generation(), 0);
    }

    #[test]
    fn block_is_still_for_1000_steps() {
        let block = Seed::new(2, 2, vec![1; 4]).unwrap();
        let mut g = unbounded();
        g.place_pattern(&block, (0, 0), CellState::Red).unwrap();
        let after = g.run(1000);
        assert_eq!(cellset(&after), cellset(&g));
        assert_eq!(after.generation(), 1000);
    }

    fn random_ig_grid(rng: &mut ChaCha8Rng, topology: Topology) -> Grid {
        let mut g = Grid::new(topology);
        let (w, h) = match topology {
            Topology::Torus { width, height } => (width, height),
            Topology::Unbounded => (16, 16),
        };
        for y in 0..h {
            for x in 0..w {
                if rng.gen_bool(0.35) {
                    let colour = if rng.gen_bool(0.5) { CellState::Red } else { CellState::Blue };
                    g.set(x, y, colour);
                }
            }
        }
        g
    }

    #[test]
    fn colour_blindness_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for i in 0..200 {
            let topology = if i % 2 == 0 {
                Topology::Unbounded
            } else {
                Topology::Torus { width: 12, height: 9 }
            };
            let g = random_ig_grid(&mut rng, topology);
            assert_eq!(g.colour_blind().step(), g.step().colour_blind());
        }
    }

    #[test]
    fn step_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = random_ig_grid(&mut rng, Topology::Unbounded);
        assert_eq!(g.step(), g.step());
    }

    #[test]
    fn torus_matches_unbounded_while_clear_of_the_seam() {
        // A glider in the middle of a large torus evolves exactly like on an
        // unbounded grid until it approaches the edge.
        let glider = Seed::from_art(".o.\n..o\nooo").unwrap();
        let mut torus = Grid::new(Topology::Torus { width: 30, height: 30 });
        torus.place_pattern(&glider, (5, 5), CellState::Red).unwrap();
        let mut free = unbounded();
        free.place_pattern(&glider, (5, 5), CellState::Red).unwrap();
        for _ in 0..60 {
            torus = torus.step();
            free = free.step();
            assert_eq!(torus.sorted_cells(), free.sorted_cells());
        }
    }

    #[test]
    fn step_commutes_with_square_symmetries() {
        use crate::genome::{Transform, ALL_TRANSFORMS};
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        // Transform on an unbounded grid around the 16x16 patch: map (x, y)
        // through the same symmetry used for seeds.
        let apply = |g: &Grid, t: Transform| {
            let mut out = unbounded();
            for ((x, y), s) in g.live_cells() {
                let (r, c) = (y, x);
                let (nr, nc) = match t {
                    Transform::Identity => (r, c),
                    Transform::Rot90 => (c, -r),
                    Transform::Rot180 => (-r, -c),
                    Transform::Rot270 => (-c, r),
                    Transform::FlipH => (r, -c),
                    Transform::FlipV => (-r, c),
                    Transform::Transpose => (c, r),
                    Transform::AntiTranspose => (-c, -r),
                };
                out.set(nc, nr, s);
            }
            out
        };
        for _ in 0..10 {
            let g = random_ig_grid(&mut rng, Topology::Unbounded);
            for t in ALL_TRANSFORMS {
                let a = apply(&g, t).step();
                let b = apply(&g.step(), t);
                assert_eq!(a.sorted_cells(), b.sorted_cells(), "{t:?}");
            }
        }
    }
}
