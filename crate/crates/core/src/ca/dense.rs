//! Bit-parallel torus stepping.
//!
//! Rows are packed into u64 words, one bitplane per colour. Neighbour counts
//! are carried in bit-sliced form: a half-adder tree turns the three
//! horizontal neighbours of every cell into a 2-bit count per row, and the
//! three row counts around a cell into a 4-bit total that includes the centre
//! cell. B3/S23 then reads as `total == 3 | (alive & total == 4)`. The same
//! pipeline over the red plane supplies the majority colour for births.
//!
//! Behaviour is bit-identical to [`Grid::step`] on a torus, including the
//! neighbour multiplicity on degenerate one- and two-cell-wide tori; the
//! property test in this module checks exactly that.

use super::{CellState, CountTarget, Grid, Topology};

#[derive(Clone, Copy)]
struct RowShape {
    width: usize,
    words: usize,
    last_mask: u64,
}

#[derive(Clone)]
pub struct TorusBoard {
    shape: RowShape,
    height: usize,
    red: Vec<u64>,
    blue: Vec<u64>,
    generation: u64,
    scratch: Scratch,
}

#[derive(Clone, Default)]
struct Scratch {
    live: Vec<u64>,
    hs0_live: Vec<u64>,
    hs1_live: Vec<u64>,
    hs0_red: Vec<u64>,
    hs1_red: Vec<u64>,
    next_red: Vec<u64>,
    next_blue: Vec<u64>,
    west: Vec<u64>,
    east: Vec<u64>,
}

impl TorusBoard {
    pub fn new(width: usize, height: usize) -> Self {
        assert!(width > 0 && height > 0, "torus dimensions must be positive");
        let words = width.div_ceil(64);
        let last_mask = if width % 64 == 0 { !0 } else { (1u64 << (width % 64)) - 1 };
        let size = height * words;
        Self {
            shape: RowShape { width, words, last_mask },
            height,
            red: vec![0; size],
            blue: vec![0; size],
            generation: 0,
            scratch: Scratch {
                live: vec![0; size],
                hs0_live: vec![0; size],
                hs1_live: vec![0; size],
                hs0_red: vec![0; size],
                hs1_red: vec![0; size],
                next_red: vec![0; size],
                next_blue: vec![0; size],
                west: vec![0; words],
                east: vec![0; words],
            },
        }
    }

    pub fn width(&self) -> usize {
        self.shape.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn from_grid(grid: &Grid) -> Self {
        let Topology::Torus { width, height } = grid.topology() else {
            panic!("TorusBoard requires a torus grid");
        };
        let mut board = Self::new(width as usize, height as usize);
        for ((x, y), state) in grid.live_cells() {
            board.set(x as usize, y as usize, state);
        }
        board.generation = grid.generation();
        board
    }

    pub fn to_grid(&self) -> Grid {
        let mut grid = Grid::new(Topology::Torus {
            width: self.shape.width as i32,
            height: self.height as i32,
        });
        for y in 0..self.height {
            for x in 0..self.shape.width {
                let s = self.get(x, y);
                if s.is_live() {
                    grid.set(x as i32, y as i32, s);
                }
            }
        }
        grid.set_generation(self.generation);
        grid
    }

    pub fn get(&self, x: usize, y: usize) -> CellState {
        let idx = y * self.shape.words + x / 64;
        let bit = 1u64 << (x % 64);
        if self.red[idx] & bit != 0 {
            CellState::Red
        } else if self.blue[idx] & bit != 0 {
            CellState::Blue
        } else {
            CellState::Dead
        }
    }

    pub fn set(&mut self, x: usize, y: usize, state: CellState) {
        assert!(x < self.shape.width && y < self.height);
        let idx = y * self.shape.words + x / 64;
        let bit = 1u64 << (x % 64);
        self.red[idx] &= !bit;
        self.blue[idx] &= !bit;
        match state {
            CellState::Red => self.red[idx] |= bit,
            CellState::Blue => self.blue[idx] |= bit,
            CellState::Dead => {}
        }
    }

    pub fn count(&self, target: CountTarget) -> usize {
        let pop = |plane: &[u64]| plane.iter().map(|w| w.count_ones() as usize).sum::<usize>();
        match target {
            CountTarget::All => pop(&self.red) + pop(&self.blue),
            CountTarget::Colour(CellState::Red) => pop(&self.red),
            CountTarget::Colour(CellState::Blue) => pop(&self.blue),
            CountTarget::Colour(CellState::Dead) => panic!("cannot count Dead cells"),
        }
    }

    /// One synchronous update; identical to the sparse step on the same torus.
    pub fn step(&mut self) {
        let shape = self.shape;
        let n = shape.words;
        let h = self.height;
        let s = &mut self.scratch;
        for i in 0..h * n {
            s.live[i] = self.red[i] | self.blue[i];
        }
        horizontal_sums(shape, h, &s.live, &mut s.hs0_live, &mut s.hs1_live, &mut s.west, &mut s.east);
        horizontal_sums(shape, h, &self.red, &mut s.hs0_red, &mut s.hs1_red, &mut s.west, &mut s.east);

        for r in 0..h {
            let rm1 = if r == 0 { h - 1 } else { r - 1 };
            let rp1 = if r + 1 == h { 0 } else { r + 1 };
            for k in 0..n {
                let i = r * n + k;
                let (ia, ic) = (rm1 * n + k, rp1 * n + k);

                // Total live count including the centre, bit-sliced to 4 bits.
                let (n1, n2, n4, n8) = add3_2bit(
                    s.hs0_live[ia], s.hs1_live[ia],
                    s.hs0_live[i], s.hs1_live[i],
                    s.hs0_live[ic], s.hs1_live[ic],
                );
                let eq3 = n1 & n2 & !n4 & !n8;
                let eq4 = !n1 & !n2 & n4 & !n8;
                let centre = s.live[i];
                let next_live = eq3 | (centre & eq4);
                let born = eq3 & !centre;

                // Red neighbour count; at a birth cell the centre is dead, so
                // this is exactly the red parent count, and two of the three
                // parents being red makes the child red.
                let (_r1, r2, r4, r8) = add3_2bit(
                    s.hs0_red[ia], s.hs1_red[ia],
                    s.hs0_red[i], s.hs1_red[i],
                    s.hs0_red[ic], s.hs1_red[ic],
                );
                let red_majority = r2 | r4 | r8;

                s.next_red[i] = (self.red[i] & next_live) | (born & red_majority);
                s.next_blue[i] = (self.blue[i] & next_live) | (born & !red_majority);
            }
        }
        std::mem::swap(&mut self.red, &mut s.next_red);
        std::mem::swap(&mut self.blue, &mut s.next_blue);
        self.generation += 1;
    }

    pub fn run(&mut self, steps: u64) {
        for _ in 0..steps {
            self.step();
        }
    }
}

/// dst[x] = src[x - 1 mod width]: the west-neighbour plane for one row.
fn shift_west(shape: RowShape, src: &[u64], dst: &mut [u64]) {
    let n = shape.words;
    let mut carry = (src[n - 1] >> ((shape.width - 1) % 64)) & 1;
    for k in 0..n {
        let out = src[k] >> 63;
        dst[k] = (src[k] << 1) | carry;
        carry = out;
    }
    dst[n - 1] &= shape.last_mask;
}

/// dst[x] = src[x + 1 mod width]: the east-neighbour plane for one row.
fn shift_east(shape: RowShape, src: &[u64], dst: &mut [u64]) {
    let n = shape.words;
    for k in 0..n {
        let high = if k + 1 < n { src[k + 1] << 63 } else { 0 };
        dst[k] = (src[k] >> 1) | high;
    }
    dst[n - 1] |= (src[0] & 1) << ((shape.width - 1) % 64);
    dst[n - 1] &= shape.last_mask;
}

/// Per-row horizontal triple counts (west + centre + east) as 2-bit numbers.
fn horizontal_sums(
    shape: RowShape,
    height: usize,
    plane: &[u64],
    s0: &mut [u64],
    s1: &mut [u64],
    west: &mut [u64],
    east: &mut [u64],
) {
    let n = shape.words;
    for row in 0..height {
        let src = &plane[row * n..(row + 1) * n];
        shift_west(shape, src, west);
        shift_east(shape, src, east);
        for k in 0..n {
            let (w, c, e) = (west[k], src[k], east[k]);
            s0[row * n + k] = w ^ c ^ e;
            s1[row * n + k] = (w & c) | (e & (w ^ c));
        }
    }
}

/// Adds three 2-bit numbers per bit lane; returns the 4-bit sum lanes.
#[inline]
fn add3_2bit(
    a0: u64, a1: u64,
    b0: u64, b1: u64,
    c0: u64, c1: u64,
) -> (u64, u64, u64, u64) {
    let n1 = a0 ^ b0 ^ c0;
    let carry2 = (a0 & b0) | (c0 & (a0 ^ b0));
    let x = a1 ^ b1;
    let y = a1 & b1;
    let z = c1 ^ carry2;
    let w = c1 & carry2;
    let n2 = x ^ z;
    let carry4 = x & z;
    let n4 = y ^ w ^ carry4;
    let n8 = (y & w) | (carry4 & (y ^ w));
    (n1, n2, n4, n8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_torus(w: i32, h: i32, fill: &[(i32, i32, u8)]) -> Grid {
        let mut g = Grid::new(Topology::Torus { width: w, height: h });
        for &(x, y, c) in fill {
            let colour = if c == 0 { CellState::Red } else { CellState::Blue };
            g.set(x.rem_euclid(w), y.rem_euclid(h), colour);
        }
        g
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn dense_step_matches_sparse_step(
            w in 1i32..80,
            h in 1i32..40,
            cells in prop::collection::vec((0i32..80, 0i32..40, 0u8..2), 0..120),
            steps in 1u64..4,
        ) {
            let sparse = random_torus(w, h, &cells);
            let mut board = TorusBoard::from_grid(&sparse);
            let stepped = sparse.run(steps);
            board.run(steps);
            prop_assert_eq!(board.to_grid().sorted_cells(), stepped.sorted_cells());
            prop_assert_eq!(board.generation(), stepped.generation());
        }
    }

    #[test]
    fn counts_match_grid() {
        let g = random_torus(20, 20, &[(1, 1, 0), (2, 2, 1), (3, 3, 1)]);
        let board = TorusBoard::from_grid(&g);
        assert_eq!(board.count(CountTarget::All), 3);
        assert_eq!(board.count(CountTarget::Colour(CellState::Red)), 1);
        assert_eq!(board.count(CountTarget::Colour(CellState::Blue)), 2);
    }

    #[test]
    fn blinker_on_wide_board_crosses_word_boundary() {
        // Straddle bit 63/64 to exercise the multi-word shifts.
        let mut g = Grid::new(Topology::Torus { width: 130, height: 9 });
        for x in 63..66 {
            g.set(x, 4, CellState::Red);
        }
        let mut board = TorusBoard::from_grid(&g);
        board.step();
        assert_eq!(board.to_grid().sorted_cells(), g.step().sorted_cells());
    }
}
