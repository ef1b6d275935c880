//! Seed genomes and reproduction operators.
//!
//! A seed is a binary matrix. The four reproduction layers are bit-flip
//! mutation, row/column resizing, single-cut crossover and side-by-side
//! fusion; shuffling is the structure-destroying control that keeps area and
//! density fixed.

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GenomeError {
    #[error("seed dimensions must be at least 1x1, got {rows}x{cols}")]
    ZeroDimension { rows: usize, cols: usize },
    #[error("probability {name} = {value} is outside [0, 1]")]
    BadProbability { name: &'static str, value: f64 },
}

/// Axis used by the crossover cut.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CutAxis {
    Row,
    Col,
}

/// One of the eight square symmetries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transform {
    Identity,
    Rot90,
    Rot180,
    Rot270,
    FlipH,
    FlipV,
    Transpose,
    AntiTranspose,
}

pub const ALL_TRANSFORMS: [Transform; 8] = [
    Transform::Identity,
    Transform::Rot90,
    Transform::Rot180,
    Transform::Rot270,
    Transform::FlipH,
    Transform::FlipV,
    Transform::Transpose,
    Transform::AntiTranspose,
];

/// Binary-matrix genome.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Seed {
    rows: usize,
    cols: usize,
    bits: Vec<u8>, // row-major, 0 or 1
}

impl std::fmt::Debug for Seed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Seed {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                write!(f, "{}", if self.get(r, c) { 'o' } else { '.' })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl Seed {
    pub fn new(rows: usize, cols: usize, bits: Vec<u8>) -> Result<Self, GenomeError> {
        if rows == 0 || cols == 0 {
            return Err(GenomeError::ZeroDimension { rows, cols });
        }
        assert_eq!(bits.len(), rows * cols, "bit vector length mismatch");
        debug_assert!(bits.iter().all(|&b| b <= 1));
        Ok(Self { rows, cols, bits })
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self, GenomeError> {
        Self::new(rows, cols, vec![0; rows * cols])
    }

    /// Parses an ASCII picture: `o`/`O`/`#`/`1` live, `.`/`b`/`0` dead, one
    /// text row per seed row. Convenient for tests and bundled patterns.
    pub fn from_art(art: &str) -> Result<Self, GenomeError> {
        let lines: Vec<&str> = art.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        let rows = lines.len();
        let cols = lines.iter().map(|l| l.len()).max().unwrap_or(0);
        if rows == 0 || cols == 0 {
            return Err(GenomeError::ZeroDimension { rows, cols });
        }
        let mut bits = vec![0u8; rows * cols];
        for (r, line) in lines.iter().enumerate() {
            for (c, ch) in line.chars().enumerate() {
                bits[r * cols + c] = match ch {
                    'o' | 'O' | '#' | '1' | 'X' | 'x' => 1,
                    _ => 0,
                };
            }
        }
        Self::new(rows, cols, bits)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// rows × cols.
    pub fn area(&self) -> usize {
        self.rows * self.cols
    }

    /// Number of 1-bits.
    pub fn ones(&self) -> usize {
        self.bits.iter().map(|&b| b as usize).sum()
    }

    /// Fraction of 1-bits, in [0, 1].
    pub fn density(&self) -> f64 {
        self.ones() as f64 / self.area() as f64
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.cols + col] == 1
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.bits[row * self.cols + col] = value as u8;
    }

    /// Iterator over the coordinates of all 1-bits as (row, col).
    pub fn live_offsets(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rows)
            .flat_map(move |r| (0..self.cols).map(move |c| (r, c)))
            .filter(move |&(r, c)| self.get(r, c))
    }

    /// Each bit independently 1 with probability `density`.
    pub fn random(
        rows: usize,
        cols: usize,
        density: f64,
        rng: &mut impl Rng,
    ) -> Result<Self, GenomeError> {
        if rows == 0 || cols == 0 {
            return Err(GenomeError::ZeroDimension { rows, cols });
        }
        check_probability("density", density)?;
        let bits = (0..rows * cols)
            .map(|_| rng.gen_bool(density) as u8)
            .collect();
        Self::new(rows, cols, bits)
    }

    /// Flips each bit independently with probability `p_flip`.
    pub fn mutate_flip(&self, p_flip: f64, rng: &mut impl Rng) -> Result<Self, GenomeError> {
        check_probability("p_flip", p_flip)?;
        let bits = self
            .bits
            .iter()
            .map(|&b| if rng.gen_bool(p_flip) { 1 - b } else { b })
            .collect();
        Self::new(self.rows, self.cols, bits)
    }

    /// With probability `p_grow` inserts a random row or column (bits drawn at
    /// the current density), otherwise removes one. The removal is skipped
    /// when it would leave zero rows or columns. Exactly one structural edit
    /// at most.
    pub fn mutate_resize(&self, p_grow: f64, rng: &mut impl Rng) -> Result<Self, GenomeError> {
        check_probability("p_grow", p_grow)?;
        let grow = rng.gen_bool(p_grow);
        let row_axis = rng.gen_bool(0.5);
        if grow {
            let density = self.density();
            if row_axis {
                let at = rng.gen_range(0..=self.rows);
                let line: Vec<u8> = (0..self.cols).map(|_| rng.gen_bool(density) as u8).collect();
                Ok(self.insert_row(at, &line))
            } else {
                let at = rng.gen_range(0..=self.cols);
                let line: Vec<u8> = (0..self.rows).map(|_| rng.gen_bool(density) as u8).collect();
                Ok(self.insert_col(at, &line))
            }
        } else if row_axis {
            if self.rows == 1 {
                return Ok(self.clone());
            }
            let at = rng.gen_range(0..self.rows);
            Ok(self.remove_row(at))
        } else {
            if self.cols == 1 {
                return Ok(self.clone());
            }
            let at = rng.gen_range(0..self.cols);
            Ok(self.remove_col(at))
        }
    }

    fn insert_row(&self, at: usize, line: &[u8]) -> Self {
        let mut bits = Vec::with_capacity((self.rows + 1) * self.cols);
        bits.extend_from_slice(&self.bits[..at * self.cols]);
        bits.extend_from_slice(line);
        bits.extend_from_slice(&self.bits[at * self.cols..]);
        Self { rows: self.rows + 1, cols: self.cols, bits }
    }

    fn insert_col(&self, at: usize, line: &[u8]) -> Self {
        let mut bits = Vec::with_capacity(self.rows * (self.cols + 1));
        for r in 0..self.rows {
            let row = &self.bits[r * self.cols..(r + 1) * self.cols];
            bits.extend_from_slice(&row[..at]);
            bits.push(line[r]);
            bits.extend_from_slice(&row[at..]);
        }
        Self { rows: self.rows, cols: self.cols + 1, bits }
    }

    fn remove_row(&self, at: usize) -> Self {
        let mut bits = Vec::with_capacity((self.rows - 1) * self.cols);
        bits.extend_from_slice(&self.bits[..at * self.cols]);
        bits.extend_from_slice(&self.bits[(at + 1) * self.cols..]);
        Self { rows: self.rows - 1, cols: self.cols, bits }
    }

    fn remove_col(&self, at: usize) -> Self {
        let mut bits = Vec::with_capacity(self.rows * (self.cols - 1));
        for r in 0..self.rows {
            let row = &self.bits[r * self.cols..(r + 1) * self.cols];
            bits.extend_from_slice(&row[..at]);
            bits.extend_from_slice(&row[at + 1..]);
        }
        Self { rows: self.rows, cols: self.cols - 1, bits }
    }

    /// Single-cut crossover. One parent is picked uniformly as the frame; the
    /// child has the frame's dimensions. Lines before the cut come from the
    /// frame, lines at/after it from the other parent, cropped or zero-padded
    /// to the frame's shape.
    pub fn crossover(a: &Seed, b: &Seed, axis: CutAxis, rng: &mut impl Rng) -> Seed {
        let (frame, other) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
        let mut child = frame.clone();
        match axis {
            CutAxis::Row => {
                let cut = rng.gen_range(0..=frame.rows);
                for r in cut..frame.rows {
                    for c in 0..frame.cols {
                        let bit = r < other.rows && c < other.cols && other.get(r, c);
                        child.set(r, c, bit);
                    }
                }
            }
            CutAxis::Col => {
                let cut = rng.gen_range(0..=frame.cols);
                for c in cut..frame.cols {
                    for r in 0..frame.rows {
                        let bit = r < other.rows && c < other.cols && other.get(r, c);
                        child.set(r, c, bit);
                    }
                }
            }
        }
        child
    }

    /// Side-by-side fusion: `a` occupies the left block, `b` the right block,
    /// separated by `gap` dead columns. The shorter seed is padded with dead
    /// rows split evenly top/bottom, extra row at the bottom.
    pub fn fuse(a: &Seed, b: &Seed, gap: usize) -> Seed {
        let rows = a.rows.max(b.rows);
        let cols = a.cols + gap + b.cols;
        let mut child = Seed { rows, cols, bits: vec![0; rows * cols] };
        let a_top = (rows - a.rows) / 2;
        let b_top = (rows - b.rows) / 2;
        for (r, c) in a.live_offsets() {
            child.set(r + a_top, c, true);
        }
        for (r, c) in b.live_offsets() {
            child.set(r + b_top, c + a.cols + gap, true);
        }
        child
    }

    /// Uniform random permutation of the bits; dimensions and 1-bit count are
    /// preserved. This destroys structure while keeping area and density.
    pub fn shuffle(&self, rng: &mut impl Rng) -> Seed {
        let mut bits = self.bits.clone();
        bits.shuffle(rng);
        Seed { rows: self.rows, cols: self.cols, bits }
    }

    /// Applies one of the eight square symmetries.
    pub fn transformed(&self, t: Transform) -> Seed {
        let (rows, cols) = match t {
            Transform::Identity | Transform::Rot180 | Transform::FlipH | Transform::FlipV => {
                (self.rows, self.cols)
            }
            _ => (self.cols, self.rows),
        };
        let mut out = Seed { rows, cols, bits: vec![0; rows * cols] };
        for r in 0..self.rows {
            for c in 0..self.cols {
                if !self.get(r, c) {
                    continue;
                }
                let (nr, nc) = match t {
                    Transform::Identity => (r, c),
                    Transform::Rot90 => (c, self.rows - 1 - r),
                    Transform::Rot180 => (self.rows - 1 - r, self.cols - 1 - c),
                    Transform::Rot270 => (self.cols - 1 - c, r),
                    Transform::FlipH => (r, self.cols - 1 - c),
                    Transform::FlipV => (self.rows - 1 - r, c),
                    Transform::Transpose => (c, r),
                    Transform::AntiTranspose => (self.cols - 1 - c, self.rows - 1 - r),
                };
                out.set(nr, nc, true);
            }
        }
        out
    }
}

fn check_probability(name: &'static str, value: f64) -> Result<(), GenomeError> {
    if !(0.0..=1.0).contains(&value) || value.is_nan() {
        return Err(GenomeError::BadProbability { name, value });
    }
    Ok(())
}
