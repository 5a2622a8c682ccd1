//! Independent [1,2]-sets of size `⌊(m+2)(n+2)/5⌋ - 4` for `14 <= m <= n`.
//!
//! Surround the grid with one extra ring of vertices and split the
//! `(m+2) x (n+2)` extended grid into the five classes `2i + j ≡ s (mod 5)`.
//! Each class is a perfect code of the infinite grid. Pushing its ring
//! vertices onto their inner neighbours gives a set that is already an
//! independent [1,2]-set except near the four corners. Local repairs there
//! (the two 9-column side strips when `m` is 14 or 15, 8x8 corner squares
//! from 16 on) take the size down to the target.
//!
//! The repairs are found by exact search ([`window`]) rather than
//! hard-coded, and every result goes through [`verify_set`].

mod window;

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use serde::Serialize;

pub use window::Window;
use window::{minimize_window, Board};

use crate::error::{Error, Result};
use crate::grids::{verify_set, GridSet, Vertex};
use crate::solver::{big_grid_value, PATTERN_MIN_WIDTH};

/// Columns in each side strip.
pub const STRIP_WIDTH: usize = 9;
/// Side of each corner square.
pub const CORNER_SIZE: usize = 8;

/// The grid with a one-vertex ring around it; indices `0..=m+1`, `0..=n+1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtendedGrid {
    pub m: usize,
    pub n: usize,
}

impl ExtendedGrid {
    pub fn new(m: usize, n: usize) -> ExtendedGrid {
        ExtendedGrid { m, n }
    }

    pub fn contains(&self, (i, j): Vertex) -> bool {
        i <= self.m + 1 && j <= self.n + 1
    }

    pub fn is_inner(&self, (i, j): Vertex) -> bool {
        (1..=self.m).contains(&i) && (1..=self.n).contains(&j)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        let (m, n) = (self.m, self.n);
        (0..=m + 1).flat_map(move |i| (0..=n + 1).map(move |j| (i, j)))
    }

    /// The inner vertex a ring vertex is pushed onto; `None` for the four
    /// outer corners, which touch no inner vertex.
    pub fn inner_neighbour(&self, (i, j): Vertex) -> Option<Vertex> {
        let row_out = i == 0 || i == self.m + 1;
        let col_out = j == 0 || j == self.n + 1;
        match (row_out, col_out) {
            (true, true) => None,
            (false, false) => Some((i, j)),
            _ => Some((i.clamp(1, self.m), j.clamp(1, self.n))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StripSpec {
    pub side: Side,
    pub columns: RangeInclusive<usize>,
}

impl StripSpec {
    pub fn new(side: Side, n: usize, width: usize) -> StripSpec {
        let columns = match side {
            Side::Left => 1..=width.min(n),
            Side::Right => n.saturating_sub(width - 1).max(1)..=n,
        };
        StripSpec { side, columns }
    }

    pub fn window(&self, m: usize) -> Window {
        Window {
            rows: (1, m),
            cols: (*self.columns.start(), *self.columns.end()),
        }
    }
}

/// `V_s`: extended-grid vertices with `2i + j ≡ s (mod 5)`.
pub fn diagonal_partition(m: usize, n: usize, s: usize) -> BTreeSet<Vertex> {
    ExtendedGrid::new(m, n)
        .vertices()
        .filter(|&(i, j)| (2 * i + j) % 5 == s % 5)
        .collect()
}

/// `V'_s`: ring vertices replaced by their inner neighbour, outer corners
/// dropped, duplicates merged.
pub fn project_inner(v: &BTreeSet<Vertex>, m: usize, n: usize) -> GridSet {
    let ext = ExtendedGrid::new(m, n);
    let members = v
        .iter()
        .filter(|&&u| ext.contains(u))
        .filter_map(|&u| ext.inner_neighbour(u));
    GridSet::from_members(m, n, members).expect("projection lands inside the grid")
}

/// Residue with the smallest class, ties to the smaller residue.
pub fn choose_residue(m: usize, n: usize) -> usize {
    (0..5)
        .min_by_key(|&s| (diagonal_partition(m, n, s).len(), s))
        .expect("five residues")
}

/// How the repair windows are laid out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "size")]
pub enum Repair {
    /// One window covering the grid; used while the side strips would overlap.
    WholeGrid,
    /// Full-height strips of this many columns on both sides.
    Strips(usize),
    /// Square windows of this side at the four corners.
    Corners(usize),
}

impl Repair {
    pub fn windows(&self, m: usize, n: usize) -> Vec<Window> {
        match *self {
            Repair::WholeGrid => vec![Window {
                rows: (1, m),
                cols: (1, n),
            }],
            Repair::Strips(width) => [Side::Left, Side::Right]
                .into_iter()
                .map(|side| StripSpec::new(side, n, width).window(m))
                .collect(),
            Repair::Corners(a) => {
                let top = (1, a.min(m));
                let bottom = (m.saturating_sub(a - 1).max(1), m);
                let left = (1, a.min(n));
                let right = (n.saturating_sub(a - 1).max(1), n);
                vec![
                    Window {
                        rows: top,
                        cols: left,
                    },
                    Window {
                        rows: bottom,
                        cols: left,
                    },
                    Window {
                        rows: top,
                        cols: right,
                    },
                    Window {
                        rows: bottom,
                        cols: right,
                    },
                ]
            }
        }
    }
}

/// Repair plans in the order they are tried.
fn plans(m: usize, n: usize) -> Vec<Repair> {
    if m <= 15 {
        if n < 2 * STRIP_WIDTH {
            vec![Repair::WholeGrid]
        } else {
            vec![
                Repair::Strips(STRIP_WIDTH),
                Repair::Strips(STRIP_WIDTH + 2),
                Repair::WholeGrid,
            ]
        }
    } else {
        vec![
            Repair::Corners(CORNER_SIZE),
            Repair::Corners(CORNER_SIZE + 2),
            Repair::Corners(CORNER_SIZE + 4),
        ]
    }
}

/// A finished construction with the pieces that produced it.
#[derive(Clone, Debug, Serialize)]
pub struct Construction {
    pub m: usize,
    pub n: usize,
    pub residue: usize,
    /// `|V_s|` on the extended grid.
    pub class_size: usize,
    /// `V'_s` before any repair.
    pub projected: GridSet,
    pub repair: Repair,
    pub windows: Vec<Window>,
    pub set: GridSet,
}

/// Builds `W_s` for `14 <= m <= n`, trying residues by class size and
/// repair plans from smallest to largest.
pub fn construct(m: usize, n: usize) -> Result<Construction> {
    if m < PATTERN_MIN_WIDTH || n < m {
        return Err(Error::InvalidDimensions {
            m,
            n,
            reason: "the pattern needs 14 <= m <= n",
        });
    }
    let target = big_grid_value(m, n)?.unwrap() as usize;
    let mut residues: Vec<(usize, usize)> = (0..5)
        .map(|s| (diagonal_partition(m, n, s).len(), s))
        .collect();
    residues.sort();
    let mut best = usize::MAX;
    for repair in plans(m, n) {
        for &(class_size, s) in &residues {
            let projected = project_inner(&diagonal_partition(m, n, s), m, n);
            let windows = repair.windows(m, n);
            let mut board = Board::from_set(&projected);
            let mut feasible = true;
            for &w in &windows {
                match minimize_window(&board, w) {
                    Some(b) => board = b,
                    None => {
                        feasible = false;
                        break;
                    }
                }
            }
            if !feasible {
                continue;
            }
            let set = board.to_set();
            if !verify_set(&set).is_valid() {
                continue;
            }
            best = best.min(set.len());
            if set.len() == target {
                return Ok(Construction {
                    m,
                    n,
                    residue: s,
                    class_size,
                    projected,
                    repair,
                    windows,
                    set,
                });
            }
        }
    }
    Err(Error::ConstructionFailed { m, n, best, target })
}

pub fn build_big_grid_set(m: usize, n: usize) -> Result<GridSet> {
    construct(m, n).map(|c| c.set)
}
