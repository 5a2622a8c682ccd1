//! Exact minimisation of an independent [1,2]-set inside a rectangle while
//! everything outside it stays put.
//!
//! The rectangle plus its one-cell ring (the band) is swept column by
//! column. A state is the membership mask of the current band column plus,
//! for each non-member, the number of dominators already seen (left,
//! vertical, and frozen cells outside the band). Ring cells are frozen, so
//! every cell whose neighbourhood can change is checked inside the sweep.

use std::collections::HashMap;

use serde::Serialize;

use crate::grids::GridSet;

/// Inclusive 1-based rectangle of free cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Window {
    pub rows: (usize, usize),
    pub cols: (usize, usize),
}

impl Window {
    pub fn contains(&self, (i, j): (usize, usize)) -> bool {
        (self.rows.0..=self.rows.1).contains(&i) && (self.cols.0..=self.cols.1).contains(&j)
    }

    /// Whether `v` is in the window or next to it.
    pub fn band_contains(&self, (i, j): (usize, usize)) -> bool {
        i + 1 >= self.rows.0 && i <= self.rows.1 + 1 && j + 1 >= self.cols.0 && j <= self.cols.1 + 1
    }
}

/// Dense membership grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Board {
    m: usize,
    n: usize,
    cells: Vec<bool>,
}

impl Board {
    pub fn from_set(s: &GridSet) -> Board {
        let mut b = Board {
            m: s.m(),
            n: s.n(),
            cells: vec![false; s.m() * s.n()],
        };
        for (i, j) in s.members() {
            b.set(i, j, true);
        }
        b
    }

    pub fn to_set(&self) -> GridSet {
        let mut s = GridSet::empty(self.m, self.n);
        for i in 1..=self.m {
            for j in 1..=self.n {
                if self.get(i, j) {
                    s.insert((i, j));
                }
            }
        }
        s
    }

    /// `false` outside the grid.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        i >= 1 && j >= 1 && i <= self.m && j <= self.n && self.cells[(i - 1) * self.n + (j - 1)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.cells[(i - 1) * self.n + (j - 1)] = v;
    }

    #[cfg(test)]
    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }
}

type Key = (u32, u64);

struct Node {
    key: Key,
    cost: u32,
    parent: u32,
}

const MAX_BAND_HEIGHT: usize = 32;

/// Column data for the sweep. Bit `r` stands for band row `r`.
struct Column {
    free: u32,
    fixed: u32,
    /// Frozen member neighbours outside the band, per band row.
    ext: Vec<u8>,
}

/// Replaces the window's cells by a cheapest valid choice. Returns `None`
/// when no choice makes every band cell valid.
pub(crate) fn minimize_window(board: &Board, w: Window) -> Option<Board> {
    let (m, n) = (board.m, board.n);
    let r0 = w.rows.0.max(1);
    let r1 = w.rows.1.min(m);
    let c0 = w.cols.0.max(1);
    let c1 = w.cols.1.min(n);
    let br0 = r0.saturating_sub(1).max(1);
    let br1 = (r1 + 1).min(m);
    let bc0 = c0.saturating_sub(1).max(1);
    let bc1 = (c1 + 1).min(n);
    let h = br1 - br0 + 1;
    assert!(h <= MAX_BAND_HEIGHT, "band height {h} too large");

    let columns: Vec<Column> = (bc0..=bc1)
        .map(|j| {
            let mut free = 0u32;
            let mut fixed = 0u32;
            let mut ext = vec![0u8; h];
            for (r, e) in ext.iter_mut().enumerate() {
                let i = br0 + r;
                if (r0..=r1).contains(&i) && (c0..=c1).contains(&j) {
                    free |= 1 << r;
                } else if board.get(i, j) {
                    fixed |= 1 << r;
                }
                *e = (r == 0 && board.get(i - 1, j)) as u8
                    + (r == h - 1 && board.get(i + 1, j)) as u8
                    + (j == bc0 && board.get(i, j - 1)) as u8
                    + (j == bc1 && board.get(i, j + 1)) as u8;
            }
            Column { free, fixed, ext }
        })
        .collect();

    let mut layers: Vec<Vec<Node>> = Vec::with_capacity(columns.len());
    let mut first = Vec::new();
    let mut seen = HashMap::new();
    for_each_mask(h, &columns[0], &|_| None, &mut |mask| {
        if let Some(counts) = counts_for(h, &columns[0], 0, mask) {
            let key = (mask, counts);
            let cost = mask.count_ones();
            push_best(&mut first, &mut seen, key, cost, 0);
        }
    });
    layers.push(first);

    for col in &columns[1..] {
        let prev = layers.last().expect("first layer exists");
        let mut next = Vec::new();
        let mut seen: HashMap<Key, usize> = HashMap::new();
        for (pi, node) in prev.iter().enumerate() {
            let (pmask, pcounts) = node.key;
            let demand = |r: usize| -> Option<bool> {
                if pmask >> r & 1 == 1 {
                    return Some(false);
                }
                match (pcounts >> (2 * r)) & 3 {
                    0 => Some(true),
                    1 => None,
                    _ => Some(false),
                }
            };
            for_each_mask(h, col, &demand, &mut |mask| {
                if let Some(counts) = counts_for(h, col, pmask, mask) {
                    push_best(
                        &mut next,
                        &mut seen,
                        (mask, counts),
                        node.cost + mask.count_ones(),
                        pi as u32,
                    );
                }
            });
        }
        if next.is_empty() {
            return None;
        }
        layers.push(next);
    }

    // Without a right neighbour in the band every non-member must already be
    // dominated.
    let last = layers.last().expect("at least one column");
    let (best_idx, _) = last
        .iter()
        .enumerate()
        .filter(|(_, node)| {
            let (mask, counts) = node.key;
            (0..h).all(|r| mask >> r & 1 == 1 || (counts >> (2 * r)) & 3 != 0)
        })
        .min_by_key(|(idx, node)| (node.cost, *idx))?;

    let mut out = board.clone();
    let mut idx = best_idx;
    for t in (0..columns.len()).rev() {
        let node = &layers[t][idx];
        let j = bc0 + t;
        for r in 0..h {
            if columns[t].free >> r & 1 == 1 {
                out.set(br0 + r, j, node.key.0 >> r & 1 == 1);
            }
        }
        idx = node.parent as usize;
    }
    Some(out)
}

fn push_best(
    layer: &mut Vec<Node>,
    seen: &mut HashMap<Key, usize>,
    key: Key,
    cost: u32,
    parent: u32,
) {
    match seen.get(&key) {
        Some(&i) => {
            if cost < layer[i].cost {
                layer[i].cost = cost;
                layer[i].parent = parent;
            }
        }
        None => {
            seen.insert(key, layer.len());
            layer.push(Node { key, cost, parent });
        }
    }
}

/// Every vertically independent mask of `col` that agrees with its frozen
/// cells and with `demand` (`Some(bit)` forces a row).
fn for_each_mask(
    h: usize,
    col: &Column,
    demand: &dyn Fn(usize) -> Option<bool>,
    f: &mut dyn FnMut(u32),
) {
    fn rec(
        r: usize,
        h: usize,
        mask: u32,
        col: &Column,
        demand: &dyn Fn(usize) -> Option<bool>,
        f: &mut dyn FnMut(u32),
    ) {
        if r == h {
            f(mask);
            return;
        }
        let options: &[bool] = if col.free >> r & 1 == 1 {
            &[false, true]
        } else if col.fixed >> r & 1 == 1 {
            &[true]
        } else {
            &[false]
        };
        for &bit in options {
            if demand(r).is_some_and(|d| d != bit) {
                continue;
            }
            if bit && r > 0 && mask >> (r - 1) & 1 == 1 {
                continue;
            }
            rec(r + 1, h, mask | (bit as u32) << r, col, demand, f);
        }
    }
    rec(0, h, 0, col, demand, f);
}

/// Dominators seen so far for each row of a column with members `mask` and
/// left neighbour column `left`. `None` if a member touches a frozen member
/// or a non-member already has three.
fn counts_for(h: usize, col: &Column, left: u32, mask: u32) -> Option<u64> {
    let mut packed = 0u64;
    for r in 0..h {
        let ext = col.ext[r] as u32;
        if mask >> r & 1 == 1 {
            if ext > 0 {
                return None;
            }
            continue;
        }
        let up = r > 0 && mask >> (r - 1) & 1 == 1;
        let down = r + 1 < h && mask >> (r + 1) & 1 == 1;
        let count = ext + (left >> r & 1) + up as u32 + down as u32;
        if count > 2 {
            return None;
        }
        packed |= (count as u64) << (2 * r);
    }
    Some(packed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grids::verify_set;
    use crate::oracle::{brute_force_min, Mode};

    #[test]
    fn whole_grid_window_is_exact() {
        for (m, n) in [(2, 2), (3, 5), (4, 4), (4, 5), (5, 4), (2, 9)] {
            let empty = Board::from_set(&GridSet::empty(m, n));
            let w = Window {
                rows: (1, m),
                cols: (1, n),
            };
            let best = minimize_window(&empty, w).unwrap();
            assert!(verify_set(&best.to_set()).is_valid());
            let oracle = brute_force_min(m, n, Mode::I12).unwrap().value;
            assert_eq!(best.count() as u64, oracle.unwrap(), "{m}x{n}");
        }
    }

    #[test]
    fn interior_window_keeps_outside_cells() {
        let base = crate::grids::extract_min_set(5, 12).unwrap();
        let board = Board::from_set(&base);
        let w = Window {
            rows: (2, 4),
            cols: (4, 8),
        };
        let out = minimize_window(&board, w).unwrap();
        let set = out.to_set();
        assert!(verify_set(&set).is_valid());
        assert!(set.len() <= base.len());
        for i in 1..=5 {
            for j in 1..=12 {
                if !w.contains((i, j)) {
                    assert_eq!(out.get(i, j), board.get(i, j));
                }
            }
        }
    }
}
