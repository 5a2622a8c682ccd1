//! Ground truth on small grids, independent of the word machinery.
//!
//! Two engines: plain enumeration of every vertex subset, and a DP over
//! column membership masks. Neither knows about labels or suitable words.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grids::GridSet;
use crate::tropical::Cost;

/// Largest `m * n` the exhaustive engine accepts.
pub const BRUTE_FORCE_MAX_CELLS: usize = 20;
/// Largest column height the profile engine accepts.
pub const PROFILE_MAX_ROWS: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// Independent [1,2]-set: every non-member has one or two neighbours inside.
    #[serde(rename = "i12")]
    I12,
    /// Independent dominating set.
    #[serde(rename = "i")]
    I,
}

impl Mode {
    #[inline]
    fn count_ok(self, count: u32) -> bool {
        match self {
            Mode::I12 => (1..=2).contains(&count),
            Mode::I => count >= 1,
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Mode, String> {
        match s {
            "i12" => Ok(Mode::I12),
            "i" => Ok(Mode::I),
            _ => Err(format!("unknown mode {s:?} (expected i12 or i)")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::I12 => "i12",
            Mode::I => "i",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub value: Cost,
    pub witness: Option<GridSet>,
    pub mode: Mode,
}

/// Whether `s` satisfies `mode`'s constraints.
pub fn satisfies(s: &GridSet, mode: Mode) -> bool {
    (1..=s.m()).all(|i| {
        (1..=s.n()).all(|j| {
            let count = s.member_neighbours((i, j)) as u32;
            if s.contains((i, j)) {
                count == 0
            } else {
                mode.count_ok(count)
            }
        })
    })
}

/// Cells are visited column by column, top to bottom; that order defines the
/// membership sequence used for tie-breaking.
fn cell_index(m: usize, i: usize, j: usize) -> usize {
    (j - 1) * m + (i - 1)
}

/// Minimum over every vertex subset. Among minimum sets the witness has the
/// lexicographically smallest membership sequence (columns left to right,
/// rows top to bottom, non-member before member).
pub fn brute_force_min(m: usize, n: usize, mode: Mode) -> Result<OracleResult> {
    let cells = m * n;
    if m == 0 || n == 0 || cells > BRUTE_FORCE_MAX_CELLS {
        return Err(Error::InstanceTooLarge {
            m,
            n,
            engine: "exhaustive",
        });
    }
    // Sequence position p lives at bit cells-1-p, so integer order on masks
    // is lexicographic order on sequences.
    let bit = |i: usize, j: usize| 1u32 << (cells - 1 - cell_index(m, i, j));
    let mut nbr = vec![0u32; cells];
    let mut own = vec![0u32; cells];
    for j in 1..=n {
        for i in 1..=m {
            let c = cell_index(m, i, j);
            own[c] = bit(i, j);
            if i > 1 {
                nbr[c] |= bit(i - 1, j);
            }
            if i < m {
                nbr[c] |= bit(i + 1, j);
            }
            if j > 1 {
                nbr[c] |= bit(i, j - 1);
            }
            if j < n {
                nbr[c] |= bit(i, j + 1);
            }
        }
    }
    let mut best: Option<(u32, u32)> = None;
    for s in 0u32..(1u32 << cells) {
        let size = s.count_ones();
        if best.is_some_and(|(b, _)| size >= b) {
            continue;
        }
        let ok = (0..cells).all(|c| {
            let count = (nbr[c] & s).count_ones();
            if own[c] & s != 0 {
                count == 0
            } else {
                mode.count_ok(count)
            }
        });
        if ok {
            best = Some((size, s));
        }
    }
    Ok(match best {
        None => OracleResult {
            value: Cost::INFINITY,
            witness: None,
            mode,
        },
        Some((size, s)) => {
            let members = (1..=n)
                .flat_map(|j| (1..=m).map(move |i| (i, j)))
                .filter(|&(i, j)| s & bit(i, j) != 0);
            OracleResult {
                value: Cost::new(size as u64),
                witness: Some(GridSet::from_members(m, n, members)?),
                mode,
            }
        }
    })
}

/// Column-profile DP. The state after column `j` is the pair of membership
/// masks of columns `j-1` and `j`; together they fix the dominator counts of
/// column `j` from the left and from within the column. Same contract and
/// tie-break as [`brute_force_min`].
pub fn profile_dp_min(m: usize, n: usize, mode: Mode) -> Result<OracleResult> {
    if m == 0 || n == 0 || m > PROFILE_MAX_ROWS {
        return Err(Error::InstanceTooLarge {
            m,
            n,
            engine: "profile",
        });
    }
    const INF: u32 = u32::MAX;
    let side = 1usize << m;
    let independent: Vec<u32> = (0..side as u32).filter(|&b| b & (b >> 1) == 0).collect();
    // Rows are bits 0..m with row 1 at bit 0; lexicographic preference puts
    // row 1 first, so sort candidates by their bit-reversed value.
    let mut order = independent.clone();
    let lex_key = |b: u32| (0..m).fold(0u32, |acc, i| (acc << 1) | ((b >> i) & 1));
    order.sort_by_key(|&b| lex_key(b));

    // Column with members `cur`, neighbours `left` and `right`.
    let column_ok = |left: u32, cur: u32, right: u32| -> bool {
        (0..m).all(|i| {
            if cur >> i & 1 == 1 {
                return true;
            }
            let up = i > 0 && cur >> (i - 1) & 1 == 1;
            let down = i + 1 < m && cur >> (i + 1) & 1 == 1;
            let count = (left >> i & 1) + (right >> i & 1) + up as u32 + down as u32;
            mode.count_ok(count)
        })
    };
    let idx = |a: u32, b: u32| (a as usize) * side + b as usize;

    // togo[j][(a, b)]: fewest members in columns j+1..n, given columns j-1 and j.
    let mut togo = vec![vec![INF; side * side]; n + 1];
    for &a in &independent {
        for &b in &independent {
            if a & b == 0 && column_ok(a, b, 0) {
                togo[n][idx(a, b)] = 0;
            }
        }
    }
    for j in (1..n).rev() {
        for &a in &independent {
            for &b in &independent {
                if a & b != 0 {
                    continue;
                }
                let mut best = INF;
                for &c in &independent {
                    if b & c != 0 || !column_ok(a, b, c) {
                        continue;
                    }
                    let rest = togo[j + 1][idx(b, c)];
                    if rest != INF {
                        best = best.min(rest + c.count_ones());
                    }
                }
                togo[j][idx(a, b)] = best;
            }
        }
    }
    let total = order
        .iter()
        .filter_map(|&b| {
            let rest = togo[1][idx(0, b)];
            (rest != INF).then(|| rest + b.count_ones())
        })
        .min();
    let Some(total) = total else {
        return Ok(OracleResult {
            value: Cost::INFINITY,
            witness: None,
            mode,
        });
    };

    let mut columns = Vec::with_capacity(n);
    let (mut before, mut prev, mut need) = (0u32, 0u32, total);
    for (j, rest_j) in togo.iter().enumerate().skip(1) {
        let b = *order
            .iter()
            .find(|&&b| {
                let fits = j == 1 || (prev & b == 0 && column_ok(before, prev, b));
                let rest = rest_j[idx(prev, b)];
                fits && rest != INF && rest + b.count_ones() == need
            })
            .ok_or_else(|| Error::Internal("profile DP reconstruction lost the optimum".into()))?;
        need -= b.count_ones();
        before = prev;
        prev = b;
        columns.push(b);
    }
    let members = columns.iter().enumerate().flat_map(|(j, &b)| {
        (0..m)
            .filter(move |&i| b >> i & 1 == 1)
            .map(move |i| (i + 1, j + 1))
    });
    Ok(OracleResult {
        value: Cost::new(total as u64),
        witness: Some(GridSet::from_members(m, n, members)?),
        mode,
    })
}
