//! Minimum independent [1,2]-sets by min-plus iteration.
//!
//! With `X^1` the initial vector and `A` the transfer matrix, `X^r = A ⊠ X^(r-1)`
//! holds in entry `p` the fewest members of any labelling of the `m x r` grid
//! whose last column reads `p` (vertices labelled `3` in that column are still
//! waiting for a right neighbour). Restricting to final words gives the answer
//! for `P_m □ P_r`.
//!
//! Once `X^(n0+d) = X^n0 + c` entrywise the whole sequence repeats with that
//! shift, so `f(n + d) = f(n) + c` for all `n >= n0` ([`PeriodCertificate`]).

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, VecDeque};
use std::hash::{Hash, Hasher};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::{self, Mode};
use crate::tropical::{
    build_initial_vector, build_transition_matrix, mat_vec, Cost, TropicalMatrix, TropicalVector,
};
use crate::words::{enumerate_suitable_capped, is_final, WordTable, DEFAULT_WORD_CAP};

/// Default bound on the period length searched by [`detect_period`].
pub const DEFAULT_MAX_D: usize = 32;
/// Default bound on the start of the period; must exceed 73 to reach width 13.
pub const DEFAULT_MAX_N: usize = 128;
/// Widths covered by [`closed_form`].
pub const CLOSED_FORM_WIDTHS: std::ops::RangeInclusive<usize> = 2..=13;
/// Smallest width handled by the diagonal pattern.
pub const PATTERN_MIN_WIDTH: usize = 14;

/// Word table, initial vector and transfer matrix for one width.
#[derive(Clone, Debug)]
pub struct TransferSystem {
    table: WordTable,
    matrix: TropicalMatrix,
    initial: TropicalVector,
    finals: Vec<usize>,
}

impl TransferSystem {
    pub fn new(m: usize) -> Result<TransferSystem> {
        TransferSystem::with_word_cap(m, DEFAULT_WORD_CAP)
    }

    pub fn with_word_cap(m: usize, cap: usize) -> Result<TransferSystem> {
        let table = enumerate_suitable_capped(m, cap)?;
        let matrix = build_transition_matrix(&table);
        let initial = build_initial_vector(&table);
        let finals = (0..table.k())
            .filter(|&p| is_final(&table.word(p)))
            .collect();
        Ok(TransferSystem {
            table,
            matrix,
            initial,
            finals,
        })
    }

    pub fn m(&self) -> usize {
        self.table.m()
    }

    pub fn table(&self) -> &WordTable {
        &self.table
    }

    pub fn matrix(&self) -> &TropicalMatrix {
        &self.matrix
    }

    pub fn initial(&self) -> &TropicalVector {
        &self.initial
    }

    /// Ids of the final words, ascending.
    pub fn finals(&self) -> &[usize] {
        &self.finals
    }

    pub fn step(&self, x: &TropicalVector) -> TropicalVector {
        mat_vec(&self.matrix, x)
    }

    /// Minimum of `x` over final words.
    pub fn min_final(&self, x: &TropicalVector) -> Cost {
        self.finals
            .iter()
            .map(|&p| x[p])
            .min()
            .unwrap_or(Cost::INFINITY)
    }

    /// `X^1, X^2, ...` without end.
    pub fn vectors(&self) -> impl Iterator<Item = TropicalVector> + '_ {
        std::iter::successors(Some(self.initial.clone()), move |x| Some(self.step(x)))
    }

    /// `f(1), ..., f(n_max)`; entry `r - 1` is the optimum for `r` columns.
    pub fn values(&self, n_max: usize) -> Vec<Cost> {
        self.vectors()
            .take(n_max)
            .map(|x| self.min_final(&x))
            .collect()
    }

    /// Keeps `X^1..X^n` for backtracking.
    pub fn trace(&self, n: usize) -> DpTrace<'_> {
        DpTrace {
            system: self,
            vectors: self.vectors().take(n).collect(),
        }
    }

    pub fn detect_period(&self, max_d: usize, max_n: usize) -> Result<PeriodCertificate> {
        let m = self.m();
        let no_period = Error::NoPeriod { m, max_d, max_n };
        let mut ring: VecDeque<(u64, u64, TropicalVector)> = VecDeque::with_capacity(max_d + 1);
        let mut f = Vec::new();
        for (idx, x) in self.vectors().take(max_n + max_d).enumerate() {
            let r = idx + 1;
            f.push(self.min_final(&x));
            let (norm, offset) = x.normalized();
            let offset = offset.ok_or(Error::NoPeriod { m, max_d, max_n })?;
            let mut h = DefaultHasher::new();
            norm.hash(&mut h);
            let hash = h.finish();
            // ring[len - d] holds r - d.
            for d in 1..=ring.len() {
                let (h_prev, off_prev, ref prev) = ring[ring.len() - d];
                let n0 = r - d;
                if n0 > max_n || h_prev != hash || *prev != norm {
                    continue;
                }
                let boundary = (n0..n0 + d).map(|s| (s, f[s - 1])).collect();
                return Ok(PeriodCertificate {
                    m,
                    n0,
                    d,
                    c: offset - off_prev,
                    boundary,
                });
            }
            ring.push_back((hash, offset, norm));
            if ring.len() > max_d {
                ring.pop_front();
            }
        }
        Err(no_period)
    }
}

/// `X^1..X^n` for one width.
pub struct DpTrace<'a> {
    system: &'a TransferSystem,
    vectors: Vec<TropicalVector>,
}

impl<'a> DpTrace<'a> {
    pub fn system(&self) -> &'a TransferSystem {
        self.system
    }

    pub fn n(&self) -> usize {
        self.vectors.len()
    }

    /// `X^r`, 1-based.
    pub fn vector(&self, r: usize) -> &TropicalVector {
        &self.vectors[r - 1]
    }

    pub fn value(&self) -> Cost {
        self.system.min_final(self.vector(self.n()))
    }

    /// Word ids of an optimal labelling, first column first. Ties go to the
    /// smallest id, both for the last column and for every predecessor.
    pub fn backtrack(&self) -> Result<Vec<usize>> {
        let best = self.value();
        if !best.is_finite() {
            return Err(Error::Infeasible {
                m: self.system.m(),
                n: self.n(),
            });
        }
        let last = self.vector(self.n());
        let mut p = *self
            .system
            .finals
            .iter()
            .find(|&&p| last[p] == best)
            .expect("minimum is attained");
        let mut path = vec![p];
        let a = &self.system.matrix;
        for r in (2..=self.n()).rev() {
            let target = self.vector(r)[p];
            let prev = self.vector(r - 1);
            let weight = Cost::new(a.row_weight(p));
            p = a
                .predecessors(p)
                .iter()
                .map(|&q| q as usize)
                .find(|&q| prev[q] + weight == target)
                .ok_or_else(|| {
                    Error::Internal(format!("no predecessor reaches X^{r} at word {p}"))
                })?;
            path.push(p);
        }
        if self.system.initial[p] != self.vector(1)[p] || !self.system.initial[p].is_finite() {
            return Err(Error::Internal(
                "backtrack did not end on an initial word".into(),
            ));
        }
        path.reverse();
        Ok(path)
    }
}

/// Witness that `f(n + d) = f(n) + c` for every `n >= n0`, with the values of
/// `f` on `n0..n0+d` to start the recurrence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodCertificate {
    pub m: usize,
    pub n0: usize,
    pub d: usize,
    pub c: u64,
    pub boundary: BTreeMap<usize, Cost>,
}

impl PeriodCertificate {
    pub fn value_at(&self, n: usize) -> Result<Cost> {
        extend_by_period(self, n)
    }
}

fn check_width(m: usize, n: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidDimensions {
            m,
            n,
            reason: "the word machinery needs at least two rows",
        });
    }
    if n == 0 {
        return Err(Error::InvalidDimensions {
            m,
            n,
            reason: "at least one column required",
        });
    }
    Ok(())
}

/// Optimum for the `m x n` grid by running the DP over columns of height `m`.
///
/// Any `n >= 1` is accepted; the cost grows with `m`, so pass the smaller side
/// as `m` when it matters.
pub fn solve_width(m: usize, n: usize) -> Result<Cost> {
    check_width(m, n)?;
    let system = TransferSystem::new(m)?;
    Ok(*system.values(n).last().expect("n >= 1"))
}

pub fn detect_period(m: usize, max_d: usize, max_n: usize) -> Result<PeriodCertificate> {
    check_width(m, 1)?;
    TransferSystem::new(m)?.detect_period(max_d, max_n)
}

pub fn extend_by_period(cert: &PeriodCertificate, n: usize) -> Result<Cost> {
    if n < cert.n0 {
        return Err(Error::BelowPeriodStart { n, n0: cert.n0 });
    }
    let steps = (n - cert.n0) / cert.d;
    let base = cert.n0 + (n - cert.n0) % cert.d;
    let start =
        cert.boundary.get(&base).copied().ok_or_else(|| {
            Error::Internal(format!("certificate lacks boundary value at {base}"))
        })?;
    Ok(start + Cost::new(steps as u64 * cert.c))
}

/// Published piecewise formulas for widths 2 to 13, `n >= m`.
pub fn closed_form(m: usize, n: usize) -> Result<Cost> {
    if !CLOSED_FORM_WIDTHS.contains(&m) {
        return Err(Error::InvalidDimensions {
            m,
            n,
            reason: "closed forms cover widths 2 to 13",
        });
    }
    if n < m {
        return Err(Error::InvalidDimensions {
            m,
            n,
            reason: "closed forms assume n >= m",
        });
    }
    let v = match m {
        2 => (n + 2) / 2,
        3 if n % 4 == 2 => (3 * n + 8) / 4,
        3 => (3 * n + 4) / 4,
        4 if matches!(n, 5 | 6 | 9) => n + 1,
        4 => n,
        5 => (6 * n + 8) / 5,
        6 if matches!(n % 7, 0 | 3) && n != 7 => (10 * n + 17) / 7,
        6 => (10 * n + 10) / 7,
        7 => (5 * n + 3) / 3,
        8 if n == 8 => 16,
        8 => (15 * n + 16) / 8,
        9 if matches!(n % 10, 0 | 7 | 9) => (21 * n + 28) / 10,
        9 => (21 * n + 18) / 10,
        10 if matches!(n, 12 | 18 | 21 | 30) => (21 * n + 23) / 9,
        10 => (21 * n + 14) / 9,
        11 => (28 * n + 26) / 11,
        12 if n % 13 == 10 => (36 * n + 41) / 13,
        12 => (36 * n + 28) / 13,
        13 if matches!(n % 12, 1 | 4 | 7 | 10) => 3 * n + 1,
        13 => 3 * n + 2,
        _ => unreachable!(),
    };
    Ok(Cost::new(v as u64))
}

/// `⌊(m+2)(n+2)/5⌋ - 4`, the optimum once `14 <= m <= n`.
pub fn big_grid_value(m: usize, n: usize) -> Result<Cost> {
    if m < PATTERN_MIN_WIDTH || n < m {
        return Err(Error::InvalidDimensions {
            m,
            n,
            reason: "the pattern value needs 14 <= m <= n",
        });
    }
    Ok(Cost::new(((m + 2) * (n + 2) / 5 - 4) as u64))
}

/// Optimum for any grid, by regime: the oracle for paths, the closed forms
/// for widths up to 13, the pattern value beyond. Either orientation is
/// accepted.
pub fn value(m: usize, n: usize) -> Result<Cost> {
    let (m, n) = (m.min(n), m.max(n));
    match m {
        0 => Err(Error::InvalidDimensions {
            m,
            n,
            reason: "empty grid",
        }),
        1 => Ok(oracle::profile_dp_min(1, n, Mode::I12)?.value),
        2..=13 => closed_form(m, n),
        _ => big_grid_value(m, n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(solve_width(2, 4).unwrap(), Cost::new(3));
        assert_eq!(solve_width(3, 7).unwrap(), Cost::new(6));
        assert_eq!(solve_width(2, 2).unwrap(), Cost::new(2));
    }

    #[test]
    fn rejects_bad_widths() {
        assert!(solve_width(1, 5).is_err());
        assert!(solve_width(3, 0).is_err());
        assert!(closed_form(14, 20).is_err());
        assert!(closed_form(5, 4).is_err());
        assert!(big_grid_value(13, 20).is_err());
        assert!(big_grid_value(15, 14).is_err());
    }

    #[test]
    fn period_certificates_small_widths() {
        let c2 = detect_period(2, DEFAULT_MAX_D, DEFAULT_MAX_N).unwrap();
        assert_eq!((c2.n0, c2.d, c2.c), (4, 2, 1));
        let c4 = detect_period(4, DEFAULT_MAX_D, DEFAULT_MAX_N).unwrap();
        assert_eq!((c4.n0, c4.d, c4.c), (11, 1, 1));
        assert_eq!(c4.boundary[&11], Cost::new(11));
        let c6 = detect_period(6, DEFAULT_MAX_D, DEFAULT_MAX_N).unwrap();
        assert_eq!((c6.n0, c6.d, c6.c), (9, 7, 10));
    }

    #[test]
    fn no_period_under_tight_bounds() {
        assert!(matches!(
            detect_period(6, 3, 20),
            Err(Error::NoPeriod { .. })
        ));
    }

    #[test]
    fn extension_examples() {
        let c2 = detect_period(2, 8, 32).unwrap();
        assert_eq!(extend_by_period(&c2, 6).unwrap(), Cost::new(4));
        assert_eq!(extend_by_period(&c2, 4).unwrap(), c2.boundary[&4]);
        assert!(matches!(
            extend_by_period(&c2, 3),
            Err(Error::BelowPeriodStart { .. })
        ));
        let c3 = detect_period(3, 8, 32).unwrap();
        assert_eq!(extend_by_period(&c3, 11).unwrap(), Cost::new(9));
    }

    #[test]
    fn closed_form_spot_values() {
        assert_eq!(closed_form(5, 5).unwrap(), Cost::new(7));
        assert_eq!(closed_form(4, 9).unwrap(), Cost::new(10));
        assert_eq!(closed_form(13, 73).unwrap(), Cost::new(220));
    }

    #[test]
    fn big_grid_spot_values() {
        assert_eq!(big_grid_value(14, 14).unwrap(), Cost::new(47));
        assert_eq!(big_grid_value(15, 17).unwrap(), Cost::new(60));
        assert_eq!(big_grid_value(14, 17).unwrap(), Cost::new(56));
    }

    #[test]
    fn dispatch_normalises_orientation() {
        assert_eq!(value(4, 2).unwrap(), Cost::new(3));
        assert_eq!(value(20, 15).unwrap(), big_grid_value(15, 20).unwrap());
        assert_eq!(value(1, 7).unwrap(), Cost::new(3));
        assert!(value(0, 3).is_err());
    }

    #[test]
    fn monotone_in_columns() {
        for m in 2..=6 {
            let f = TransferSystem::new(m).unwrap().values(40);
            assert!(f.windows(2).all(|w| w[0] <= w[1]), "m = {m}: {f:?}");
        }
    }

    #[test]
    fn transpose_symmetry() {
        let systems: Vec<TransferSystem> =
            (2..=6).map(|m| TransferSystem::new(m).unwrap()).collect();
        let vals: Vec<Vec<Cost>> = systems.iter().map(|s| s.values(6)).collect();
        for m in 2..=6 {
            for n in 2..=6 {
                assert_eq!(vals[m - 2][n - 1], vals[n - 2][m - 1], "{m}x{n}");
            }
        }
    }

    #[test]
    fn backtrack_follows_the_rules() {
        let system = TransferSystem::new(4).unwrap();
        let trace = system.trace(9);
        let path = trace.backtrack().unwrap();
        let t = system.table();
        assert_eq!(path.len(), 9);
        assert!(crate::words::is_initial(&t.word(path[0])));
        assert!(is_final(&t.word(path[8])));
        for w in path.windows(2) {
            assert!(crate::words::can_follow(&t.word(w[1]), &t.word(w[0])));
        }
        let zeros: usize = path.iter().map(|&p| t.word(p).zeros()).sum();
        assert_eq!(Cost::new(zeros as u64), trace.value());
    }
}
