//! Vertex sets of the `m x n` grid: verification, extraction from the DP and
//! the labelling that maps a set back to column words.
//!
//! Coordinates are 1-based `(row, column)`, row 1 at the top.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::TransferSystem;
use crate::words::{ColumnWord, Label};

pub type Vertex = (usize, usize);

/// A set of grid vertices, serialised as
/// `{"m": .., "n": .., "members": [[i, j], ..]}`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGridSet")]
pub struct GridSet {
    m: usize,
    n: usize,
    members: BTreeSet<Vertex>,
}

#[derive(Deserialize)]
struct RawGridSet {
    m: usize,
    n: usize,
    members: Vec<Vertex>,
}

impl TryFrom<RawGridSet> for GridSet {
    type Error = Error;

    fn try_from(raw: RawGridSet) -> Result<GridSet> {
        GridSet::from_members(raw.m, raw.n, raw.members)
    }
}

impl GridSet {
    pub fn empty(m: usize, n: usize) -> GridSet {
        GridSet {
            m,
            n,
            members: BTreeSet::new(),
        }
    }

    pub fn from_members(
        m: usize,
        n: usize,
        members: impl IntoIterator<Item = Vertex>,
    ) -> Result<GridSet> {
        if m == 0 || n == 0 {
            return Err(Error::Parse(format!("empty grid {m}x{n}")));
        }
        let mut set = GridSet::empty(m, n);
        for (i, j) in members {
            if !(1..=m).contains(&i) || !(1..=n).contains(&j) {
                return Err(Error::Parse(format!(
                    "vertex ({i}, {j}) outside the {m}x{n} grid"
                )));
            }
            set.members.insert((i, j));
        }
        Ok(set)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.members.contains(&v)
    }

    pub fn members(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.members.iter().copied()
    }

    /// Panics outside the grid.
    pub fn insert(&mut self, v: Vertex) -> bool {
        assert!(self.in_range(v), "{v:?} outside {}x{}", self.m, self.n);
        self.members.insert(v)
    }

    pub fn remove(&mut self, v: Vertex) -> bool {
        self.members.remove(&v)
    }

    pub fn in_range(&self, (i, j): Vertex) -> bool {
        (1..=self.m).contains(&i) && (1..=self.n).contains(&j)
    }

    pub fn neighbours(&self, (i, j): Vertex) -> impl Iterator<Item = Vertex> + '_ {
        let cand = [
            (i.wrapping_sub(1), j),
            (i + 1, j),
            (i, j.wrapping_sub(1)),
            (i, j + 1),
        ];
        cand.into_iter().filter(move |&v| self.in_range(v))
    }

    pub fn member_neighbours(&self, v: Vertex) -> usize {
        self.neighbours(v).filter(|&u| self.contains(u)).count()
    }

    /// The same set on the `n x m` grid.
    pub fn transpose(&self) -> GridSet {
        GridSet {
            m: self.n,
            n: self.m,
            members: self.members.iter().map(|&(i, j)| (j, i)).collect(),
        }
    }

    /// `'#'` for members, `'.'` otherwise, one line per row, preceded by a
    /// `"m n"` header line.
    pub fn to_ascii(&self) -> String {
        let mut out = format!("{} {}\n", self.m, self.n);
        out.push_str(&self.render_rows());
        out
    }

    fn render_rows(&self) -> String {
        let mut out = String::with_capacity(self.m * (self.n + 1));
        for i in 1..=self.m {
            for j in 1..=self.n {
                out.push(if self.contains((i, j)) { '#' } else { '.' });
            }
            out.push('\n');
        }
        out
    }

    pub fn from_ascii(text: &str) -> Result<GridSet> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty input".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::Parse(format!("bad header {header:?}")))
            })
            .collect::<Result<_>>()?;
        let [m, n] = dims[..] else {
            return Err(Error::Parse(format!(
                "header must be \"m n\", got {header:?}"
            )));
        };
        let mut members = Vec::new();
        let mut rows = 0;
        for (i, line) in lines.enumerate() {
            if line.chars().count() != n {
                return Err(Error::Parse(format!(
                    "row {} has {} cells, expected {n}",
                    i + 1,
                    line.chars().count()
                )));
            }
            for (j, c) in line.chars().enumerate() {
                match c {
                    '#' => members.push((i + 1, j + 1)),
                    '.' => {}
                    _ => return Err(Error::Parse(format!("unexpected {c:?} in row {}", i + 1))),
                }
            }
            rows += 1;
        }
        if rows != m {
            return Err(Error::Parse(format!("expected {m} rows, got {rows}")));
        }
        GridSet::from_members(m, n, members)
    }

    /// Accepts either the JSON or the ASCII form.
    pub fn parse_any(text: &str) -> Result<GridSet> {
        if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
        } else {
            GridSet::from_ascii(text)
        }
    }
}

impl fmt::Display for GridSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_rows())
    }
}

impl fmt::Debug for GridSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GridSet {}x{} ({} members)\n{}",
            self.m,
            self.n,
            self.len(),
            self.render_rows()
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    AdjacentPair,
    Undominated,
    OverDominated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub vertex: Vertex,
    pub kind: ViolationKind,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub independent: bool,
    pub dominated_ok: bool,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn is_valid(&self) -> bool {
        self.independent && self.dominated_ok
    }
}

/// Checks that `s` is independent and that every other vertex has one or two
/// neighbours in it. Each adjacent pair is reported once, at its upper/left end.
pub fn verify_set(s: &GridSet) -> VerificationReport {
    let mut violations = Vec::new();
    for i in 1..=s.m {
        for j in 1..=s.n {
            let v = (i, j);
            if s.contains(v) {
                for u in [(i + 1, j), (i, j + 1)] {
                    if s.contains(u) {
                        violations.push(Violation {
                            vertex: v,
                            kind: ViolationKind::AdjacentPair,
                            detail: format!("adjacent to member {u:?}"),
                        });
                    }
                }
            } else {
                let count = s.member_neighbours(v);
                if count == 0 {
                    violations.push(Violation {
                        vertex: v,
                        kind: ViolationKind::Undominated,
                        detail: "no neighbour in the set".into(),
                    });
                } else if count > 2 {
                    violations.push(Violation {
                        vertex: v,
                        kind: ViolationKind::OverDominated,
                        detail: format!("{count} neighbours in the set"),
                    });
                }
            }
        }
    }
    let independent = !violations
        .iter()
        .any(|v| v.kind == ViolationKind::AdjacentPair);
    let dominated_ok = violations
        .iter()
        .all(|v| v.kind == ViolationKind::AdjacentPair);
    VerificationReport {
        independent,
        dominated_ok,
        violations,
    }
}

/// A minimum independent [1,2]-set, reconstructed from the DP over columns of
/// height `m`.
pub fn extract_min_set(m: usize, n: usize) -> Result<GridSet> {
    let system = TransferSystem::new(m)?;
    extract_with(&system, n)
}

pub fn extract_with(system: &TransferSystem, n: usize) -> Result<GridSet> {
    let m = system.m();
    if n == 0 {
        return Err(Error::InvalidDimensions {
            m,
            n,
            reason: "at least one column required",
        });
    }
    let trace = system.trace(n);
    let path = trace.backtrack()?;
    let mut set = GridSet::empty(m, n);
    for (j, &p) in path.iter().enumerate() {
        let w = system.table().word(p);
        for i in 0..m {
            if w.get(i) == Label::Zero {
                set.insert((i + 1, j + 1));
            }
        }
    }
    let report = verify_set(&set);
    if !report.is_valid() {
        return Err(Error::Internal(format!(
            "extracted {m}x{n} set fails verification: {:?}",
            report.violations
        )));
    }
    if Some(set.len() as u64) != trace.value().value() {
        return Err(Error::Internal(
            "extracted set size differs from the optimum".into(),
        ));
    }
    Ok(set)
}

/// Column words of the labelling induced by a valid set (needs `m >= 2`).
pub fn labeling_of(s: &GridSet) -> Result<Vec<ColumnWord>> {
    if s.m < 2 {
        return Err(Error::InvalidDimensions {
            m: s.m,
            n: s.n,
            reason: "labelling needs at least two rows",
        });
    }
    let report = verify_set(s);
    if !report.is_valid() {
        return Err(Error::InvalidSet(Box::new(report)));
    }
    (1..=s.n)
        .map(|j| {
            let labels: Vec<Label> = (1..=s.m)
                .map(|i| {
                    if s.contains((i, j)) {
                        Label::Zero
                    } else {
                        let count = [(i, j.wrapping_sub(1)), (i.wrapping_sub(1), j), (i + 1, j)]
                            .into_iter()
                            .filter(|&u| s.contains(u))
                            .count();
                        Label::for_count(count).expect("verified sets have at most two dominators")
                    }
                })
                .collect();
            ColumnWord::new(&labels)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{can_follow, is_final, is_initial, is_suitable};

    fn set(m: usize, n: usize, members: &[Vertex]) -> GridSet {
        GridSet::from_members(m, n, members.iter().copied()).unwrap()
    }

    #[test]
    fn four_cycle_examples() {
        assert!(verify_set(&set(2, 2, &[(1, 1), (2, 2)])).is_valid());
        let r = verify_set(&set(2, 2, &[(1, 1)]));
        assert!(r.independent && !r.dominated_ok);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].vertex, (2, 2));
        assert_eq!(r.violations[0].kind, ViolationKind::Undominated);
    }

    #[test]
    fn full_set_is_not_independent() {
        for (m, n) in [(1, 2), (2, 3), (4, 4)] {
            let all: Vec<Vertex> = (1..=m).flat_map(|i| (1..=n).map(move |j| (i, j))).collect();
            let r = verify_set(&set(m, n, &all));
            assert!(!r.independent);
            assert!(!r.is_valid());
        }
    }

    #[test]
    fn over_domination_reported() {
        // Centre of a 3x3 grid with all four neighbours in the set.
        let r = verify_set(&set(3, 3, &[(1, 2), (2, 1), (2, 3), (3, 2)]));
        assert!(r.independent);
        assert!(r
            .violations
            .iter()
            .any(|v| v.vertex == (2, 2) && v.kind == ViolationKind::OverDominated));
    }

    #[test]
    fn extraction_small() {
        let s = extract_min_set(2, 2).unwrap();
        assert_eq!(s.len(), 2);
        assert!(verify_set(&s).is_valid());
        let s = extract_min_set(3, 7).unwrap();
        assert_eq!(s.len(), 6);
        assert!(verify_set(&s).is_valid());
    }

    #[test]
    fn labeling_round_trip() {
        for (m, n) in [(2, 5), (3, 7), (4, 6), (5, 5)] {
            let s = extract_min_set(m, n).unwrap();
            let cols = labeling_of(&s).unwrap();
            assert_eq!(cols.len(), n);
            assert!(cols.iter().all(is_suitable));
            assert!(is_initial(&cols[0]));
            assert!(is_final(&cols[n - 1]));
            assert!(cols.windows(2).all(|w| can_follow(&w[1], &w[0])));
            assert_eq!(cols.iter().map(|c| c.zeros()).sum::<usize>(), s.len());
        }
    }

    #[test]
    fn labeling_rejects_invalid_sets() {
        assert!(matches!(
            labeling_of(&set(2, 2, &[(1, 1)])),
            Err(Error::InvalidSet(_))
        ));
    }

    #[test]
    fn ascii_and_json_forms() {
        let s = extract_min_set(3, 5).unwrap();
        let ascii = s.to_ascii();
        assert!(ascii.starts_with("3 5\n"));
        assert_eq!(GridSet::from_ascii(&ascii).unwrap(), s);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(GridSet::parse_any(&json).unwrap(), s);
        assert_eq!(serde_json::from_str::<GridSet>(&json).unwrap(), s);
        assert!(json.starts_with(r#"{"m":3,"n":5,"members":[["#));
    }

    #[test]
    fn json_reader_tolerates_extra_keys() {
        let text =
            r#"{"command":"extract","m":2,"n":2,"inputs":{"a":[1,"x"]},"members":[[1,1],[2,2]]}"#;
        assert_eq!(
            GridSet::parse_any(text).unwrap(),
            set(2, 2, &[(1, 1), (2, 2)])
        );
    }

    #[test]
    fn parse_errors() {
        assert!(GridSet::from_ascii("2 2\n#.\n").is_err());
        assert!(GridSet::from_ascii("2 2\n#.\n.x\n").is_err());
        assert!(GridSet::parse_any(r#"{"m":2,"n":2,"members":[[3,1]]}"#).is_err());
        assert!(serde_json::from_str::<GridSet>(r#"{"m":2,"n":2,"members":[[0,1]]}"#).is_err());
    }

    #[test]
    fn transpose_preserves_validity() {
        let s = extract_min_set(3, 6).unwrap();
        assert!(verify_set(&s.transpose()).is_valid());
        let bad = set(2, 3, &[(1, 1), (1, 2)]);
        assert_eq!(
            verify_set(&bad).is_valid(),
            verify_set(&bad.transpose()).is_valid()
        );
    }
}
