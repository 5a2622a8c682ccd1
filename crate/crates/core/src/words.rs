//! Column labels and the words they form.
//!
//! Fix an independent [1,2]-set `S` of the `m x n` grid. Every vertex gets a
//! label that only looks at its own column and the column to its left:
//!
//! * `0` the vertex is in `S`;
//! * `1` / `2` it is not, and has one / two neighbours in `S` among its left,
//!   upper and lower neighbours;
//! * `3` it is not, and none of those three neighbours is in `S`, so it must
//!   be dominated by its right neighbour.
//!
//! Each column then reads as a word of length `m` over `{0,1,2,3}`. This module
//! decides which words can occur at all ([`is_suitable`]), which can open or
//! close a grid ([`is_initial`], [`is_final`]) and which can stand next to each
//! other ([`can_follow`]).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Longest word that fits the packed representation.
pub const MAX_WORD_LEN: usize = 32;

/// Default refusal threshold for [`enumerate_suitable`].
pub const DEFAULT_WORD_CAP: usize = 1 << 21;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum Label {
    Zero = 0,
    One = 1,
    Two = 2,
    Three = 3,
}

impl Label {
    pub const ALL: [Label; 4] = [Label::Zero, Label::One, Label::Two, Label::Three];

    #[inline]
    pub fn from_bits(bits: u64) -> Label {
        Label::ALL[(bits & 3) as usize]
    }

    pub fn from_char(c: char) -> Option<Label> {
        match c {
            '0' => Some(Label::Zero),
            '1' => Some(Label::One),
            '2' => Some(Label::Two),
            '3' => Some(Label::Three),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        (b'0' + self as u8) as char
    }

    /// Label of a non-member with `count` dominators among left/up/down.
    /// `None` when the count is three, which no [1,2]-set allows.
    pub fn for_count(count: usize) -> Option<Label> {
        match count {
            0 => Some(Label::Three),
            1 => Some(Label::One),
            2 => Some(Label::Two),
            _ => None,
        }
    }
}

/// A column of labels, top row first.
///
/// Labels are packed two bits each with the top row in the most significant
/// position, so the derived ordering of equal-length words is lexicographic.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColumnWord {
    bits: u64,
    len: u8,
}

impl ColumnWord {
    pub fn new(labels: &[Label]) -> Result<ColumnWord> {
        if labels.len() < 2 {
            return Err(malformed(labels, "length must be at least 2"));
        }
        if labels.len() > MAX_WORD_LEN {
            return Err(malformed(labels, "length exceeds 32"));
        }
        let bits = labels.iter().fold(0u64, |acc, &l| (acc << 2) | l as u64);
        Ok(ColumnWord {
            bits,
            len: labels.len() as u8,
        })
    }

    #[cfg(test)]
    pub(crate) fn from_raw(bits: u64, len: usize) -> ColumnWord {
        debug_assert!((2..=MAX_WORD_LEN).contains(&len));
        ColumnWord {
            bits,
            len: len as u8,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Packed representation, top row in the high bits.
    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Label at 0-based position `i` (0 = top row).
    #[inline]
    pub fn get(&self, i: usize) -> Label {
        debug_assert!(i < self.len());
        Label::from_bits(self.bits >> (2 * (self.len() - 1 - i)))
    }

    #[inline]
    fn at(&self, i: isize) -> Option<Label> {
        if i < 0 || i as usize >= self.len() {
            None
        } else {
            Some(self.get(i as usize))
        }
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    pub fn zeros(&self) -> usize {
        self.labels().filter(|&l| l == Label::Zero).count()
    }

    /// The same column read bottom to top.
    pub fn reversed(&self) -> ColumnWord {
        let labels: Vec<Label> = self
            .labels()
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .collect();
        ColumnWord::new(&labels).expect("reversal preserves length")
    }

    /// Bit `i` set iff position `i` is labelled 0.
    pub fn member_mask(&self) -> u64 {
        (0..self.len())
            .filter(|&i| self.get(i) == Label::Zero)
            .fold(0, |acc, i| acc | 1 << i)
    }
}

fn malformed(labels: &[Label], reason: &'static str) -> Error {
    Error::MalformedWord {
        word: labels.iter().map(|l| l.as_char()).collect(),
        reason,
    }
}

impl FromStr for ColumnWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<ColumnWord> {
        let labels = s
            .chars()
            .map(|c| {
                Label::from_char(c).ok_or_else(|| Error::MalformedWord {
                    word: s.to_string(),
                    reason: "symbols must be 0, 1, 2 or 3",
                })
            })
            .collect::<Result<Vec<_>>>()?;
        ColumnWord::new(&labels).map_err(|e| match e {
            Error::MalformedWord { reason, .. } => Error::MalformedWord {
                word: s.to_string(),
                reason,
            },
            e => e,
        })
    }
}

impl fmt::Display for ColumnWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.labels() {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for ColumnWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ColumnWord({self})")
    }
}

/// Number of label-0 positions, i.e. members of the set in this column.
pub fn zeros(w: &ColumnWord) -> usize {
    w.zeros()
}

/// Substrings that can never appear in a column.
const FORBIDDEN: [&[Label]; 6] = {
    use Label::*;
    [
        &[Zero, Zero],
        &[Two, Two],
        &[Three, Three],
        &[Zero, Three],
        &[Three, Zero],
        &[Zero, One, Zero],
    ]
};

fn ends_with_forbidden(prefix: &[Label]) -> bool {
    FORBIDDEN.iter().any(|pat| prefix.ends_with(pat))
}

/// Whether `w` can be a column of the labelling of some independent [1,2]-set.
///
/// Besides the forbidden substrings `00 22 33 03 30 010`, the pairs `11`, `32`,
/// `23`, `21` and `12` each demand a `0` at a neighbouring position. A demanded
/// position beyond either end of the word does not exist and fails the rule.
pub fn is_suitable(w: &ColumnWord) -> bool {
    use Label::*;
    let m = w.len() as isize;
    let zero_at = |i: isize| w.at(i) == Some(Zero);
    for i in 0..m {
        let cur = w.get(i as usize);
        if i + 1 < m
            && matches!(
                (cur, w.get(i as usize + 1)),
                (Zero, Zero) | (Two, Two) | (Three, Three) | (Zero, Three) | (Three, Zero)
            )
        {
            return false;
        }
        if i + 2 < m && cur == Zero && w.get(i as usize + 1) == One && zero_at(i + 2) {
            return false;
        }
    }
    for i in 0..m - 1 {
        let ok = match (w.get(i as usize), w.get(i as usize + 1)) {
            (One, One) => zero_at(i - 1) || zero_at(i + 2),
            (Three, Two) => zero_at(i + 2),
            (Two, Three) => zero_at(i - 1),
            (Two, One) | (One, Two) => zero_at(i - 1) && zero_at(i + 2),
            _ => true,
        };
        if !ok {
            return false;
        }
    }
    true
}

/// Whether a suitable word may be the first column: every `2` sits between two
/// `0`s and every `1` has a `0` on exactly one side.
pub fn is_initial(w: &ColumnWord) -> bool {
    let m = w.len() as isize;
    (0..m).all(|i| {
        let up = w.at(i - 1) == Some(Label::Zero);
        let down = w.at(i + 1) == Some(Label::Zero);
        match w.get(i as usize) {
            Label::Two => up && down,
            Label::One => up != down,
            _ => true,
        }
    })
}

/// Whether a suitable word may be the last column (no `3`).
pub fn is_final(w: &ColumnWord) -> bool {
    w.labels().all(|l| l != Label::Three)
}

/// Rule for position `i` when column `p` follows column `q`.
///
/// Reads `p[i-1]`, `p[i]`, `p[i+1]` and `q[i]` only.
#[inline]
fn position_ok(p: &ColumnWord, q: &ColumnWord, i: usize) -> bool {
    use Label::*;
    let m = p.len();
    let up0 = i > 0 && p.get(i - 1) == Zero;
    let down0 = i + 1 < m && p.get(i + 1) == Zero;
    let interior = i > 0 && i + 1 < m;
    match (q.get(i), p.get(i)) {
        // Left neighbour is a member: one more vertical member makes a 2, two
        // would make three dominators.
        (Zero, One) => !up0 && !down0,
        (Zero, Two) => up0 != down0,
        (Zero, _) => false,
        (One, Zero) | (One, Three) => true,
        (One, One) => up0 != down0,
        (One, Two) => interior && up0 && down0,
        (Two, Three) => true,
        (Two, One) => interior && up0 != down0,
        (Two, _) => false,
        (Three, p) => p == Zero,
    }
}

/// Whether column `p` can immediately follow column `q` (both suitable, same
/// length).
pub fn can_follow(p: &ColumnWord, q: &ColumnWord) -> bool {
    p.len() == q.len() && (0..p.len()).all(|i| position_ok(p, q, i))
}

/// Labels `p[i]` may take given `q[i]`, before looking at neighbours.
fn candidates_after(q: Label) -> &'static [Label] {
    use Label::*;
    match q {
        Zero => &[One, Two],
        One => &[Zero, One, Two, Three],
        Two => &[One, Three],
        Three => &[Zero],
    }
}

/// All suitable words of one length, in lexicographic order.
#[derive(Clone, Debug)]
pub struct WordTable {
    m: usize,
    words: Vec<ColumnWord>,
}

/// Rough count of suitable words of length `m`; the sequence grows by a
/// factor close to 2.11 per row.
pub fn estimate_word_count(m: usize) -> usize {
    if m < 2 {
        return 0;
    }
    let est = 6.0 * 2.11f64.powi(m as i32 - 2);
    if est > usize::MAX as f64 {
        usize::MAX
    } else {
        est.ceil() as usize
    }
}

/// Every suitable word of length `m`, refusing above [`DEFAULT_WORD_CAP`].
pub fn enumerate_suitable(m: usize) -> Result<WordTable> {
    enumerate_suitable_capped(m, DEFAULT_WORD_CAP)
}

pub fn enumerate_suitable_capped(m: usize, cap: usize) -> Result<WordTable> {
    if m < 2 {
        return Err(Error::InvalidDimensions {
            m,
            n: 0,
            reason: "words need at least two rows",
        });
    }
    let estimate = estimate_word_count(m);
    if m > MAX_WORD_LEN || estimate > cap {
        return Err(Error::TooManyWords { m, estimate, cap });
    }
    let mut words = Vec::new();
    let mut prefix = Vec::with_capacity(m);
    let mut overflow = false;
    extend_prefix(m, &mut prefix, &mut words, cap, &mut overflow);
    if overflow {
        return Err(Error::TooManyWords {
            m,
            estimate: words.len(),
            cap,
        });
    }
    Ok(WordTable { m, words })
}

fn extend_prefix(
    m: usize,
    prefix: &mut Vec<Label>,
    out: &mut Vec<ColumnWord>,
    cap: usize,
    overflow: &mut bool,
) {
    if *overflow {
        return;
    }
    if prefix.len() == m {
        let w = ColumnWord::new(prefix).expect("length checked by caller");
        if is_suitable(&w) {
            if out.len() == cap {
                *overflow = true;
                return;
            }
            out.push(w);
        }
        return;
    }
    for l in Label::ALL {
        prefix.push(l);
        if !ends_with_forbidden(prefix) {
            extend_prefix(m, prefix, out, cap, overflow);
        }
        prefix.pop();
    }
}

impl WordTable {
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of suitable words.
    pub fn k(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &[ColumnWord] {
        &self.words
    }

    /// Word for a 0-based id.
    pub fn word(&self, id: usize) -> ColumnWord {
        self.words[id]
    }

    /// 0-based id of a word, `None` if it is not suitable (or of another length).
    pub fn id(&self, w: &ColumnWord) -> Option<usize> {
        if w.len() != self.m {
            return None;
        }
        self.words.binary_search(w).ok()
    }

    /// Ids of all suitable `p` with `can_follow(p, q)`, ascending.
    pub fn successors(&self, q: usize) -> Vec<usize> {
        let q = self.words[q];
        let mut out = Vec::new();
        let mut labels = Vec::with_capacity(self.m);
        self.successor_dfs(&q, &mut labels, &mut out);
        out.sort_unstable();
        out
    }

    fn successor_dfs(&self, q: &ColumnWord, labels: &mut Vec<Label>, out: &mut Vec<usize>) {
        let i = labels.len();
        if i == self.m {
            let p = ColumnWord::new(labels).expect("table width is valid");
            if position_ok(&p, q, self.m - 1) {
                if let Some(id) = self.id(&p) {
                    out.push(id);
                }
            }
            return;
        }
        for &l in candidates_after(q.get(i)) {
            labels.push(l);
            if !ends_with_forbidden(labels) && (i == 0 || self.prefix_position_ok(q, labels, i - 1))
            {
                self.successor_dfs(q, labels, out);
            }
            labels.pop();
        }
    }

    /// `position_ok` at `i` for a prefix that already covers `i + 1`.
    fn prefix_position_ok(&self, q: &ColumnWord, labels: &[Label], i: usize) -> bool {
        // Pad with a non-zero label; position i only sees i-1, i and i+1.
        let mut padded = [Label::One; MAX_WORD_LEN];
        padded[..labels.len()].copy_from_slice(labels);
        let p = ColumnWord::new(&padded[..self.m]).expect("table width is valid");
        position_ok(&p, q, i)
    }
}
