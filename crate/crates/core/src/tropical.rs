//! Min-plus arithmetic and the transfer matrix over suitable words.

use std::fmt;
use std::ops::{Add, Index};

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::words::{is_initial, WordTable};

/// A natural number or infinity, under `(min, +)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cost(u64);

impl Cost {
    pub const INFINITY: Cost = Cost(u64::MAX);
    pub const ZERO: Cost = Cost(0);

    pub fn new(v: u64) -> Cost {
        assert!(v != u64::MAX, "u64::MAX is reserved for infinity");
        Cost(v)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.0 != u64::MAX
    }

    #[inline]
    pub fn value(self) -> Option<u64> {
        self.is_finite().then_some(self.0)
    }

    /// Finite value, panicking on infinity.
    #[track_caller]
    pub fn unwrap(self) -> u64 {
        self.value().expect("cost is infinite")
    }
}

impl Add for Cost {
    type Output = Cost;

    #[inline]
    fn add(self, rhs: Cost) -> Cost {
        if !self.is_finite() || !rhs.is_finite() {
            return Cost::INFINITY;
        }
        let sum = self.0.checked_add(rhs.0);
        debug_assert!(sum.is_some_and(|s| s != u64::MAX), "cost overflow");
        Cost(sum.unwrap_or(u64::MAX))
    }
}

impl From<u64> for Cost {
    fn from(v: u64) -> Cost {
        Cost::new(v)
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(v) => write!(f, "{v}"),
            None => f.write_str("infeasible"),
        }
    }
}

impl fmt::Debug for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(v) => write!(f, "{v}"),
            None => f.write_str("inf"),
        }
    }
}

impl Serialize for Cost {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.value() {
            Some(v) => s.serialize_u64(v),
            None => s.serialize_str("infeasible"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TropicalVector(Vec<Cost>);

impl TropicalVector {
    pub fn infinite(k: usize) -> TropicalVector {
        TropicalVector(vec![Cost::INFINITY; k])
    }

    pub fn from_costs(costs: Vec<Cost>) -> TropicalVector {
        TropicalVector(costs)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Cost] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = Cost> + '_ {
        self.0.iter().copied()
    }

    pub fn min_finite(&self) -> Option<u64> {
        self.0.iter().filter_map(|c| c.value()).min()
    }

    /// Adds `c` to every finite entry.
    pub fn shifted(&self, c: u64) -> TropicalVector {
        TropicalVector(self.0.iter().map(|&x| x + Cost(c)).collect())
    }

    /// Subtracts the smallest finite entry from every finite entry. Returns
    /// the shift alongside, `None` when every entry is infinite.
    pub fn normalized(&self) -> (TropicalVector, Option<u64>) {
        match self.min_finite() {
            None => (self.clone(), None),
            Some(lo) => (
                TropicalVector(
                    self.0
                        .iter()
                        .map(|c| match c.value() {
                            Some(v) => Cost(v - lo),
                            None => Cost::INFINITY,
                        })
                        .collect(),
                ),
                Some(lo),
            ),
        }
    }
}

impl Index<usize> for TropicalVector {
    type Output = Cost;

    fn index(&self, i: usize) -> &Cost {
        &self.0[i]
    }
}

/// The `k x k` transfer matrix, stored by rows as predecessor lists.
///
/// Entry `(p, q)` is `zeros(p)` when `p` can follow `q` and infinite otherwise,
/// so one weight per row plus the admissible columns is enough.
#[derive(Clone, Debug)]
pub struct TropicalMatrix {
    weights: Vec<u32>,
    offsets: Vec<usize>,
    preds: Vec<u32>,
}

impl TropicalMatrix {
    pub fn k(&self) -> usize {
        self.weights.len()
    }

    /// Number of finite entries.
    pub fn nnz(&self) -> usize {
        self.preds.len()
    }

    /// Columns `q` with a finite entry in row `p`, ascending.
    pub fn predecessors(&self, p: usize) -> &[u32] {
        &self.preds[self.offsets[p]..self.offsets[p + 1]]
    }

    pub fn row_weight(&self, p: usize) -> u64 {
        self.weights[p] as u64
    }

    pub fn get(&self, p: usize, q: usize) -> Cost {
        match self.predecessors(p).binary_search(&(q as u32)) {
            Ok(_) => Cost(self.row_weight(p)),
            Err(_) => Cost::INFINITY,
        }
    }
}

/// `X^1`: zero counts on initial words, infinity elsewhere.
pub fn build_initial_vector(t: &WordTable) -> TropicalVector {
    TropicalVector(
        t.words()
            .iter()
            .map(|w| {
                if is_initial(w) {
                    Cost(w.zeros() as u64)
                } else {
                    Cost::INFINITY
                }
            })
            .collect(),
    )
}

pub fn build_transition_matrix(t: &WordTable) -> TropicalMatrix {
    let k = t.k();
    let succ: Vec<Vec<usize>> = (0..k).into_par_iter().map(|q| t.successors(q)).collect();
    let mut counts = vec![0usize; k + 1];
    for list in &succ {
        for &p in list {
            counts[p + 1] += 1;
        }
    }
    for p in 0..k {
        counts[p + 1] += counts[p];
    }
    let offsets = counts.clone();
    let mut fill = counts;
    let mut preds = vec![0u32; offsets[k]];
    // q ascending, so every row comes out sorted.
    for (q, list) in succ.iter().enumerate() {
        for &p in list {
            preds[fill[p]] = q as u32;
            fill[p] += 1;
        }
    }
    TropicalMatrix {
        weights: t.words().iter().map(|w| w.zeros() as u32).collect(),
        offsets,
        preds,
    }
}

const PARALLEL_THRESHOLD: usize = 4096;

/// `A ⊠ X`: entry `p` is the minimum over `q` of `A[p][q] + X[q]`.
pub fn mat_vec(a: &TropicalMatrix, x: &TropicalVector) -> TropicalVector {
    assert_eq!(a.k(), x.len(), "dimension mismatch");
    let row = |p: usize| {
        let best = a
            .predecessors(p)
            .iter()
            .map(|&q| x.0[q as usize])
            .min()
            .unwrap_or(Cost::INFINITY);
        best + Cost(a.row_weight(p))
    };
    let out = if a.k() >= PARALLEL_THRESHOLD {
        (0..a.k()).into_par_iter().map(row).collect()
    } else {
        (0..a.k()).map(row).collect()
    };
    TropicalVector(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{can_follow, enumerate_suitable, ColumnWord};
    use proptest::prelude::*;

    fn id(t: &WordTable, s: &str) -> usize {
        t.id(&s.parse::<ColumnWord>().unwrap()).unwrap()
    }

    #[test]
    fn cost_arithmetic() {
        assert_eq!(Cost::INFINITY + Cost::new(3), Cost::INFINITY);
        assert_eq!(Cost::new(2) + Cost::new(3), Cost::new(5));
        assert_eq!(Cost::INFINITY.min(Cost::new(7)), Cost::new(7));
        assert_eq!(Cost::INFINITY.to_string(), "infeasible");
    }

    #[test]
    fn initial_vector_width_two_and_three() {
        let t = enumerate_suitable(2).unwrap();
        let x = build_initial_vector(&t);
        for w in t.words() {
            let expect = match w.to_string().as_str() {
                "01" | "10" => Cost::new(1),
                _ => Cost::INFINITY,
            };
            assert_eq!(x[t.id(w).unwrap()], expect, "{w}");
        }
        let t3 = enumerate_suitable(3).unwrap();
        let x3 = build_initial_vector(&t3);
        assert_eq!(x3[id(&t3, "020")], Cost::new(2));
        for (i, w) in t3.words().iter().enumerate() {
            if let Some(v) = x3[i].value() {
                assert_eq!(v, w.zeros() as u64);
            }
        }
    }

    #[test]
    fn matrix_entries_width_two() {
        let t = enumerate_suitable(2).unwrap();
        let a = build_transition_matrix(&t);
        assert_eq!(a.k(), 6);
        assert_eq!(a.get(id(&t, "20"), id(&t, "01")), Cost::new(1));
        assert_eq!(a.get(id(&t, "01"), id(&t, "01")), Cost::INFINITY);
        for p in 0..t.k() {
            for q in 0..t.k() {
                let follow = can_follow(&t.word(p), &t.word(q));
                assert_eq!(a.get(p, q).is_finite(), follow);
                if follow {
                    assert_eq!(a.get(p, q), Cost::new(t.word(p).zeros() as u64));
                }
            }
        }
    }

    #[test]
    fn first_product_width_two() {
        let t = enumerate_suitable(2).unwrap();
        let a = build_transition_matrix(&t);
        let x1 = build_initial_vector(&t);
        let x2 = mat_vec(&a, &x1);
        assert_eq!(x2[id(&t, "20")], Cost::new(2));
        let all_inf = mat_vec(&a, &TropicalVector::infinite(t.k()));
        assert!(all_inf.iter().all(|c| !c.is_finite()));
    }

    #[test]
    fn single_predecessor_rows() {
        let t = enumerate_suitable(4).unwrap();
        let a = build_transition_matrix(&t);
        let x = build_initial_vector(&t);
        let y = mat_vec(&a, &x);
        for p in 0..t.k() {
            if let [q] = a.predecessors(p) {
                assert_eq!(y[p], a.get(p, *q as usize) + x[*q as usize]);
            }
        }
    }

    #[test]
    fn parallel_and_serial_agree() {
        let t = enumerate_suitable(11).unwrap();
        assert!(t.k() >= PARALLEL_THRESHOLD);
        let a = build_transition_matrix(&t);
        let mut x = build_initial_vector(&t);
        for _ in 0..3 {
            let par = mat_vec(&a, &x);
            let serial: Vec<Cost> = (0..a.k())
                .map(|p| {
                    a.predecessors(p)
                        .iter()
                        .map(|&q| x[q as usize])
                        .min()
                        .unwrap_or(Cost::INFINITY)
                        + Cost::new(a.row_weight(p))
                })
                .collect();
            assert_eq!(par.as_slice(), serial.as_slice());
            x = par;
        }
    }

    fn arb_vector(k: usize) -> impl Strategy<Value = Vec<Option<u16>>> {
        proptest::collection::vec(proptest::option::weighted(0.7, 0u16..50), k)
    }

    fn to_vec(v: &[Option<u16>]) -> TropicalVector {
        TropicalVector(
            v.iter()
                .map(|x| x.map_or(Cost::INFINITY, |x| Cost::new(x as u64)))
                .collect(),
        )
    }

    proptest! {
        #[test]
        fn monotone_and_translation_equivariant(
            x in arb_vector(27),
            bumps in proptest::collection::vec(0u16..5, 27),
            c in 0u64..100,
        ) {
            let t = enumerate_suitable(4).unwrap();
            let a = build_transition_matrix(&t);
            let xv = to_vec(&x);
            let yv = TropicalVector(
                xv.iter().zip(&bumps).map(|(c, &b)| c + Cost::new(b as u64)).collect(),
            );
            let ax = mat_vec(&a, &xv);
            let ay = mat_vec(&a, &yv);
            for p in 0..t.k() {
                prop_assert!(ax[p] <= ay[p]);
            }
            prop_assert_eq!(mat_vec(&a, &xv.shifted(c)), ax.shifted(c));
        }
    }
}
