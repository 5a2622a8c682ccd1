use std::collections::HashMap;

use quasidom::oracle::{profile_dp_min, Mode};
use quasidom::pattern::{
    construct, diagonal_partition, project_inner, Repair, CORNER_SIZE, STRIP_WIDTH,
};
use quasidom::solver::{big_grid_value, extend_by_period};
use quasidom::words::{is_suitable, Label};
use quasidom::{solve_width, value, verify_set, ColumnWord, Cost, GridSet, TransferSystem};

/// Column `r` labels of a partial set on `m x r`, or `None` if the set is not
/// a valid prefix: columns before `r` fully satisfied, column `r` counted
/// from the left and vertically only.
fn prefix_word(s: &GridSet, r: usize) -> Option<ColumnWord> {
    let m = s.m();
    for j in 1..=r {
        for i in 1..=m {
            let count = s.member_neighbours((i, j));
            if s.contains((i, j)) {
                if count > 0 {
                    return None;
                }
            } else if j < r && !(1..=2).contains(&count) {
                return None;
            }
        }
    }
    let labels: Option<Vec<Label>> = (1..=m)
        .map(|i| {
            if s.contains((i, r)) {
                Some(Label::Zero)
            } else {
                Label::for_count(s.member_neighbours((i, r)))
            }
        })
        .collect();
    let w = ColumnWord::new(&labels?).ok()?;
    is_suitable(&w).then_some(w)
}

#[test]
fn vectors_count_valid_prefixes() {
    for m in 2..=4 {
        let system = TransferSystem::new(m).unwrap();
        let table = system.table();
        for (idx, x) in system.vectors().take(4).enumerate() {
            let r = idx + 1;
            let cells: Vec<(usize, usize)> =
                (1..=m).flat_map(|i| (1..=r).map(move |j| (i, j))).collect();
            let mut best: HashMap<ColumnWord, usize> = HashMap::new();
            for mask in 0u32..1 << cells.len() {
                let members = cells
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| mask >> b & 1 == 1)
                    .map(|(_, &v)| v);
                let s = GridSet::from_members(m, r, members).unwrap();
                if let Some(w) = prefix_word(&s, r) {
                    let e = best.entry(w).or_insert(usize::MAX);
                    *e = (*e).min(s.len());
                }
            }
            for (id, w) in table.words().iter().enumerate() {
                let want = best.get(w).map_or(Cost::INFINITY, |&c| Cost::new(c as u64));
                assert_eq!(x[id], want, "m={m} r={r} word {w}");
            }
        }
    }
}

#[test]
fn certificates_extend_correctly() {
    for m in 2..=9 {
        let system = TransferSystem::new(m).unwrap();
        let cert = system.detect_period(32, 128).unwrap();
        let values = system.values(cert.n0 + 3 * cert.d);
        for n in cert.n0..=cert.n0 + 3 * cert.d {
            assert_eq!(
                extend_by_period(&cert, n).unwrap(),
                values[n - 1],
                "m={m} n={n}"
            );
        }
        assert!(extend_by_period(&cert, cert.n0 - 1).is_err());
    }
}

#[test]
fn dp_matches_profile_oracle() {
    for m in 2..=6 {
        let values = TransferSystem::new(m).unwrap().values(30);
        for n in 1..=30 {
            let oracle = profile_dp_min(m, n, Mode::I12).unwrap().value;
            assert_eq!(values[n - 1], oracle, "{m}x{n}");
        }
    }
}

#[test]
fn dispatch_covers_paths_and_both_orientations() {
    for n in 1..=30 {
        assert_eq!(
            value(1, n).unwrap(),
            profile_dp_min(1, n, Mode::I12).unwrap().value
        );
    }
    assert_eq!(value(10, 3).unwrap(), solve_width(3, 10).unwrap());
    assert_eq!(value(30, 16).unwrap(), big_grid_value(16, 30).unwrap());
}

fn sampled_big_grids() -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for m in (14..=40).step_by(3) {
        for n in (m..=40).step_by(4) {
            out.push((m, n));
        }
    }
    out.extend([(15, 15), (16, 40), (40, 40), (17, 19)]);
    out
}

#[test]
fn pattern_valid_at_target_size() {
    for (m, n) in sampled_big_grids() {
        let c = construct(m, n).unwrap();
        assert!(verify_set(&c.set).is_valid(), "{m}x{n}");
        assert_eq!(
            Cost::new(c.set.len() as u64),
            big_grid_value(m, n).unwrap(),
            "{m}x{n}"
        );
    }
}

#[test]
fn pattern_changes_stay_local() {
    for (m, n) in sampled_big_grids() {
        let c = construct(m, n).unwrap();
        let projected = project_inner(&diagonal_partition(m, n, c.residue), m, n);
        assert_eq!(projected, c.projected);
        let touched = |i: usize, j: usize| match c.repair {
            Repair::WholeGrid => true,
            Repair::Strips(_) => j <= STRIP_WIDTH || j + STRIP_WIDTH > n,
            Repair::Corners(_) => {
                (i <= CORNER_SIZE || i + CORNER_SIZE > m)
                    && (j <= CORNER_SIZE || j + CORNER_SIZE > n)
            }
        };
        assert!(matches!(
            c.repair,
            Repair::Strips(STRIP_WIDTH) | Repair::Corners(CORNER_SIZE) | Repair::WholeGrid
        ));
        for i in 1..=m {
            for j in 1..=n {
                if !touched(i, j) {
                    assert_eq!(
                        c.set.contains((i, j)),
                        projected.contains((i, j)),
                        "{m}x{n} at ({i},{j})"
                    );
                }
            }
        }
    }
}

#[test]
fn pattern_interior_is_a_perfect_code() {
    for (m, n) in sampled_big_grids() {
        let set = construct(m, n).unwrap().set;
        let margin = STRIP_WIDTH + 2;
        for i in 4..=m.saturating_sub(3) {
            for j in margin..=n.saturating_sub(margin - 1) {
                let k = set.member_neighbours((i, j));
                assert!(set.contains((i, j)) || k == 1, "{m}x{n} at ({i},{j})");
            }
        }
    }
}
