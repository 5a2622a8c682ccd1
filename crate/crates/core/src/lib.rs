//! Exact minimum independent [1,2]-sets in grid graphs `P_m □ P_n`.
//!
//! A set `S` of vertices is an independent [1,2]-set when no two members are
//! adjacent and every other vertex has one or two neighbours in `S`. This
//! crate computes `i_[1,2](P_m □ P_n)`:
//!
//! * for `m <= 13` by a min-plus transfer matrix over column words
//!   ([`words`], [`tropical`], [`solver`]) together with a periodicity
//!   certificate that turns finitely many DP steps into a closed form;
//! * for `14 <= m <= n` by the value `⌊(m+2)(n+2)/5⌋ - 4`, witnessed by a
//!   repaired diagonal pattern ([`pattern`]).
//!
//! [`oracle`] holds independent brute-force engines used to check the rest.
//!
//! ```
//! use quasidom::{value, Cost};
//!
//! assert_eq!(value(3, 10).unwrap(), Cost::new(9));
//! assert_eq!(value(20, 20).unwrap(), Cost::new(92));
//! ```

pub mod error;
pub mod grids;
pub mod oracle;
pub mod pattern;
pub mod solver;
pub mod tropical;
pub mod words;

pub use error::{Error, Result};
pub use grids::{
    extract_min_set, verify_set, GridSet, VerificationReport, Violation, ViolationKind,
};
pub use oracle::Mode;
pub use pattern::{build_big_grid_set, construct};
pub use solver::{
    closed_form, detect_period, solve_width, value, PeriodCertificate, TransferSystem,
};
pub use tropical::{Cost, TropicalMatrix, TropicalVector};
pub use words::{ColumnWord, Label, WordTable};

// The guide's code listings run as doctests, one module per chapter.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/words.md")]
    mod words {}
    #[doc = include_str!("../../../book/src/transfer.md")]
    mod transfer {}
    #[doc = include_str!("../../../book/src/periods.md")]
    mod periods {}
    #[doc = include_str!("../../../book/src/pattern.md")]
    mod pattern {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
