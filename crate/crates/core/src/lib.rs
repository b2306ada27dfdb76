//! Four-digit Kaprekar dynamics in an arbitrary base.
//!
//! The crate is layered bottom-up:
//!
//! * [`base_digits`]: numerals and the integer step `K_b`.
//! * [`diff_pairs`]: the difference-pair reduction, predecessor tables and
//!   representative counts.
//! * [`dynamics`]: trajectories, distance maps and per-base statistics
//!   (`M_b`, `|S_b|`, `C_b`, distance histograms).
//! * [`theorems`]: closed-form predictions, the appendix tables as data, and
//!   the harness that checks every prediction against measurement.
//! * [`output`]: the CSV and JSON renderings used by the `kaprekar` binary.

pub mod base_digits;
pub mod diff_pairs;
pub mod dynamics;
pub mod error;
pub mod output;
pub mod theorems;

pub use base_digits::{from_digits, is_repdigit, kaprekar_step, to_digits, Base, DigitQuad};
pub use diff_pairs::{
    classify, count_representatives, pair_of, pair_step, predecessors, predecessors_condensed,
    DifferencePair, PairType,
};
pub use error::{Error, Result};
