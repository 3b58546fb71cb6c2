//! Split Cycle and Stable Voting over ordinal margin matrices, plus a SAT
//! encoding for checking whether Simple Stable Voting refines Split Cycle.

pub mod encoding;
pub mod error;
pub mod fixtures;
pub mod iso;
pub mod linearize;
pub mod matrix;
pub mod methods;
mod perm;
pub mod profile;
pub mod search;
pub mod solver;

pub use error::{Error, Result, Violation};
pub use iso::TournamentClass;
pub use matrix::{Alternative, LinearOrdinalMarginMatrix, MajorityGraph, MatrixFile, OrdinalMarginMatrix};
pub use methods::{
    sc_defeats, split_cycle_winners, ssv_put_winners, ssv_se_winners, ssv_winner, sv_winner, three_alt_oracle,
    DefeatRelation, Method, SsvTrace, WinnerReport,
};
pub use profile::{margins, realize, sample_impartial_culture, Profile};
