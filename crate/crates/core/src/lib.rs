//! Arnold complexity of binary words whose period is a power of two.
//!
//! A word `w` of length `2^n` is read as one period of an infinite cyclic
//! word. The rank-`h` operator maps `y` to `z` with `z_j = y_j ^ y_{j+h}`
//! (indices mod `2^n`), and the complexity `A(w)` is the number of rank-1
//! applications needed to reach the zero word.
//!
//! The crate offers two ways to get at `A(w)`:
//!
//! * [`engines::complexity_naive`] iterates the rank-1 operator directly.
//! * [`engines::complexity_fast`] reduces the word to its minimal period,
//!   looks for an all-odd level in the parity tree of its decimations
//!   ([`thinning::detect_final`]), and otherwise descends with a single
//!   rank-`2^(p-1)` operator. It needs `O(2^n)` bit operations in total.
//!
//! The [`planner`] module works on complexity values instead of words: it
//! computes the fewest power-of-two-rank operators that move a value onto a
//! final value, checks that count against a breadth-first oracle and
//! tabulates the Shannon function against its closed-form bound.

pub mod cli;
pub mod engines;
mod error;
pub mod planner;
pub mod thinning;
pub mod word;

pub use engines::{
    check_scheme_equivalence, complexity_fast, complexity_naive, run_scheme, synthesize_word,
    Certificate, SchemeTrace, Terminal,
};
pub use error::{Error, Result};
pub use planner::{
    bfs_min_ops, finals_set, min_ops, plan_ranks, shannon_bound, shannon_exhaustive, value_step,
    ComplexityValue, Plan, ShannonReport, StepCase, Subcase,
};
pub use thinning::{detect_final, parity_tree, thin, union_thinned, FinalDetection, ParityTree};
pub use word::{OperatorRank, Parity, PeriodicWord};
