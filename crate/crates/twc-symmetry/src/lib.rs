//! Decision procedures for the conditions under which independent,
//! non-adaptive inputs achieve the capacity region of a two-way channel.
//!
//! Exact finite conditions return [`Verdict::Holds`] or [`Verdict::Fails`]
//! with replayable evidence. Conditions quantified over all input
//! distributions are semi-decided: structural sufficient tests first, then
//! seeded randomized falsification reporting [`Verdict::NotFalsified`].

pub mod audit;
pub mod cva;
pub mod replay;
pub mod report;
pub mod search;
pub mod shannon;
pub mod structural;
pub mod theorems;
pub mod trials;

pub use audit::{audit, run_all_conditions, ConditionSuite, Skipped, TWO_USER_CONDITIONS};
pub use cva::{check_cva, check_cva_dominance_part, check_cva_entropy_part};
pub use replay::{replay, replay_kernels, transpose_input};
pub use report::{
    CheckOptions, ConditionId, ConditionReport, Counterexample, InputRelabeling, Side, TranspositionMap, Verdict,
    Witness, ALL_CONDITIONS,
};
pub use shannon::{check_extended_shannon, check_shannon_one_sided, check_shannon_two_sided};
pub use structural::{check_column_permutation_family, check_quasi_symmetric, column_permutation};
pub use theorems::{
    check_common_maximizer, check_invariance_all_inputs, check_maximizer_capacity, check_maximizer_entropy,
    check_maximizer_invariance, check_permuted_both, check_quasi_symmetric_permuted, check_two_sided_invariance,
    common_maximizer_of, invariance_of, InvarianceMode,
};
