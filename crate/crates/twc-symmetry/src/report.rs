//! Verdicts, witnesses and counterexamples shared by every checker.

use serde::{Deserialize, Serialize};
use twc_core::Exec;

/// Which condition a report is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionId {
    /// Every state kernel splits into weakly symmetric column blocks.
    QuasiSymmetric,
    /// A family of kernels are column permutations of one another.
    ColumnPermutationFamily,
    /// Output relabelings undo every input transposition of one user.
    ShannonOneSided,
    /// The one-sided condition for both users.
    ShannonTwoSided,
    /// The one-sided condition on each marginal channel separately.
    ExtendedShannon,
    /// Noise entropy invariance plus an entropy-dominating independent input.
    Cva,
    /// One input distribution achieves capacity in every state.
    CommonMaximizer,
    /// `𝓘(P, K_s)` does not depend on the state `s` for any `P`.
    Invariance,
    /// Common maximizer forward plus invariance of the reverse direction.
    MaximizerInvariance,
    /// Invariance in both directions.
    TwoSidedInvariance,
    /// Common maximizers in both directions with state-independent rates.
    MaximizerCapacity,
    /// Common maximizer forward plus noise entropy invariance and entropy
    /// dominance of the reverse direction.
    MaximizerEntropy,
    /// Quasi-symmetric forward states plus column-permuted reverse states.
    QuasiSymmetricPermuted,
    /// Column-permuted states in both directions.
    PermutedBoth,
    /// Three-user: a product input dominates every correlated input.
    MadbProductDominance,
    /// Three-user: common maximizers and invariance over the other inputs.
    MadbMaximizerInvariance,
    /// Three-user: output relabelings undo input transpositions.
    MadbRelabeling,
}

impl ConditionId {
    pub fn name(self) -> &'static str {
        match self {
            ConditionId::QuasiSymmetric => "quasi_symmetric",
            ConditionId::ColumnPermutationFamily => "column_permutation_family",
            ConditionId::ShannonOneSided => "shannon_one_sided",
            ConditionId::ShannonTwoSided => "shannon_two_sided",
            ConditionId::ExtendedShannon => "extended_shannon",
            ConditionId::Cva => "cva",
            ConditionId::CommonMaximizer => "common_maximizer",
            ConditionId::Invariance => "invariance",
            ConditionId::MaximizerInvariance => "maximizer_invariance",
            ConditionId::TwoSidedInvariance => "two_sided_invariance",
            ConditionId::MaximizerCapacity => "maximizer_capacity",
            ConditionId::MaximizerEntropy => "maximizer_entropy",
            ConditionId::QuasiSymmetricPermuted => "quasi_symmetric_permuted",
            ConditionId::PermutedBoth => "permuted_both",
            ConditionId::MadbProductDominance => "madb_product_dominance",
            ConditionId::MadbMaximizerInvariance => "madb_maximizer_invariance",
            ConditionId::MadbRelabeling => "madb_relabeling",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        ALL_CONDITIONS.iter().copied().find(|c| c.name() == s)
    }
}

/// Every condition identifier, in report order.
pub const ALL_CONDITIONS: [ConditionId; 17] = [
    ConditionId::QuasiSymmetric,
    ConditionId::ColumnPermutationFamily,
    ConditionId::ShannonOneSided,
    ConditionId::ShannonTwoSided,
    ConditionId::ExtendedShannon,
    ConditionId::Cva,
    ConditionId::CommonMaximizer,
    ConditionId::Invariance,
    ConditionId::MaximizerInvariance,
    ConditionId::TwoSidedInvariance,
    ConditionId::MaximizerCapacity,
    ConditionId::MaximizerEntropy,
    ConditionId::QuasiSymmetricPermuted,
    ConditionId::PermutedBoth,
    ConditionId::MadbProductDominance,
    ConditionId::MadbMaximizerInvariance,
    ConditionId::MadbRelabeling,
];

/// The user whose input symbols a one-sided condition is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    User1,
    User2,
}

impl Side {
    pub fn other(self) -> Self {
        match self {
            Side::User1 => Side::User2,
            Side::User2 => Side::User1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Decided true; the witness (if any) replays.
    Holds,
    /// Decided false; the counterexample replays.
    Fails,
    /// A universal statement survived every seeded trial.
    NotFalsified,
}

/// Output relabelings for one input transposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranspositionMap {
    /// The two swapped input symbols.
    pub a: usize,
    pub b: usize,
    /// Relabeling of `Y1` (original labels).
    pub pi_y1: Vec<usize>,
    /// Relabeling of `Y2` (original labels).
    pub pi_y2: Vec<usize>,
}

/// Output relabeling for a transposition of one input of a three-user channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputRelabeling {
    /// Which input is transposed: 1 or 2.
    pub input: usize,
    pub a: usize,
    pub b: usize,
    pub pi: Vec<usize>,
}

/// Evidence that a condition holds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Permutations {
        maps: Vec<TranspositionMap>,
    },
    /// Blocks of output columns, each weakly symmetric.
    ColumnPartition {
        blocks: Vec<Vec<usize>>,
    },
    /// `perms[i]` maps kernel 0 onto kernel `i`: column `j` of kernel `i`
    /// equals column `perms[i][j]` of kernel 0.
    ColumnPermutations {
        perms: Vec<Vec<usize>>,
    },
    CommonMaximizer {
        p: Vec<f64>,
        capacities: Vec<f64>,
        max_tv: f64,
    },
    /// A fixed product input that dominates.
    ProductInput {
        p1: Vec<f64>,
        p2: Vec<f64>,
    },
    InputRelabelings {
        maps: Vec<InputRelabeling>,
    },
}

/// Evidence that a condition fails.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Counterexample {
    /// No output relabeling undoes swapping input symbols `a` and `b`.
    Transposition { a: usize, b: usize, best_deviation: f64 },
    /// `H(Y_output | input a, state)` differs from the value at input `b`.
    RowEntropy { output: usize, state: usize, a: usize, b: usize, entropies: [f64; 2] },
    /// An input distribution at which the defining inequality fails by `gap`.
    Distribution { p: Vec<f64>, gap: f64 },
    /// States `a` and `b` give different rates under the common maximizer.
    StateRates { a: usize, b: usize, values: [f64; 2] },
    /// No capacity-achieving input of one state achieves every state's
    /// capacity; `shortfall` is the smallest worst-case deficit.
    Maximizers { candidates: Vec<Vec<f64>>, capacities: Vec<f64>, shortfall: f64 },
    /// Kernel `index` is not a column permutation of kernel 0.
    ColumnMismatch { index: usize },
    /// Exhaustive search over `candidates` structures found none.
    Exhausted { candidates: u64 },
}

/// A checker's verdict with the evidence needed to replay it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition_id: ConditionId,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub side: Option<Side>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<Counterexample>,
    pub trials: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    /// Sub-conditions, in the order they were evaluated.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub parts: Vec<ConditionReport>,
}

impl ConditionReport {
    pub fn holds(condition_id: ConditionId, witness: Option<Witness>) -> Self {
        Self {
            condition_id,
            side: None,
            verdict: Verdict::Holds,
            witness,
            counterexample: None,
            trials: 0,
            seed: None,
            parts: Vec::new(),
        }
    }

    pub fn fails(condition_id: ConditionId, counterexample: Counterexample) -> Self {
        Self {
            condition_id,
            side: None,
            verdict: Verdict::Fails,
            witness: None,
            counterexample: Some(counterexample),
            trials: 0,
            seed: None,
            parts: Vec::new(),
        }
    }

    pub fn not_falsified(condition_id: ConditionId, trials: u64, seed: u64) -> Self {
        Self {
            condition_id,
            side: None,
            verdict: Verdict::NotFalsified,
            witness: None,
            counterexample: None,
            trials,
            seed: Some(seed),
            parts: Vec::new(),
        }
    }

    pub fn with_side(mut self, side: Side) -> Self {
        self.side = Some(side);
        self
    }

    pub fn with_parts(mut self, parts: Vec<ConditionReport>) -> Self {
        self.parts = parts;
        self
    }

    /// Combine sub-reports: fails if any fails, holds if all hold,
    /// otherwise not falsified. The counterexample of the first failing
    /// part is lifted to the top level.
    pub fn conjunction(condition_id: ConditionId, parts: Vec<ConditionReport>) -> Self {
        let trials = parts.iter().map(|p| p.trials).max().unwrap_or(0);
        let seed = parts.iter().find_map(|p| p.seed);
        let verdict = if parts.iter().any(|p| p.verdict == Verdict::Fails) {
            Verdict::Fails
        } else if parts.iter().all(|p| p.verdict == Verdict::Holds) {
            Verdict::Holds
        } else {
            Verdict::NotFalsified
        };
        let counterexample = parts.iter().find(|p| p.verdict == Verdict::Fails).and_then(|p| p.counterexample.clone());
        Self { condition_id, side: None, verdict, witness: None, counterexample, trials, seed, parts }
    }

    pub fn is_fails(&self) -> bool {
        self.verdict == Verdict::Fails
    }

    pub fn is_holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

/// Shared knobs of every checker.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckOptions {
    /// Randomized falsification trials.
    pub trials: u64,
    pub seed: u64,
    /// Tolerance on information quantities, in bits.
    pub tol: f64,
    /// Tolerance on matrix entries.
    pub matrix_tol: f64,
    /// Largest number of relabeling candidates an exhaustive search may face.
    pub search_budget: u128,
    pub exec: Exec,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            trials: 10_000,
            seed: 42,
            tol: twc_core::INFO_TOL,
            matrix_tol: twc_core::MATRIX_TOL,
            search_budget: 14_400,
            exec: Exec::Parallel,
        }
    }
}
