//! Run every two-user checker and audit the known implications between
//! the conditions.

use serde::{Deserialize, Serialize};
use twc_core::{Direction, Error, Result, TwoWayChannel};

use crate::cva::check_cva;
use crate::report::{CheckOptions, ConditionId, ConditionReport, Side, Verdict};
use crate::shannon::{check_extended_shannon, check_shannon_one_sided, check_shannon_two_sided};
use crate::theorems::{
    check_common_maximizer, check_invariance_all_inputs, check_maximizer_capacity, check_maximizer_entropy,
    check_maximizer_invariance, check_permuted_both, check_quasi_symmetric_permuted, check_two_sided_invariance,
    InvarianceMode,
};

/// A check that was not run because its exhaustive search is too large.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Skipped {
    pub condition_id: ConditionId,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub side: Option<Side>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionSuite {
    pub reports: Vec<ConditionReport>,
    pub skipped: Vec<Skipped>,
    /// Implications that had a holding premise and were confirmed.
    pub implications_checked: Vec<String>,
}

impl ConditionSuite {
    pub fn find(&self, id: ConditionId, side: Option<Side>) -> Option<&ConditionReport> {
        self.reports.iter().find(|r| r.condition_id == id && r.side == side)
    }
}

/// The two-user conditions run by [`run_all_conditions`], in order.
pub const TWO_USER_CONDITIONS: [ConditionId; 12] = [
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
];

fn run_one(
    ch: &TwoWayChannel,
    id: ConditionId,
    opts: &CheckOptions,
) -> Vec<(ConditionId, Option<Side>, Result<ConditionReport>)> {
    let sides = [Side::User1, Side::User2];
    let per_side = |f: &dyn Fn(Side) -> Result<ConditionReport>| sides.iter().map(|&s| (id, Some(s), f(s))).collect();
    match id {
        ConditionId::ShannonOneSided => per_side(&|s| check_shannon_one_sided(ch, s, opts)),
        ConditionId::ShannonTwoSided => vec![(id, None, check_shannon_two_sided(ch, opts))],
        ConditionId::ExtendedShannon => per_side(&|s| check_extended_shannon(ch, s, opts)),
        ConditionId::Cva => per_side(&|s| Ok(check_cva(ch, s, opts))),
        ConditionId::CommonMaximizer => per_side(&|s| check_common_maximizer(ch, s, opts)),
        ConditionId::Invariance => [Direction::To2, Direction::To1]
            .iter()
            .zip(sides)
            .map(|(&d, s)| (id, Some(s), check_invariance_all_inputs(ch, d, InvarianceMode::Structural, opts)))
            .collect(),
        ConditionId::MaximizerInvariance => per_side(&|s| check_maximizer_invariance(ch, s, opts)),
        ConditionId::TwoSidedInvariance => vec![(id, None, check_two_sided_invariance(ch, opts))],
        ConditionId::MaximizerCapacity => vec![(id, None, check_maximizer_capacity(ch, opts))],
        ConditionId::MaximizerEntropy => per_side(&|s| check_maximizer_entropy(ch, s, opts)),
        ConditionId::QuasiSymmetricPermuted => per_side(&|s| check_quasi_symmetric_permuted(ch, s, opts)),
        ConditionId::PermutedBoth => vec![(id, None, check_permuted_both(ch, opts))],
        _ => Vec::new(),
    }
}

/// Every implication `premise holds ⇒ conclusion does not fail` that the
/// theory guarantees, with sides.
fn implications() -> Vec<(ConditionId, Option<Side>, ConditionId, Option<Side>)> {
    use ConditionId::*;
    let mut v = Vec::new();
    for s in [Side::User1, Side::User2] {
        let s = Some(s);
        v.push((ShannonOneSided, s, MaximizerInvariance, s));
        v.push((ShannonOneSided, s, ExtendedShannon, s));
        v.push((ExtendedShannon, s, Cva, s));
        v.push((ExtendedShannon, s, MaximizerEntropy, s));
        v.push((Cva, s, MaximizerEntropy, s));
        v.push((QuasiSymmetricPermuted, s, MaximizerInvariance, s));
        v.push((TwoSidedInvariance, None, CommonMaximizer, s));
    }
    v.push((ShannonTwoSided, None, TwoSidedInvariance, None));
    v.push((PermutedBoth, None, TwoSidedInvariance, None));
    v
}

fn label(id: ConditionId, side: Option<Side>) -> String {
    match side {
        Some(Side::User1) => format!("{}[user1]", id.name()),
        Some(Side::User2) => format!("{}[user2]", id.name()),
        None => id.name().to_string(),
    }
}

/// Flag every implication whose premise holds and whose conclusion fails.
pub fn audit(reports: &[ConditionReport]) -> Result<Vec<String>> {
    let find = |id, side| reports.iter().find(|r: &&ConditionReport| r.condition_id == id && r.side == side);
    let mut checked = Vec::new();
    for (p, ps, c, cs) in implications() {
        let (Some(pr), Some(cr)) = (find(p, ps), find(c, cs)) else { continue };
        if pr.verdict != Verdict::Holds {
            continue;
        }
        let text = format!("{} => {}", label(p, ps), label(c, cs));
        if cr.verdict == Verdict::Fails {
            return Err(Error::InconsistentImplication(format!("{text} violated")));
        }
        checked.push(text);
    }
    Ok(checked)
}

/// Run the selected conditions (all two-user conditions when `only` is
/// `None`) and audit the implications between them.
pub fn run_all_conditions(
    ch: &TwoWayChannel,
    only: Option<&[ConditionId]>,
    opts: &CheckOptions,
) -> Result<ConditionSuite> {
    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    for id in TWO_USER_CONDITIONS {
        if only.is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        for (id, side, r) in run_one(ch, id, opts) {
            match r {
                Ok(r) => reports.push(r),
                Err(e @ (Error::SearchBudgetExceeded { .. } | Error::AlphabetTooLarge { .. })) => {
                    skipped.push(Skipped { condition_id: id, side, reason: e.to_string() })
                }
                Err(e) => return Err(e),
            }
        }
    }
    let implications_checked = audit(&reports)?;
    Ok(ConditionSuite { reports, skipped, implications_checked })
}
