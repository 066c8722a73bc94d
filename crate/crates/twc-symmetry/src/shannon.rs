//! Output-relabeling symmetry under input transpositions, for the joint
//! channel and for its two marginal channels separately.

use std::borrow::Cow;

use itertools::Itertools;
use twc_core::{Error, Result, TwoWayChannel};

use crate::report::{CheckOptions, ConditionId, ConditionReport, Counterexample, Side, TranspositionMap, Witness};
use crate::search::{factorial, first_bijection, for_each_bijection, transpose};

/// The channel as seen from `side`: user 2's conditions are user 1's
/// conditions on the channel with the users exchanged.
pub fn oriented(ch: &TwoWayChannel, side: Side) -> Cow<'_, TwoWayChannel> {
    match side {
        Side::User1 => Cow::Borrowed(ch),
        Side::User2 => Cow::Owned(ch.swap_users()),
    }
}

/// Which output of the oriented channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Output {
    Y1,
    Y2,
}

fn marginal(ch: &TwoWayChannel, out: Output, x1: usize, x2: usize) -> Vec<f64> {
    match out {
        Output::Y1 => ch.y1_given(x1, x2),
        Output::Y2 => ch.y2_given(x1, x2),
    }
}

fn out_size(ch: &TwoWayChannel, out: Output) -> usize {
    match out {
        Output::Y1 => ch.ny1(),
        Output::Y2 => ch.ny2(),
    }
}

/// `max |P(y|x1,x2) − P(π(y)|τ(x1),x2)|` over one marginal.
pub fn marginal_deviation(ch: &TwoWayChannel, out: Output, a: usize, b: usize, pi: &[usize]) -> f64 {
    let mut dev: f64 = 0.0;
    for x1 in 0..ch.nx1() {
        let t = transpose(x1, a, b);
        for x2 in 0..ch.nx2() {
            let lhs = marginal(ch, out, x1, x2);
            let rhs = marginal(ch, out, t, x2);
            for (y, &l) in lhs.iter().enumerate() {
                dev = dev.max((l - rhs[pi[y]]).abs());
            }
        }
    }
    dev
}

/// `max |P(y1,y2|x1,x2) − P(π1(y1),π2(y2)|τ(x1),x2)|`.
pub fn joint_deviation(ch: &TwoWayChannel, a: usize, b: usize, pi1: &[usize], pi2: &[usize]) -> f64 {
    let mut dev: f64 = 0.0;
    for x1 in 0..ch.nx1() {
        let t = transpose(x1, a, b);
        for x2 in 0..ch.nx2() {
            for y1 in 0..ch.ny1() {
                for y2 in 0..ch.ny2() {
                    dev = dev.max((ch.get(x1, x2, y1, y2) - ch.get(t, x2, pi1[y1], pi2[y2])).abs());
                }
            }
        }
    }
    dev
}

/// Smallest joint deviation over every relabeling pair, by plain enumeration.
pub fn min_joint_deviation(ch: &TwoWayChannel, a: usize, b: usize) -> f64 {
    let mut best = f64::INFINITY;
    for p1 in (0..ch.ny1()).permutations(ch.ny1()) {
        for p2 in (0..ch.ny2()).permutations(ch.ny2()) {
            best = best.min(joint_deviation(ch, a, b, &p1, &p2));
        }
    }
    best
}

/// Smallest marginal deviation over every relabeling, by plain enumeration.
pub fn min_marginal_deviation(ch: &TwoWayChannel, out: Output, a: usize, b: usize) -> f64 {
    let n = out_size(ch, out);
    (0..n).permutations(n).map(|p| marginal_deviation(ch, out, a, b, &p)).fold(f64::INFINITY, f64::min)
}

/// Candidates `π(y)` consistent with one marginal, per output symbol.
fn allowed(ch: &TwoWayChannel, out: Output, a: usize, b: usize, tol: f64) -> Vec<Vec<usize>> {
    let n = out_size(ch, out);
    let pairs: Vec<(Vec<f64>, Vec<f64>)> = (0..ch.nx1())
        .flat_map(|x1| (0..ch.nx2()).map(move |x2| (x1, x2)))
        .map(|(x1, x2)| (marginal(ch, out, x1, x2), marginal(ch, out, transpose(x1, a, b), x2)))
        .collect();
    (0..n).map(|y| (0..n).filter(|&yp| pairs.iter().all(|(l, r)| (l[y] - r[yp]).abs() <= tol)).collect()).collect()
}

fn to_original(side: Side, a: usize, b: usize, pi1: Vec<usize>, pi2: Vec<usize>) -> TranspositionMap {
    match side {
        Side::User1 => TranspositionMap { a, b, pi_y1: pi1, pi_y2: pi2 },
        Side::User2 => TranspositionMap { a, b, pi_y1: pi2, pi_y2: pi1 },
    }
}

/// Undo [`to_original`]: relabelings of the oriented channel's outputs.
pub fn oriented_maps(side: Side, m: &TranspositionMap) -> (Vec<usize>, Vec<usize>) {
    match side {
        Side::User1 => (m.pi_y1.clone(), m.pi_y2.clone()),
        Side::User2 => (m.pi_y2.clone(), m.pi_y1.clone()),
    }
}

fn input_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |a| (a + 1..n).map(move |b| (a, b)))
}

/// Joint relabeling symmetry with respect to one user's input.
pub fn check_shannon_one_sided(ch: &TwoWayChannel, side: Side, opts: &CheckOptions) -> Result<ConditionReport> {
    let c = oriented(ch, side);
    let needed = factorial(c.ny1()).saturating_mul(factorial(c.ny2()));
    if needed > opts.search_budget {
        return Err(Error::SearchBudgetExceeded { needed, budget: opts.search_budget });
    }
    let tol = opts.matrix_tol;
    let mut maps = Vec::new();
    for (a, b) in input_pairs(c.nx1()) {
        let al1 = allowed(&c, Output::Y1, a, b, tol);
        let al2 = allowed(&c, Output::Y2, a, b, tol);
        let mut found = None;
        for_each_bijection(&al1, |p1| {
            for_each_bijection(&al2, |p2| {
                if joint_deviation(&c, a, b, p1, p2) <= tol {
                    found = Some((p1.to_vec(), p2.to_vec()));
                    true
                } else {
                    false
                }
            })
        });
        match found {
            Some((p1, p2)) => maps.push(to_original(side, a, b, p1, p2)),
            None => {
                let best_deviation = min_joint_deviation(&c, a, b);
                return Ok(ConditionReport::fails(
                    ConditionId::ShannonOneSided,
                    Counterexample::Transposition { a, b, best_deviation },
                )
                .with_side(side));
            }
        }
    }
    Ok(ConditionReport::holds(ConditionId::ShannonOneSided, Some(Witness::Permutations { maps })).with_side(side))
}

/// The one-sided condition for both users.
pub fn check_shannon_two_sided(ch: &TwoWayChannel, opts: &CheckOptions) -> Result<ConditionReport> {
    let parts = vec![check_shannon_one_sided(ch, Side::User1, opts)?, check_shannon_one_sided(ch, Side::User2, opts)?];
    Ok(ConditionReport::conjunction(ConditionId::ShannonTwoSided, parts))
}

/// Relabeling symmetry of each marginal channel on its own.
pub fn check_extended_shannon(ch: &TwoWayChannel, side: Side, opts: &CheckOptions) -> Result<ConditionReport> {
    let c = oriented(ch, side);
    let needed = factorial(c.ny1()).max(factorial(c.ny2()));
    if needed > opts.search_budget {
        return Err(Error::SearchBudgetExceeded { needed, budget: opts.search_budget });
    }
    let tol = opts.matrix_tol;
    let mut maps = Vec::new();
    for (a, b) in input_pairs(c.nx1()) {
        let p1 = first_bijection(&allowed(&c, Output::Y1, a, b, tol));
        let p2 = first_bijection(&allowed(&c, Output::Y2, a, b, tol));
        match (p1, p2) {
            (Some(p1), Some(p2)) => maps.push(to_original(side, a, b, p1, p2)),
            _ => {
                let best_deviation =
                    min_marginal_deviation(&c, Output::Y1, a, b).max(min_marginal_deviation(&c, Output::Y2, a, b));
                return Ok(ConditionReport::fails(
                    ConditionId::ExtendedShannon,
                    Counterexample::Transposition { a, b, best_deviation },
                )
                .with_side(side));
            }
        }
    }
    Ok(ConditionReport::holds(ConditionId::ExtendedShannon, Some(Witness::Permutations { maps })).with_side(side))
}
