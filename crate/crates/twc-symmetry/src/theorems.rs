//! Conditions built from one-way capacity facts about the state-sliced
//! kernels: common maximizers, mutual-information invariance and their
//! combinations.

use serde::{Deserialize, Serialize};
use twc_core::{blahut_arimoto, mi, BaOptions, Direction, Kernel, Result, TwoWayChannel};

use crate::cva::{original_output, reorient_joint, row_entropy_violation, Dominance};
use crate::report::{CheckOptions, ConditionId, ConditionReport, Counterexample, Side, Witness};
use crate::shannon::{oriented, Output};
use crate::structural::{check_column_permutation_family, check_quasi_symmetric};
use crate::trials::{first_failure, trial_point};

/// How [`check_invariance_all_inputs`] decides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InvarianceMode {
    /// Column-permutation structure first, sampling only if that fails.
    Structural,
    /// Sampling only.
    Randomized,
}

/// The direction whose inputs belong to `side`.
pub fn forward_direction(side: Side) -> Direction {
    match side {
        Side::User1 => Direction::To2,
        Side::User2 => Direction::To1,
    }
}

/// Solver accuracy matched to a decision tolerance.
pub(crate) fn ba_options(tol: f64) -> BaOptions {
    BaOptions { tol: tol / 10.0, ..BaOptions::default() }
}

/// Common capacity-achieving input of one kernel family.
///
/// Every Blahut–Arimoto maximizer is a candidate; a candidate is accepted
/// if it achieves every kernel's capacity within `tol`. The largest total
/// variation between the maximizers is reported alongside.
pub fn common_maximizer_of(kernels: &[Kernel], tol: f64) -> Result<ConditionReport> {
    let mut capacities = Vec::with_capacity(kernels.len());
    let mut candidates = Vec::with_capacity(kernels.len() + 1);
    for k in kernels {
        let r = blahut_arimoto(k, ba_options(tol))?;
        capacities.push(r.capacity);
        candidates.push(r.maximizer.into_vec());
    }
    let n = candidates[0].len();
    let mean: Vec<f64> =
        (0..n).map(|i| candidates.iter().map(|c| c[i]).sum::<f64>() / candidates.len() as f64).collect();
    let mut max_tv: f64 = 0.0;
    for a in &candidates {
        for b in &candidates {
            max_tv = max_tv.max(0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>());
        }
    }
    candidates.push(mean);
    candidates.push(vec![1.0 / n as f64; n]);
    let deficit =
        |p: &[f64]| kernels.iter().zip(&capacities).map(|(k, c)| c - mi(p, k)).fold(f64::NEG_INFINITY, f64::max);
    let mut shortfall = f64::INFINITY;
    for p in &candidates {
        let d = deficit(p);
        if d <= tol {
            return Ok(ConditionReport::holds(
                ConditionId::CommonMaximizer,
                Some(Witness::CommonMaximizer { p: p.clone(), capacities, max_tv }),
            ));
        }
        shortfall = shortfall.min(d);
    }
    Ok(ConditionReport::fails(
        ConditionId::CommonMaximizer,
        Counterexample::Maximizers { candidates, capacities, shortfall },
    ))
}

/// One input distribution achieves capacity in every state of the
/// channel from user `side`.
pub fn check_common_maximizer(ch: &TwoWayChannel, side: Side, opts: &CheckOptions) -> Result<ConditionReport> {
    let kernels = ch.state_kernels(forward_direction(side));
    Ok(common_maximizer_of(&kernels, opts.tol)?.with_side(side))
}

/// Spread `max_s 𝓘(p, K_s) − min_s 𝓘(p, K_s)`.
pub fn mi_spread(p: &[f64], kernels: &[Kernel]) -> f64 {
    let v: Vec<f64> = kernels.iter().map(|k| mi(p, k)).collect();
    let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
    hi - lo
}

/// `𝓘(P, K_s)` is the same for every state `s` of a kernel family and
/// every input `P`.
pub fn invariance_of(kernels: &[Kernel], mode: InvarianceMode, opts: &CheckOptions) -> Result<ConditionReport> {
    if mode == InvarianceMode::Structural {
        let s = check_column_permutation_family(kernels, opts.matrix_tol)?;
        if s.is_holds() {
            return Ok(ConditionReport::holds(ConditionId::Invariance, s.witness));
        }
    }
    // Deterministic probes first: uniform and each state's maximizer.
    let n = kernels[0].n_in();
    let mut probes = vec![vec![1.0 / n as f64; n]];
    for k in kernels {
        if let Ok(r) = blahut_arimoto(k, ba_options(opts.tol)) {
            probes.push(r.maximizer.into_vec());
        }
    }
    for p in probes {
        let gap = mi_spread(&p, kernels);
        if gap > opts.tol {
            return Ok(ConditionReport::fails(ConditionId::Invariance, Counterexample::Distribution { p, gap }));
        }
    }
    let hit = first_failure(opts.exec, opts.trials, |i| {
        let p = trial_point(opts.seed, i, n);
        let gap = mi_spread(&p, kernels);
        (gap > opts.tol).then_some((p, gap))
    });
    Ok(match hit {
        Some((i, (p, gap))) => {
            let mut r = ConditionReport::fails(ConditionId::Invariance, Counterexample::Distribution { p, gap });
            r.trials = i + 1;
            r.seed = Some(opts.seed);
            r
        }
        None => ConditionReport::not_falsified(ConditionId::Invariance, opts.trials, opts.seed),
    })
}

/// Invariance of the state-sliced kernels of direction `dir`. The report
/// side is the user whose input the kernels take.
pub fn check_invariance_all_inputs(
    ch: &TwoWayChannel,
    dir: Direction,
    mode: InvarianceMode,
    opts: &CheckOptions,
) -> Result<ConditionReport> {
    let side = match dir {
        Direction::To2 => Side::User1,
        Direction::To1 => Side::User2,
    };
    Ok(invariance_of(&ch.state_kernels(dir), mode, opts)?.with_side(side))
}

/// Common maximizer from user `side` plus invariance of the reverse
/// direction over that user's input.
pub fn check_maximizer_invariance(ch: &TwoWayChannel, side: Side, opts: &CheckOptions) -> Result<ConditionReport> {
    let fwd = forward_direction(side);
    let parts = vec![
        check_common_maximizer(ch, side, opts)?,
        check_invariance_all_inputs(ch, fwd.reverse(), InvarianceMode::Structural, opts)?,
    ];
    Ok(ConditionReport::conjunction(ConditionId::MaximizerInvariance, parts).with_side(side))
}

/// Invariance in both directions.
pub fn check_two_sided_invariance(ch: &TwoWayChannel, opts: &CheckOptions) -> Result<ConditionReport> {
    let parts = vec![
        check_invariance_all_inputs(ch, Direction::To2, InvarianceMode::Structural, opts)?,
        check_invariance_all_inputs(ch, Direction::To1, InvarianceMode::Structural, opts)?,
    ];
    Ok(ConditionReport::conjunction(ConditionId::TwoSidedInvariance, parts))
}

/// Common maximizers in both directions, each achieving the same rate in
/// every state.
pub fn check_maximizer_capacity(ch: &TwoWayChannel, opts: &CheckOptions) -> Result<ConditionReport> {
    let mut parts = Vec::new();
    for side in [Side::User1, Side::User2] {
        let kernels = ch.state_kernels(forward_direction(side));
        let cm = check_common_maximizer(ch, side, opts)?;
        let part = match &cm.witness {
            Some(Witness::CommonMaximizer { p, .. }) => {
                let rates: Vec<f64> = kernels.iter().map(|k| mi(p, k)).collect();
                let bad = (1..rates.len()).find(|&s| (rates[s] - rates[0]).abs() > opts.tol);
                match bad {
                    Some(s) => ConditionReport::fails(
                        ConditionId::MaximizerCapacity,
                        Counterexample::StateRates { a: 0, b: s, values: [rates[0], rates[s]] },
                    )
                    .with_side(side)
                    .with_parts(vec![cm]),
                    None => ConditionReport::holds(ConditionId::MaximizerCapacity, cm.witness.clone())
                        .with_side(side)
                        .with_parts(vec![cm]),
                }
            }
            _ => ConditionReport::conjunction(ConditionId::MaximizerCapacity, vec![cm]).with_side(side),
        };
        parts.push(part);
    }
    Ok(ConditionReport::conjunction(ConditionId::MaximizerCapacity, parts))
}

/// Common maximizer from user `side`; noise entropy of the reverse output
/// invariant over that user's input; reverse output entropy dominated by
/// the common maximizer paired with the other input's marginal.
pub fn check_maximizer_entropy(ch: &TwoWayChannel, side: Side, opts: &CheckOptions) -> Result<ConditionReport> {
    let cm = check_common_maximizer(ch, side, opts)?;
    let c = oriented(ch, side);
    let mut parts = vec![cm.clone()];
    if let Some((state, a, b, entropies)) = row_entropy_violation(&c, Output::Y1, opts.tol) {
        let output = original_output(side, Output::Y1);
        parts.push(ConditionReport::fails(
            ConditionId::MaximizerEntropy,
            Counterexample::RowEntropy { output, state, a, b, entropies },
        ));
        return Ok(ConditionReport::conjunction(ConditionId::MaximizerEntropy, parts).with_side(side));
    }
    let Some(Witness::CommonMaximizer { p: pstar, .. }) = cm.witness.clone() else {
        return Ok(ConditionReport::conjunction(ConditionId::MaximizerEntropy, parts).with_side(side));
    };
    // Column-permuted reverse kernels make the dominance an instance of
    // the concavity of entropy.
    let structural = check_column_permutation_family(&c.state_kernels(Direction::To1), opts.matrix_tol)?;
    if structural.is_holds() {
        parts.push(ConditionReport::holds(ConditionId::MaximizerEntropy, structural.witness));
        return Ok(ConditionReport::conjunction(ConditionId::MaximizerEntropy, parts).with_side(side));
    }
    let dom = Dominance::new(&c);
    let n = c.nx1() * c.nx2();
    let hit = first_failure(opts.exec, opts.trials, |i| {
        let p = trial_point(opts.seed, i, n);
        let gap = reverse_entropy_gap(&dom, &c, &p, &pstar);
        (gap > opts.tol).then_some((p, gap))
    });
    parts.push(match hit {
        Some((i, (p, gap))) => {
            let p = reorient_joint(&p, c.nx1(), c.nx2(), side);
            let mut r = ConditionReport::fails(ConditionId::MaximizerEntropy, Counterexample::Distribution { p, gap });
            r.trials = i + 1;
            r.seed = Some(opts.seed);
            r
        }
        None => ConditionReport::not_falsified(ConditionId::MaximizerEntropy, opts.trials, opts.seed),
    });
    Ok(ConditionReport::conjunction(ConditionId::MaximizerEntropy, parts).with_side(side))
}

/// `H^(1)(Y1|X1) − H^(2)(Y1|X1)` with `P^(2) = P*·P^(1)_X2`, on the
/// oriented channel.
pub fn reverse_entropy_gap(dom: &Dominance, c: &TwoWayChannel, p: &[f64], pstar: &[f64]) -> f64 {
    let (h1, _) = dom.entropies(p);
    let px2: Vec<f64> = (0..c.nx2()).map(|b| (0..c.nx1()).map(|a| p[a * c.nx2() + b]).sum()).collect();
    let q: Vec<f64> = pstar.iter().flat_map(|a| px2.iter().map(move |b| a * b)).collect();
    let (h2, _) = dom.entropies(&q);
    h1 - h2
}

/// Quasi-symmetric forward state kernels plus column-permuted reverse
/// state kernels.
pub fn check_quasi_symmetric_permuted(ch: &TwoWayChannel, side: Side, opts: &CheckOptions) -> Result<ConditionReport> {
    let fwd = forward_direction(side);
    let mut parts = Vec::new();
    for k in ch.state_kernels(fwd) {
        parts.push(check_quasi_symmetric(&k, opts.matrix_tol)?);
    }
    parts.push(check_column_permutation_family(&ch.state_kernels(fwd.reverse()), opts.matrix_tol)?);
    Ok(ConditionReport::conjunction(ConditionId::QuasiSymmetricPermuted, parts).with_side(side))
}

/// Column-permuted state kernels in both directions.
pub fn check_permuted_both(ch: &TwoWayChannel, opts: &CheckOptions) -> Result<ConditionReport> {
    let parts = vec![
        check_column_permutation_family(&ch.state_kernels(Direction::To2), opts.matrix_tol)?.with_side(Side::User1),
        check_column_permutation_family(&ch.state_kernels(Direction::To1), opts.matrix_tol)?.with_side(Side::User2),
    ];
    Ok(ConditionReport::conjunction(ConditionId::PermutedBoth, parts))
}
