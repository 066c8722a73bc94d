//! Independent re-validation of witnesses and counterexamples.
//!
//! A holding report replays when its witness reproduces the defining
//! equalities within tolerance; a failing report replays when its
//! counterexample violates the condition by more than tolerance.
//! Not-falsified reports carry no evidence and replay trivially.

use twc_core::{blahut_arimoto, entropy, mi, Direction, Error, Kernel, Result, TwoWayChannel};

use crate::cva::{original_output, reorient_joint, row_entropy_violation, Dominance, Dominated};
use crate::report::{CheckOptions, ConditionId, ConditionReport, Counterexample, Side, Verdict, Witness};
use crate::search::transpose;
use crate::shannon::{
    joint_deviation, marginal_deviation, min_joint_deviation, min_marginal_deviation, oriented, oriented_maps, Output,
};
use crate::structural::is_weakly_symmetric_block;
use crate::theorems::{ba_options, forward_direction, mi_spread, reverse_entropy_gap};

fn is_permutation(p: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    p.len() == n && p.iter().all(|&v| v < n && !std::mem::replace(&mut seen[v], true))
}

fn side_of(r: &ConditionReport) -> Result<Side> {
    r.side.ok_or_else(|| Error::ShapeMismatch(format!("{} report without a side", r.condition_id.name())))
}

fn unexpected(r: &ConditionReport) -> Error {
    Error::ShapeMismatch(format!("unexpected evidence in {} report", r.condition_id.name()))
}

/// Replay a kernel-level report against the kernels it was computed on.
pub fn replay_kernels(kernels: &[Kernel], r: &ConditionReport, tol: f64) -> Result<bool> {
    match (r.condition_id, r.verdict) {
        (ConditionId::QuasiSymmetric, Verdict::Holds) => {
            let [k] = kernels else { return Err(unexpected(r)) };
            let Some(Witness::ColumnPartition { blocks }) = &r.witness else { return Err(unexpected(r)) };
            let mut cols: Vec<usize> = blocks.concat();
            cols.sort_unstable();
            Ok(cols == (0..k.n_out()).collect::<Vec<_>>()
                && blocks.iter().all(|b| is_weakly_symmetric_block(k, b, tol)))
        }
        (ConditionId::QuasiSymmetric, Verdict::Fails) => {
            let [k] = kernels else { return Err(unexpected(r)) };
            let again = crate::structural::check_quasi_symmetric(k, tol)?;
            Ok(again.is_fails())
        }
        (ConditionId::ColumnPermutationFamily | ConditionId::Invariance, Verdict::Holds)
            if matches!(r.witness, Some(Witness::ColumnPermutations { .. })) =>
        {
            let Some(Witness::ColumnPermutations { perms }) = &r.witness else { unreachable!() };
            Ok(perms.len() == kernels.len()
                && kernels
                    .iter()
                    .zip(perms)
                    .all(|(k, p)| is_permutation(p, k.n_out()) && kernels[0].permute_columns(p).max_abs_diff(k) <= tol))
        }
        (ConditionId::ColumnPermutationFamily, Verdict::Fails) => {
            let Some(Counterexample::ColumnMismatch { index }) = r.counterexample else { return Err(unexpected(r)) };
            // Compare column multisets directly.
            let key = |k: &Kernel| {
                let mut cols: Vec<Vec<f64>> =
                    (0..k.n_out()).map(|c| (0..k.n_in()).map(|x| k.get(x, c)).collect()).collect();
                cols.sort_by(|a, b| {
                    a.iter()
                        .zip(b)
                        .map(|(x, y)| x.total_cmp(y))
                        .find(|o| o.is_ne())
                        .unwrap_or(std::cmp::Ordering::Equal)
                });
                cols
            };
            let (a, b) = (key(&kernels[0]), key(&kernels[index]));
            let dev = a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            Ok(dev > tol)
        }
        (ConditionId::Invariance, Verdict::Fails) => {
            let Some(Counterexample::Distribution { p, .. }) = &r.counterexample else { return Err(unexpected(r)) };
            Ok(mi_spread(p, kernels) > tol)
        }
        (ConditionId::CommonMaximizer, Verdict::Holds) => {
            let Some(Witness::CommonMaximizer { p, .. }) = &r.witness else { return Err(unexpected(r)) };
            for k in kernels {
                let c = blahut_arimoto(k, ba_options(tol))?.capacity;
                if c - mi(p, k) > tol {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        (ConditionId::CommonMaximizer, Verdict::Fails) => {
            let Some(Counterexample::Maximizers { candidates, .. }) = &r.counterexample else {
                return Err(unexpected(r));
            };
            let caps: Vec<f64> = kernels
                .iter()
                .map(|k| blahut_arimoto(k, ba_options(tol)).map(|b| b.capacity))
                .collect::<Result<_>>()?;
            Ok(candidates.iter().all(|p| kernels.iter().zip(&caps).any(|(k, c)| c - mi(p, k) > tol)))
        }
        (_, Verdict::NotFalsified) => Ok(true),
        _ => Err(unexpected(r)),
    }
}

fn replay_permutations(c: &TwoWayChannel, side: Side, r: &ConditionReport, joint: bool, tol: f64) -> Result<bool> {
    match r.verdict {
        Verdict::Holds => {
            let Some(Witness::Permutations { maps }) = &r.witness else { return Err(unexpected(r)) };
            let n = c.nx1();
            if maps.len() != n * n.saturating_sub(1) / 2 {
                return Ok(false);
            }
            Ok(maps.iter().all(|m| {
                let (p1, p2) = oriented_maps(side, m);
                if m.a >= n || m.b >= n || !is_permutation(&p1, c.ny1()) || !is_permutation(&p2, c.ny2()) {
                    return false;
                }
                if joint {
                    joint_deviation(c, m.a, m.b, &p1, &p2) <= tol
                } else {
                    marginal_deviation(c, Output::Y1, m.a, m.b, &p1) <= tol
                        && marginal_deviation(c, Output::Y2, m.a, m.b, &p2) <= tol
                }
            }))
        }
        Verdict::Fails => {
            let Some(Counterexample::Transposition { a, b, .. }) = r.counterexample else { return Err(unexpected(r)) };
            let dev = if joint {
                min_joint_deviation(c, a, b)
            } else {
                min_marginal_deviation(c, Output::Y1, a, b).max(min_marginal_deviation(c, Output::Y2, a, b))
            };
            Ok(dev > tol)
        }
        Verdict::NotFalsified => Ok(true),
    }
}

fn oriented_output(side: Side, output: usize) -> Output {
    if original_output(side, Output::Y1) == output {
        Output::Y1
    } else {
        Output::Y2
    }
}

fn replay_row_entropy(c: &TwoWayChannel, side: Side, cx: &Counterexample, tol: f64) -> bool {
    let Counterexample::RowEntropy { output, state, a, b, .. } = *cx else { return false };
    let h = |x1: usize| match oriented_output(side, output) {
        Output::Y1 => entropy(&c.y1_given(x1, state)),
        Output::Y2 => entropy(&c.y2_given(x1, state)),
    };
    (h(a) - h(b)).abs() > tol
}

fn swapped_row_entropy_ok(c: &TwoWayChannel, out: Output, tol: f64) -> bool {
    row_entropy_violation(c, out, tol).is_none()
}

/// Replay a two-user report against the channel it was computed on.
pub fn replay(ch: &TwoWayChannel, r: &ConditionReport, opts: &CheckOptions) -> Result<bool> {
    let tol = opts.tol;
    let mtol = opts.matrix_tol;
    match r.condition_id {
        ConditionId::ShannonOneSided => {
            let side = side_of(r)?;
            replay_permutations(&oriented(ch, side), side, r, true, mtol)
        }
        ConditionId::ExtendedShannon => {
            let side = side_of(r)?;
            replay_permutations(&oriented(ch, side), side, r, false, mtol)
        }
        ConditionId::ShannonTwoSided | ConditionId::TwoSidedInvariance | ConditionId::MaximizerInvariance => {
            all_parts(ch, r, opts)
        }
        ConditionId::Cva => {
            let side = side_of(r)?;
            if !r.parts.is_empty() {
                return all_parts(ch, r, opts);
            }
            let c = oriented(ch, side);
            match (r.verdict, &r.counterexample) {
                (Verdict::Holds, _) => {
                    Ok(swapped_row_entropy_ok(&c, Output::Y1, tol) && swapped_row_entropy_ok(&c, Output::Y2, tol))
                }
                (Verdict::Fails, Some(cx @ Counterexample::RowEntropy { .. })) => {
                    Ok(replay_row_entropy(&c, side, cx, tol))
                }
                (Verdict::Fails, Some(Counterexample::Distribution { p, .. })) => {
                    let q = reorient_joint(p, ch.nx1(), ch.nx2(), side);
                    Ok(matches!(Dominance::new(&c).dominated(&q, tol), Dominated::No(g) if g < -tol))
                }
                (Verdict::NotFalsified, _) => Ok(true),
                _ => Err(unexpected(r)),
            }
        }
        ConditionId::CommonMaximizer => {
            let side = side_of(r)?;
            replay_kernels(&ch.state_kernels(forward_direction(side)), r, tol)
        }
        ConditionId::Invariance => {
            let side = side_of(r)?;
            let t = if r.witness.is_some() { mtol } else { tol };
            replay_kernels(&ch.state_kernels(forward_direction(side)), r, t)
        }
        ConditionId::MaximizerCapacity => {
            if r.side.is_none() {
                return all_parts(ch, r, opts);
            }
            let side = side_of(r)?;
            let kernels = ch.state_kernels(forward_direction(side));
            for part in &r.parts {
                if !replay_kernels(&kernels, part, tol)? {
                    return Ok(false);
                }
            }
            match (r.verdict, &r.witness, &r.counterexample) {
                (Verdict::Holds, Some(Witness::CommonMaximizer { p, .. }), _) => {
                    let rates: Vec<f64> = kernels.iter().map(|k| mi(p, k)).collect();
                    Ok(rates.iter().all(|v| (v - rates[0]).abs() <= tol))
                }
                (Verdict::Fails, _, Some(Counterexample::StateRates { a, b, .. })) => {
                    let Some(Witness::CommonMaximizer { p, .. }) = r.parts.first().and_then(|c| c.witness.as_ref())
                    else {
                        return Err(unexpected(r));
                    };
                    Ok((mi(p, &kernels[*a]) - mi(p, &kernels[*b])).abs() > tol)
                }
                (Verdict::Fails, _, _) => Ok(true),
                _ => Err(unexpected(r)),
            }
        }
        ConditionId::MaximizerEntropy => {
            let side = side_of(r)?;
            let c = oriented(ch, side);
            let cm = r.parts.first().ok_or_else(|| unexpected(r))?;
            if !replay_kernels(&c.state_kernels(Direction::To2), cm, tol)? {
                return Ok(false);
            }
            let Some(part) = r.parts.get(1) else { return Ok(true) };
            match (part.verdict, &part.witness, &part.counterexample) {
                (Verdict::Holds, Some(_), _) => {
                    let mut p = part.clone();
                    p.condition_id = ConditionId::ColumnPermutationFamily;
                    replay_kernels(&c.state_kernels(Direction::To1), &p, mtol)
                }
                (Verdict::Fails, _, Some(cx @ Counterexample::RowEntropy { .. })) => {
                    Ok(replay_row_entropy(&c, side, cx, tol))
                }
                (Verdict::Fails, _, Some(Counterexample::Distribution { p, .. })) => {
                    let Some(Witness::CommonMaximizer { p: pstar, .. }) = &cm.witness else {
                        return Err(unexpected(r));
                    };
                    let q = reorient_joint(p, ch.nx1(), ch.nx2(), side);
                    Ok(reverse_entropy_gap(&Dominance::new(&c), &c, &q, pstar) > tol)
                }
                (Verdict::NotFalsified, _, _) => Ok(true),
                _ => Err(unexpected(r)),
            }
        }
        ConditionId::QuasiSymmetricPermuted => {
            let side = side_of(r)?;
            let fwd = forward_direction(side);
            let ks = ch.state_kernels(fwd);
            if r.parts.len() != ks.len() + 1 {
                return Err(unexpected(r));
            }
            for (k, part) in ks.iter().zip(&r.parts) {
                if !replay_kernels(std::slice::from_ref(k), part, mtol)? {
                    return Ok(false);
                }
            }
            replay_kernels(&ch.state_kernels(fwd.reverse()), &r.parts[ks.len()], mtol)
        }
        ConditionId::PermutedBoth => {
            let [a, b] = r.parts.as_slice() else { return Err(unexpected(r)) };
            Ok(replay_kernels(&ch.state_kernels(Direction::To2), a, mtol)?
                && replay_kernels(&ch.state_kernels(Direction::To1), b, mtol)?)
        }
        _ => Err(unexpected(r)),
    }
}

fn all_parts(ch: &TwoWayChannel, r: &ConditionReport, opts: &CheckOptions) -> Result<bool> {
    for p in &r.parts {
        if !replay(ch, p, opts)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Input distribution with symbols `a` and `b` of user 1 exchanged.
pub fn transpose_input(p: &[f64], nx1: usize, nx2: usize, a: usize, b: usize) -> Vec<f64> {
    let mut out = vec![0.0; p.len()];
    for x1 in 0..nx1 {
        for x2 in 0..nx2 {
            out[x1 * nx2 + x2] = p[transpose(x1, a, b) * nx2 + x2];
        }
    }
    out
}
