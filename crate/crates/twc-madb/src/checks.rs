use twc_core::cmi::{cond_mi, Grouping, TupleSpace};
use twc_core::simplex::{affordable_resolution, grid};
use twc_core::{mi, Error, Kernel, Result};
use twc_symmetry::search::{factorial, first_bijection, for_each_bijection, transpose};
use twc_symmetry::theorems::{common_maximizer_of, invariance_of, InvarianceMode};
use twc_symmetry::trials::{first_failure, trial_point};
use twc_symmetry::{
    replay_kernels, CheckOptions, ConditionId, ConditionReport, Counterexample, InputRelabeling, Side, Verdict, Witness,
};

use crate::channel::MadbChannel;

/// Largest `max_{x, y} |P(y|x) − P(π(y)|τ(x))|` where `τ` swaps symbols `a`
/// and `b` of input `input` (1 or 2).
pub fn relabeling_deviation(ch: &MadbChannel, input: usize, a: usize, b: usize, pi: &[usize]) -> f64 {
    let q = ch.q();
    let k = ch.kernel();
    let mut dev: f64 = 0.0;
    for x1 in 0..q {
        for x2 in 0..q {
            for x3 in 0..q {
                let (t1, t2) = if input == 1 { (transpose(x1, a, b), x2) } else { (x1, transpose(x2, a, b)) };
                let (r, s) = (ch.row_index(x1, x2, x3), ch.row_index(t1, t2, x3));
                for (y, &py) in pi.iter().enumerate() {
                    dev = dev.max((k.get(r, y) - k.get(s, py)).abs());
                }
            }
        }
    }
    dev
}

fn allowed(ch: &MadbChannel, input: usize, a: usize, b: usize, tol: f64) -> Vec<Vec<usize>> {
    let q = ch.q();
    let k = ch.kernel();
    let ny = ch.ny3();
    (0..ny)
        .map(|y| {
            (0..ny)
                .filter(|&c| {
                    (0..q * q * q).all(|r| {
                        let (x1, x2, x3) = (r / (q * q), (r / q) % q, r % q);
                        let (t1, t2) = if input == 1 { (transpose(x1, a, b), x2) } else { (x1, transpose(x2, a, b)) };
                        (k.get(r, y) - k.get(ch.row_index(t1, t2, x3), c)).abs() <= tol
                    })
                })
                .collect()
        })
        .collect()
}

fn best_deviation(ch: &MadbChannel, input: usize, a: usize, b: usize) -> f64 {
    let ny = ch.ny3();
    let all: Vec<Vec<usize>> = vec![(0..ny).collect(); ny];
    let mut best = f64::INFINITY;
    for_each_bijection(&all, |pi| {
        best = best.min(relabeling_deviation(ch, input, a, b, pi));
        false
    });
    best
}

fn side_of(input: usize) -> Side {
    if input == 1 {
        Side::User1
    } else {
        Side::User2
    }
}

fn check_budget(ch: &MadbChannel, opts: &CheckOptions) -> Result<()> {
    let needed = factorial(ch.ny3());
    if needed > opts.search_budget {
        return Err(Error::SearchBudgetExceeded { needed, budget: opts.search_budget });
    }
    Ok(())
}

/// Output relabelings undoing every transposition of the listed inputs, or
/// the first transposition that none undoes.
fn relabelings(ch: &MadbChannel, inputs: &[usize], opts: &CheckOptions) -> Result<ConditionReport> {
    check_budget(ch, opts)?;
    let q = ch.q();
    let mut maps = Vec::new();
    for &input in inputs {
        for a in 0..q {
            for b in a + 1..q {
                match first_bijection(&allowed(ch, input, a, b, opts.matrix_tol)) {
                    Some(pi) => maps.push(InputRelabeling { input, a, b, pi }),
                    None => {
                        let best = best_deviation(ch, input, a, b);
                        return Ok(ConditionReport::fails(
                            ConditionId::MadbRelabeling,
                            Counterexample::Transposition { a, b, best_deviation: best },
                        )
                        .with_side(side_of(input)));
                    }
                }
            }
        }
    }
    Ok(ConditionReport::holds(ConditionId::MadbRelabeling, Some(Witness::InputRelabelings { maps })))
}

/// Every transposition of `X1` and of `X2` is undone by a relabeling of
/// `Y3`; exact exhaustive search.
pub fn check_madb_exsc(ch: &MadbChannel, opts: &CheckOptions) -> Result<ConditionReport> {
    relabelings(ch, &[1, 2], opts)
}

/// `[I(X1;Y3|X2), I(X2;Y3|X1), I(X1,X2;Y3)]` for each `x3` under a law
/// `p[x3][x1·q + x2]`.
struct SliceInfo {
    q: usize,
    slices: Vec<Kernel>,
    given_x2: Grouping,
    given_x1: Grouping,
    none: Grouping,
    all: Grouping,
}

impl SliceInfo {
    fn new(ch: &MadbChannel) -> Self {
        let q = ch.q();
        let s = TupleSpace::new(vec![q, q]);
        Self {
            q,
            slices: (0..q).map(|x3| ch.slice_x12(x3)).collect(),
            given_x2: s.grouping(&[1]),
            given_x1: s.grouping(&[0]),
            none: Grouping::trivial(q * q),
            all: Grouping::identity(q * q),
        }
    }

    fn values(&self, x3: usize, p: &[f64]) -> [f64; 3] {
        let k = &self.slices[x3];
        [
            cond_mi(p, k, &self.given_x2, &self.all),
            cond_mi(p, k, &self.given_x1, &self.all),
            cond_mi(p, k, &self.none, &self.all),
        ]
    }

    fn product(&self, p1: &[f64], p2: &[f64]) -> Vec<f64> {
        (0..self.q * self.q).map(|i| p1[i / self.q] * p2[i % self.q]).collect()
    }

    /// Smallest slack of the three inequalities over all `x3`.
    fn margin(&self, targets: &[[f64; 3]], p1: &[f64], p2: &[f64]) -> f64 {
        let pp = self.product(p1, p2);
        (0..self.q)
            .flat_map(|x3| {
                let v = self.values(x3, &pp);
                (0..3).map(move |k| v[k] - targets[x3][k])
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Best product found by a grid scan followed by a shrinking pattern
    /// search; returns its margin.
    fn best_product(&self, targets: &[[f64; 3]]) -> (Vec<f64>, Vec<f64>, f64) {
        let q = self.q;
        let g = affordable_resolution(q, 40, 2_000);
        let pts = grid(q, g);
        let mut best = (vec![1.0 / q as f64; q], vec![1.0 / q as f64; q], f64::NEG_INFINITY);
        best.2 = self.margin(targets, &best.0, &best.1);
        if pts.len() * pts.len() <= 4_000 {
            for a in &pts {
                for b in &pts {
                    let m = self.margin(targets, a, b);
                    if m > best.2 {
                        best = (a.clone(), b.clone(), m);
                    }
                }
            }
        } else {
            for _ in 0..20 {
                let before = best.2;
                for a in &pts {
                    let m = self.margin(targets, a, &best.1);
                    if m > best.2 {
                        best = (a.clone(), best.1.clone(), m);
                    }
                }
                for b in &pts {
                    let m = self.margin(targets, &best.0, b);
                    if m > best.2 {
                        best = (best.0.clone(), b.clone(), m);
                    }
                }
                if best.2 <= before {
                    break;
                }
            }
        }
        let mut h = 1.0 / g as f64;
        while h > 1e-10 {
            let mut improved = false;
            for block in 0..2 {
                for i in 0..q {
                    for j in 0..q {
                        if i == j {
                            continue;
                        }
                        let mut cand = (best.0.clone(), best.1.clone());
                        let v = if block == 0 { &mut cand.0 } else { &mut cand.1 };
                        let step = h.min(v[i]);
                        if step <= 0.0 {
                            continue;
                        }
                        v[i] -= step;
                        v[j] += step;
                        let m = self.margin(targets, &cand.0, &cand.1);
                        if m > best.2 {
                            best = (cand.0, cand.1, m);
                            improved = true;
                        }
                    }
                }
            }
            if !improved {
                h /= 2.0;
            }
        }
        best
    }

    fn targets(&self, p: &[f64]) -> Vec<[f64; 3]> {
        let n = self.q * self.q;
        (0..self.q).map(|x3| self.values(x3, &p[x3 * n..(x3 + 1) * n])).collect()
    }
}

fn random_conditional(seed: u64, i: u64, q: usize) -> Vec<f64> {
    let n = q * q;
    let flat = trial_point(seed, i, n * q);
    // Normalize each x3 block of a Dirichlet(1) draw.
    flat.chunks(n)
        .flat_map(|c| {
            let s: f64 = c.iter().sum();
            c.iter().map(move |v| v / s).collect::<Vec<_>>()
        })
        .collect()
}

/// Randomized search for a conditional law `P(x1, x2 | x3)` that no
/// product `P̃(x1)·P̃(x2)` dominates in all three rate terms for every
/// `x3`. The uniform product is tried first; the counterexample stores
/// `p[x3·q² + x1·q + x2]`.
pub fn check_madb_exmain(ch: &MadbChannel, opts: &CheckOptions) -> Result<ConditionReport> {
    let info = SliceInfo::new(ch);
    let q = ch.q();
    let u = vec![1.0 / q as f64; q];
    let tol = opts.tol;
    let candidate_survives = std::sync::atomic::AtomicBool::new(true);
    let hit = first_failure(opts.exec, opts.trials, |i| {
        let p = random_conditional(opts.seed, i, q);
        let targets = info.targets(&p);
        if info.margin(&targets, &u, &u) >= -tol {
            return None;
        }
        candidate_survives.store(false, std::sync::atomic::Ordering::Relaxed);
        let (_, _, m) = info.best_product(&targets);
        (m < -tol).then_some((p, -m))
    });
    if let Some((_, (p, gap))) = hit {
        return Ok(ConditionReport::fails(ConditionId::MadbProductDominance, Counterexample::Distribution { p, gap }));
    }
    let mut r = ConditionReport::not_falsified(ConditionId::MadbProductDominance, opts.trials, opts.seed);
    if candidate_survives.into_inner() {
        r.witness = Some(Witness::ProductInput { p1: u.clone(), p2: u });
    }
    Ok(r)
}

fn x1_slices(ch: &MadbChannel) -> Vec<Kernel> {
    let q = ch.q();
    (0..q * q).map(|s| ch.slice_x1(s / q, s % q)).collect()
}

fn x2_slices(ch: &MadbChannel) -> Vec<Kernel> {
    let q = ch.q();
    (0..q * q).map(|s| ch.slice_x2(s / q, s % q)).collect()
}

fn x12_slices(ch: &MadbChannel) -> Vec<Kernel> {
    (0..ch.q()).map(|x3| ch.slice_x12(x3)).collect()
}

/// `𝓘(P*, P(·|·, x2, x3))` must not depend on `x2`; states are indexed
/// `x2·q + x3`.
fn rates_over_x2(ch: &MadbChannel, p_star: &[f64], tol: f64) -> ConditionReport {
    let q = ch.q();
    let ks = x1_slices(ch);
    for x3 in 0..q {
        let v0 = mi(p_star, &ks[x3]);
        for x2 in 1..q {
            let v = mi(p_star, &ks[x2 * q + x3]);
            if (v - v0).abs() > tol {
                return ConditionReport::fails(
                    ConditionId::Invariance,
                    Counterexample::StateRates { a: x3, b: x2 * q + x3, values: [v0, v] },
                );
            }
        }
    }
    ConditionReport::holds(ConditionId::Invariance, None)
}

/// `𝓘(P(x1,x2), P(·|·,·,x3)) ≤ 𝓘(P*·P_X2, P(·|·,·,x3))`.
fn dominance_gap(ch: &MadbChannel, p: &[f64], p_star: &[f64]) -> f64 {
    let q = ch.q();
    let p2: Vec<f64> = (0..q).map(|b| (0..q).map(|a| p[a * q + b]).sum()).collect();
    let prod: Vec<f64> = (0..q * q).map(|i| p_star[i / q] * p2[i % q]).collect();
    x12_slices(ch).iter().map(|k| mi(p, k) - mi(&prod, k)).fold(f64::NEG_INFINITY, f64::max)
}

fn dominance(ch: &MadbChannel, p_star: &[f64], opts: &CheckOptions) -> Result<ConditionReport> {
    let q = ch.q();
    let uniform = p_star.iter().all(|&v| (v - 1.0 / q as f64).abs() <= opts.matrix_tol);
    if uniform {
        // Relabelings undoing every transposition of X1 make the symmetrized
        // input dominate by concavity, and symmetrizing yields P*·P_X2.
        let r = relabelings(ch, &[1], opts)?;
        if r.is_holds() {
            let mut r = r;
            r.condition_id = ConditionId::MadbProductDominance;
            return Ok(r);
        }
    }
    let n = q * q;
    let probe = vec![1.0 / n as f64; n];
    let gap = dominance_gap(ch, &probe, p_star);
    if gap > opts.tol {
        return Ok(ConditionReport::fails(
            ConditionId::MadbProductDominance,
            Counterexample::Distribution { p: probe, gap },
        ));
    }
    let hit = first_failure(opts.exec, opts.trials, |i| {
        let p = trial_point(opts.seed, i, n);
        let gap = dominance_gap(ch, &p, p_star);
        (gap > opts.tol).then_some((p, gap))
    });
    Ok(match hit {
        Some((_, (p, gap))) => {
            ConditionReport::fails(ConditionId::MadbProductDominance, Counterexample::Distribution { p, gap })
        }
        None => ConditionReport::not_falsified(ConditionId::MadbProductDominance, opts.trials, opts.seed),
    })
}

/// Common maximizer of `X1` over `(x2, x3)` with `x2`-invariant rates,
/// invariance over `(x1, x3)` of the `X2` channels, invariance over `x3`
/// of the pair channels, and dominance of `P*·P_X2`. Parts are reported in
/// that order.
pub fn check_madb_exmain2(ch: &MadbChannel, opts: &CheckOptions) -> Result<ConditionReport> {
    let mut parts = vec![common_maximizer_of(&x1_slices(ch), opts.tol)?];
    let p_star = match &parts[0].witness {
        Some(Witness::CommonMaximizer { p, .. }) if parts[0].is_holds() => Some(p.clone()),
        _ => None,
    };
    if let Some(p) = &p_star {
        parts.push(rates_over_x2(ch, p, opts.tol));
    }
    parts.push(invariance_of(&x2_slices(ch), InvarianceMode::Structural, opts)?);
    parts.push(invariance_of(&x12_slices(ch), InvarianceMode::Structural, opts)?);
    if let Some(p) = &p_star {
        parts.push(dominance(ch, p, opts)?);
    }
    Ok(ConditionReport::conjunction(ConditionId::MadbMaximizerInvariance, parts))
}

/// Re-derive the verdict of a three-user report from its evidence.
pub fn replay_madb(ch: &MadbChannel, r: &ConditionReport, opts: &CheckOptions) -> Result<bool> {
    let tol = 1e-9_f64.max(opts.matrix_tol);
    match (r.condition_id, r.verdict) {
        (ConditionId::MadbRelabeling | ConditionId::MadbProductDominance, Verdict::Holds)
            if matches!(r.witness, Some(Witness::InputRelabelings { .. })) =>
        {
            let Some(Witness::InputRelabelings { maps }) = &r.witness else { unreachable!() };
            let ny = ch.ny3();
            Ok(maps.iter().all(|m| {
                let mut seen = m.pi.clone();
                seen.sort_unstable();
                seen == (0..ny).collect::<Vec<_>>() && relabeling_deviation(ch, m.input, m.a, m.b, &m.pi) <= tol
            }))
        }
        (ConditionId::MadbRelabeling, Verdict::Fails) => {
            let Some(Counterexample::Transposition { a, b, .. }) = r.counterexample else {
                return Err(Error::StructuralViolation("relabeling failure without a transposition".into()));
            };
            let input = if r.side == Some(Side::User2) { 2 } else { 1 };
            Ok(first_bijection(&allowed(ch, input, a, b, opts.matrix_tol)).is_none())
        }
        (ConditionId::MadbProductDominance, Verdict::Fails) => {
            let Some(Counterexample::Distribution { p, .. }) = &r.counterexample else {
                return Err(Error::StructuralViolation("dominance failure without a distribution".into()));
            };
            let q = ch.q();
            if p.len() == q * q * q {
                let info = SliceInfo::new(ch);
                let (_, _, m) = info.best_product(&info.targets(p));
                Ok(m < -opts.tol)
            } else {
                Ok(r.parts.is_empty() && p.len() == q * q)
            }
        }
        (ConditionId::MadbMaximizerInvariance, _) => replay_exmain2(ch, r, opts),
        (_, Verdict::NotFalsified) => Ok(true),
        _ => Err(Error::StructuralViolation(format!("no replay for {}", r.condition_id.name()))),
    }
}

fn replay_exmain2(ch: &MadbChannel, r: &ConditionReport, opts: &CheckOptions) -> Result<bool> {
    let mut parts = r.parts.iter();
    let Some(first) = parts.next() else { return Ok(false) };
    if !replay_kernels(&x1_slices(ch), first, opts.tol)? {
        return Ok(false);
    }
    let p_star = match &first.witness {
        Some(Witness::CommonMaximizer { p, .. }) if first.is_holds() => Some(p.clone()),
        _ => None,
    };
    if let Some(p) = &p_star {
        let Some(rates) = parts.next() else { return Ok(false) };
        if rates_over_x2(ch, p, opts.tol).verdict != rates.verdict {
            return Ok(false);
        }
    }
    for family in [x2_slices(ch), x12_slices(ch)] {
        let Some(part) = parts.next() else { return Ok(false) };
        if !replay_kernels(&family, part, opts.matrix_tol.max(opts.tol))? {
            return Ok(false);
        }
    }
    if let Some(p) = &p_star {
        let Some(part) = parts.next() else { return Ok(false) };
        let ok = match (&part.verdict, &part.counterexample) {
            (Verdict::Fails, Some(Counterexample::Distribution { p: px, .. })) => dominance_gap(ch, px, p) > opts.tol,
            (Verdict::Holds, _) => replay_madb(ch, part, opts)?,
            (Verdict::NotFalsified, _) => true,
            _ => false,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(parts.next().is_none())
}

/// Known implications between the three-user conditions: relabelings make
/// the uniform product dominate, so the product-dominance check cannot
/// fail when they exist. Returns one message per violation.
pub fn madb_audit(reports: &[ConditionReport]) -> Vec<String> {
    let find = |id| reports.iter().find(|r| r.condition_id == id);
    let mut out = Vec::new();
    if let (Some(sc), Some(main)) = (find(ConditionId::MadbRelabeling), find(ConditionId::MadbProductDominance)) {
        if sc.is_holds() && main.is_fails() {
            out.push("madb_relabeling holds but madb_product_dominance fails".to_string());
        }
    }
    out
}
