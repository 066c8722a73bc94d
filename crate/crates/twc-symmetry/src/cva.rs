//! Entropy-based tightness test: noise entropy invariance plus an
//! independent input whose output entropies dominate.

use std::cell::Cell;

use twc_core::cmi::{cond_entropy, TupleSpace};
use twc_core::simplex::{golden_max, maximize, AscentOptions};
use twc_core::{entropy, Direction, Kernel, TwoWayChannel};

use crate::report::{CheckOptions, ConditionId, ConditionReport, Counterexample, Side};
use crate::shannon::{oriented, Output};
use crate::trials::{first_failure, trial_point};

/// Index of `out` in the original labeling when viewed from `side`.
pub fn original_output(side: Side, out: Output) -> usize {
    match (side, out) {
        (Side::User1, Output::Y1) | (Side::User2, Output::Y2) => 1,
        _ => 2,
    }
}

/// First `(state x2, a, b)` where `H(out | x1, x2)` changes with `x1`.
pub fn row_entropy_violation(ch: &TwoWayChannel, out: Output, tol: f64) -> Option<(usize, usize, usize, [f64; 2])> {
    for x2 in 0..ch.nx2() {
        let h = |x1: usize| match out {
            Output::Y1 => entropy(&ch.y1_given(x1, x2)),
            Output::Y2 => entropy(&ch.y2_given(x1, x2)),
        };
        let h0 = h(0);
        for x1 in 1..ch.nx1() {
            let hx = h(x1);
            if (hx - h0).abs() > tol {
                return Some((x2, 0, x1, [h0, hx]));
            }
        }
    }
    None
}

/// Joint pmf in the oriented channel's `(x1, x2)` order, converted from or
/// to the original order.
pub fn reorient_joint(p: &[f64], n1: usize, n2: usize, side: Side) -> Vec<f64> {
    match side {
        Side::User1 => p.to_vec(),
        Side::User2 => {
            let mut out = vec![0.0; p.len()];
            for a in 0..n1 {
                for b in 0..n2 {
                    out[b * n1 + a] = p[a * n2 + b];
                }
            }
            out
        }
    }
}

/// Everything the dominance search needs about one oriented channel.
pub struct Dominance {
    nx1: usize,
    nx2: usize,
    /// Forward state kernels, indexed by `x2`, rows `x1`.
    k2: Vec<Kernel>,
    /// Reverse state kernels, indexed by `x1`, rows `x2`.
    k1: Vec<Kernel>,
    pair1: Kernel,
    pair2: Kernel,
    space: TupleSpace,
}

/// Outcome of one dominance problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Dominated {
    /// `P̃` found with both entropy gaps above `−tol`.
    Yes,
    /// Certified upper bound on the best achievable worst gap.
    No(f64),
}

impl Dominance {
    pub fn new(ch: &TwoWayChannel) -> Self {
        Self {
            nx1: ch.nx1(),
            nx2: ch.nx2(),
            k2: ch.state_kernels(Direction::To2),
            k1: ch.state_kernels(Direction::To1),
            pair1: ch.pair_kernel(Direction::To1),
            pair2: ch.pair_kernel(Direction::To2),
            space: TupleSpace::new(vec![ch.nx1(), ch.nx2()]),
        }
    }

    fn x2_marginal(&self, p: &[f64]) -> Vec<f64> {
        (0..self.nx2).map(|b| (0..self.nx1).map(|a| p[a * self.nx2 + b]).sum()).collect()
    }

    /// `H(Y1 | X1 = x1)` under `P̃(x1)·P_X2`, per `x1`.
    fn reverse_entropies(&self, px2: &[f64]) -> Vec<f64> {
        self.k1.iter().map(|k| entropy(&k.output(px2))).collect()
    }

    /// `(H^(1)(Y1|X1), H^(1)(Y2|X2))` of a joint input.
    pub fn entropies(&self, p: &[f64]) -> (f64, f64) {
        let h1 = cond_entropy(p, &self.pair1, &self.space.grouping(&[0]));
        let h2 = cond_entropy(p, &self.pair2, &self.space.grouping(&[1]));
        (h1, h2)
    }

    /// `Σ_x2 P(x2) H(q K2_x2)` and its gradient (up to a constant shift).
    fn forward(&self, px2: &[f64], q: &[f64], grad: Option<&mut [f64]>) -> f64 {
        let mut v = 0.0;
        let mut g = grad;
        for (k, &w) in self.k2.iter().zip(px2) {
            if w <= 0.0 {
                continue;
            }
            let out = k.output(q);
            v += w * entropy(&out);
            if let Some(g) = g.as_deref_mut() {
                let logs: Vec<f64> = out.iter().map(|o| o.max(1e-300).log2()).collect();
                for (x, gx) in g.iter_mut().enumerate() {
                    let d: f64 = k.row(x).iter().zip(&logs).filter(|(kv, _)| **kv > 0.0).map(|(kv, l)| kv * l).sum();
                    *gx -= w * d;
                }
            }
        }
        v
    }

    /// Does some `P̃_X1` satisfy `H^(1)(Y_j|X_j) ≤ H^(2)(Y_j|X_j)` for both
    /// outputs, where `P^(2) = P̃·P^(1)_X2`?
    pub fn dominated(&self, p: &[f64], tol: f64) -> Dominated {
        let px2 = self.x2_marginal(p);
        let (h1, h2) = self.entropies(p);
        let e = self.reverse_entropies(&px2);
        let phi = |q: &[f64]| {
            let f1: f64 = q.iter().zip(&e).map(|(a, b)| a * b).sum();
            (self.forward(&px2, q, None) - h2).min(f1 - h1)
        };
        let uniform = vec![1.0 / self.nx1 as f64; self.nx1];
        let own: Vec<f64> = (0..self.nx1).map(|a| (0..self.nx2).map(|b| p[a * self.nx2 + b]).sum()).collect();
        if phi(&uniform) >= -tol || phi(&own) >= -tol {
            return Dominated::Yes;
        }
        // max_q min(a(q), b(q)) = min_t max_q [t a(q) + (1 − t) b(q)] for
        // concave a, b; every inner value + gap is a certified upper bound.
        let best_upper = Cell::new(f64::INFINITY);
        let found = Cell::new(false);
        let mut start = uniform.clone();
        let opts = AscentOptions { max_iter: 3000, tol: 1e-11 };
        let mut inner = |t: f64| -> f64 {
            let f = |q: &[f64], g: &mut [f64]| {
                let mut gf = vec![0.0; q.len()];
                let fw = self.forward(&px2, q, Some(&mut gf));
                let f1: f64 = q.iter().zip(&e).map(|(a, b)| a * b).sum();
                for i in 0..q.len() {
                    g[i] = t * gf[i] + (1.0 - t) * e[i];
                }
                t * (fw - h2) + (1.0 - t) * (f1 - h1)
            };
            let r = maximize(f, &start, &[self.nx1], opts);
            if phi(&r.x) >= -tol {
                found.set(true);
            }
            start = r.x;
            let upper = r.value + r.gap;
            best_upper.set(best_upper.get().min(upper));
            upper
        };
        for t in [0.0, 1.0] {
            inner(t);
        }
        if !found.get() && best_upper.get() >= -tol {
            golden_max(|t| -inner(t), 0.0, 1.0, 1e-6);
        }
        if found.get() || best_upper.get() >= -tol {
            Dominated::Yes
        } else {
            Dominated::No(best_upper.get())
        }
    }
}

/// Exact noise-entropy invariance for both outputs.
pub fn check_cva_entropy_part(ch: &TwoWayChannel, side: Side, tol: f64) -> ConditionReport {
    let c = oriented(ch, side);
    for out in [Output::Y2, Output::Y1] {
        if let Some((state, a, b, entropies)) = row_entropy_violation(&c, out, tol) {
            let output = original_output(side, out);
            return ConditionReport::fails(
                ConditionId::Cva,
                Counterexample::RowEntropy { output, state, a, b, entropies },
            )
            .with_side(side);
        }
    }
    ConditionReport::holds(ConditionId::Cva, None).with_side(side)
}

/// Randomized search for an input that no independent input dominates.
pub fn check_cva_dominance_part(ch: &TwoWayChannel, side: Side, opts: &CheckOptions) -> ConditionReport {
    let c = oriented(ch, side);
    let dom = Dominance::new(&c);
    let n = c.nx1() * c.nx2();
    let hit = first_failure(opts.exec, opts.trials, |i| {
        let p = trial_point(opts.seed, i, n);
        match dom.dominated(&p, opts.tol) {
            Dominated::Yes => None,
            Dominated::No(gap) => Some((p, gap)),
        }
    });
    match hit {
        Some((i, (p, gap))) => {
            let p = reorient_joint(&p, c.nx1(), c.nx2(), side);
            let mut r = ConditionReport::fails(ConditionId::Cva, Counterexample::Distribution { p, gap });
            r.trials = i + 1;
            r.seed = Some(opts.seed);
            r.with_side(side)
        }
        None => ConditionReport::not_falsified(ConditionId::Cva, opts.trials, opts.seed).with_side(side),
    }
}

/// Both parts; the randomized part runs only when the exact part holds.
pub fn check_cva(ch: &TwoWayChannel, side: Side, opts: &CheckOptions) -> ConditionReport {
    let exact = check_cva_entropy_part(ch, side, opts.tol);
    let mut parts = vec![exact];
    if !parts[0].is_fails() {
        parts.push(check_cva_dominance_part(ch, side, opts));
    }
    ConditionReport::conjunction(ConditionId::Cva, parts).with_side(side)
}
