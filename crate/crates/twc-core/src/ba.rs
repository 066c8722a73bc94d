//! Blahut–Arimoto capacity solver, with an optional linear input cost.

use crate::error::{Error, Result};
use crate::info::{kl_divergence, mi, Dist, Kernel};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaOptions {
    /// Stop once the duality gap `max_x D(K_x‖Q) − I` is at most this.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for BaOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 100_000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaResult {
    pub capacity: f64,
    pub maximizer: Dist,
    pub iterations: usize,
    /// Duality gap of the returned iterate; an upper bound on the error.
    pub gap: f64,
}

/// Capacity of `k` starting from the uniform input.
pub fn blahut_arimoto(k: &Kernel, opts: BaOptions) -> Result<BaResult> {
    blahut_arimoto_observed(k, opts, |_, _| {})
}

/// As [`blahut_arimoto`], calling `observe(iteration, I)` on every iterate.
pub fn blahut_arimoto_observed(k: &Kernel, opts: BaOptions, observe: impl FnMut(usize, f64)) -> Result<BaResult> {
    let zero = vec![0.0; k.n_in()];
    let r = maximize_with_cost(k, &zero, 0.0, None, opts, observe);
    if r.upper - r.value > opts.tol {
        return Err(Error::NonConvergence { iterations: r.iterations, gap: r.upper - r.value });
    }
    Ok(BaResult {
        capacity: r.value,
        maximizer: Dist::normalized(r.p).expect("iterate is a distribution"),
        iterations: r.iterations,
        gap: r.upper - r.value,
    })
}

/// Result of maximizing `𝓘(p, K) + μ⟨p, c⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct CostResult {
    pub p: Vec<f64>,
    /// Objective at `p`.
    pub value: f64,
    /// Certified upper bound `max_x [D(K_x‖Q_p) + μ c_x]` on the optimum.
    pub upper: f64,
    pub iterations: usize,
}

/// Divergences `D(K_x‖Q_p)` for every input, clamped for update purposes.
fn divergences(k: &Kernel, p: &[f64]) -> (Vec<f64>, f64) {
    let q = k.output(p);
    let d: Vec<f64> = (0..k.n_in()).map(|x| kl_divergence(k.row(x), &q)).collect();
    let i = p.iter().zip(&d).filter(|(px, _)| **px > 0.0).map(|(px, dx)| px * dx).sum();
    (d, i)
}

fn objective(k: &Kernel, cost: &[f64], mu: f64, p: &[f64]) -> f64 {
    let lin: f64 = if mu != 0.0 { p.iter().zip(cost).map(|(a, b)| a * b).sum() } else { 0.0 };
    mi(p, k) + mu * lin
}

fn reweight(p: &[f64], score: &[f64], step: f64) -> Vec<f64> {
    let logs: Vec<f64> = p
        .iter()
        .zip(score)
        .map(
            |(&px, &s)| if px > 0.0 { px.ln() + step * s.min(1e6) * std::f64::consts::LN_2 } else { f64::NEG_INFINITY },
        )
        .collect();
    let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut w: Vec<f64> = logs.iter().map(|l| (l - m).exp()).collect();
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|v| *v /= s);
    w
}

/// Blahut–Arimoto iteration for `max_p 𝓘(p, K) + μ⟨p, c⟩`.
///
/// Each step takes the better of the plain multiplicative update and an
/// over-relaxed one, so the objective never decreases. Never fails; the
/// caller inspects `upper − value`.
pub fn maximize_with_cost(
    k: &Kernel,
    cost: &[f64],
    mu: f64,
    init: Option<&[f64]>,
    opts: BaOptions,
    mut observe: impl FnMut(usize, f64),
) -> CostResult {
    let n = k.n_in();
    let mut p: Vec<f64> = match init {
        Some(v) => {
            // Keep every input alive so the multiplicative update can reach it.
            let mut w: Vec<f64> = v.iter().map(|x| x.max(0.0) + 1e-12).collect();
            let s: f64 = w.iter().sum();
            w.iter_mut().for_each(|x| *x /= s);
            w
        }
        None => vec![1.0 / n as f64; n],
    };
    // A common offset in the cost only shifts the objective; removing it
    // keeps step comparisons above rounding noise when `μ` is large.
    let offset = cost.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let shifted: Vec<f64> = cost.iter().map(|c| c - offset).collect();
    let cost = &shifted[..];
    let lift = mu * offset;
    let mut relax = 2.0;
    let mut it = 0;
    loop {
        let (d, i) = divergences(k, &p);
        let score: Vec<f64> = d.iter().zip(cost).map(|(dx, cx)| dx + mu * cx).collect();
        let lin: f64 = p.iter().zip(cost).map(|(a, b)| a * b).sum();
        let value = i + mu * lin;
        observe(it, value + lift);
        let upper = score.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if upper - value <= opts.tol || it >= opts.max_iter {
            return CostResult { p, value: value + lift, upper: upper + lift, iterations: it };
        }
        let plain = reweight(&p, &score, 1.0);
        let fast = reweight(&p, &score, relax);
        let (vp, vf) = (objective(k, cost, mu, &plain), objective(k, cost, mu, &fast));
        if vf >= vp {
            p = fast;
            relax = (relax * 1.5).min(64.0);
        } else {
            p = plain;
            relax = (relax * 0.5).max(1.5);
        }
        it += 1;
    }
}

/// True iff the uniform input satisfies the capacity KKT conditions, i.e.
/// `D(K_x‖Q_U)` is the same for every input within `tol`.
pub fn uniform_kkt_test(k: &Kernel, tol: f64) -> bool {
    let u = vec![1.0 / k.n_in() as f64; k.n_in()];
    let (d, _) = divergences(k, &u);
    let lo = d.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = d.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    hi - lo <= tol
}
