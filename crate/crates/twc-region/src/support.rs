//! Support functions of the independent-input and correlated-input regions.

use serde::{Deserialize, Serialize};
use twc_core::ba::maximize_with_cost;
use twc_core::cmi::{cond_mi, cond_mi_grad, Grouping, TupleSpace};
use twc_core::simplex::{
    affordable_resolution, grid, maximize_mirror, sample_uniform_simplex, stream_rng, AscentOptions,
};
use twc_core::{mi, BaOptions, Direction, Error, Exec, Kernel, Result, TwoWayChannel};

use crate::geometry::RateRegion2D;

/// Which bound a computation targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Independent inputs; every reported value is achieved.
    Inner,
    /// Arbitrarily correlated inputs.
    Outer,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionOptions {
    /// Grid resolution per simplex coordinate for the independent-input search.
    pub grid: usize,
    /// Cap on the number of grid points; the resolution is lowered to fit.
    pub max_grid_points: usize,
    /// Grid points refined by coordinate ascent, and random restarts of the
    /// correlated-input ascent.
    pub restarts: usize,
    /// Ascent restarts must agree within this unless the optimality gap is
    /// already below it.
    pub agreement: f64,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for RegionOptions {
    fn default() -> Self {
        Self { grid: 50, max_grid_points: 2000, restarts: 8, agreement: 1e-6, seed: 42, exec: Exec::Parallel }
    }
}

/// Input law attaining a support value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputLaw {
    Product {
        p1: Vec<f64>,
        p2: Vec<f64>,
    },
    /// Joint pmf on `X1 × X2`, `x1` major.
    Joint {
        p: Vec<f64>,
    },
}

/// One evaluation of a region's support function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportSample {
    pub lambda: f64,
    /// `λR1 + (1−λ)R2` at `rates`.
    pub value: f64,
    /// Certified bound on how far `value` is below the optimum; zero for
    /// the independent-input search, which only claims a lower bound.
    pub gap: f64,
    pub rates: (f64, f64),
    pub argmax: InputLaw,
}

struct Slices {
    /// Per `x2`: rows `x1`, columns `y2`.
    k2: Vec<Kernel>,
    /// Per `x1`: rows `x2`, columns `y1`.
    k1: Vec<Kernel>,
}

impl Slices {
    fn new(ch: &TwoWayChannel) -> Self {
        Self { k2: ch.state_kernels(Direction::To2), k1: ch.state_kernels(Direction::To1) }
    }

    fn rates(&self, p1: &[f64], p2: &[f64]) -> (f64, f64) {
        let r1 = p2.iter().zip(&self.k2).filter(|(w, _)| **w > 0.0).map(|(w, k)| w * mi(p1, k)).sum();
        let r2 = p1.iter().zip(&self.k1).filter(|(w, _)| **w > 0.0).map(|(w, k)| w * mi(p2, k)).sum();
        (r1, r2)
    }
}

/// Best `P` for user `a` against a fixed law `q` of user `b`, where `own[b]`
/// carries `a`'s input to `b`'s output and `cross[a]` carries `q` back.
///
/// The objective `λ Σ q(s) 𝓘(P, own_s) + (1−λ) Σ P(a) 𝓘(q, cross_a)` is
/// `λ 𝓘(P, K')` plus a linear term, with `K'` the kernel to `(s, y)`.
fn best_response(
    own: &[Kernel],
    cross: &[Kernel],
    q: &[f64],
    lambda: f64,
    init: Option<&[f64]>,
    ba: BaOptions,
) -> Vec<f64> {
    let n = own[0].n_in();
    let cost: Vec<f64> = cross.iter().map(|k| mi(q, k)).collect();
    if lambda <= 0.0 {
        let best = (0..n).max_by(|&a, &b| cost[a].total_cmp(&cost[b])).expect("nonempty alphabet");
        let mut p = vec![0.0; n];
        p[best] = 1.0;
        return p;
    }
    let ny = own[0].n_out();
    let mut flat = Vec::with_capacity(n * own.len() * ny);
    for x in 0..n {
        for (s, k) in own.iter().enumerate() {
            flat.extend(k.row(x).iter().map(|v| q[s] * v));
        }
    }
    let kp = Kernel::from_flat(n, own.len() * ny, flat).expect("mixture of stochastic rows");
    let mu = (1.0 - lambda) / lambda;
    // The objective scales with 1 + μ; so does its attainable accuracy.
    let ba = BaOptions { tol: ba.tol * (1.0 + mu), ..ba };
    maximize_with_cost(&kp, &cost, mu, init, ba, |_, _| {}).p
}

const GRID_BA: BaOptions = BaOptions { tol: 1e-9, max_iter: 20_000 };
const REFINE_BA: BaOptions = BaOptions { tol: 1e-12, max_iter: 100_000 };

fn objective(l: f64, r: (f64, f64)) -> f64 {
    l * r.0 + (1.0 - l) * r.1
}

/// Independent-input support with `|X2| ≤ |X1|`: grid over `P2`, exact
/// best response for `P1`, then alternating refinement of the best points.
fn inner_oriented(ch: &TwoWayChannel, l: f64, opts: &RegionOptions) -> (Vec<f64>, Vec<f64>, (f64, f64)) {
    let s = Slices::new(ch);
    let res = affordable_resolution(ch.nx2(), opts.grid, opts.max_grid_points as u128);
    let mut scored: Vec<(f64, Vec<f64>, Vec<f64>)> = grid(ch.nx2(), res)
        .into_iter()
        .map(|p2| {
            let p1 = best_response(&s.k2, &s.k1, &p2, l, None, GRID_BA);
            let v = objective(l, s.rates(&p1, &p2));
            (v, p1, p2)
        })
        .collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best: Option<(f64, Vec<f64>, Vec<f64>)> = None;
    for (_, mut p1, mut p2) in scored.into_iter().take(opts.restarts.max(1)) {
        let mut v = objective(l, s.rates(&p1, &p2));
        for _ in 0..200 {
            let n2 = best_response(&s.k1, &s.k2, &p1, 1.0 - l, Some(&p2), REFINE_BA);
            let n1 = best_response(&s.k2, &s.k1, &n2, l, Some(&p1), REFINE_BA);
            let nv = objective(l, s.rates(&n1, &n2));
            if nv <= v + 1e-13 {
                if nv > v {
                    (p1, p2, v) = (n1, n2, nv);
                }
                break;
            }
            (p1, p2, v) = (n1, n2, nv);
        }
        if best.as_ref().is_none_or(|b| v > b.0) {
            best = Some((v, p1, p2));
        }
    }
    let (_, p1, p2) = best.expect("at least one grid point");
    let r = s.rates(&p1, &p2);
    (p1, p2, r)
}

fn check_lambda(l: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&l) {
        return Err(Error::OutOfRange(format!("direction {l}")));
    }
    Ok(())
}

/// Largest `λR1 + (1−λ)R2` found over independent inputs.
pub fn inner_support(ch: &TwoWayChannel, lambda: f64, opts: &RegionOptions) -> Result<SupportSample> {
    check_lambda(lambda)?;
    let (p1, p2, rates) = if ch.nx2() <= ch.nx1() {
        inner_oriented(ch, lambda, opts)
    } else {
        let (q2, q1, r) = inner_oriented(&ch.swap_users(), 1.0 - lambda, opts);
        (q1, q2, (r.1, r.0))
    };
    Ok(SupportSample { lambda, value: objective(lambda, rates), gap: 0.0, rates, argmax: InputLaw::Product { p1, p2 } })
}

/// Maximum of `λI(X1;Y2|X2) + (1−λ)I(X2;Y1|X1)` over joint inputs.
///
/// `start` seeds one restart, typically the independent-input argmax; the
/// result is never below the value of `start`.
pub fn outer_support(
    ch: &TwoWayChannel,
    lambda: f64,
    start: Option<&SupportSample>,
    opts: &RegionOptions,
) -> Result<SupportSample> {
    check_lambda(lambda)?;
    let (n1, n2) = (ch.nx1(), ch.nx2());
    let n = n1 * n2;
    let ky2 = ch.pair_kernel(Direction::To2);
    let ky1 = ch.pair_kernel(Direction::To1);
    let space = TupleSpace::new(vec![n1, n2]);
    let (by_x2, by_x1, id) = (space.grouping(&[1]), space.grouping(&[0]), Grouping::identity(n));
    let f = |p: &[f64], g: &mut [f64]| {
        let a = cond_mi_grad(p, &ky2, &by_x2, &id, lambda, g);
        let b = cond_mi_grad(p, &ky1, &by_x1, &id, 1.0 - lambda, g);
        lambda * a + (1.0 - lambda) * b
    };
    let mut starts = vec![vec![1.0 / n as f64; n]];
    let hint = start.map(|s| match &s.argmax {
        InputLaw::Product { p1, p2 } => p1.iter().flat_map(|a| p2.iter().map(move |b| a * b)).collect::<Vec<f64>>(),
        InputLaw::Joint { p } => p.clone(),
    });
    starts.extend(hint.iter().cloned());
    let mut rng = stream_rng(opts.seed, lambda.to_bits());
    starts.extend((0..opts.restarts).map(|_| sample_uniform_simplex(&mut rng, n)));
    let runs: Vec<_> = starts.iter().map(|x0| maximize_mirror(f, x0, &[n], AscentOptions::default())).collect();
    let best = runs.iter().max_by(|a, b| a.value.total_cmp(&b.value)).expect("at least one start");
    let lo = runs.iter().map(|r| r.value).fold(f64::INFINITY, f64::min);
    if best.gap > opts.agreement && best.value - lo > opts.agreement {
        return Err(Error::NonConvergence { iterations: best.iterations, gap: best.gap });
    }
    let rates_of = |p: &[f64]| (cond_mi(p, &ky2, &by_x2, &id), cond_mi(p, &ky1, &by_x1, &id));
    let mut p = best.x.clone();
    let mut rates = rates_of(&p);
    if let (Some(h), Some(s)) = (hint, start) {
        if s.value > objective(lambda, rates) {
            p = h;
            rates = rates_of(&p);
        }
    }
    Ok(SupportSample { lambda, value: objective(lambda, rates), gap: best.gap, rates, argmax: InputLaw::Joint { p } })
}

/// Support value of the chosen bound in direction `λ`.
pub fn support_value(ch: &TwoWayChannel, lambda: f64, mode: Mode, opts: &RegionOptions) -> Result<SupportSample> {
    let inner = inner_support(ch, lambda, opts)?;
    match mode {
        Mode::Inner => Ok(inner),
        Mode::Outer => outer_support(ch, lambda, Some(&inner), opts),
    }
}

/// `n` equispaced directions from `λ = 0` to `λ = 1`.
pub fn directions(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("{n} directions")));
    }
    Ok((0..n).map(|k| k as f64 / (n - 1) as f64).collect())
}

/// Support samples on `n_directions` equispaced directions, in order.
pub fn support_samples(
    ch: &TwoWayChannel,
    mode: Mode,
    n_directions: usize,
    opts: &RegionOptions,
) -> Result<Vec<SupportSample>> {
    let dirs = directions(n_directions)?;
    opts.exec.map(dirs.len(), |k| support_value(ch, dirs[k], mode, opts)).into_iter().collect()
}

/// Region described by a set of support samples.
///
/// Inner samples contribute their achieved rate pairs, so the result is
/// the convex hull of achievable points. Outer samples contribute the
/// half-planes `λR1 + (1−λ)R2 ≤ value + gap`.
pub fn region_from_samples(mode: Mode, samples: &[SupportSample]) -> RateRegion2D {
    match mode {
        Mode::Inner => RateRegion2D::from_points(&samples.iter().map(|s| s.rates).collect::<Vec<_>>()),
        Mode::Outer => {
            RateRegion2D::from_halfplanes(&samples.iter().map(|s| (s.lambda, s.value + s.gap)).collect::<Vec<_>>())
        }
    }
}

/// Inner or outer region from `n_directions` support evaluations.
///
/// The inner region is contained in the true independent-input region.
/// The outer region contains the true correlated-input region up to the
/// slack of sampling its support function at finitely many directions.
pub fn compute_region(
    ch: &TwoWayChannel,
    mode: Mode,
    n_directions: usize,
    opts: &RegionOptions,
) -> Result<RateRegion2D> {
    Ok(region_from_samples(mode, &support_samples(ch, mode, n_directions, opts)?))
}
