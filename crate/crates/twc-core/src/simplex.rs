//! Probability simplex utilities: projection, sampling, grids and
//! projected gradient ascent over products of simplices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

/// Euclidean projection onto the probability simplex, in place.
pub fn project(v: &mut [f64]) {
    let mut u: Vec<f64> = v.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        cum += ui;
        let t = (cum - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            theta = t;
        }
    }
    v.iter_mut().for_each(|x| *x = (*x - theta).max(0.0));
    let s: f64 = v.iter().sum();
    if s > 0.0 {
        v.iter_mut().for_each(|x| *x /= s);
    }
}

/// Project each consecutive block of `x` onto its own simplex.
pub fn project_blocks(x: &mut [f64], blocks: &[usize]) {
    let mut off = 0;
    for &b in blocks {
        project(&mut x[off..off + b]);
        off += b;
    }
}

/// Independent random stream number `stream` derived from `seed`.
///
/// Trial `i` of a randomized check always draws from stream `i`, so the
/// outcome does not depend on how trials are scheduled.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A Dirichlet(1, …, 1) sample: normalized unit exponentials.
pub fn sample_uniform_simplex<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    v
}

/// All points of the simplex in `n` dimensions whose coordinates are
/// multiples of `1/g`, in lexicographic order of the integer compositions.
pub fn grid(n: usize, g: usize) -> Vec<Vec<f64>> {
    fn rec(n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(n - 1, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, g, &mut Vec::with_capacity(n), &mut out);
    out.into_iter().map(|c| c.into_iter().map(|k| k as f64 / g as f64).collect()).collect()
}

/// Number of points in [`grid`]`(n, g)`.
pub fn grid_len(n: usize, g: usize) -> u128 {
    // C(g + n − 1, n − 1)
    let (a, b) = (g as u128 + n as u128 - 1, n as u128 - 1);
    let mut r: u128 = 1;
    for i in 0..b {
        r = r * (a - i) / (i + 1);
    }
    r
}

/// Largest resolution whose grid has at most `max_points` points, capped at `g`.
pub fn affordable_resolution(n: usize, g: usize, max_points: u128) -> usize {
    let mut r = g.max(1);
    while r > 1 && grid_len(n, r) > max_points {
        r -= 1;
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AscentOptions {
    pub max_iter: usize,
    /// Stop once the Frank–Wolfe gap is at most this.
    pub tol: f64,
}

impl Default for AscentOptions {
    fn default() -> Self {
        Self { max_iter: 5000, tol: 1e-10 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AscentResult {
    pub x: Vec<f64>,
    pub value: f64,
    /// Frank–Wolfe gap at `x`; for a concave objective the optimum is at
    /// most `value + gap`.
    pub gap: f64,
    pub iterations: usize,
}

fn fw_gap(x: &[f64], g: &[f64], blocks: &[usize]) -> f64 {
    let mut off = 0;
    let mut gap = 0.0;
    for &b in blocks {
        let xs = &x[off..off + b];
        let gs = &g[off..off + b];
        let best = gs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let cur: f64 = xs.iter().zip(gs).map(|(a, b)| a * b).sum();
        gap += (best - cur).max(0.0);
        off += b;
    }
    gap
}

/// Projected gradient ascent with Armijo backtracking over a product of
/// simplices. `f(x, grad)` returns the objective and writes its gradient
/// into the zeroed `grad`.
pub fn maximize<F>(mut f: F, x0: &[f64], blocks: &[usize], opts: AscentOptions) -> AscentResult
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
{
    let n = x0.len();
    let mut x = x0.to_vec();
    project_blocks(&mut x, blocks);
    let mut g = vec![0.0; n];
    let mut v = f(&x, &mut g);
    let mut step = 1.0;
    let mut it = 0;
    let mut y = vec![0.0; n];
    let mut gy = vec![0.0; n];
    loop {
        let gap = fw_gap(&x, &g, blocks);
        if gap <= opts.tol || it >= opts.max_iter {
            return AscentResult { x, value: v, gap, iterations: it };
        }
        let mut accepted = false;
        while step > 1e-16 {
            for i in 0..n {
                y[i] = x[i] + step * g[i];
            }
            project_blocks(&mut y, blocks);
            let lin: f64 = (0..n).map(|i| g[i] * (y[i] - x[i])).sum();
            if lin <= 1e-300 {
                step *= 0.5;
                continue;
            }
            gy.iter_mut().for_each(|e| *e = 0.0);
            let vy = f(&y, &mut gy);
            if vy >= v + 1e-4 * lin {
                std::mem::swap(&mut x, &mut y);
                std::mem::swap(&mut g, &mut gy);
                v = vy;
                accepted = true;
                step *= 2.0;
                break;
            }
            step *= 0.5;
        }
        it += 1;
        if !accepted {
            let gap = fw_gap(&x, &g, blocks);
            return AscentResult { x, value: v, gap, iterations: it };
        }
    }
}

/// Smallest coordinate kept by [`maximize_mirror`].
const MIRROR_FLOOR: f64 = 1e-250;

fn mirror_step(x: &[f64], g: &[f64], step: f64, blocks: &[usize], y: &mut [f64]) {
    let mut off = 0;
    for &b in blocks {
        let gs = &g[off..off + b];
        let m = gs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut s = 0.0;
        for i in off..off + b {
            y[i] = x[i] * (step * (g[i] - m)).exp();
            s += y[i];
        }
        for v in &mut y[off..off + b] {
            *v = (*v / s).max(MIRROR_FLOOR);
        }
        off += b;
    }
}

/// `⟨g, y − x⟩` with `g` centered per block. Both points lie on the same
/// simplices, so centering changes nothing but the rounding error.
fn centered_dot(g: &[f64], x: &[f64], y: &[f64], blocks: &[usize]) -> f64 {
    let mut off = 0;
    let mut total = 0.0;
    for &b in blocks {
        let r = off..off + b;
        let c = g[r.clone()].iter().sum::<f64>() / b as f64;
        total += r.map(|i| (g[i] - c) * (y[i] - x[i])).sum::<f64>();
        off += b;
    }
    total
}

/// Exponentiated-gradient ascent with Armijo backtracking over a product of
/// simplices, for concave `f`. Iterates stay strictly positive, so objectives that are only
/// differentiable in the interior get exact gradients and the returned
/// Frank–Wolfe gap bounds the distance to the optimum of a concave `f`.
pub fn maximize_mirror<F>(mut f: F, x0: &[f64], blocks: &[usize], opts: AscentOptions) -> AscentResult
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
{
    let n = x0.len();
    let mut x: Vec<f64> = x0.iter().map(|v| v.max(0.0) + 1e-9).collect();
    let mut off = 0;
    for &b in blocks {
        let s: f64 = x[off..off + b].iter().sum();
        x[off..off + b].iter_mut().for_each(|v| *v /= s);
        off += b;
    }
    let mut g = vec![0.0; n];
    let mut v = f(&x, &mut g);
    let mut step = 1.0;
    let mut it = 0;
    let mut y = vec![0.0; n];
    let mut gy = vec![0.0; n];
    loop {
        let gap = fw_gap(&x, &g, blocks);
        if gap <= opts.tol || it >= opts.max_iter {
            return AscentResult { x, value: v, gap, iterations: it };
        }
        let mut accepted = false;
        while step > 1e-16 {
            mirror_step(&x, &g, step, blocks, &mut y);
            let lin = centered_dot(&g, &x, &y, blocks);
            if lin <= 1e-300 {
                step *= 0.5;
                continue;
            }
            gy.iter_mut().for_each(|e| *e = 0.0);
            let vy = f(&y, &mut gy);
            // Near the optimum value differences drown in rounding; a
            // nonnegative slope at `y` still proves ascent for concave `f`.
            let slope = centered_dot(&gy, &x, &y, blocks);
            let rounding = 8.0 * f64::EPSILON * v.abs().max(1.0);
            if vy >= v + 1e-4 * lin || (slope >= 0.0 && vy >= v - rounding) {
                std::mem::swap(&mut x, &mut y);
                std::mem::swap(&mut g, &mut gy);
                v = v.max(vy);
                accepted = true;
                step *= 2.0;
                break;
            }
            step *= 0.5;
        }
        it += 1;
        if !accepted {
            let gap = fw_gap(&x, &g, blocks);
            return AscentResult { x, value: v, gap, iterations: it };
        }
    }
}

/// Golden-section search for the maximum of a unimodal function on `[lo, hi]`.
pub fn golden_max(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let (fa, fb) = (f(a), f(b));
    [(a, fa), (b, fb), (c, fc), (d, fd)].into_iter().fold((a, f64::NEG_INFINITY), |best, cand| {
        if cand.1 > best.1 {
            cand
        } else {
            best
        }
    })
}
