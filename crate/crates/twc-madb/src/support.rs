use serde::{Deserialize, Serialize};
use twc_core::simplex::{golden_max, maximize_mirror, sample_uniform_simplex, stream_rng, AscentOptions};
use twc_core::{Error, Exec, Result};

use crate::bounds::{x3_marginal, Evaluator, MadbInput, QuadBounds};
use crate::channel::MadbChannel;

/// Which bound a support value belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MadbMode {
    /// Independent `X1`, `X2`: every reported value is achieved.
    Inner,
    /// Arbitrary joint inputs.
    Outer,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MadbOptions {
    /// Auxiliary alphabet size; `None` means `q + 1`.
    pub nv: Option<usize>,
    /// Random starts on top of the structured ones.
    pub restarts: usize,
    pub seed: u64,
    /// Largest first-order optimality gap accepted at the best start.
    pub agreement: f64,
    pub exec: Exec,
}

impl Default for MadbOptions {
    fn default() -> Self {
        Self { nv: None, restarts: 8, seed: 42, agreement: 1e-6, exec: Exec::Parallel }
    }
}

/// Support value of one bound in one direction `(w13, w23, w31, w32)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MadbSupport {
    pub weights: [f64; 4],
    pub mode: MadbMode,
    pub value: f64,
    /// Bounds at the returned input law.
    pub bounds: QuadBounds,
    pub argmax: MadbInput,
    /// Multiplier splitting the sum-rate constraint in the outer search.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub theta: Option<f64>,
}

/// Largest modulus a support search accepts.
pub const MAX_SUPPORT_Q: usize = 2;

const ASCENT: AscentOptions = AscentOptions { max_iter: 20_000, tol: 1e-8 };
const THETA_TOL: f64 = 1e-7;

fn direction_key(w: &[f64; 4]) -> u64 {
    w.iter().fold(0u64, |h, x| h.rotate_left(17) ^ x.to_bits())
}

/// Weights on `(b13, b23, b_sum)` whose value at `θ = 0` and `θ = 1` are
/// the two pieces of the sum-rate-limited support.
fn ma_coeffs(w: [f64; 4], theta: f64) -> [f64; 3] {
    if w[0] >= w[1] {
        [w[0] - (1.0 - theta) * w[1], theta * w[1], (1.0 - theta) * w[1]]
    } else {
        [theta * w[0], w[1] - (1.0 - theta) * w[0], (1.0 - theta) * w[0]]
    }
}

struct Search<'a> {
    ev: Evaluator,
    w: [f64; 4],
    opts: &'a MadbOptions,
}

impl Search<'_> {
    fn q(&self) -> usize {
        self.ev.q
    }

    fn nv(&self) -> usize {
        self.ev.nv
    }

    fn product_value(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        let q = self.q();
        let (p1, rest) = x.split_at(q);
        let (p2, pd) = rest.split_at(q);
        let p3 = x3_marginal(pd, q);
        let pm: Vec<f64> = (0..q * q * q).map(|r| p1[r / (q * q)] * p2[(r / q) % q] * p3[r % q]).collect();
        let mut gm = vec![0.0; pm.len()];
        let mut v = self.ev.ma_grad(&pm, ma_coeffs(self.w, 0.0), &mut gm);
        v += self.ev.db_grad(pd, [self.w[2], self.w[3]], &mut grad[2 * q..]);
        let mut g3 = vec![0.0; q];
        for (r, &g) in gm.iter().enumerate() {
            let (a, b, c) = (r / (q * q), (r / q) % q, r % q);
            grad[a] += g * p2[b] * p3[c];
            grad[q + b] += g * p1[a] * p3[c];
            g3[c] += g * p1[a] * p2[b];
        }
        for (i, g) in grad[2 * q..].iter_mut().enumerate() {
            *g += g3[i % q];
        }
        v
    }

    fn joint_value(&self, x: &[f64], theta: f64, grad: &mut [f64]) -> f64 {
        let (q, nv) = (self.q(), self.nv());
        let (pm, pd) = MadbInput::Joint { nv, p: x.to_vec() }.marginals(q);
        let mut gm = vec![0.0; pm.len()];
        let mut gd = vec![0.0; pd.len()];
        let v = self.ev.ma_grad(&pm, ma_coeffs(self.w, theta), &mut gm)
            + self.ev.db_grad(&pd, [self.w[2], self.w[3]], &mut gd);
        for (i, g) in grad.iter_mut().enumerate() {
            let (r, a) = (i / nv, i % nv);
            *g += gm[r] + gd[a * q + r % q];
        }
        v
    }

    fn product_starts(&self) -> Vec<Vec<f64>> {
        let (q, nv) = (self.q(), self.nv());
        let u = vec![1.0 / q as f64; q];
        let mut starts = Vec::new();
        let with = |pd: Vec<f64>| [u.clone(), u.clone(), pd].concat();
        starts.push(with(vec![1.0 / (nv * q) as f64; nv * q]));
        // V equal to X3, and V carrying X3 up to one shared symbol.
        let diag: Vec<f64> = (0..nv * q).map(|i| if i / q == i % q { 1.0 / q as f64 } else { 0.0 }).collect();
        starts.push(with(diag));
        let coarse: Vec<f64> =
            (0..nv * q).map(|i| if i / q == (i % q).min(1) { 1.0 / q as f64 } else { 0.0 }).collect();
        starts.push(with(coarse));
        let mut rng = stream_rng(self.opts.seed, direction_key(&self.w));
        for _ in 0..self.opts.restarts {
            let mut x = sample_uniform_simplex(&mut rng, q);
            x.extend(sample_uniform_simplex(&mut rng, q));
            x.extend(sample_uniform_simplex(&mut rng, nv * q));
            starts.push(x);
        }
        starts
    }

    fn inner(&self) -> Result<(Vec<f64>, f64)> {
        let q = self.q();
        let blocks = [q, q, self.nv() * q];
        let starts = self.product_starts();
        let runs = self
            .opts
            .exec
            .map(starts.len(), |i| maximize_mirror(|x, g| self.product_value(x, g), &starts[i], &blocks, ASCENT));
        let best = runs.into_iter().reduce(|a, b| if b.value > a.value { b } else { a }).expect("at least one start");
        if best.gap > self.opts.agreement {
            return Err(Error::NonConvergence { iterations: ASCENT.max_iter, gap: best.gap });
        }
        Ok((best.x, best.value))
    }

    fn embed(&self, product: &[f64]) -> Vec<f64> {
        let (q, nv) = (self.q(), self.nv());
        let (p1, rest) = product.split_at(q);
        let (p2, pd) = rest.split_at(q);
        (0..q * q * q * nv)
            .map(|i| {
                let (r, a) = (i / nv, i % nv);
                p1[r / (q * q)] * p2[(r / q) % q] * pd[a * q + r % q]
            })
            .collect()
    }

    fn joint_max(&self, theta: f64, seeds: &[Vec<f64>]) -> Result<(Vec<f64>, f64)> {
        let n = self.q().pow(3) * self.nv();
        let mut starts = seeds.to_vec();
        starts.push(vec![1.0 / n as f64; n]);
        let mut rng = stream_rng(self.opts.seed, direction_key(&self.w) ^ theta.to_bits());
        for _ in 0..self.opts.restarts {
            starts.push(sample_uniform_simplex(&mut rng, n));
        }
        self.best_of(theta, &starts)
    }

    fn best_of(&self, theta: f64, starts: &[Vec<f64>]) -> Result<(Vec<f64>, f64)> {
        let n = starts[0].len();
        let runs = self
            .opts
            .exec
            .map(starts.len(), |i| maximize_mirror(|x, g| self.joint_value(x, theta, g), &starts[i], &[n], ASCENT));
        let best = runs.into_iter().reduce(|a, b| if b.value > a.value { b } else { a }).expect("at least one start");
        if best.gap > self.opts.agreement {
            return Err(Error::NonConvergence { iterations: ASCENT.max_iter, gap: best.gap });
        }
        Ok((best.x, best.value))
    }

    /// `min_θ max_P` of the split objective. Each inner maximum is at least
    /// the value at the embedded product optimum, so the result never falls
    /// below the inner support.
    fn outer(&self, product: &[f64]) -> Result<(Vec<f64>, f64, f64)> {
        let seed = vec![self.embed(product)];
        if self.w[0].min(self.w[1]) == 0.0 {
            let (x, v) = self.joint_max(0.0, &seed)?;
            return Ok((x, v, 0.0));
        }
        let piece_gap = |x: &[f64]| {
            let b = self.bounds_of(x);
            let f1 = self.w[0] * b.b13 + self.w[1] * b.b23;
            let c = ma_coeffs(self.w, 0.0);
            let f2 = c[0] * b.b13 + c[1] * b.b23 + c[2] * b.b_sum;
            f1 - f2
        };
        // The split is exact when an end point's maximizer already has the
        // other piece on top.
        let (x0, v0) = self.joint_max(0.0, &seed)?;
        if piece_gap(&x0) >= 0.0 {
            return Ok((x0, v0, 0.0));
        }
        let (x1, v1) = self.joint_max(1.0, &seed)?;
        if piece_gap(&x1) <= 0.0 {
            return Ok((x1, v1, 1.0));
        }
        // Locate θ with warm starts only; the full multistart at the end
        // makes the reported value a maximum at that θ.
        let mut failure = None;
        let mut last = x0.clone();
        let (theta, _) = golden_max(
            |t| {
                let starts = [seed[0].clone(), x0.clone(), x1.clone(), last.clone()];
                match self.best_of(t, &starts) {
                    Ok((x, v)) => {
                        last = x;
                        -v
                    }
                    Err(e) => {
                        failure = Some(e);
                        f64::NEG_INFINITY
                    }
                }
            },
            0.0,
            1.0,
            THETA_TOL,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        let (x, v) = self.joint_max(theta, &[seed[0].clone(), last])?;
        let best = [(x0, v0, 0.0), (x1, v1, 1.0), (x, v, theta)]
            .into_iter()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("three candidates");
        Ok(best)
    }

    fn bounds_of(&self, x: &[f64]) -> QuadBounds {
        let (pm, pd) = MadbInput::Joint { nv: self.nv(), p: x.to_vec() }.marginals(self.q());
        let [b13, b23, b_sum] = self.ev.ma_bounds(&pm);
        let [b31, b32] = self.ev.db_bounds(&pd);
        QuadBounds { b13, b23, b_sum, b31, b32 }
    }

    fn product_input(&self, x: &[f64]) -> MadbInput {
        let q = self.q();
        MadbInput::Product {
            p_x1: x[..q].to_vec(),
            p_x2: x[q..2 * q].to_vec(),
            p_vx3: x[2 * q..].chunks(q).map(<[f64]>::to_vec).collect(),
        }
    }
}

fn validate(ch: &MadbChannel, w: &[f64; 4], opts: &MadbOptions) -> Result<usize> {
    if let Some(x) = w.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(Error::ParameterOutOfRange(format!("direction weight {x}")));
    }
    if ch.q() > MAX_SUPPORT_Q {
        return Err(Error::UnsupportedScale(format!(
            "support search over q = {} inputs; only q ≤ {MAX_SUPPORT_Q} is supported",
            ch.q()
        )));
    }
    let nv = opts.nv.unwrap_or(ch.q() + 1);
    if nv == 0 || nv > ch.q() + 1 {
        return Err(Error::ParameterOutOfRange(format!("auxiliary alphabet size {nv}")));
    }
    Ok(nv)
}

/// Inner and outer support values in one direction; the outer search is
/// seeded with the inner optimum.
pub fn madb_support_pair(ch: &MadbChannel, w: [f64; 4], opts: &MadbOptions) -> Result<(MadbSupport, MadbSupport)> {
    let nv = validate(ch, &w, opts)?;
    let s = Search { ev: Evaluator::new(ch, nv), w, opts };
    let (xp, _) = s.inner()?;
    let input = s.product_input(&xp);
    let bounds = crate::bounds::rate_quadruple_bounds(&input, ch)?;
    let inner =
        MadbSupport { weights: w, mode: MadbMode::Inner, value: bounds.support(w), bounds, argmax: input, theta: None };
    let (xj, v, theta) = s.outer(&xp)?;
    let outer = MadbSupport {
        weights: w,
        mode: MadbMode::Outer,
        value: v,
        bounds: s.bounds_of(&xj),
        argmax: MadbInput::Joint { nv, p: xj },
        theta: Some(theta),
    };
    Ok((inner, outer))
}

/// Support value of one bound in direction `w = (w13, w23, w31, w32)`.
pub fn madb_support(ch: &MadbChannel, w: [f64; 4], mode: MadbMode, opts: &MadbOptions) -> Result<MadbSupport> {
    let (inner, outer) = madb_support_pair(ch, w, opts)?;
    Ok(match mode {
        MadbMode::Inner => inner,
        MadbMode::Outer => outer,
    })
}

/// Inner and outer support values for every direction, in order.
pub fn madb_sweep(
    ch: &MadbChannel,
    directions: &[[f64; 4]],
    opts: &MadbOptions,
) -> Result<Vec<(MadbSupport, MadbSupport)>> {
    opts.exec.map(directions.len(), |i| madb_support_pair(ch, directions[i], opts)).into_iter().collect()
}
