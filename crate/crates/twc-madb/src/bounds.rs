use serde::{Deserialize, Serialize};
use twc_core::cmi::{cond_mi, cond_mi_grad, Grouping, TupleSpace};
use twc_core::{Error, Kernel, Result, MATRIX_TOL};

use crate::channel::MadbChannel;

/// Input law of the three users together with the auxiliary `V`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MadbInput {
    /// Independent `X1`, `X2` and a joint law `p_vx3[v][x3]` of `(V, X3)`.
    Product { p_x1: Vec<f64>, p_x2: Vec<f64>, p_vx3: Vec<Vec<f64>> },
    /// Joint law of `(X1, X2, X3, V)`, index `((x1·q + x2)·q + x3)·nv + v`.
    Joint { nv: usize, p: Vec<f64> },
}

/// The five rate constraints of one input law, in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadBounds {
    /// `I(X1; Y3 | X2, X3)`.
    pub b13: f64,
    /// `I(X2; Y3 | X1, X3)`.
    pub b23: f64,
    /// `I(X1, X2; Y3 | X3)`.
    pub b_sum: f64,
    /// `I(X3; X3 ⊕ Z1 | V)`.
    pub b31: f64,
    /// `I(V; X3 ⊕ Z1 ⊕ Z2)`.
    pub b32: f64,
}

impl QuadBounds {
    /// Largest `w · (R13, R23, R31, R32)` over the rate polytope of these
    /// bounds; weights must be nonnegative.
    pub fn support(&self, w: [f64; 4]) -> f64 {
        let (first, second, b_first, b_second) =
            if w[0] >= w[1] { (w[0], w[1], self.b13, self.b23) } else { (w[1], w[0], self.b23, self.b13) };
        let r_first = b_first.min(self.b_sum).max(0.0);
        let r_second = b_second.min(self.b_sum - r_first).max(0.0);
        first * r_first + second * r_second + w[2] * self.b31.max(0.0) + w[3] * self.b32.max(0.0)
    }
}

fn check_dist(name: &str, p: &[f64], n: usize) -> Result<()> {
    if p.len() != n {
        return Err(Error::DimensionMismatch(format!("{name} has {} entries, expected {n}", p.len())));
    }
    if let Some(i) = p.iter().position(|&v| !(v >= 0.0)) {
        return Err(Error::NegativeEntry { row: 0, col: i, value: p[i] });
    }
    let s: f64 = p.iter().sum();
    if (s - 1.0).abs() > MATRIX_TOL {
        return Err(Error::RowSumViolation { row: 0, sum: s });
    }
    Ok(())
}

impl MadbInput {
    /// Size of the auxiliary alphabet.
    pub fn nv(&self) -> usize {
        match self {
            Self::Product { p_vx3, .. } => p_vx3.len(),
            Self::Joint { nv, .. } => *nv,
        }
    }

    pub fn validate(&self, q: usize) -> Result<()> {
        let nv = self.nv();
        if nv == 0 || nv > q + 1 {
            return Err(Error::DimensionMismatch(format!("auxiliary alphabet of size {nv} for q = {q}")));
        }
        match self {
            Self::Product { p_x1, p_x2, p_vx3 } => {
                check_dist("p_x1", p_x1, q)?;
                check_dist("p_x2", p_x2, q)?;
                if let Some(r) = p_vx3.iter().find(|r| r.len() != q) {
                    return Err(Error::DimensionMismatch(format!("p_vx3 row of length {}", r.len())));
                }
                check_dist("p_vx3", &p_vx3.concat(), nv * q)
            }
            Self::Joint { nv, p } => check_dist("p", p, q * q * q * nv),
        }
    }

    /// `P(x1, x2, x3)` and `P(v, x3)` (index `v·q + x3`).
    pub fn marginals(&self, q: usize) -> (Vec<f64>, Vec<f64>) {
        match self {
            Self::Product { p_x1, p_x2, p_vx3 } => {
                let pd = p_vx3.concat();
                let p3 = x3_marginal(&pd, q);
                let pm = (0..q * q * q).map(|r| p_x1[r / (q * q)] * p_x2[(r / q) % q] * p3[r % q]).collect();
                (pm, pd)
            }
            Self::Joint { nv, p } => {
                let nv = *nv;
                let mut pm = vec![0.0; q * q * q];
                let mut pd = vec![0.0; nv * q];
                for (i, &v) in p.iter().enumerate() {
                    let (r, a) = (i / nv, i % nv);
                    pm[r] += v;
                    pd[a * q + r % q] += v;
                }
                (pm, pd)
            }
        }
    }
}

pub(crate) fn x3_marginal(pd: &[f64], q: usize) -> Vec<f64> {
    let mut p3 = vec![0.0; q];
    for (i, &v) in pd.iter().enumerate() {
        p3[i % q] += v;
    }
    p3
}

/// The five bounds for one input law.
pub fn rate_quadruple_bounds(input: &MadbInput, channel: &MadbChannel) -> Result<QuadBounds> {
    let q = channel.q();
    input.validate(q)?;
    let ev = Evaluator::new(channel, input.nv());
    let (pm, pd) = input.marginals(q);
    let [b13, b23, b_sum] = ev.ma_bounds(&pm);
    let [b31, b32] = ev.db_bounds(&pd);
    Ok(QuadBounds { b13, b23, b_sum, b31, b32 })
}

/// Information quantities of both halves with their gradients.
pub(crate) struct Evaluator {
    pub q: usize,
    pub nv: usize,
    ma: Kernel,
    db1: Kernel,
    db2: Kernel,
    given_x23: Grouping,
    given_x13: Grouping,
    given_x3: Grouping,
    all_x: Grouping,
    by_v: Grouping,
    all_vx: Grouping,
    none_vx: Grouping,
}

impl Evaluator {
    pub fn new(ch: &MadbChannel, nv: usize) -> Self {
        let q = ch.q();
        let xs = TupleSpace::new(vec![q, q, q]);
        let vs = TupleSpace::new(vec![nv, q]);
        let lift = |k: Kernel| {
            Kernel::new((0..nv * q).map(|i| k.row(i % q).to_vec()).collect()).expect("lifted rows are stochastic")
        };
        Self {
            q,
            nv,
            ma: ch.kernel().clone(),
            db1: lift(ch.db_kernel_1()),
            db2: lift(ch.db_kernel_2()),
            given_x23: xs.grouping(&[1, 2]),
            given_x13: xs.grouping(&[0, 2]),
            given_x3: xs.grouping(&[2]),
            all_x: Grouping::identity(xs.size()),
            by_v: vs.grouping(&[0]),
            all_vx: Grouping::identity(vs.size()),
            none_vx: Grouping::trivial(vs.size()),
        }
    }

    /// `[b13, b23, b_sum]` at `P(x1, x2, x3)`.
    pub fn ma_bounds(&self, pm: &[f64]) -> [f64; 3] {
        [
            cond_mi(pm, &self.ma, &self.given_x23, &self.all_x),
            cond_mi(pm, &self.ma, &self.given_x13, &self.all_x),
            cond_mi(pm, &self.ma, &self.given_x3, &self.all_x),
        ]
    }

    /// `[b31, b32]` at `P(v, x3)`.
    pub fn db_bounds(&self, pd: &[f64]) -> [f64; 2] {
        [cond_mi(pd, &self.db1, &self.by_v, &self.all_vx), cond_mi(pd, &self.db2, &self.none_vx, &self.by_v)]
    }

    /// Adds `∇ Σ c_i b_i` to `grad` and returns the weighted sum.
    pub fn ma_grad(&self, pm: &[f64], c: [f64; 3], grad: &mut [f64]) -> f64 {
        let mut v = 0.0;
        for (ci, given) in c.iter().zip([&self.given_x23, &self.given_x13, &self.given_x3]) {
            if *ci != 0.0 {
                v += ci * cond_mi_grad(pm, &self.ma, given, &self.all_x, *ci, grad);
            }
        }
        v
    }

    /// Adds `∇ (c31 b31 + c32 b32)` to `grad` and returns the weighted sum.
    pub fn db_grad(&self, pd: &[f64], c: [f64; 2], grad: &mut [f64]) -> f64 {
        let mut v = 0.0;
        if c[0] != 0.0 {
            v += c[0] * cond_mi_grad(pd, &self.db1, &self.by_v, &self.all_vx, c[0], grad);
        }
        if c[1] != 0.0 {
            v += c[1] * cond_mi_grad(pd, &self.db2, &self.none_vx, &self.by_v, c[1], grad);
        }
        v
    }
}
