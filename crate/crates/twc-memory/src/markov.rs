use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use twc_core::{entropy, Error, Kernel, Result};

/// Tolerance on `πT = π` for an accepted stationary law.
pub const STATIONARY_TOL: f64 = 1e-10;

/// Irreducible finite-state Markov chain with its unique stationary law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct MarkovNoise {
    t: Kernel,
    pi: Vec<f64>,
}

impl TryFrom<Vec<Vec<f64>>> for MarkovNoise {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(rows)
    }
}

impl From<MarkovNoise> for Vec<Vec<f64>> {
    fn from(m: MarkovNoise) -> Self {
        m.t.rows()
    }
}

impl MarkovNoise {
    /// Chain with transition rows `rows[s][s']`.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let t = Kernel::new(rows)?;
        let n = t.n_in();
        if t.n_out() != n {
            return Err(Error::DimensionMismatch(format!("transition matrix is {n}x{}", t.n_out())));
        }
        if !strongly_connected(&t) {
            return Err(Error::NotIrreducible);
        }
        let pi = stationary(&t)?;
        Ok(Self { t, pi })
    }

    /// Memoryless noise with marginal `r`; every symbol needs positive mass.
    pub fn iid(r: &[f64]) -> Result<Self> {
        Self::new(vec![r.to_vec(); r.len()])
    }

    /// Two-state chain that keeps its state with probability `stay`.
    pub fn binary_stay(stay: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&stay) {
            return Err(Error::ParameterOutOfRange(format!("stay probability {stay}")));
        }
        Self::new(vec![vec![stay, 1.0 - stay], vec![1.0 - stay, stay]])
    }

    pub fn states(&self) -> usize {
        self.pi.len()
    }

    pub fn transition(&self) -> &Kernel {
        &self.t
    }

    pub fn stationary(&self) -> &[f64] {
        &self.pi
    }

    /// `Σ_s π(s) H(T(s, ·))`.
    pub fn entropy_rate(&self) -> f64 {
        self.pi.iter().enumerate().map(|(s, &w)| w * entropy(self.t.row(s))).sum()
    }
}

/// Entropy rate of a stationary irreducible Markov chain.
pub fn entropy_rate(noise: &MarkovNoise) -> f64 {
    noise.entropy_rate()
}

fn reach(n: usize, edge: impl Fn(usize, usize) -> bool) -> usize {
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    let mut count = 1;
    while let Some(s) = queue.pop_front() {
        for u in 0..n {
            if !seen[u] && edge(s, u) {
                seen[u] = true;
                count += 1;
                queue.push_back(u);
            }
        }
    }
    count
}

fn strongly_connected(t: &Kernel) -> bool {
    let n = t.n_in();
    reach(n, |a, b| t.get(a, b) > 0.0) == n && reach(n, |a, b| t.get(b, a) > 0.0) == n
}

fn stationary(t: &Kernel) -> Result<Vec<f64>> {
    let n = t.n_in();
    let mut a = DMatrix::from_fn(n, n, |i, j| t.get(j, i) - if i == j { 1.0 } else { 0.0 });
    a.row_mut(n - 1).fill(1.0);
    let mut b = DVector::zeros(n);
    b[n - 1] = 1.0;
    let x = a.lu().solve(&b).ok_or(Error::NotIrreducible)?;
    let mut pi: Vec<f64> = x.iter().map(|&v| v.max(0.0)).collect();
    let s: f64 = pi.iter().sum();
    pi.iter_mut().for_each(|v| *v /= s);
    for j in 0..n {
        let next: f64 = (0..n).map(|i| pi[i] * t.get(i, j)).sum();
        if (next - pi[j]).abs() > STATIONARY_TOL {
            return Err(Error::NotIrreducible);
        }
    }
    Ok(pi)
}

/// Markov chain on pairs `(z1, z2)`, indexed `z1 * n2 + z2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "JointRaw", into = "JointRaw")]
pub struct JointMarkovNoise {
    n1: usize,
    n2: usize,
    chain: MarkovNoise,
}

#[derive(Serialize, Deserialize)]
struct JointRaw {
    n1: usize,
    n2: usize,
    transition: Vec<Vec<f64>>,
}

impl TryFrom<JointRaw> for JointMarkovNoise {
    type Error = Error;

    fn try_from(r: JointRaw) -> Result<Self> {
        Self::new(r.n1, r.n2, r.transition)
    }
}

impl From<JointMarkovNoise> for JointRaw {
    fn from(j: JointMarkovNoise) -> Self {
        JointRaw { n1: j.n1, n2: j.n2, transition: j.chain.t.rows() }
    }
}

impl JointMarkovNoise {
    pub fn new(n1: usize, n2: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        if n1 == 0 || n2 == 0 || rows.len() != n1 * n2 {
            return Err(Error::DimensionMismatch(format!("{} joint states for alphabets {n1} and {n2}", rows.len())));
        }
        Ok(Self { n1, n2, chain: MarkovNoise::new(rows)? })
    }

    /// Product of two independent chains.
    pub fn independent(z1: &MarkovNoise, z2: &MarkovNoise) -> Self {
        let (n1, n2) = (z1.states(), z2.states());
        let rows = (0..n1 * n2)
            .map(|s| (0..n1 * n2).map(|u| z1.t.get(s / n2, u / n2) * z2.t.get(s % n2, u % n2)).collect())
            .collect();
        let t = Kernel::new(rows).expect("product of stochastic rows");
        let pi = (0..n1 * n2).map(|s| z1.pi[s / n2] * z2.pi[s % n2]).collect();
        Self { n1, n2, chain: MarkovNoise { t, pi } }
    }

    /// `Z1` i.i.d. uniform bits and `Z2,i = Z1,i−1`.
    pub fn example8() -> Self {
        Self::lagged_copy(0.0)
    }

    /// `Z1` i.i.d. uniform bits and `Z2,i = Z1,i−1 ⊕ V_i` with
    /// `V_i ~ Bernoulli(flip)`.
    pub fn lagged_copy(flip: f64) -> Self {
        let rows = (0..4)
            .map(|s: usize| {
                let z1 = s / 2;
                (0..4).map(|u: usize| 0.5 * if u % 2 == z1 { 1.0 - flip } else { flip }).collect()
            })
            .collect();
        Self::new(2, 2, rows).expect("lagged copy chain is irreducible")
    }

    pub fn alphabets(&self) -> (usize, usize) {
        (self.n1, self.n2)
    }

    pub fn chain(&self) -> &MarkovNoise {
        &self.chain
    }

    fn component(&self, j: usize, s: usize) -> usize {
        if j == 1 {
            s / self.n2
        } else {
            s % self.n2
        }
    }

    fn component_size(&self, j: usize) -> usize {
        if j == 1 {
            self.n1
        } else {
            self.n2
        }
    }

    /// `H(Z_j,i | Z_1,i−1, Z_2,i−1)` at stationarity.
    pub fn one_step_conditional_entropy(&self, j: usize) -> f64 {
        let m = self.component_size(j);
        let t = &self.chain.t;
        (0..t.n_in())
            .map(|s| {
                let mut next = vec![0.0; m];
                for u in 0..t.n_out() {
                    next[self.component(j, u)] += t.get(s, u);
                }
                self.chain.pi[s] * entropy(&next)
            })
            .sum()
    }

    /// Lower and upper bounds on the entropy rate of the component process
    /// `Z_j` alone, from `H(Z_n | Z^{n−1}, S_1)` and `H(Z_n | Z^{n−1})` with
    /// `n = depth`. Both are exact once the component is itself Markov.
    pub fn component_entropy_rate_bounds(&self, j: usize, depth: usize) -> (f64, f64) {
        let depth = depth.max(2);
        let n = self.chain.states();
        let (hk, hk1) = self.block_entropies(j, &self.chain.pi, depth);
        let upper = hk - hk1;
        let lower: f64 = (0..n)
            .map(|s| {
                let mut init = vec![0.0; n];
                init[s] = 1.0;
                let (a, b) = self.block_entropies(j, &init, depth);
                self.chain.pi[s] * (a - b)
            })
            .sum();
        (lower.min(upper), upper)
    }

    fn block_entropies(&self, j: usize, init: &[f64], depth: usize) -> (f64, f64) {
        let mut acc = (0.0, 0.0);
        let m = self.component_size(j);
        for y in 0..m {
            let alpha: Vec<f64> =
                init.iter().enumerate().map(|(s, &w)| if self.component(j, s) == y { w } else { 0.0 }).collect();
            self.descend(j, alpha, 1, depth, &mut acc);
        }
        acc
    }

    fn descend(&self, j: usize, alpha: Vec<f64>, level: usize, depth: usize, acc: &mut (f64, f64)) {
        let mass: f64 = alpha.iter().sum();
        if mass <= 0.0 {
            return;
        }
        let term = -mass * mass.log2();
        if level == depth {
            acc.0 += term;
            return;
        }
        if level == depth - 1 {
            acc.1 += term;
        }
        let n = self.chain.states();
        let t = &self.chain.t;
        for y in 0..self.component_size(j) {
            let next: Vec<f64> = (0..n)
                .map(|u| {
                    if self.component(j, u) != y {
                        return 0.0;
                    }
                    (0..n).map(|s| alpha[s] * t.get(s, u)).sum()
                })
                .collect();
            self.descend(j, next, level + 1, depth, acc);
        }
    }
}
