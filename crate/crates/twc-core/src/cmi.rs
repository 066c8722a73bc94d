//! Conditional entropies and mutual informations over a tuple of inputs.
//!
//! The input is a pmf over the product of several finite alphabets (the
//! tuple space) and a kernel maps each tuple to an output. A [`Grouping`]
//! names the coordinates being conditioned on. Gradients are taken with
//! respect to the joint pmf and are exact.

use crate::info::{neg_plogp, Kernel};

/// Mixed-radix indexing of a product of alphabets, first coordinate major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleSpace {
    dims: Vec<usize>,
}

impl TupleSpace {
    pub fn new(dims: Vec<usize>) -> Self {
        Self { dims }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn size(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn decode(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = idx % d;
            idx /= d;
        }
        out
    }

    pub fn encode(&self, coords: &[usize]) -> usize {
        coords.iter().zip(&self.dims).fold(0, |acc, (&c, &d)| acc * d + c)
    }

    /// Group tuples by the listed coordinates.
    pub fn grouping(&self, keep: &[usize]) -> Grouping {
        let count = keep.iter().map(|&i| self.dims[i]).product();
        let of = (0..self.size())
            .map(|u| {
                let c = self.decode(u);
                keep.iter().fold(0, |acc, &i| acc * self.dims[i] + c[i])
            })
            .collect();
        Grouping { of, count }
    }
}

/// Assignment of every tuple to a conditioning group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grouping {
    pub of: Vec<usize>,
    pub count: usize,
}

impl Grouping {
    /// Single group: no conditioning.
    pub fn trivial(n: usize) -> Self {
        Self { of: vec![0; n], count: 1 }
    }

    /// Every tuple its own group.
    pub fn identity(n: usize) -> Self {
        Self { of: (0..n).collect(), count: n }
    }
}

/// Per-group output pmfs `Q(y|g)` and group masses.
fn group_outputs(p: &[f64], k: &Kernel, g: &Grouping) -> (Vec<f64>, Vec<f64>) {
    let ny = k.n_out();
    let mut r = vec![0.0; g.count * ny];
    let mut mass = vec![0.0; g.count];
    let mut members = vec![0usize; g.count];
    for (u, &pu) in p.iter().enumerate() {
        let gi = g.of[u];
        members[gi] += 1;
        if pu > 0.0 {
            mass[gi] += pu;
            for (acc, kv) in r[gi * ny..(gi + 1) * ny].iter_mut().zip(k.row(u)) {
                *acc += pu * kv;
            }
        }
    }
    for gi in 0..g.count {
        let q = &mut r[gi * ny..(gi + 1) * ny];
        if mass[gi] > 0.0 {
            q.iter_mut().for_each(|v| *v /= mass[gi]);
        }
    }
    // Empty groups get the plain average of their rows, which keeps the
    // gradient finite and equal to the one-sided derivative.
    if mass.iter().any(|&m| m <= 0.0) {
        for (u, &gi) in g.of.iter().enumerate() {
            if mass[gi] <= 0.0 {
                let w = 1.0 / members[gi] as f64;
                for (acc, kv) in r[gi * ny..(gi + 1) * ny].iter_mut().zip(k.row(u)) {
                    *acc += w * kv;
                }
            }
        }
    }
    (r, mass)
}

/// `H(Y | G)` in bits.
pub fn cond_entropy(p: &[f64], k: &Kernel, g: &Grouping) -> f64 {
    let ny = k.n_out();
    let (q, mass) = group_outputs(p, k, g);
    (0..g.count)
        .filter(|&gi| mass[gi] > 0.0)
        .map(|gi| mass[gi] * q[gi * ny..(gi + 1) * ny].iter().map(|&v| neg_plogp(v)).sum::<f64>())
        .sum()
}

/// Adds `scale · ∇_p H(Y|G)` to `grad` and returns `H(Y|G)`.
///
/// `∂H(Y|G)/∂p(u) = −Σ_y K(y|u) log2 Q(y|g(u))`.
pub fn cond_entropy_grad(p: &[f64], k: &Kernel, g: &Grouping, scale: f64, grad: &mut [f64]) -> f64 {
    let ny = k.n_out();
    let (q, mass) = group_outputs(p, k, g);
    let logq: Vec<f64> = q.iter().map(|&v| v.max(1e-300).log2()).collect();
    for (u, gu) in grad.iter_mut().enumerate() {
        let gi = g.of[u];
        let lq = &logq[gi * ny..(gi + 1) * ny];
        let d: f64 = k.row(u).iter().zip(lq).filter(|(kv, _)| **kv > 0.0).map(|(kv, l)| kv * l).sum();
        *gu -= scale * d;
    }
    (0..g.count)
        .filter(|&gi| mass[gi] > 0.0)
        .map(|gi| mass[gi] * q[gi * ny..(gi + 1) * ny].iter().map(|&v| neg_plogp(v)).sum::<f64>())
        .sum()
}

/// `I(A;Y|B) = H(Y|B) − H(Y|A,B)` where `given` groups by `B` and `joint`
/// groups by `(A, B)`.
pub fn cond_mi(p: &[f64], k: &Kernel, given: &Grouping, joint: &Grouping) -> f64 {
    (cond_entropy(p, k, given) - cond_entropy(p, k, joint)).max(0.0)
}

/// Adds `scale · ∇_p I(A;Y|B)` to `grad` and returns the value.
pub fn cond_mi_grad(p: &[f64], k: &Kernel, given: &Grouping, joint: &Grouping, scale: f64, grad: &mut [f64]) -> f64 {
    let a = cond_entropy_grad(p, k, given, scale, grad);
    let b = cond_entropy_grad(p, k, joint, -scale, grad);
    a - b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info::mi;
    use approx::assert_abs_diff_eq;

    #[test]
    fn unconditioned_matches_plain_mutual_information() {
        let k = Kernel::new(vec![vec![0.9, 0.1], vec![0.3, 0.7], vec![0.5, 0.5]]).unwrap();
        let p = [0.2, 0.5, 0.3];
        let v = cond_mi(&p, &k, &Grouping::trivial(3), &Grouping::identity(3));
        assert_abs_diff_eq!(v, mi(&p, &k), epsilon = 1e-14);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let space = TupleSpace::new(vec![2, 3]);
        let k = Kernel::new(vec![
            vec![0.7, 0.2, 0.1],
            vec![0.1, 0.8, 0.1],
            vec![0.3, 0.3, 0.4],
            vec![0.25, 0.5, 0.25],
            vec![0.6, 0.1, 0.3],
            vec![0.05, 0.05, 0.9],
        ])
        .unwrap();
        let given = space.grouping(&[1]);
        let joint = space.grouping(&[0, 1]);
        let p = [0.1, 0.2, 0.15, 0.25, 0.2, 0.1];
        let mut g = vec![0.0; 6];
        cond_mi_grad(&p, &k, &given, &joint, 1.0, &mut g);
        let h = 1e-6;
        for u in 0..6 {
            let mut a = p;
            let mut b = p;
            a[u] += h;
            b[u] -= h;
            let fd = (cond_mi(&a, &k, &given, &joint) - cond_mi(&b, &k, &given, &joint)) / (2.0 * h);
            assert_abs_diff_eq!(g[u], fd, epsilon = 1e-6);
        }
    }

    #[test]
    fn tuple_roundtrip() {
        let s = TupleSpace::new(vec![2, 3, 4]);
        for u in 0..s.size() {
            assert_eq!(s.encode(&s.decode(u)), u);
        }
        let g = s.grouping(&[2, 0]);
        assert_eq!(g.count, 8);
        assert_eq!(g.of[s.encode(&[1, 2, 3])], 3 * 2 + 1);
    }
}
