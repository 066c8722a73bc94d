//! Distributions, kernels and the basic information measures.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for comparing matrix entries and probability sums.
pub const MATRIX_TOL: f64 = 1e-9;
/// Absolute tolerance for comparing information quantities.
pub const INFO_TOL: f64 = 1e-8;

/// A probability vector over a finite alphabet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dist {
    p: Vec<f64>,
}

impl Dist {
    /// Validate `p` as a probability vector. Nothing is renormalized.
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::DimensionMismatch("empty distribution".into()));
        }
        for (i, &v) in p.iter().enumerate() {
            if !(v >= 0.0) {
                return Err(Error::NegativeEntry { row: 0, col: i, value: v });
            }
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > MATRIX_TOL {
            return Err(Error::RowSumViolation { row: 0, sum });
        }
        Ok(Self { p })
    }

    /// Scale a nonnegative vector with positive mass to sum to one.
    pub fn normalized(mut p: Vec<f64>) -> Result<Self> {
        let sum: f64 = p.iter().sum();
        if !(sum > 0.0) || p.iter().any(|v| !(*v >= 0.0)) {
            return Err(Error::OutOfRange("cannot normalize vector".into()));
        }
        p.iter_mut().for_each(|v| *v /= sum);
        Ok(Self { p })
    }

    pub fn uniform(n: usize) -> Self {
        Self { p: vec![1.0 / n as f64; n] }
    }

    pub fn point(n: usize, i: usize) -> Self {
        let mut p = vec![0.0; n];
        p[i] = 1.0;
        Self { p }
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.p
    }

    pub fn entropy(&self) -> f64 {
        entropy(&self.p)
    }

    /// Total-variation distance `½ Σ |p − q|`.
    pub fn tv_distance(&self, other: &Dist) -> f64 {
        0.5 * self.p.iter().zip(&other.p).map(|(a, b)| (a - b).abs()).sum::<f64>()
    }
}

impl std::ops::Index<usize> for Dist {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.p[i]
    }
}

/// A row-stochastic matrix `K[x][y] = P(y|x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Kernel {
    n_in: usize,
    n_out: usize,
    k: Vec<f64>,
}

impl Kernel {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n_in = rows.len();
        let n_out = rows.first().map_or(0, Vec::len);
        if n_in == 0 || n_out == 0 {
            return Err(Error::DimensionMismatch("empty kernel".into()));
        }
        if let Some(r) = rows.iter().position(|r| r.len() != n_out) {
            return Err(Error::DimensionMismatch(format!("row {r} has {} entries, expected {n_out}", rows[r].len())));
        }
        Self::from_flat(n_in, n_out, rows.concat())
    }

    pub fn from_flat(n_in: usize, n_out: usize, k: Vec<f64>) -> Result<Self> {
        if k.len() != n_in * n_out || n_in == 0 || n_out == 0 {
            return Err(Error::DimensionMismatch(format!("{} entries for a {n_in}x{n_out} kernel", k.len())));
        }
        validate_rows(&k, n_out)?;
        Ok(Self { n_in, n_out, k })
    }

    /// Noiseless `n x n` kernel.
    pub fn identity(n: usize) -> Self {
        let mut k = vec![0.0; n * n];
        for i in 0..n {
            k[i * n + i] = 1.0;
        }
        Self { n_in: n, n_out: n, k }
    }

    /// Binary symmetric kernel with crossover `p`.
    pub fn bsc(p: f64) -> Self {
        Self { n_in: 2, n_out: 2, k: vec![1.0 - p, p, p, 1.0 - p] }
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.k[x * self.n_out..(x + 1) * self.n_out]
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.k[x * self.n_out + y]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.k
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.k.chunks(self.n_out).map(<[f64]>::to_vec).collect()
    }

    /// Kernel whose column `j` is column `perm[j]` of `self`.
    pub fn permute_columns(&self, perm: &[usize]) -> Self {
        let mut k = vec![0.0; self.k.len()];
        for x in 0..self.n_in {
            for j in 0..self.n_out {
                k[x * self.n_out + j] = self.get(x, perm[j]);
            }
        }
        Self { n_in: self.n_in, n_out: self.n_out, k }
    }

    /// Kernel whose row `i` is row `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        let k = perm.iter().flat_map(|&r| self.row(r).to_vec()).collect();
        Self { n_in: self.n_in, n_out: self.n_out, k }
    }

    /// Output distribution `Q(y) = Σ_x p(x) K(y|x)`.
    pub fn output(&self, p: &[f64]) -> Vec<f64> {
        let mut q = vec![0.0; self.n_out];
        for (x, &px) in p.iter().enumerate() {
            if px > 0.0 {
                for (qy, k) in q.iter_mut().zip(self.row(x)) {
                    *qy += px * k;
                }
            }
        }
        q
    }

    /// Largest entrywise difference to another kernel of the same shape.
    pub fn max_abs_diff(&self, other: &Kernel) -> f64 {
        self.k.iter().zip(&other.k).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

pub(crate) fn validate_rows(k: &[f64], n_out: usize) -> Result<()> {
    for (r, row) in k.chunks(n_out).enumerate() {
        for (c, &v) in row.iter().enumerate() {
            if !(v >= 0.0) {
                return Err(Error::NegativeEntry { row: r, col: c, value: v });
            }
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > MATRIX_TOL {
            return Err(Error::RowSumViolation { row: r, sum });
        }
    }
    Ok(())
}

/// `-p log2 p` with the convention `0 log 0 = 0`.
#[inline]
pub fn neg_plogp(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

/// Shannon entropy in bits.
pub fn entropy(p: &[f64]) -> f64 {
    p.iter().map(|&v| neg_plogp(v)).sum()
}

/// Binary entropy function.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(format!("binary entropy argument {p}")));
    }
    Ok(neg_plogp(p) + neg_plogp(1.0 - p))
}

/// `H_q(x) = x log2(q−1) − x log2 x − (1−x) log2(1−x)`: the entropy of a
/// q-ary variable that is correct with probability `1−x` and otherwise
/// uniform over the remaining `q−1` symbols.
pub fn qary_entropy(x: f64, q: usize) -> Result<f64> {
    if q < 2 {
        return Err(Error::OutOfRange(format!("alphabet size {q}")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::OutOfRange(format!("q-ary entropy argument {x}")));
    }
    let lead = if x > 0.0 { x * ((q - 1) as f64).log2() } else { 0.0 };
    Ok(lead + neg_plogp(x) + neg_plogp(1.0 - x))
}

/// Relative entropy `D(p‖q)` in bits; infinite if `p` is not absolutely
/// continuous with respect to `q`.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> f64 {
    let mut d = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        if a > 0.0 {
            if b <= 0.0 {
                return f64::INFINITY;
            }
            d += a * (a / b).log2();
        }
    }
    d
}

/// `𝓘(P_X, K)` in bits.
pub fn mutual_information(p: &Dist, k: &Kernel) -> Result<f64> {
    if p.len() != k.n_in() {
        return Err(Error::DimensionMismatch(format!(
            "distribution of length {} for kernel with {} inputs",
            p.len(),
            k.n_in()
        )));
    }
    Ok(mi(p.as_slice(), k))
}

/// Unchecked `𝓘(p, K)`; `p` need not be normalized exactly.
pub fn mi(p: &[f64], k: &Kernel) -> f64 {
    let q = k.output(p);
    p.iter()
        .enumerate()
        .filter(|(_, &px)| px > 0.0)
        .map(|(x, &px)| px * kl_divergence(k.row(x), &q))
        .sum::<f64>()
        .max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn entropy_edge_values() {
        assert_abs_diff_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert!(binary_entropy(1.5).is_err());
        for q in 2..7 {
            let x = (q - 1) as f64 / q as f64;
            assert_abs_diff_eq!(qary_entropy(x, q).unwrap(), (q as f64).log2(), epsilon = 1e-12);
        }
        assert!(qary_entropy(0.2, 1).is_err());
    }

    #[test]
    fn mutual_information_basics() {
        let id = Kernel::identity(2);
        assert_abs_diff_eq!(mutual_information(&Dist::uniform(2), &id).unwrap(), 1.0);
        let k = Kernel::new(vec![vec![0.9, 0.1], vec![0.3, 0.7]]).unwrap();
        assert_eq!(mutual_information(&Dist::point(2, 1), &k).unwrap(), 0.0);
        assert!(mutual_information(&Dist::uniform(3), &k).is_err());
    }

    #[test]
    fn kernel_validation() {
        assert!(matches!(
            Kernel::new(vec![vec![0.5, 0.49], vec![0.5, 0.5]]),
            Err(Error::RowSumViolation { row: 0, .. })
        ));
        assert!(matches!(Kernel::new(vec![vec![1.1, -0.1]]), Err(Error::NegativeEntry { .. })));
        assert!(Kernel::new(vec![vec![0.5, 0.5], vec![1.0]]).is_err());
    }

    #[test]
    fn divergence_handles_missing_support() {
        assert_eq!(kl_divergence(&[0.5, 0.5], &[1.0, 0.0]), f64::INFINITY);
        assert_eq!(kl_divergence(&[1.0, 0.0], &[0.5, 0.5]), 1.0);
    }
}
