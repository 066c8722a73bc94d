//! The joint two-way channel `P(y1, y2 | x1, x2)` and its marginal kernels.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info::{mi, validate_rows, Dist, Kernel, MATRIX_TOL};

/// Which one-way channel a marginal kernel describes.
///
/// `To2` is the channel from user 1 to user 2: input `X1`, output `Y2`,
/// state `X2`. `To1` is the reverse: input `X2`, output `Y1`, state `X1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    To2,
    To1,
}

impl Direction {
    pub fn reverse(self) -> Self {
        match self {
            Direction::To2 => Direction::To1,
            Direction::To1 => Direction::To2,
        }
    }
}

/// Rows are `(x1, x2)` with `x1` major, columns `(y1, y2)` with `y1` major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoWayChannel {
    nx1: usize,
    nx2: usize,
    ny1: usize,
    ny2: usize,
    p: Vec<f64>,
}

impl TwoWayChannel {
    /// Validate a raw matrix. Rows are never renormalized.
    pub fn new(nx1: usize, nx2: usize, ny1: usize, ny2: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() != nx1 * nx2 {
            return Err(Error::DimensionMismatch(format!("{} rows for input alphabets {nx1}x{nx2}", rows.len())));
        }
        if let Some(r) = rows.iter().position(|r| r.len() != ny1 * ny2) {
            return Err(Error::DimensionMismatch(format!(
                "row {r} has {} entries for output alphabets {ny1}x{ny2}",
                rows[r].len()
            )));
        }
        Self::from_flat(nx1, nx2, ny1, ny2, rows.concat())
    }

    pub fn from_flat(nx1: usize, nx2: usize, ny1: usize, ny2: usize, p: Vec<f64>) -> Result<Self> {
        if [nx1, nx2, ny1, ny2].contains(&0) || p.len() != nx1 * nx2 * ny1 * ny2 {
            return Err(Error::DimensionMismatch(format!("{} entries for alphabets {nx1},{nx2},{ny1},{ny2}", p.len())));
        }
        validate_rows(&p, ny1 * ny2)?;
        Ok(Self { nx1, nx2, ny1, ny2, p })
    }

    /// Joint channel with conditionally independent outputs.
    pub fn from_marginals(k1: &[Kernel], k2: &[Kernel]) -> Result<Self> {
        // k1[x1] has rows x2 and columns y1; k2[x2] has rows x1 and columns y2.
        let nx1 = k1.len();
        let nx2 = k2.len();
        if nx1 == 0 || nx2 == 0 {
            return Err(Error::DimensionMismatch("no kernels".into()));
        }
        let ny1 = k1[0].n_out();
        let ny2 = k2[0].n_out();
        if k1.iter().any(|k| k.n_in() != nx2 || k.n_out() != ny1)
            || k2.iter().any(|k| k.n_in() != nx1 || k.n_out() != ny2)
        {
            return Err(Error::DimensionMismatch("marginal kernel shapes disagree".into()));
        }
        let mut p = Vec::with_capacity(nx1 * nx2 * ny1 * ny2);
        for x1 in 0..nx1 {
            for x2 in 0..nx2 {
                for y1 in 0..ny1 {
                    for y2 in 0..ny2 {
                        p.push(k1[x1].get(x2, y1) * k2[x2].get(x1, y2));
                    }
                }
            }
        }
        Self::from_flat(nx1, nx2, ny1, ny2, p)
    }

    pub fn nx1(&self) -> usize {
        self.nx1
    }
    pub fn nx2(&self) -> usize {
        self.nx2
    }
    pub fn ny1(&self) -> usize {
        self.ny1
    }
    pub fn ny2(&self) -> usize {
        self.ny2
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.p.chunks(self.ny1 * self.ny2).map(<[f64]>::to_vec).collect()
    }

    pub fn row(&self, x1: usize, x2: usize) -> &[f64] {
        let w = self.ny1 * self.ny2;
        let r = x1 * self.nx2 + x2;
        &self.p[r * w..(r + 1) * w]
    }

    pub fn get(&self, x1: usize, x2: usize, y1: usize, y2: usize) -> f64 {
        self.row(x1, x2)[y1 * self.ny2 + y2]
    }

    /// `P(y1 | x1, x2)`.
    pub fn y1_given(&self, x1: usize, x2: usize) -> Vec<f64> {
        let row = self.row(x1, x2);
        (0..self.ny1).map(|y1| row[y1 * self.ny2..(y1 + 1) * self.ny2].iter().sum()).collect()
    }

    /// `P(y2 | x1, x2)`.
    pub fn y2_given(&self, x1: usize, x2: usize) -> Vec<f64> {
        let row = self.row(x1, x2);
        (0..self.ny2).map(|y2| (0..self.ny1).map(|y1| row[y1 * self.ny2 + y2]).sum()).collect()
    }

    /// State-sliced kernel: `To2` at `x2 = s` gives rows `x1`, columns `y2`;
    /// `To1` at `x1 = s` gives rows `x2`, columns `y1`.
    pub fn marginal_kernel(&self, dir: Direction, s: usize) -> Result<Kernel> {
        let (states, inputs) = match dir {
            Direction::To2 => (self.nx2, self.nx1),
            Direction::To1 => (self.nx1, self.nx2),
        };
        if s >= states {
            return Err(Error::IndexOutOfRange { index: s, size: states });
        }
        let rows = (0..inputs)
            .map(|x| match dir {
                Direction::To2 => self.y2_given(x, s),
                Direction::To1 => self.y1_given(s, x),
            })
            .collect();
        Ok(renormalize_kernel(rows))
    }

    /// All state-sliced kernels of one direction, indexed by state.
    pub fn state_kernels(&self, dir: Direction) -> Vec<Kernel> {
        let states = match dir {
            Direction::To2 => self.nx2,
            Direction::To1 => self.nx1,
        };
        (0..states).map(|s| self.marginal_kernel(dir, s).expect("state in range")).collect()
    }

    /// Kernel from the input pair `(x1, x2)` (x1 major) to one output.
    pub fn pair_kernel(&self, dir: Direction) -> Kernel {
        let mut rows = Vec::with_capacity(self.nx1 * self.nx2);
        for x1 in 0..self.nx1 {
            for x2 in 0..self.nx2 {
                rows.push(match dir {
                    Direction::To2 => self.y2_given(x1, x2),
                    Direction::To1 => self.y1_given(x1, x2),
                });
            }
        }
        renormalize_kernel(rows)
    }

    /// The same channel with the roles of the two users exchanged.
    pub fn swap_users(&self) -> Self {
        let mut p = Vec::with_capacity(self.p.len());
        for x2 in 0..self.nx2 {
            for x1 in 0..self.nx1 {
                for y2 in 0..self.ny2 {
                    for y1 in 0..self.ny1 {
                        p.push(self.get(x1, x2, y1, y2));
                    }
                }
            }
        }
        Self { nx1: self.nx2, nx2: self.nx1, ny1: self.ny2, ny2: self.ny1, p }
    }

    /// Largest entrywise difference to another channel of the same shape.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.p.iter().zip(&other.p).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// `(I(X1;Y2|X2), I(X2;Y1|X1))` under a joint input.
    pub fn rate_pair(&self, p: &JointDist) -> Result<(f64, f64)> {
        Ok((
            conditional_mutual_information(p, self, Direction::To2)?,
            conditional_mutual_information(p, self, Direction::To1)?,
        ))
    }
}

// Marginal rows are sums of validated entries; clean up the last few ulps.
fn renormalize_kernel(rows: Vec<Vec<f64>>) -> Kernel {
    let n_in = rows.len();
    let n_out = rows[0].len();
    let mut flat = Vec::with_capacity(n_in * n_out);
    for r in rows {
        let s: f64 = r.iter().sum();
        debug_assert!((s - 1.0).abs() <= MATRIX_TOL * 4.0);
        flat.extend(r.iter().map(|v| v / s));
    }
    Kernel::from_flat(n_in, n_out, flat).expect("marginal of a valid channel")
}

/// A joint pmf on `X1 × X2`, stored `x1` major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointDist {
    n1: usize,
    n2: usize,
    p: Vec<f64>,
}

impl JointDist {
    pub fn new(n1: usize, n2: usize, p: Vec<f64>) -> Result<Self> {
        if p.len() != n1 * n2 || n1 == 0 || n2 == 0 {
            return Err(Error::DimensionMismatch(format!("{} entries for {n1}x{n2}", p.len())));
        }
        let d = Dist::new(p)?;
        Ok(Self { n1, n2, p: d.into_vec() })
    }

    pub fn product(a: &Dist, b: &Dist) -> Self {
        let p = a.as_slice().iter().flat_map(|x| b.as_slice().iter().map(move |y| x * y)).collect();
        Self { n1: a.len(), n2: b.len(), p }
    }

    pub fn n1(&self) -> usize {
        self.n1
    }
    pub fn n2(&self) -> usize {
        self.n2
    }
    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }
    pub fn get(&self, x1: usize, x2: usize) -> f64 {
        self.p[x1 * self.n2 + x2]
    }

    pub fn marginal1(&self) -> Vec<f64> {
        (0..self.n1).map(|a| (0..self.n2).map(|b| self.get(a, b)).sum()).collect()
    }

    pub fn marginal2(&self) -> Vec<f64> {
        (0..self.n2).map(|b| (0..self.n1).map(|a| self.get(a, b)).sum()).collect()
    }

    /// Swap the two coordinates.
    pub fn transposed(&self) -> Self {
        let mut p = vec![0.0; self.p.len()];
        for a in 0..self.n1 {
            for b in 0..self.n2 {
                p[b * self.n1 + a] = self.get(a, b);
            }
        }
        Self { n1: self.n2, n2: self.n1, p }
    }
}

/// `I(X1;Y2|X2)` for `To2`, `I(X2;Y1|X1)` for `To1`, as the state-weighted
/// average of per-state `𝓘` values. States of zero probability contribute 0.
pub fn conditional_mutual_information(p: &JointDist, ch: &TwoWayChannel, dir: Direction) -> Result<f64> {
    if p.n1 != ch.nx1 || p.n2 != ch.nx2 {
        return Err(Error::DimensionMismatch(format!("input {}x{} for channel {}x{}", p.n1, p.n2, ch.nx1, ch.nx2)));
    }
    let (states, inputs) = match dir {
        Direction::To2 => (ch.nx2, ch.nx1),
        Direction::To1 => (ch.nx1, ch.nx2),
    };
    let mut total = 0.0;
    for s in 0..states {
        let cond: Vec<f64> = (0..inputs)
            .map(|x| match dir {
                Direction::To2 => p.get(x, s),
                Direction::To1 => p.get(s, x),
            })
            .collect();
        let mass: f64 = cond.iter().sum();
        if mass <= 0.0 {
            continue;
        }
        let cond: Vec<f64> = cond.iter().map(|v| v / mass).collect();
        total += mass * mi(&cond, &ch.marginal_kernel(dir, s)?);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn motivational() -> TwoWayChannel {
        TwoWayChannel::new(
            2,
            2,
            2,
            2,
            vec![
                vec![0.783, 0.087, 0.117, 0.013],
                vec![0.0417, 0.3753, 0.0583, 0.5247],
                vec![0.261, 0.609, 0.039, 0.091],
                vec![0.2919, 0.1251, 0.4081, 0.1749],
            ],
        )
        .unwrap()
    }

    #[test]
    fn marginal_slices() {
        let ch = motivational();
        let k = ch.marginal_kernel(Direction::To2, 0).unwrap();
        let want = Kernel::new(vec![vec![0.9, 0.1], vec![0.3, 0.7]]).unwrap();
        assert!(k.max_abs_diff(&want) < 1e-12);
        let k = ch.marginal_kernel(Direction::To1, 0).unwrap();
        let want = Kernel::new(vec![vec![0.87, 0.13], vec![0.417, 0.583]]).unwrap();
        assert!(k.max_abs_diff(&want) < 1e-12);
        assert!(matches!(ch.marginal_kernel(Direction::To1, 2), Err(Error::IndexOutOfRange { index: 2, size: 2 })));
    }

    #[test]
    fn validation_errors() {
        let bad = TwoWayChannel::new(1, 1, 1, 2, vec![vec![0.5, 0.49]]);
        assert!(matches!(bad, Err(Error::RowSumViolation { row: 0, .. })));
        let bad = TwoWayChannel::new(1, 2, 1, 2, vec![vec![0.5, 0.5]]);
        assert!(matches!(bad, Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn swap_is_an_involution() {
        let ch = motivational();
        assert_eq!(ch.swap_users().swap_users(), ch);
        let s = ch.swap_users();
        let a = ch.marginal_kernel(Direction::To2, 1).unwrap();
        let b = s.marginal_kernel(Direction::To1, 1).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-15);
    }

    #[test]
    fn point_mass_gives_zero() {
        let ch = motivational();
        let p = JointDist::new(2, 2, vec![0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(conditional_mutual_information(&p, &ch, Direction::To2).unwrap(), 0.0);
        assert_eq!(conditional_mutual_information(&p, &ch, Direction::To1).unwrap(), 0.0);
    }

    #[test]
    fn product_of_marginals() {
        let p = JointDist::product(&Dist::uniform(2), &Dist::new(vec![0.25, 0.75]).unwrap());
        assert_abs_diff_eq!(p.marginal2()[1], 0.75);
        assert_abs_diff_eq!(p.transposed().marginal1()[1], 0.75);
    }
}
