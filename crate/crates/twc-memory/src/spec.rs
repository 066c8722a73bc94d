use serde::{Deserialize, Serialize};
use twc_core::{Error, Result};
use twc_region::RateRegion2D;

use crate::markov::{JointMarkovNoise, MarkovNoise};

/// Noise of a channel with memory: one chain per side, or a single chain
/// on the pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MemoryNoise {
    Independent { z1: MarkovNoise, z2: MarkovNoise },
    Joint { joint: JointMarkovNoise },
}

impl MemoryNoise {
    pub fn alphabets(&self) -> (usize, usize) {
        match self {
            Self::Independent { z1, z2 } => (z1.states(), z2.states()),
            Self::Joint { joint } => joint.alphabets(),
        }
    }

    /// The pair process as one chain.
    pub fn joint(&self) -> JointMarkovNoise {
        match self {
            Self::Independent { z1, z2 } => JointMarkovNoise::independent(z1, z2),
            Self::Joint { joint } => joint.clone(),
        }
    }
}

/// `Y_j = F_j(X1, X2, Z_j)` with stationary Markov noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemoryChannelSpec {
    /// `f1[x1][x2][z1] = y1`.
    pub f1: Vec<Vec<Vec<usize>>>,
    /// `f2[x1][x2][z2] = y2`.
    pub f2: Vec<Vec<Vec<usize>>>,
    pub ny1: usize,
    pub ny2: usize,
    pub noise: MemoryNoise,
}

fn table_shape(name: &str, f: &[Vec<Vec<usize>>]) -> Result<(usize, usize, usize)> {
    let nx1 = f.len();
    let nx2 = f.first().map_or(0, Vec::len);
    let nz = f.first().and_then(|r| r.first()).map_or(0, Vec::len);
    let ragged = f.iter().any(|r| r.len() != nx2 || r.iter().any(|c| c.len() != nz));
    if nx1 == 0 || nx2 == 0 || nz == 0 || ragged {
        return Err(Error::DimensionMismatch(format!("table {name} is empty or ragged")));
    }
    Ok((nx1, nx2, nz))
}

fn injective(values: impl Iterator<Item = usize>, size: usize) -> bool {
    let mut seen = vec![false; size];
    for v in values {
        if seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

impl MemoryChannelSpec {
    /// Shapes, output ranges and invertibility of each `F_j` in `Z_j`.
    pub fn validate(&self) -> Result<(usize, usize)> {
        let (nx1, nx2, nz1) = table_shape("f1", &self.f1)?;
        let (mx1, mx2, nz2) = table_shape("f2", &self.f2)?;
        if (mx1, mx2) != (nx1, nx2) {
            return Err(Error::DimensionMismatch("f1 and f2 disagree on input alphabets".into()));
        }
        if self.noise.alphabets() != (nz1, nz2) {
            return Err(Error::DimensionMismatch(format!(
                "noise alphabets {:?} but tables use ({nz1}, {nz2})",
                self.noise.alphabets()
            )));
        }
        for (name, f, ny) in [("f1", &self.f1, self.ny1), ("f2", &self.f2, self.ny2)] {
            for (x1, row) in f.iter().enumerate() {
                for (x2, cell) in row.iter().enumerate() {
                    if let Some(&y) = cell.iter().find(|&&y| y >= ny) {
                        return Err(Error::IndexOutOfRange { index: y, size: ny });
                    }
                    if !injective(cell.iter().copied(), ny) {
                        return Err(Error::NotInjective { table: name.into(), input: x1 * nx2 + x2 });
                    }
                }
            }
        }
        Ok((nx1, nx2))
    }

    /// `q1 = |X2|` and `q2 = |X1|`.
    pub fn alphabet_sizes(&self) -> (usize, usize) {
        (self.f1.first().map_or(0, Vec::len), self.f1.len())
    }

    fn check_theorem9(&self) -> Result<(usize, usize)> {
        let (nx1, nx2) = self.validate()?;
        let (q1, q2) = (nx2, nx1);
        let (nz1, nz2) = self.noise.alphabets();
        if !(self.ny1 == q1 && nz1 == q1 && self.ny2 == q2 && nz2 == q2) || q1 < 2 || q2 < 2 {
            return Err(Error::StructuralViolation(format!(
                "cardinalities |X2|={nx2}, |Y1|={}, |Z1|={nz1}, |X1|={nx1}, |Y2|={}, |Z2|={nz2}",
                self.ny1, self.ny2
            )));
        }
        // With matched cardinalities every slice is a bijection, so the
        // inverse is total.
        let inverse = |f: &[Vec<Vec<usize>>], x1: usize, x2: usize, y: usize| {
            f[x1][x2].iter().position(|&v| v == y).expect("slice is a bijection")
        };
        for x1 in 0..nx1 {
            for y1 in 0..q1 {
                if !injective((0..nx2).map(|x2| inverse(&self.f1, x1, x2, y1)), q1) {
                    return Err(Error::StructuralViolation(format!(
                        "inverse of f1 is not one-to-one in x2 at x1={x1}, y1={y1}"
                    )));
                }
            }
        }
        for x2 in 0..nx2 {
            for y2 in 0..q2 {
                if !injective((0..nx1).map(|x1| inverse(&self.f2, x1, x2, y2)), q2) {
                    return Err(Error::StructuralViolation(format!(
                        "inverse of f2 is not one-to-one in x1 at x2={x2}, y2={y2}"
                    )));
                }
            }
        }
        Ok((q1, q2))
    }
}

/// Capacity rectangle `R1 ≤ log2 q2 − H̄(Z2)`, `R2 ≤ log2 q1 − H̄(Z1)` for
/// invertible channels with independent Markov noise and matched alphabets.
pub fn theorem9_region(spec: &MemoryChannelSpec) -> Result<RateRegion2D> {
    let (q1, q2) = spec.check_theorem9()?;
    let MemoryNoise::Independent { z1, z2 } = &spec.noise else {
        return Err(Error::StructuralViolation("noise components are not independent".into()));
    };
    Ok(RateRegion2D::rectangle(
        ((q2 as f64).log2() - z2.entropy_rate()).max(0.0),
        ((q1 as f64).log2() - z1.entropy_rate()).max(0.0),
    ))
}

/// Outer rectangle `R1 ≤ log2 q2 − H(Z2,i | Z1,i−1, Z2,i−1)` and
/// `R2 ≤ log2 q1 − H(Z1,i | Z1,i−1, Z2,i−1)` at stationarity. For a Markov
/// pair the whole past reduces to the previous step.
pub fn lemma3_outer(joint: &JointMarkovNoise, q1: usize, q2: usize) -> Result<RateRegion2D> {
    if q1 < 1 || q2 < 1 {
        return Err(Error::ParameterOutOfRange(format!("alphabet sizes ({q1}, {q2})")));
    }
    Ok(RateRegion2D::rectangle(
        ((q2 as f64).log2() - joint.one_step_conditional_entropy(2)).max(0.0),
        ((q1 as f64).log2() - joint.one_step_conditional_entropy(1)).max(0.0),
    ))
}

/// Injective-semideterministic channel with memory:
/// `Y1 = h1(X1, h̃1(X2, Z1))`, `Y2 = h2(X2, h̃2(X1, Z2))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsdMemorySpec {
    /// `h1[x1][t1] = y1`.
    pub h1: Vec<Vec<usize>>,
    /// `ht1[x2][z1] = t1`.
    pub ht1: Vec<Vec<usize>>,
    /// `h2[x2][t2] = y2`.
    pub h2: Vec<Vec<usize>>,
    /// `ht2[x1][z2] = t2`.
    pub ht2: Vec<Vec<usize>>,
    pub ny1: usize,
    pub ny2: usize,
    pub z1: MarkovNoise,
    pub z2: MarkovNoise,
}

fn shape(name: &str, t: &[Vec<usize>]) -> Result<(usize, usize)> {
    let cols = t.first().map_or(0, Vec::len);
    if t.is_empty() || cols == 0 || t.iter().any(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch(format!("table {name} is empty or ragged")));
    }
    Ok((t.len(), cols))
}

fn injective_rows(name: &str, t: &[Vec<usize>], size: usize) -> Result<()> {
    for (i, row) in t.iter().enumerate() {
        if let Some(&v) = row.iter().find(|&&v| v >= size) {
            return Err(Error::IndexOutOfRange { index: v, size });
        }
        if !injective(row.iter().copied(), size) {
            return Err(Error::NotInjective { table: name.into(), input: i });
        }
    }
    Ok(())
}

fn latin(t: &[Vec<usize>]) -> bool {
    let n = t.len();
    t.iter().all(|r| r.len() == n && injective(r.iter().copied(), n))
        && (0..n).all(|c| injective(t.iter().map(|r| r[c]), n))
}

impl IsdMemorySpec {
    /// Returns `(|X1|, |X2|, |T1|, |T2|)`.
    pub fn validate(&self) -> Result<(usize, usize, usize, usize)> {
        let (nx1, nt1) = shape("h1", &self.h1)?;
        let (nx2, nz1) = shape("ht1", &self.ht1)?;
        let (mx2, nt2) = shape("h2", &self.h2)?;
        let (mx1, nz2) = shape("ht2", &self.ht2)?;
        if mx1 != nx1 || mx2 != nx2 || nz1 != self.z1.states() || nz2 != self.z2.states() {
            return Err(Error::DimensionMismatch("ISD tables disagree on alphabets".into()));
        }
        injective_rows("h1", &self.h1, self.ny1)?;
        injective_rows("h2", &self.h2, self.ny2)?;
        injective_rows("ht1", &self.ht1, nt1)?;
        injective_rows("ht2", &self.ht2, nt2)?;
        Ok((nx1, nx2, nt1, nt2))
    }

    /// Whether `|X2| = |T1| = |Z1|`, `|X1| = |T2| = |Z2|` and each `h̃_j` is a
    /// Latin square, so that a uniform input makes `T_j` uniform whatever
    /// the noise and the limiting max-entropy rate is `log2 |T_j|`.
    pub fn cardinality_matched(&self) -> bool {
        let Ok((nx1, nx2, nt1, nt2)) = self.validate() else {
            return false;
        };
        nx2 == nt1
            && nt1 == self.z1.states()
            && nx1 == nt2
            && nt2 == self.z2.states()
            && latin(&self.ht1)
            && latin(&self.ht2)
    }

    /// The same channel as a general invertible channel with independent
    /// noise.
    pub fn to_channel_spec(&self) -> Result<MemoryChannelSpec> {
        let (nx1, nx2, _, _) = self.validate()?;
        let f1 = (0..nx1)
            .map(|x1| (0..nx2).map(|x2| self.ht1[x2].iter().map(|&t| self.h1[x1][t]).collect()).collect())
            .collect();
        let f2 = (0..nx1)
            .map(|x1| (0..nx2).map(|x2| self.ht2[x1].iter().map(|&t| self.h2[x2][t]).collect()).collect())
            .collect();
        Ok(MemoryChannelSpec {
            f1,
            f2,
            ny1: self.ny1,
            ny2: self.ny2,
            noise: MemoryNoise::Independent { z1: self.z1.clone(), z2: self.z2.clone() },
        })
    }
}

/// Capacity rectangle of an injective-semideterministic channel with memory.
///
/// `limits = Some((a2, a1))` supplies the limiting max-entropy rates of
/// `h̃2(X1^n, Z2^n)` and `h̃1(X2^n, Z1^n)`. Without it the channel must be
/// cardinality matched, where the limits are `log2 |T2|` and `log2 |T1|`.
pub fn theorem10_region(spec: &IsdMemorySpec, limits: Option<(f64, f64)>) -> Result<RateRegion2D> {
    let (_, _, nt1, nt2) = spec.validate()?;
    let (a2, a1) = match limits {
        Some(l) => l,
        None if spec.cardinality_matched() => ((nt2 as f64).log2(), (nt1 as f64).log2()),
        None => {
            return Err(Error::UnsupportedLimit(
                "alphabets are not cardinality matched and no limit was supplied".into(),
            ))
        }
    };
    Ok(RateRegion2D::rectangle((a2 - spec.z2.entropy_rate()).max(0.0), (a1 - spec.z1.entropy_rate()).max(0.0)))
}
