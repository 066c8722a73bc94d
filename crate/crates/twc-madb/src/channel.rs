use serde::{Deserialize, Serialize};
use twc_core::{Dist, Error, Kernel, Result};

/// Three-user channel: users 1 and 2 reach user 3 through `P(y3|x1,x2,x3)`,
/// and user 3 reaches them through `Y1 = X1 ⊕ X3 ⊕ Z1` and
/// `Y2 = X2 ⊕ X3 ⊕ Z1 ⊕ Z2` over `Z_q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MadbRaw", into = "MadbRaw")]
pub struct MadbChannel {
    q: usize,
    p_y3: Kernel,
    pz1: Dist,
    pz2: Dist,
    pz3: Option<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct MadbRaw {
    q: usize,
    /// Rows `(x1, x2, x3)` with `x1` major.
    p_y3: Vec<Vec<f64>>,
    pz1: Vec<f64>,
    pz2: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pz3: Option<Vec<f64>>,
}

impl TryFrom<MadbRaw> for MadbChannel {
    type Error = Error;

    fn try_from(r: MadbRaw) -> Result<Self> {
        let mut ch = Self::new(r.q, r.p_y3, r.pz1, r.pz2)?;
        ch.pz3 = r.pz3;
        Ok(ch)
    }
}

impl From<MadbChannel> for MadbRaw {
    fn from(c: MadbChannel) -> Self {
        MadbRaw { q: c.q, p_y3: c.p_y3.rows(), pz1: c.pz1.into_vec(), pz2: c.pz2.into_vec(), pz3: c.pz3 }
    }
}

impl MadbChannel {
    pub fn new(q: usize, p_y3: Vec<Vec<f64>>, pz1: Vec<f64>, pz2: Vec<f64>) -> Result<Self> {
        if q < 2 {
            return Err(Error::ParameterOutOfRange(format!("modulus {q}")));
        }
        if p_y3.len() != q * q * q {
            return Err(Error::DimensionMismatch(format!("{} rows for q = {q}, expected {}", p_y3.len(), q * q * q)));
        }
        if pz1.len() != q || pz2.len() != q {
            return Err(Error::DimensionMismatch(format!(
                "noise laws of length {} and {} for q = {q}",
                pz1.len(),
                pz2.len()
            )));
        }
        Ok(Self { q, p_y3: Kernel::new(p_y3)?, pz1: Dist::new(pz1)?, pz2: Dist::new(pz2)?, pz3: None })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn ny3(&self) -> usize {
        self.p_y3.n_out()
    }

    /// `P(y3 | x1, x2, x3)` with rows `x1·q² + x2·q + x3`.
    pub fn kernel(&self) -> &Kernel {
        &self.p_y3
    }

    pub fn row_index(&self, x1: usize, x2: usize, x3: usize) -> usize {
        (x1 * self.q + x2) * self.q + x3
    }

    pub fn pz1(&self) -> &Dist {
        &self.pz1
    }

    pub fn pz2(&self) -> &Dist {
        &self.pz2
    }

    /// Noise law of an additive uplink, kept for reference.
    pub fn pz3(&self) -> Option<&[f64]> {
        self.pz3.as_deref()
    }

    /// Channel `x3 → x3 ⊕ Z1` seen by user 1 after removing its own input.
    pub fn db_kernel_1(&self) -> Kernel {
        shift_kernel(self.pz1.as_slice())
    }

    /// Channel `x3 → x3 ⊕ Z1 ⊕ Z2` seen by user 2.
    pub fn db_kernel_2(&self) -> Kernel {
        let q = self.q;
        let z: Vec<f64> = (0..q).map(|s| (0..q).map(|a| self.pz1[a] * self.pz2[(s + q - a) % q]).sum()).collect();
        shift_kernel(&z)
    }

    /// `P(y3 | ·, x2, x3)`: rows `x1`.
    pub fn slice_x1(&self, x2: usize, x3: usize) -> Kernel {
        self.slice(|a| self.row_index(a, x2, x3), self.q)
    }

    /// `P(y3 | x1, ·, x3)`: rows `x2`.
    pub fn slice_x2(&self, x1: usize, x3: usize) -> Kernel {
        self.slice(|a| self.row_index(x1, a, x3), self.q)
    }

    /// `P(y3 | ·, ·, x3)`: rows `x1·q + x2`.
    pub fn slice_x12(&self, x3: usize) -> Kernel {
        self.slice(|a| self.row_index(a / self.q, a % self.q, x3), self.q * self.q)
    }

    fn slice(&self, row: impl Fn(usize) -> usize, n: usize) -> Kernel {
        Kernel::new((0..n).map(|a| self.p_y3.row(row(a)).to_vec()).collect()).expect("rows of a valid kernel")
    }
}

fn shift_kernel(z: &[f64]) -> Kernel {
    let q = z.len();
    Kernel::new((0..q).map(|x| (0..q).map(|y| z[(y + q - x) % q]).collect()).collect())
        .expect("shifted noise law is stochastic")
}

/// Parametric families of three-user channels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum MadbFamily {
    /// `Y3 = X1 ⊕ X2 ⊕ X3 ⊕ Z3` over `Z_q`.
    Additive { q: usize, pz1: Vec<f64>, pz2: Vec<f64>, pz3: Vec<f64> },
    /// Binary inputs, ternary output depending on `(x2, x3)` only.
    Example10 { eps: f64, pz1: Vec<f64>, pz2: Vec<f64> },
    /// `Y3 = X1 ⊕ X2 ⊕ X3` or erased (output 2) with probability `eps`.
    Erasure { eps: f64, pz1: Vec<f64>, pz2: Vec<f64> },
}

fn check_eps(eps: f64) -> Result<()> {
    if (0.0..=1.0).contains(&eps) {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange(format!("erasure probability {eps}")))
    }
}

/// Transition law of a family member.
pub fn gen_madb(family: &MadbFamily) -> Result<MadbChannel> {
    match family {
        MadbFamily::Additive { q, pz1, pz2, pz3 } => {
            let q = *q;
            if pz3.len() != q {
                return Err(Error::DimensionMismatch(format!("uplink noise of length {} for q = {q}", pz3.len())));
            }
            Dist::new(pz3.clone())?;
            let rows = (0..q * q * q)
                .map(|r| {
                    let s = r / (q * q) + (r / q) % q + r % q;
                    (0..q).map(|y| pz3[(y + 3 * q - s) % q]).collect()
                })
                .collect();
            let mut ch = MadbChannel::new(q, rows, pz1.clone(), pz2.clone())?;
            ch.pz3 = Some(pz3.clone());
            Ok(ch)
        }
        MadbFamily::Example10 { eps, pz1, pz2 } => {
            check_eps(*eps)?;
            let e = *eps;
            let by_state = |x2: usize, x3: usize| match (x2, x3) {
                (0, 0) => vec![1.0 - e, 0.0, e],
                (1, 0) => vec![0.0, 1.0 - e, e],
                (0, 1) => vec![0.0, e, 1.0 - e],
                _ => vec![1.0 - e, e, 0.0],
            };
            let rows = (0..8).map(|r| by_state((r / 2) % 2, r % 2)).collect();
            MadbChannel::new(2, rows, pz1.clone(), pz2.clone())
        }
        MadbFamily::Erasure { eps, pz1, pz2 } => {
            check_eps(*eps)?;
            let rows = (0..8)
                .map(|r| {
                    let (x1, x2, x3) = (r / 4, (r / 2) % 2, r % 2);
                    let mut row = vec![0.0, 0.0, *eps];
                    row[x1 ^ x2 ^ x3] = 1.0 - eps;
                    row
                })
                .collect();
            let mut ch = MadbChannel::new(2, rows, pz1.clone(), pz2.clone())?;
            ch.pz3 = Some(vec![1.0 - eps, *eps]);
            Ok(ch)
        }
    }
}
