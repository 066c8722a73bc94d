//! Generators for two-way channel families and fixed example channels.

use serde::{Deserialize, Serialize};
use twc_core::{Error, Kernel, Result, TwoWayChannel};

fn check_pair(name: &str, alpha: f64, eps: f64) -> Result<()> {
    let ok = (0.0..=1.0).contains(&alpha) && (0.0..=1.0).contains(&eps) && alpha + eps <= 1.0 + 1e-12;
    if ok {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange(format!("{name}: alpha={alpha}, eps={eps}")))
    }
}

/// Joint channel whose outputs are independent given the inputs, each
/// produced by `out_j(x1, x2)` as a pmf over that output's alphabet.
fn independent_outputs(
    nx1: usize,
    nx2: usize,
    ny1: usize,
    ny2: usize,
    out1: impl Fn(usize, usize) -> Vec<f64>,
    out2: impl Fn(usize, usize) -> Vec<f64>,
) -> Result<TwoWayChannel> {
    let mut p = Vec::with_capacity(nx1 * nx2 * ny1 * ny2);
    for x1 in 0..nx1 {
        for x2 in 0..nx2 {
            let (a, b) = (out1(x1, x2), out2(x1, x2));
            for &ya in &a {
                for &yb in &b {
                    p.push(ya * yb);
                }
            }
        }
    }
    TwoWayChannel::from_flat(nx1, nx2, ny1, ny2, p)
}

/// q-ary additive noise with erasures on both directions.
///
/// Each output is `x1 + x2 + z (mod q)` unless erased; the erasure symbol
/// is the last output index `q`. `P(z = 0) = 1 − α − ε`, every nonzero
/// shift has probability `α/(q−1)`, erasure has probability `ε`. The two
/// noises are independent. `(α1, ε1)` act on `Y1`, `(α2, ε2)` on `Y2`.
pub fn gen_qary_noise_erasure(q: usize, a1: f64, e1: f64, a2: f64, e2: f64) -> Result<TwoWayChannel> {
    if q < 2 {
        return Err(Error::ParameterOutOfRange(format!("q={q}")));
    }
    check_pair("Y1 noise", a1, e1)?;
    check_pair("Y2 noise", a2, e2)?;
    let out = |a: f64, e: f64| {
        move |x1: usize, x2: usize| {
            let mut v = vec![0.0; q + 1];
            for z in 0..q {
                let pz = if z == 0 { (1.0 - a - e).max(0.0) } else { a / (q - 1) as f64 };
                v[(x1 + x2 + z) % q] += pz;
            }
            v[q] = e;
            v
        }
    };
    independent_outputs(q, q, q + 1, q + 1, out(a1, e1), out(a2, e2))
}

/// Binary additive-noise channel with binary outputs:
/// `Y_j = X1 ⊕ X2 ⊕ Z_j`, `Z_j ~ Bern(α_j)` independent.
pub fn gen_binary_additive(a1: f64, a2: f64) -> Result<TwoWayChannel> {
    check_pair("Y1 noise", a1, 0.0)?;
    check_pair("Y2 noise", a2, 0.0)?;
    let out = |a: f64| {
        move |x1: usize, x2: usize| {
            let s = x1 ^ x2;
            let mut v = vec![a; 2];
            v[s] = 1.0 - a;
            v
        }
    };
    independent_outputs(2, 2, 2, 2, out(a1), out(a2))
}

/// Data-access channel over `q = 2^m` symbols.
///
/// With probability `1 − α − ε` the output is the bitwise XOR `x1 ^ x2`,
/// with probability `α` all its bits are flipped, and with probability `ε`
/// it is erased (output index `q`).
pub fn gen_data_access(m: u32, a1: f64, e1: f64, a2: f64, e2: f64) -> Result<TwoWayChannel> {
    if m == 0 || m > 8 {
        return Err(Error::ParameterOutOfRange(format!("m={m}")));
    }
    check_pair("Y1 noise", a1, e1)?;
    check_pair("Y2 noise", a2, e2)?;
    let q = 1usize << m;
    let out = |a: f64, e: f64| {
        move |x1: usize, x2: usize| {
            let s = x1 ^ x2;
            let mut v = vec![0.0; q + 1];
            v[s] += (1.0 - a - e).max(0.0);
            v[(q - 1) ^ s] += a;
            v[q] = e;
            v
        }
    };
    independent_outputs(q, q, q + 1, q + 1, out(a1, e1), out(a2, e2))
}

/// Injective semi-deterministic channel `Y_j = h_j(X_j, T_j)`,
/// `T_j = h̃_j(X_k, Z_j)` with independent memoryless noises.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsdSpec {
    /// `h1[x1][t1] = y1`.
    pub h1: Vec<Vec<usize>>,
    /// `ht1[x2][z1] = t1`.
    pub ht1: Vec<Vec<usize>>,
    pub pz1: Vec<f64>,
    /// `h2[x2][t2] = y2`.
    pub h2: Vec<Vec<usize>>,
    /// `ht2[x1][z2] = t2`.
    pub ht2: Vec<Vec<usize>>,
    pub pz2: Vec<f64>,
    pub ny1: usize,
    pub ny2: usize,
}

fn check_injective(name: &str, table: &[Vec<usize>], range: usize) -> Result<()> {
    for (x, row) in table.iter().enumerate() {
        let mut seen = vec![false; range];
        for &v in row {
            if v >= range {
                return Err(Error::IndexOutOfRange { index: v, size: range });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::NotInjective { table: name.into(), input: x });
            }
        }
    }
    Ok(())
}

impl IsdSpec {
    pub fn validate(&self) -> Result<()> {
        let nt1 = self.h1.first().map_or(0, Vec::len);
        let nt2 = self.h2.first().map_or(0, Vec::len);
        let nx1 = self.h1.len();
        let nx2 = self.h2.len();
        if nx1 == 0 || nx2 == 0 || self.ht1.len() != nx2 || self.ht2.len() != nx1 {
            return Err(Error::DimensionMismatch("ISD table shapes".into()));
        }
        if self.ht1.iter().any(|r| r.len() != self.pz1.len()) || self.ht2.iter().any(|r| r.len() != self.pz2.len()) {
            return Err(Error::DimensionMismatch("noise alphabet vs table width".into()));
        }
        if self.h1.iter().any(|r| r.len() != nt1) || self.h2.iter().any(|r| r.len() != nt2) {
            return Err(Error::DimensionMismatch("ragged output table".into()));
        }
        twc_core::Dist::new(self.pz1.clone())?;
        twc_core::Dist::new(self.pz2.clone())?;
        check_injective("h1", &self.h1, self.ny1)?;
        check_injective("h2", &self.h2, self.ny2)?;
        check_injective("ht1", &self.ht1, nt1)?;
        check_injective("ht2", &self.ht2, nt2)?;
        Ok(())
    }
}

/// Compose the noise through `h̃` and then `h` for both directions.
pub fn gen_isd(spec: &IsdSpec) -> Result<TwoWayChannel> {
    spec.validate()?;
    let nx1 = spec.h1.len();
    let nx2 = spec.h2.len();
    let out1 = |x1: usize, x2: usize| {
        let mut v = vec![0.0; spec.ny1];
        for (z, &pz) in spec.pz1.iter().enumerate() {
            v[spec.h1[x1][spec.ht1[x2][z]]] += pz;
        }
        v
    };
    let out2 = |x1: usize, x2: usize| {
        let mut v = vec![0.0; spec.ny2];
        for (z, &pz) in spec.pz2.iter().enumerate() {
            v[spec.h2[x2][spec.ht2[x1][z]]] += pz;
        }
        v
    };
    independent_outputs(nx1, nx2, spec.ny1, spec.ny2, out1, out2)
}

/// Names accepted by [`fixture`].
pub const FIXTURES: [&str; 5] = ["motivational", "example4", "example5", "example6", "binary-additive"];

/// The fixed example channels, entry for entry.
pub fn fixture(name: &str) -> Result<TwoWayChannel> {
    match name {
        "motivational" => TwoWayChannel::new(
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
        ),
        "example4" => TwoWayChannel::new(
            2,
            2,
            2,
            2,
            vec![
                vec![0.783, 0.087, 0.117, 0.013],
                vec![0.36279, 0.05421, 0.50721, 0.07579],
                vec![0.261, 0.609, 0.039, 0.091],
                vec![0.173889, 0.243111, 0.243111, 0.339889],
            ],
        ),
        "example5" => TwoWayChannel::new(
            2,
            2,
            2,
            2,
            vec![
                vec![0.25, 0.5, 0.25, 0.0],
                // Printed as "0375"; the row only sums to one with 0.375.
                vec![0.375, 0.375, 0.125, 0.125],
                vec![0.125, 0.125, 0.375, 0.375],
                vec![0.125, 0.125, 0.375, 0.375],
            ],
        ),
        "example6" => {
            // Every marginal slice is the same cyclic 3x3 kernel; the joint
            // takes the outputs conditionally independent.
            let m = [[0.3, 0.2, 0.5], [0.5, 0.3, 0.2], [0.2, 0.5, 0.3]];
            let k1: Vec<Kernel> =
                (0..3).map(|x1| Kernel::new(vec![m[x1].to_vec(), m[x1].to_vec()])).collect::<Result<_>>()?;
            let slice = Kernel::new(m.iter().map(|r| r.to_vec()).collect())?;
            TwoWayChannel::from_marginals(&k1, &[slice.clone(), slice])
        }
        "binary-additive" => gen_binary_additive(0.0, 0.0),
        other => Err(Error::UnknownFixture(other.into())),
    }
}
