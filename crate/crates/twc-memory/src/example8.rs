use rand::Rng;
use serde::{Deserialize, Serialize};
use twc_core::simplex::stream_rng;

use crate::markov::JointMarkovNoise;
use crate::spec::lemma3_outer;

/// Block length used for the component entropy-rate bounds.
pub const ENTROPY_DEPTH: usize = 10;

/// One run of the adaptive XOR code over the lagged-noise channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Example8Run {
    pub sent: Vec<u8>,
    pub decoded: Vec<u8>,
    pub errors: usize,
    pub rate: f64,
}

/// Simulated run compared with the bounds for the same noise law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Example8Report {
    pub n: usize,
    pub seed: u64,
    pub errors: usize,
    pub rate: f64,
    /// `1 − H̄(Z2)`: the best `R1` of codes that ignore past outputs.
    pub shannon_type_bound: f64,
    /// Corner of the outer rectangle for the joint noise law.
    pub outer_bound: (f64, f64),
}

/// Binary channel `Y_j = X1 ⊕ X2 ⊕ Z_j` with `Z1` i.i.d. uniform and
/// `Z2,i = Z1,i−1`, `Z2,1 = 0`. User 1 sends
/// `X1,i = M1,i ⊕ X1,i−1 ⊕ Y1,i−1`, user 2 sends zeros and reads `Y2,i`
/// as `M1,i`.
pub fn example8_simulate(n: usize, seed: u64) -> Example8Run {
    let mut rng = stream_rng(seed, 0);
    let mut sent = Vec::with_capacity(n);
    let mut decoded = Vec::with_capacity(n);
    let (mut x1_prev, mut y1_prev, mut z1_prev) = (0u8, 0u8, 0u8);
    let x2 = 0u8;
    for _ in 0..n {
        let m1 = rng.random::<bool>() as u8;
        let z1 = rng.random::<bool>() as u8;
        let z2 = z1_prev;
        let x1 = m1 ^ x1_prev ^ y1_prev;
        let y1 = x1 ^ x2 ^ z1;
        let y2 = x1 ^ x2 ^ z2;
        sent.push(m1);
        decoded.push(y2);
        (x1_prev, y1_prev, z1_prev) = (x1, y1, z1);
    }
    let errors = sent.iter().zip(&decoded).filter(|(a, b)| a != b).count();
    let rate = if n == 0 { 0.0 } else { (n - errors) as f64 / n as f64 };
    Example8Run { sent, decoded, errors, rate }
}

/// Simulation summary together with the Shannon-type and outer bounds.
pub fn example8_report(n: usize, seed: u64) -> Example8Report {
    let run = example8_simulate(n, seed);
    let joint = JointMarkovNoise::example8();
    let (_, h2_upper) = joint.component_entropy_rate_bounds(2, ENTROPY_DEPTH);
    let outer = lemma3_outer(&joint, 2, 2).expect("binary alphabets");
    Example8Report {
        n,
        seed,
        errors: run.errors,
        rate: run.rate,
        shannon_type_bound: (1.0 - h2_upper).max(0.0),
        outer_bound: (outer.max_r1(), outer.max_r2()),
    }
}
