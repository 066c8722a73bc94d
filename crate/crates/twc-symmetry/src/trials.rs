//! Seeded randomized falsification.

use twc_core::simplex::{sample_uniform_simplex, stream_rng};
use twc_core::Exec;

const CHUNK: u64 = 256;

/// Run `trial(i)` for `i in 0..n` and return the smallest index that
/// produced a counterexample. Trials run in chunks so a failure stops the
/// search early; the answer never depends on the execution mode.
pub fn first_failure<T, F>(exec: Exec, n: u64, trial: F) -> Option<(u64, T)>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    let mut start = 0;
    while start < n {
        let len = CHUNK.min(n - start);
        let out = exec.map(len as usize, |k| trial(start + k as u64));
        if let Some((k, t)) = out.into_iter().enumerate().find_map(|(k, o)| o.map(|t| (k, t))) {
            return Some((start + k as u64, t));
        }
        start += len;
    }
    None
}

/// Dirichlet(1) sample of trial `i`.
pub fn trial_point(seed: u64, i: u64, n: usize) -> Vec<f64> {
    sample_uniform_simplex(&mut stream_rng(seed, i), n)
}
