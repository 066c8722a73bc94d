//! Data-parallel execution with a sequential fallback.
//!
//! Every parallel entry point maps over an index range and collects results
//! in index order, so output never depends on scheduling. With the
//! `parallel` feature disabled `Exec::Parallel` runs sequentially.
//!
//! The environment variable `TWC_THREADS` caps the worker count.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Exec {
    #[default]
    Parallel,
    Sequential,
}

#[cfg(feature = "parallel")]
fn pool() -> Option<&'static rayon::ThreadPool> {
    use std::sync::OnceLock;
    static POOL: OnceLock<Option<rayon::ThreadPool>> = OnceLock::new();
    POOL.get_or_init(|| {
        let n = std::env::var("TWC_THREADS").ok()?.trim().parse::<usize>().ok()?;
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build().ok()
    })
    .as_ref()
}

impl Exec {
    /// Evaluate `f(0), .., f(n-1)` and return the results in index order.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Exec::Sequential => (0..n).map(f).collect(),
            Exec::Parallel => par_map(n, f),
        }
    }

    /// Number of workers a parallel map would use.
    pub fn workers(self) -> usize {
        match self {
            Exec::Sequential => 1,
            Exec::Parallel => parallel_workers(),
        }
    }
}

#[cfg(feature = "parallel")]
fn par_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    let run = || (0..n).into_par_iter().map(&f).collect();
    match pool() {
        Some(p) => p.install(run),
        None => run(),
    }
}

#[cfg(not(feature = "parallel"))]
fn par_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

#[cfg(feature = "parallel")]
fn parallel_workers() -> usize {
    match pool() {
        Some(p) => p.current_num_threads(),
        None => rayon::current_num_threads(),
    }
}

#[cfg(not(feature = "parallel"))]
fn parallel_workers() -> usize {
    1
}
