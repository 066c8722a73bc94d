//! Finite structural tests on kernels: quasi-symmetry and column
//! permutation families.

use twc_core::{Error, Kernel, Result};

use crate::report::{ConditionId, ConditionReport, Counterexample, Witness};
use crate::search::{blocks_of, first_bijection, for_each_partition};

/// Largest output alphabet the partition search accepts.
pub const QUASI_SYMMETRIC_LIMIT: usize = 8;

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

/// Rows restricted to `block` are permutations of each other and the
/// block's column sums agree.
pub fn is_weakly_symmetric_block(k: &Kernel, block: &[usize], tol: f64) -> bool {
    let first = sorted(block.iter().map(|&c| k.get(0, c)).collect());
    for x in 1..k.n_in() {
        let row = sorted(block.iter().map(|&c| k.get(x, c)).collect());
        if row.iter().zip(&first).any(|(a, b)| (a - b).abs() > tol) {
            return false;
        }
    }
    let sums: Vec<f64> = block.iter().map(|&c| (0..k.n_in()).map(|x| k.get(x, c)).sum()).collect();
    let col_tol = tol * k.n_in() as f64;
    sums.iter().all(|s| (s - sums[0]).abs() <= col_tol)
}

/// Exhaustive search over column partitions, first valid partition in
/// restricted-growth order (the single block comes first).
pub fn check_quasi_symmetric(k: &Kernel, tol: f64) -> Result<ConditionReport> {
    let n = k.n_out();
    if n > QUASI_SYMMETRIC_LIMIT {
        return Err(Error::AlphabetTooLarge { size: n, limit: QUASI_SYMMETRIC_LIMIT });
    }
    let mut found = None;
    let mut visited = 0u64;
    for_each_partition(n, |labels| {
        visited += 1;
        let blocks = blocks_of(labels);
        if blocks.iter().all(|b| is_weakly_symmetric_block(k, b, tol)) {
            found = Some(blocks);
            true
        } else {
            false
        }
    });
    Ok(match found {
        Some(blocks) => ConditionReport::holds(ConditionId::QuasiSymmetric, Some(Witness::ColumnPartition { blocks })),
        None => ConditionReport::fails(ConditionId::QuasiSymmetric, Counterexample::Exhausted { candidates: visited }),
    })
}

fn columns_match(a: &Kernel, ca: usize, b: &Kernel, cb: usize, tol: f64) -> bool {
    (0..a.n_in()).all(|x| (a.get(x, ca) - b.get(x, cb)).abs() <= tol)
}

/// Lexicographically first `σ` with column `j` of `target` equal to
/// column `σ(j)` of `base`.
pub fn column_permutation(base: &Kernel, target: &Kernel, tol: f64) -> Option<Vec<usize>> {
    if base.n_in() != target.n_in() || base.n_out() != target.n_out() {
        return None;
    }
    let n = base.n_out();
    let allowed: Vec<Vec<usize>> =
        (0..n).map(|j| (0..n).filter(|&c| columns_match(target, j, base, c, tol)).collect()).collect();
    first_bijection(&allowed)
}

/// Are all kernels column permutations of the first one?
pub fn check_column_permutation_family(kernels: &[Kernel], tol: f64) -> Result<ConditionReport> {
    let Some(base) = kernels.first() else {
        return Err(Error::ShapeMismatch("empty kernel family".into()));
    };
    if let Some(i) = kernels.iter().position(|k| k.n_in() != base.n_in() || k.n_out() != base.n_out()) {
        return Err(Error::ShapeMismatch(format!(
            "kernel {i} is {}x{}, kernel 0 is {}x{}",
            kernels[i].n_in(),
            kernels[i].n_out(),
            base.n_in(),
            base.n_out()
        )));
    }
    let mut perms = Vec::with_capacity(kernels.len());
    for (i, k) in kernels.iter().enumerate() {
        match column_permutation(base, k, tol) {
            Some(p) => perms.push(p),
            None => {
                return Ok(ConditionReport::fails(
                    ConditionId::ColumnPermutationFamily,
                    Counterexample::ColumnMismatch { index: i },
                ))
            }
        }
    }
    Ok(ConditionReport::holds(ConditionId::ColumnPermutationFamily, Some(Witness::ColumnPermutations { perms })))
}
