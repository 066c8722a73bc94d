//! Exhaustive combinatorial searches: bijections under constraints and
//! set partitions.

/// Saturating factorial.
pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).fold(1u128, |acc, k| acc.saturating_mul(k))
}

/// Visit every bijection `σ` of `0..n` with `σ(j) ∈ allowed[j]`, in
/// lexicographic order. Stops and returns `true` as soon as `visit` does.
pub fn for_each_bijection(allowed: &[Vec<usize>], mut visit: impl FnMut(&[usize]) -> bool) -> bool {
    fn rec(
        j: usize,
        allowed: &[Vec<usize>],
        used: &mut [bool],
        cur: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if j == allowed.len() {
            return visit(cur);
        }
        for &c in &allowed[j] {
            if !used[c] {
                used[c] = true;
                cur.push(c);
                let stop = rec(j + 1, allowed, used, cur, visit);
                cur.pop();
                used[c] = false;
                if stop {
                    return true;
                }
            }
        }
        false
    }
    let n = allowed.len();
    let mut used = vec![false; n];
    rec(0, allowed, &mut used, &mut Vec::with_capacity(n), &mut visit)
}

/// First bijection in lexicographic order, if any.
pub fn first_bijection(allowed: &[Vec<usize>]) -> Option<Vec<usize>> {
    let mut found = None;
    for_each_bijection(allowed, |s| {
        found = Some(s.to_vec());
        true
    });
    found
}

/// Visit every set partition of `0..n` as a restricted growth string
/// (`labels[0] = 0`, each label at most one more than the previous
/// maximum), in lexicographic order. Stops when `visit` returns `true`.
pub fn for_each_partition(n: usize, mut visit: impl FnMut(&[usize]) -> bool) -> bool {
    fn rec(i: usize, max: usize, labels: &mut Vec<usize>, n: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if i == n {
            return visit(labels);
        }
        for l in 0..=max + 1 {
            labels.push(l);
            let stop = rec(i + 1, max.max(l), labels, n, visit);
            labels.pop();
            if stop {
                return true;
            }
        }
        false
    }
    if n == 0 {
        return visit(&[]);
    }
    let mut labels = vec![0];
    rec(1, 0, &mut labels, n, &mut visit)
}

/// Blocks of a restricted growth string.
pub fn blocks_of(labels: &[usize]) -> Vec<Vec<usize>> {
    let k = labels.iter().max().map_or(0, |m| m + 1);
    let mut out = vec![Vec::new(); k];
    for (i, &l) in labels.iter().enumerate() {
        out[l].push(i);
    }
    out
}

/// Apply a transposition of `a` and `b`.
pub fn transpose(x: usize, a: usize, b: usize) -> usize {
    if x == a {
        b
    } else if x == b {
        a
    } else {
        x
    }
}
