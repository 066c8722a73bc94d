use proptest::prelude::*;
use twc_core::info::mi;
use twc_core::{
    blahut_arimoto, blahut_arimoto_observed, conditional_mutual_information, mutual_information, BaOptions, Direction,
    Dist, JointDist, Kernel, TwoWayChannel,
};

fn normalize(v: Vec<f64>) -> Vec<f64> {
    let s: f64 = v.iter().sum();
    v.into_iter().map(|x| x / s).collect()
}

fn pmf(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..1.0, n).prop_map(normalize)
}

fn kernel(n_in: usize, n_out: usize) -> impl Strategy<Value = Kernel> {
    prop::collection::vec(pmf(n_out), n_in).prop_map(|rows| Kernel::new(rows).unwrap())
}

// Direct evaluation of the defining double sum, kept independent of the
// library's output-distribution helper.
fn brute_force_mi(p: &[f64], k: &[Vec<f64>]) -> f64 {
    let mut total = 0.0;
    for x in 0..p.len() {
        for y in 0..k[0].len() {
            let pyx = k[x][y];
            if p[x] == 0.0 || pyx == 0.0 {
                continue;
            }
            let mut q = 0.0;
            for xp in 0..p.len() {
                q += p[xp] * k[xp][y];
            }
            total += p[x] * pyx * (pyx / q).log2();
        }
    }
    total
}

#[test]
fn uniform_input_on_skewed_binary_kernel_matches_direct_sum() {
    let rows = vec![vec![0.9, 0.1], vec![0.3, 0.7]];
    let k = Kernel::new(rows.clone()).unwrap();
    let v = mutual_information(&Dist::uniform(2), &k).unwrap();
    assert!((v - brute_force_mi(&[0.5, 0.5], &rows)).abs() < 1e-14);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn mi_matches_direct_sum(p in pmf(3), k in kernel(3, 4)) {
        prop_assert!((mi(&p, &k) - brute_force_mi(&p, &k.rows())).abs() < 1e-12);
    }

    #[test]
    fn mi_is_concave(a in pmf(3), b in pmf(3), t in 0.0f64..1.0, k in kernel(3, 3)) {
        let mix: Vec<f64> = a.iter().zip(&b).map(|(x, y)| t * x + (1.0 - t) * y).collect();
        prop_assert!(mi(&mix, &k) >= t * mi(&a, &k) + (1.0 - t) * mi(&b, &k) - 1e-9);
    }

    #[test]
    fn mi_is_invariant_under_relabelling(p in pmf(3), k in kernel(3, 3),
                                        cols in Just(vec![2usize, 0, 1]), rows in Just(vec![1usize, 2, 0])) {
        let base = mi(&p, &k);
        prop_assert!((mi(&p, &k.permute_columns(&cols)) - base).abs() < 1e-12);
        let permuted_p: Vec<f64> = rows.iter().map(|&r| p[r]).collect();
        prop_assert!((mi(&permuted_p, &k.permute_rows(&rows)) - base).abs() < 1e-12);
    }

    #[test]
    fn ba_is_monotone_and_beats_uniform(k in kernel(3, 3)) {
        let mut trace = Vec::new();
        let r = blahut_arimoto_observed(&k, BaOptions::default(), |_, v| trace.push(v)).unwrap();
        for w in trace.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-12);
        }
        prop_assert!(r.capacity >= mi(&[1.0 / 3.0; 3], &k) - 1e-10);
    }

    #[test]
    fn conditional_mi_on_products_is_state_average(a in pmf(2), b in pmf(2), rows in prop::collection::vec(pmf(4), 4)) {
        let ch = TwoWayChannel::new(2, 2, 2, 2, rows.clone()).unwrap();
        let p = JointDist::product(&Dist::new(a.clone()).unwrap(), &Dist::new(b.clone()).unwrap());
        // Four-way summation of I(X1;Y2|X2) straight from the joint matrix.
        let mut direct = 0.0;
        for x2 in 0..2 {
            for x1 in 0..2 {
                for y2 in 0..2 {
                    let k = |u: usize| rows[u * 2 + x2][y2] + rows[u * 2 + x2][2 + y2];
                    let q: f64 = (0..2).map(|u| a[u] * k(u)).sum();
                    direct += b[x2] * a[x1] * k(x1) * (k(x1) / q).log2();
                }
            }
        }
        let v = conditional_mutual_information(&p, &ch, Direction::To2).unwrap();
        prop_assert!((v - direct).abs() < 1e-12);
        let avg: f64 = (0..2).map(|x2| b[x2] * mi(&a, &ch.marginal_kernel(Direction::To2, x2).unwrap())).sum();
        prop_assert!((v - avg).abs() < 1e-12);
    }
}

#[test]
fn capacity_of_erasure_kernel() {
    let k = Kernel::new(vec![vec![0.8, 0.0, 0.2], vec![0.0, 0.8, 0.2]]).unwrap();
    let r = blahut_arimoto(&k, BaOptions::default()).unwrap();
    assert!((r.capacity - 0.8).abs() < 1e-10);
}
