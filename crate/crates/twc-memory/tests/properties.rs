use proptest::prelude::*;
use twc_memory::*;

fn chain(n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(0.01f64..1.0, n), n).prop_map(|rows| {
        rows.into_iter()
            .map(|r| {
                let s: f64 = r.iter().sum();
                r.into_iter().map(|v| v / s).collect()
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn entropy_rate_is_at_most_log_states(rows in (2usize..6).prop_flat_map(chain)) {
        let n = rows.len();
        let m = MarkovNoise::new(rows).unwrap();
        prop_assert!(m.entropy_rate() <= (n as f64).log2() + 1e-12);
        let pi = m.stationary();
        for j in 0..n {
            let next: f64 = (0..n).map(|i| pi[i] * m.transition().get(i, j)).sum();
            prop_assert!((next - pi[j]).abs() <= STATIONARY_TOL);
        }
    }

    #[test]
    fn uniform_rows_reach_the_maximum(n in 2usize..7) {
        let m = MarkovNoise::new(vec![vec![1.0 / n as f64; n]; n]).unwrap();
        prop_assert!((m.entropy_rate() - (n as f64).log2()).abs() < 1e-12);
    }

    #[test]
    fn lemma3_with_independent_noise_equals_theorem9(a in chain(2), b in chain(2)) {
        let z1 = MarkovNoise::new(a).unwrap();
        let z2 = MarkovNoise::new(b).unwrap();
        let f: Vec<Vec<Vec<usize>>> =
            (0..2).map(|x1| (0..2).map(|x2| (0..2).map(|z| x1 ^ x2 ^ z).collect()).collect()).collect();
        let spec = MemoryChannelSpec {
            f1: f.clone(),
            f2: f,
            ny1: 2,
            ny2: 2,
            noise: MemoryNoise::Independent { z1, z2 },
        };
        let inner = theorem9_region(&spec).unwrap();
        let outer = lemma3_outer(&spec.noise.joint(), 2, 2).unwrap();
        prop_assert!(inner.hausdorff(&outer) < 1e-12);
    }

    #[test]
    fn adaptive_code_never_errs(seed in any::<u64>(), n in 1usize..2000) {
        let run = example8_simulate(n, seed);
        prop_assert_eq!(run.errors, 0);
    }
}
