use proptest::prelude::*;
use twc_chanlib::{fixture, gen_binary_additive, gen_qary_noise_erasure, FIXTURES};
use twc_core::simplex::{sample_uniform_simplex, stream_rng};
use twc_core::{JointDist, Kernel, TwoWayChannel};
use twc_symmetry::*;

fn quick(seed: u64) -> CheckOptions {
    CheckOptions { trials: 200, seed, ..CheckOptions::default() }
}

fn random_channel(seed: u64, nx1: usize, nx2: usize, ny1: usize, ny2: usize) -> TwoWayChannel {
    let mut rng = stream_rng(seed, 0);
    let rows = (0..nx1 * nx2).map(|_| sample_uniform_simplex(&mut rng, ny1 * ny2)).collect();
    TwoWayChannel::new(nx1, nx2, ny1, ny2, rows).unwrap()
}

fn random_input(seed: u64, n: usize) -> Vec<f64> {
    sample_uniform_simplex(&mut stream_rng(seed, 1), n)
}

/// Binary channels whose noise is symmetric under relabeling either input.
fn binary_symmetric_family() -> impl Strategy<Value = TwoWayChannel> {
    prop_oneof![
        (0.0..0.5f64, 0.0..0.5f64).prop_map(|(a1, a2)| gen_binary_additive(a1, a2).unwrap()),
        (0.0..0.3f64, 0.0..0.3f64, 0.0..0.3f64, 0.0..0.3f64)
            .prop_map(|(a1, e1, a2, e2)| gen_qary_noise_erasure(2, a1, e1, a2, e2).unwrap()),
    ]
}

fn symmetric_family() -> impl Strategy<Value = TwoWayChannel> {
    prop_oneof![
        (0.0..0.5f64, 0.0..0.5f64).prop_map(|(a1, a2)| gen_binary_additive(a1, a2).unwrap()),
        (2usize..=3, 0.0..0.3f64, 0.0..0.3f64, 0.0..0.3f64, 0.0..0.3f64)
            .prop_map(|(q, a1, e1, a2, e2)| gen_qary_noise_erasure(q, a1, e1, a2, e2).unwrap()),
    ]
}

/// Exchanging two symbols of user 1 along a Shannon-condition map leaves both rates unchanged.
fn lemma_oracles(ch: &TwoWayChannel, seed: u64) {
    let r = check_shannon_one_sided(ch, Side::User1, &quick(seed)).unwrap();
    let Some(Witness::Permutations { maps }) = &r.witness else { return };
    let (n1, n2) = (ch.nx1(), ch.nx2());
    let p1 = random_input(seed, n1 * n2);
    let j1 = JointDist::new(n1, n2, p1.clone()).unwrap();
    let (r1, r2) = ch.rate_pair(&j1).unwrap();
    for m in maps {
        let p2 = transpose_input(&p1, n1, n2, m.a, m.b);
        let (s1, s2) = ch.rate_pair(&JointDist::new(n1, n2, p2.clone()).unwrap()).unwrap();
        assert!((r1 - s1).abs() <= 1e-8 && (r2 - s2).abs() <= 1e-8, "transposition {m:?}");
        let mix: Vec<f64> = p1.iter().zip(&p2).map(|(a, b)| 0.5 * (a + b)).collect();
        let (t1, t2) = ch.rate_pair(&JointDist::new(n1, n2, mix).unwrap()).unwrap();
        assert!(t1 >= r1 - 1e-9 && t2 >= r2 - 1e-9, "mixture {m:?}");
    }
}

#[test]
fn lemma_oracles_on_fixtures() {
    for name in FIXTURES {
        let ch = fixture(name).unwrap();
        for seed in 0..20 {
            lemma_oracles(&ch, seed);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn binary_families_satisfy_shannon_and_lemmas(ch in binary_symmetric_family(), seed in any::<u64>()) {
        let r = check_shannon_one_sided(&ch, Side::User1, &quick(seed)).unwrap();
        prop_assert!(r.is_holds());
        lemma_oracles(&ch, seed);
    }

    #[test]
    fn ternary_additive_noise_breaks_transposition_symmetry(a in 0.01..0.3f64, e in 0.0..0.3f64) {
        let ch = gen_qary_noise_erasure(3, a, e, a, e).unwrap();
        prop_assert!(check_shannon_one_sided(&ch, Side::User1, &quick(0)).unwrap().is_fails());
    }

    #[test]
    fn symmetric_families_pass_the_audit(ch in symmetric_family(), seed in any::<u64>()) {
        let o = quick(seed);
        let suite = run_all_conditions(&ch, None, &o).unwrap();
        for r in &suite.reports {
            prop_assert!(replay(&ch, r, &o).unwrap(), "{:?}", r);
        }
        prop_assert!(suite.find(ConditionId::MaximizerInvariance, Some(Side::User1)).unwrap().verdict != Verdict::Fails);
    }

    #[test]
    fn random_channels_replay(seed in any::<u64>(), ny1 in 2usize..=3, ny2 in 2usize..=3) {
        let ch = random_channel(seed, 2, 2, ny1, ny2);
        let o = quick(seed);
        let suite = run_all_conditions(&ch, None, &o).unwrap();
        for r in &suite.reports {
            prop_assert!(replay(&ch, r, &o).unwrap(), "{:?}", r);
        }
    }

    #[test]
    fn column_permutations_are_recognized(seed in any::<u64>(), perm in Just(vec![0usize, 1, 2]).prop_shuffle()) {
        let mut rng = stream_rng(seed, 2);
        let base = Kernel::new((0..3).map(|_| sample_uniform_simplex(&mut rng, 3)).collect()).unwrap();
        let other = base.permute_columns(&perm);
        let r = check_column_permutation_family(&[base.clone(), other.clone()], 1e-9).unwrap();
        prop_assert!(r.is_holds());
        prop_assert!(replay_kernels(&[base, other], &r, 1e-9).unwrap());
    }

    #[test]
    fn user_relabeling_swaps_sides(seed in any::<u64>()) {
        let ch = random_channel(seed, 2, 2, 2, 2);
        let o = quick(seed);
        let a = check_common_maximizer(&ch, Side::User1, &o).unwrap();
        let b = check_common_maximizer(&ch.swap_users(), Side::User2, &o).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
    }
}
