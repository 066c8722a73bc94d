use approx::assert_abs_diff_eq;
use twc_chanlib::{gen_data_access, gen_isd, IsdSpec};
use twc_core::{binary_entropy, entropy, Direction};
use twc_symmetry::{check_column_permutation_family, check_maximizer_capacity, CheckOptions, Verdict, Witness};

fn data_access_rate(m: u32, a: f64, e: f64) -> f64 {
    (1.0 - e) * (m as f64 - binary_entropy(a / (1.0 - e)).unwrap())
}

#[test]
fn data_access_states_share_one_capacity() {
    for m in 1..=3 {
        let (a1, e1, a2, e2) = (0.05, 0.1, 0.12, 0.2);
        let ch = gen_data_access(m, a1, e1, a2, e2).unwrap();
        for dir in [Direction::To2, Direction::To1] {
            let r = check_column_permutation_family(&ch.state_kernels(dir), 1e-9).unwrap();
            assert_eq!(r.verdict, Verdict::Holds, "m={m}");
        }
        let r = check_maximizer_capacity(&ch, &CheckOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        let caps = |i: usize| match &r.parts[i].witness {
            Some(Witness::CommonMaximizer { capacities, .. }) => capacities.clone(),
            w => panic!("{w:?}"),
        };
        for c in caps(0) {
            assert_abs_diff_eq!(c, data_access_rate(m, a2, e2), epsilon = 1e-8);
        }
        for c in caps(1) {
            assert_abs_diff_eq!(c, data_access_rate(m, a1, e1), epsilon = 1e-8);
        }
    }
}

#[test]
fn isd_capacity_matches_output_entropy_bound() {
    let spec = IsdSpec {
        h1: vec![vec![0, 1], vec![1, 0], vec![0, 1]],
        ht1: vec![vec![0, 1], vec![1, 0], vec![0, 1]],
        pz1: vec![0.9, 0.1],
        h2: vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]],
        ht2: vec![vec![0, 1], vec![1, 2], vec![2, 0]],
        pz2: vec![0.7, 0.3],
        ny1: 2,
        ny2: 3,
    };
    let ch = gen_isd(&spec).unwrap();
    let r = check_maximizer_capacity(&ch, &CheckOptions::default()).unwrap();
    assert_eq!(r.verdict, Verdict::Holds);
    let Some(Witness::CommonMaximizer { capacities, p, .. }) = &r.parts[0].witness else { panic!() };
    // T2 = ht2(X1, Z2) is a cyclic shift of Z2's law; uniform X1 makes it uniform.
    let bound = 3f64.log2() - entropy(&spec.pz2);
    for c in capacities {
        assert_abs_diff_eq!(*c, bound, epsilon = 1e-8);
    }
    assert_eq!(p.len(), 3);
    let Some(Witness::CommonMaximizer { capacities, .. }) = &r.parts[1].witness else { panic!() };
    for c in capacities {
        assert_abs_diff_eq!(*c, 1.0 - binary_entropy(0.1).unwrap(), epsilon = 1e-8);
    }
}
