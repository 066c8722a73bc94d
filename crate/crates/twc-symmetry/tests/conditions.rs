use approx::assert_abs_diff_eq;
use twc_chanlib::{fixture, gen_binary_additive, gen_isd, gen_qary_noise_erasure, IsdSpec};
use twc_core::{binary_entropy, Direction, Kernel, TwoWayChannel};
use twc_symmetry::*;

fn opts() -> CheckOptions {
    CheckOptions::default()
}

fn quick() -> CheckOptions {
    CheckOptions { trials: 500, ..CheckOptions::default() }
}

fn k(rows: &[&[f64]]) -> Kernel {
    Kernel::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
}

fn bsc(p: f64) -> Kernel {
    Kernel::bsc(p)
}

/// Channel from its reverse kernels (indexed by x1, rows x2) and forward
/// kernels (indexed by x2, rows x1).
fn from_slices(to1: Vec<Kernel>, to2: Vec<Kernel>) -> TwoWayChannel {
    TwoWayChannel::from_marginals(&to1, &to2).unwrap()
}

fn echo() -> TwoWayChannel {
    let rows = (0..4).map(|i| (0..4).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    TwoWayChannel::new(2, 2, 2, 2, rows).unwrap()
}

fn example4_with_reverse(to1: Vec<Kernel>) -> TwoWayChannel {
    let ch = fixture("example4").unwrap();
    from_slices(to1, ch.state_kernels(Direction::To2))
}

fn isd() -> TwoWayChannel {
    gen_isd(&IsdSpec {
        h1: vec![vec![0, 1, 2], vec![2, 1, 0]],
        ht1: vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]],
        pz1: vec![0.6, 0.3, 0.1],
        h2: vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]],
        ht2: vec![vec![0, 1], vec![1, 2]],
        pz2: vec![0.8, 0.2],
        ny1: 3,
        ny2: 3,
    })
    .unwrap()
}

fn replays(ch: &TwoWayChannel, r: &ConditionReport) {
    assert!(replay(ch, r, &opts()).unwrap(), "report does not replay: {r:?}");
}

#[test]
fn shannon_one_sided_verdicts() {
    let additive = gen_binary_additive(0.1, 0.2).unwrap();
    let r = check_shannon_one_sided(&additive, Side::User1, &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Holds);
    let Some(Witness::Permutations { maps }) = &r.witness else { panic!() };
    assert_eq!(maps[0].pi_y1, vec![1, 0]);
    assert_eq!(maps[0].pi_y2, vec![1, 0]);
    replays(&additive, &r);
    for name in ["example4", "example5"] {
        let ch = fixture(name).unwrap();
        let r = check_shannon_one_sided(&ch, Side::User1, &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Fails, "{name}");
        replays(&ch, &r);
    }
}

#[test]
fn shannon_two_sided_verdicts() {
    let additive = fixture("binary-additive").unwrap();
    assert!(check_shannon_two_sided(&additive, &opts()).unwrap().is_holds());
    let ch = fixture("example4").unwrap();
    let r = check_shannon_two_sided(&ch, &opts()).unwrap();
    assert!(r.is_fails());
    replays(&ch, &r);
    let r = check_shannon_two_sided(&echo(), &opts()).unwrap();
    assert!(r.is_holds());
    replays(&echo(), &r);
}

#[test]
fn shannon_budget_is_enforced() {
    let ch = gen_qary_noise_erasure(6, 0.1, 0.1, 0.1, 0.1).unwrap();
    let err = check_shannon_one_sided(&ch, Side::User1, &opts()).unwrap_err();
    assert!(matches!(err, twc_core::Error::SearchBudgetExceeded { .. }));
}

#[test]
fn extended_condition_verdicts() {
    let ch5 = fixture("example5").unwrap();
    let r = check_extended_shannon(&ch5, Side::User1, &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Holds);
    replays(&ch5, &r);
    let ch6 = fixture("example6").unwrap();
    let r = check_extended_shannon(&ch6, Side::User1, &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Fails);
    replays(&ch6, &r);
    let additive = gen_binary_additive(0.1, 0.2).unwrap();
    assert!(check_extended_shannon(&additive, Side::User1, &opts()).unwrap().is_holds());
}

#[test]
fn cva_example4_fails_on_noise_entropy() {
    let ch = fixture("example4").unwrap();
    let r = check_cva(&ch, Side::User1, &opts());
    assert_eq!(r.verdict, Verdict::Fails);
    let Some(Counterexample::RowEntropy { output, state, a, b, entropies }) = r.counterexample.clone() else {
        panic!("{r:?}")
    };
    assert_eq!((output, state, a, b), (2, 0, 0, 1));
    assert_abs_diff_eq!(entropies[0], binary_entropy(0.1).unwrap(), epsilon = 1e-12);
    assert_abs_diff_eq!(entropies[1], binary_entropy(0.3).unwrap(), epsilon = 1e-12);
    replays(&ch, &r);
}

#[test]
fn cva_example6_and_additive_survive_sampling() {
    for ch in [fixture("example6").unwrap(), gen_binary_additive(0.1, 0.2).unwrap()] {
        let r = check_cva(&ch, Side::User1, &opts());
        assert_eq!(r.parts[0].verdict, Verdict::Holds);
        assert_eq!(r.parts[1].verdict, Verdict::NotFalsified);
        assert_eq!(r.parts[1].trials, 10_000);
        assert_eq!(r.verdict, Verdict::NotFalsified);
    }
}

#[test]
fn cva_dominance_failure_is_certified() {
    // Entropy-invariant rows but a forward channel whose states prefer
    // opposite inputs: Y2 is X1 in state 0 and a fixed symbol otherwise
    // reachable only through X1 = 1 in state 1.
    let to2 = vec![k(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]), k(&[&[0.0, 0.0, 1.0], &[0.0, 0.0, 1.0]])];
    let to1 = vec![k(&[&[1.0, 0.0], &[0.0, 1.0]]), k(&[&[1.0, 0.0], &[1.0, 0.0]])];
    let ch = from_slices(to1, to2);
    let r = check_cva(&ch, Side::User1, &quick());
    assert!(r.is_fails(), "{r:?}");
    replays(&ch, &r);
}

#[test]
fn common_maximizer_verdicts() {
    let ch4 = fixture("example4").unwrap();
    let r = check_common_maximizer(&ch4, Side::User1, &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Holds);
    let Some(Witness::CommonMaximizer { p, max_tv, .. }) = &r.witness else { panic!() };
    // The shared maximizer puts 0.528 on the first symbol and 0.472 on the second.
    assert_abs_diff_eq!(p[1], 0.4719, epsilon = 5e-4);
    assert!(*max_tv < 1e-4);
    replays(&ch4, &r);

    let ch1 = gen_qary_noise_erasure(2, 0.05, 0.1, 0.1, 0.2).unwrap();
    let r = check_common_maximizer(&ch1, Side::User1, &opts()).unwrap();
    let Some(Witness::CommonMaximizer { p, .. }) = &r.witness else { panic!() };
    assert_abs_diff_eq!(p[0], 0.5, epsilon = 1e-9);

    let z = k(&[&[1.0, 0.0], &[0.5, 0.5]]);
    let ch = from_slices(vec![bsc(0.1), bsc(0.1)], vec![bsc(0.1), z]);
    let r = check_common_maximizer(&ch, Side::User1, &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Fails);
    replays(&ch, &r);
}

#[test]
fn invariance_verdicts() {
    let ch4 = fixture("example4").unwrap();
    let r = check_invariance_all_inputs(&ch4, Direction::To1, InvarianceMode::Structural, &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Holds);
    replays(&ch4, &r);
    let ch1 = gen_qary_noise_erasure(2, 0.05, 0.1, 0.1, 0.2).unwrap();
    for d in [Direction::To2, Direction::To1] {
        assert!(check_invariance_all_inputs(&ch1, d, InvarianceMode::Structural, &opts()).unwrap().is_holds());
    }
    let ch = from_slices(vec![bsc(0.2), bsc(0.2)], vec![bsc(0.1), bsc(0.3)]);
    for mode in [InvarianceMode::Structural, InvarianceMode::Randomized] {
        let r = check_invariance_all_inputs(&ch, Direction::To2, mode, &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        replays(&ch, &r);
    }
}

#[test]
fn randomized_invariance_survives_on_permuted_states() {
    let ch1 = gen_qary_noise_erasure(2, 0.05, 0.1, 0.1, 0.2).unwrap();
    let r = check_invariance_all_inputs(&ch1, Direction::To2, InvarianceMode::Randomized, &quick()).unwrap();
    assert_eq!(r.verdict, Verdict::NotFalsified);
    assert_eq!(r.trials, 500);
}

#[test]
fn maximizer_capacity_verdicts() {
    for ch in [isd(), gen_qary_noise_erasure(2, 0.05, 0.1, 0.1, 0.2).unwrap()] {
        let r = check_maximizer_capacity(&ch, &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds, "{r:?}");
        replays(&ch, &r);
    }
    let ch = from_slices(vec![bsc(0.2), bsc(0.2)], vec![bsc(0.1), bsc(0.3)]);
    let r = check_maximizer_capacity(&ch, &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Fails);
    assert!(matches!(r.counterexample, Some(Counterexample::StateRates { .. })));
    replays(&ch, &r);
}

#[test]
fn maximizer_entropy_verdicts() {
    let ch4 = fixture("example4").unwrap();
    let r = check_maximizer_entropy(&ch4, Side::User1, &opts()).unwrap();
    assert_ne!(r.verdict, Verdict::Fails);
    replays(&ch4, &r);
    let additive = gen_binary_additive(0.1, 0.2).unwrap();
    assert_eq!(check_maximizer_entropy(&additive, Side::User1, &opts()).unwrap().verdict, Verdict::Holds);
    let ch = example4_with_reverse(vec![bsc(0.1), bsc(0.3)]);
    let r = check_maximizer_entropy(&ch, Side::User1, &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Fails);
    assert!(matches!(r.counterexample, Some(Counterexample::RowEntropy { output: 1, .. })));
    replays(&ch, &r);
}

#[test]
fn maximizer_invariance_on_example4() {
    let ch4 = fixture("example4").unwrap();
    let r = check_maximizer_invariance(&ch4, Side::User1, &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Holds);
    replays(&ch4, &r);
}

#[test]
fn corollary_style_structural_checks() {
    let ch1 = gen_qary_noise_erasure(3, 0.05, 0.1, 0.1, 0.2).unwrap();
    let r = check_quasi_symmetric_permuted(&ch1, Side::User1, &opts()).unwrap();
    assert!(r.is_holds());
    replays(&ch1, &r);
    let r = check_permuted_both(&ch1, &opts()).unwrap();
    assert!(r.is_holds());
    replays(&ch1, &r);
    let ch4 = fixture("example4").unwrap();
    let r = check_permuted_both(&ch4, &opts()).unwrap();
    assert!(r.is_fails());
    replays(&ch4, &r);
}

#[test]
fn audit_is_consistent_on_fixtures() {
    let o = quick();
    let mut channels: Vec<(String, TwoWayChannel)> =
        twc_chanlib::FIXTURES.iter().map(|n| (n.to_string(), fixture(n).unwrap())).collect();
    channels.push(("additive".into(), gen_binary_additive(0.1, 0.2).unwrap()));
    channels.push(("erasure".into(), gen_qary_noise_erasure(2, 0.05, 0.1, 0.1, 0.2).unwrap()));
    channels.push(("isd".into(), isd()));
    channels.push(("echo".into(), echo()));
    for (name, ch) in channels {
        let suite = run_all_conditions(&ch, None, &o).unwrap_or_else(|e| panic!("{name}: {e}"));
        for r in &suite.reports {
            assert!(replay(&ch, r, &o).unwrap(), "{name}: {r:?}");
        }
    }
}

#[test]
fn audit_example_verdicts() {
    let o = quick();
    let ch4 = fixture("example4").unwrap();
    let s = run_all_conditions(&ch4, None, &o).unwrap();
    assert!(s.find(ConditionId::ShannonOneSided, Some(Side::User1)).unwrap().is_fails());
    assert!(s.find(ConditionId::Cva, Some(Side::User1)).unwrap().is_fails());
    assert!(s.find(ConditionId::MaximizerInvariance, Some(Side::User1)).unwrap().is_holds());

    let additive = gen_binary_additive(0.1, 0.2).unwrap();
    let s = run_all_conditions(&additive, None, &o).unwrap();
    assert!(s.implications_checked.iter().any(|t| t == "shannon_one_sided[user1] => maximizer_invariance[user1]"));

    let ch5 = fixture("example5").unwrap();
    let s = run_all_conditions(&ch5, None, &o).unwrap();
    assert!(s.implications_checked.iter().any(|t| t == "extended_shannon[user1] => cva[user1]"));
}

#[test]
fn audit_flags_contradictions() {
    let mut holds = ConditionReport::holds(ConditionId::ShannonOneSided, None).with_side(Side::User1);
    let fails = ConditionReport::fails(ConditionId::MaximizerInvariance, Counterexample::Exhausted { candidates: 0 })
        .with_side(Side::User1);
    assert!(matches!(audit(&[holds.clone(), fails]), Err(twc_core::Error::InconsistentImplication(_))));
    holds.verdict = Verdict::Fails;
    assert!(audit(&[holds]).unwrap().is_empty());
}

#[test]
fn randomized_checks_are_deterministic_and_mode_independent() {
    let ch = fixture("example6").unwrap();
    let seq = CheckOptions { exec: twc_core::Exec::Sequential, ..quick() };
    let a = check_cva(&ch, Side::User1, &quick());
    let b = check_cva(&ch, Side::User1, &seq);
    assert_eq!(a, b);
    let bad = from_slices(vec![bsc(0.2), bsc(0.2)], vec![bsc(0.1), bsc(0.11)]);
    let a = check_invariance_all_inputs(&bad, Direction::To2, InvarianceMode::Randomized, &quick()).unwrap();
    let b = check_invariance_all_inputs(&bad, Direction::To2, InvarianceMode::Randomized, &seq).unwrap();
    assert_eq!(a, b);
}

#[test]
fn reports_round_trip_through_json() {
    let ch = fixture("example4").unwrap();
    let s = run_all_conditions(&ch, None, &quick()).unwrap();
    let text = serde_json::to_string(&s).unwrap();
    let back: ConditionSuite = serde_json::from_str(&text).unwrap();
    assert_eq!(back, s);
}
