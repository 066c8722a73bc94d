use approx::assert_abs_diff_eq;
use twc_core::{binary_entropy, entropy, Error};
use twc_memory::*;

fn additive(q: usize) -> Vec<Vec<Vec<usize>>> {
    (0..q).map(|x1| (0..q).map(|x2| (0..q).map(|z| (x1 + x2 + z) % q).collect()).collect()).collect()
}

fn additive_spec(q: usize, z1: MarkovNoise, z2: MarkovNoise) -> MemoryChannelSpec {
    MemoryChannelSpec { f1: additive(q), f2: additive(q), ny1: q, ny2: q, noise: MemoryNoise::Independent { z1, z2 } }
}

/// Moves to `s` or `s + 1 mod q` with equal probability.
fn half_step(q: usize) -> MarkovNoise {
    MarkovNoise::new(
        (0..q).map(|s| (0..q).map(|u| if u == s || u == (s + 1) % q { 0.5 } else { 0.0 }).collect()).collect(),
    )
    .unwrap()
}

fn cycle(q: usize) -> MarkovNoise {
    MarkovNoise::new((0..q).map(|s| (0..q).map(|u| f64::from(u == (s + 1) % q)).collect()).collect()).unwrap()
}

fn additive_isd(q: usize, z1: MarkovNoise, z2: MarkovNoise) -> IsdMemorySpec {
    let id: Vec<Vec<usize>> = (0..q).map(|a| (0..q).map(|t| (a + t) % q).collect()).collect();
    IsdMemorySpec { h1: id.clone(), ht1: id.clone(), h2: id.clone(), ht2: id, ny1: q, ny2: q, z1, z2 }
}

#[test]
fn entropy_rate_examples() {
    let r = [0.2, 0.3, 0.5];
    assert_abs_diff_eq!(entropy_rate(&MarkovNoise::iid(&r).unwrap()), entropy(&r), epsilon = 1e-12);
    assert_abs_diff_eq!(entropy_rate(&cycle(2)), 0.0, epsilon = 1e-12);
    let stay = MarkovNoise::binary_stay(0.9).unwrap();
    assert_abs_diff_eq!(stay.stationary()[0], 0.5, epsilon = 1e-12);
    assert_abs_diff_eq!(entropy_rate(&stay), 0.46900, epsilon = 1e-5);
}

#[test]
fn stationary_law_of_an_asymmetric_chain() {
    let m = MarkovNoise::new(vec![vec![0.9, 0.1], vec![0.3, 0.7]]).unwrap();
    assert_abs_diff_eq!(m.stationary()[0], 0.75, epsilon = 1e-12);
    let h = 0.75 * binary_entropy(0.1).unwrap() + 0.25 * binary_entropy(0.3).unwrap();
    assert_abs_diff_eq!(m.entropy_rate(), h, epsilon = 1e-12);
}

#[test]
fn reducible_chains_are_rejected() {
    assert_eq!(MarkovNoise::binary_stay(1.0), Err(Error::NotIrreducible));
    assert_eq!(MarkovNoise::iid(&[1.0, 0.0]), Err(Error::NotIrreducible));
    assert!(matches!(MarkovNoise::new(vec![vec![0.5, 0.6], vec![0.5, 0.5]]), Err(Error::RowSumViolation { .. })));
    assert!(matches!(MarkovNoise::new(vec![vec![1.0, 0.0]]), Err(Error::DimensionMismatch(_))));
}

#[test]
fn theorem9_examples() {
    let quiet = MarkovNoise::binary_stay(0.9).unwrap();
    let uniform = MarkovNoise::iid(&[0.5, 0.5]).unwrap();
    let r = theorem9_region(&additive_spec(2, quiet.clone(), uniform)).unwrap();
    assert_abs_diff_eq!(r.max_r1(), 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(r.max_r2(), 1.0 - binary_entropy(0.1).unwrap(), epsilon = 1e-12);

    let r = theorem9_region(&additive_spec(2, quiet.clone(), quiet)).unwrap();
    assert_abs_diff_eq!(r.max_r1(), 0.53100, epsilon = 1e-5);
    assert_abs_diff_eq!(r.max_r2(), 0.53100, epsilon = 1e-5);
    assert_eq!(r.vertices.len(), 3);

    let z = half_step(4);
    assert_abs_diff_eq!(z.entropy_rate(), 1.0, epsilon = 1e-12);
    let r = theorem9_region(&additive_spec(4, z.clone(), z)).unwrap();
    assert_abs_diff_eq!(r.max_r1(), 1.0, epsilon = 1e-12);
}

#[test]
fn theorem9_structural_violations() {
    let z = MarkovNoise::binary_stay(0.8).unwrap();
    let mut spec = additive_spec(2, z.clone(), z.clone());
    spec.f2 = (0..2).map(|_| (0..2).map(|x2| (0..2).map(|s| x2 ^ s).collect()).collect()).collect();
    assert!(matches!(theorem9_region(&spec), Err(Error::StructuralViolation(_))));

    let mut spec = additive_spec(2, z.clone(), z.clone());
    spec.ny1 = 3;
    assert!(matches!(theorem9_region(&spec), Err(Error::StructuralViolation(_))));

    let mut spec = additive_spec(2, z.clone(), z);
    spec.noise = MemoryNoise::Joint { joint: JointMarkovNoise::example8() };
    assert!(matches!(theorem9_region(&spec), Err(Error::StructuralViolation(_))));

    let mut spec = additive_spec(2, cycle(2), cycle(2));
    spec.f1[0][0] = vec![1, 1];
    assert!(matches!(theorem9_region(&spec), Err(Error::NotInjective { .. })));
}

#[test]
fn lemma3_on_the_lagged_noise() {
    let r = lemma3_outer(&JointMarkovNoise::example8(), 2, 2).unwrap();
    assert_eq!(r.vertices, vec![(1.0, 0.0)]);
    let r = lemma3_outer(&JointMarkovNoise::lagged_copy(0.1), 2, 2).unwrap();
    assert_abs_diff_eq!(r.max_r1(), 1.0 - binary_entropy(0.1).unwrap(), epsilon = 1e-12);
    assert_abs_diff_eq!(r.max_r2(), 0.0, epsilon = 1e-12);
}

#[test]
fn lemma3_with_independent_noise_is_theorem9() {
    let z1 = MarkovNoise::new(vec![vec![0.9, 0.1], vec![0.3, 0.7]]).unwrap();
    let z2 = MarkovNoise::iid(&[0.25, 0.75]).unwrap();
    let spec = additive_spec(2, z1, z2);
    let inner = theorem9_region(&spec).unwrap();
    let outer = lemma3_outer(&spec.noise.joint(), 2, 2).unwrap();
    assert!(inner.hausdorff(&outer) < 1e-12);
}

#[test]
fn component_entropy_rates() {
    let (lo, hi) = JointMarkovNoise::example8().component_entropy_rate_bounds(2, 8);
    assert_abs_diff_eq!(lo, 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(hi, 1.0, epsilon = 1e-12);
    let z = MarkovNoise::binary_stay(0.9).unwrap();
    let joint = JointMarkovNoise::independent(&MarkovNoise::iid(&[0.5, 0.5]).unwrap(), &z);
    let (lo, hi) = joint.component_entropy_rate_bounds(2, 6);
    assert_abs_diff_eq!(lo, z.entropy_rate(), epsilon = 1e-12);
    assert_abs_diff_eq!(hi, z.entropy_rate(), epsilon = 1e-12);
}

#[test]
fn theorem10_examples() {
    let z = MarkovNoise::binary_stay(0.9).unwrap();
    let r = theorem10_region(&additive_isd(2, z.clone(), z.clone()), None).unwrap();
    assert_abs_diff_eq!(r.max_r1(), 0.53100, epsilon = 1e-5);

    let r = theorem10_region(&additive_isd(3, cycle(3), cycle(3)), None).unwrap();
    assert_abs_diff_eq!(r.max_r1(), 3f64.log2(), epsilon = 1e-12);
    assert_abs_diff_eq!(r.max_r2(), 3f64.log2(), epsilon = 1e-12);

    let mut wide = additive_isd(2, z.clone(), z.clone());
    wide.ht2 = vec![vec![0, 1], vec![1, 2]];
    wide.h2 = vec![vec![0, 1, 2], vec![1, 2, 0]];
    wide.ny2 = 3;
    assert!(matches!(theorem10_region(&wide, None), Err(Error::UnsupportedLimit(_))));
    let r = theorem10_region(&wide, Some((1.5, 1.0))).unwrap();
    assert_abs_diff_eq!(r.max_r1(), 1.5 - z.entropy_rate(), epsilon = 1e-12);
}

#[test]
fn theorem10_matches_theorem9_when_cardinalities_match() {
    for q in 2..=4 {
        let spec = additive_isd(q, half_step(q), cycle(q));
        assert!(spec.cardinality_matched());
        let isd = theorem10_region(&spec, None).unwrap();
        let general = theorem9_region(&spec.to_channel_spec().unwrap()).unwrap();
        assert!(isd.hausdorff(&general) < 1e-12, "q={q}");
    }
}

#[test]
fn example8_first_symbol() {
    for seed in 0..20 {
        let run = example8_simulate(1, seed);
        assert_eq!(run.decoded, run.sent);
    }
}

#[test]
fn example8_is_error_free() {
    for seed in 0..100 {
        let run = example8_simulate(10_000, seed);
        assert_eq!(run.errors, 0, "seed {seed}");
        assert_eq!(run.rate, 1.0);
        assert_eq!(run.decoded, run.sent);
    }
}

#[test]
fn example8_report_contrasts_the_bounds() {
    let r = example8_report(1000, 7);
    assert_eq!(r.errors, 0);
    assert_eq!(r.rate, 1.0);
    assert_abs_diff_eq!(r.shannon_type_bound, 0.0, epsilon = 1e-12);
    assert_eq!(r.outer_bound, (1.0, 0.0));
    assert_eq!(example8_simulate(50, 3), example8_simulate(50, 3));
}

#[test]
fn specs_round_trip_through_json() {
    let spec = additive_spec(2, MarkovNoise::binary_stay(0.9).unwrap(), cycle(2));
    let back: MemoryChannelSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
    assert_eq!(back, spec);
    let joint = MemoryNoise::Joint { joint: JointMarkovNoise::lagged_copy(0.2) };
    let back: MemoryNoise = serde_json::from_str(&serde_json::to_string(&joint).unwrap()).unwrap();
    assert_eq!(back, joint);
    assert!(serde_json::from_str::<MarkovNoise>("[[1.0,0.0],[0.0,1.0]]").is_err());
}
