use approx::assert_abs_diff_eq;
use std::time::Instant;
use twc_chanlib::{fixture, gen_binary_additive, gen_qary_noise_erasure};
use twc_core::{binary_entropy, Dist, Exec, TwoWayChannel};
use twc_region::*;

fn opts() -> RegionOptions {
    RegionOptions::default()
}

/// Every vertex within `tol` of a unit-square corner, and every corner
/// within `tol` of the region.
fn square_close(r: &RateRegion2D, tol: f64) {
    let want = [(0.0, 1.0), (1.0, 1.0), (1.0, 0.0)];
    for v in &r.vertices {
        assert!(want.iter().any(|w| (v.0 - w.0).abs() <= tol && (v.1 - w.1).abs() <= tol), "{r:?}");
    }
    assert!(r.hausdorff(&RateRegion2D::rectangle(1.0, 1.0)) <= tol, "{r:?}");
}

fn example1() -> TwoWayChannel {
    gen_qary_noise_erasure(2, 0.05, 0.1, 0.1, 0.2).unwrap()
}

#[test]
fn noiseless_additive_gives_the_unit_square() {
    let ch = gen_binary_additive(0.0, 0.0).unwrap();
    let t = Instant::now();
    let inner = compute_region(&ch, Mode::Inner, 91, &opts()).unwrap();
    let outer = compute_region(&ch, Mode::Outer, 91, &opts()).unwrap();
    assert!(t.elapsed().as_secs_f64() < 1.0, "{:?}", t.elapsed());
    square_close(&inner, 1e-6);
    square_close(&outer, 1e-6);
    for mode in [Mode::Inner, Mode::Outer] {
        assert_abs_diff_eq!(support_value(&ch, 0.5, mode, &opts()).unwrap().value, 1.0, epsilon = 1e-9);
    }
}

#[test]
fn example1_rectangle_matches_closed_form() {
    let ch = example1();
    let r1 = 0.8 * (1.0 - binary_entropy(0.125).unwrap());
    let r2 = 0.9 * (1.0 - binary_entropy(0.05 / 0.9).unwrap());
    assert_abs_diff_eq!(r1, 0.36514, epsilon = 1e-5);
    let inner = compute_region(&ch, Mode::Inner, 91, &opts()).unwrap();
    let outer = compute_region(&ch, Mode::Outer, 91, &opts()).unwrap();
    let exact = closed_form_qary_erasure(2, 0.05, 0.1, 0.1, 0.2).unwrap();
    assert_abs_diff_eq!(exact.max_r1(), r1, epsilon = 1e-12);
    assert_abs_diff_eq!(exact.max_r2(), r2, epsilon = 1e-12);
    assert!(inner.hausdorff(&exact) < 1e-6, "{inner:?}");
    assert!(outer.hausdorff(&exact) < 1e-6, "{outer:?}");
    let s = support_value(&ch, 1.0, Mode::Inner, &opts()).unwrap();
    assert_abs_diff_eq!(s.value, r1, epsilon = 1e-9);
}

#[test]
fn dead_direction_has_zero_support() {
    // Y1 ignores X2: both outputs are functions of X1 alone.
    let rows = (0..4)
        .map(|u| {
            let x1 = u / 2;
            let mut r = vec![0.0; 4];
            r[x1 * 2 + x1] = 1.0;
            r
        })
        .collect();
    let ch = TwoWayChannel::new(2, 2, 2, 2, rows).unwrap();
    for mode in [Mode::Inner, Mode::Outer] {
        assert_abs_diff_eq!(support_value(&ch, 0.0, mode, &opts()).unwrap().value, 0.0, epsilon = 1e-12);
    }
}

#[test]
fn constant_channel_has_only_the_origin() {
    let rows = vec![vec![1.0, 0.0, 0.0, 0.0]; 4];
    let ch = TwoWayChannel::new(2, 2, 2, 2, rows).unwrap();
    for mode in [Mode::Inner, Mode::Outer] {
        assert_eq!(compute_region(&ch, mode, 11, &opts()).unwrap().vertices, vec![(0.0, 0.0)]);
    }
}

#[test]
fn closed_form_examples() {
    let r = closed_form_qary_erasure(2, 0.0, 0.0, 0.0, 0.0).unwrap();
    assert_eq!(r.vertices, vec![(0.0, 1.0), (1.0, 1.0), (1.0, 0.0)]);
    let r = closed_form_qary_erasure(4, 0.0, 0.5, 0.0, 0.5).unwrap();
    assert_abs_diff_eq!(r.max_r1(), 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(r.max_r2(), 1.0, epsilon = 1e-12);
    assert_eq!(qary_erasure_rate(3, 0.0, 1.0).unwrap(), 0.0);
    assert!(qary_erasure_rate(3, 0.6, 0.6).is_err());
    assert!(qary_erasure_rate(1, 0.0, 0.0).is_err());
}

#[test]
fn closed_form_agrees_with_the_inner_search() {
    for (q, dirs) in [(2, 21), (3, 11), (4, 5)] {
        let (a1, e1, a2, e2) = (0.08, 0.1, 0.15, 0.05);
        let ch = gen_qary_noise_erasure(q, a1, e1, a2, e2).unwrap();
        let inner = compute_region(&ch, Mode::Inner, dirs, &opts()).unwrap();
        let exact = closed_form_qary_erasure(q, a1, e1, a2, e2).unwrap();
        assert!(inner.hausdorff(&exact) < 1e-3, "q={q}: {inner:?} vs {exact:?}");
        assert!(exact.contains(&inner, 1e-9), "q={q}");
    }
}

#[test]
fn example4_region_under_the_shared_maximizer() {
    let ch = fixture("example4").unwrap();
    let outer = support_samples(&ch, Mode::Outer, 21, &opts()).unwrap();
    for p0 in [0.5281] {
        let p = Dist::new(vec![p0, 1.0 - p0]).unwrap();
        let region = capacity_under_common_maximizer(&ch, &p, 400).unwrap();
        for s in &outer {
            let h = region.support(s.lambda);
            assert!(h <= s.value + s.gap + 1e-9);
            assert!(s.value - h <= 2e-3, "P*(0)={p0}, λ={}: {} vs {h}", s.lambda, s.value);
        }
    }
}

#[test]
fn common_maximizer_sweeps_on_simple_channels() {
    let ch = gen_binary_additive(0.0, 0.0).unwrap();
    let region = capacity_under_common_maximizer(&ch, &Dist::uniform(2), 50).unwrap();
    square_close(&region, 1e-12);
    let region = capacity_under_common_maximizer(&ch, &Dist::point(2, 0), 50).unwrap();
    assert_eq!(region.vertices.len(), 1);
    assert_abs_diff_eq!(region.vertices[0].0, 0.0);
    assert_abs_diff_eq!(region.vertices[0].1, 1.0, epsilon = 1e-12);
    assert!(capacity_under_common_maximizer(&ch, &Dist::uniform(3), 50).is_err());
}

#[test]
fn motivational_bounds_nearly_coincide() {
    let ch = fixture("motivational").unwrap();
    let inner = support_samples(&ch, Mode::Inner, 21, &opts()).unwrap();
    let outer = support_samples(&ch, Mode::Outer, 21, &opts()).unwrap();
    for (i, o) in inner.iter().zip(&outer) {
        assert!(i.value <= o.value + o.gap + 1e-9);
        assert!(o.value - i.value <= 2e-3, "λ={}: {} vs {}", i.lambda, i.value, o.value);
    }
}

#[test]
fn regions_reproduce_their_own_samples() {
    for name in ["motivational", "example4", "example5"] {
        let ch = fixture(name).unwrap();
        for mode in [Mode::Inner, Mode::Outer] {
            let samples = support_samples(&ch, mode, 21, &opts()).unwrap();
            let region = region_from_samples(mode, &samples);
            for s in &samples {
                let h = region.support(s.lambda);
                let target = s.value + s.gap;
                match mode {
                    Mode::Inner => assert!(h >= s.value - 1e-12, "{name} inner λ={}", s.lambda),
                    Mode::Outer => assert!((h - target).abs() <= 1e-9, "{name} outer λ={}: {h} vs {target}", s.lambda),
                }
            }
        }
    }
}

#[test]
fn parallel_and_sequential_agree() {
    let ch = fixture("example5").unwrap();
    let seq = RegionOptions { exec: Exec::Sequential, ..opts() };
    for mode in [Mode::Inner, Mode::Outer] {
        assert_eq!(support_samples(&ch, mode, 11, &opts()).unwrap(), support_samples(&ch, mode, 11, &seq).unwrap());
    }
}

#[test]
fn argument_validation() {
    let ch = example1();
    assert!(support_value(&ch, 1.5, Mode::Inner, &opts()).is_err());
    assert!(compute_region(&ch, Mode::Outer, 1, &opts()).is_err());
}
