//! End-to-end reruns of the worked examples. Each rerun lists the stated
//! outcome next to the computed one.

use serde::Serialize;
use twc_chanlib::{fixture, gen_binary_additive, gen_data_access, gen_isd, gen_qary_noise_erasure, IsdSpec};
use twc_core::{binary_entropy, Direction, Error, Result, TwoWayChannel};
use twc_madb::{
    check_madb_exmain, check_madb_exmain2, check_madb_exsc, gen_madb, madb_support_pair, MadbChannel, MadbFamily,
    MadbOptions,
};
use twc_memory::{example8_report, lemma3_outer, JointMarkovNoise, MarkovNoise};
use twc_region::{
    closed_form_qary_erasure, compute_region, region_hausdorff, support_samples, Mode, RateRegion2D, RegionOptions,
};
use twc_symmetry::{
    check_column_permutation_family, check_common_maximizer, check_cva, check_cva_dominance_part,
    check_cva_entropy_part, check_extended_shannon, check_maximizer_capacity, check_maximizer_invariance,
    check_quasi_symmetric, check_shannon_one_sided, check_shannon_two_sided, CheckOptions, ConditionReport,
    Counterexample, Side, Verdict, Witness,
};

/// Identifiers accepted by [`repro`].
pub const REPRO_IDS: [&str; 12] = [
    "remark1",
    "motivational",
    "example1",
    "example2",
    "example3",
    "example4",
    "example5",
    "example6",
    "example8",
    "example9",
    "example10",
    "example11",
];

/// One stated outcome and whether the computation reproduces it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReproCheck {
    pub claim: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Copy)]
pub struct ReproOptions {
    pub check: CheckOptions,
    pub grid: usize,
    pub directions: usize,
}

impl Default for ReproOptions {
    fn default() -> Self {
        Self { check: CheckOptions::default(), grid: 50, directions: 91 }
    }
}

impl ReproOptions {
    fn region(&self) -> RegionOptions {
        RegionOptions { grid: self.grid, seed: self.check.seed, exec: self.check.exec, ..RegionOptions::default() }
    }
}

struct Log(Vec<ReproCheck>);

impl Log {
    fn push(&mut self, claim: &str, passed: bool, detail: String) {
        self.0.push(ReproCheck { claim: claim.to_string(), passed, detail });
    }

    fn verdict(&mut self, claim: &str, r: &ConditionReport, want: Verdict) {
        self.push(claim, r.verdict == want, format!("{:?}", r.verdict).to_lowercase());
    }
}

fn corners(r: &RateRegion2D) -> String {
    format!("R1 ≤ {:.5}, R2 ≤ {:.5}", r.max_r1(), r.max_r2())
}

fn hb(p: f64) -> f64 {
    binary_entropy(p).expect("probability in range")
}

/// Rerun example `id` and report every stated outcome.
pub fn repro(id: &str, o: &ReproOptions) -> Result<Vec<ReproCheck>> {
    let mut log = Log(Vec::new());
    let opts = &o.check;
    match id {
        "remark1" => {
            let ch = gen_binary_additive(0.0, 0.0)?;
            let square = RateRegion2D::rectangle(1.0, 1.0);
            for (mode, claim) in
                [(Mode::Inner, "inner region is the unit square"), (Mode::Outer, "outer region is the unit square")]
            {
                let r = compute_region(&ch, mode, o.directions, &o.region())?;
                let d = region_hausdorff(&r, &square);
                log.push(claim, d <= 1e-6, format!("Hausdorff distance {d:.2e}"));
            }
        }
        "motivational" => {
            let ch = fixture("motivational")?;
            for (d, claim) in [
                (Direction::To2, "states toward user 2 are column permutations"),
                (Direction::To1, "states toward user 1 are column permutations"),
            ] {
                let r = check_column_permutation_family(&ch.state_kernels(d), opts.matrix_tol)?;
                log.verdict(claim, &r, Verdict::Holds);
            }
            let gap = support_gap(&ch, 21, o)?;
            log.push(
                "inner and outer supports agree within 2e-3 at 21 directions",
                gap <= 2e-3,
                format!("largest difference {gap:.2e}"),
            );
        }
        "example1" => {
            let ch = gen_qary_noise_erasure(2, 0.05, 0.1, 0.1, 0.2)?;
            let closed = closed_form_qary_erasure(2, 0.05, 0.1, 0.1, 0.2)?;
            let r1 = 0.8 * (1.0 - hb(0.125));
            log.push(
                "closed-form corner R1 = 0.8(1 − H_b(0.125)) ≈ 0.36514",
                (closed.max_r1() - r1).abs() <= 1e-9,
                corners(&closed),
            );
            let grid = compute_region(&ch, Mode::Inner, o.directions, &o.region())?;
            let err = (grid.max_r1() - closed.max_r1()).abs().max((grid.max_r2() - closed.max_r2()).abs());
            log.push(
                "grid computation matches the closed form within 1e-3",
                err <= 1e-3,
                format!("{} (difference {err:.2e})", corners(&grid)),
            );
            for d in [Direction::To2, Direction::To1] {
                let qs = ch
                    .state_kernels(d)
                    .iter()
                    .map(|k| check_quasi_symmetric(k, opts.matrix_tol))
                    .collect::<Result<Vec<_>>>()?;
                let all = qs.iter().all(ConditionReport::is_holds);
                log.push("every state kernel is quasi-symmetric", all, format!("{d:?}"));
            }
        }
        "example2" => {
            let ch = gen_data_access(1, 0.05, 0.1, 0.1, 0.2)?;
            let r1 = 0.8 * (1.0 - hb(0.125));
            let grid = compute_region(&ch, Mode::Inner, o.directions, &o.region())?;
            log.push("corner R1 = 0.8(1 − H_b(0.125)) for m = 1", (grid.max_r1() - r1).abs() <= 1e-3, corners(&grid));
        }
        "example3" => {
            let spec = IsdSpec {
                h1: vec![vec![0, 1], vec![1, 0]],
                ht1: vec![vec![0, 1], vec![1, 0]],
                pz1: vec![0.9, 0.1],
                h2: vec![vec![0, 1], vec![1, 0]],
                ht2: vec![vec![0, 1], vec![1, 0]],
                pz2: vec![0.8, 0.2],
                ny1: 2,
                ny2: 2,
            };
            let ch = gen_isd(&spec)?;
            let r = check_maximizer_capacity(&ch, opts)?;
            log.verdict("common maximizers with state-independent rates", &r, Verdict::Holds);
            let gap = support_gap(&ch, 11, o)?;
            log.push("inner and outer bounds coincide", gap <= 2e-3, format!("largest support difference {gap:.2e}"));
        }
        "example4" => {
            let ch = fixture("example4")?;
            let cm = check_common_maximizer(&ch, Side::User1, opts)?;
            let p0 = match &cm.witness {
                Some(Witness::CommonMaximizer { p, .. }) => p[0],
                _ => f64::NAN,
            };
            log.push(
                "common maximizer P*(0) = 0.471",
                (p0 - 0.471).abs() <= 0.005,
                format!("P*(0) = {p0:.4}, P*(1) = {:.4}", 1.0 - p0),
            );
            log.verdict(
                "one-sided Shannon condition fails",
                &check_shannon_one_sided(&ch, Side::User1, opts)?,
                Verdict::Fails,
            );
            let cva = check_cva(&ch, Side::User1, opts);
            let witness = match &cva.counterexample {
                Some(Counterexample::RowEntropy { entropies, .. }) => {
                    (entropies[0] - hb(0.1)).abs() < 1e-9 && (entropies[1] - hb(0.3)).abs() < 1e-9
                }
                _ => false,
            };
            log.push(
                "CVA fails with H_b(0.1) against H_b(0.3)",
                cva.is_fails() && witness,
                serde_json::to_string(&cva.counterexample).expect("counterexample serializes"),
            );
            log.verdict(
                "common maximizer plus invariance holds",
                &check_maximizer_invariance(&ch, Side::User1, opts)?,
                Verdict::Holds,
            );
        }
        "example5" => {
            let ch = fixture("example5")?;
            log.verdict(
                "one-sided Shannon condition fails",
                &check_shannon_one_sided(&ch, Side::User1, opts)?,
                Verdict::Fails,
            );
            log.verdict("two-sided Shannon condition fails", &check_shannon_two_sided(&ch, opts)?, Verdict::Fails);
            log.verdict("extended condition holds", &check_extended_shannon(&ch, Side::User1, opts)?, Verdict::Holds);
        }
        "example6" => {
            let ch = fixture("example6")?;
            log.verdict(
                "extended one-sided condition fails",
                &check_extended_shannon(&ch, Side::User1, opts)?,
                Verdict::Fails,
            );
            log.verdict(
                "CVA noise-entropy part holds",
                &check_cva_entropy_part(&ch, Side::User1, opts.tol),
                Verdict::Holds,
            );
            let dom = check_cva_dominance_part(&ch, Side::User1, opts);
            log.verdict("CVA dominance part survives sampling", &dom, Verdict::NotFalsified);
        }
        "example8" => {
            let seeds = 100u64;
            let n = 10_000;
            let errors: usize = (0..seeds).map(|s| example8_report(n, opts.seed.wrapping_add(s)).errors).sum();
            log.push(
                "adaptive code decodes without error (n = 10^4, 100 seeds)",
                errors == 0,
                format!("{errors} errors"),
            );
            let rep = example8_report(n, opts.seed);
            log.push(
                "Shannon-type bound gives R1 ≤ 0",
                rep.shannon_type_bound.abs() <= 1e-9,
                format!("{:.6}", rep.shannon_type_bound),
            );
            let outer = lemma3_outer(&JointMarkovNoise::example8(), 2, 2)?;
            let ok = outer.max_r1() == 1.0 && outer.max_r2() == 0.0;
            log.push("outer rectangle is (1, 0)", ok, corners(&outer));
            let rate = MarkovNoise::binary_stay(0.9)?.entropy_rate();
            let ok = (rate - hb(0.1)).abs() <= 1e-6 && format!("{rate:.5}") == "0.46900";
            log.push("two-state noise with stay 0.9 has entropy rate 0.46900", ok, format!("{rate:.9}"));
        }
        "example9" => {
            let ch = madb_additive(2, vec![0.9, 0.1])?;
            let (inner, outer) = madb_support_pair(&ch, [1.0, 1.0, 0.0, 0.0], &madb_options(opts))?;
            let c = 1.0 - hb(0.1);
            log.push(
                "sum rate 1 − H_b(0.1) ≈ 0.531",
                (inner.value - c).abs() <= 1e-6 && (outer.value - c).abs() <= 1e-6,
                format!("inner {:.6}, outer {:.6}", inner.value, outer.value),
            );
            let ternary = madb_additive(3, vec![0.7, 0.2, 0.1])?;
            log.verdict("relabeling condition fails (q = 3)", &check_madb_exsc(&ternary, opts)?, Verdict::Fails);
            log.verdict("relabeling condition fails (q = 2)", &check_madb_exsc(&ch, opts)?, Verdict::Fails);
            log.verdict("uniform product dominates", &check_madb_exmain(&ch, opts)?, Verdict::NotFalsified);
        }
        "example10" => {
            let ch = gen_madb(&MadbFamily::Example10 { eps: 0.2, pz1: vec![0.9, 0.1], pz2: vec![0.8, 0.2] })?;
            log.verdict(
                "maximizer-invariance conditions hold (worked example)",
                &check_madb_exmain2(&ch, opts)?,
                Verdict::Holds,
            );
            log.verdict(
                "maximizer-invariance conditions fail (summary claim)",
                &check_madb_exmain2(&ch, opts)?,
                Verdict::Fails,
            );
            log.verdict("relabeling condition fails", &check_madb_exsc(&ch, opts)?, Verdict::Fails);
        }
        "example11" => {
            let ch = gen_madb(&MadbFamily::Erasure { eps: 0.1, pz1: vec![0.9, 0.1], pz2: vec![0.8, 0.2] })?;
            log.verdict("relabeling condition holds", &check_madb_exsc(&ch, opts)?, Verdict::Holds);
            let (inner, outer) = madb_support_pair(&ch, [1.0, 1.0, 0.0, 0.0], &madb_options(opts))?;
            let d = (inner.value - outer.value).abs();
            log.push(
                "inner and outer sum-rate supports agree",
                d <= 5e-3,
                format!("inner {:.6}, outer {:.6}", inner.value, outer.value),
            );
            let c = 1.0 - hb(0.1);
            let ok = (inner.value - c).abs() <= 5e-3 && (outer.value - c).abs() <= 5e-3;
            log.push("sum-rate support equals 1 − H_b(0.1) ≈ 0.531", ok, format!("inner {:.6}", inner.value));
        }
        other => return Err(Error::UnknownFixture(other.to_string())),
    }
    Ok(log.0)
}

fn madb_additive(q: usize, pz3: Vec<f64>) -> Result<MadbChannel> {
    let mut pz = vec![0.0; q];
    pz[0] = 0.9;
    pz[1] = 0.1;
    gen_madb(&MadbFamily::Additive { q, pz1: pz.clone(), pz2: pz, pz3 })
}

fn madb_options(opts: &CheckOptions) -> MadbOptions {
    MadbOptions { seed: opts.seed, exec: opts.exec, ..MadbOptions::default() }
}

/// Largest difference between outer and inner support values over `n`
/// directions.
fn support_gap(ch: &TwoWayChannel, n: usize, o: &ReproOptions) -> Result<f64> {
    let inner = support_samples(ch, Mode::Inner, n, &o.region())?;
    let outer = support_samples(ch, Mode::Outer, n, &o.region())?;
    Ok(inner.iter().zip(&outer).map(|(i, u)| u.value + u.gap - i.value).fold(0.0, f64::max))
}
