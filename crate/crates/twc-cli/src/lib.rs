//! Command-line front end: channel files, condition checks, region export,
//! generators, the three-user and memory tools, and example reruns.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical non-convergence,
//! 4 search budget exceeded. A failing condition is reported as data.

pub mod file;
pub mod repro;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use twc_core::simplex::{sample_uniform_simplex, stream_rng};
use twc_core::TwoWayChannel;
use twc_madb::{gen_madb, madb_audit, madb_sweep, MadbChannel, MadbFamily, MadbOptions};
use twc_memory::{
    example8_report, lemma3_outer, theorem10_region, theorem9_region, JointMarkovNoise, MarkovNoise, MemoryChannelSpec,
    MemoryNoise,
};
use twc_region::{compute_region, sig9, Mode, RateRegion2D, RegionOptions};
use twc_symmetry::{run_all_conditions, CheckOptions, ConditionId, ConditionReport, Side};

pub use file::{ChannelFile, MemoryModel, TwcMatrix};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Lib(#[from] twc_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(twc_core::Error::NonConvergence { .. }) => 3,
            CliError::Lib(twc_core::Error::SearchBudgetExceeded { .. }) => 4,
            _ => 2,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "twc", version, about = "Capacity regions and tightness conditions of two-way channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the tightness conditions on a channel file.
    Check(CheckArgs),
    /// Export the inner and/or outer region as CSV.
    Region(RegionArgs),
    /// Write a generated channel file.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
    },
    /// Three-user multiple-access / broadcast tools.
    Madb {
        #[command(subcommand)]
        command: MadbCommand,
    },
    /// Simulate the adaptive code on noise with memory.
    Memsim {
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Rerun a worked example and print a pass/fail summary.
    Repro {
        /// One of: remark1, motivational, example1..example6, example8..example11.
        id: String,
        #[command(flatten)]
        opts: CheckFlags,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args, Clone)]
struct CheckFlags {
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

impl CheckFlags {
    fn options(&self) -> CliResult<CheckOptions> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::Input(format!("tolerance {} must be positive", self.tol)));
        }
        Ok(CheckOptions { trials: self.trials, seed: self.seed, tol: self.tol, ..CheckOptions::default() })
    }
}

#[derive(Debug, Args)]
struct CheckArgs {
    file: PathBuf,
    /// Comma-separated condition names; all applicable ones by default.
    #[arg(long, value_delimiter = ',')]
    conditions: Vec<String>,
    #[command(flatten)]
    flags: CheckFlags,
    /// Print the full reports as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Bound {
    Inner,
    Outer,
    Both,
}

#[derive(Debug, Args)]
struct RegionArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = Bound::Both)]
    bound: Bound,
    #[arg(long, default_value_t = 50)]
    grid: usize,
    #[arg(long, default_value_t = 91)]
    directions: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output CSV; with `--bound both` the bound name is inserted before
    /// the extension. Standard output when absent.
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args, Clone)]
struct OutArg {
    /// Output file; standard output when absent.
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum GenFamily {
    /// q-ary additive noise with erasures in both directions.
    QaryErasure {
        #[arg(long, default_value_t = 2)]
        q: usize,
        #[arg(long, default_value_t = 0.0)]
        a1: f64,
        #[arg(long, default_value_t = 0.0)]
        e1: f64,
        #[arg(long, default_value_t = 0.0)]
        a2: f64,
        #[arg(long, default_value_t = 0.0)]
        e2: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Data-access channel over 2^m symbols.
    DataAccess {
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, default_value_t = 0.0)]
        a1: f64,
        #[arg(long, default_value_t = 0.0)]
        e1: f64,
        #[arg(long, default_value_t = 0.0)]
        a2: f64,
        #[arg(long, default_value_t = 0.0)]
        e2: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Binary additive noise in both directions.
    BinaryAdditive {
        #[arg(long, default_value_t = 0.0)]
        a1: f64,
        #[arg(long, default_value_t = 0.0)]
        a2: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Injective semi-deterministic channel from a JSON table file.
    Isd {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// A fixed example channel.
    Fixture {
        /// motivational, example4, example5, example6 or binary-additive.
        name: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Binary XOR channel with independent two-state Markov noises.
    MemoryBinary {
        /// Probability that noise 1 keeps its state.
        #[arg(long, default_value_t = 0.9)]
        stay1: f64,
        #[arg(long, default_value_t = 0.9)]
        stay2: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Binary XOR channel whose second noise is the lagged first noise,
    /// flipped with probability `flip`.
    MemoryLagged {
        #[arg(long, default_value_t = 0.0)]
        flip: f64,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Debug, Subcommand)]
enum MadbCommand {
    /// Run the three tightness conditions.
    Check(CheckArgs),
    /// Inner and outer support values as CSV.
    Support {
        file: PathBuf,
        /// Direction `w13,w23,w31,w32`; repeatable. Defaults to the axes
        /// and the two sum directions.
        #[arg(long, value_parser = parse_weights)]
        weights: Vec<[f64; 4]>,
        /// Additional seeded random directions.
        #[arg(long, default_value_t = 0)]
        directions: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Write a generated three-user channel file.
    Gen {
        #[command(subcommand)]
        family: MadbGen,
    },
}

#[derive(Debug, Subcommand)]
enum MadbGen {
    /// `Y3 = X1 ⊕ X2 ⊕ X3 ⊕ Z3` over `Z_q`.
    Additive {
        #[arg(long, default_value_t = 2)]
        q: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        pz1: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        pz2: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        pz3: Vec<f64>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Ternary output depending on `(x2, x3)` only.
    Example10 {
        #[arg(long)]
        eps: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        pz1: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        pz2: Vec<f64>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Binary sum or erasure.
    Erasure {
        #[arg(long)]
        eps: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        pz1: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        pz2: Vec<f64>,
        #[command(flatten)]
        out: OutArg,
    },
}

fn parse_weights(s: &str) -> Result<[f64; 4], String> {
    let v: Vec<f64> =
        s.split(',').map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t}: {e}"))).collect::<Result<_, _>>()?;
    <[f64; 4]>::try_from(v).map_err(|v| format!("expected four weights, got {}", v.len()))
}

/// Parse `argv` (program name first), run, and return the exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run_cli`] writing to the given streams.
pub fn run_cli_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Input(format!("cannot write {}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(|e| CliError::Input(format!("cannot write output: {e}"))),
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> CliResult<()> {
    match cmd {
        Command::Check(a) => check(a, out),
        Command::Region(a) => region(a, out),
        Command::Gen { family } => {
            let (file, path) = gen(family)?;
            emit(out, path.as_deref(), &file.to_json())
        }
        Command::Madb { command } => madb(command, out),
        Command::Memsim { n, seed } => {
            let r = example8_report(n, seed);
            emit(out, None, &(serde_json::to_string_pretty(&r).expect("report serializes") + "\n"))
        }
        Command::Repro { id, opts, json } => repro_cmd(&id, &opts, json, out),
    }
}

fn label(r: &ConditionReport) -> String {
    match r.side {
        Some(Side::User1) => format!("{}[user1]", r.condition_id.name()),
        Some(Side::User2) => format!("{}[user2]", r.condition_id.name()),
        None => r.condition_id.name().to_string(),
    }
}

fn report_lines(reports: &[ConditionReport]) -> String {
    let mut s = String::new();
    for r in reports {
        let verdict = serde_json::to_value(r.verdict).expect("verdict serializes");
        s.push_str(&format!("{:<36} {}", label(r), verdict.as_str().unwrap_or_default()));
        if let Some(c) = &r.counterexample {
            s.push_str(&format!("  {}", serde_json::to_string(c).expect("counterexample serializes")));
        } else if let Some(w) = &r.witness {
            s.push_str(&format!("  {}", serde_json::to_string(w).expect("witness serializes")));
        } else if r.trials > 0 {
            s.push_str(&format!("  trials={} seed={}", r.trials, r.seed.unwrap_or_default()));
        }
        s.push('\n');
    }
    s
}

fn condition_ids(names: &[String], allowed: &[ConditionId]) -> CliResult<Option<Vec<ConditionId>>> {
    if names.is_empty() {
        return Ok(None);
    }
    names
        .iter()
        .map(|n| {
            ConditionId::from_name(n)
                .filter(|id| allowed.contains(id))
                .ok_or_else(|| CliError::Input(format!("unknown condition {n:?} for this channel kind")))
        })
        .collect::<CliResult<Vec<_>>>()
        .map(Some)
}

fn check(a: CheckArgs, out: &mut dyn Write) -> CliResult<()> {
    let file = ChannelFile::load(&a.file)?;
    let opts = a.flags.options()?;
    match file {
        ChannelFile::Twc(m) => {
            let ch = m.channel()?;
            let only = condition_ids(&a.conditions, &twc_symmetry::TWO_USER_CONDITIONS)?;
            let suite = run_all_conditions(&ch, only.as_deref(), &opts)?;
            let text = if a.json {
                serde_json::to_string_pretty(&suite).expect("suite serializes") + "\n"
            } else {
                let mut s = report_lines(&suite.reports);
                for k in &suite.skipped {
                    s.push_str(&format!("{:<36} skipped  {}\n", k.condition_id.name(), k.reason));
                }
                for i in &suite.implications_checked {
                    s.push_str(&format!("implication confirmed: {i}\n"));
                }
                s
            };
            emit(out, None, &text)
        }
        ChannelFile::Madb(ch) => madb_check(&ch, &a.conditions, &opts, a.json, out),
        ChannelFile::Memory(m) => {
            let summary = memory_summary(&m)?;
            emit(out, None, &(serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n"))
        }
    }
}

const MADB_CONDITIONS: [ConditionId; 3] =
    [ConditionId::MadbProductDominance, ConditionId::MadbMaximizerInvariance, ConditionId::MadbRelabeling];

fn madb_check(
    ch: &MadbChannel,
    names: &[String],
    opts: &CheckOptions,
    as_json: bool,
    out: &mut dyn Write,
) -> CliResult<()> {
    let only = condition_ids(names, &MADB_CONDITIONS)?;
    let mut reports = Vec::new();
    for id in MADB_CONDITIONS {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        reports.push(match id {
            ConditionId::MadbProductDominance => twc_madb::check_madb_exmain(ch, opts)?,
            ConditionId::MadbMaximizerInvariance => twc_madb::check_madb_exmain2(ch, opts)?,
            _ => twc_madb::check_madb_exsc(ch, opts)?,
        });
    }
    let audit = madb_audit(&reports);
    if let Some(v) = audit.first() {
        return Err(twc_core::Error::InconsistentImplication(v.clone()).into());
    }
    let text = if as_json {
        serde_json::to_string_pretty(&json!({ "reports": reports })).expect("reports serialize") + "\n"
    } else {
        report_lines(&reports)
    };
    emit(out, None, &text)
}

fn memory_summary(m: &MemoryModel) -> CliResult<serde_json::Value> {
    Ok(match m {
        MemoryModel::Tables(spec) => match &spec.noise {
            MemoryNoise::Independent { z1, z2 } => {
                let region = theorem9_region(spec);
                json!({
                    "entropy_rate_z1": z1.entropy_rate(),
                    "entropy_rate_z2": z2.entropy_rate(),
                    "capacity": region.as_ref().ok().map(|r| [r.max_r1(), r.max_r2()]),
                    "capacity_unavailable": region.err().map(|e| e.to_string()),
                })
            }
            MemoryNoise::Joint { joint } => {
                let (q1, q2) = spec.alphabet_sizes();
                let r = lemma3_outer(joint, q1, q2)?;
                json!({
                    "one_step_entropy_z1": joint.one_step_conditional_entropy(1),
                    "one_step_entropy_z2": joint.one_step_conditional_entropy(2),
                    "outer": [r.max_r1(), r.max_r2()],
                })
            }
        },
        MemoryModel::Isd(spec) => {
            let region = theorem10_region(spec, None);
            json!({
                "entropy_rate_z1": spec.z1.entropy_rate(),
                "entropy_rate_z2": spec.z2.entropy_rate(),
                "cardinality_matched": spec.cardinality_matched(),
                "capacity": region.as_ref().ok().map(|r| [r.max_r1(), r.max_r2()]),
                "capacity_unavailable": region.err().map(|e| e.to_string()),
            })
        }
    })
}

fn with_suffix(path: &Path, tag: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.{tag}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{tag}"),
    };
    path.with_file_name(name)
}

fn region(a: RegionArgs, out: &mut dyn Write) -> CliResult<()> {
    let file = ChannelFile::load(&a.file)?;
    let modes: Vec<Mode> = match a.bound {
        Bound::Inner => vec![Mode::Inner],
        Bound::Outer => vec![Mode::Outer],
        Bound::Both => vec![Mode::Inner, Mode::Outer],
    };
    let regions: Vec<(Mode, RateRegion2D)> = match file {
        ChannelFile::Twc(m) => {
            let ch = m.channel()?;
            let opts = RegionOptions { grid: a.grid, seed: a.seed, ..RegionOptions::default() };
            modes
                .iter()
                .map(|&mode| Ok((mode, compute_region(&ch, mode, a.directions, &opts)?)))
                .collect::<CliResult<_>>()?
        }
        ChannelFile::Memory(m) => {
            let (r, exact) = memory_region(&m)?;
            if !exact && modes.contains(&Mode::Inner) {
                return Err(CliError::Input("dependent noise has only an outer bound; use --bound outer".into()));
            }
            modes.iter().map(|&mode| (mode, r.clone())).collect()
        }
        ChannelFile::Madb(_) => {
            return Err(CliError::Input("three-user channels have four rates; use `twc madb support`".into()))
        }
    };
    let tag = |m: Mode| if m == Mode::Inner { "inner" } else { "outer" };
    match (&a.output, regions.len()) {
        (Some(p), 1) => emit(out, Some(p), &regions[0].1.to_csv()),
        (Some(p), _) => {
            for (mode, r) in &regions {
                emit(out, Some(&with_suffix(p, tag(*mode))), &r.to_csv())?;
            }
            Ok(())
        }
        (None, 1) => emit(out, None, &regions[0].1.to_csv()),
        (None, _) => {
            let text: Vec<String> = regions.iter().map(|(m, r)| format!("# {}\n{}", tag(*m), r.to_csv())).collect();
            emit(out, None, &text.join("\n"))
        }
    }
}

/// Region of a channel with memory and whether it is the capacity region.
fn memory_region(m: &MemoryModel) -> CliResult<(RateRegion2D, bool)> {
    Ok(match m {
        MemoryModel::Tables(spec) => match &spec.noise {
            MemoryNoise::Independent { .. } => (theorem9_region(spec)?, true),
            MemoryNoise::Joint { joint } => {
                let (q1, q2) = spec.alphabet_sizes();
                (lemma3_outer(joint, q1, q2)?, false)
            }
        },
        MemoryModel::Isd(spec) => (theorem10_region(spec, None)?, true),
    })
}

fn xor_tables() -> Vec<Vec<Vec<usize>>> {
    (0..2).map(|x1| (0..2).map(|x2| (0..2).map(|z| x1 ^ x2 ^ z).collect()).collect()).collect()
}

fn memory_file(noise: MemoryNoise) -> CliResult<ChannelFile> {
    let spec = MemoryChannelSpec { f1: xor_tables(), f2: xor_tables(), ny1: 2, ny2: 2, noise };
    spec.validate()?;
    Ok(ChannelFile::Memory(MemoryModel::Tables(spec)))
}

fn gen(family: GenFamily) -> CliResult<(ChannelFile, Option<PathBuf>)> {
    let twc = |ch: twc_core::Result<TwoWayChannel>| -> CliResult<ChannelFile> { Ok(ChannelFile::twc(&ch?)) };
    Ok(match family {
        GenFamily::QaryErasure { q, a1, e1, a2, e2, out } => {
            (twc(twc_chanlib::gen_qary_noise_erasure(q, a1, e1, a2, e2))?, out.output)
        }
        GenFamily::DataAccess { m, a1, e1, a2, e2, out } => {
            (twc(twc_chanlib::gen_data_access(m, a1, e1, a2, e2))?, out.output)
        }
        GenFamily::BinaryAdditive { a1, a2, out } => (twc(twc_chanlib::gen_binary_additive(a1, a2))?, out.output),
        GenFamily::Isd { spec, out } => {
            let text = std::fs::read_to_string(&spec)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", spec.display())))?;
            let spec: twc_chanlib::IsdSpec =
                serde_json::from_str(&text).map_err(|e| CliError::Input(format!("invalid table file: {e}")))?;
            (twc(twc_chanlib::gen_isd(&spec))?, out.output)
        }
        GenFamily::Fixture { name, out } => (twc(twc_chanlib::fixture(&name))?, out.output),
        GenFamily::MemoryBinary { stay1, stay2, out } => {
            let noise =
                MemoryNoise::Independent { z1: MarkovNoise::binary_stay(stay1)?, z2: MarkovNoise::binary_stay(stay2)? };
            (memory_file(noise)?, out.output)
        }
        GenFamily::MemoryLagged { flip, out } => {
            if !(0.0..=1.0).contains(&flip) {
                return Err(twc_core::Error::ParameterOutOfRange(format!("flip probability {flip}")).into());
            }
            (memory_file(MemoryNoise::Joint { joint: JointMarkovNoise::lagged_copy(flip) })?, out.output)
        }
    })
}

fn madb(cmd: MadbCommand, out: &mut dyn Write) -> CliResult<()> {
    match cmd {
        MadbCommand::Check(a) => {
            let ChannelFile::Madb(ch) = ChannelFile::load(&a.file)? else {
                return Err(CliError::Input("not a three-user channel file".into()));
            };
            madb_check(&ch, &a.conditions, &a.flags.options()?, a.json, out)
        }
        MadbCommand::Support { file, weights, directions, seed, output } => {
            let ChannelFile::Madb(ch) = ChannelFile::load(&file)? else {
                return Err(CliError::Input("not a three-user channel file".into()));
            };
            let mut dirs = if weights.is_empty() {
                vec![
                    [1.0, 0.0, 0.0, 0.0],
                    [0.0, 1.0, 0.0, 0.0],
                    [0.0, 0.0, 1.0, 0.0],
                    [0.0, 0.0, 0.0, 1.0],
                    [1.0, 1.0, 0.0, 0.0],
                    [0.0, 0.0, 1.0, 1.0],
                ]
            } else {
                weights
            };
            for i in 0..directions {
                let w = sample_uniform_simplex(&mut stream_rng(seed, i as u64), 4);
                dirs.push([w[0], w[1], w[2], w[3]]);
            }
            let opts = MadbOptions { seed, ..MadbOptions::default() };
            let rows = madb_sweep(&ch, &dirs, &opts)?;
            let mut csv = String::from("w13,w23,w31,w32,inner,outer\n");
            for (inner, outer) in rows {
                let w = inner.weights;
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    sig9(w[0]),
                    sig9(w[1]),
                    sig9(w[2]),
                    sig9(w[3]),
                    sig9(inner.value),
                    sig9(outer.value)
                ));
            }
            emit(out, output.as_deref(), &csv)
        }
        MadbCommand::Gen { family } => {
            let (fam, path) = match family {
                MadbGen::Additive { q, pz1, pz2, pz3, out } => (MadbFamily::Additive { q, pz1, pz2, pz3 }, out.output),
                MadbGen::Example10 { eps, pz1, pz2, out } => (MadbFamily::Example10 { eps, pz1, pz2 }, out.output),
                MadbGen::Erasure { eps, pz1, pz2, out } => (MadbFamily::Erasure { eps, pz1, pz2 }, out.output),
            };
            emit(out, path.as_deref(), &ChannelFile::Madb(gen_madb(&fam)?).to_json())
        }
    }
}

fn repro_cmd(id: &str, flags: &CheckFlags, as_json: bool, out: &mut dyn Write) -> CliResult<()> {
    if !repro::REPRO_IDS.contains(&id) {
        return Err(CliError::Input(format!("unknown example {id:?}; known: {}", repro::REPRO_IDS.join(", "))));
    }
    let o = repro::ReproOptions { check: flags.options()?, ..repro::ReproOptions::default() };
    let checks = repro::repro(id, &o)?;
    let text = if as_json {
        serde_json::to_string_pretty(&json!({ "example": id, "checks": checks })).expect("checks serialize") + "\n"
    } else {
        let mut s = String::new();
        for c in &checks {
            s.push_str(&format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.claim, c.detail));
        }
        let passed = checks.iter().filter(|c| c.passed).count();
        s.push_str(&format!("{id}: {passed}/{} stated outcomes reproduced\n", checks.len()));
        s
    };
    emit(out, None, &text)
}
