//! `qst`: command-line front end for the quantum-state texture toolkit.
//!
//! Subcommands: `measure`, `transform`, `verify`, `sample`, `bloch`,
//! `channel-apply`. Stdout carries exclusively the declared JSON/CSV payload;
//! diagnostics go to stderr. Every stochastic subcommand takes an explicit
//! seed, so identical invocations produce byte-identical output.
//!
//! Exit codes: 0 success; 2 parse/validation/io failure; 3 unsupported
//! dimension; 4 free-state conversion target; 5 a gating verification check
//! failed.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qst_core::channels::{apply_channel, is_free_kraus_set, ChannelOutput, KrausSet};
use qst_core::error::Error;
use qst_core::io as qio;
use qst_core::registry::{evaluate_measure, MeasureId};
use qst_core::relations;
use qst_core::states::{bloch_decompose, sample_state, StateKind};
use qst_core::transforms::{max_prob_pure_to_mixed, max_prob_pure_to_pure, ConversionResult};
use qst_core::Tolerances;

#[derive(Parser)]
#[command(
    name = "qst",
    about = "Quantum-state texture: measures, free operations, conversions, verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SampleKind {
    Pure,
    Mixed,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a texture measure on a state file.
    Measure(MeasureCmd),
    /// Maximal conversion probability and optimal instrument (d = 2).
    Transform(TransformCmd),
    /// Run a verification suite and emit a JSON-lines report.
    Verify(VerifyCmd),
    /// Write seeded random state files plus a manifest.
    Sample(SampleCmd),
    /// Print the generalized Bloch coefficients of a state.
    Bloch(BlochCmd),
    /// Apply a free channel file to a state file.
    ChannelApply(ChannelApplyCmd),
}

#[derive(Args)]
struct MeasureCmd {
    /// State file (density or pure form).
    #[arg(long)]
    state: PathBuf,
    /// Measure id: rugosity | affinity-alpha | hellinger | tsallis-alpha |
    /// geometric | l1 | l1-bloch | l2 | roof-g.
    #[arg(long)]
    measure: String,
    /// Parameter for the alpha families.
    #[arg(long)]
    alpha: Option<f64>,
    /// Write the payload here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct TransformCmd {
    /// Source state file; must be pure.
    #[arg(long)]
    source: PathBuf,
    /// Target state file (pure or mixed).
    #[arg(long)]
    target: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyCmd {
    /// Suite: axioms | l1 | l2 | skew | transforms.
    #[arg(long)]
    suite: String,
    /// Hilbert-space dimension.
    #[arg(long)]
    dim: usize,
    /// Number of sampled states.
    #[arg(long)]
    samples: usize,
    /// Master seed (required: no wall-clock seeding).
    #[arg(long)]
    seed: u64,
    /// Measure id (axioms suite only).
    #[arg(long)]
    measure: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    /// json: one line per check; csv: per-sample values for plotting.
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SampleCmd {
    #[arg(long)]
    dim: usize,
    #[arg(long, value_enum)]
    kind: SampleKind,
    /// Rank for mixed states (defaults to full rank).
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long)]
    count: usize,
    #[arg(long)]
    seed: u64,
    /// Directory receiving the state files and manifest.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// File-name prefix.
    #[arg(long, default_value = "state")]
    prefix: String,
}

#[derive(Args)]
struct BlochCmd {
    #[arg(long)]
    state: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ChannelApplyCmd {
    /// Channel file `{"dim": d, "kraus": [matrix, ...]}`.
    #[arg(long)]
    channel: PathBuf,
    #[arg(long)]
    state: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::DimUnsupported(_) => 3,
        Error::TargetIsFreeState { .. } => 4,
        _ => 2,
    }
}

fn read_file(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn emit(payload: &str, output: Option<&Path>) -> Result<(), Error> {
    match output {
        Some(path) => {
            std::fs::write(path, payload).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(payload.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::Io(e.to_string()))
        }
    }
}

fn run_measure(cmd: &MeasureCmd, tol: &Tolerances) -> Result<(String, u8), Error> {
    let id: MeasureId = cmd.measure.parse()?;
    let state = qio::state_from_json(&read_file(&cmd.state)?, tol)?;
    let rho = state.density(tol);
    let value = evaluate_measure(id, cmd.alpha, &rho, tol)?;
    let mut payload = qio::measure_to_json(id.as_str(), value.alpha, value.value);
    payload.push('\n');
    Ok((payload, 0))
}

fn conversion_to_json(result: &ConversionResult) -> String {
    let opt = |v: Option<f64>| match v {
        Some(x) => qio::fmt_f64(x),
        None => "null".to_string(),
    };
    let instrument = match &result.instrument {
        Some(inst) => qio::channel_to_json(inst.dim(), inst.operators()),
        None => "null".to_string(),
    };
    format!(
        "{{\"probability\": {}, \"raw_ratio\": {}, \"achieved\": {}, \"residual_q\": {}, \"identity_residual\": {}, \"instrument\": {}}}\n",
        qio::fmt_f64(result.probability),
        qio::fmt_f64(result.raw_ratio),
        result.achieved,
        opt(result.residual_q),
        opt(result.identity_residual),
        instrument,
    )
}

fn run_transform(cmd: &TransformCmd, tol: &Tolerances) -> Result<(String, u8), Error> {
    let source = qio::state_from_json(&read_file(&cmd.source)?, tol)?;
    let psi = source
        .pure()
        .ok_or_else(|| Error::Parse("transform source must be a pure state file".into()))?;
    let target = qio::state_from_json(&read_file(&cmd.target)?, tol)?;
    let result = match &target {
        qio::StateFile::Pure(phi) => max_prob_pure_to_pure(psi, phi, tol)?,
        qio::StateFile::Density(sigma) => max_prob_pure_to_mixed(psi, sigma, tol)?,
    };
    Ok((conversion_to_json(&result), 0))
}

fn run_verify(cmd: &VerifyCmd, tol: &Tolerances) -> Result<(String, u8), Error> {
    let report = match cmd.suite.as_str() {
        "axioms" => {
            let measure: MeasureId = cmd
                .measure
                .as_deref()
                .ok_or_else(|| Error::Parse("--measure is required for the axioms suite".into()))?
                .parse()?;
            relations::axiom_suite(measure, cmd.alpha, cmd.samples, cmd.seed, cmd.dim, tol)?
        }
        "l1" => relations::l1_report(cmd.samples, cmd.seed, cmd.dim, tol)?,
        "l2" => relations::l2_report(cmd.samples, cmd.seed, cmd.dim, tol)?,
        "skew" => relations::skew_report(cmd.samples, cmd.seed, cmd.dim, tol)?,
        "transforms" => {
            if cmd.dim != 2 {
                return Err(Error::DimUnsupported(cmd.dim));
            }
            relations::transforms_report(cmd.samples, cmd.seed, tol)?
        }
        other => return Err(Error::Parse(format!("unknown suite `{other}`"))),
    };
    let payload = match cmd.format {
        OutputFormat::Json => qio::report_to_json_lines(&report),
        OutputFormat::Csv => relations::per_sample_csv(cmd.samples, cmd.seed, cmd.dim, tol)?,
    };
    let code = if report.all_canonical_pass() { 0 } else { 5 };
    Ok((payload, code))
}

fn run_sample(cmd: &SampleCmd, tol: &Tolerances) -> Result<(String, u8), Error> {
    if cmd.count < 1 {
        return Err(Error::Parse("--count must be at least 1".into()));
    }
    let kind = match cmd.kind {
        SampleKind::Pure => StateKind::Pure,
        SampleKind::Mixed => StateKind::Mixed,
    };
    std::fs::create_dir_all(&cmd.out_dir)
        .map_err(|e| Error::Io(format!("{}: {e}", cmd.out_dir.display())))?;
    let mut entries = Vec::new();
    for i in 0..cmd.count {
        let child = qst_core::rng::child_seed(cmd.seed, i as u64);
        let rho = sample_state(cmd.dim, kind, cmd.rank, child, tol)?;
        let name = format!("{}_{:03}.json", cmd.prefix, i);
        let path = cmd.out_dir.join(&name);
        let mut text = qio::density_to_json(&rho);
        text.push('\n');
        std::fs::write(&path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        entries.push(format!("{{\"path\": \"{name}\", \"seed\": {child}}}"));
    }
    let rank_s = match cmd.rank {
        Some(r) => r.to_string(),
        None => "null".to_string(),
    };
    let kind_s = match cmd.kind {
        SampleKind::Pure => "pure",
        SampleKind::Mixed => "mixed",
    };
    let manifest = format!(
        "{{\"dim\": {}, \"kind\": \"{}\", \"rank\": {}, \"count\": {}, \"seed\": {}, \"files\": [{}]}}\n",
        cmd.dim,
        kind_s,
        rank_s,
        cmd.count,
        cmd.seed,
        entries.join(", ")
    );
    let manifest_path = cmd.out_dir.join("manifest.json");
    std::fs::write(&manifest_path, &manifest)
        .map_err(|e| Error::Io(format!("{}: {e}", manifest_path.display())))?;
    Ok((manifest, 0))
}

fn run_bloch(cmd: &BlochCmd, tol: &Tolerances) -> Result<(String, u8), Error> {
    let state = qio::state_from_json(&read_file(&cmd.state)?, tol)?;
    let rho = state.density(tol);
    let v = bloch_decompose(&rho);
    let payload = match cmd.format {
        OutputFormat::Json => {
            let join = |vals: &[f64]| {
                vals.iter()
                    .map(|x| qio::fmt_f64(*x))
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            format!(
                "{{\"dim\": {}, \"x\": [{}], \"y\": [{}], \"z\": [{}]}}\n",
                rho.dim(),
                join(&v.x),
                join(&v.y),
                join(&v.z)
            )
        }
        OutputFormat::Csv => {
            let mut header = Vec::new();
            let mut row = Vec::new();
            for (i, x) in v.x.iter().enumerate() {
                header.push(format!("x{i}"));
                row.push(qio::fmt_f64(*x));
            }
            for (i, y) in v.y.iter().enumerate() {
                header.push(format!("y{i}"));
                row.push(qio::fmt_f64(*y));
            }
            for (i, z) in v.z.iter().enumerate() {
                header.push(format!("z{i}"));
                row.push(qio::fmt_f64(*z));
            }
            format!("{}\n{}\n", header.join(","), row.join(","))
        }
    };
    Ok((payload, 0))
}

fn run_channel_apply(cmd: &ChannelApplyCmd, tol: &Tolerances) -> Result<(String, u8), Error> {
    let (dim, ops) = qio::channel_from_json(&read_file(&cmd.channel)?)?;
    let report = is_free_kraus_set(dim, &ops, tol)?;
    if !report.free {
        return Err(Error::NotFree {
            diagnostics: format!(
                "operator {} residual {:.3e}",
                report.worst_operator, report.max_freeness_residual
            ),
        });
    }
    let ks = KrausSet::new(dim, ops, tol)?;
    let state = qio::state_from_json(&read_file(&cmd.state)?, tol)?;
    let rho = state.density(tol);
    let payload = match apply_channel(&ks, &rho, tol)? {
        ChannelOutput::Complete(out) => {
            let mut text = qio::density_to_json(&out);
            text.push('\n');
            text
        }
        ChannelOutput::Sub {
            unnormalized,
            probability,
        } => {
            let entries: Vec<String> = (0..unnormalized.dim())
                .map(|i| {
                    let cols: Vec<String> = (0..unnormalized.dim())
                        .map(|j| {
                            let z = unnormalized[(i, j)];
                            format!("[{}, {}]", qio::fmt_f64(z.re), qio::fmt_f64(z.im))
                        })
                        .collect();
                    format!("[{}]", cols.join(", "))
                })
                .collect();
            format!(
                "{{\"dim\": {}, \"probability\": {}, \"unnormalized\": [{}]}}\n",
                ks.dim(),
                qio::fmt_f64(probability),
                entries.join(", ")
            )
        }
    };
    Ok((payload, 0))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tol = Tolerances::default();
    let outcome = match &cli.command {
        Command::Measure(cmd) => run_measure(cmd, &tol).map(|r| (r, cmd.output.clone())),
        Command::Transform(cmd) => run_transform(cmd, &tol).map(|r| (r, cmd.output.clone())),
        Command::Verify(cmd) => run_verify(cmd, &tol).map(|r| (r, cmd.output.clone())),
        Command::Sample(cmd) => run_sample(cmd, &tol).map(|r| (r, None)),
        Command::Bloch(cmd) => run_bloch(cmd, &tol).map(|r| (r, cmd.output.clone())),
        Command::ChannelApply(cmd) => run_channel_apply(cmd, &tol).map(|r| (r, cmd.output.clone())),
    };
    match outcome {
        Ok(((payload, code), output)) => {
            if let Err(e) = emit(&payload, output.as_deref()) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
