mod format;
mod sweep;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use relbell::optimizer::{maximize_mermin, settings_to_angles};
use relbell::roots::CrossingDirection;
use relbell::verify::{self, VerifyOptions};
use relbell::{critical_beta, pipeline_epsilon, BellSettings, ScenarioKind, ScenarioSpec};
use serde_json::json;

use format::sig15;
use sweep::{GridRange, OutputFormat, PartialSweepConfig, SettingsSource, SweepConfig};

/// Wigner rotations and relativistic Bell/Mermin violation.
#[derive(Parser, Debug)]
#[command(name = "relbell", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one scenario with the standard settings.
    Scenario {
        /// case1, case2 or bell2
        kind: String,
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long, allow_negative_numbers = true)]
        chi: f64,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a (beta, chi) grid and write CSV or JSON.
    Sweep(SweepArgs),
    /// Boost speeds at which the high-energy Bell value crosses the bound.
    CriticalBeta {
        kind: String,
        #[arg(long, default_value_t = 2.0)]
        threshold: f64,
        #[arg(long)]
        json: bool,
    },
    /// Search measurement directions that maximize the violation.
    Optimize {
        kind: String,
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long, allow_negative_numbers = true)]
        chi: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = sweep::DEFAULT_RESTARTS)]
        restarts: usize,
        #[arg(long)]
        json: bool,
    },
    /// Run the built-in acceptance checks.
    Verify {
        #[arg(long)]
        json: bool,
        #[arg(long)]
        seed: Option<u64>,
        /// Flip the spin-matrix sign to confirm the checks catch it.
        #[arg(long, hide = true)]
        inject_d_sign_error: bool,
    },
}

#[derive(clap::Args, Debug)]
struct SweepArgs {
    /// case1, case2 or bell2
    kind: Option<String>,
    /// JSON file with any of the sweep options; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// START:STOP:STEPS (default 0:0.99:5)
    #[arg(long)]
    beta: Option<GridRange>,
    /// START:STOP:STEPS (default 0.5:5:4)
    #[arg(long)]
    chi: Option<GridRange>,
    #[arg(long, value_enum)]
    settings: Option<SettingsSource>,
    /// Comma-separated theta,phi pairs (radians) for explicit settings.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    angles: Option<Vec<f64>>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    restarts: Option<usize>,
    /// Output file; standard output if omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

/// Why a command stopped; each maps to one exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Verification,
    Io(anyhow::Error),
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Self::Usage(msg.into())
    }

    fn code(&self) -> u8 {
        match self {
            Self::Verification => 1,
            Self::Usage(_) => 2,
            Self::Io(_) => 3,
        }
    }
}

impl From<relbell::Error> for Failure {
    fn from(e: relbell::Error) -> Self {
        Self::Usage(e.to_string())
    }
}

fn io_failure(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Io(e.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(f) = configure_threads().and_then(|_| dispatch(cli.command)) {
        match &f {
            Failure::Usage(msg) => {
                eprintln!("error: {msg}\n\nFor more information, try '--help'.");
            }
            Failure::Io(e) => eprintln!("error: {e:#}"),
            Failure::Verification => {}
        }
        return ExitCode::from(f.code());
    }
    ExitCode::SUCCESS
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("RELBELL_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Failure::usage(format!(
            "RELBELL_THREADS must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::usage(e.to_string()))
}

fn parse_kind(s: &str) -> Result<ScenarioKind, Failure> {
    Ok(s.parse()?)
}

macro_rules! outln {
    ($out:expr) => {
        $out.push('\n')
    };
    ($out:expr, $($arg:tt)*) => {{
        use std::fmt::Write as _;
        let _ = writeln!($out, $($arg)*);
    }};
}

/// Writes to stdout; a reader that went away early (`| head`) is not an error.
fn emit(bytes: &[u8]) -> Result<(), Failure> {
    let mut stdout = io::stdout().lock();
    match stdout.write_all(bytes).and_then(|_| stdout.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(io_failure(e)),
        _ => Ok(()),
    }
}

fn print_json(v: &serde_json::Value) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(v).map_err(io_failure)?;
    text.push('\n');
    emit(text.as_bytes())
}

fn dispatch(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Scenario {
            kind,
            beta,
            chi,
            json,
        } => cmd_scenario(parse_kind(&kind)?, beta, chi, json),
        Command::Sweep(args) => cmd_sweep(args),
        Command::CriticalBeta {
            kind,
            threshold,
            json,
        } => cmd_critical_beta(parse_kind(&kind)?, threshold, json),
        Command::Optimize {
            kind,
            beta,
            chi,
            seed,
            restarts,
            json,
        } => cmd_optimize(parse_kind(&kind)?, beta, chi, seed, restarts, json),
        Command::Verify {
            json,
            seed,
            inject_d_sign_error,
        } => {
            let mut opts = VerifyOptions {
                inject_d_sign_error,
                ..Default::default()
            };
            if let Some(s) = seed {
                opts.seed = s;
            }
            cmd_verify(&opts, json)
        }
    }
}

fn correlator_labels(kind: ScenarioKind) -> [&'static str; 4] {
    match kind {
        ScenarioKind::TwoQubit => ["E(a,b)", "E(a,b')", "E(a',b)", "E(a',b')"],
        _ => ["E(a,b,c')", "E(a,b',c)", "E(a',b,c)", "E(a',b',c')"],
    }
}

fn cmd_scenario(kind: ScenarioKind, beta: f64, chi: f64, json: bool) -> Result<(), Failure> {
    let spec = ScenarioSpec::new(kind, beta, chi)?;
    let r = pipeline_epsilon(&spec, &BellSettings::standard(kind))?;
    let labels = correlator_labels(kind);
    if json {
        let corr: serde_json::Map<String, serde_json::Value> = labels
            .iter()
            .zip(r.bell.correlators)
            .map(|(l, v)| (l.to_string(), sweep::json_number(v)))
            .collect();
        return print_json(&json!({
            "kind": kind.as_str(),
            "beta": sweep::json_number(beta),
            "chi": sweep::json_number(chi),
            "delta": sweep::json_number(r.delta),
            "epsilon_signed": sweep::json_number(r.bell.epsilon),
            "epsilon_pipeline": sweep::json_number(r.epsilon_pipeline),
            "epsilon_closed": sweep::json_number(r.epsilon_closed),
            "abs_error": sweep::json_number(r.abs_error),
            "correlators": corr,
        }));
    }
    let mut out = String::new();
    outln!(out, "scenario          {kind}");
    outln!(out, "beta              {}", sig15(beta));
    outln!(out, "chi               {}", sig15(chi));
    outln!(out, "delta             {:.12}", r.delta);
    outln!(out, "epsilon           {:.12}", r.epsilon_pipeline);
    outln!(out, "epsilon (signed)  {:.12}", r.bell.epsilon);
    outln!(out, "epsilon closed    {:.12}", r.epsilon_closed);
    outln!(out, "abs error         {:.3e}", r.abs_error);
    outln!(out, "correlators");
    for (l, v) in labels.iter().zip(r.bell.correlators) {
        outln!(out, "  {l:<12} {v:>16.12}");
    }
    if kind == ScenarioKind::TwoQubit {
        outln!(out, "note: the two-qubit closed form comes from different measurement settings; the difference is expected");
    }
    emit(out.as_bytes())
}

fn cmd_sweep(args: SweepArgs) -> Result<(), Failure> {
    let file_cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))
                .map_err(Failure::Io)?;
            serde_json::from_str::<PartialSweepConfig>(&text)
                .map_err(|e| Failure::usage(format!("config {}: {e}", path.display())))?
        }
        None => PartialSweepConfig::default(),
    };
    let flags = PartialSweepConfig {
        kind: args.kind,
        beta: args.beta,
        chi: args.chi,
        settings: args.settings,
        angles: args.angles,
        seed: args.seed,
        restarts: args.restarts,
        output: args.output,
        format: args.format,
    };
    let cfg = SweepConfig::resolve(file_cfg.overridden_by(flags))?;
    let rows = sweep::run(&cfg)?;

    let mut buf = Vec::new();
    match cfg.format {
        OutputFormat::Csv => sweep::write_csv(&mut buf, &rows).map_err(io_failure)?,
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut buf, &sweep::to_json(&cfg, &rows))
                .map_err(io_failure)?;
            buf.push(b'\n');
        }
    }
    match &cfg.output {
        Some(path) => fs::write(path, &buf)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(Failure::Io)?,
        None => emit(&buf)?,
    }
    Ok(())
}

fn cmd_critical_beta(kind: ScenarioKind, threshold: f64, json: bool) -> Result<(), Failure> {
    if !threshold.is_finite() || threshold <= 0.0 {
        return Err(Failure::usage("threshold must be positive"));
    }
    let report = critical_beta(kind, threshold)?;
    let note = (kind == ScenarioKind::TwoQubit).then_some(
        "0.86 is sqrt(3)/2, where eps itself vanishes; the crossing of 2 comes much earlier",
    );
    if json {
        let crossings: Vec<_> = report
            .crossings
            .iter()
            .map(|c| {
                json!({
                    "beta": sweep::json_number(c.at),
                    "direction": match c.direction {
                        CrossingDirection::Falling => "falling",
                        CrossingDirection::Rising => "rising",
                    },
                })
            })
            .collect();
        return print_json(&json!({
            "kind": kind.as_str(),
            "threshold": sweep::json_number(threshold),
            "beta_c": sweep::json_number(report.beta_c),
            "crossings": crossings,
            "epsilon_zero": report.epsilon_zero.map(sweep::json_number),
            "note": note,
        }));
    }
    let mut out = String::new();
    outln!(out, "scenario      {kind}");
    outln!(out, "threshold     {}", sig15(threshold));
    outln!(out, "beta_c        {:.10}", report.beta_c);
    for c in &report.crossings {
        let dir = match c.direction {
            CrossingDirection::Falling => "falls below",
            CrossingDirection::Rising => "rises above",
        };
        outln!(out, "  |eps| {dir} threshold at beta = {:.10}", c.at);
    }
    if let Some(z) = report.epsilon_zero {
        outln!(out, "eps = 0 at    {z:.10}");
    }
    if let Some(n) = note {
        outln!(out, "note: {n}");
    }
    emit(out.as_bytes())
}

fn cmd_optimize(
    kind: ScenarioKind,
    beta: f64,
    chi: f64,
    seed: u64,
    restarts: usize,
    json: bool,
) -> Result<(), Failure> {
    if restarts == 0 {
        return Err(Failure::usage("restarts must be at least 1"));
    }
    let spec = ScenarioSpec::new(kind, beta, chi)?;
    let r = maximize_mermin(&spec, seed, restarts)?;
    let names: &[&str] = match kind {
        ScenarioKind::TwoQubit => &["a", "a'", "b", "b'"],
        _ => &["a", "a'", "b", "b'", "c", "c'"],
    };
    let dirs = r.best_settings.directions();
    let angles = settings_to_angles(&r.best_settings);
    if json {
        let settings: Vec<_> = names
            .iter()
            .zip(&dirs)
            .enumerate()
            .map(|(k, (n, d))| {
                let v = d.vector();
                let vector = [v.x, v.y, v.z].map(sweep::json_number);
                json!({
                    "name": n,
                    "vector": vector,
                    "theta": sweep::json_number(angles[2 * k]),
                    "phi": sweep::json_number(angles[2 * k + 1]),
                })
            })
            .collect();
        return print_json(&json!({
            "kind": kind.as_str(),
            "beta": sweep::json_number(beta),
            "chi": sweep::json_number(chi),
            "seed": seed,
            "restarts": restarts,
            "best_epsilon": sweep::json_number(r.best_epsilon),
            "baseline_epsilon": sweep::json_number(r.baseline_epsilon),
            "candidate_epsilon": sweep::json_number(r.candidate_epsilon),
            "best_start": r.best_start,
            "iterations": r.iterations,
            "best_settings": settings,
        }));
    }
    let mut out = String::new();
    outln!(
        out,
        "scenario            {kind}  beta {}  chi {}",
        sig15(beta),
        sig15(chi)
    );
    outln!(out, "best |epsilon|      {:.12}", r.best_epsilon);
    outln!(out, "standard settings   {:.12}", r.baseline_epsilon);
    outln!(out, "wigner-rotated      {:.12}", r.candidate_epsilon);
    outln!(
        out,
        "starts              {} (seed {seed}; best from start {})",
        r.iterations.len(),
        r.best_start
    );
    outln!(out, "best directions");
    for (n, d) in names.iter().zip(&dirs) {
        let v = d.vector();
        outln!(
            out,
            "  {n:<3} ({:>15.12}, {:>15.12}, {:>15.12})",
            v.x,
            v.y,
            v.z
        );
    }
    emit(out.as_bytes())
}

fn cmd_verify(opts: &VerifyOptions, json: bool) -> Result<(), Failure> {
    let results = verify::run(opts);
    if json {
        let list: Vec<_> = results
            .iter()
            .map(|r| {
                let values: serde_json::Map<String, serde_json::Value> = r
                    .values
                    .iter()
                    .map(|(k, v)| (k.clone(), sweep::json_number(*v)))
                    .collect();
                json!({
                    "id": r.id,
                    "name": r.name,
                    "passed": r.passed,
                    "detail": r.detail,
                    "values": values,
                })
            })
            .collect();
        print_json(&serde_json::Value::Array(list))?;
    } else {
        let mut out = String::new();
        for r in &results {
            outln!(
                out,
                "[{}] {:>2} {:<30} {}",
                if r.passed { "PASS" } else { "FAIL" },
                r.id,
                r.name,
                r.detail
            );
        }
        let passed = results.iter().filter(|r| r.passed).count();
        outln!(out, "{passed}/{} checks passed", results.len());
        emit(out.as_bytes())?;
    }
    if verify::all_passed(&results) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}
