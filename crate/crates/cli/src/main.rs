//! Verifier for flat pencils of metrics and the Frobenius structures
//! they induce.
//!
//! Exit status: 0 when every executed stage passed, 1 when a
//! mathematical check failed, 2 on usage or parse errors.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use flatpencil_cli::commands::{
    coxeter_command, fixture_series_command, match_command, run_stages_command, CommonOpts,
    OutputFormat,
};
use flatpencil_cli::pipeline::Stage;
use flatpencil_core::Rat;

#[derive(Parser)]
#[command(
    name = "flatpencil",
    version,
    about = "Check flat pencils of metrics and build Frobenius structures from them"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the flat-pencil identity checks on an instance
    CheckPencil(RunArgs),
    /// Solve the connection and integrate the potential
    Build(RunArgs),
    /// Rebuild the intersection form from the built structure
    Roundtrip(RunArgs),
    /// Run every stage: pencil, build, axioms, round trip, uniqueness
    Verify(RunArgs),
    /// Compare the structures of two instances up to scaling
    Match(MatchArgs),
    /// Generate an orbit-space instance file for a reflection group
    Coxeter(CoxeterArgs),
    /// Solve a series instance order by order from its seed data
    FixtureSeries(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Instance file to read
    spec: PathBuf,
    /// Sampling seed; overrides FLATPENCIL_SEED and the file's options
    #[arg(long)]
    seed: Option<u64>,
    /// Sample points per pencil member for the flatness spot checks
    #[arg(long)]
    points: Option<usize>,
    /// Pencil parameter as a rational; repeat to replace the default set
    #[arg(long = "lambda", value_name = "RAT")]
    lambdas: Vec<String>,
    /// Override the series truncation order of the instance
    #[arg(long)]
    truncation: Option<usize>,
    /// Prove flatness of every pencil member symbolically
    #[arg(long)]
    symbolic_curvature: bool,
    /// Report format
    #[arg(long, value_parser = ["json", "text"], default_value = "json")]
    format: String,
    /// Write the report here instead of stdout
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct MatchArgs {
    /// First instance file
    first: PathBuf,
    /// Second instance file
    second: PathBuf,
    /// Sampling seed; overrides FLATPENCIL_SEED and the files' options
    #[arg(long)]
    seed: Option<u64>,
    /// Override the series truncation order of both instances
    #[arg(long)]
    truncation: Option<usize>,
    /// Report format
    #[arg(long, value_parser = ["json", "text"], default_value = "json")]
    format: String,
    /// Write the report here instead of stdout
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CoxeterArgs {
    /// Group type, A or B
    #[arg(long = "type", value_name = "LETTER")]
    group_type: String,
    /// Rank of the group
    #[arg(long)]
    rank: usize,
    /// Seed recorded in the generated instance's options
    #[arg(long)]
    seed: Option<u64>,
    /// Label stored in the generated instance
    #[arg(long)]
    label: Option<String>,
    /// Write the instance here instead of stdout
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn parse_format(s: &str) -> OutputFormat {
    if s == "text" {
        OutputFormat::Text
    } else {
        OutputFormat::Json
    }
}

fn parse_lambdas(raw: &[String]) -> Result<Option<Vec<Rat>>, String> {
    if raw.is_empty() {
        return Ok(None);
    }
    let mut out = Vec::with_capacity(raw.len());
    for s in raw {
        out.push(
            Rat::parse(s).map_err(|e| format!("--lambda {s:?}: {e}"))?,
        );
    }
    Ok(Some(out))
}

fn common_opts(args: &RunArgs) -> Result<CommonOpts, String> {
    Ok(CommonOpts {
        seed: args.seed,
        points: args.points,
        lambdas: parse_lambdas(&args.lambdas)?,
        truncation: args.truncation,
        symbolic_curvature: args.symbolic_curvature,
    })
}

fn emit(bytes: &[u8], output: Option<&PathBuf>) -> Result<(), String> {
    match output {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| format!("stdout: {e}")),
    }
}

fn run(cli: Cli) -> Result<bool, String> {
    match cli.cmd {
        Cmd::CheckPencil(args) => run_stages(&args, &[Stage::Pencil]),
        Cmd::Build(args) => run_stages(&args, &[Stage::Pencil, Stage::Build]),
        Cmd::Roundtrip(args) => {
            run_stages(&args, &[Stage::Pencil, Stage::Build, Stage::Roundtrip])
        }
        Cmd::Verify(args) => run_stages(
            &args,
            &[
                Stage::Pencil,
                Stage::Build,
                Stage::Verify,
                Stage::Roundtrip,
                Stage::Uniqueness,
            ],
        ),
        Cmd::Match(args) => {
            let flags = CommonOpts {
                seed: args.seed,
                truncation: args.truncation,
                ..CommonOpts::default()
            };
            let (bytes, passed) =
                match_command(&args.first, &args.second, &flags, parse_format(&args.format))?;
            emit(&bytes, args.output.as_ref())?;
            Ok(passed)
        }
        Cmd::Coxeter(args) => {
            let bytes = coxeter_command(&args.group_type, args.rank, args.seed, args.label)?;
            emit(&bytes, args.output.as_ref())?;
            Ok(true)
        }
        Cmd::FixtureSeries(args) => {
            let flags = common_opts(&args)?;
            let (bytes, passed) =
                fixture_series_command(&args.spec, &flags, parse_format(&args.format))?;
            emit(&bytes, args.output.as_ref())?;
            Ok(passed)
        }
    }
}

fn run_stages(args: &RunArgs, stages: &[Stage]) -> Result<bool, String> {
    let flags = common_opts(args)?;
    let (bytes, passed) =
        run_stages_command(&args.spec, stages, &flags, parse_format(&args.format))?;
    emit(&bytes, args.output.as_ref())?;
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
