use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use flatspin::catalog::EnumerationMode;
use flatspin_cli::report::{render_text, Check};
use flatspin_cli::{analyze, cross_check, enumerate, resolve_target, verify, Status, EXIT_ERROR};

/// Spin and spin^c structures on flat manifolds with diagonal holonomy.
///
/// Exit codes: 0 success, 1 error (I/O, parse, usage, refused request),
/// 2 the input is not a torsion-free crystallographic group,
/// 3 a cross-check disagreed or a certificate failed to replay.
#[derive(Parser)]
#[command(name = "flatspin", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a group and compute invariants and structure verdicts.
    Analyze {
        /// A group file, or `catalog:<name>` (cyclic-hw-<n>, hw-5-1, hw-5-2, torus-<n>).
        target: String,
        /// Analyses to run; torsion-freeness is always checked.
        #[arg(long, value_enum, value_delimiter = ',', default_values = ["torsion", "betti", "h1", "characters", "spin", "spinc"])]
        checks: Vec<Check>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Decide Spin and Spin^c for every Hantzsche-Wendt candidate in dimension n.
    Enumerate {
        n: usize,
        /// Every candidate (n = 3 or 5 only).
        #[arg(long, conflicts_with = "sample", required_unless_present = "sample")]
        exhaustive: bool,
        /// Draw this many distinct torsion-free candidates.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads (default: all cores). Output does not depend on it.
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Compare the presentation method with the pairwise cocycle oracle.
    CrossCheck {
        target: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Re-check every fact and certificate in a JSON report.
    Verify {
        report: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_document<T: serde::Serialize>(out: &OutputArgs, value: &T, text: impl FnOnce(&T) -> String) -> Result<()> {
    let mut w = open_output(out.output.as_deref())?;
    match out.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, value)?;
            writeln!(w)?;
        }
        Format::Text => w.write_all(text(value).as_bytes())?,
    }
    w.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<Status> {
    match cli.command {
        Command::Analyze { target, checks, out } => {
            let target = resolve_target(&target)?;
            let (report, status) = analyze::analyze(&target, &checks)?;
            write_document(&out, &report, render_text)?;
            if status == Status::ValidationFailed {
                if let Some(e) = &report.validation.error {
                    eprintln!("validation failed: {e}");
                } else {
                    eprintln!("validation failed: the group has torsion (witness in the report)");
                }
            }
            Ok(status)
        }
        Command::Enumerate {
            n,
            exhaustive,
            sample,
            seed,
            jobs,
            out,
        } => {
            let mode = match (exhaustive, sample) {
                (true, None) => EnumerationMode::Exhaustive,
                (false, Some(count)) => EnumerationMode::Sample { count, seed },
                _ => bail!("choose exactly one of --exhaustive and --sample"),
            };
            if jobs == Some(0) {
                bail!("--jobs must be positive");
            }
            let mut w = open_output(out.output.as_deref())?;
            let format = out.format;
            let (summary, status) = enumerate::enumerate(n, mode, jobs, &mut |r| match format {
                Format::Json => {
                    serde_json::to_writer(&mut w, r)?;
                    writeln!(w)
                }
                Format::Text => writeln!(w, "{}", enumerate::record_text(r)),
            })?;
            match format {
                Format::Json => {
                    serde_json::to_writer(&mut w, &serde_json::json!({ "summary": summary }))?;
                    writeln!(w)?;
                }
                Format::Text => w.write_all(enumerate::summary_text(&summary).as_bytes())?,
            }
            w.flush()?;
            if out.output.is_some() {
                eprint!("{}", enumerate::summary_text(&summary));
            }
            Ok(status)
        }
        Command::CrossCheck { target, out } => {
            let target = resolve_target(&target)?;
            let (report, status) = cross_check::cross_check(&target)?;
            match report {
                Ok(r) => write_document(&out, &r, cross_check::render_text)?,
                Err(msg) => eprintln!("validation failed: {msg}"),
            }
            Ok(status)
        }
        Command::Verify { report, out } => {
            let text = flatspin_cli::read_to_string(&report)?;
            let parsed = verify::parse_report(&text).with_context(|| report.display().to_string())?;
            let (result, status) = verify::verify_report(&parsed)?;
            write_document(&out, &result, verify::render_text)?;
            Ok(status)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(status) => ExitCode::from(status.exit_code()),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
