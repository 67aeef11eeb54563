//! `moufang`: command-line front end for the loop toolkit.
//!
//! Exit codes: 0 on success, 1 for usage or input errors, 2 when an
//! assertion or theorem-violation trap fires.

mod commands;
mod verify;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use moufang::catalog::lookup;
use moufang::{parse_loop, LoopTable};

#[derive(Debug, Parser)]
#[command(name = "moufang", version)]
#[command(about = "Finite loops as Cayley tables: Moufang structure and half-isomorphism search")]
struct Cli {
    /// Print the JSON report on stdout and the summary on stderr.
    #[arg(long, global = true)]
    json: bool,

    /// Suppress the human-readable summary.
    #[arg(long, short, global = true)]
    quiet: bool,

    /// Worker threads; 0 uses one per core.
    #[arg(long, global = true, env = "MOUFANG_THREADS", default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Identity scans: group, commutative, Moufang, diassociative, automorphic.
    Check {
        /// Loop file, built-in name, or enumerated name such as L5-3.
        #[arg(value_name = "LOOP")]
        source: String,
    },

    /// Nucleus, its normality, the quotient by it and squaring there.
    Nucleus {
        #[arg(value_name = "LOOP")]
        source: String,

        /// Write the quotient loop here, with a `.cosets.json` sidecar.
        #[arg(long, value_name = "PATH")]
        quotient_out: Option<PathBuf>,
    },

    /// Classify the map in a JSON map file.
    Classify {
        #[arg(value_name = "MAP_FILE")]
        map: PathBuf,
    },

    /// Enumerate half-isomorphisms between two loops of equal order.
    Search {
        #[arg(value_name = "SOURCE")]
        source: String,

        #[arg(value_name = "TARGET")]
        target: String,

        /// Keep only proper half-isomorphisms.
        #[arg(long)]
        proper_only: bool,

        /// Stop at the first accepted map.
        #[arg(long)]
        first: bool,
    },

    /// Worked example, lemma suite, structural invariants and the catalog sweep.
    VerifyPaper {
        /// Largest order of exhaustively enumerated loops in the sweep (1..=6).
        #[arg(long, default_value_t = 6)]
        max_order: usize,

        /// Search each pair for one proper map only.
        #[arg(long)]
        first: bool,
    },

    /// Inspect the built-in catalog.
    Catalog {
        #[command(subcommand)]
        action: Option<CatalogAction>,
    },
}

#[derive(Debug, Subcommand)]
enum CatalogAction {
    /// Names, orders and provenance of the built-in loops.
    List,
    /// Print one loop in the loop file format.
    Dump {
        name: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),

    #[error(transparent)]
    Library(#[from] moufang::Error),

    /// Checks ran to completion but at least one assertion failed.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Library(e) if e.is_trap() => 2,
            CliError::Library(_) => 1,
            CliError::Failed(_) => 2,
        }
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

/// Where reports and summaries go.
#[derive(Debug, Clone, Copy)]
pub struct Output {
    json: bool,
    quiet: bool,
}

impl Output {
    pub fn emit<T: Serialize>(&self, report: &T, summary: &str) -> CliResult {
        if self.json {
            let text = serde_json::to_string_pretty(report).map_err(moufang::Error::from)?;
            write_stdout(&(text + "\n"))?;
            if !self.quiet {
                eprint!("{summary}");
            }
        } else if !self.quiet {
            write_stdout(summary)?;
        }
        Ok(())
    }
}

/// Writes to stdout; a closed pipe (as with `| head`) is not an error.
pub fn write_stdout(text: &str) -> CliResult {
    let mut stdout = std::io::stdout().lock();
    match stdout
        .write_all(text.as_bytes())
        .and_then(|()| stdout.flush())
    {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(moufang::Error::from(e).into()),
        _ => Ok(()),
    }
}

/// A path that exists wins; otherwise the catalog is consulted. Relative
/// paths are resolved against `base` when given.
pub fn load_loop(spec: &str, base: Option<&Path>) -> CliResult<LoopTable> {
    let path = match base {
        Some(dir) => dir.join(spec),
        None => PathBuf::from(spec),
    };
    if path.is_file() {
        let text = std::fs::read_to_string(&path).map_err(moufang::Error::from)?;
        let q =
            parse_loop(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        return Ok(q);
    }
    lookup(spec)
        .ok_or_else(|| CliError::Input(format!("no loop file or catalog entry named {spec:?}")))
}

pub fn bullet(out: &mut String, label: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "  {label:<24} {value}");
}

fn run(cli: Cli) -> CliResult {
    let out = Output {
        json: cli.json,
        quiet: cli.quiet,
    };
    match cli.command {
        Command::Check { source } => commands::check(&load_loop(&source, None)?, out),
        Command::Nucleus {
            source,
            quotient_out,
        } => commands::nucleus(&load_loop(&source, None)?, quotient_out.as_deref(), out),
        Command::Classify { map } => commands::classify(&map, out),
        Command::Search {
            source,
            target,
            proper_only,
            first,
        } => commands::search(
            &load_loop(&source, None)?,
            &load_loop(&target, None)?,
            proper_only,
            first,
            out,
        ),
        Command::VerifyPaper { max_order, first } => verify::run(max_order, first, out),
        Command::Catalog { action } => match action.unwrap_or(CatalogAction::List) {
            CatalogAction::List => commands::catalog_list(out),
            CatalogAction::Dump { name, format } => {
                commands::catalog_dump(&name, format == Format::Json)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
    {
        eprintln!("error: could not start worker pool: {e}");
        return ExitCode::from(1);
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = e.exit_code();
            let kind = if code == 2 {
                "assertion failed"
            } else {
                "error"
            };
            eprintln!("{kind}: {e}");
            ExitCode::from(code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_classes() {
        assert_eq!(CliError::Input("x".into()).exit_code(), 1);
        assert_eq!(CliError::Library(moufang::Error::NotProper).exit_code(), 1);
        assert_eq!(CliError::Failed("x".into()).exit_code(), 2);
        let trap = moufang::Error::TheoremViolation("x".into());
        assert_eq!(CliError::Library(trap).exit_code(), 2);
    }
}
