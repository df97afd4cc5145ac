use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use topos_cli::{run, Command, Options};
use topos_core::presheaf::{SearchOptions, DEFAULT_SEARCH_NODES};

#[derive(Parser)]
#[command(
    name = "topos",
    version,
    about = "Presheaf truth values and Kochen-Specker search on exact quantum scenarios"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Output style.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,

    /// Run the global-section search on one thread.
    #[arg(long, global = true)]
    no_parallel: bool,

    /// Maximum number of search nodes before giving up (exit status 3).
    #[arg(long, value_name = "N", default_value_t = DEFAULT_SEARCH_NODES, global = true)]
    guard: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a scenario, topology or poset file.
    Validate { file: PathBuf },
    /// List the operator category: objects, arrows with their functions, |Ω|.
    Category { file: PathBuf },
    /// Evaluate every QUERY as a sieve-valued truth value.
    Valuate { file: PathBuf },
    /// Search for global sections of the dual presheaf.
    KsSearch { file: PathBuf },
    /// Print Heyting algebra tables for a topology, poset or scenario.
    Heyting { file: PathBuf },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Record,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, file) = match cli.command {
        Cmd::Validate { file } => (Command::Validate, file),
        Cmd::Category { file } => (Command::Category, file),
        Cmd::Valuate { file } => (Command::Valuate, file),
        Cmd::KsSearch { file } => (Command::KsSearch, file),
        Cmd::Heyting { file } => (Command::Heyting, file),
    };
    let options = Options {
        search: SearchOptions {
            max_nodes: cli.guard,
            parallel: !cli.no_parallel,
        },
    };
    let start = Instant::now();
    let result = run(command, &file, options);
    let (report, code) = match result {
        Ok(r) => (r, 0),
        Err(f) => (
            f.report(command, &file.display().to_string()),
            f.exit_code(),
        ),
    };
    match (cli.format, code) {
        (Format::Record, _) => print!("{}", report.to_record()),
        (Format::Human, 0) => print!("{}", report.to_human()),
        (Format::Human, _) => eprint!("{}", report.to_human()),
    }
    if cli.format == Format::Human {
        eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    }
    ExitCode::from(code as u8)
}
