use std::io::{self, BufReader};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rigiduality_cli::driver::{self, EXIT_FAILURE, EXIT_USAGE};
use rigiduality_cli::exec::Options;
use rigiduality_cli::record::Report;
use rigiduality_core::duality::DEFAULT_SQUARING_BOUND;
use rigiduality_core::MonomialOrder;
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "rigiduality",
    version,
    about = "Rigid dualizing modules, Groebner bases and traces of differential forms"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Execute a session file.
    Run {
        file: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Run the verification suite.
    Check {
        #[command(flatten)]
        flags: Flags,
    },
    /// Read statements interactively.
    Repl {
        #[command(flatten)]
        flags: Flags,
    },
}

#[derive(Args)]
struct Flags {
    /// Monomial order for every ring: lex, grevlex or block(k).
    #[arg(long, default_value = "grevlex", value_parser = parse_order)]
    order: MonomialOrder,
    /// Highest Ext index computed by the squaring table.
    #[arg(long = "max-ext", value_name = "N", default_value_t = DEFAULT_SQUARING_BOUND)]
    max_ext: usize,
    /// Seed for randomized isomorphism probes.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the full result as JSON to PATH.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Stop at the first error record.
    #[arg(long = "fail-fast")]
    fail_fast: bool,
    /// Restrict `check` to a comma list of groups or criterion numbers.
    #[arg(long, value_name = "GROUPS")]
    only: Option<String>,
}

impl Flags {
    fn options(&self) -> Options {
        Options {
            order: self.order,
            max_ext: self.max_ext,
            seed: self.seed,
            fail_fast: self.fail_fast,
        }
    }
}

fn parse_order(s: &str) -> Result<MonomialOrder, String> {
    MonomialOrder::parse(s)
        .ok_or_else(|| format!("unknown order `{s}`; use lex, grevlex or block(k)"))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), String> {
    let text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    std::fs::write(path, text + "\n").map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn exit(code: i32) -> ExitCode {
    ExitCode::from(code as u8)
}

fn run(file: &Path, flags: &Flags) -> i32 {
    let src = match std::fs::read_to_string(file) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", file.display());
            return EXIT_USAGE;
        }
    };
    let result = driver::run_source(&src, &file.display().to_string(), &flags.options());
    for d in &result.rendered {
        eprintln!("{d}");
    }
    for r in &result.report.records {
        println!("{}", driver::record_line(r));
    }
    if let Some(path) = &flags.json {
        if let Err(e) = write_json(path, &result.report) {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    }
    result.exit
}

#[derive(Serialize)]
struct CheckReport<'a> {
    seed: u64,
    only: Option<&'a str>,
    passed: bool,
    outcomes: &'a [rigiduality_core::suite::Outcome],
}

fn check(flags: &Flags) -> i32 {
    let only = flags.only.as_deref();
    let result = match driver::run_checks(only, flags.seed) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    for o in &result.outcomes {
        println!("{}", o.summary_line());
        if !o.passed {
            for d in o.details.iter().filter(|d| d.starts_with("FAIL")) {
                println!("    {d}");
            }
        }
    }
    let passed = result.outcomes.iter().filter(|o| o.passed).count();
    println!("{passed}/{} passed", result.outcomes.len());
    if let Some(path) = &flags.json {
        let report = CheckReport {
            seed: flags.seed,
            only,
            passed: result.exit == 0,
            outcomes: &result.outcomes,
        };
        if let Err(e) = write_json(path, &report) {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    }
    result.exit
}

fn repl(flags: &Flags) -> i32 {
    let stdin = io::stdin();
    match driver::repl(BufReader::new(stdin.lock()), io::stdout(), flags.options()) {
        Ok(records) => {
            if let Some(path) = &flags.json {
                let report = Report {
                    source: "<repl>".into(),
                    diagnostics: Vec::new(),
                    records,
                };
                if let Err(e) = write_json(path, &report) {
                    eprintln!("error: {e}");
                    return EXIT_USAGE;
                }
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_FAILURE
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.command {
        Cmd::Run { file, flags } => run(file, flags),
        Cmd::Check { flags } => check(flags),
        Cmd::Repl { flags } => repl(flags),
    };
    exit(code)
}
