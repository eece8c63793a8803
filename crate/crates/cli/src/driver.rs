//! The `run`, `check` and `repl` entry points, independent of argument
//! parsing so tests can drive them directly.

use std::io::{BufRead, Write};

use rigiduality_core::suite::{criteria, groups, run_suite, Outcome};

use crate::binder::Binder;
use crate::exec::{execute, Executor, Options};
use crate::parser::parse_session;
use crate::record::{DiagnosticRecord, Report, ResultRecord, Status};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub struct RunResult {
    pub report: Report,
    /// Diagnostics rendered with source excerpts.
    pub rendered: Vec<String>,
    pub exit: i32,
}

/// Parse, bind and execute a whole session. A session with syntax or
/// binding errors is not executed.
pub fn run_source(src: &str, origin: &str, opts: &Options) -> RunResult {
    let (session, mut diags) = parse_session(src);
    if diags.is_empty() {
        diags = crate::binder::bind(&session);
    }
    let rendered = diags.iter().map(|d| d.render(src, origin)).collect();
    let diagnostics: Vec<DiagnosticRecord> =
        diags.iter().map(|d| DiagnosticRecord::of(src, d)).collect();
    let (records, exit) = if diagnostics.is_empty() {
        let records = execute(src, &session, opts);
        let exit = if records.iter().any(|r| r.status == Status::Error) {
            EXIT_FAILURE
        } else {
            EXIT_OK
        };
        (records, exit)
    } else {
        (Vec::new(), EXIT_USAGE)
    };
    RunResult {
        report: Report {
            source: origin.to_string(),
            diagnostics,
            records,
        },
        rendered,
        exit,
    }
}

/// `[index] status: summary`, the line printed per record.
pub fn record_line(r: &ResultRecord) -> String {
    let status = match r.status {
        Status::Ok => "ok",
        Status::Error => "error",
        Status::Inconclusive => "inconclusive",
    };
    format!("[{}] {status}: {}  ({})", r.index, r.summary, r.command)
}

/// Validate a `--only` filter: a comma list of group names or criterion
/// numbers.
pub fn check_filter(only: Option<&str>) -> Result<(), String> {
    let Some(only) = only else { return Ok(()) };
    let known = groups();
    let ids: Vec<String> = criteria().iter().map(|c| c.id.to_string()).collect();
    for part in only.split(',').map(str::trim) {
        if !known.contains(&part) && !ids.iter().any(|i| i == part) {
            return Err(format!(
                "unknown check group `{part}`; groups are {}",
                known.join(", ")
            ));
        }
    }
    Ok(())
}

pub struct CheckResult {
    pub outcomes: Vec<Outcome>,
    pub exit: i32,
}

pub fn run_checks(only: Option<&str>, seed: u64) -> Result<CheckResult, String> {
    check_filter(only)?;
    let outcomes = run_suite(only, seed);
    let exit = if outcomes.iter().all(|o| o.passed) {
        EXIT_OK
    } else {
        EXIT_FAILURE
    };
    Ok(CheckResult { outcomes, exit })
}

const REPL_HELP: &str =
    "Enter statements terminated by `;`. Definitions persist.\n  :help  this text\n  :quit  leave";

/// Read statements from `input` until end of input or `:quit`. A statement
/// may span lines; it is run once a line ends with `;`.
pub fn repl(
    input: impl BufRead,
    mut out: impl Write,
    opts: Options,
) -> std::io::Result<Vec<ResultRecord>> {
    let mut binder = Binder::default();
    let mut exec = Executor::new(opts);
    let mut all = Vec::new();
    let mut buffer = String::new();
    write!(out, "> ")?;
    out.flush()?;
    for line in input.lines() {
        let line = line?;
        let trimmed = line.trim();
        if buffer.is_empty() {
            match trimmed {
                ":quit" | ":q" => break,
                ":help" => {
                    writeln!(out, "{REPL_HELP}")?;
                    write!(out, "> ")?;
                    out.flush()?;
                    continue;
                }
                _ => {}
            }
        }
        buffer.push_str(&line);
        buffer.push('\n');
        let code = trimmed.split('#').next().unwrap_or("").trim_end();
        if !code.ends_with(';') && !buffer.trim().is_empty() {
            write!(out, ". ")?;
            out.flush()?;
            continue;
        }
        let src = std::mem::take(&mut buffer);
        let (session, mut diags) = parse_session(&src);
        if diags.is_empty() {
            diags = binder.bind(&session.stmts);
        }
        if diags.is_empty() {
            for stmt in &session.stmts {
                let r = exec.run(&src, stmt);
                writeln!(out, "{}", record_line(&r))?;
                all.push(r);
            }
        } else {
            for d in &diags {
                writeln!(out, "{}", d.render(&src, "<repl>"))?;
            }
        }
        write!(out, "> ")?;
        out.flush()?;
    }
    writeln!(out)?;
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repl_runs_statements_across_lines() {
        let input = b"ring A = QQ[x,\n y];\ndim A;\nnf B x;\n:help\n:quit\ndim A;\n" as &[u8];
        let mut out = Vec::new();
        let records = repl(input, &mut out, Options::default()).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(records[1].summary, "2");
        assert!(text.contains("`B` is not defined"), "{text}");
        assert!(text.contains(":quit  leave"), "{text}");
    }

    #[test]
    fn filters_are_validated() {
        assert!(check_filter(None).is_ok());
        assert!(check_filter(Some("traceform,5")).is_ok());
        assert!(check_filter(Some("nope")).is_err());
    }
}
