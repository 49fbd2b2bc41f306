//! Command-line driver.
//!
//! Exit codes: 0 success, 1 I/O, 2 usage or the balanced-disk regime,
//! 3 formula-integrity failure (including a failed verification), 4 cache mismatch.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::cache::{cache_key, CacheError, ResultCache};
use crate::correspondence::{insertions_json, verify_correspondence, InsertionJson};
use crate::engine::Engine;
use crate::graphs::GraphError;
use crate::open::Insertion;
use crate::sweep::{run_sweep, sweep_cases, CaseReport, SweepConfig};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTEGRITY: i32 = 3;
pub const EXIT_CACHE: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "openclosed", version, about = "Disk and closed invariants and their correspondence")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Disk invariant of (P^1, L)
    Disk(Single),
    /// Closed invariant of X
    Closed {
        #[command(flatten)]
        args: Single,
        /// Restrict to u1 + u2 = 0, u1 = u
        #[arg(long)]
        restrict: bool,
    },
    /// Check the correspondence for one class and insertion list
    Verify(Single),
    /// Run every check over a range of classes and insertions
    Sweep {
        #[arg(long, default_value_t = 5)]
        max_total_degree: u32,
        #[arg(long, default_value_t = 2)]
        max_markings: usize,
        #[arg(long, default_value_t = 2)]
        max_descendant: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Dump decorated graphs as JSON lines
    Graphs {
        #[arg(long, value_enum)]
        side: Side,
        #[arg(long, value_parser = parse_beta)]
        beta: (u32, u32),
        #[arg(long, default_value_t = 0)]
        markings: usize,
    },
}

#[derive(Args, Debug)]
pub struct Single {
    /// Curve class as d1,d2
    #[arg(long, value_parser = parse_beta)]
    pub beta: (u32, u32),
    /// Comma-separated alpha:a pairs; empty for none
    #[arg(long, default_value = "", value_parser = parse_insertions)]
    pub insertions: Insertions,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct Output {
    #[arg(long)]
    pub cache: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Open,
    Closed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Insertions(pub Vec<Insertion>);

pub fn parse_beta(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected d1,d2, got {s:?}"))?;
    let p = |x: &str| x.trim().parse::<u32>().map_err(|e| format!("bad degree {x:?}: {e}"));
    Ok((p(a)?, p(b)?))
}

pub fn parse_insertions(s: &str) -> Result<Insertions, String> {
    if s.trim().is_empty() {
        return Ok(Insertions(Vec::new()));
    }
    s.split(',')
        .map(|item| {
            let (alpha, a) = item
                .split_once(':')
                .ok_or_else(|| format!("expected alpha:a, got {item:?}"))?;
            let alpha = alpha.trim().parse::<u8>().map_err(|e| format!("bad alpha {alpha:?}: {e}"))?;
            let a = a.trim().parse::<u32>().map_err(|e| format!("bad exponent {a:?}: {e}"))?;
            Ok(Insertion::new(alpha, a))
        })
        .collect::<Result<_, _>>()
        .map(Insertions)
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Engine(#[from] Error),
    #[error(transparent)]
    Cache(#[from] CacheError),
    #[error("output error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Engine(e) if e.is_integrity() => EXIT_INTEGRITY,
            CliError::Engine(_) => EXIT_USAGE,
            CliError::Cache(CacheError::Mismatch { .. }) => EXIT_CACHE,
            CliError::Cache(_) | CliError::Io(_) => EXIT_IO,
            CliError::Failed(_) => EXIT_INTEGRITY,
        }
    }
}

#[derive(Serialize)]
struct ValueJson<'a> {
    beta: [u32; 2],
    insertions: Vec<InsertionJson>,
    value: &'a str,
    status: &'a str,
}

fn open_cache(path: &Option<PathBuf>) -> Result<Option<ResultCache>, CliError> {
    Ok(match path {
        Some(p) => Some(ResultCache::open(p)?),
        None => None,
    })
}

/// Serves `key` from the cache when present, otherwise computes and records it.
fn cached<F>(cache: &mut Option<ResultCache>, key: &str, compute: F) -> Result<String, CliError>
where
    F: FnOnce() -> Result<String, Error>,
{
    if let Some(v) = cache.as_ref().and_then(|c| c.get(key)) {
        return Ok(v.to_string());
    }
    let value = compute()?;
    if let Some(c) = cache.as_mut() {
        c.record(key, &value)?;
    }
    Ok(value)
}

fn emit_value(out: &mut dyn Write, args: &Single, value: &str) -> Result<(), CliError> {
    match args.output.format {
        Format::Text => writeln!(out, "{value}")?,
        Format::Json => {
            let v = ValueJson {
                beta: [args.beta.0, args.beta.1],
                insertions: insertions_json(&args.insertions.0),
                value,
                status: "ok",
            };
            writeln!(out, "{}", serde_json::to_string(&v).expect("serializable"))?;
        }
    }
    Ok(())
}

fn check_open_alphas(ins: &[Insertion]) -> Result<(), Error> {
    crate::open::check_open_insertions(ins)
}

fn disk(engine: &Engine, args: &Single, out: &mut dyn Write) -> Result<(), CliError> {
    let mut cache = open_cache(&args.output.cache)?;
    let ins = &args.insertions.0;
    if args.beta.0 == args.beta.1 {
        return Err(Error::Graph(GraphError::BalancedDisk(args.beta.0)).into());
    }
    check_open_alphas(ins)?;
    let key = cache_key("disk", args.beta, ins);
    let value = cached(&mut cache, &key, || Ok(engine.disk_invariant(args.beta, ins)?.canonical_string()))?;
    emit_value(out, args, &value)
}

fn closed(engine: &Engine, args: &Single, restrict: bool, out: &mut dyn Write) -> Result<(), CliError> {
    let mut cache = open_cache(&args.output.cache)?;
    let ins = &args.insertions.0;
    let side = if restrict { "closed-restricted" } else { "closed" };
    let key = cache_key(side, args.beta, ins);
    let value = cached(&mut cache, &key, || {
        Ok(if restrict {
            engine.closed_invariant_restricted(args.beta, ins)?.value.canonical_string()
        } else {
            engine.closed_invariant(args.beta, ins)?.canonical_string()
        })
    })?;
    emit_value(out, args, &value)
}

fn verify(engine: &Engine, args: &Single, out: &mut dyn Write) -> Result<(), CliError> {
    let mut cache = open_cache(&args.output.cache)?;
    let ins = &args.insertions.0;
    let report = verify_correspondence(engine, args.beta, ins)?;
    if let Some(c) = cache.as_mut() {
        c.record(&cache_key("closed-restricted", args.beta, ins), &report.lhs)?;
    }
    match args.output.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(&report).expect("serializable"))?,
        Format::Text => {
            writeln!(out, "beta: ({}, {})", args.beta.0, args.beta.1)?;
            writeln!(out, "lhs: {}", report.lhs)?;
            writeln!(out, "rhs: {}", report.rhs)?;
            writeln!(out, "tuples: {}", report.tuples.len())?;
            writeln!(out, "status: {}", report.status)?;
        }
    }
    if report.is_equal() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("correspondence fails: {} != {}", report.lhs, report.rhs)))
    }
}

fn flag(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAIL"
    }
}

fn insertion_text(ins: &[InsertionJson]) -> String {
    if ins.is_empty() {
        return "-".into();
    }
    ins.iter().map(|i| format!("{}:{}", i.alpha, i.a)).collect::<Vec<_>>().join(",")
}

fn case_row(c: &CaseReport) -> String {
    format!(
        "({},{}) {:<8} lhs={} rhs={} theorem={} g11={} vanish={} g0={} homog={} mono={} multinom={} fan={}",
        c.beta[0],
        c.beta[1],
        insertion_text(&c.insertions),
        c.lhs,
        c.rhs,
        flag(c.theorem),
        flag(c.lemma_g11),
        flag(c.valuations),
        flag(c.g0_empty),
        flag(c.homogeneous),
        flag(c.monomial),
        flag(c.multinomial),
        flag(c.fan_symmetry),
    )
}

#[derive(Serialize)]
struct SweepSummary {
    cases: usize,
    passed: usize,
    failed: usize,
    stable_tuples: usize,
}

fn sweep(engine: &Engine, cfg: SweepConfig, output: &Output, out: &mut dyn Write) -> Result<(), CliError> {
    let mut cache = open_cache(&output.cache)?;
    let cases = sweep_cases(&cfg);
    let results = run_sweep(engine, &cfg);
    let mut passed = 0;
    let mut stable = 0;
    let mut failures = Vec::new();
    for ((beta, ins), r) in cases.iter().zip(results) {
        match r {
            Ok(c) => {
                if let Some(cache) = cache.as_mut() {
                    cache.record(&cache_key("closed-restricted", *beta, ins), &c.lhs)?;
                    cache.record(&cache_key("disk", *beta, ins), &c.disk)?;
                }
                stable += c.stable_tuples;
                match output.format {
                    Format::Text => writeln!(out, "{}", case_row(&c))?,
                    Format::Json => writeln!(out, "{}", serde_json::to_string(&c).expect("serializable"))?,
                }
                if c.passes() {
                    passed += 1;
                } else {
                    failures.push(format!("({},{}) {}", beta.0, beta.1, insertion_text(&c.insertions)));
                }
            }
            Err(e) => {
                let line = format!("({},{}) {} error: {e}", beta.0, beta.1, insertion_text(&insertions_json(ins)));
                writeln!(out, "{line}")?;
                failures.push(line);
            }
        }
    }
    let summary = SweepSummary {
        cases: cases.len(),
        passed,
        failed: failures.len(),
        stable_tuples: stable,
    };
    match output.format {
        Format::Text => writeln!(
            out,
            "cases: {} passed: {} failed: {} stable tuples crosschecked: {}",
            summary.cases, summary.passed, summary.failed, summary.stable_tuples
        )?,
        Format::Json => writeln!(out, "{}", serde_json::to_string(&summary).expect("serializable"))?,
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("{} sweep case(s) failed", failures.len())))
    }
}

fn graphs(engine: &Engine, side: Side, beta: (u32, u32), n: usize, out: &mut dyn Write) -> Result<(), CliError> {
    let list = match side {
        Side::Open => engine.open_graphs(n, beta),
        Side::Closed => engine.closed_graphs(n, beta),
    }
    .map_err(Error::from)?;
    for g in list.iter() {
        writeln!(out, "{}", serde_json::to_string(&g.to_dump(beta)).expect("serializable"))?;
    }
    Ok(())
}

fn dispatch(engine: &Engine, cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Disk(args) => disk(engine, &args, out),
        Command::Closed { args, restrict } => closed(engine, &args, restrict, out),
        Command::Verify(args) => verify(engine, &args, out),
        Command::Sweep {
            max_total_degree,
            max_markings,
            max_descendant,
            output,
        } => {
            let cfg = SweepConfig {
                max_total_degree,
                max_markings,
                max_descendant,
            };
            sweep(engine, cfg, &output, out)
        }
        Command::Graphs { side, beta, markings } => graphs(engine, side, beta, markings, out),
    }
}

/// Parses `argv` (including the program name), runs it, and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match dispatch(Engine::global(), cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["openclosed"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_beta("2,1"), Ok((2, 1)));
        assert!(parse_beta("2").is_err());
        assert_eq!(parse_insertions("").unwrap().0, vec![]);
        assert_eq!(
            parse_insertions("1:0,2:1").unwrap().0,
            vec![Insertion::new(1, 0), Insertion::new(2, 1)]
        );
        assert!(parse_insertions("1-0").is_err());
    }

    #[test]
    fn disk_command() {
        let (code, out, _) = call(&["disk", "--beta", "1,0"]);
        assert_eq!((code, out.as_str()), (0, "1 * u^0\n"));
        let (code, _, err) = call(&["disk", "--beta", "1,1"]);
        assert_eq!(code, 2);
        assert!(err.contains("vanish"));
        let (code, _, _) = call(&["disk", "--beta", "2,1", "--insertions", "0:1"]);
        assert_eq!(code, 2);
        let (code, out, _) = call(&["disk", "--beta", "2,1", "--format", "json"]);
        assert_eq!(code, 0);
        assert_eq!(
            out,
            "{\"beta\":[2,1],\"insertions\":[],\"value\":\"1/2 * u^-2\",\"status\":\"ok\"}\n"
        );
    }

    #[test]
    fn verify_and_closed_commands() {
        let (code, out, _) = call(&["verify", "--beta", "2,1", "--insertions", ""]);
        assert_eq!(code, 0);
        assert!(out.contains("status: equal"));
        let (code, out, _) = call(&["closed", "--beta", "1,0", "--restrict"]);
        assert_eq!((code, out.as_str()), (0, "1 * u^0\n"));
        let (code, _, _) = call(&["closed", "--beta", "1,1", "--restrict"]);
        assert_eq!(code, 2);
        let (code, _, _) = call(&["verify", "--beta", "1,1"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn cache_hits_and_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        let p = path.to_str().unwrap();
        let first = call(&["disk", "--beta", "2,1", "--cache", p]);
        let second = call(&["disk", "--beta", "2,1", "--cache", p]);
        assert_eq!(first, second);
        let rec = r#"{"key":"closed-restricted|1,0|","value":"7 * u^0","engine_version":"0"}"#;
        std::fs::write(&path, format!("{rec}\n")).unwrap();
        let (code, _, err) = call(&["verify", "--beta", "1,0", "--cache", p]);
        assert_eq!(code, 4, "{err}");
    }

    #[test]
    fn graphs_command() {
        let (code, out, _) = call(&["graphs", "--side", "closed", "--beta", "1,1"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 1);
        let (code, out, _) = call(&["graphs", "--side", "open", "--beta", "2,1", "--markings", "1"]);
        assert_eq!(code, 0);
        assert!(out.lines().all(|l| l.starts_with("{\"side\":\"open\"")));
    }
}
