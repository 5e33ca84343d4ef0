use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use scalefield_cli::{emit_report, parse_config, run, Command, Format, EXIT_CONFIG, EXIT_FAIL, EXIT_PASS};

/// Runs a scalefield check suite and writes its report.
#[derive(Parser, Debug)]
#[command(name = "scalefield", version)]
struct Args {
    /// Suite to run.
    #[arg(value_enum)]
    command: Command,
    /// TOML configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory [default: from config, else scalefield-out].
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for every random case [default: from config, else 42].
    #[arg(long)]
    seed: Option<u64>,
    /// Report format [default: from config, else csv].
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_CONFIG)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => return fail(format!("{}: {e}", args.config.display())),
    };
    let mut cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => return fail(format!("{}: {e}", args.config.display())),
    };
    if let Some(c) = cfg.command {
        if c != args.command {
            return fail(format!(
                "{}: configuration is for `{}`, not `{}`",
                args.config.display(),
                c.name(),
                args.command.name()
            ));
        }
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let format = args.format.or(cfg.format).unwrap_or_default();
    let out = args
        .out
        .or_else(|| cfg.output.clone())
        .unwrap_or_else(|| PathBuf::from("scalefield-out"));

    let report = match run(args.command, &cfg) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let paths = match emit_report(&report, format, &out) {
        Ok(p) => p,
        Err(e) => return fail(format!("{}: {e}", out.display())),
    };
    let s = &report.summary;
    println!(
        "{} seed={} cases={} passed={} failed={} max_error={:e} status={}",
        report.command, report.seed, s.cases, s.passed, s.failed, s.max_error, s.status
    );
    for p in paths {
        println!("wrote {}", p.display());
    }
    ExitCode::from(if report.passed() { EXIT_PASS } else { EXIT_FAIL })
}
