//! `hfscatter`: traces, wavenumber sweeps, Ψ tables and the validation suite.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use hfscatter::fock::FockEvaluator;
use hfscatter::harness::{dump_psi_table, parse_kinds, psi_table_csv, run_sweep, run_trace, validate, HarnessConfig};

#[derive(Parser, Debug)]
#[command(name = "hfscatter", version, about = "High-frequency surface currents on convex 2-D obstacles")]
struct Cli {
    /// Flat `key = value` configuration file; absent keys take their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file, or `stdout` (the default).
    #[arg(long, global = true, default_value = "stdout")]
    out: String,
    /// Comma-separated current kinds (overrides `trace.kinds`).
    #[arg(long, global = true)]
    kinds: Option<String>,
    /// Wavenumber (overrides `wave.k`).
    #[arg(long, global = true)]
    k: Option<f64>,
    /// Suppress the summary written to stderr.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample the requested currents along the boundary.
    Trace,
    /// Fit error rates and band growth over `sweep.k_list`.
    Sweep,
    /// Tabulate Ψ, Ψ' and Ψ''.
    FockTable {
        #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
        tau_min: f64,
        #[arg(long, default_value_t = 20.0, allow_hyphen_values = true)]
        tau_max: f64,
        #[arg(long, default_value_t = 0.5)]
        step: f64,
    },
    /// Run the invariant suite and print one line per check.
    Validate,
}

fn load_config(cli: &Cli) -> Result<HarnessConfig> {
    let mut cfg = match &cli.config {
        Some(path) => HarnessConfig::from_file(path).with_context(|| format!("reading {}", path.display()))?,
        None => HarnessConfig::default(),
    };
    if let Some(kinds) = &cli.kinds {
        cfg.kinds = parse_kinds(kinds)?;
    }
    if let Some(k) = cli.k {
        cfg.k = k;
    }
    cfg.check()?;
    Ok(cfg)
}

fn emit(out: &str, text: &str) -> Result<()> {
    if out == "stdout" || out == "-" {
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(text.as_bytes())?;
        stdout.flush()?;
    } else {
        std::fs::write(out, text).with_context(|| format!("writing {out}"))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<bool> {
    let cfg = load_config(cli)?;
    let (text, ok, summary) = match &cli.command {
        Command::Trace => {
            let trace = run_trace(&cfg)?;
            let summary = format!("trace: {} samples at k = {}", trace.rows.len(), trace.k);
            (trace.to_csv(), true, summary)
        }
        Command::Sweep => {
            let sweep = run_sweep(&cfg)?;
            let contracts = sweep.contracts();
            let summary = contracts
                .iter()
                .map(|(name, ok)| format!("{} {name}", if *ok { "PASS" } else { "FAIL" }))
                .collect::<Vec<_>>()
                .join("\n");
            (sweep.to_csv(), sweep.all_pass(), summary)
        }
        Command::FockTable { tau_min, tau_max, step } => {
            let rows = dump_psi_table(*tau_min, *tau_max, *step, &FockEvaluator::with_tau_switch(cfg.tau_switch))?;
            let summary = format!("fock-table: {} rows", rows.len());
            (psi_table_csv(&rows), true, summary)
        }
        Command::Validate => {
            let report = validate(&cfg);
            let passed = report.checks.iter().filter(|c| c.passed).count();
            let summary = format!("validate: {passed}/{} checks passed", report.checks.len());
            (report.to_text(), report.all_pass(), summary)
        }
    };
    emit(&cli.out, &text)?;
    if !cli.quiet {
        eprintln!("{summary}");
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
