//! `gwsense` command line: single-point runs, parameter sweeps, verification
//! and pulse-table dumps.

pub mod config;
pub mod sweep;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use gwsense_core::sequence::build;
use gwsense_core::verify::{run_default_suite, verify_scenario};
use gwsense_core::{differential_phase, SequenceKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "gwsense", version, about = "Gravitational-wave phase response of atomic sensor pairs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one configuration and print the phase breakdown.
    Simulate { config: PathBuf },
    /// Evaluate the configured sweep and write CSV.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the verification suite, or check one configuration.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::Default)]
        suite: Suite,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Pulse tables.
    Sequence {
        #[command(subcommand)]
        action: SequenceAction,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Default,
}

#[derive(Debug, Subcommand)]
pub enum SequenceAction {
    /// Print ℓ, t_a, t_b, λ_ω, λ_k as CSV.
    Dump {
        kind: String,
        #[arg(long = "N", default_value_t = 1)]
        n: usize,
        #[arg(long = "T")]
        t: f64,
        #[arg(long, default_value_t = 0.0)]
        tau: f64,
    },
}

/// Parses `args` (program name first) and runs the command. Returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
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
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> anyhow::Result<i32> {
    match cmd {
        Command::Simulate { config } => simulate(&config::parse_config(&config)?, out),
        Command::Sweep { config, out: path } => {
            let spec = config::parse_config(&config)?;
            let rows = sweep::run_sweep(&spec);
            let file = File::create(&path).with_context(|| format!("cannot create {}", path.display()))?;
            sweep::write_csv(&spec, &rows, BufWriter::new(file))?;
            let failed = rows.iter().filter(|r| r.result.is_err()).count();
            writeln!(out, "wrote {} rows to {} ({failed} with errors)", rows.len(), path.display())?;
            Ok(EXIT_OK)
        }
        Command::Verify { suite: _, config: Some(path) } => {
            let spec = config::parse_config(&path)?;
            let report = verify_scenario(&spec.scenario, spec.engine);
            writeln!(out, "{report}")?;
            write!(out, "{}", report.detail())?;
            Ok(if report.passed() { EXIT_OK } else { EXIT_VERIFY })
        }
        Command::Verify { suite: Suite::Default, config: None } => {
            let report = run_default_suite();
            for c in &report.criteria {
                writeln!(out, "{c}")?;
                write!(out, "{}", c.detail())?;
            }
            let n = report.criteria.iter().filter(|c| c.passed()).count();
            writeln!(out, "{n}/{} passed in {:.2} s", report.criteria.len(), report.elapsed.as_secs_f64())?;
            Ok(if report.passed() { EXIT_OK } else { EXIT_VERIFY })
        }
        Command::Sequence {
            action: SequenceAction::Dump { kind, n, t, tau },
        } => {
            let kind = SequenceKind::parse(&kind)
                .filter(|k| *k != SequenceKind::Custom)
                .with_context(|| format!("unknown sequence `{kind}`"))?;
            let seq = build(kind, n, t, tau)?;
            writeln!(out, "# gwsense-sequence v1 kind={kind} N={} T={} tau={}", seq.order, t, tau)?;
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["l", "t_a", "t_b", "lambda_omega", "lambda_k"])?;
            for p in &seq.pulses {
                w.write_record([
                    p.index.to_string(),
                    format!("{:.16e}", p.t_a),
                    format!("{:.16e}", p.t_b),
                    p.lambda_omega.to_string(),
                    p.lambda_k.to_string(),
                ])?;
            }
            w.flush()?;
            Ok(EXIT_OK)
        }
    }
}

fn simulate(spec: &config::RunSpec, out: &mut dyn Write) -> anyhow::Result<i32> {
    let s = &spec.scenario;
    writeln!(out, "sensor = {}", s.sensor)?;
    writeln!(out, "sequence = {}", s.sequence)?;
    writeln!(out, "N = {}", s.order)?;
    writeln!(out, "h_plus = {:.16e}", s.h_plus)?;
    writeln!(out, "phase0 = {:.16e}", s.phase0)?;
    writeln!(out, "k_g_L = {:.16e}", s.k_g_l)?;
    writeln!(out, "omega_g_T = {:.16e}", s.omega_g_t)?;
    for c in &spec.diagnostics.checks {
        writeln!(out, "check {} = {:.6e} ({:?}) {}", c.name, c.value, c.status, c.message)?;
    }
    for w in &spec.warnings {
        writeln!(out, "warning: {w}")?;
    }
    let setup = s.setup()?.with_options(spec.engine);
    let p = differential_phase(&setup)?;
    for (name, v) in [
        ("phi_omega", p.phi_omega),
        ("phi_k_static", p.phi_k_static),
        ("phi_k_wave", p.phi_k_wave),
        ("phi_G", p.phi_g),
        ("phi_omega_G", p.phi_omega_g),
        ("phi_k_G", p.phi_k_g),
        ("phi_dm_G", p.phi_dm_g),
        ("phi_trap", p.phi_trap),
        ("total", p.total()),
        ("gw_total", p.gw_total()),
    ] {
        writeln!(out, "{name} = {v:.16e}")?;
    }
    match sweep::evaluate(s, spec) {
        Ok(v) => {
            writeln!(out, "phi_s({}) = {:.16e}", spec.components[0].name(), v.phi_s)?;
            if let Some(c) = v.catalog {
                writeln!(out, "catalog = {:.16e}", c.value)?;
                writeln!(out, "abs_residual = {:.16e}", c.abs_residual)?;
                writeln!(out, "rel_residual = {:.16e}", c.rel_residual)?;
                writeln!(out, "phi_s_catalog = {:.16e}", c.phi_s)?;
            }
        }
        Err(e) => writeln!(out, "phi_s error: {e}")?,
    }
    Ok(EXIT_OK)
}
