mod args;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use dmpa_core::experiments::{self, default_snr_grid, sweep_sr_at_betas};
use dmpa_core::verification::{self, BETA_TOLERANCE, SR_TOLERANCE};
use dmpa_core::{
    apply_snr, link_gains, nsp_design, rates, ratio_coefficients, solve_nsp, SweepRecord, SweepSpec,
};
use serde_json::json;

use crate::args::{parse_beta, parse_f64_list, BetaSpec, Cli, Command, OptimizeArgs, SweepArgs};

/// Exit status for bad flags or configuration.
const EXIT_USAGE: u8 = 2;
/// Exit status for runtime failures, including a failed verification.
const EXIT_FAILURE: u8 = 1;

enum Failure {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(err: anyhow::Error) -> Self {
        let usage = err.chain().any(|cause| {
            matches!(
                cause.downcast_ref::<dmpa_core::Error>(),
                Some(
                    dmpa_core::Error::Config { .. }
                        | dmpa_core::Error::ParseConfig(_)
                        | dmpa_core::Error::ReadConfig { .. }
                        | dmpa_core::Error::BetaOutOfRange { .. }
                        | dmpa_core::Error::DegenerateNullSpace { .. }
                )
            )
        });
        if usage {
            Failure::Usage(err)
        } else {
            Failure::Runtime(err)
        }
    }
}

impl From<dmpa_core::Error> for Failure {
    fn from(err: dmpa_core::Error) -> Self {
        anyhow::Error::from(err).into()
    }
}

impl From<serde_json::Error> for Failure {
    fn from(err: serde_json::Error) -> Self {
        Failure::Runtime(err.into())
    }
}

impl From<io::Error> for Failure {
    fn from(err: io::Error) -> Self {
        Failure::Runtime(err.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Optimize(a) => optimize(a),
        Command::SweepBeta(a) => sweep(a, SweepKind::Beta),
        Command::SweepN(a) => sweep(a, SweepKind::Antennas),
        Command::SweepSnr(a) => sweep(a, SweepKind::Snr),
        Command::Verify(a) => verify(a.runs, a.seed, a.grid_points),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(err)) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Runtime(err)) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}

fn open_output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn optimize(a: OptimizeArgs) -> Result<ExitCode, Failure> {
    let resolved = a.scenario.resolve()?;
    let mut scenario = resolved.scenario;
    if let Some(n) = a.n {
        scenario.n_antennas = n;
    }
    if let Some(snr) = a.snr_db {
        scenario = apply_snr(&scenario, snr)?;
    }
    scenario.validate()?;

    let solution = solve_nsp(&scenario)?;
    let needs_gains = a.dump_coefficients || a.beta.is_some();
    let value = if needs_gains {
        let design = nsp_design(&scenario.channel_bob()?)?;
        let gains = link_gains(&scenario, &design)?;
        let mut obj = json!({
            "scenario": scenario,
            "snr_db": scenario.snr_db()?,
            "solution": solution,
        });
        if a.dump_coefficients {
            obj["link_gains"] = serde_json::to_value(gains)?;
            obj["coefficients"] = serde_json::to_value(ratio_coefficients(&scenario, &gains)?)?;
            obj["rates_at_optimum"] =
                serde_json::to_value(rates(&scenario, &gains, solution.beta_star)?)?;
        }
        if let Some(beta) = a.beta {
            obj["beta"] = json!(beta);
            obj["rates_at_beta"] = serde_json::to_value(rates(&scenario, &gains, beta)?)?;
        }
        obj
    } else {
        serde_json::to_value(&solution)?
    };

    let mut out = open_output(a.output.as_deref())?;
    serde_json::to_writer_pretty(&mut out, &value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Clone, Copy)]
enum SweepKind {
    Beta,
    Antennas,
    Snr,
}

fn sweep(a: SweepArgs, kind: SweepKind) -> Result<ExitCode, Failure> {
    let resolved = a.scenario.resolve()?;
    let base = resolved.scenario;

    let antenna_counts = if !a.n.is_empty() {
        a.n.clone()
    } else if resolved.antennas_from_config {
        vec![base.n_antennas]
    } else {
        experiments::DEFAULT_ANTENNA_COUNTS.to_vec()
    };
    let snr_db = match &a.snr_db {
        Some(text) => parse_f64_list(text).map_err(Failure::Usage)?,
        None if resolved.noise_from_config => vec![base.snr_db()?],
        None => match kind {
            SweepKind::Beta => vec![0.0, 15.0, 30.0],
            SweepKind::Antennas => vec![30.0],
            SweepKind::Snr => default_snr_grid(),
        },
    };
    let beta = match &a.beta {
        Some(text) => Some(parse_beta(text).map_err(Failure::Usage)?),
        None => None,
    };

    let mut spec = SweepSpec::new(base);
    spec.antenna_counts = antenna_counts;
    spec.snr_db = snr_db;

    let records: Vec<SweepRecord> = match kind {
        SweepKind::Beta => match beta.unwrap_or(BetaSpec::Grid(experiments::DEFAULT_BETA_POINTS)) {
            BetaSpec::Grid(points) => {
                spec.beta_grid = points;
                experiments::sweep_sr_vs_beta(&spec)?
            }
            BetaSpec::Values(values) => sweep_sr_at_betas(&spec, &values)?,
        },
        SweepKind::Antennas => {
            let values = match beta.unwrap_or(BetaSpec::Values(vec![0.1, 0.5, 0.9])) {
                BetaSpec::Grid(points) => experiments::beta_grid(points)?,
                BetaSpec::Values(values) => values,
            };
            experiments::sweep_sr_vs_n(&spec, &values)?
        }
        SweepKind::Snr => {
            if beta.is_some() {
                return Err(Failure::Usage(anyhow::anyhow!(
                    "sweep-snr reports the optimal β; --beta does not apply"
                )));
            }
            experiments::sweep_beta_star_vs_snr(&spec)?
        }
    };

    let mut out = open_output(a.output.as_deref())?;
    dmpa_core::write_records(&records, a.format.into(), &mut out)?;
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn verify(runs: usize, seed: u64, grid_points: usize) -> Result<ExitCode, Failure> {
    if runs == 0 {
        return Err(Failure::Usage(anyhow::anyhow!("--runs must be positive")));
    }
    let report = verification::verify(runs, seed, grid_points)?;
    println!("runs: {}", report.runs);
    println!("seed: {}", report.seed);
    println!("grid points: {}", report.grid_points);
    println!(
        "max |beta_analytic - beta_oracle|: {:.3e} (tolerance {:.0e})",
        report.max_beta_deviation, BETA_TOLERANCE
    );
    println!(
        "max |SR_analytic - SR_oracle|: {:.3e} (tolerance {:.0e})",
        report.max_sr_deviation, SR_TOLERANCE
    );
    for d in report.failures.iter().take(10) {
        println!(
            "  mismatch #{}: beta {} vs {}, SR {} vs {}",
            d.index, d.beta_analytic, d.beta_oracle, d.sr_analytic, d.sr_oracle
        );
    }
    if report.passed() {
        println!("PASS");
        Ok(ExitCode::SUCCESS)
    } else {
        println!(
            "FAIL: {} of {} runs disagree",
            report.failures.len(),
            report.runs
        );
        Ok(ExitCode::from(EXIT_FAILURE))
    }
}
