//! Parameter sweeps over power split, array size and SNR.
//!
//! SNR is always `g_ab·P_s/σ²`, Bob's received signal power over the noise
//! floor. Fixing it by adjusting `σ²` makes every sweep independent of the
//! reference attenuation `α`, since `φ` depends on powers only through
//! `g·P_s/σ²`.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::beamforming::nsp_design;
use crate::channel::Scenario;
use crate::error::{Error, Result};
use crate::optimizer::{solve_nsp, CaseLabel};
use crate::secrecy::{link_gains, rates, LinkGains};

pub const DEFAULT_BETA_POINTS: usize = 201;
pub const DEFAULT_ANTENNA_COUNTS: [usize; 3] = [4, 16, 64];

/// −10 … 40 dB in 1 dB steps.
pub fn default_snr_grid() -> Vec<f64> {
    (-10..=40).map(f64::from).collect()
}

/// Returns a copy of `scenario` whose noise power puts Bob's SNR at `snr_db`.
pub fn apply_snr(scenario: &Scenario, snr_db: f64) -> Result<Scenario> {
    if !snr_db.is_finite() {
        return Err(Error::config(
            "snr_db",
            format!("must be finite, got {snr_db}"),
        ));
    }
    let g = scenario.gain_bob()?.value();
    Ok(Scenario {
        noise_power: g * scenario.total_power / 10f64.powf(snr_db / 10.0),
        ..scenario.clone()
    })
}

/// `n` evenly spaced points on `[0, 1]` including both ends.
pub fn beta_grid(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::config(
            "beta_grid",
            format!("needs at least 2 points, got {n}"),
        ));
    }
    let last = n - 1;
    Ok((0..n)
        .map(|i| {
            if i == last {
                1.0
            } else {
                i as f64 / last as f64
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base_scenario: Scenario,
    pub snr_db: Vec<f64>,
    pub antenna_counts: Vec<usize>,
    pub beta_grid: usize,
}

impl SweepSpec {
    pub fn new(base_scenario: Scenario) -> Self {
        SweepSpec {
            base_scenario,
            snr_db: vec![15.0],
            antenna_counts: DEFAULT_ANTENNA_COUNTS.to_vec(),
            beta_grid: DEFAULT_BETA_POINTS,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.snr_db.is_empty() {
            return Err(Error::config("snr_db", "sweep axis is empty"));
        }
        if self.antenna_counts.is_empty() {
            return Err(Error::config("antenna_counts", "sweep axis is empty"));
        }
        if self.beta_grid < 2 {
            return Err(Error::config("beta_grid", "resolution must be at least 2"));
        }
        Ok(())
    }

    /// Every `(N, SNR)` pair in axis order, N outermost.
    fn points(&self) -> Vec<(usize, f64)> {
        self.antenna_counts
            .iter()
            .flat_map(|&n| self.snr_db.iter().map(move |&snr| (n, snr)))
            .collect()
    }
}

/// One output row. Optimizer columns are empty on plain grid rows and
/// `gain_percent` is only filled by the array-size sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub n_antennas: usize,
    pub snr_db: f64,
    pub beta: f64,
    pub secrecy_rate: f64,
    pub beta_star: Option<f64>,
    pub secrecy_rate_star: Option<f64>,
    pub case_label: Option<CaseLabel>,
    pub gain_percent: Option<f64>,
}

pub const CSV_HEADER: [&str; 8] = [
    "n_antennas",
    "snr_db",
    "beta",
    "secrecy_rate",
    "beta_star",
    "secrecy_rate_star",
    "case_label",
    "gain_percent",
];

/// A scenario at one sweep point with its NSP link gains.
struct Point {
    scenario: Scenario,
    gains: LinkGains,
}

impl Point {
    fn new(base: &Scenario, n: usize, snr_db: f64) -> Result<Self> {
        let scenario = apply_snr(&base.clone().with_antennas(n), snr_db)?;
        scenario.validate()?;
        let design = nsp_design(&scenario.channel_bob()?)?;
        let gains = link_gains(&scenario, &design)?;
        Ok(Point { scenario, gains })
    }

    fn secrecy(&self, beta: f64) -> Result<f64> {
        Ok(rates(&self.scenario, &self.gains, beta)?.secrecy_rate)
    }
}

/// Secrecy rate on a uniform β grid for each `(N, SNR)`, followed by one
/// row carrying the analytic optimum.
pub fn sweep_sr_vs_beta(spec: &SweepSpec) -> Result<Vec<SweepRecord>> {
    spec.validate()?;
    let grid = beta_grid(spec.beta_grid)?;
    sweep_sr_at_betas(spec, &grid)
}

/// Same as [`sweep_sr_vs_beta`] but on caller-chosen β values.
pub fn sweep_sr_at_betas(spec: &SweepSpec, betas: &[f64]) -> Result<Vec<SweepRecord>> {
    spec.validate()?;
    let blocks = spec
        .points()
        .into_par_iter()
        .map(|(n, snr)| {
            let point = Point::new(&spec.base_scenario, n, snr)?;
            let mut rows = betas
                .iter()
                .map(|&beta| {
                    Ok(SweepRecord {
                        n_antennas: n,
                        snr_db: snr,
                        beta,
                        secrecy_rate: point.secrecy(beta)?,
                        beta_star: None,
                        secrecy_rate_star: None,
                        case_label: None,
                        gain_percent: None,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let sol = solve_nsp(&point.scenario)?;
            rows.push(SweepRecord {
                n_antennas: n,
                snr_db: snr,
                beta: sol.beta_star,
                secrecy_rate: sol.secrecy_rate_star,
                beta_star: Some(sol.beta_star),
                secrecy_rate_star: Some(sol.secrecy_rate_star),
                case_label: Some(sol.case_label),
                gain_percent: None,
            });
            Ok(rows)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(blocks.into_iter().flatten().collect())
}

/// Improvement of the optimum over a fixed split, relative to the optimum.
pub fn gain_percent(optimal: f64, fixed: f64) -> f64 {
    if optimal > 0.0 {
        100.0 * (optimal - fixed) / optimal
    } else {
        0.0
    }
}

/// For each `(N, SNR)` and each fixed β: the secrecy rate at β, the optimum,
/// and the optimum's relative gain over β.
pub fn sweep_sr_vs_n(spec: &SweepSpec, fixed_betas: &[f64]) -> Result<Vec<SweepRecord>> {
    spec.validate()?;
    if fixed_betas.is_empty() {
        return Err(Error::config("fixed_betas", "sweep axis is empty"));
    }
    for &beta in fixed_betas {
        crate::secrecy::check_beta(beta)?;
    }
    let blocks = spec
        .points()
        .into_par_iter()
        .map(|(n, snr)| {
            let point = Point::new(&spec.base_scenario, n, snr)?;
            let sol = solve_nsp(&point.scenario)?;
            fixed_betas
                .iter()
                .map(|&beta| {
                    let sr = point.secrecy(beta)?;
                    Ok(SweepRecord {
                        n_antennas: n,
                        snr_db: snr,
                        beta,
                        secrecy_rate: sr,
                        beta_star: Some(sol.beta_star),
                        secrecy_rate_star: Some(sol.secrecy_rate_star),
                        case_label: Some(sol.case_label),
                        gain_percent: Some(gain_percent(sol.secrecy_rate_star, sr)),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(blocks.into_iter().flatten().collect())
}

/// Optimal power split for each `(N, SNR)`.
pub fn sweep_beta_star_vs_snr(spec: &SweepSpec) -> Result<Vec<SweepRecord>> {
    spec.validate()?;
    spec.points()
        .into_par_iter()
        .map(|(n, snr)| {
            let point = Point::new(&spec.base_scenario, n, snr)?;
            let sol = solve_nsp(&point.scenario)?;
            Ok(SweepRecord {
                n_antennas: n,
                snr_db: snr,
                beta: sol.beta_star,
                secrecy_rate: sol.secrecy_rate_star,
                beta_star: Some(sol.beta_star),
                secrecy_rate_star: Some(sol.secrecy_rate_star),
                case_label: Some(sol.case_label),
                gain_percent: None,
            })
        })
        .collect()
}

/// 17 significant digits, enough to round-trip any f64.
fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<W: Write>(records: &[SweepRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    let opt = |x: Option<f64>| x.map(fmt_f64).unwrap_or_default();
    for r in records {
        w.write_record([
            r.n_antennas.to_string(),
            fmt_f64(r.snr_db),
            fmt_f64(r.beta),
            fmt_f64(r.secrecy_rate),
            opt(r.beta_star),
            opt(r.secrecy_rate_star),
            r.case_label
                .map(|c| c.as_str().to_owned())
                .unwrap_or_default(),
            opt(r.gain_percent),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(records: &[SweepRecord], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, records)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn write_records<W: Write>(
    records: &[SweepRecord],
    format: OutputFormat,
    out: W,
) -> Result<()> {
    match format {
        OutputFormat::Csv => write_csv(records, out),
        OutputFormat::Json => write_json(records, out),
    }
}
