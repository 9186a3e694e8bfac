use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dmpa_core::{OutputFormat, Scenario, ScenarioConfig};

#[derive(Debug, Parser)]
#[command(
    name = "dmpa",
    version,
    about = "Secrecy-rate maximising power allocation for AN-aided directional modulation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one scenario and print the optimum as JSON.
    Optimize(OptimizeArgs),
    /// Secrecy rate against the power split β.
    SweepBeta(SweepArgs),
    /// Secrecy rate at fixed β against the optimum, per array size.
    SweepN(SweepArgs),
    /// Optimal β against SNR.
    SweepSnr(SweepArgs),
    /// Cross-check the closed-form solver against the grid oracle.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    /// TOML scenario file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub theta_b_deg: Option<f64>,
    #[arg(long)]
    pub theta_e_deg: Option<f64>,
    /// Alice–Bob distance in metres.
    #[arg(long)]
    pub dist_bob: Option<f64>,
    /// Alice–Eve distance in metres.
    #[arg(long)]
    pub dist_eve: Option<f64>,
    /// Total transmit power in dBm [default: 70].
    #[arg(long, allow_hyphen_values = true)]
    pub ps_dbm: Option<f64>,
    /// Attenuation at the reference distance [default: 1].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Path-loss exponent [default: 2].
    #[arg(long)]
    pub path_loss_exp: Option<f64>,
    /// Element spacing in wavelengths [default: 0.5].
    #[arg(long)]
    pub spacing: Option<f64>,
}

/// Resolved base scenario and what the user pinned explicitly.
pub struct Resolved {
    pub scenario: Scenario,
    pub antennas_from_config: bool,
    pub noise_from_config: bool,
}

impl ScenarioArgs {
    pub fn resolve(&self) -> anyhow::Result<Resolved> {
        let file = match &self.config {
            Some(path) => ScenarioConfig::from_toml_file(path)?,
            None => ScenarioConfig::default(),
        };
        let flags = ScenarioConfig {
            theta_bob_deg: self.theta_b_deg,
            theta_eve_deg: self.theta_e_deg,
            dist_bob: self.dist_bob,
            dist_eve: self.dist_eve,
            total_power_dbm: self.ps_dbm,
            ref_attenuation: self.alpha,
            path_loss_exponent: self.path_loss_exp,
            spacing_over_wavelength: self.spacing,
            ..ScenarioConfig::default()
        };
        // A config file may give P_s in watts; a --ps-dbm flag replaces it.
        let mut file_for_merge = file.clone();
        if self.ps_dbm.is_some() {
            file_for_merge.total_power = None;
            file_for_merge.total_power_dbm = None;
        }
        let scenario = flags.apply(file_for_merge.apply(Scenario::default())?)?;
        Ok(Resolved {
            scenario,
            antennas_from_config: file.n_antennas.is_some(),
            noise_from_config: file.sets_noise_power(),
        })
    }
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    /// Number of antennas [default: 16].
    #[arg(long)]
    pub n: Option<usize>,
    /// SNR g_ab·P_s/σ² in dB; sets the noise floor.
    #[arg(long, allow_hyphen_values = true)]
    pub snr_db: Option<f64>,
    /// Also report the rates at this power split.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Include the ratio coefficients and link gains in the output.
    #[arg(long)]
    pub dump_coefficients: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    /// Antenna counts, comma separated [default: 4,16,64].
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    /// SNR values in dB: a comma list and/or start:stop:step ranges.
    #[arg(long, allow_hyphen_values = true)]
    pub snr_db: Option<String>,
    /// β values (comma list) or `grid:<points>` for a uniform grid on [0, 1].
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: FormatArg,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 1000)]
    pub runs: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Grid size of the brute-force oracle.
    #[arg(long, default_value_t = dmpa_core::optimizer::DEFAULT_GRID_POINTS)]
    pub grid_points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BetaSpec {
    Grid(usize),
    Values(Vec<f64>),
}

pub fn parse_beta(text: &str) -> anyhow::Result<BetaSpec> {
    if let Some(points) = text.strip_prefix("grid:") {
        let n: usize = points.trim().parse().context("grid size")?;
        if n < 2 {
            bail!("β grid needs at least 2 points");
        }
        return Ok(BetaSpec::Grid(n));
    }
    let values = parse_f64_list(text)?;
    if let Some(bad) = values.iter().find(|b| !(0.0..=1.0).contains(*b)) {
        bail!("β = {bad} is outside [0, 1]");
    }
    Ok(BetaSpec::Values(values))
}

/// Comma-separated numbers, where any item may be an inclusive
/// `start:stop:step` range.
pub fn parse_f64_list(text: &str) -> anyhow::Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [v] => out.push(v.parse().with_context(|| format!("invalid number `{v}`"))?),
            [start, stop, step] => {
                let start: f64 = start.parse().context("range start")?;
                let stop: f64 = stop.parse().context("range stop")?;
                let step: f64 = step.parse().context("range step")?;
                if step.is_nan() || step <= 0.0 || stop < start {
                    bail!("range `{item}` must have step > 0 and stop >= start");
                }
                let count = ((stop - start) / step + 1e-9).floor() as usize;
                out.extend((0..=count).map(|k| start + k as f64 * step));
            }
            _ => bail!("cannot parse `{item}`"),
        }
    }
    if out.is_empty() {
        bail!("empty list");
    }
    if let Some(bad) = out.iter().find(|v| !v.is_finite()) {
        bail!("non-finite value {bad}");
    }
    Ok(out)
}
