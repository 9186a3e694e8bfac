//! Randomised agreement check between the closed-form solver and the grid
//! oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::beamforming::nsp_design;
use crate::channel::Scenario;
use crate::error::Result;
use crate::experiments::apply_snr;
use crate::optimizer::{grid_oracle, solve_general, DEFAULT_GRID_POINTS};
use crate::secrecy::{link_gains, ratio_coefficients, RatioCoefficients};

pub const BETA_TOLERANCE: f64 = 1e-4;
pub const SR_TOLERANCE: f64 = 1e-8;

/// Draws a scenario with `N ∈ [2, 64]`, distinct directions in (5°, 175°),
/// Eve between 250 m and 1 km, and Bob's SNR uniform in [−10, 40] dB.
pub fn random_scenario<R: Rng + ?Sized>(rng: &mut R) -> Result<Scenario> {
    let theta_bob_deg = rng.random_range(5.0..175.0);
    let theta_eve_deg = loop {
        let t: f64 = rng.random_range(5.0..175.0);
        if (t - theta_bob_deg).abs() > 1e-3 {
            break t;
        }
    };
    let base = Scenario {
        n_antennas: rng.random_range(2..=64),
        theta_bob_deg,
        theta_eve_deg,
        dist_eve: rng.random_range(250.0..1000.0),
        ..Scenario::default()
    };
    apply_snr(&base, rng.random_range(-10.0..40.0))
}

/// `count` scenarios from a seeded stream; same seed, same scenarios.
pub fn random_scenarios(seed: u64, count: usize) -> Result<Vec<Scenario>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_scenario(&mut rng)).collect()
}

pub fn nsp_ratio_coefficients(scenario: &Scenario) -> Result<RatioCoefficients> {
    let design = nsp_design(&scenario.channel_bob()?)?;
    ratio_coefficients(scenario, &link_gains(scenario, &design)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct Deviation {
    pub index: usize,
    pub beta_analytic: f64,
    pub beta_oracle: f64,
    pub sr_analytic: f64,
    pub sr_oracle: f64,
}

impl Deviation {
    pub fn beta(&self) -> f64 {
        (self.beta_analytic - self.beta_oracle).abs()
    }

    pub fn sr(&self) -> f64 {
        (self.sr_analytic - self.sr_oracle).abs()
    }

    pub fn within_tolerance(&self) -> bool {
        self.beta() <= BETA_TOLERANCE && self.sr() <= SR_TOLERANCE
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub runs: usize,
    pub seed: u64,
    pub grid_points: usize,
    pub max_beta_deviation: f64,
    pub max_sr_deviation: f64,
    pub failures: Vec<Deviation>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn compare(index: usize, coeffs: &RatioCoefficients, grid_points: usize) -> Result<Deviation> {
    let analytic = solve_general(coeffs)?;
    let oracle = grid_oracle(coeffs, grid_points)?;
    Ok(Deviation {
        index,
        beta_analytic: analytic.beta_star,
        beta_oracle: oracle.beta_star,
        sr_analytic: analytic.secrecy_rate_star,
        sr_oracle: oracle.secrecy_rate_star,
    })
}

/// Runs `runs` random NSP scenarios through both solvers.
pub fn verify(runs: usize, seed: u64, grid_points: usize) -> Result<VerifyReport> {
    let scenarios = random_scenarios(seed, runs)?;
    let deviations = scenarios
        .par_iter()
        .enumerate()
        .map(|(i, s)| compare(i, &nsp_ratio_coefficients(s)?, grid_points))
        .collect::<Result<Vec<_>>>()?;

    let max_beta_deviation = deviations.iter().map(Deviation::beta).fold(0.0, f64::max);
    let max_sr_deviation = deviations.iter().map(Deviation::sr).fold(0.0, f64::max);
    Ok(VerifyReport {
        runs,
        seed,
        grid_points,
        max_beta_deviation,
        max_sr_deviation,
        failures: deviations
            .into_iter()
            .filter(|d| !d.within_tolerance())
            .collect(),
    })
}

pub fn verify_default(runs: usize, seed: u64) -> Result<VerifyReport> {
    verify(runs, seed, DEFAULT_GRID_POINTS)
}
