//! Secrecy-rate evaluation and closed-form Max-SR power allocation for
//! artificial-noise-aided directional modulation over a uniform linear array.
//!
//! The pipeline is
//! [`Scenario`] → [`steering_vector`] → [`nsp_design`] (or any other
//! [`BeamformingDesign`]) → [`link_gains`] → [`ratio_coefficients`] →
//! [`solve_general`]. [`solve_nsp`] runs the same pipeline with the
//! null-space-projection reductions, and [`grid_oracle`] is a brute-force
//! maximiser for cross-checking.

pub mod beamforming;
pub mod channel;
pub mod error;
pub mod experiments;
pub mod optimizer;
pub mod secrecy;
pub mod verification;

pub use beamforming::{nsp_design, validate_design, BeamformingDesign, DesignCheck, DesignReport};
pub use channel::{
    dbm_to_watts, path_loss_gain, steering_vector, ChannelVector, PathLossGain, Scenario,
    ScenarioConfig,
};
pub use error::{Error, Result};
pub use experiments::{
    apply_snr, sweep_beta_star_vs_snr, sweep_sr_vs_beta, sweep_sr_vs_n, write_records,
    OutputFormat, SweepRecord, SweepSpec,
};
pub use optimizer::{
    grid_oracle, solve_general, solve_nsp, stationary_points, Candidate, CaseLabel, PaSolution,
    StationaryPoint,
};
pub use secrecy::{
    derivative_numerator, link_gains, phi, rates, ratio_coefficients, LinkGains, RateReport,
    RatioCoefficients,
};
