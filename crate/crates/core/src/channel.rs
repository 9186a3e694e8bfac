//! Uniform linear array geometry and free-space path loss.
//!
//! A [`Scenario`] collects everything that defines the Alice/Bob/Eve link
//! budget. Steering vectors follow the centred phase convention
//! `Ψ_θ(n) = −(n − (N+1)/2)·(d/λ)·cos θ` with 1-based antenna index, so the
//! phase profile is antisymmetric about the array centre.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use ndarray::Array1;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Full physical configuration of the wiretap link. Powers are linear watts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub n_antennas: usize,
    pub spacing_over_wavelength: f64,
    pub theta_bob_deg: f64,
    pub theta_eve_deg: f64,
    pub total_power: f64,
    pub dist_bob: f64,
    pub dist_eve: f64,
    pub path_loss_exponent: f64,
    pub ref_attenuation: f64,
    pub noise_power: f64,
}

impl Default for Scenario {
    /// Half-wavelength array, Bob at 30°, Eve at 45°, both 500 m away,
    /// 70 dBm transmit power, square-law path loss and a noise floor 30 dB
    /// below Bob's received power.
    fn default() -> Self {
        Scenario {
            n_antennas: 16,
            spacing_over_wavelength: 0.5,
            theta_bob_deg: 30.0,
            theta_eve_deg: 45.0,
            total_power: dbm_to_watts(70.0),
            dist_bob: 500.0,
            dist_eve: 500.0,
            path_loss_exponent: 2.0,
            ref_attenuation: 1.0,
            noise_power: 4e-5,
        }
    }
}

impl Scenario {
    /// Checks every field invariant.
    pub fn validate(&self) -> Result<()> {
        if self.n_antennas < 2 {
            return Err(Error::config(
                "n_antennas",
                format!("must be at least 2, got {}", self.n_antennas),
            ));
        }
        check_angle("theta_bob_deg", self.theta_bob_deg)?;
        check_angle("theta_eve_deg", self.theta_eve_deg)?;
        check_positive("spacing_over_wavelength", self.spacing_over_wavelength)?;
        check_positive("total_power", self.total_power)?;
        check_positive("dist_bob", self.dist_bob)?;
        check_positive("dist_eve", self.dist_eve)?;
        check_positive("path_loss_exponent", self.path_loss_exponent)?;
        check_positive("ref_attenuation", self.ref_attenuation)?;
        check_positive("noise_power", self.noise_power)?;
        Ok(())
    }

    pub fn with_antennas(mut self, n_antennas: usize) -> Self {
        self.n_antennas = n_antennas;
        self
    }

    pub fn gain_bob(&self) -> Result<PathLossGain> {
        path_loss_gain(self.dist_bob, self.path_loss_exponent, self.ref_attenuation)
    }

    pub fn gain_eve(&self) -> Result<PathLossGain> {
        path_loss_gain(self.dist_eve, self.path_loss_exponent, self.ref_attenuation)
    }

    pub fn channel_bob(&self) -> Result<ChannelVector> {
        steering_vector(
            self.theta_bob_deg,
            self.n_antennas,
            self.spacing_over_wavelength,
        )
    }

    pub fn channel_eve(&self) -> Result<ChannelVector> {
        steering_vector(
            self.theta_eve_deg,
            self.n_antennas,
            self.spacing_over_wavelength,
        )
    }

    /// Received signal-to-noise ratio at Bob, `g_ab·P_s/σ²`, in dB.
    pub fn snr_db(&self) -> Result<f64> {
        let g = self.gain_bob()?.value();
        Ok(10.0 * (g * self.total_power / self.noise_power).log10())
    }

    /// Loads a scenario from a TOML file. Missing keys take the values of
    /// [`Scenario::default`].
    pub fn from_toml_file(path: impl AsRef<Path>) -> Result<Self> {
        ScenarioConfig::from_toml_file(path)?.apply(Scenario::default())
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        ScenarioConfig::from_toml_str(text)?.apply(Scenario::default())
    }
}

/// Sparse scenario description as read from a configuration file.
///
/// Powers may be given either in watts (`total_power`, `noise_power`) or in
/// dBm (`total_power_dbm`, `noise_power_dbm`), but not both.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub n_antennas: Option<usize>,
    pub spacing_over_wavelength: Option<f64>,
    pub theta_bob_deg: Option<f64>,
    pub theta_eve_deg: Option<f64>,
    pub total_power: Option<f64>,
    pub total_power_dbm: Option<f64>,
    pub dist_bob: Option<f64>,
    pub dist_eve: Option<f64>,
    pub path_loss_exponent: Option<f64>,
    pub ref_attenuation: Option<f64>,
    pub noise_power: Option<f64>,
    pub noise_power_dbm: Option<f64>,
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn from_toml_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::ReadConfig {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    /// Overlays the populated keys onto `base` and validates the result.
    pub fn apply(&self, base: Scenario) -> Result<Scenario> {
        let mut s = base;
        let total_power = pick_power("total_power", self.total_power, self.total_power_dbm)?;
        let noise_power = pick_power("noise_power", self.noise_power, self.noise_power_dbm)?;
        if let Some(v) = self.n_antennas {
            s.n_antennas = v;
        }
        if let Some(v) = self.spacing_over_wavelength {
            s.spacing_over_wavelength = v;
        }
        if let Some(v) = self.theta_bob_deg {
            s.theta_bob_deg = v;
        }
        if let Some(v) = self.theta_eve_deg {
            s.theta_eve_deg = v;
        }
        if let Some(v) = total_power {
            s.total_power = v;
        }
        if let Some(v) = self.dist_bob {
            s.dist_bob = v;
        }
        if let Some(v) = self.dist_eve {
            s.dist_eve = v;
        }
        if let Some(v) = self.path_loss_exponent {
            s.path_loss_exponent = v;
        }
        if let Some(v) = self.ref_attenuation {
            s.ref_attenuation = v;
        }
        if let Some(v) = noise_power {
            s.noise_power = v;
        }
        s.validate()?;
        Ok(s)
    }

    /// True when the configuration pins the noise floor explicitly.
    pub fn sets_noise_power(&self) -> bool {
        self.noise_power.is_some() || self.noise_power_dbm.is_some()
    }
}

fn pick_power(field: &'static str, watts: Option<f64>, dbm: Option<f64>) -> Result<Option<f64>> {
    match (watts, dbm) {
        (Some(_), Some(_)) => Err(Error::config(field, "given both in watts and in dBm")),
        (Some(w), None) => Ok(Some(w)),
        (None, Some(d)) => Ok(Some(dbm_to_watts(d))),
        (None, None) => Ok(None),
    }
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// Length-N array response with unit-modulus entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelVector(Array1<Complex64>);

impl ChannelVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_array(&self) -> &Array1<Complex64> {
        &self.0
    }

    pub fn into_array(self) -> Array1<Complex64> {
        self.0
    }

    /// Multiplies every entry by `e^{jψ}`.
    pub fn rotated(&self, psi: f64) -> ChannelVector {
        let phase = Complex64::from_polar(1.0, psi);
        ChannelVector(self.0.mapv(|h| h * phase))
    }
}

/// Linear path-loss gain `α / d^c`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct PathLossGain(f64);

impl PathLossGain {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Far-field steering vector of an N-element uniform linear array towards
/// `theta_deg` (measured from the array axis).
pub fn steering_vector(
    theta_deg: f64,
    n_antennas: usize,
    spacing_over_wavelength: f64,
) -> Result<ChannelVector> {
    if n_antennas == 0 {
        return Err(Error::config("n_antennas", "must be positive"));
    }
    check_angle("theta_deg", theta_deg)?;
    check_positive("spacing_over_wavelength", spacing_over_wavelength)?;

    let cos_theta = theta_deg.to_radians().cos();
    let centre = (n_antennas as f64 + 1.0) / 2.0;
    let entries = (1..=n_antennas)
        .map(|n| {
            let psi = -(n as f64 - centre) * spacing_over_wavelength * cos_theta;
            Complex64::from_polar(1.0, 2.0 * PI * psi)
        })
        .collect();
    Ok(ChannelVector(entries))
}

pub fn path_loss_gain(distance: f64, exponent: f64, ref_attenuation: f64) -> Result<PathLossGain> {
    check_positive("distance", distance)?;
    check_positive("exponent", exponent)?;
    check_positive("ref_attenuation", ref_attenuation)?;
    Ok(PathLossGain(ref_attenuation / distance.powf(exponent)))
}

fn check_positive(field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::config(
            field,
            format!("must be finite and positive, got {value}"),
        ))
    }
}

fn check_angle(field: &'static str, deg: f64) -> Result<()> {
    if deg > 0.0 && deg < 180.0 {
        Ok(())
    } else {
        Err(Error::config(
            field,
            format!("must lie in (0, 180) degrees, got {deg}"),
        ))
    }
}
