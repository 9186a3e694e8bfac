//! Achievable rates, secrecy rate and the ratio-of-quadratics form of the
//! secrecy objective.
//!
//! With `β` the fraction of power spent on the confidential stream, the
//! secrecy objective is `log₂ φ(β)` where
//!
//! ```text
//! φ(β) = a(β) / b(β),   a(β) = Iβ² + Jβ + K,   b(β) = Lβ² + Mβ + K
//! ```
//!
//! and the five coefficients depend only on the link gains, the path loss,
//! the transmit power and the noise floor.

use ndarray::Array1;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::beamforming::BeamformingDesign;
use crate::channel::{ChannelVector, Scenario};
use crate::error::{Error, Result};

/// Squared channel projections of the beam vector and of the noise projector
/// for both receivers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkGains {
    /// `|h_b^H v_b|²`
    pub sig_bob: f64,
    /// `‖h_b^H P_AN‖²`
    pub an_bob: f64,
    /// `|h_e^H v_b|²`
    pub sig_eve: f64,
    /// `‖h_e^H P_AN‖²`
    pub an_eve: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioCoefficients {
    pub i: f64,
    pub j: f64,
    pub k: f64,
    pub l: f64,
    pub m: f64,
}

impl RatioCoefficients {
    /// `a(β) = Iβ² + Jβ + K`
    pub fn numerator(&self, beta: f64) -> f64 {
        (self.i * beta + self.j) * beta + self.k
    }

    /// `b(β) = Lβ² + Mβ + K`
    pub fn denominator(&self, beta: f64) -> f64 {
        (self.l * beta + self.m) * beta + self.k
    }

    /// Largest coefficient magnitude; the natural scale for tolerances.
    pub fn scale(&self) -> f64 {
        [self.i, self.j, self.k, self.l, self.m]
            .into_iter()
            .map(f64::abs)
            .fold(0.0, f64::max)
    }

    /// Divides all five coefficients by [`scale`](Self::scale). `φ` is
    /// unchanged.
    pub fn normalized(&self) -> RatioCoefficients {
        let s = self.scale();
        if s == 0.0 {
            return *self;
        }
        RatioCoefficients {
            i: self.i / s,
            j: self.j / s,
            k: self.k / s,
            l: self.l / s,
            m: self.m / s,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub rate_bob: f64,
    pub rate_eve: f64,
    pub secrecy_rate: f64,
}

impl RateReport {
    /// `rate_bob − rate_eve` before clamping at zero.
    pub fn advantage(&self) -> f64 {
        self.rate_bob - self.rate_eve
    }
}

fn inner(h: &ChannelVector, v: &Array1<Complex64>) -> Complex64 {
    h.as_array().iter().zip(v).map(|(h, v)| h.conj() * v).sum()
}

fn projected_energy(h: &ChannelVector, design: &BeamformingDesign) -> f64 {
    let hc = h.as_array().mapv(|e| e.conj());
    hc.dot(&design.an_projection)
        .iter()
        .map(|e| e.norm_sqr())
        .sum()
}

pub fn link_gains(scenario: &Scenario, design: &BeamformingDesign) -> Result<LinkGains> {
    design.check_dims()?;
    if design.n_antennas() != scenario.n_antennas {
        return Err(Error::Dimension {
            what: "design size",
            expected: scenario.n_antennas,
            found: design.n_antennas(),
        });
    }
    let hb = scenario.channel_bob()?;
    let he = scenario.channel_eve()?;
    Ok(LinkGains {
        sig_bob: inner(&hb, &design.beam_vector).norm_sqr(),
        an_bob: projected_energy(&hb, design),
        sig_eve: inner(&he, &design.beam_vector).norm_sqr(),
        an_eve: projected_energy(&he, design),
    })
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&beta) {
        Ok(())
    } else {
        Err(Error::BetaOutOfRange { beta })
    }
}

/// Rates of both links and the clamped secrecy rate at power split `beta`.
pub fn rates(scenario: &Scenario, gains: &LinkGains, beta: f64) -> Result<RateReport> {
    check_beta(beta)?;
    let pb = scenario.gain_bob()?.value() * scenario.total_power;
    let pe = scenario.gain_eve()?.value() * scenario.total_power;
    let noise = scenario.noise_power;

    let sinr_bob = pb * beta * gains.sig_bob / (pb * (1.0 - beta) * gains.an_bob + noise);
    let sinr_eve = pe * beta * gains.sig_eve / (pe * (1.0 - beta) * gains.an_eve + noise);
    let rate_bob = sinr_bob.ln_1p() / std::f64::consts::LN_2;
    let rate_eve = sinr_eve.ln_1p() / std::f64::consts::LN_2;
    Ok(RateReport {
        rate_bob,
        rate_eve,
        secrecy_rate: (rate_bob - rate_eve).max(0.0),
    })
}

pub fn ratio_coefficients(scenario: &Scenario, gains: &LinkGains) -> Result<RatioCoefficients> {
    let pb = scenario.gain_bob()?.value() * scenario.total_power;
    let pe = scenario.gain_eve()?.value() * scenario.total_power;
    let noise = scenario.noise_power;
    let g = gains;
    if [g.sig_bob, g.an_bob, g.sig_eve, g.an_eve]
        .iter()
        .any(|x| !(x.is_finite() && *x >= 0.0))
    {
        return Err(Error::config(
            "link_gains",
            "must be finite and non-negative",
        ));
    }

    // interference-plus-noise at full AN power
    let floor_bob = pb * g.an_bob + noise;
    let floor_eve = pe * g.an_eve + noise;

    Ok(RatioCoefficients {
        i: pb * pe * g.an_eve * (g.an_bob - g.sig_bob),
        j: pb * (g.sig_bob - g.an_bob) * floor_eve - pe * g.an_eve * floor_bob,
        k: floor_bob * floor_eve,
        l: pb * pe * g.an_bob * (g.an_eve - g.sig_eve),
        m: pe * (g.sig_eve - g.an_eve) * floor_bob - pb * g.an_bob * floor_eve,
    })
}

/// `φ(β) = a(β)/b(β)`.
pub fn phi(coeffs: &RatioCoefficients, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let b = coeffs.denominator(beta);
    if b.is_nan() || b <= 0.0 {
        return Err(Error::NonPhysical { beta, value: b });
    }
    Ok(coeffs.numerator(beta) / b)
}

/// Secrecy rate `max(0, log₂ φ)` for a given ratio value.
pub fn secrecy_from_phi(phi: f64) -> f64 {
    if phi > 1.0 {
        phi.log2()
    } else {
        0.0
    }
}

/// Numerator of `dφ/dβ`: `(IM − JL)β² + 2K(I − L)β + K(J − M)`.
/// The denominator `b(β)²` is positive, so this carries the sign of the slope.
pub fn derivative_numerator(coeffs: &RatioCoefficients, beta: f64) -> f64 {
    let c = coeffs;
    let quad = c.i * c.m - c.j * c.l;
    let lin = 2.0 * c.k * (c.i - c.l);
    let cst = c.k * (c.j - c.m);
    (quad * beta + lin) * beta + cst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beamforming::nsp_design;

    fn nsp_gains(s: &Scenario) -> LinkGains {
        let d = nsp_design(&s.channel_bob().unwrap()).unwrap();
        link_gains(s, &d).unwrap()
    }

    #[test]
    fn nsp_leaks_no_noise_to_bob() {
        for n in [2, 4, 16, 64] {
            let s = Scenario::default().with_antennas(n);
            let g = nsp_gains(&s);
            assert!(g.an_bob.abs() <= 1e-12, "{g:?}");
            assert!((g.sig_bob - n as f64).abs() <= 1e-9);
        }
    }

    #[test]
    fn identical_directions_give_identical_gains() {
        let s = Scenario {
            theta_eve_deg: 30.0,
            ..Scenario::default()
        };
        let g = nsp_gains(&s);
        assert_eq!(g.sig_bob, g.sig_eve);
        assert_eq!(g.an_bob, g.an_eve);
    }

    #[test]
    fn no_confidential_power_no_rate() {
        let s = Scenario::default();
        let r = rates(&s, &nsp_gains(&s), 0.0).unwrap();
        assert_eq!(r.rate_bob, 0.0);
        assert_eq!(r.rate_eve, 0.0);
        assert_eq!(r.secrecy_rate, 0.0);
    }

    #[test]
    fn identical_links_have_zero_secrecy() {
        let s = Scenario {
            theta_eve_deg: 30.0,
            ..Scenario::default()
        };
        let g = nsp_gains(&s);
        let c = ratio_coefficients(&s, &g).unwrap();
        assert_eq!(c.i, c.l);
        assert_eq!(c.j, c.m);
        for k in 0..=100 {
            let beta = k as f64 / 100.0;
            assert_eq!(rates(&s, &g, beta).unwrap().secrecy_rate, 0.0);
            assert_eq!(phi(&c, beta).unwrap(), 1.0);
            assert_eq!(derivative_numerator(&c, beta), 0.0);
        }
    }

    #[test]
    fn beta_out_of_range_is_rejected() {
        let s = Scenario::default();
        let g = nsp_gains(&s);
        assert!(matches!(
            rates(&s, &g, 1.5),
            Err(Error::BetaOutOfRange { .. })
        ));
        assert!(matches!(
            rates(&s, &g, -0.1),
            Err(Error::BetaOutOfRange { .. })
        ));
        let c = ratio_coefficients(&s, &g).unwrap();
        assert!(phi(&c, f64::NAN).is_err());
    }

    #[test]
    fn phi_endpoints() {
        let s = Scenario::default().with_antennas(8);
        let c = ratio_coefficients(&s, &nsp_gains(&s)).unwrap();
        assert_eq!(phi(&c, 0.0).unwrap(), 1.0);
        let at_one = (c.i + c.j + c.k) / (c.l + c.m + c.k);
        assert!((phi(&c, 1.0).unwrap() - at_one).abs() <= 1e-15 * at_one);
    }

    #[test]
    fn nonphysical_denominator_is_reported() {
        let c = RatioCoefficients {
            i: 1.0,
            j: 1.0,
            k: 1.0,
            l: 0.0,
            m: -3.0,
        };
        assert!(matches!(phi(&c, 0.5), Err(Error::NonPhysical { .. })));
        assert!(phi(&c, 0.1).is_ok());
    }

    #[test]
    fn clamping() {
        assert_eq!(secrecy_from_phi(0.5), 0.0);
        assert_eq!(secrecy_from_phi(1.0), 0.0);
        assert_eq!(secrecy_from_phi(4.0), 2.0);
    }
}
