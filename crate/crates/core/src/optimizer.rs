//! Max-SR power allocation.
//!
//! `φ` is a ratio of two positive quadratics on `[0, 1]`, so its maximum is
//! attained either at an endpoint or at a zero of the derivative numerator
//! `(IM − JL)β² + 2K(I − L)β + K(J − M)`. The analytic solvers enumerate
//! exactly those candidates and keep the best one; [`grid_oracle`] reaches
//! the same answer by brute force and is used to cross-check them.

use serde::{Deserialize, Serialize};

use crate::beamforming::nsp_design;
use crate::channel::Scenario;
use crate::error::{Error, Result};
use crate::secrecy::{link_gains, phi, secrecy_from_phi, LinkGains, RatioCoefficients};

/// Relative threshold below which the quadratic term of the derivative
/// numerator is treated as zero.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;

/// Grid size used by [`grid_oracle`] when the caller has no preference.
pub const DEFAULT_GRID_POINTS: usize = 100_001;

/// Bracket width at which the oracle's golden-section refinement stops.
pub const ORACLE_REFINE_WIDTH: f64 = 1e-10;

/// Which candidate produced the optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseLabel {
    #[serde(rename = "INTERIOR_ROOT_1")]
    InteriorRoot1,
    #[serde(rename = "INTERIOR_ROOT_2")]
    InteriorRoot2,
    #[serde(rename = "LINEAR_STATIONARY")]
    LinearStationary,
    #[serde(rename = "ENDPOINT_ZERO")]
    EndpointZero,
    #[serde(rename = "ENDPOINT_ONE")]
    EndpointOne,
}

impl CaseLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseLabel::InteriorRoot1 => "INTERIOR_ROOT_1",
            CaseLabel::InteriorRoot2 => "INTERIOR_ROOT_2",
            CaseLabel::LinearStationary => "LINEAR_STATIONARY",
            CaseLabel::EndpointZero => "ENDPOINT_ZERO",
            CaseLabel::EndpointOne => "ENDPOINT_ONE",
        }
    }
}

impl std::fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationaryPoint {
    pub beta: f64,
    pub label: CaseLabel,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub beta: f64,
    pub phi: f64,
    pub label: CaseLabel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaSolution {
    pub beta_star: f64,
    pub secrecy_rate_star: f64,
    pub candidates: Vec<Candidate>,
    pub case_label: CaseLabel,
}

impl PaSolution {
    pub fn phi_star(&self) -> f64 {
        self.candidates
            .iter()
            .find(|c| c.beta == self.beta_star)
            .map_or(1.0, |c| c.phi)
    }
}

/// Zeros of the derivative numerator, unfiltered.
///
/// Returns `β₁ = (−K(I−L) + √Δ)/(IM−JL)` and `β₂ = (−K(I−L) − √Δ)/(IM−JL)`
/// with `Δ = K²(I−L)² − K(IM−JL)(J−M)` when the quadratic term is present
/// and `Δ ≥ 0`; the single linear root `(M−J)/(2(I−L))` when it vanishes;
/// nothing otherwise.
pub fn stationary_points(coeffs: &RatioCoefficients) -> Vec<StationaryPoint> {
    // Root locations are invariant under a common rescaling of a(β) and b(β).
    let c = coeffs.normalized();
    let im = c.i * c.m;
    let jl = c.j * c.l;
    let quad = im - jl;
    let half_lin = c.k * (c.i - c.l);
    let cst = c.k * (c.j - c.m);

    if quad.abs() <= DEGENERACY_THRESHOLD * im.abs().max(jl.abs()).max(1.0) {
        return if c.i != c.l {
            vec![StationaryPoint {
                beta: (c.m - c.j) / (2.0 * (c.i - c.l)),
                label: CaseLabel::LinearStationary,
            }]
        } else {
            Vec::new()
        };
    }
    quadratic_roots(quad, half_lin, cst)
}

/// Roots of `qβ² + 2pβ + r` with `q ≠ 0`, labelled so that root 1 carries
/// `+√Δ`. The larger-magnitude root is formed directly and the other from
/// the product `r/q`, which avoids cancellation when `r` is small.
fn quadratic_roots(q: f64, p: f64, r: f64) -> Vec<StationaryPoint> {
    let disc = p * p - q * r;
    if disc < 0.0 {
        return Vec::new();
    }
    let sq = disc.sqrt();
    let (root1, root2) = if p >= 0.0 {
        let t = -p - sq;
        let small = if t == 0.0 { 0.0 } else { r / t };
        (small, t / q)
    } else {
        let t = -p + sq;
        let small = if t == 0.0 { 0.0 } else { r / t };
        (t / q, small)
    };
    vec![
        StationaryPoint {
            beta: root1,
            label: CaseLabel::InteriorRoot1,
        },
        StationaryPoint {
            beta: root2,
            label: CaseLabel::InteriorRoot2,
        },
    ]
}

/// Compares `φ` at both endpoints and at every stationary point inside
/// `(0, 1)`. Ties go to the smaller `β`.
fn best_candidate(coeffs: &RatioCoefficients, points: &[StationaryPoint]) -> Result<PaSolution> {
    let mut betas: Vec<(f64, CaseLabel)> = vec![(0.0, CaseLabel::EndpointZero)];
    let mut interior: Vec<_> = points
        .iter()
        .filter(|p| p.beta > 0.0 && p.beta < 1.0)
        .map(|p| (p.beta, p.label))
        .collect();
    interior.sort_by(|a, b| a.0.total_cmp(&b.0));
    betas.extend(interior);
    betas.push((1.0, CaseLabel::EndpointOne));

    let candidates = betas
        .into_iter()
        .map(|(beta, label)| {
            Ok(Candidate {
                beta,
                phi: phi(coeffs, beta)?,
                label,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut best = candidates[0];
    for c in &candidates[1..] {
        if c.phi > best.phi {
            best = *c;
        }
    }
    Ok(PaSolution {
        beta_star: best.beta,
        secrecy_rate_star: secrecy_from_phi(best.phi),
        candidates,
        case_label: best.label,
    })
}

/// Optimal power split for an arbitrary beamforming design, given its ratio
/// coefficients.
pub fn solve_general(coeffs: &RatioCoefficients) -> Result<PaSolution> {
    best_candidate(coeffs, &stationary_points(coeffs))
}

/// Ratio coefficients specialised to null-space projection, where the noise
/// never reaches Bob (`L = 0`).
///
/// `|h_b^H v_b|²` is `N` in exact arithmetic; the computed value is used so
/// that identical links give `φ ≡ 1` exactly rather than `1 + ε`.
pub fn nsp_coefficients(scenario: &Scenario, gains: &LinkGains) -> Result<RatioCoefficients> {
    let n = gains.sig_bob;
    let pb = scenario.gain_bob()?.value() * scenario.total_power;
    let pe = scenario.gain_eve()?.value() * scenario.total_power;
    let noise = scenario.noise_power;
    let floor_eve = pe * gains.an_eve + noise;
    Ok(RatioCoefficients {
        i: -n * pb * pe * gains.an_eve,
        j: n * pb * floor_eve - pe * noise * gains.an_eve,
        k: noise * floor_eve,
        l: 0.0,
        m: pe * noise * (gains.sig_eve - gains.an_eve),
    })
}

/// Stationary points of the NSP-reduced numerator `IMβ² + 2KIβ + K(J − M)`.
fn nsp_stationary_points(c: &RatioCoefficients) -> Vec<StationaryPoint> {
    let c = c.normalized();
    let im = c.i * c.m;
    if im.abs() <= DEGENERACY_THRESHOLD * im.abs().max(1.0) {
        return if c.i != 0.0 {
            vec![StationaryPoint {
                beta: (c.m - c.j) / (2.0 * c.i),
                label: CaseLabel::LinearStationary,
            }]
        } else {
            Vec::new()
        };
    }
    quadratic_roots(im, c.k * c.i, c.k * (c.j - c.m))
}

/// Closed-form optimum for the null-space projection beamformer.
pub fn solve_nsp(scenario: &Scenario) -> Result<PaSolution> {
    scenario.validate()?;
    let design = nsp_design(&scenario.channel_bob()?)?;
    let gains = link_gains(scenario, &design)?;
    let coeffs = nsp_coefficients(scenario, &gains)?;
    best_candidate(&coeffs, &nsp_stationary_points(&coeffs))
}

/// Brute-force maximiser: uniform grid over `[0, 1]`, first-index argmax,
/// then golden-section refinement inside the neighbouring grid cells.
///
/// The oracle does not know which root it found, so an interior optimum is
/// labelled [`CaseLabel::InteriorRoot1`].
pub fn grid_oracle(coeffs: &RatioCoefficients, grid_points: usize) -> Result<PaSolution> {
    if grid_points < 2 {
        return Err(Error::config(
            "grid_points",
            format!("must be at least 2, got {grid_points}"),
        ));
    }
    let last = grid_points - 1;
    let at = |i: usize| {
        if i == last {
            1.0
        } else {
            i as f64 / last as f64
        }
    };

    let mut best_i = 0;
    let mut best_phi = phi(coeffs, 0.0)?;
    for i in 1..grid_points {
        let v = phi(coeffs, at(i))?;
        if v > best_phi {
            best_i = i;
            best_phi = v;
        }
    }
    let grid_best = Candidate {
        beta: at(best_i),
        phi: best_phi,
        label: label_for(at(best_i)),
    };

    let lo = at(best_i.saturating_sub(1));
    let hi = at((best_i + 1).min(last));
    let refined_beta = golden_section_max(|b| phi(coeffs, b), lo, hi, ORACLE_REFINE_WIDTH)?;
    let refined = Candidate {
        beta: refined_beta,
        phi: phi(coeffs, refined_beta)?,
        label: label_for(refined_beta),
    };

    let best = if refined.phi > grid_best.phi {
        refined
    } else {
        grid_best
    };
    Ok(PaSolution {
        beta_star: best.beta,
        secrecy_rate_star: secrecy_from_phi(best.phi),
        candidates: vec![grid_best, refined],
        case_label: best.label,
    })
}

fn label_for(beta: f64) -> CaseLabel {
    if beta == 0.0 {
        CaseLabel::EndpointZero
    } else if beta == 1.0 {
        CaseLabel::EndpointOne
    } else {
        CaseLabel::InteriorRoot1
    }
}

/// Golden-section search for a maximiser of `f` on `[lo, hi]`, stopping once
/// the bracket is narrower than `width`.
pub fn golden_section_max<F>(mut f: F, mut lo: f64, mut hi: f64, width: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > width {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        }
    }
    Ok(0.5 * (lo + hi))
}
