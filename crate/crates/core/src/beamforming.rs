//! Beam vectors and artificial-noise projectors.
//!
//! Any `(v_b, P_AN)` pair with `v_b^H v_b = 1` and `Tr[P_AN P_AN^H] = 1` is a
//! valid [`BeamformingDesign`]; the rate and power-allocation code downstream
//! never assumes more than that. [`nsp_design`] builds the null-space
//! projection scheme, where the noise is confined to the orthogonal
//! complement of Bob's channel.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::channel::ChannelVector;
use crate::error::{Error, Result};

/// Tolerance used by [`validate_design`] for both norm constraints.
pub const DESIGN_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct BeamformingDesign {
    pub beam_vector: Array1<Complex64>,
    pub an_projection: Array2<Complex64>,
}

impl BeamformingDesign {
    pub fn n_antennas(&self) -> usize {
        self.beam_vector.len()
    }

    pub(crate) fn check_dims(&self) -> Result<()> {
        let n = self.beam_vector.len();
        let (rows, cols) = self.an_projection.dim();
        if rows != n {
            return Err(Error::Dimension {
                what: "projection rows",
                expected: n,
                found: rows,
            });
        }
        if cols != n {
            return Err(Error::Dimension {
                what: "projection columns",
                expected: n,
                found: cols,
            });
        }
        Ok(())
    }
}

/// Null-space projection design for the intended channel `h_bob`:
/// `v_b = h/√N` and `P_AN ∝ I − h h^H / N`, Frobenius-normalised.
pub fn nsp_design(h_bob: &ChannelVector) -> Result<BeamformingDesign> {
    let n = h_bob.len();
    if n < 2 {
        return Err(Error::DegenerateNullSpace { n_antennas: n });
    }
    let h = h_bob.as_array();
    let nf = n as f64;
    let beam_vector = h.mapv(|e| e / nf.sqrt());

    let mut projector = Array2::from_shape_fn((n, n), |(i, j)| -h[i] * h[j].conj() / nf);
    for i in 0..n {
        projector[[i, i]] += 1.0;
    }
    let fro = frobenius_norm(&projector);
    if fro.is_nan() || fro <= f64::EPSILON {
        return Err(Error::DegenerateNullSpace { n_antennas: n });
    }
    projector.mapv_inplace(|e| e / fro);

    Ok(BeamformingDesign {
        beam_vector,
        an_projection: projector,
    })
}

pub fn frobenius_norm(m: &Array2<Complex64>) -> f64 {
    m.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt()
}

/// One measured constraint of a design.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignCheck {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignReport {
    pub checks: Vec<DesignCheck>,
}

impl DesignReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&DesignCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Measures the two power-normalisation constraints. Only those are
/// checked: a design need not place its noise in any particular subspace.
pub fn validate_design(design: &BeamformingDesign) -> Result<DesignReport> {
    design.check_dims()?;
    let beam_energy: f64 = design.beam_vector.iter().map(|e| e.norm_sqr()).sum();
    // Tr[P P^H] is the squared Frobenius norm.
    let trace: f64 = design.an_projection.iter().map(|e| e.norm_sqr()).sum();

    let check = |name, residual: f64| DesignCheck {
        name,
        residual,
        tolerance: DESIGN_TOLERANCE,
        passed: residual <= DESIGN_TOLERANCE,
    };
    Ok(DesignReport {
        checks: vec![
            check("unit_norm_beam", (beam_energy - 1.0).abs()),
            check("unit_trace_projection", (trace - 1.0).abs()),
        ],
    })
}

#[derive(Serialize, Deserialize)]
struct DesignRepr {
    beam_vector: Vec<[f64; 2]>,
    an_projection: Vec<Vec<[f64; 2]>>,
}

impl Serialize for BeamformingDesign {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pair = |c: &Complex64| [c.re, c.im];
        DesignRepr {
            beam_vector: self.beam_vector.iter().map(pair).collect(),
            an_projection: self
                .an_projection
                .rows()
                .into_iter()
                .map(|row| row.iter().map(pair).collect())
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BeamformingDesign {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = DesignRepr::deserialize(deserializer)?;
        let rows = repr.an_projection.len();
        let cols = repr.an_projection.first().map_or(0, Vec::len);
        if repr.an_projection.iter().any(|r| r.len() != cols) {
            return Err(D::Error::custom("ragged an_projection rows"));
        }
        let flat = repr
            .an_projection
            .iter()
            .flatten()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        let an_projection = Array2::from_shape_vec((rows, cols), flat).map_err(D::Error::custom)?;
        Ok(BeamformingDesign {
            beam_vector: repr
                .beam_vector
                .iter()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect(),
            an_projection,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::steering_vector;
    use proptest::prelude::*;

    fn max_abs_diff(a: &Array2<Complex64>, b: &Array2<Complex64>) -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    fn unnormalized(h: &ChannelVector) -> Array2<Complex64> {
        let n = h.len();
        let h = h.as_array();
        Array2::from_shape_fn((n, n), |(i, j)| {
            let id = if i == j { 1.0 } else { 0.0 };
            Complex64::new(id, 0.0) - h[i] * h[j].conj() / n as f64
        })
    }

    #[test]
    fn two_element_equal_phase() {
        let h = steering_vector(90.0, 2, 0.5).unwrap();
        let d = nsp_design(&h).unwrap();
        let s = 1.0 / 2f64.sqrt();
        for &e in &d.beam_vector {
            assert!((e - Complex64::new(s, 0.0)).norm() < 1e-15);
        }
        let want = ndarray::array![[0.5, -0.5], [-0.5, 0.5]].mapv(|x| Complex64::new(x, 0.0));
        assert!(max_abs_diff(&d.an_projection, &want) < 1e-15);
    }

    #[test]
    fn single_antenna_is_degenerate() {
        let h = steering_vector(40.0, 1, 0.5).unwrap();
        assert!(matches!(
            nsp_design(&h),
            Err(Error::DegenerateNullSpace { n_antennas: 1 })
        ));
    }

    #[test]
    fn unnormalized_frobenius_is_sqrt_n_minus_one() {
        for n in [2usize, 4, 16, 64] {
            let h = steering_vector(30.0, n, 0.5).unwrap();
            let m = unnormalized(&h);
            // direct sum of squared moduli, independent of frobenius_norm()
            let mut acc = 0.0;
            for e in m.iter() {
                acc += e.re * e.re + e.im * e.im;
            }
            assert!(
                (acc.sqrt() - ((n - 1) as f64).sqrt()).abs() < 1e-12,
                "n = {n}"
            );
        }
    }

    #[test]
    fn nsp_passes_validation() {
        let h = steering_vector(30.0, 8, 0.5).unwrap();
        let report = validate_design(&nsp_design(&h).unwrap()).unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn doubled_beam_fails_unit_norm_with_residual_three() {
        let h = steering_vector(30.0, 8, 0.5).unwrap();
        let mut d = nsp_design(&h).unwrap();
        d.beam_vector.mapv_inplace(|e| e * 2.0);
        let report = validate_design(&d).unwrap();
        let c = report.check("unit_norm_beam").unwrap();
        assert!(!c.passed);
        assert!((c.residual - 3.0).abs() < 1e-12);
        assert!(report.check("unit_trace_projection").unwrap().passed);
    }

    #[test]
    fn scaled_identity_projection_satisfies_trace() {
        let n = 5;
        let h = steering_vector(70.0, n, 0.5).unwrap();
        let d = BeamformingDesign {
            beam_vector: h.as_array().mapv(|e| e / (n as f64).sqrt()),
            an_projection: Array2::from_diag_elem(n, Complex64::new(1.0 / (n as f64).sqrt(), 0.0)),
        };
        assert!(validate_design(&d).unwrap().passed());
    }

    #[test]
    fn dimension_mismatch_is_structural_error() {
        let d = BeamformingDesign {
            beam_vector: Array1::from_elem(3, Complex64::new(1.0, 0.0)),
            an_projection: Array2::zeros((3, 4)),
        };
        assert!(matches!(validate_design(&d), Err(Error::Dimension { .. })));
    }

    #[test]
    fn json_uses_real_imag_pairs() {
        let d = nsp_design(&steering_vector(60.0, 2, 0.5).unwrap()).unwrap();
        let v: serde_json::Value = serde_json::to_value(&d).unwrap();
        assert_eq!(v["beam_vector"].as_array().unwrap().len(), 2);
        assert_eq!(v["an_projection"][1][0].as_array().unwrap().len(), 2);
        let back: BeamformingDesign = serde_json::from_value(v).unwrap();
        assert_eq!(back, d);
    }

    proptest! {
        #[test]
        fn nsp_structure(theta in 1.0f64..179.0, n in 2usize..=64, psi in -3.2f64..3.2) {
            let h = steering_vector(theta, n, 0.5).unwrap();
            let d = nsp_design(&h).unwrap();
            prop_assert!(validate_design(&d).unwrap().passed());

            // h^H P_AN = 0
            let ha = h.as_array();
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..n {
                    acc += ha[i].conj() * d.an_projection[[i, j]];
                }
                prop_assert!(acc.norm() <= 1e-12);
            }

            // |h^H v_b|^2 = N
            let gain: Complex64 = ha.iter().zip(&d.beam_vector).map(|(h, v)| h.conj() * v).sum();
            prop_assert!((gain.norm_sqr() - n as f64).abs() <= 1e-9);

            // Hermitian and idempotent unnormalised projector
            let m = unnormalized(&h);
            let mh = m.t().mapv(|e| e.conj());
            prop_assert!(max_abs_diff(&m, &mh) <= 1e-12);
            prop_assert!(max_abs_diff(&m.dot(&m), &m) <= 1e-10);

            // global phase rotation leaves P_AN unchanged
            let rotated = nsp_design(&h.rotated(psi)).unwrap();
            prop_assert!(max_abs_diff(&rotated.an_projection, &d.an_projection) <= 1e-12);
            let phase = Complex64::from_polar(1.0, psi);
            for (a, b) in rotated.beam_vector.iter().zip(&d.beam_vector) {
                prop_assert!((a - b * phase).norm() <= 1e-12);
            }
        }
    }
}
