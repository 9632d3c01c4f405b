//! Glauber single-photon detection probabilities.
//!
//! With `E⁽⁺⁾ = ℰ Σ_i a_i e^{iφ_i} / r_i` over the open slits, the detection
//! probability is the normally ordered moment
//!
//! ```text
//! P = ⟨E⁽⁻⁾E⁽⁺⁾⟩ = |ℰ|² Σ_{i,j} ⟨a_i† a_j⟩ e^{−i(φ_i − φ_j)} / (r_i r_j)
//! ```
//!
//! The sum is evaluated in its full complex form; Hermiticity of the
//! correlation matrix makes the imaginary part vanish, which is checked.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{DetectorCoordinate, SlitGeometry};
use crate::source::{correlation_matrix, CorrelationMatrix, SlitConfiguration, SourceState};

/// Relative bound on the imaginary part of the bilinear form.
pub const IMAGINARY_TOLERANCE: f64 = 1e-14;

/// Detector-dependent field scale `|ℰ|²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionAmplitudeConfig {
    field_amplitude_sq: f64,
}

impl DetectionAmplitudeConfig {
    pub fn new(field_amplitude_sq: f64) -> Result<Self> {
        if !(field_amplitude_sq.is_finite() && field_amplitude_sq > 0.0) {
            return Err(Error::InvalidGeometry(format!(
                "|E|^2 must be positive and finite, got {field_amplitude_sq}"
            )));
        }
        Ok(Self { field_amplitude_sq })
    }

    pub fn field_amplitude_sq(&self) -> f64 {
        self.field_amplitude_sq
    }
}

impl Default for DetectionAmplitudeConfig {
    fn default() -> Self {
        Self {
            field_amplitude_sq: 1.0,
        }
    }
}

/// Intensity-like detection probability; only ratios are meaningful.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct DetectionProbability(pub f64);

impl DetectionProbability {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// `Σ_{i,j} C[i][j] e^{−i(φ_i − φ_j)} / (r_i r_j)` without the `|ℰ|²` factor,
/// together with `Σ |C[i][j]| / (r_i r_j)` as the magnitude scale of the terms.
pub fn bilinear_form(
    geom: &SlitGeometry,
    correlations: &CorrelationMatrix,
    config: &SlitConfiguration,
    d: DetectorCoordinate,
) -> Result<(Complex64, f64)> {
    let open = config.open_slits();
    if correlations.dim() != open.len() {
        return Err(Error::InvalidConfiguration(format!(
            "{}x{} correlations for {} open slits",
            correlations.dim(),
            correlations.dim(),
            open.len()
        )));
    }
    let radii = open
        .iter()
        .map(|&slit| geom.path_length(slit, d))
        .collect::<Result<Vec<_>>>()?;

    let mut sum = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    for (p, &i) in open.iter().enumerate() {
        for (q, &j) in open.iter().enumerate() {
            let weight = (radii[p] * radii[q]).recip();
            let c = correlations.get(p, q);
            let phase = Complex64::from_polar(1.0, -geom.phase_difference(i, j, d)?);
            sum += c * phase * weight;
            scale += c.norm() * weight;
        }
    }
    Ok((sum, scale))
}

/// Detection probability from an explicit correlation matrix.
pub fn probability_from_correlations(
    geom: &SlitGeometry,
    correlations: &CorrelationMatrix,
    config: &SlitConfiguration,
    d: DetectorCoordinate,
    amp: &DetectionAmplitudeConfig,
) -> Result<DetectionProbability> {
    let (sum, scale) = bilinear_form(geom, correlations, config, d)?;
    if sum.im.abs() > IMAGINARY_TOLERANCE * scale {
        return Err(Error::NonRealProbability {
            imag: sum.im,
            scale,
        });
    }
    Ok(DetectionProbability(amp.field_amplitude_sq() * sum.re))
}

/// Probability of a single-photon detection at `d` with the slits of
/// `config` open, for a source prepared in `state`.
pub fn detection_probability(
    geom: &SlitGeometry,
    state: &SourceState,
    config: &SlitConfiguration,
    d: DetectorCoordinate,
    amp: &DetectionAmplitudeConfig,
) -> Result<DetectionProbability> {
    if let Some(&slit) = config
        .open_slits()
        .iter()
        .find(|&&s| s >= geom.slit_count())
    {
        return Err(Error::SlitOutOfRange {
            index: slit,
            count: geom.slit_count(),
        });
    }
    let correlations = correlation_matrix(state, config);
    probability_from_correlations(geom, &correlations, config, d, amp)
}

/// Pointwise [`detection_probability`] over `sweep`, in sweep order.
pub fn detection_curve(
    geom: &SlitGeometry,
    state: &SourceState,
    config: &SlitConfiguration,
    sweep: &[DetectorCoordinate],
    amp: &DetectionAmplitudeConfig,
) -> Result<Vec<(DetectorCoordinate, DetectionProbability)>> {
    if sweep.is_empty() {
        return Err(Error::InvalidSweep("empty sweep".into()));
    }
    sweep
        .par_iter()
        .map(|&d| detection_probability(geom, state, config, d, amp).map(|p| (d, p)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{expand_fock_source, oracle_expectation, DEFAULT_N_MAX};
    use proptest::prelude::*;

    fn cfg(labels: &str) -> SlitConfiguration {
        SlitConfiguration::from_labels(labels).unwrap()
    }

    fn amp() -> DetectionAmplitudeConfig {
        DetectionAmplitudeConfig::default()
    }

    #[test]
    fn single_slit_is_inverse_square() {
        let g = SlitGeometry::reference();
        for (labels, slit) in [("a", 0), ("b", 1), ("c", 2)] {
            for d in [-0.5, 0.0, 0.21] {
                let p = detection_probability(
                    &g,
                    &SourceState::Fock(5),
                    &cfg(labels),
                    d.into(),
                    &amp(),
                )
                .unwrap();
                let r = g.path_length(slit, d.into()).unwrap();
                assert!((p.value() - 5.0 / (r * r)).abs() <= 1e-14 * p.value());
            }
        }
    }

    #[test]
    fn vacuum_detects_nothing() {
        let g = SlitGeometry::reference();
        for labels in ["a", "ab", "bc", "abc"] {
            let p =
                detection_probability(&g, &SourceState::Fock(0), &cfg(labels), 0.1.into(), &amp())
                    .unwrap();
            assert_eq!(p.value(), 0.0);
        }
    }

    #[test]
    fn symmetric_pair_on_axis_doubles_single_slit_sum() {
        // a and c are mirror images, so at d = 0 their paths and phases agree.
        let g = SlitGeometry::reference();
        let n = 3u32;
        let p = detection_probability(&g, &SourceState::Fock(n), &cfg("ac"), 0.0.into(), &amp())
            .unwrap();
        let r = g.path_length(0, 0.0.into()).unwrap();
        let expected = f64::from(n) * 2.0 / (r * r);
        assert!((p.value() - expected).abs() <= 1e-14 * expected);
        // twice the incoherent sum of the two slit contributions, each n/2 photons
        let incoherent = 2.0 * (f64::from(n) / 2.0) / (r * r);
        assert!((p.value() - 2.0 * incoherent).abs() <= 1e-14 * expected);
    }

    #[test]
    fn two_slit_closed_form() {
        let g = SlitGeometry::reference();
        let n = 6u32;
        for d in [-0.3, 0.0, 0.05, 0.4] {
            let d = DetectorCoordinate(d);
            let p =
                detection_probability(&g, &SourceState::Fock(n), &cfg("ab"), d, &amp()).unwrap();
            let ra = g.path_length(0, d).unwrap();
            let rb = g.path_length(1, d).unwrap();
            let dphi = g.phase_difference(0, 1, d).unwrap();
            let expected = f64::from(n) / 2.0
                * (1.0 / (ra * ra) + 1.0 / (rb * rb) + 2.0 * dphi.cos() / (ra * rb));
            assert!((p.value() - expected).abs() <= 1e-13 * expected.abs().max(1e-3));
        }
    }

    #[test]
    fn rejects_slit_missing_from_geometry() {
        let g = SlitGeometry::new(vec![-0.1, 0.1], 1.0, 0.05).unwrap();
        assert!(
            detection_probability(&g, &SourceState::Fock(1), &cfg("c"), 0.0.into(), &amp())
                .is_err()
        );
    }

    #[test]
    fn non_hermitian_correlations_are_rejected() {
        let g = SlitGeometry::reference();
        let c = CorrelationMatrix::from_entries(
            2,
            vec![
                1.0.into(),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, 1.0),
                1.0.into(),
            ],
        )
        .unwrap();
        let r = probability_from_correlations(&g, &c, &cfg("ab"), 0.3.into(), &amp());
        assert!(matches!(r, Err(Error::NonRealProbability { .. })));
    }

    #[test]
    fn empty_sweep_is_rejected() {
        let g = SlitGeometry::reference();
        assert!(detection_curve(&g, &SourceState::Fock(1), &cfg("abc"), &[], &amp()).is_err());
    }

    #[test]
    fn curve_is_pointwise_and_ordered() {
        let g = SlitGeometry::reference();
        let sweep: Vec<DetectorCoordinate> = (-50..=50)
            .map(|i| DetectorCoordinate(f64::from(i) * 0.01))
            .collect();
        let state = SourceState::Fock(2);
        let curve = detection_curve(&g, &state, &cfg("abc"), &sweep, &amp()).unwrap();
        assert_eq!(curve.len(), sweep.len());
        for ((d, p), &expected_d) in curve.iter().zip(&sweep) {
            assert_eq!(*d, expected_d);
            let seq = detection_probability(&g, &state, &cfg("abc"), *d, &amp()).unwrap();
            assert_eq!(p.value().to_bits(), seq.value().to_bits());
        }
        let single = detection_curve(&g, &state, &cfg("abc"), &sweep[..1], &amp()).unwrap();
        assert_eq!(single[0], curve[0]);
    }

    #[test]
    fn symmetric_sweep_is_palindromic() {
        let g = SlitGeometry::reference();
        let sweep: Vec<DetectorCoordinate> = (-40..=40)
            .map(|i| DetectorCoordinate(f64::from(i) * 0.0125))
            .collect();
        for labels in ["abc", "ac", "b"] {
            let curve =
                detection_curve(&g, &SourceState::Fock(1), &cfg(labels), &sweep, &amp()).unwrap();
            for (lhs, rhs) in curve.iter().zip(curve.iter().rev()) {
                assert!(
                    (lhs.1.value() - rhs.1.value()).abs() <= 1e-12 * lhs.1.value().abs().max(1e-12)
                );
            }
        }
    }

    #[test]
    fn three_slit_reference_curve_peaks_on_axis() {
        let g = SlitGeometry::reference();
        let sweep = crate::sweep::SweepSpec::default_d_over_screen().coordinates(&g);
        let curve =
            detection_curve(&g, &SourceState::Fock(1), &cfg("abc"), &sweep, &amp()).unwrap();
        let (argmax, _) = curve
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .1.value().total_cmp(&b.1 .1.value()))
            .unwrap();
        assert_eq!(curve[argmax].0.value(), 0.0);
        // oscillatory: some interior local minimum exists on each side
        let values: Vec<f64> = curve.iter().map(|(_, p)| p.value()).collect();
        let minima = values
            .windows(3)
            .filter(|w| w[1] < w[0] && w[1] < w[2])
            .count();
        assert!(minima >= 2 && minima % 2 == 0, "{minima}");
    }

    #[test]
    fn oracle_correlations_reproduce_probabilities() {
        let g = SlitGeometry::reference();
        for n in 0..=4u32 {
            for labels in ["a", "b", "ab", "bc", "ac", "abc"] {
                let config = cfg(labels);
                let modes = config.splitting_count();
                let psi = expand_fock_source(n, modes, DEFAULT_N_MAX).unwrap();
                let oracle = CorrelationMatrix::from_entries(
                    modes,
                    (0..modes * modes)
                        .map(|k| oracle_expectation(&psi, k / modes, k % modes).unwrap())
                        .collect(),
                )
                .unwrap();
                for d in [-0.37, 0.0, 0.11] {
                    let d = DetectorCoordinate(d);
                    let a = detection_probability(&g, &SourceState::Fock(n), &config, d, &amp())
                        .unwrap()
                        .value();
                    let b = probability_from_correlations(&g, &oracle, &config, d, &amp())
                        .unwrap()
                        .value();
                    assert!(
                        (a - b).abs() <= 1e-12 * a.abs().max(1e-300),
                        "n={n} {labels}: {a} vs {b}"
                    );
                }
            }
        }
    }

    proptest! {
        #[test]
        fn linear_in_mean_photon_number(mean in 0.0f64..100.0, d in -1.0f64..1.0) {
            let g = SlitGeometry::reference();
            let d = DetectorCoordinate(d);
            let one = detection_probability(&g, &SourceState::Thermal(mean), &cfg("abc"), d, &amp()).unwrap();
            let two = detection_probability(&g, &SourceState::Thermal(2.0 * mean), &cfg("abc"), d, &amp()).unwrap();
            prop_assert_eq!(two.value(), 2.0 * one.value());
        }

        #[test]
        fn non_negative(mean in 0.0f64..100.0, d in -5.0f64..5.0, labels in prop::sample::select(vec!["a", "ab", "bc", "ac", "abc"])) {
            let g = SlitGeometry::reference();
            let p = detection_probability(&g, &SourceState::Thermal(mean), &cfg(labels), d.into(), &amp()).unwrap();
            prop_assert!(p.value() >= -1e-15 * mean.max(1.0));
        }
    }
}
