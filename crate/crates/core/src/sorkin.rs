//! The Sorkin parameter, both as an algebraic identity over complex numbers
//! and as the physical combination of three-slit detection probabilities
//!
//! ```text
//! κ(d) = P_abc − n₂ (P_ab + P_ac + P_bc) + n₁ (P_a + P_b + P_c)
//! ```
//!
//! Each probability is evaluated with the open-slit splitting that actually
//! applies to it (1/√3, 1/√2, 1). With `n₁ = 1/3, n₂ = 2/3` every diagonal and
//! every cross term cancels and κ(d) vanishes; with `n₁ = n₂ = 1` it does not.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detection::{detection_probability, DetectionAmplitudeConfig};
use crate::error::{Error, Result};
use crate::geometry::{DetectorCoordinate, SlitGeometry};
use crate::source::{SlitConfiguration, SourceState};

/// `P_αβγ − P_αβ − P_αγ − P_βγ + P_α + P_β + P_γ` with `P_x = |Σ x|²`.
pub fn kappa_identity(alpha: Complex64, beta: Complex64, gamma: Complex64) -> f64 {
    let p = |z: Complex64| z.norm_sqr();
    p(alpha + beta + gamma) - p(alpha + beta) - p(alpha + gamma) - p(beta + gamma)
        + p(alpha)
        + p(beta)
        + p(gamma)
}

/// What κ(d) is divided by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalizer {
    Unit,
    /// `P_abc(d = 0)`.
    PAbcAtZero,
}

/// Weights `n₁` (single-slit terms) and `n₂` (two-slit terms).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SorkinConfig {
    pub n1: f64,
    pub n2: f64,
    pub normalizer: Normalizer,
}

impl SorkinConfig {
    pub fn new(n1: f64, n2: f64, normalizer: Normalizer) -> Result<Self> {
        if !(n1.is_finite() && n2.is_finite()) {
            return Err(Error::InvalidSorkinConfig(format!(
                "n1 = {n1}, n2 = {n2} must be finite"
            )));
        }
        Ok(Self { n1, n2, normalizer })
    }

    /// Flux-adjusted weights `n₁ = 1/3, n₂ = 2/3`.
    pub fn adjusted() -> Self {
        Self {
            n1: 1.0 / 3.0,
            n2: 2.0 / 3.0,
            normalizer: Normalizer::PAbcAtZero,
        }
    }

    /// Unit weights, the literal transcription of the amplitude identity.
    pub fn naive() -> Self {
        Self {
            n1: 1.0,
            n2: 1.0,
            normalizer: Normalizer::PAbcAtZero,
        }
    }

    pub fn with_normalizer(self, normalizer: Normalizer) -> Self {
        Self { normalizer, ..self }
    }
}

/// How a [`Perturbation`] modifies the base weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbationKind {
    /// `n → n·(1 + δ)`.
    Relative,
    /// `n → n + δ`.
    Absolute,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    pub dn1: f64,
    pub dn2: f64,
    pub kind: PerturbationKind,
}

impl Perturbation {
    pub fn relative(dn1: f64, dn2: f64) -> Self {
        Self {
            dn1,
            dn2,
            kind: PerturbationKind::Relative,
        }
    }

    pub fn absolute(dn1: f64, dn2: f64) -> Self {
        Self {
            dn1,
            dn2,
            kind: PerturbationKind::Absolute,
        }
    }

    pub fn apply(&self, base: &SorkinConfig) -> SorkinConfig {
        let (n1, n2) = match self.kind {
            PerturbationKind::Relative => (base.n1 * (1.0 + self.dn1), base.n2 * (1.0 + self.dn2)),
            PerturbationKind::Absolute => (base.n1 + self.dn1, base.n2 + self.dn2),
        };
        SorkinConfig {
            n1,
            n2,
            normalizer: base.normalizer,
        }
    }
}

/// The two weight perturbations of the reference sensitivity plot:
/// `n₂` raised by 1.3 %, `n₁` raised by 1.3 % (upper) and 1.2 % (lower).
pub fn figure2_perturbations(kind: PerturbationKind) -> [Perturbation; 2] {
    [
        Perturbation {
            dn1: FIGURE2_DN1_UPPER,
            dn2: FIGURE2_DN2,
            kind,
        },
        Perturbation {
            dn1: FIGURE2_DN1_LOWER,
            dn2: FIGURE2_DN2,
            kind,
        },
    ]
}

pub const FIGURE2_DN2: f64 = 0.013;
pub const FIGURE2_DN1_UPPER: f64 = 0.013;
pub const FIGURE2_DN1_LOWER: f64 = 0.012;

/// All seven detection probabilities of the three-slit experiment at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlitProbabilities {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub ab: f64,
    pub ac: f64,
    pub bc: f64,
    pub abc: f64,
}

impl SlitProbabilities {
    pub fn evaluate(
        geom: &SlitGeometry,
        state: &SourceState,
        d: DetectorCoordinate,
        amp: &DetectionAmplitudeConfig,
    ) -> Result<Self> {
        check_three_slit(geom)?;
        let p = |labels: &str| -> Result<f64> {
            let config = SlitConfiguration::from_labels(labels)?;
            Ok(detection_probability(geom, state, &config, d, amp)?.value())
        };
        Ok(Self {
            a: p("a")?,
            b: p("b")?,
            c: p("c")?,
            ab: p("ab")?,
            ac: p("ac")?,
            bc: p("bc")?,
            abc: p("abc")?,
        })
    }

    pub fn singles(&self) -> f64 {
        self.a + self.b + self.c
    }

    pub fn pairs(&self) -> f64 {
        self.ab + self.ac + self.bc
    }

    /// `(P_abc − n₂ ΣP_pairs) + n₁ ΣP_singles`.
    pub fn kappa(&self, cfg: &SorkinConfig) -> f64 {
        (self.abc - cfg.n2 * self.pairs()) + cfg.n1 * self.singles()
    }
}

fn check_three_slit(geom: &SlitGeometry) -> Result<()> {
    if geom.slit_count() == 3 {
        Ok(())
    } else {
        Err(Error::InvalidGeometry(format!(
            "the Sorkin parameter needs exactly three slits, geometry has {}",
            geom.slit_count()
        )))
    }
}

/// κ(d) at one detector position, unnormalized.
pub fn kappa_physical(
    geom: &SlitGeometry,
    state: &SourceState,
    d: DetectorCoordinate,
    cfg: &SorkinConfig,
    amp: &DetectionAmplitudeConfig,
) -> Result<f64> {
    Ok(SlitProbabilities::evaluate(geom, state, d, amp)?.kappa(cfg))
}

/// The divisor selected by `cfg.normalizer`.
pub fn normalizer_value(
    geom: &SlitGeometry,
    state: &SourceState,
    cfg: &SorkinConfig,
    amp: &DetectionAmplitudeConfig,
) -> Result<f64> {
    match cfg.normalizer {
        Normalizer::Unit => Ok(1.0),
        Normalizer::PAbcAtZero => {
            check_three_slit(geom)?;
            let p = detection_probability(
                geom,
                state,
                &SlitConfiguration::all_open(),
                DetectorCoordinate(0.0),
                amp,
            )?
            .value();
            if p.is_finite() && p >= f64::MIN_POSITIVE {
                Ok(p)
            } else {
                Err(Error::DegenerateNormalizer(p))
            }
        }
    }
}

/// One sweep point of a κ curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaPoint {
    pub d: DetectorCoordinate,
    pub probabilities: SlitProbabilities,
    pub kappa: f64,
    pub kappa_normalized: f64,
}

/// κ(d) and κ(d)/P over `sweep`, in sweep order.
pub fn kappa_curve(
    geom: &SlitGeometry,
    state: &SourceState,
    cfg: &SorkinConfig,
    sweep: &[DetectorCoordinate],
    amp: &DetectionAmplitudeConfig,
) -> Result<Vec<KappaPoint>> {
    if sweep.is_empty() {
        return Err(Error::InvalidSweep("empty sweep".into()));
    }
    check_three_slit(geom)?;
    let norm = normalizer_value(geom, state, cfg, amp)?;
    sweep
        .par_iter()
        .map(|&d| {
            let probabilities = SlitProbabilities::evaluate(geom, state, d, amp)?;
            let kappa = probabilities.kappa(cfg);
            Ok(KappaPoint {
                d,
                probabilities,
                kappa,
                kappa_normalized: kappa / norm,
            })
        })
        .collect()
}

/// A κ curve tagged with the weights that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbedCurve {
    pub perturbation: Perturbation,
    pub config: SorkinConfig,
    pub points: Vec<KappaPoint>,
}

/// One κ curve per perturbation of `base`.
pub fn perturbation_sweep(
    geom: &SlitGeometry,
    state: &SourceState,
    base: &SorkinConfig,
    perturbations: &[Perturbation],
    sweep: &[DetectorCoordinate],
    amp: &DetectionAmplitudeConfig,
) -> Result<Vec<PerturbedCurve>> {
    if perturbations.is_empty() {
        return Err(Error::InvalidSorkinConfig("no perturbations given".into()));
    }
    perturbations
        .iter()
        .map(|pert| {
            let config = pert.apply(base);
            let points = kappa_curve(geom, state, &config, sweep, amp)?;
            Ok(PerturbedCurve {
                perturbation: *pert,
                config,
                points,
            })
        })
        .collect()
}
