//! Self-check battery: Fock-space oracle versus the closed-form moments,
//! the amplitude identity, the unitary completion, and κ(d) nullity.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::detection::DetectionAmplitudeConfig;
use crate::error::Result;
use crate::fock::{
    expand_fock_source, fock_state_from_transform, oracle_expectation, source_mode_expectation,
    unitary_completion, DEFAULT_N_MAX,
};
use crate::geometry::SlitGeometry;
use crate::sorkin::{kappa_curve, kappa_identity, SorkinConfig};
use crate::source::{correlation_matrix, SlitConfiguration, SourceState, MAX_OPEN_SLITS};
use crate::sweep::SweepSpec;

pub const IDENTITY_TRIPLES: usize = 10_000;
pub const IDENTITY_MAX_MODULUS: f64 = 10.0;
pub const IDENTITY_TOLERANCE: f64 = 1e-10;
pub const MOMENT_TOLERANCE: f64 = 1e-12;
pub const KAPPA_TOLERANCE: f64 = 1e-12;

const SEED: u64 = 0x5eed_f00d;

/// Deliberate corruption used to prove a check can fail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FaultInjection {
    /// Adds `delta` to the `(0, 0)` entry of every analytic correlation
    /// matrix compared against the oracle.
    CorrelationEntry { delta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    /// Largest Fock photon number checked.
    pub n_max: u32,
    pub fault: Option<FaultInjection>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            n_max: 4,
            fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<32} max deviation {:.3e} (tolerance {:.0e})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.max_deviation,
            self.tolerance
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.failures().count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

/// The seven open-slit configurations of a three-slit screen.
pub fn all_configurations() -> Vec<SlitConfiguration> {
    (1u32..(1 << MAX_OPEN_SLITS))
        .map(|mask| {
            SlitConfiguration::new(
                (0..MAX_OPEN_SLITS)
                    .filter(|i| mask & (1 << i) != 0)
                    .collect(),
            )
            .expect("nonempty subset")
        })
        .collect()
}

pub fn run_verification(opts: &VerifyOptions) -> Result<VerificationReport> {
    let truncation = opts.n_max.max(DEFAULT_N_MAX);
    let mut checks = Vec::new();

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut random_complex = || {
        Complex64::from_polar(
            rng.gen_range(0.0..=IDENTITY_MAX_MODULUS),
            rng.gen_range(0.0..std::f64::consts::TAU),
        )
    };
    let identity = (0..IDENTITY_TRIPLES)
        .map(|_| kappa_identity(random_complex(), random_complex(), random_complex()).abs())
        .fold(0.0, f64::max);
    checks.push(CheckResult {
        name: "sorkin-identity",
        max_deviation: identity,
        tolerance: IDENTITY_TOLERANCE,
    });

    let mut norm = 0.0f64;
    let mut agreement = 0.0f64;
    let mut closed_form = 0.0f64;
    let mut conservation = 0.0f64;
    let mut transform_state = 0.0f64;
    let mut local_vacuum = 0.0f64;
    for n in 0..=opts.n_max {
        for modes in 1..=MAX_OPEN_SLITS {
            let psi = expand_fock_source(n, modes, truncation)?;
            norm = norm.max((psi.norm_sqr() - 1.0).abs());

            let config = SlitConfiguration::new((0..modes).collect())?;
            let mut analytic = correlation_matrix(&SourceState::Fock(n), &config);
            let expected = f64::from(n) / modes as f64;
            for v in analytic.entries() {
                closed_form = closed_form.max((v - expected).norm());
            }
            if let Some(FaultInjection::CorrelationEntry { delta }) = opts.fault {
                analytic.set(0, 0, analytic.get(0, 0) + delta);
            }

            let mut trace = 0.0;
            for i in 0..modes {
                for j in 0..modes {
                    let oracle = oracle_expectation(&psi, i, j)?;
                    agreement = agreement.max((oracle - analytic.get(i, j)).norm());
                }
                trace += oracle_expectation(&psi, i, i)?.re;
            }
            conservation = conservation.max((trace - f64::from(n)).abs());

            let u = unitary_completion(modes)?;
            let built = fock_state_from_transform(&u, n, truncation)?;
            transform_state = transform_state.max((psi.inner(&built).norm() - 1.0).abs());
            for k in 1..modes {
                local_vacuum = local_vacuum.max(source_mode_expectation(&psi, &u, k, k)?.norm());
            }
        }
    }
    checks.push(CheckResult {
        name: "fock-normalization",
        max_deviation: norm,
        tolerance: MOMENT_TOLERANCE,
    });
    checks.push(CheckResult {
        name: "correlation-oracle-agreement",
        max_deviation: agreement,
        tolerance: MOMENT_TOLERANCE,
    });
    checks.push(CheckResult {
        name: "correlation-closed-form",
        max_deviation: closed_form,
        tolerance: MOMENT_TOLERANCE,
    });
    checks.push(CheckResult {
        name: "photon-number-conservation",
        max_deviation: conservation,
        tolerance: MOMENT_TOLERANCE,
    });

    let unitarity = (1..=MAX_OPEN_SLITS)
        .map(|m| unitary_completion(m).map(|u| u.unitarity_defect()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    checks.push(CheckResult {
        name: "unitary-completion",
        max_deviation: unitarity,
        tolerance: MOMENT_TOLERANCE,
    });
    checks.push(CheckResult {
        name: "transform-built-state",
        max_deviation: transform_state,
        tolerance: MOMENT_TOLERANCE,
    });
    checks.push(CheckResult {
        name: "local-modes-vacuum",
        max_deviation: local_vacuum,
        tolerance: MOMENT_TOLERANCE,
    });

    let mut independence = 0.0f64;
    for n in 1..=opts.n_max.max(1) {
        let mean = f64::from(n);
        for config in all_configurations() {
            let fock = correlation_matrix(&SourceState::Fock(n), &config);
            let coherent = correlation_matrix(
                &SourceState::Coherent(Complex64::from_polar(mean.sqrt(), 0.7)),
                &config,
            );
            let thermal = correlation_matrix(&SourceState::Thermal(mean), &config);
            for ((f, c), t) in fock
                .entries()
                .iter()
                .zip(coherent.entries())
                .zip(thermal.entries())
            {
                independence = independence
                    .max((f - c).norm() / mean)
                    .max((f - t).norm() / mean);
            }
        }
    }
    checks.push(CheckResult {
        name: "source-state-independence",
        max_deviation: independence,
        tolerance: MOMENT_TOLERANCE,
    });

    let geom = SlitGeometry::reference();
    let sweep = SweepSpec::default_d_over_screen().coordinates(&geom);
    let curve = kappa_curve(
        &geom,
        &SourceState::Fock(1),
        &SorkinConfig::adjusted(),
        &sweep,
        &DetectionAmplitudeConfig::default(),
    )?;
    let nullity = curve
        .iter()
        .map(|p| p.kappa_normalized.abs())
        .fold(0.0, f64::max);
    checks.push(CheckResult {
        name: "adjusted-kappa-nullity",
        max_deviation: nullity,
        tolerance: KAPPA_TOLERANCE,
    });

    Ok(VerificationReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_run_passes() {
        let report = run_verification(&VerifyOptions::default()).unwrap();
        assert!(report.passed(), "{report}");
        assert!(
            report
                .check("correlation-oracle-agreement")
                .unwrap()
                .max_deviation
                <= 1e-12
        );
    }

    #[test]
    fn injected_fault_is_named() {
        let opts = VerifyOptions {
            fault: Some(FaultInjection::CorrelationEntry { delta: 1e-6 }),
            ..Default::default()
        };
        let report = run_verification(&opts).unwrap();
        assert!(!report.passed());
        let failed: Vec<_> = report.failures().map(|c| c.name).collect();
        assert_eq!(failed, vec!["correlation-oracle-agreement"]);
        let dev = report
            .check("correlation-oracle-agreement")
            .unwrap()
            .max_deviation;
        assert!((dev - 1e-6).abs() < 1e-9);
    }

    #[test]
    fn seven_configurations() {
        let labels: Vec<String> = all_configurations().iter().map(|c| c.labels()).collect();
        assert_eq!(labels, ["a", "b", "ab", "c", "ac", "bc", "abc"]);
    }
}
