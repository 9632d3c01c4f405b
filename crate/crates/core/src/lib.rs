//! Single-photon detection in one-, two- and three-slit Young interferometers
//! and the Sorkin parameter built from those detection probabilities.
//!
//! - [`geometry`]: exact path lengths and phases for a planar slit screen.
//! - [`source`]: source states and the slit-mode correlation matrix.
//! - [`fock`]: brute-force truncated Fock space used as an independent oracle.
//! - [`detection`]: Glauber detection probabilities.
//! - [`sorkin`]: the amplitude identity and the physical κ(d).
//! - [`sweep`], [`output`], [`cli`], [`verify`]: sweeps, CSV/manifest I/O and
//!   the command-line front end.

pub mod cli;
pub mod detection;
pub mod error;
pub mod fock;
pub mod geometry;
pub mod output;
pub mod sorkin;
pub mod source;
pub mod sweep;
pub mod verify;

pub use detection::{
    detection_curve, detection_probability, DetectionAmplitudeConfig, DetectionProbability,
};
pub use error::{Error, Result};
pub use geometry::{DetectorCoordinate, SlitGeometry};
pub use sorkin::{
    kappa_curve, kappa_identity, kappa_physical, perturbation_sweep, KappaPoint, Normalizer,
    Perturbation, PerturbationKind, SlitProbabilities, SorkinConfig,
};
pub use source::{
    correlation_matrix, split_coherent, split_mode_relation, CorrelationMatrix, SlitConfiguration,
    SourceState,
};
pub use sweep::{SweepSpec, SweepUnits};
