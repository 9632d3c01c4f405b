//! Run configuration, JSON run manifest, and CSV emission.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::detection::DetectionAmplitudeConfig;
use crate::error::{Error, Result};
use crate::geometry::SlitGeometry;
use crate::sorkin::{KappaPoint, SorkinConfig};
use crate::source::SourceState;
use crate::sweep::SweepSpec;

pub const CSV_HEADER: [&str; 11] = [
    "d",
    "d_over_D",
    "P_a",
    "P_b",
    "P_c",
    "P_ab",
    "P_ac",
    "P_bc",
    "P_abc",
    "kappa",
    "kappa_normalized",
];

/// Three-slit layout `{−l, 0, +l}` in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometrySpec {
    pub wavelength: f64,
    pub slit_spacing: f64,
    pub screen_distance: f64,
}

impl GeometrySpec {
    pub fn reference() -> Self {
        Self {
            wavelength: SlitGeometry::REFERENCE_WAVELENGTH,
            slit_spacing: SlitGeometry::REFERENCE_SLIT_SPACING,
            screen_distance: SlitGeometry::REFERENCE_SCREEN_DISTANCE,
        }
    }

    pub fn build(&self) -> Result<SlitGeometry> {
        SlitGeometry::three_slit(self.slit_spacing, self.screen_distance, self.wavelength)
    }
}

/// Everything needed to reproduce one sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub geometry: GeometrySpec,
    pub source: SourceState,
    pub sorkin: SorkinConfig,
    pub sweep: SweepSpec,
    pub field_amplitude_sq: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            geometry: GeometrySpec::reference(),
            source: SourceState::Fock(1),
            sorkin: SorkinConfig::adjusted(),
            sweep: SweepSpec::default_d_over_screen(),
            field_amplitude_sq: 1.0,
        }
    }
}

impl RunConfig {
    pub fn amplitude(&self) -> Result<DetectionAmplitudeConfig> {
        DetectionAmplitudeConfig::new(self.field_amplitude_sq)
    }

    /// Re-applies every constructor check; used after deserialization.
    pub fn validate(&self) -> Result<()> {
        self.geometry.build()?;
        self.amplitude()?;
        SorkinConfig::new(self.sorkin.n1, self.sorkin.n2, self.sorkin.normalizer)?;
        SweepSpec::new(
            self.sweep.min,
            self.sweep.max,
            self.sweep.steps,
            self.sweep.units,
        )?;
        if let SourceState::Thermal(m) = self.source {
            SourceState::thermal(m)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub timestamp: String,
    #[serde(flatten)]
    pub config: RunConfig,
}

impl RunManifest {
    pub fn new(config: RunConfig) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            config,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let manifest: Self = serde_json::from_str(s)?;
        manifest.config.validate()?;
        Ok(manifest)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| io_err(path, source))?;
        Self::from_json(&text)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|source| io_err(path, source))
    }
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

/// 17 significant digits, `.` decimal separator.
pub fn format_value(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes the CSV table for `points` to `writer`.
pub fn write_csv<W: Write>(
    points: &[KappaPoint],
    screen_distance: f64,
    writer: W,
) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CSV_HEADER)?;
    for p in points {
        let pr = &p.probabilities;
        let d = p.d.value();
        w.write_record(
            [
                d,
                d / screen_distance,
                pr.a,
                pr.b,
                pr.c,
                pr.ab,
                pr.ac,
                pr.bc,
                pr.abc,
                p.kappa,
                p.kappa_normalized,
            ]
            .map(format_value),
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the CSV table to `destination`.
pub fn emit_csv(points: &[KappaPoint], screen_distance: f64, destination: &Path) -> Result<()> {
    if points.is_empty() {
        return Err(Error::InvalidSweep("no points to write".into()));
    }
    let path = destination.display().to_string();
    let file = File::create(destination).map_err(|source| Error::Io {
        path: path.clone(),
        source,
    })?;
    write_csv(points, screen_distance, BufWriter::new(file))
        .map_err(|source| Error::Csv { path, source })
}
