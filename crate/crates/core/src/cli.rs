//! Command-line front end: `sweep` (default), `figure2` and `verify`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::output::{emit_csv, write_csv, GeometrySpec, RunConfig, RunManifest};
use crate::sorkin::{
    figure2_perturbations, kappa_curve, perturbation_sweep, KappaPoint, Normalizer,
    PerturbationKind, SorkinConfig,
};
use crate::source::SourceState;
use crate::sweep::{SweepSpec, SweepUnits};
use crate::verify::{run_verification, FaultInjection, VerificationReport, VerifyOptions};

#[derive(Debug, Parser)]
#[command(
    name = "sorkin",
    version,
    about = "Three-slit detection probabilities and the Sorkin parameter κ(d)",
    args_conflicts_with_subcommands = true
)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    #[command(flatten)]
    sweep: SweepArgs,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate all seven detection probabilities and κ(d) over a sweep (default).
    Sweep(SweepArgs),
    /// Emit the two perturbed-normalization κ curves of the sensitivity plot.
    Figure2(Figure2Args),
    /// Run the oracle and identity self-checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NormalizeArg {
    Unit,
    Pabc0,
}

#[derive(Debug, Default, Args)]
struct ModelArgs {
    /// Wavelength λ in meters.
    #[arg(long = "lambda", value_name = "M", allow_negative_numbers = true)]
    lambda: Option<f64>,
    /// Adjacent slit spacing l in meters; slits sit at {−l, 0, +l}.
    #[arg(long, value_name = "M", allow_negative_numbers = true)]
    slit_spacing: Option<f64>,
    /// Screen distance D in meters.
    #[arg(long = "screen", value_name = "M", allow_negative_numbers = true)]
    screen: Option<f64>,
    /// Source state: fock:<n>, coherent:<re>,<im> or thermal:<mean>.
    #[arg(long, value_name = "SPEC")]
    source: Option<String>,
    /// Weight n₁ on the single-slit terms.
    #[arg(long, allow_negative_numbers = true, conflicts_with = "n1_pct")]
    n1: Option<f64>,
    /// n₁ as a relative change of 1/3 in percent.
    #[arg(long, value_name = "PCT", allow_negative_numbers = true)]
    n1_pct: Option<f64>,
    /// Weight n₂ on the two-slit terms.
    #[arg(long, allow_negative_numbers = true, conflicts_with = "n2_pct")]
    n2: Option<f64>,
    /// n₂ as a relative change of 2/3 in percent.
    #[arg(long, value_name = "PCT", allow_negative_numbers = true)]
    n2_pct: Option<f64>,
    /// Detector sweep <min>:<max>:<steps>, meters unless --d-over-D.
    #[arg(long, value_name = "MIN:MAX:STEPS", allow_hyphen_values = true)]
    sweep: Option<String>,
    /// Interpret --sweep bounds as d/D.
    #[arg(long = "d-over-D")]
    d_over_screen: bool,
    /// Divisor for kappa_normalized.
    #[arg(long, value_enum)]
    normalize: Option<NormalizeArg>,
    /// Field scale |E|².
    #[arg(long, value_name = "E2", allow_negative_numbers = true)]
    field_amplitude: Option<f64>,
}

impl ModelArgs {
    fn is_empty(&self) -> bool {
        self.lambda.is_none()
            && self.slit_spacing.is_none()
            && self.screen.is_none()
            && self.source.is_none()
            && self.n1.is_none()
            && self.n1_pct.is_none()
            && self.n2.is_none()
            && self.n2_pct.is_none()
            && self.sweep.is_none()
            && !self.d_over_screen
            && self.normalize.is_none()
            && self.field_amplitude.is_none()
    }

    fn resolve(&self) -> Result<RunConfig> {
        let reference = GeometrySpec::reference();
        let geometry = GeometrySpec {
            wavelength: self.lambda.unwrap_or(reference.wavelength),
            slit_spacing: self.slit_spacing.unwrap_or(reference.slit_spacing),
            screen_distance: self.screen.unwrap_or(reference.screen_distance),
        };
        let source = match &self.source {
            Some(spec) => spec.parse()?,
            None => SourceState::Fock(1),
        };
        let adjusted = SorkinConfig::adjusted();
        let n1 = match (self.n1, self.n1_pct) {
            (Some(v), _) => v,
            (None, Some(p)) => adjusted.n1 * (1.0 + p / 100.0),
            (None, None) => adjusted.n1,
        };
        let n2 = match (self.n2, self.n2_pct) {
            (Some(v), _) => v,
            (None, Some(p)) => adjusted.n2 * (1.0 + p / 100.0),
            (None, None) => adjusted.n2,
        };
        let normalizer = match self.normalize {
            Some(NormalizeArg::Unit) => Normalizer::Unit,
            Some(NormalizeArg::Pabc0) | None => Normalizer::PAbcAtZero,
        };
        let sweep = match &self.sweep {
            Some(spec) => {
                let mut s: SweepSpec = spec.parse()?;
                if self.d_over_screen {
                    s.units = SweepUnits::DOverScreen;
                }
                s
            }
            None => SweepSpec::default_d_over_screen(),
        };
        let config = RunConfig {
            geometry,
            source,
            sorkin: SorkinConfig::new(n1, n2, normalizer)?,
            sweep,
            field_amplitude_sq: self.field_amplitude.unwrap_or(1.0),
        };
        config.validate()?;
        Ok(config)
    }
}

#[derive(Debug, Default, Args)]
struct SweepArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// CSV destination; stdout when absent.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Manifest destination; defaults to <out>.manifest.json when --out is given.
    #[arg(long, value_name = "PATH")]
    manifest_out: Option<PathBuf>,
    /// Re-run the configuration recorded in a manifest.
    #[arg(long, value_name = "PATH")]
    manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Figure2Args {
    #[command(flatten)]
    model: ModelArgs,
    /// Read the percentages as absolute offsets (+0.013) instead of relative (×1.013).
    #[arg(long)]
    absolute: bool,
    /// Directory receiving one CSV and one manifest per curve.
    #[arg(long, value_name = "DIR", default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Largest Fock photon number cross-checked against the oracle.
    #[arg(long = "nmax", default_value_t = 4)]
    n_max: u32,
    /// Perturb one analytic correlation entry by this amount.
    #[arg(long, hide = true, allow_negative_numbers = true)]
    inject_fault: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepJob {
    pub config: RunConfig,
    pub out: Option<PathBuf>,
    pub manifest_out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Figure2Job {
    pub config: RunConfig,
    pub kind: PerturbationKind,
    pub out_dir: PathBuf,
}

/// A validated command line.
#[derive(Debug, Clone, PartialEq)]
pub enum Invocation {
    Sweep(SweepJob),
    Figure2(Figure2Job),
    Verify(VerifyOptions),
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Usage(#[from] clap::Error),
    #[error(transparent)]
    Domain(#[from] Error),
}

/// Parses arguments, excluding the program name.
pub fn parse_args<I, T>(args: I) -> std::result::Result<Invocation, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv = std::iter::once(OsString::from("sorkin")).chain(args.into_iter().map(Into::into));
    let cli = Cli::try_parse_from(argv)?;
    Ok(match cli.command {
        None => Invocation::Sweep(sweep_job(cli.sweep)?),
        Some(Command::Sweep(args)) => Invocation::Sweep(sweep_job(args)?),
        Some(Command::Figure2(args)) => Invocation::Figure2(Figure2Job {
            config: args.model.resolve()?,
            kind: if args.absolute {
                PerturbationKind::Absolute
            } else {
                PerturbationKind::Relative
            },
            out_dir: args.out_dir,
        }),
        Some(Command::Verify(args)) => Invocation::Verify(VerifyOptions {
            n_max: args.n_max,
            fault: args
                .inject_fault
                .map(|delta| FaultInjection::CorrelationEntry { delta }),
        }),
    })
}

fn sweep_job(args: SweepArgs) -> std::result::Result<SweepJob, CliError> {
    let config = match &args.manifest {
        Some(path) => {
            if !args.model.is_empty() {
                return Err(CliError::Usage(clap::Error::raw(
                    clap::error::ErrorKind::ArgumentConflict,
                    "--manifest cannot be combined with model flags\n",
                )));
            }
            RunManifest::read(path)?.config
        }
        None => args.model.resolve()?,
    };
    let manifest_out = args
        .manifest_out
        .or_else(|| args.out.as_ref().map(|p| default_manifest_path(p)));
    Ok(SweepJob {
        config,
        out: args.out,
        manifest_out,
    })
}

fn default_manifest_path(csv: &Path) -> PathBuf {
    let mut name = csv.file_name().map(OsString::from).unwrap_or_default();
    name.push(".manifest.json");
    csv.with_file_name(name)
}

/// Evaluates the configured κ curve.
pub fn evaluate(config: &RunConfig) -> Result<Vec<KappaPoint>> {
    let geom = config.geometry.build()?;
    let sweep = config.sweep.coordinates(&geom);
    kappa_curve(
        &geom,
        &config.source,
        &config.sorkin,
        &sweep,
        &config.amplitude()?,
    )
}

pub fn run_sweep(job: &SweepJob) -> Result<Vec<KappaPoint>> {
    let points = evaluate(&job.config)?;
    let screen = job.config.geometry.screen_distance;
    match &job.out {
        Some(path) => emit_csv(&points, screen, path)?,
        None => {
            let stdout = std::io::stdout();
            write_csv(&points, screen, stdout.lock()).map_err(|source| Error::Csv {
                path: "<stdout>".into(),
                source,
            })?;
        }
    }
    if let Some(path) = &job.manifest_out {
        RunManifest::new(job.config.clone()).write(path)?;
    }
    Ok(points)
}

/// File stem of one sensitivity curve, e.g. `figure2_n1_plus_1.3pct`.
pub fn figure2_stem(dn1: f64, kind: PerturbationKind) -> String {
    match kind {
        PerturbationKind::Relative => format!("figure2_n1_plus_{}pct", dn1 * 100.0),
        PerturbationKind::Absolute => format!("figure2_n1_plus_{dn1}"),
    }
}

/// Writes both sensitivity curves; returns the CSV paths in curve order.
pub fn run_figure2(job: &Figure2Job) -> Result<Vec<PathBuf>> {
    let geom = job.config.geometry.build()?;
    let sweep = job.config.sweep.coordinates(&geom);
    let curves = perturbation_sweep(
        &geom,
        &job.config.source,
        &job.config.sorkin,
        &figure2_perturbations(job.kind),
        &sweep,
        &job.config.amplitude()?,
    )?;
    std::fs::create_dir_all(&job.out_dir).map_err(|source| Error::Io {
        path: job.out_dir.display().to_string(),
        source,
    })?;
    let mut paths = Vec::with_capacity(curves.len());
    for curve in curves {
        let stem = figure2_stem(curve.perturbation.dn1, job.kind);
        let csv_path = job.out_dir.join(format!("{stem}.csv"));
        emit_csv(&curve.points, geom.screen_distance(), &csv_path)?;
        let config = RunConfig {
            sorkin: curve.config,
            ..job.config.clone()
        };
        RunManifest::new(config).write(&default_manifest_path(&csv_path))?;
        paths.push(csv_path);
    }
    Ok(paths)
}

pub fn run_verify(opts: &VerifyOptions, mut report_to: impl Write) -> Result<VerificationReport> {
    let report = run_verification(opts)?;
    writeln!(report_to, "{report}").map_err(|source| Error::Io {
        path: "<report>".into(),
        source,
    })?;
    Ok(report)
}
