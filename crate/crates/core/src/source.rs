//! Mono-chromatic source states and the slit-mode correlation matrix.
//!
//! A lossless, symmetric slit screen maps the source mode onto the open
//! slits as `s = (1/√N) Σ a_i`. Any remaining orthogonal combinations are
//! local modes left in the vacuum, so every second-order moment of the slit
//! modes is fixed by the mean photon number of the source alone:
//! `⟨a_i† a_j⟩ = ⟨n⟩/N` for all open `i, j`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest number of simultaneously open slits.
pub const MAX_OPEN_SLITS: usize = 3;

const SLIT_LABELS: [char; MAX_OPEN_SLITS] = ['a', 'b', 'c'];

/// Prepared single-mode source state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SourceState {
    /// Photon-number eigenstate `|n⟩`.
    Fock(u32),
    /// Glauber coherent state `|α⟩`.
    Coherent(Complex64),
    /// Thermal (chaotic) state with the given mean photon number.
    Thermal(f64),
}

impl SourceState {
    pub fn fock(n: u32) -> Self {
        Self::Fock(n)
    }

    pub fn coherent(alpha: Complex64) -> Result<Self> {
        if !(alpha.re.is_finite() && alpha.im.is_finite()) {
            return Err(Error::InvalidSource(format!(
                "coherent amplitude {alpha} is not finite"
            )));
        }
        Ok(Self::Coherent(alpha))
    }

    pub fn thermal(mean: f64) -> Result<Self> {
        if !(mean.is_finite() && mean >= 0.0) {
            return Err(Error::InvalidSource(format!(
                "thermal mean photon number must be finite and non-negative, got {mean}"
            )));
        }
        Ok(Self::Thermal(mean))
    }

    /// ⟨n⟩ = ⟨s† s⟩.
    pub fn mean_photon_number(&self) -> f64 {
        match *self {
            Self::Fock(n) => f64::from(n),
            Self::Coherent(alpha) => alpha.norm_sqr(),
            Self::Thermal(mean) => mean,
        }
    }
}

impl fmt::Display for SourceState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Fock(n) => write!(f, "fock:{n}"),
            Self::Coherent(a) => write!(f, "coherent:{:?},{:?}", a.re, a.im),
            Self::Thermal(m) => write!(f, "thermal:{m:?}"),
        }
    }
}

impl FromStr for SourceState {
    type Err = Error;

    /// Parses `fock:<n>`, `coherent:<re>,<im>` or `thermal:<mean>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::InvalidSource(format!("{s:?}: {why}"));
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| bad("expected <kind>:<params>"))?;
        let float = |v: &str| v.trim().parse::<f64>().map_err(|e| bad(&e.to_string()));
        match kind.trim() {
            "fock" => args
                .trim()
                .parse::<u32>()
                .map(Self::Fock)
                .map_err(|e| bad(&format!("photon number: {e}"))),
            "coherent" => {
                let (re, im) = args
                    .split_once(',')
                    .ok_or_else(|| bad("expected <re>,<im>"))?;
                Self::coherent(Complex64::new(float(re)?, float(im)?))
            }
            "thermal" => Self::thermal(float(args)?),
            other => Err(bad(&format!("unknown source kind {other:?}"))),
        }
    }
}

impl Serialize for SourceState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SourceState {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The set of open slits, as sorted slit indices (`0 = a`, `1 = b`, `2 = c`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SlitConfiguration {
    open: Vec<usize>,
}

impl SlitConfiguration {
    pub fn new(mut open: Vec<usize>) -> Result<Self> {
        open.sort_unstable();
        open.dedup();
        if open.is_empty() {
            return Err(Error::InvalidConfiguration("no open slits".into()));
        }
        if open.len() > MAX_OPEN_SLITS {
            return Err(Error::InvalidConfiguration(format!(
                "{} open slits, at most {MAX_OPEN_SLITS} supported",
                open.len()
            )));
        }
        if let Some(&i) = open.iter().find(|&&i| i >= MAX_OPEN_SLITS) {
            return Err(Error::InvalidConfiguration(format!(
                "slit index {i} has no label"
            )));
        }
        Ok(Self { open })
    }

    /// Parses slit labels such as `"a"`, `"bc"` or `"abc"`.
    pub fn from_labels(labels: &str) -> Result<Self> {
        let open = labels
            .chars()
            .map(|ch| {
                SLIT_LABELS
                    .iter()
                    .position(|&l| l == ch.to_ascii_lowercase())
                    .ok_or_else(|| {
                        Error::InvalidConfiguration(format!("unknown slit label {ch:?}"))
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(open)
    }

    pub fn all_open() -> Self {
        Self {
            open: (0..MAX_OPEN_SLITS).collect(),
        }
    }

    pub fn open_slits(&self) -> &[usize] {
        &self.open
    }

    /// Number of open slits `N`.
    pub fn splitting_count(&self) -> usize {
        self.open.len()
    }

    pub fn labels(&self) -> String {
        self.open.iter().map(|&i| SLIT_LABELS[i]).collect()
    }
}

/// Coefficients of `s = Σ c_i a_i` over `N` identical open slits: `c_i = 1/√N`.
pub fn split_mode_relation(splitting_count: usize) -> Result<Vec<f64>> {
    check_splitting_count(splitting_count)?;
    let c = (splitting_count as f64).sqrt().recip();
    Ok(vec![c; splitting_count])
}

/// Per-slit coherent amplitudes: `|α⟩ = ⊗_i |α/√N⟩_i`.
pub fn split_coherent(alpha: Complex64, splitting_count: usize) -> Result<Vec<Complex64>> {
    Ok(split_mode_relation(splitting_count)?
        .into_iter()
        .map(|c| alpha * c)
        .collect())
}

pub(crate) fn check_splitting_count(n: usize) -> Result<()> {
    if (1..=MAX_OPEN_SLITS).contains(&n) {
        Ok(())
    } else {
        Err(Error::SplittingCount {
            got: n,
            max: MAX_OPEN_SLITS,
        })
    }
}

/// Hermitian matrix `C[i][j] = ⟨a_i† a_j⟩` over the open slits.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl CorrelationMatrix {
    /// Builds a matrix from its upper triangle; the lower triangle is the
    /// conjugate mirror and the diagonal is forced real.
    pub fn from_upper(dim: usize, mut upper: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(upper(i, i).re, 0.0);
            for j in i + 1..dim {
                let v = upper(i, j);
                entries[i * dim + j] = v;
                entries[j * dim + i] = v.conj();
            }
        }
        Self { dim, entries }
    }

    /// Raw row-major constructor; no structure is enforced.
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::InvalidConfiguration(format!(
                "{} entries for a {dim}x{dim} correlation matrix",
                entries.len()
            )));
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i).re).sum()
    }

    pub fn max_hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Smallest principal minor. A Hermitian matrix is positive semidefinite
    /// iff all of its principal minors are non-negative.
    pub fn min_principal_minor(&self) -> f64 {
        let n = self.dim;
        (1u32..(1 << n))
            .map(|mask| {
                let idx: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
                determinant(
                    &idx.iter()
                        .flat_map(|&i| idx.iter().map(move |&j| (i, j)))
                        .map(|(i, j)| self.get(i, j))
                        .collect::<Vec<_>>(),
                    idx.len(),
                )
                .re
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_positive_semidefinite(&self, tol: f64) -> bool {
        self.min_principal_minor() >= -tol
    }
}

fn determinant(m: &[Complex64], n: usize) -> Complex64 {
    match n {
        1 => m[0],
        2 => m[0] * m[3] - m[1] * m[2],
        3 => {
            m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6])
                + m[2] * (m[3] * m[7] - m[4] * m[6])
        }
        _ => unreachable!("correlation matrices are at most 3x3"),
    }
}

/// `⟨a_i† a_j⟩` for the open slits of `config`.
///
/// Fock and thermal sources are handled through the mode relation, with the
/// auxiliary modes in the vacuum: `⟨a_i† a_j⟩ = c_i c_j ⟨s† s⟩`. A coherent
/// source factorizes into per-slit coherent states, giving `α_i* α_j`. Every
/// state with a P-representation reduces to its mean photon number in the
/// same way, so no sampling over `𝒫(α, α*)` is needed.
pub fn correlation_matrix(state: &SourceState, config: &SlitConfiguration) -> CorrelationMatrix {
    let n = config.splitting_count();
    let coeffs = split_mode_relation(n).expect("configuration guarantees 1..=3 open slits");
    match *state {
        SourceState::Coherent(alpha) => {
            let amps = split_coherent(alpha, n).expect("valid splitting count");
            CorrelationMatrix::from_upper(n, |i, j| amps[i].conj() * amps[j])
        }
        SourceState::Fock(_) | SourceState::Thermal(_) => {
            let mean = state.mean_photon_number();
            CorrelationMatrix::from_upper(n, |i, j| {
                Complex64::new(coeffs[i] * coeffs[j] * mean, 0.0)
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn assert_all_entries(c: &CorrelationMatrix, expected: f64, tol: f64) {
        for v in c.entries() {
            assert!(
                (v.re - expected).abs() <= tol && v.im.abs() <= tol,
                "{v} vs {expected}"
            );
        }
    }

    #[test]
    fn split_relation_values() {
        let two = split_mode_relation(2).unwrap();
        assert!((two[0] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(two[0], two[1]);
        assert_eq!(split_mode_relation(1).unwrap(), vec![1.0]);
        let three: f64 = split_mode_relation(3).unwrap().iter().map(|c| c * c).sum();
        assert!((three - 1.0).abs() < 1e-15);
        assert!(split_mode_relation(0).is_err());
        assert!(split_mode_relation(4).is_err());
    }

    #[test]
    fn fock_three_in_three_slits_is_all_ones() {
        let c = correlation_matrix(&SourceState::Fock(3), &SlitConfiguration::all_open());
        assert_eq!(c.dim(), 3);
        assert_all_entries(&c, 1.0, 1e-15);
    }

    #[test]
    fn vacuum_gives_zero_matrix() {
        for labels in ["a", "bc", "abc"] {
            let cfg = SlitConfiguration::from_labels(labels).unwrap();
            let c = correlation_matrix(&SourceState::Fock(0), &cfg);
            assert!(c.entries().iter().all(|v| *v == Complex64::new(0.0, 0.0)));
        }
    }

    #[test]
    fn coherent_two_slits() {
        let alpha = Complex64::new(2f64.sqrt(), 0.0);
        let c = correlation_matrix(
            &SourceState::coherent(alpha).unwrap(),
            &SlitConfiguration::from_labels("ab").unwrap(),
        );
        assert_all_entries(&c, 1.0, 1e-15);
    }

    #[test]
    fn split_coherent_values() {
        let a = split_coherent(Complex64::new(2f64.sqrt(), 0.0), 2).unwrap();
        for v in &a {
            assert!((v.re - 1.0).abs() < 1e-15 && v.im == 0.0);
        }
        assert!(split_coherent(Complex64::new(0.0, 0.0), 3)
            .unwrap()
            .iter()
            .all(|v| v.norm() == 0.0));
    }

    #[test]
    fn source_spec_parsing() {
        assert_eq!(
            "fock:4".parse::<SourceState>().unwrap(),
            SourceState::Fock(4)
        );
        assert_eq!(
            "coherent:1.5,-0.5".parse::<SourceState>().unwrap(),
            SourceState::Coherent(Complex64::new(1.5, -0.5))
        );
        assert_eq!(
            "thermal:4".parse::<SourceState>().unwrap(),
            SourceState::Thermal(4.0)
        );
        for bad in [
            "fock:-1",
            "fock:1.5",
            "coherent:1",
            "thermal:-2",
            "laser:1",
            "fock",
            "thermal:nan",
        ] {
            assert!(bad.parse::<SourceState>().is_err(), "{bad}");
        }
        for s in [
            SourceState::Fock(7),
            SourceState::Coherent(Complex64::new(0.1, 1e-7)),
            SourceState::Thermal(0.3),
        ] {
            assert_eq!(s.to_string().parse::<SourceState>().unwrap(), s);
        }
    }

    #[test]
    fn configuration_labels() {
        let c = SlitConfiguration::from_labels("ca").unwrap();
        assert_eq!(c.open_slits(), &[0, 2]);
        assert_eq!(c.labels(), "ac");
        assert!(SlitConfiguration::from_labels("").is_err());
        assert!(SlitConfiguration::from_labels("ad").is_err());
        assert!(SlitConfiguration::new(vec![]).is_err());
        assert!(SlitConfiguration::new(vec![0, 1, 2, 3]).is_err());
    }

    #[test]
    fn psd_check_detects_indefinite_matrix() {
        let m = CorrelationMatrix::from_upper(2, |i, j| {
            Complex64::new(if i == j { 1.0 } else { 2.0 }, 0.0)
        });
        assert!(!m.is_positive_semidefinite(1e-12));
    }

    fn any_state() -> impl Strategy<Value = SourceState> {
        prop_oneof![
            (0u32..50).prop_map(SourceState::Fock),
            (-5.0f64..5.0, -5.0f64..5.0)
                .prop_map(|(r, i)| SourceState::Coherent(Complex64::new(r, i))),
            (0.0f64..30.0).prop_map(SourceState::Thermal),
        ]
    }

    fn any_config() -> impl Strategy<Value = SlitConfiguration> {
        prop::sample::select(vec!["a", "b", "c", "ab", "ac", "bc", "abc"])
            .prop_map(|l| SlitConfiguration::from_labels(l).unwrap())
    }

    proptest! {
        #[test]
        fn correlation_invariants(state in any_state(), cfg in any_config()) {
            let c = correlation_matrix(&state, &cfg);
            let mean = state.mean_photon_number();
            let tol = 1e-12 * mean.max(1.0);
            prop_assert_eq!(c.max_hermiticity_defect(), 0.0);
            prop_assert!((c.trace() - mean).abs() <= tol);
            prop_assert!(c.is_positive_semidefinite(tol * mean.max(1.0)));
            let expected = mean / cfg.splitting_count() as f64;
            for v in c.entries() {
                prop_assert!((v.re - expected).abs() <= tol && v.im.abs() <= tol);
            }
        }

        #[test]
        fn source_independence(n in 0u32..40, phase in 0.0f64..std::f64::consts::TAU, cfg in any_config()) {
            let mean = f64::from(n);
            let fock = correlation_matrix(&SourceState::Fock(n), &cfg);
            let coh = correlation_matrix(&SourceState::Coherent(Complex64::from_polar(mean.sqrt(), phase)), &cfg);
            let th = correlation_matrix(&SourceState::Thermal(mean), &cfg);
            for k in 0..fock.entries().len() {
                prop_assert!((fock.entries()[k] - coh.entries()[k]).norm() <= 1e-12 * mean.max(1.0));
                prop_assert_eq!(fock.entries()[k], th.entries()[k]);
            }
        }

        #[test]
        fn split_coherent_preserves_norm(re in -10.0f64..10.0, im in -10.0f64..10.0, n in 1usize..=3) {
            let alpha = Complex64::new(re, im);
            let total: f64 = split_coherent(alpha, n).unwrap().iter().map(|a| a.norm_sqr()).sum();
            prop_assert!((total - alpha.norm_sqr()).abs() <= 1e-12 * alpha.norm_sqr().max(1.0));
        }
    }
}
