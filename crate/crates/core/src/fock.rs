//! Truncated multimode Fock space with explicit ladder operators.
//!
//! This is the independent check on [`crate::source::correlation_matrix`]:
//! slit-mode states are built occupation by occupation and moments are taken
//! by acting with `a_i`, `a_j†` on the basis, never through the closed forms.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::source::check_splitting_count;

/// Default truncation of the total photon number.
pub const DEFAULT_N_MAX: u32 = 8;

/// Largest accepted truncation; keeps the exact integer arithmetic in `u128`.
pub const MAX_N_MAX: u32 = 64;

type Occupation = Vec<u32>;

/// Sparse state vector over occupation tuples `(k_1, …, k_N)` with `Σ k_i ≤ n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockStateVector {
    modes: usize,
    n_max: u32,
    amplitudes: BTreeMap<Occupation, Complex64>,
}

impl FockStateVector {
    fn empty(modes: usize, n_max: u32) -> Result<Self> {
        if n_max > MAX_N_MAX {
            return Err(Error::Truncation {
                n: n_max,
                n_max: MAX_N_MAX,
            });
        }
        check_splitting_count(modes)?;
        Ok(Self {
            modes,
            n_max,
            amplitudes: BTreeMap::new(),
        })
    }

    pub fn vacuum(modes: usize, n_max: u32) -> Result<Self> {
        let mut v = Self::empty(modes, n_max)?;
        v.amplitudes
            .insert(vec![0; modes], Complex64::new(1.0, 0.0));
        Ok(v)
    }

    /// Builds a state from explicit basis amplitudes.
    pub fn from_amplitudes(
        modes: usize,
        n_max: u32,
        amplitudes: impl IntoIterator<Item = (Vec<u32>, Complex64)>,
    ) -> Result<Self> {
        let mut v = Self::empty(modes, n_max)?;
        for (occ, amp) in amplitudes {
            if occ.len() != modes {
                return Err(Error::ModeOutOfRange {
                    mode: occ.len(),
                    modes,
                });
            }
            let total: u32 = occ.iter().sum();
            if total > n_max {
                return Err(Error::Truncation { n: total, n_max });
            }
            *v.amplitudes.entry(occ).or_default() += amp;
        }
        Ok(v)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn amplitude(&self, occupation: &[u32]) -> Complex64 {
        self.amplitudes.get(occupation).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[u32], Complex64)> {
        self.amplitudes.iter().map(|(k, v)| (k.as_slice(), *v))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes
            .iter()
            .filter_map(|(occ, a)| other.amplitudes.get(occ).map(|b| a.conj() * b))
            .sum()
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode < self.modes {
            Ok(())
        } else {
            Err(Error::ModeOutOfRange {
                mode,
                modes: self.modes,
            })
        }
    }

    /// `a_mode |ψ⟩`: `a|k⟩ = √k |k−1⟩`.
    pub fn annihilate(&self, mode: usize) -> Result<Self> {
        self.check_mode(mode)?;
        let mut out = Self {
            amplitudes: BTreeMap::new(),
            ..*self
        };
        for (occ, amp) in &self.amplitudes {
            let k = occ[mode];
            if k == 0 {
                continue;
            }
            let mut lowered = occ.clone();
            lowered[mode] = k - 1;
            *out.amplitudes.entry(lowered).or_default() += amp * f64::from(k).sqrt();
        }
        Ok(out)
    }

    /// `a_mode† |ψ⟩`: `a†|k⟩ = √(k+1) |k+1⟩`. Fails if any component would
    /// leave the truncated space.
    pub fn create(&self, mode: usize) -> Result<Self> {
        self.check_mode(mode)?;
        let mut out = Self {
            amplitudes: BTreeMap::new(),
            ..*self
        };
        for (occ, amp) in &self.amplitudes {
            let total: u32 = occ.iter().sum();
            if total >= self.n_max {
                return Err(Error::Truncation {
                    n: total + 1,
                    n_max: self.n_max,
                });
            }
            let mut raised = occ.clone();
            raised[mode] += 1;
            *out.amplitudes.entry(raised).or_default() += amp * f64::from(occ[mode] + 1).sqrt();
        }
        Ok(out)
    }

    fn scaled(mut self, factor: Complex64) -> Self {
        self.amplitudes.values_mut().for_each(|a| *a *= factor);
        self
    }

    fn add_assign(&mut self, other: &Self) {
        for (occ, amp) in &other.amplitudes {
            *self.amplitudes.entry(occ.clone()).or_default() += amp;
        }
    }

    fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(&other.clone().scaled(Complex64::new(-1.0, 0.0)));
        out
    }
}

/// Enumerates every occupation tuple over `modes` modes with total exactly `n`.
fn occupations(modes: usize, n: u32) -> Vec<Occupation> {
    fn rec(remaining_modes: usize, n: u32, prefix: &mut Occupation, out: &mut Vec<Occupation>) {
        if remaining_modes == 1 {
            prefix.push(n);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=n).rev() {
            prefix.push(k);
            rec(remaining_modes - 1, n - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(modes, n, &mut Vec::with_capacity(modes), &mut out);
    out
}

fn binomial(n: u32, k: u32) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1))
}

/// `n! / (k_1! ⋯ k_N!)` as a product of binomials, exact in integers.
fn multinomial(occupation: &[u32]) -> u128 {
    let mut total = 0u32;
    let mut coef = 1u128;
    for &k in occupation {
        total += k;
        coef *= binomial(total, k);
    }
    coef
}

/// `(a_1† + ⋯ + a_N†)^n / √(N^n n!) |0⟩` expanded with the multinomial theorem:
/// the amplitude on `(k_1, …, k_N)` is `√(n!/(k_1!⋯k_N!)) / √(N^n)`.
pub fn expand_fock_source(n: u32, modes: usize, n_max: u32) -> Result<FockStateVector> {
    let mut state = FockStateVector::empty(modes, n_max)?;
    if n > n_max {
        return Err(Error::Truncation { n, n_max });
    }
    let denom = (modes as u128).pow(n) as f64;
    for occ in occupations(modes, n) {
        let amp = (multinomial(&occ) as f64 / denom).sqrt();
        state.amplitudes.insert(occ, Complex64::new(amp, 0.0));
    }
    Ok(state)
}

/// `⟨ψ| a_i† a_j |ψ⟩`, with `a_i† a_j` applied to `|ψ⟩` operator by operator.
pub fn oracle_expectation(state: &FockStateVector, i: usize, j: usize) -> Result<Complex64> {
    state.check_mode(i)?;
    let lowered = state.annihilate(j)?;
    let hopped = lowered.create(i)?;
    Ok(state.inner(&hopped))
}

/// `‖(a_i a_j† − a_j† a_i − δ_ij)|ψ⟩‖`; needs headroom of one photon below `n_max`.
pub fn commutator_defect(state: &FockStateVector, i: usize, j: usize) -> Result<f64> {
    let forward = state.create(j)?.annihilate(i)?;
    let backward = state.annihilate(i)?.create(j)?;
    let mut diff = forward.sub(&backward);
    if i == j {
        diff = diff.sub(state);
    }
    Ok(diff.norm_sqr().sqrt())
}

/// Square matrix `U` relating source-side modes to slit modes,
/// `b_k = Σ_i U[k][i] a_i`. Row 0 is the source mode `s`; the remaining rows
/// are local modes held in the vacuum.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeTransform {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ModeTransform {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn row(&self, row: usize) -> &[Complex64] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    /// `max |(U U†)_{kl} − δ_kl|`.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for k in 0..n {
            for l in 0..n {
                let dot: Complex64 = (0..n).map(|m| self.get(k, m) * self.get(l, m).conj()).sum();
                let target = if k == l { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }
}

/// Completes `s = (1/√N) Σ a_i` to a unitary with the discrete Fourier matrix,
/// `U[k][j] = e^{2πi kj/N} / √N`. For `N = 2` this gives `s_V = (a − b)/√2`.
pub fn unitary_completion(splitting_count: usize) -> Result<ModeTransform> {
    check_splitting_count(splitting_count)?;
    let n = splitting_count;
    let scale = (n as f64).sqrt().recip();
    let mut entries = Vec::with_capacity(n * n);
    for k in 0..n {
        for j in 0..n {
            let m = (k * j) % n;
            let phase = if m == 0 {
                Complex64::new(1.0, 0.0)
            } else if 2 * m == n {
                Complex64::new(-1.0, 0.0)
            } else {
                Complex64::from_polar(1.0, TAU * m as f64 / n as f64)
            };
            entries.push(phase * scale);
        }
    }
    Ok(ModeTransform { dim: n, entries })
}

/// `(b_0†)^n / √n! |0⟩` built by applying the source creation operator
/// `b_0† = Σ_i conj(U[0][i]) a_i†` to the vacuum `n` times.
pub fn fock_state_from_transform(
    transform: &ModeTransform,
    n: u32,
    n_max: u32,
) -> Result<FockStateVector> {
    let mut state = FockStateVector::vacuum(transform.dim(), n_max)?;
    if n > n_max {
        return Err(Error::Truncation { n, n_max });
    }
    let row = transform.row(0);
    for step in 1..=n {
        let mut next = FockStateVector::empty(transform.dim(), n_max)?;
        for (i, coef) in row.iter().enumerate() {
            next.add_assign(&state.create(i)?.scaled(coef.conj()));
        }
        state = next.scaled(Complex64::new(f64::from(step).sqrt().recip(), 0.0));
    }
    Ok(state)
}

/// `⟨b_k† b_l⟩ = Σ_{ij} conj(U[k][i]) U[l][j] ⟨a_i† a_j⟩` from oracle moments.
pub fn source_mode_expectation(
    state: &FockStateVector,
    transform: &ModeTransform,
    k: usize,
    l: usize,
) -> Result<Complex64> {
    let n = transform.dim();
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            total +=
                transform.get(k, i).conj() * transform.get(l, j) * oracle_expectation(state, i, j)?;
        }
    }
    Ok(total)
}
