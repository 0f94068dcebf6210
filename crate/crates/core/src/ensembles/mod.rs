//! Gaussian random-matrix ensembles and spacing extraction.
//!
//! Entry conventions (variance of each independent real component):
//!
//! | class | diagonal | off-diagonal parts |
//! |-------|----------|--------------------|
//! | GOE   | 1        | 1/2                |
//! | GUE   | 1/2      | 1/4 (re, im)       |
//! | GSE   | 1/4      | 1/8 (four parts)   |
//!
//! With these choices every ensemble has semicircle radius `√(2n)` and the
//! joint entry density is proportional to `exp(−β/2 · Tr X²)`, with the
//! quaternion trace taken as the real part (half the complex-embedding trace).

pub mod eigen;
mod spacings;

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
pub use crate::laws::EnsembleClass;
use crate::math;
use crate::rng::StreamRng;

pub use spacings::{
    extract_spacings, middle_half, monte_carlo_spacings, pool_trials, run_trial, sample_levels,
    semicircle_cdf, semicircle_radius, unfold, ExtractionMode, Levels, MonteCarloRun, TrialOutput,
};

/// Relative tolerance for grouping Kramers-degenerate pairs.
pub const PAIR_TOLERANCE: f64 = 1e-8;

/// An ensemble class together with the matrix order `n ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnsembleSpec {
    class: EnsembleClass,
    n: usize,
}

impl EnsembleSpec {
    /// For [`EnsembleClass::Poisson`], `n` is the number of uncorrelated levels.
    pub fn new(class: EnsembleClass, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(alloc::format!(
                "matrix order must be at least 2, got {n}"
            )));
        }
        Ok(EnsembleSpec { class, n })
    }

    pub fn class(&self) -> EnsembleClass {
        self.class
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Standard deviation of a diagonal entry.
    pub fn diagonal_sd(&self) -> f64 {
        match self.class {
            EnsembleClass::Poisson | EnsembleClass::Goe => 1.0,
            EnsembleClass::Gue => FRAC_1_SQRT_2,
            EnsembleClass::Gse => 0.5,
        }
    }

    /// Standard deviation of each real part of an off-diagonal entry.
    pub fn off_diagonal_sd(&self) -> f64 {
        match self.class {
            EnsembleClass::Poisson | EnsembleClass::Goe => FRAC_1_SQRT_2,
            EnsembleClass::Gue => 0.5,
            EnsembleClass::Gse => 0.5 * FRAC_1_SQRT_2,
        }
    }
}

/// One draw from an ensemble, stored as independent entries only.
///
/// Off-diagonal vectors hold the strict upper triangle row by row.
#[derive(Debug, Clone, PartialEq)]
pub enum SampledMatrix {
    Real {
        n: usize,
        diag: Vec<f64>,
        upper: Vec<f64>,
    },
    Complex {
        n: usize,
        diag: Vec<f64>,
        upper: Vec<Complex64>,
    },
    /// Quaternion entries `z + w j`; `z` forms a Hermitian matrix and `w`
    /// an antisymmetric one.
    Quaternion {
        n: usize,
        diag: Vec<f64>,
        z_upper: Vec<Complex64>,
        w_upper: Vec<Complex64>,
    },
}

/// An independent real component together with its sampling standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntryDraw {
    pub value: f64,
    pub sd: f64,
}

/// Draws one matrix. Entries are consumed diagonal first, then the upper
/// triangle row by row, real parts before imaginary parts.
pub fn sample_matrix(spec: &EnsembleSpec, rng: &mut StreamRng) -> Result<SampledMatrix> {
    let n = spec.n;
    let pairs = n * (n - 1) / 2;
    let dsd = spec.diagonal_sd();
    let osd = spec.off_diagonal_sd();
    let diag: Vec<f64> = (0..n).map(|_| rng.gaussian(dsd)).collect();
    let complex = |rng: &mut StreamRng| {
        let re = rng.gaussian(osd);
        Complex64::new(re, rng.gaussian(osd))
    };
    Ok(match spec.class {
        EnsembleClass::Poisson => {
            return Err(Error::Unsupported(
                "the Poisson class has no matrix model; use sample_levels".into(),
            ))
        }
        EnsembleClass::Goe => SampledMatrix::Real {
            n,
            diag,
            upper: (0..pairs).map(|_| rng.gaussian(osd)).collect(),
        },
        EnsembleClass::Gue => SampledMatrix::Complex {
            n,
            diag,
            upper: (0..pairs).map(|_| complex(rng)).collect(),
        },
        EnsembleClass::Gse => {
            let mut z_upper = Vec::with_capacity(pairs);
            let mut w_upper = Vec::with_capacity(pairs);
            for _ in 0..pairs {
                z_upper.push(complex(rng));
                w_upper.push(complex(rng));
            }
            SampledMatrix::Quaternion {
                n,
                diag,
                z_upper,
                w_upper,
            }
        }
    })
}

fn upper_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

impl SampledMatrix {
    pub fn class(&self) -> EnsembleClass {
        match self {
            SampledMatrix::Real { .. } => EnsembleClass::Goe,
            SampledMatrix::Complex { .. } => EnsembleClass::Gue,
            SampledMatrix::Quaternion { .. } => EnsembleClass::Gse,
        }
    }

    /// Matrix order over its natural scalar (reals, complexes or quaternions).
    pub fn n(&self) -> usize {
        match self {
            SampledMatrix::Real { n, .. }
            | SampledMatrix::Complex { n, .. }
            | SampledMatrix::Quaternion { n, .. } => *n,
        }
    }

    fn spec(&self) -> EnsembleSpec {
        EnsembleSpec {
            class: self.class(),
            n: self.n(),
        }
    }

    /// Every independent real component with the standard deviation it was drawn with.
    pub fn independent_entries(&self) -> Vec<EntryDraw> {
        let spec = self.spec();
        let (dsd, osd) = (spec.diagonal_sd(), spec.off_diagonal_sd());
        let mut out: Vec<EntryDraw> = Vec::new();
        let diag = match self {
            SampledMatrix::Real { diag, .. }
            | SampledMatrix::Complex { diag, .. }
            | SampledMatrix::Quaternion { diag, .. } => diag,
        };
        out.extend(diag.iter().map(|&value| EntryDraw { value, sd: dsd }));
        let off = |value| EntryDraw { value, sd: osd };
        match self {
            SampledMatrix::Real { upper, .. } => out.extend(upper.iter().map(|&v| off(v))),
            SampledMatrix::Complex { upper, .. } => {
                for z in upper {
                    out.push(off(z.re));
                    out.push(off(z.im));
                }
            }
            SampledMatrix::Quaternion {
                z_upper, w_upper, ..
            } => {
                for (z, w) in z_upper.iter().zip(w_upper) {
                    out.extend([off(z.re), off(z.im), off(w.re), off(w.im)]);
                }
            }
        }
        out
    }

    /// `Tr X²`, using the real part of the quaternion trace for GSE.
    pub fn trace_square(&self) -> f64 {
        let sq = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>();
        match self {
            SampledMatrix::Real { diag, upper, .. } => sq(diag) + 2.0 * sq(upper),
            SampledMatrix::Complex { diag, upper, .. } => {
                sq(diag) + 2.0 * upper.iter().map(|z| z.norm_sqr()).sum::<f64>()
            }
            SampledMatrix::Quaternion {
                diag,
                z_upper,
                w_upper,
                ..
            } => {
                let off: f64 = z_upper
                    .iter()
                    .zip(w_upper)
                    .map(|(z, w)| z.norm_sqr() + w.norm_sqr())
                    .sum();
                sq(diag) + 2.0 * off
            }
        }
    }

    /// Unnormalized log density `−½ Tr X²`.
    pub fn log_density(&self) -> f64 {
        -0.5 * self.trace_square()
    }

    /// Sum of the normal log densities of all independent components.
    pub fn entry_log_likelihood(&self) -> f64 {
        let half_ln_2pi = 0.5 * math::ln(2.0 * PI);
        self.independent_entries()
            .iter()
            .map(|e| {
                let z = e.value / e.sd;
                -0.5 * z * z - math::ln(e.sd) - half_ln_2pi
            })
            .sum()
    }

    /// Size of the dense matrix handed to the eigensolver (`2n` for GSE).
    pub fn dense_order(&self) -> usize {
        match self {
            SampledMatrix::Quaternion { n, .. } => 2 * n,
            _ => self.n(),
        }
    }

    /// Dense real symmetric form; `None` unless the matrix is real.
    pub fn to_dense_real(&self) -> Option<Vec<f64>> {
        let SampledMatrix::Real { n, diag, upper } = self else {
            return None;
        };
        let n = *n;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] = diag[i];
            for j in i + 1..n {
                let v = upper[upper_index(n, i, j)];
                a[i * n + j] = v;
                a[j * n + i] = v;
            }
        }
        Some(a)
    }

    /// Dense complex Hermitian form; quaternion matrices use the embedding
    /// `[[Z, W], [−W̄, Z̄]]`.
    pub fn to_dense_complex(&self) -> Vec<Complex64> {
        let m = self.dense_order();
        let mut a = vec![Complex64::new(0.0, 0.0); m * m];
        match self {
            SampledMatrix::Real { .. } => {
                let real = self.to_dense_real().unwrap_or_default();
                for (dst, &src) in a.iter_mut().zip(&real) {
                    *dst = Complex64::new(src, 0.0);
                }
            }
            SampledMatrix::Complex { n, diag, upper } => {
                let n = *n;
                for i in 0..n {
                    a[i * n + i] = Complex64::new(diag[i], 0.0);
                    for j in i + 1..n {
                        let z = upper[upper_index(n, i, j)];
                        a[i * n + j] = z;
                        a[j * n + i] = z.conj();
                    }
                }
            }
            SampledMatrix::Quaternion {
                n,
                diag,
                z_upper,
                w_upper,
            } => {
                let n = *n;
                for i in 0..n {
                    a[i * m + i] = Complex64::new(diag[i], 0.0);
                    a[(i + n) * m + i + n] = Complex64::new(diag[i], 0.0);
                    for j in i + 1..n {
                        let k = upper_index(n, i, j);
                        let (z, w) = (z_upper[k], w_upper[k]);
                        // Z block (Hermitian) and its conjugate
                        a[i * m + j] = z;
                        a[j * m + i] = z.conj();
                        a[(i + n) * m + j + n] = z.conj();
                        a[(j + n) * m + i + n] = z;
                        // W block (antisymmetric) and −W̄
                        a[i * m + j + n] = w;
                        a[j * m + i + n] = -w;
                        a[(i + n) * m + j] = -w.conj();
                        a[(j + n) * m + i] = w.conj();
                    }
                }
            }
        }
        a
    }

    pub fn frobenius_norm(&self) -> f64 {
        let scale = if matches!(self, SampledMatrix::Quaternion { .. }) {
            2.0
        } else {
            1.0
        };
        math::sqrt(scale * self.trace_square())
    }

    /// Ascending spectrum; Kramers pairs of a quaternion matrix are merged.
    pub fn spectrum(&self) -> Result<Spectrum> {
        match self {
            SampledMatrix::Real { n, .. } => {
                let a = self.to_dense_real().unwrap_or_default();
                Ok(Spectrum {
                    values: eigen::symmetric_eigenvalues(&a, *n)?,
                    max_pair_gap: None,
                })
            }
            SampledMatrix::Complex { n, .. } => Ok(Spectrum {
                values: eigen::hermitian_eigenvalues(&self.to_dense_complex(), *n)?,
                max_pair_gap: None,
            }),
            SampledMatrix::Quaternion { .. } => {
                let doubled =
                    eigen::hermitian_eigenvalues(&self.to_dense_complex(), self.dense_order())?;
                let (values, gap) = eigen::collapse_pairs(&doubled, PAIR_TOLERANCE)?;
                Ok(Spectrum {
                    values,
                    max_pair_gap: Some(gap),
                })
            }
        }
    }
}

/// Eigenvalues of one matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Ascending; one value per Kramers pair for GSE.
    pub values: Vec<f64>,
    /// Largest relative gap inside a Kramers pair (GSE only).
    pub max_pair_gap: Option<f64>,
}

#[cfg(test)]
mod tests;
