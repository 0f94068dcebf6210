//! Kolmogorov–Smirnov distances between laws, tables and samples.

use alloc::vec::Vec;

use super::SpacingLaw;
use crate::error::{Error, Result};

/// Anything with a distribution function on `s ≥ 0`.
pub trait Cdf {
    /// `F(s)`; negative `s` maps to 0.
    fn cdf_at(&self, s: f64) -> f64;
}

impl Cdf for SpacingLaw {
    fn cdf_at(&self, s: f64) -> f64 {
        if s <= 0.0 {
            0.0
        } else {
            self.cdf_unchecked(s)
        }
    }
}

/// A user-supplied tabulated distribution function, linearly interpolated.
///
/// Below the first abscissa the table is joined linearly to `(0, 0)`;
/// beyond the last it is held at the last value.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedCdf {
    s: Vec<f64>,
    f: Vec<f64>,
}

impl TabulatedCdf {
    /// Both columns must be finite and strictly increasing, with
    /// `s ≥ 0` and `F ∈ [0, 1]`.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::domain("tabulated CDF has no points"));
        }
        for (i, &(s, f)) in points.iter().enumerate() {
            if !(s.is_finite() && f.is_finite() && s >= 0.0 && (0.0..=1.0).contains(&f)) {
                return Err(Error::domain(alloc::format!(
                    "tabulated CDF point {} out of range: ({s}, {f})",
                    i + 1
                )));
            }
            if i > 0 {
                let (ps, pf) = points[i - 1];
                if !(s > ps && f > pf) {
                    return Err(Error::domain(alloc::format!(
                        "tabulated CDF point {} is not strictly increasing",
                        i + 1
                    )));
                }
            }
        }
        let (s, f) = points.into_iter().unzip();
        Ok(TabulatedCdf { s, f })
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.s.iter().copied().zip(self.f.iter().copied())
    }
}

impl Cdf for TabulatedCdf {
    fn cdf_at(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        let idx = self.s.partition_point(|&x| x <= s);
        if idx == 0 {
            return if self.s[0] > 0.0 {
                self.f[0] * s / self.s[0]
            } else {
                self.f[0]
            };
        }
        if idx == self.s.len() {
            return self.f[idx - 1];
        }
        let (s0, s1) = (self.s[idx - 1], self.s[idx]);
        let (f0, f1) = (self.f[idx - 1], self.f[idx]);
        f0 + (f1 - f0) * (s - s0) / (s1 - s0)
    }
}

/// Right-continuous empirical distribution function of a sample.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(sample: &[f64]) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::domain("empirical CDF of an empty sample"));
        }
        if sample.iter().any(|v| v.is_nan()) {
            return Err(Error::domain("sample contains NaN"));
        }
        let mut sorted = sample.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(EmpiricalCdf { sorted })
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }
}

impl Cdf for EmpiricalCdf {
    fn cdf_at(&self, s: f64) -> f64 {
        self.sorted.partition_point(|&x| x <= s) as f64 / self.sorted.len() as f64
    }
}

/// Grid `0, 0.001, ..., 6` for comparing analytic distribution functions.
pub fn default_grid() -> Vec<f64> {
    (0..=6000).map(|i| i as f64 * 1e-3).collect()
}

/// `max |F_a(s) − F_b(s)|` over a sorted grid.
pub fn ks_distance(a: &dyn Cdf, b: &dyn Cdf, grid: &[f64]) -> Result<f64> {
    if grid.is_empty() {
        return Err(Error::domain("empty comparison grid"));
    }
    if grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::domain("comparison grid must be sorted"));
    }
    Ok(grid
        .iter()
        .map(|&s| (a.cdf_at(s) - b.cdf_at(s)).abs())
        .fold(0.0, f64::max))
}

/// One-sample Kolmogorov–Smirnov statistic `D_n`.
pub fn empirical_ks(sample: &[f64], cdf: &dyn Cdf) -> Result<f64> {
    let ecdf = EmpiricalCdf::new(sample)?;
    Ok(empirical_ks_sorted(ecdf.sorted(), cdf))
}

/// [`empirical_ks`] for a sample that is already sorted ascending.
pub fn empirical_ks_sorted(sorted: &[f64], cdf: &dyn Cdf) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf.cdf_at(x);
            let above = (i + 1) as f64 / n - f;
            let below = f - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max)
}

/// Two-sample Kolmogorov–Smirnov statistic.
pub fn two_sample_ks(a: &[f64], b: &[f64]) -> Result<f64> {
    let ea = EmpiricalCdf::new(a)?;
    let eb = EmpiricalCdf::new(b)?;
    let (xa, xb) = (ea.sorted(), eb.sorted());
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < xa.len() && j < xb.len() {
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}
