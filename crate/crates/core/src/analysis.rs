//! Summary statistics, gamma fitting, block analyses and the
//! mean/coefficient-of-variation independence diagnostic.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::laws::{empirical_ks_sorted, GammaLaw, GenGamma, SpacingLaw};
use crate::math;
use crate::rng::StreamRng;
use crate::specfun::{digamma_unchecked, trigamma_minus_reciprocal};

/// Count, mean, unbiased variance, CV and `κ = CV⁻²` of a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStats {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub cv: f64,
    /// `1 / cv²`; infinite for a constant sample.
    pub kappa_cv: f64,
}

pub fn summarize(values: &[f64]) -> Result<SummaryStats> {
    let count = values.len();
    if count < 2 {
        return Err(Error::InsufficientData {
            required: 2,
            available: count,
        });
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("sample contains non-finite values"));
    }
    let n = count as f64;
    let mean = values.iter().sum::<f64>() / n;
    if mean == 0.0 {
        return Err(Error::degenerate(
            "zero mean: coefficient of variation undefined",
        ));
    }
    let variance = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    let cv = math::sqrt(variance) / mean;
    Ok(SummaryStats {
        count,
        mean,
        variance,
        cv,
        kappa_cv: 1.0 / (cv * cv),
    })
}

/// Criterion used to pick gamma parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FitMethod {
    Moments,
    Mle,
    /// Unit-mean gamma whose variance matches the normalized sample.
    UnitMeanVariance,
}

impl FitMethod {
    pub fn name(self) -> &'static str {
        match self {
            FitMethod::Moments => "moments",
            FitMethod::Mle => "mle",
            FitMethod::UnitMeanVariance => "unitvar",
        }
    }
}

impl fmt::Display for FitMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FitMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "moments" => Ok(FitMethod::Moments),
            "mle" => Ok(FitMethod::Mle),
            "unitvar" | "unit-mean-variance" => Ok(FitMethod::UnitMeanVariance),
            other => Err(Error::domain(format!("unknown fit method `{other}`"))),
        }
    }
}

/// A fitted gamma law together with its KS statistic against the data it
/// was fitted to (the unit-mean rescaled data for `UnitMeanVariance`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaFit {
    pub law: GammaLaw,
    pub method: FitMethod,
    pub ks: f64,
}

impl GammaFit {
    /// `ν`
    pub fn rate(&self) -> f64 {
        self.law.rate()
    }

    /// `κ`
    pub fn shape(&self) -> f64 {
        self.law.shape()
    }

    pub fn spacing_law(&self) -> SpacingLaw {
        SpacingLaw::Gamma(self.law)
    }
}

fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

fn positive_variance(stats: &SummaryStats) -> Result<()> {
    if !(stats.variance > 0.0) {
        return Err(Error::degenerate("sample variance is zero"));
    }
    Ok(())
}

fn finish(law: GammaLaw, method: FitMethod, data: &[f64]) -> GammaFit {
    let ks = empirical_ks_sorted(&sorted(data), &SpacingLaw::Gamma(law));
    GammaFit { law, method, ks }
}

/// `κ = m²/v`, `ν = m/v`.
pub fn fit_gamma_moments(values: &[f64]) -> Result<GammaFit> {
    let stats = summarize(values)?;
    positive_variance(&stats)?;
    let law = GammaLaw::new(
        stats.mean / stats.variance,
        stats.mean * stats.mean / stats.variance,
    )?;
    Ok(finish(law, FitMethod::Moments, values))
}

const MLE_MAX_ITER: usize = 100;
const MLE_TOL: f64 = 1e-12;

/// Maximum likelihood: `ln κ − ψ(κ) = ln m − mean(ln s)`, `ν = κ/m`.
///
/// Newton's method in `ln κ`, started from the moment estimate.
pub fn fit_gamma_mle(values: &[f64]) -> Result<GammaFit> {
    let stats = summarize(values)?;
    if values.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::domain(
            "maximum likelihood needs strictly positive data",
        ));
    }
    let n = values.len() as f64;
    let mean_ln = values.iter().map(|&v| math::ln(v)).sum::<f64>() / n;
    let target = math::ln(stats.mean) - mean_ln;
    let (kappa, _) = solve_mle_shape(target, stats.mean * stats.mean / stats.variance)?;
    let law = GammaLaw::new(kappa / stats.mean, kappa)?;
    Ok(finish(law, FitMethod::Mle, values))
}

/// `ln κ − ψ(κ) − target` at `κ`.
pub fn mle_score(kappa: f64, target: f64) -> f64 {
    math::ln(kappa) - digamma_unchecked(kappa) - target
}

/// Root of [`mle_score`]; returns `(κ, iterations)`.
pub fn solve_mle_shape(target: f64, start: f64) -> Result<(f64, usize)> {
    // ln κ − ψ(κ) falls from +∞ to 0, so a root exists only for target > 0
    if !(target > 1e-15) || !target.is_finite() {
        return Err(Error::Solver {
            what: "gamma MLE",
            iterations: 0,
            residual: target,
        });
    }
    let mut t = if start.is_finite() && start > 0.0 {
        math::ln(start)
    } else {
        0.0
    };
    for it in 1..=MLE_MAX_ITER {
        let kappa = math::exp(t);
        let score = mle_score(kappa, target);
        if score.abs() < MLE_TOL {
            return Ok((kappa, it));
        }
        // d/dt score = κ (1/κ − ψ′(κ))
        let slope = -kappa * trigamma_minus_reciprocal(kappa)?;
        let step = (score / slope).clamp(-2.0, 2.0);
        t -= step;
    }
    let kappa = math::exp(t);
    Err(Error::Solver {
        what: "gamma MLE",
        iterations: MLE_MAX_ITER,
        residual: mle_score(kappa, target),
    })
}

/// Rescales to unit mean, then sets `κ = ν = 1 / variance`.
pub fn fit_unit_mean_gamma_variance(values: &[f64]) -> Result<GammaFit> {
    let stats = summarize(values)?;
    positive_variance(&stats)?;
    let normalized: Vec<f64> = values.iter().map(|v| v / stats.mean).collect();
    let kappa = 1.0 / summarize(&normalized)?.variance;
    let law = GammaLaw::new(kappa, kappa)?;
    Ok(finish(law, FitMethod::UnitMeanVariance, &normalized))
}

pub fn fit_gamma(values: &[f64], method: FitMethod) -> Result<GammaFit> {
    match method {
        FitMethod::Moments => fit_gamma_moments(values),
        FitMethod::Mle => fit_gamma_mle(values),
        FitMethod::UnitMeanVariance => fit_unit_mean_gamma_variance(values),
    }
}

/// Result of the generalized-gamma shape search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaFit {
    pub law: GenGamma,
    /// KS statistic of the unit-mean sample against `law`.
    pub ks: f64,
}

impl OmegaFit {
    pub fn beta(&self) -> f64 {
        self.law.beta()
    }

    pub fn omega(&self) -> f64 {
        self.law.omega()
    }
}

pub const OMEGA_BRACKET: (f64, f64) = (0.5, 4.0);
const OMEGA_TOL: f64 = 1e-4;

/// Golden-section search for the `ω` minimizing the KS statistic of the
/// unit-mean sample against the generalized gamma law with fixed `β`.
pub fn fit_gen_gamma_omega(values: &[f64], beta: f64) -> Result<OmegaFit> {
    let stats = summarize(values)?;
    if values.iter().any(|&v| v < 0.0) {
        return Err(Error::domain("spacings must be non-negative"));
    }
    GenGamma::new(beta, 1.0)?;
    let data: Vec<f64> = sorted(values).iter().map(|v| v / stats.mean).collect();
    let objective = |omega: f64| -> Result<f64> {
        let law = SpacingLaw::GeneralizedGamma(GenGamma::new(beta, omega)?);
        Ok(empirical_ks_sorted(&data, &law))
    };
    let (lo, hi) = OMEGA_BRACKET;
    let inv_phi = 0.5 * (math::sqrt(5.0) - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (objective(c)?, objective(d)?);
    while b - a > OMEGA_TOL {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(d)?;
        }
    }
    let omega = 0.5 * (a + b);
    if omega - lo < 10.0 * OMEGA_TOL || hi - omega < 10.0 * OMEGA_TOL {
        return Err(Error::Solver {
            what: "generalized gamma omega search reached the bracket edge",
            iterations: 0,
            residual: omega,
        });
    }
    let law = GenGamma::new(beta, omega)?;
    Ok(OmegaFit {
        law,
        ks: objective(omega)?,
    })
}

/// How blocks are laid over the spacing sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockScheme {
    /// Disjoint blocks `[kB, (k+1)B)`.
    Consecutive,
    /// Prefixes of length `mB`, `m = 1..=num`.
    Cumulative,
}

impl BlockScheme {
    pub fn name(self) -> &'static str {
        match self {
            BlockScheme::Consecutive => "consecutive",
            BlockScheme::Cumulative => "cumulative",
        }
    }
}

impl fmt::Display for BlockScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BlockScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "consecutive" => Ok(BlockScheme::Consecutive),
            "cumulative" => Ok(BlockScheme::Cumulative),
            other => Err(Error::domain(format!("unknown block scheme `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockRow {
    /// 1-based.
    pub block: usize,
    pub stats: SummaryStats,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockReport {
    pub scheme: BlockScheme,
    pub block_size: usize,
    /// Mean of the raw spacings over the whole analysed range.
    pub grand_mean: f64,
    pub rows: Vec<BlockRow>,
}

/// Normalizes the first `block_size · num_blocks` spacings by their grand
/// mean, then summarizes each block.
pub fn block_analysis(
    spacings: &[f64],
    scheme: BlockScheme,
    block_size: usize,
    num_blocks: usize,
) -> Result<BlockReport> {
    if block_size < 2 || num_blocks == 0 {
        return Err(Error::domain(
            "blocks need at least 2 spacings and at least one block",
        ));
    }
    let required = block_size
        .checked_mul(num_blocks)
        .ok_or_else(|| Error::domain("block layout overflows"))?;
    if spacings.len() < required {
        return Err(Error::InsufficientData {
            required,
            available: spacings.len(),
        });
    }
    let used = &spacings[..required];
    let grand_mean = used.iter().sum::<f64>() / required as f64;
    if !(grand_mean > 0.0) {
        return Err(Error::degenerate("grand mean spacing is not positive"));
    }
    let normalized: Vec<f64> = used.iter().map(|s| s / grand_mean).collect();
    let rows = (0..num_blocks)
        .map(|k| {
            let range = match scheme {
                BlockScheme::Consecutive => k * block_size..(k + 1) * block_size,
                BlockScheme::Cumulative => 0..(k + 1) * block_size,
            };
            Ok(BlockRow {
                block: k + 1,
                stats: summarize(&normalized[range])?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BlockReport {
        scheme,
        block_size,
        grand_mean,
        rows,
    })
}

pub const DEFAULT_PERMUTATIONS: usize = 10_000;
pub const MIN_DIAGNOSTIC_BLOCKS: usize = 10;

/// Outcome of the mean/CV independence diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CvIndependence {
    /// Pearson correlation between per-block means and CVs.
    pub correlation: f64,
    /// Two-sided permutation p-value `(1 + #{|r*| ≥ |r|}) / (1 + P)`.
    pub p_value: f64,
    pub blocks: usize,
    pub permutations: usize,
}

fn centered(v: &[f64]) -> Vec<f64> {
    let m = v.iter().sum::<f64>() / v.len() as f64;
    v.iter().map(|x| x - m).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn pearson(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() || a.len() < 2 {
        return Err(Error::domain("correlation needs two equal-length series"));
    }
    let (ca, cb) = (centered(a), centered(b));
    let denom = math::sqrt(dot(&ca, &ca) * dot(&cb, &cb));
    if !(denom > 0.0) {
        return Err(Error::degenerate("correlation of a constant series"));
    }
    Ok(dot(&ca, &cb) / denom)
}

/// Correlates per-block means with per-block CVs over disjoint blocks.
///
/// For gamma-distributed data the sample mean and sample CV are
/// independent, so a significant correlation points away from a gamma law.
pub fn hwang_hu_diagnostic(
    spacings: &[f64],
    block_size: usize,
    num_blocks: usize,
    permutations: usize,
    seed: u64,
) -> Result<CvIndependence> {
    if num_blocks < MIN_DIAGNOSTIC_BLOCKS {
        return Err(Error::InsufficientData {
            required: MIN_DIAGNOSTIC_BLOCKS,
            available: num_blocks,
        });
    }
    if permutations == 0 {
        return Err(Error::domain("at least one permutation is required"));
    }
    if block_size < 2 {
        return Err(Error::domain("blocks need at least 2 spacings"));
    }
    let required = block_size * num_blocks;
    if spacings.len() < required {
        return Err(Error::InsufficientData {
            required,
            available: spacings.len(),
        });
    }
    let mut means = Vec::with_capacity(num_blocks);
    let mut cvs = Vec::with_capacity(num_blocks);
    for block in spacings[..required].chunks_exact(block_size) {
        let s = summarize(block)?;
        means.push(s.mean);
        cvs.push(s.cv);
    }
    let observed = pearson(&means, &cvs)?;
    let (ca, mut cb) = (centered(&means), centered(&cvs));
    let denom = math::sqrt(dot(&ca, &ca) * dot(&cb, &cb));
    let threshold = observed.abs();
    let mut rng = StreamRng::new(seed, 0);
    let mut hits = 0usize;
    for _ in 0..permutations {
        cb.shuffle(&mut rng);
        if (dot(&ca, &cb) / denom).abs() >= threshold {
            hits += 1;
        }
    }
    Ok(CvIndependence {
        correlation: observed,
        p_value: (1 + hits) as f64 / (1 + permutations) as f64,
        blocks: num_blocks,
        permutations,
    })
}
