use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use super::{sample_matrix, EnsembleClass, EnsembleSpec};
use crate::error::{Error, Result};
use crate::math;
use crate::rng::StreamRng;
use crate::sample::SpacingSample;

/// How spacings are read off a sorted spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtractionMode {
    /// Every consecutive difference of the raw spectrum.
    AllConsecutive,
    /// Only `λ_{k+1} − λ_k` with `k = ⌈n/2⌉` (1-based), where the density is flattest.
    CentralSpacing,
    /// Levels mapped through the semicircle distribution function, then
    /// consecutive differences within the middle half of the spectrum.
    SemicircleUnfolded,
}

impl ExtractionMode {
    pub const ALL: [ExtractionMode; 3] = [
        ExtractionMode::AllConsecutive,
        ExtractionMode::CentralSpacing,
        ExtractionMode::SemicircleUnfolded,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExtractionMode::AllConsecutive => "all",
            ExtractionMode::CentralSpacing => "central",
            ExtractionMode::SemicircleUnfolded => "unfolded",
        }
    }
}

impl fmt::Display for ExtractionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExtractionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "all" | "all-consecutive" => Ok(ExtractionMode::AllConsecutive),
            "central" | "central-spacing" => Ok(ExtractionMode::CentralSpacing),
            "unfolded" | "semicircle" | "semicircle-unfolded" => {
                Ok(ExtractionMode::SemicircleUnfolded)
            }
            other => Err(Error::domain(format!("unknown extraction mode `{other}`"))),
        }
    }
}

/// Radius `√(2n)` of the limiting semicircle.
pub fn semicircle_radius(n: usize) -> f64 {
    math::sqrt(2.0 * n as f64)
}

/// Distribution function of the unit semicircle law on `[−1, 1]`.
pub fn semicircle_cdf(t: f64) -> f64 {
    let t = t.clamp(-1.0, 1.0);
    0.5 + (t * math::sqrt(1.0 - t * t) + math::asin(t)) / PI
}

/// Maps eigenvalues of an order-`n` matrix to unit mean density.
pub fn unfold(levels: &[f64], n: usize) -> Vec<f64> {
    let r = semicircle_radius(n);
    levels
        .iter()
        .map(|&x| n as f64 * semicircle_cdf(x / r))
        .collect()
}

/// Index range `[n/4, n − n/4)` of the middle half of `n` sorted levels.
pub fn middle_half(n: usize) -> core::ops::Range<usize> {
    n / 4..n - n / 4
}

fn consecutive(levels: &[f64]) -> Vec<f64> {
    levels.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Spacings of one ascending spectrum.
pub fn extract_spacings(
    levels: &[f64],
    mode: ExtractionMode,
    class: EnsembleClass,
) -> Result<Vec<f64>> {
    let n = levels.len();
    if n < 2 {
        return Err(Error::InsufficientData {
            required: 2,
            available: n,
        });
    }
    if levels.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::domain("levels must be sorted ascending"));
    }
    Ok(match mode {
        ExtractionMode::AllConsecutive => consecutive(levels),
        ExtractionMode::CentralSpacing => {
            let k = n.div_ceil(2);
            alloc::vec![levels[k] - levels[k - 1]]
        }
        ExtractionMode::SemicircleUnfolded => {
            let mid = &levels[middle_half(n)];
            if class == EnsembleClass::Poisson {
                // uniform levels on [0, n] already have unit density
                consecutive(mid)
            } else {
                consecutive(&unfold(mid, n))
            }
        }
    })
}

/// A sorted set of levels from one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct Levels {
    pub values: Vec<f64>,
    /// Largest relative Kramers-pair gap (GSE only).
    pub max_pair_gap: Option<f64>,
}

/// Eigenvalues of one sampled matrix, or `n` sorted uniform levels on
/// `[0, n]` for the Poisson class.
pub fn sample_levels(spec: &EnsembleSpec, rng: &mut StreamRng) -> Result<Levels> {
    if spec.class() == EnsembleClass::Poisson {
        let n = spec.n() as f64;
        let mut values: Vec<f64> = (0..spec.n()).map(|_| n * rng.uniform()).collect();
        values.sort_by(f64::total_cmp);
        return Ok(Levels {
            values,
            max_pair_gap: None,
        });
    }
    let spectrum = sample_matrix(spec, rng)?.spectrum()?;
    Ok(Levels {
        values: spectrum.values,
        max_pair_gap: spectrum.max_pair_gap,
    })
}

/// Raw spacings from one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutput {
    pub spacings: Vec<f64>,
    pub max_pair_gap: Option<f64>,
}

/// Runs trial `trial` on its own random stream of `seed`.
pub fn run_trial(
    spec: &EnsembleSpec,
    mode: ExtractionMode,
    seed: u64,
    trial: usize,
) -> Result<TrialOutput> {
    let mut rng = StreamRng::new(seed, trial as u64);
    let levels = sample_levels(spec, &mut rng)?;
    Ok(TrialOutput {
        spacings: extract_spacings(&levels.values, mode, spec.class())?,
        max_pair_gap: levels.max_pair_gap,
    })
}

/// Pooled, grand-mean normalized spacings from many trials.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloRun {
    pub sample: SpacingSample,
    pub trials: usize,
    /// Largest Kramers-pair gap over all trials (GSE only).
    pub max_pair_gap: Option<f64>,
}

/// Pools per-trial outputs given in trial order.
///
/// The first failing trial aborts the run; the error records how many
/// trials completed before it.
pub fn pool_trials<I>(
    spec: &EnsembleSpec,
    mode: ExtractionMode,
    seed: u64,
    outputs: I,
) -> Result<MonteCarloRun>
where
    I: IntoIterator<Item = Result<TrialOutput>>,
{
    let mut pooled = Vec::new();
    let mut gap: Option<f64> = None;
    let mut trials = 0;
    for (t, out) in outputs.into_iter().enumerate() {
        let out = out.map_err(|e| Error::Aborted {
            trial: t,
            completed: t,
            reason: e.to_string(),
        })?;
        pooled.extend(out.spacings);
        if let Some(g) = out.max_pair_gap {
            gap = Some(gap.map_or(g, |c| c.max(g)));
        }
        trials += 1;
    }
    if trials == 0 {
        return Err(Error::domain("at least one trial is required"));
    }
    let provenance = format!(
        "ensemble={} n={} mode={} trials={} seed={}",
        spec.class(),
        spec.n(),
        mode,
        trials,
        seed
    );
    Ok(MonteCarloRun {
        sample: SpacingSample::normalized(pooled, Some(mode), provenance)?,
        trials,
        max_pair_gap: gap,
    })
}

/// Sequential Monte Carlo over `trials` independent matrices.
pub fn monte_carlo_spacings(
    spec: &EnsembleSpec,
    trials: usize,
    mode: ExtractionMode,
    seed: u64,
) -> Result<MonteCarloRun> {
    pool_trials(
        spec,
        mode,
        seed,
        (0..trials).map(|t| run_trial(spec, mode, seed, t)),
    )
}
