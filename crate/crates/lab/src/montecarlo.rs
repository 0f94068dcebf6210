//! Parallel Monte Carlo over independent trials.
//!
//! Each trial draws from its own random stream, so results do not depend
//! on thread count or scheduling; outputs are pooled in trial order.

use rayon::prelude::*;
use spacing_core::ensembles::{
    pool_trials, run_trial, EnsembleSpec, ExtractionMode, MonteCarloRun,
};

pub fn parallel_monte_carlo(
    spec: &EnsembleSpec,
    trials: usize,
    mode: ExtractionMode,
    seed: u64,
) -> spacing_core::Result<MonteCarloRun> {
    let outputs: Vec<_> = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(spec, mode, seed, t))
        .collect();
    pool_trials(spec, mode, seed, outputs)
}
