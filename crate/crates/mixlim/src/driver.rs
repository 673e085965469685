//! Multi-threaded replicate driver.
//!
//! Replicate `k` always draws from substream `k` of the master seed and the
//! rows are collected in index order, so the output does not depend on the
//! number of threads.

use mixlim_core::model::{InstanceParams, ModelParams};
use mixlim_core::regimes::NormalizationPlan;
use mixlim_core::samplers::{replicate, MixtureSampler, RngStream, RowSum, SumSample};
use mixlim_core::stable::{StableLimitSpec, StableSampler};
use mixlim_core::stats::{lln_ratio_check_with, LlnConfig, LlnReport};
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

use crate::error::{Error, Result};

pub fn thread_pool(threads: usize) -> Result<ThreadPool> {
    if threads == 0 {
        return Err(Error::Usage("thread count must be at least 1".into()));
    }
    Ok(ThreadPoolBuilder::new().num_threads(threads).build()?)
}

fn run_rows(
    pool: &ThreadPool,
    p: &ModelParams,
    inst: &InstanceParams,
    replicates: usize,
    seed: u64,
) -> Vec<RowSum> {
    let sampler = MixtureSampler::new(p, inst);
    let n = inst.n();
    pool.install(|| {
        (0..replicates as u64)
            .into_par_iter()
            .map(|k| replicate(&sampler, n, seed, k))
            .collect()
    })
}

pub fn monte_carlo(
    p: &ModelParams,
    inst: &InstanceParams,
    replicates: usize,
    seed: u64,
    plan: &NormalizationPlan,
    threads: usize,
) -> Result<SumSample> {
    if replicates == 0 {
        return Err(Error::Usage("need at least one replicate".into()));
    }
    let pool = thread_pool(threads)?;
    let rows = run_rows(&pool, p, inst, replicates, seed);
    Ok(SumSample::from_rows(rows, inst.n(), *plan)?)
}

/// Same as [`monte_carlo`] but returns raw row sums.
pub fn row_sums(
    p: &ModelParams,
    inst: &InstanceParams,
    replicates: usize,
    seed: u64,
    threads: usize,
) -> Result<Vec<RowSum>> {
    let pool = thread_pool(threads)?;
    Ok(run_rows(&pool, p, inst, replicates, seed))
}

pub fn lln_ratio_check(
    p: &ModelParams,
    ladder: &[u64],
    cfg: &LlnConfig,
    threads: usize,
) -> Result<LlnReport> {
    let pool = thread_pool(threads)?;
    Ok(lln_ratio_check_with(
        p,
        ladder,
        cfg,
        |inst, reps, seed, plan| {
            let rows = run_rows(&pool, p, inst, reps, seed);
            Ok(SumSample::from_rows(rows, inst.n(), *plan)?.values)
        },
    )?)
}

/// `m` draws of a stable law from one stream.
pub fn stable_sample(
    spec: &StableLimitSpec,
    compensated: bool,
    m: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let sampler = StableSampler::new(spec, compensated)?;
    let mut rng = RngStream::new(seed);
    Ok((0..m).map(|_| sampler.sample(&mut rng)).collect())
}
