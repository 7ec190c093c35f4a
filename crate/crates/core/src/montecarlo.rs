//! Seeded Monte-Carlo estimation of the probability that a random matrix
//! with coordinates in `[-B, B)` is unimodular, exhaustive enumeration for
//! tiny boxes, and sweeps over `B`.
//!
//! Reproducibility contract: samples are split into batches of
//! [`BATCH_SIZE`]; batch `b` draws from xoshiro256** seeded (through
//! SplitMix64) with `splitmix64(seed ^ b)`. Each coordinate is one unbiased
//! draw onto the `2B` values, consumed in row-major entry order and
//! constant-coordinate-first within an entry. Workers claim whole batches,
//! so hit counts do not depend on the worker count.

use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::{SplitMix64, Xoshiro256StarStar};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{AlgElem, NumberField};
use crate::unimodular::{minor_ideal_index, MatrixOK};
use crate::zeta::{EulerProductResult, SplitTable, DEFAULT_PRIME_BOUND};

pub const BATCH_SIZE: u64 = 1024;

/// Largest number of matrices [`brute_force_density`] will enumerate.
pub const BRUTE_FORCE_BUDGET: u128 = 10_000_000;

pub const DEFAULT_BOUND: u64 = 3;
pub const DEFAULT_SAMPLES: u64 = 50_000;

/// One output of SplitMix64 started from state `x`.
pub fn splitmix64(x: u64) -> u64 {
    SplitMix64::seed_from_u64(x).next_u64()
}

pub fn batch_rng(seed: u64, batch: u64) -> Xoshiro256StarStar {
    Xoshiro256StarStar::seed_from_u64(splitmix64(seed ^ batch))
}

/// Seed for the sweep point with box bound `bound`.
pub fn sweep_seed(seed: u64, bound: u64) -> u64 {
    seed ^ splitmix64(bound)
}

fn check_bound(bound: u64) -> Result<()> {
    if bound == 0 || bound > 1 << 62 {
        return Err(Error::BadBound(format!(
            "coordinate bound B = {bound} must lie in [1, 2^62]"
        )));
    }
    Ok(())
}

/// Uniform integer in `[-bound, bound)` by multiply-and-reject on one 64-bit
/// output per attempt.
pub fn sample_coord<R: RngCore>(rng: &mut R, bound: u64) -> i64 {
    let range = 2 * bound;
    let threshold = range.wrapping_neg() % range;
    loop {
        let wide = rng.next_u64() as u128 * range as u128;
        if (wide as u64) >= threshold {
            return (wide >> 64) as i64 - bound as i64;
        }
    }
}

pub fn sample_matrix<R: RngCore>(
    field: &Arc<NumberField>,
    n: usize,
    m: usize,
    bound: u64,
    rng: &mut R,
) -> Result<MatrixOK> {
    check_bound(bound)?;
    let k = field.degree();
    let entries = (0..n * m)
        .map(|_| {
            AlgElem::from_coords_unchecked(
                (0..k)
                    .map(|_| BigInt::from(sample_coord(rng, bound)))
                    .collect(),
            )
        })
        .collect();
    MatrixOK::new(field.clone(), n, m, entries)
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub field: Arc<NumberField>,
    pub n: usize,
    pub m: usize,
    pub bound: u64,
    pub samples: u64,
    pub seed: u64,
    /// Worker threads; 0 means all available cores.
    pub workers: usize,
    pub prime_bound: u64,
}

impl ExperimentConfig {
    /// Table-reproduction defaults: `B = 3`, `N = 50000`, seed 0.
    pub fn new(field: Arc<NumberField>, n: usize, m: usize) -> Self {
        ExperimentConfig {
            field,
            n,
            m,
            bound: DEFAULT_BOUND,
            samples: DEFAULT_SAMPLES,
            seed: 0,
            workers: 0,
            prime_bound: DEFAULT_PRIME_BOUND,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n >= self.m {
            return Err(Error::BadShape(format!(
                "experiments need 1 <= n < m, got n = {}, m = {}",
                self.n, self.m
            )));
        }
        if self.samples == 0 {
            return Err(Error::BadBound("sample count must be at least 1".into()));
        }
        check_bound(self.bound)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub field: String,
    pub n: usize,
    pub m: usize,
    #[serde(rename = "B")]
    pub bound: u64,
    #[serde(rename = "N")]
    pub samples: u64,
    pub seed: u64,
    pub hits: u64,
    pub empirical: f64,
    pub predicted: EulerProductResult,
    pub ci_half_width: f64,
    pub wall_time: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

impl ExperimentReport {
    /// `|empirical - predicted|`.
    pub fn gap(&self) -> f64 {
        (self.empirical - self.predicted.value()).abs()
    }
}

fn with_pool<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return Ok(job());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::BadBound(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(job))
}

fn batch_hits(
    field: &Arc<NumberField>,
    n: usize,
    m: usize,
    bound: u64,
    seed: u64,
    batch: u64,
    len: u64,
) -> Result<u64> {
    let mut rng = batch_rng(seed, batch);
    let mut hits = 0;
    for _ in 0..len {
        let mat = sample_matrix(field, n, m, bound, &mut rng)?;
        if minor_ideal_index(&mat)?.is_one() {
            hits += 1;
        }
    }
    Ok(hits)
}

/// Number of unimodular matrices among `samples` seeded draws.
pub fn count_hits(
    field: &Arc<NumberField>,
    n: usize,
    m: usize,
    bound: u64,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<u64> {
    check_bound(bound)?;
    let batches = samples.div_ceil(BATCH_SIZE);
    let len = |b: u64| BATCH_SIZE.min(samples - b * BATCH_SIZE);
    if workers == 1 {
        return (0..batches)
            .map(|b| batch_hits(field, n, m, bound, seed, b, len(b)))
            .sum();
    }
    with_pool(workers, || {
        (0..batches)
            .into_par_iter()
            .map(|b| batch_hits(field, n, m, bound, seed, b, len(b)))
            .collect::<Result<Vec<u64>>>()
            .map(|v| v.into_iter().sum())
    })?
}

fn report(
    cfg: &ExperimentConfig,
    bound: u64,
    seed: u64,
    predicted: EulerProductResult,
) -> Result<ExperimentReport> {
    let start = Instant::now();
    let hits = count_hits(
        &cfg.field,
        cfg.n,
        cfg.m,
        bound,
        cfg.samples,
        seed,
        cfg.workers,
    )?;
    let empirical = hits as f64 / cfg.samples as f64;
    Ok(ExperimentReport {
        field: cfg.field.spec_string(),
        n: cfg.n,
        m: cfg.m,
        bound,
        samples: cfg.samples,
        seed,
        hits,
        empirical,
        predicted,
        ci_half_width: 3.0 * (empirical * (1.0 - empirical) / cfg.samples as f64).sqrt(),
        wall_time: start.elapsed().as_secs_f64(),
        warning: cfg.field.warning(),
    })
}

/// Runs one experiment, reusing a prebuilt split table for the prediction.
pub fn run_experiment_with_table(
    cfg: &ExperimentConfig,
    table: &SplitTable,
) -> Result<ExperimentReport> {
    cfg.validate()?;
    let predicted = table.density(cfg.n, cfg.m)?;
    report(cfg, cfg.bound, cfg.seed, predicted)
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let table = with_pool(cfg.workers, || {
        SplitTable::build(&cfg.field, cfg.prime_bound)
    })??;
    run_experiment_with_table(cfg, &table)
}

/// One experiment per entry of `bounds`, the sweep point `B` using seed
/// [`sweep_seed`]`(cfg.seed, B)`; `cfg.bound` is ignored.
pub fn sweep_b(cfg: &ExperimentConfig, bounds: &[u64]) -> Result<Vec<ExperimentReport>> {
    if bounds.is_empty() {
        return Err(Error::BadBound("empty list of bounds".into()));
    }
    for &b in bounds {
        ExperimentConfig {
            bound: b,
            ..cfg.clone()
        }
        .validate()?;
    }
    let table = with_pool(cfg.workers, || {
        SplitTable::build(&cfg.field, cfg.prime_bound)
    })??;
    let predicted = table.density(cfg.n, cfg.m)?;
    bounds
        .iter()
        .map(|&b| report(cfg, b, sweep_seed(cfg.seed, b), predicted.clone()))
        .collect()
}

pub const SWEEP_CSV_HEADER: [&str; 11] = [
    "field",
    "n",
    "m",
    "B",
    "N",
    "seed",
    "hits",
    "empirical",
    "predicted",
    "tail_bound",
    "ci_half_width",
];

/// Writes sweep reports as CSV under [`SWEEP_CSV_HEADER`]. The field column
/// holds the comma-separated coefficient list, quoted.
pub fn write_sweep_csv<W: Write>(reports: &[ExperimentReport], out: W) -> Result<()> {
    let io_err = |e: csv::Error| Error::Io(format!("CSV output: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_CSV_HEADER).map_err(io_err)?;
    for r in reports {
        w.write_record([
            r.field.clone(),
            r.n.to_string(),
            r.m.to_string(),
            r.bound.to_string(),
            r.samples.to_string(),
            r.seed.to_string(),
            r.hits.to_string(),
            r.empirical.to_string(),
            r.predicted.value().to_string(),
            r.predicted.tail_bound.to_string(),
            r.ci_half_width.to_string(),
        ])
        .map_err(io_err)?;
    }
    w.flush().map_err(|e| Error::Io(format!("CSV output: {e}")))
}

/// Exact proportion of unimodular matrices in the full box.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExactDensity {
    pub hits: u64,
    pub total: u64,
}

impl ExactDensity {
    pub fn value(&self) -> f64 {
        self.hits as f64 / self.total as f64
    }
}

impl std::fmt::Display for ExactDensity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.hits, self.total)
    }
}

/// Counts unimodular matrices over all `(2B)^(n m k)` coordinate choices.
pub fn brute_force_density(
    field: &Arc<NumberField>,
    n: usize,
    m: usize,
    bound: u64,
) -> Result<ExactDensity> {
    check_bound(bound)?;
    if n == 0 || n > m {
        return Err(Error::BadShape(format!(
            "enumeration needs 1 <= n <= m, got n = {n}, m = {m}"
        )));
    }
    let k = field.degree();
    let coords = n * m * k;
    let base = 2 * bound as u128;
    let total = (0..coords).try_fold(1u128, |acc, _| {
        let next = acc.saturating_mul(base);
        (next <= BRUTE_FORCE_BUDGET).then_some(next)
    });
    let Some(total) = total else {
        let size = (0..coords).fold(1u128, |acc, _| acc.saturating_mul(base));
        return Err(Error::BudgetExceeded {
            size,
            budget: BRUTE_FORCE_BUDGET,
        });
    };
    let total = total as u64;
    let base = base as u64;
    let hits = (0..total)
        .into_par_iter()
        .map(|mut t| {
            let mut flat = Vec::with_capacity(coords);
            for _ in 0..coords {
                flat.push(BigInt::from((t % base) as i64 - bound as i64));
                t /= base;
            }
            let entries = flat
                .chunks(k)
                .map(|c| AlgElem::from_coords_unchecked(c.to_vec()))
                .collect();
            let mat = MatrixOK::new(field.clone(), n, m, entries)?;
            Ok(u64::from(minor_ideal_index(&mat)?.is_one()))
        })
        .sum::<Result<u64>>()?;
    Ok(ExactDensity { hits, total })
}
