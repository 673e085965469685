//! Goodness-of-fit tests and ladder summaries.
//!
//! Kolmogorov–Smirnov critical values are asymptotic:
//! `c(level) = sqrt(−ln(level/2) / 2)`, about 1.628 at level 0.01.

use alloc::vec::Vec;

use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{domain, Error, Result};
use crate::model::{derive_instance, mean_z, InstanceParams, ModelParams};
use crate::regimes::NormalizationPlan;
use crate::samplers::{monte_carlo, substream_seed};

/// Smallest sample for which a verdict is considered meaningful.
pub const MIN_DECISIVE: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestResult {
    pub statistic: f64,
    pub critical_value: f64,
    pub level: f64,
    /// `statistic < critical_value`.
    pub pass: bool,
    pub m: usize,
    /// Size of the second sample for two-sample tests.
    pub reference_m: Option<usize>,
}

impl TestResult {
    fn new(
        statistic: f64,
        critical_value: f64,
        level: f64,
        m: usize,
        reference_m: Option<usize>,
    ) -> Self {
        TestResult {
            statistic,
            critical_value,
            level,
            pass: statistic < critical_value,
            m,
            reference_m,
        }
    }

    /// Every sample involved has at least [`MIN_DECISIVE`] points.
    pub fn is_decisive(&self) -> bool {
        self.m >= MIN_DECISIVE && self.reference_m.is_none_or(|r| r >= MIN_DECISIVE)
    }
}

/// Asymptotic Kolmogorov constant `c(level)`.
pub fn ks_critical(level: f64) -> Result<f64> {
    if !(level > 0.0 && level < 1.0) {
        return Err(domain(
            "level",
            level,
            "significance level must lie in (0, 1)",
        ));
    }
    Ok((-(0.5 * level).ln() / 2.0).sqrt())
}

fn check_sorted(sample: &[f64]) -> Result<()> {
    if sample.is_empty() {
        return Err(Error::Empty("sample"));
    }
    for (i, x) in sample.iter().enumerate() {
        if !x.is_finite() {
            return Err(Error::NonFinite(i));
        }
        if i > 0 && sample[i - 1] > *x {
            return Err(Error::Unsorted(i));
        }
    }
    Ok(())
}

/// One-sample test of a sorted sample against `cdf`.
pub fn ks_one_sample<F>(sample: &[f64], mut cdf: F, level: f64) -> Result<TestResult>
where
    F: FnMut(f64) -> f64,
{
    let c = ks_critical(level)?;
    check_sorted(sample)?;
    let m = sample.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sample.iter().enumerate() {
        let f = cdf(x);
        if !(0.0..=1.0).contains(&f) {
            return Err(domain("cdf", f, "reference cdf left [0, 1]"));
        }
        let above = (i + 1) as f64 / m - f;
        let below = f - i as f64 / m;
        d = d.max(above.abs()).max(below.abs());
    }
    Ok(TestResult::new(d, c / m.sqrt(), level, sample.len(), None))
}

/// Two-sample test; inputs need not be sorted.
pub fn ks_two_sample(a: &[f64], b: &[f64], level: f64) -> Result<TestResult> {
    let c = ks_critical(level)?;
    if a.is_empty() {
        return Err(Error::Empty("first sample"));
    }
    if b.is_empty() {
        return Err(Error::Empty("second sample"));
    }
    let sorted = |xs: &[f64]| -> Result<Vec<f64>> {
        if let Some(i) = xs.iter().position(|x| x.is_nan()) {
            return Err(Error::NonFinite(i));
        }
        let mut v = xs.to_vec();
        v.sort_by(|x, y| x.total_cmp(y));
        Ok(v)
    };
    let (a, b) = (sorted(a)?, sorted(b)?);
    let (ma, mb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] == x {
            i += 1;
        }
        while j < b.len() && b[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / ma - j as f64 / mb).abs());
    }
    let crit = c * ((ma + mb) / (ma * mb)).sqrt();
    Ok(TestResult::new(d, crit, level, a.len(), Some(b.len())))
}

/// `max_u |(1/m) Σ e^{iu x_j} − exp(ψ(u))|` over the grid.
pub fn ecf_distance<F>(sample: &[f64], mut exponent: F, u_grid: &[f64]) -> Result<f64>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    if sample.is_empty() {
        return Err(Error::Empty("sample"));
    }
    if u_grid.is_empty() {
        return Err(Error::Empty("frequency grid"));
    }
    let m = sample.len() as f64;
    let mut worst = 0.0f64;
    for &u in u_grid {
        let (mut re, mut im) = (0.0, 0.0);
        for &x in sample {
            let (s, c) = (u * x).sin_cos();
            re += c;
            im += s;
        }
        let ecf = Complex64::new(re / m, im / m);
        worst = worst.max((ecf - exponent(u)?.exp()).norm());
    }
    Ok(worst)
}

/// Linear-interpolation quantile of a sorted sample.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LlnMode {
    /// `S_n / (n E Z)`
    FullMean,
    /// `S_n / (n E X)`
    LightMean,
}

impl LlnMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            LlnMode::FullMean => "full_mean",
            LlnMode::LightMean => "light_mean",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LlnConfig {
    pub replicates: usize,
    pub seed: u64,
    pub mode: LlnMode,
    pub delta: f64,
    /// Force `eps = 0` on every rung.
    pub light_only: bool,
}

/// Ratio distribution at one rung.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioSummary {
    pub n: u64,
    pub median: f64,
    pub q05: f64,
    pub q95: f64,
    pub within: f64,
}

pub fn summarize_ratios(n: u64, ratios: &[f64], delta: f64) -> Result<RatioSummary> {
    if ratios.is_empty() {
        return Err(Error::Empty("ratio sample"));
    }
    let mut v = ratios.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let inside = v.iter().filter(|r| (**r - 1.0).abs() <= delta).count();
    Ok(RatioSummary {
        n,
        median: quantile_sorted(&v, 0.5),
        q05: quantile_sorted(&v, 0.05),
        q95: quantile_sorted(&v, 0.95),
        within: inside as f64 / v.len() as f64,
    })
}

/// Ladder of ratio summaries.
#[derive(Debug, Clone, PartialEq)]
pub struct LlnReport {
    pub mode: LlnMode,
    pub delta: f64,
    pub rungs: Vec<RatioSummary>,
}

impl LlnReport {
    /// Coverage never decreases along the ladder.
    pub fn is_monotone(&self) -> bool {
        self.rungs.windows(2).all(|w| w[1].within >= w[0].within)
    }

    pub fn top_coverage(&self) -> f64 {
        self.rungs.last().map_or(0.0, |r| r.within)
    }

    /// Monotone coverage reaching `threshold` at the top rung.
    pub fn passes(&self, threshold: f64) -> bool {
        self.is_monotone() && self.top_coverage() >= threshold
    }
}

/// Ladder LLN check with a caller-supplied replicate driver.
///
/// `simulate(inst, replicates, seed, plan)` must return the normalized
/// replicate values; rung `i` is simulated under its own master seed.
pub fn lln_ratio_check_with<F>(
    p: &ModelParams,
    ladder: &[u64],
    cfg: &LlnConfig,
    mut simulate: F,
) -> Result<LlnReport>
where
    F: FnMut(&InstanceParams, usize, u64, &NormalizationPlan) -> Result<Vec<f64>>,
{
    if ladder.len() < 3 {
        return Err(Error::Empty("ladder with at least three rungs"));
    }
    if let Some(i) = ladder.windows(2).position(|w| w[1] <= w[0]) {
        return Err(Error::Unsorted(i + 1));
    }
    if !(cfg.delta > 0.0) {
        return Err(domain(
            "delta",
            cfg.delta,
            "tolerance band must be positive",
        ));
    }
    let mut rungs = Vec::with_capacity(ladder.len());
    for (i, &n) in ladder.iter().enumerate() {
        let mut inst = derive_instance(p, n)?;
        if cfg.light_only {
            inst = inst.light_only();
        }
        let mean = match cfg.mode {
            LlnMode::FullMean => mean_z(p, &inst),
            LlnMode::LightMean => 1.0 / p.lambda(),
        };
        let plan = NormalizationPlan {
            center: 0.0,
            scale: n as f64 * mean,
            ..NormalizationPlan::identity()
        };
        let seed = substream_seed(cfg.seed, u64::MAX - i as u64);
        let ratios = simulate(&inst, cfg.replicates, seed, &plan)?;
        rungs.push(summarize_ratios(n, &ratios, cfg.delta)?);
    }
    Ok(LlnReport {
        mode: cfg.mode,
        delta: cfg.delta,
        rungs,
    })
}

/// Serial ladder LLN check.
pub fn lln_ratio_check(p: &ModelParams, ladder: &[u64], cfg: &LlnConfig) -> Result<LlnReport> {
    lln_ratio_check_with(p, ladder, cfg, |inst, reps, seed, plan| {
        Ok(monte_carlo(p, inst, reps, seed, plan)?.values)
    })
}
