//! Verification campaigns: simulate each rung of an `n` ladder and test the
//! normalized sums against the limit law the regime predicts.

use mixlim_core::model::{derive_instance, mean_z, var_z, ModelParams};
use mixlim_core::regimes::{
    classify, normalization_plan, FluctuationRegime, LimitLaw, NormalizationPlan, RegimeReport,
};
use mixlim_core::samplers::substream_seed;
use mixlim_core::special::normal_cdf;
use mixlim_core::stable::char_exponent;
use mixlim_core::stats::{
    ecf_distance, ks_one_sample, ks_two_sample, LlnConfig, LlnMode, RatioSummary,
};
use serde::Serialize;

use crate::driver;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TestKind {
    /// Pick from the regime.
    Auto,
    Normal,
    Stable,
    LlnFull,
    LlnLight,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyConfig {
    pub replicates: usize,
    pub seed: u64,
    pub level: f64,
    pub threads: usize,
    pub test: TestKind,
    /// Reference draws for two-sample tests; defaults to `replicates`.
    pub reference_size: Option<usize>,
    pub ecf_threshold: f64,
    pub lln_delta: f64,
    pub lln_coverage: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            replicates: 1000,
            seed: 42,
            level: 0.01,
            threads: 1,
            test: TestKind::Auto,
            reference_size: None,
            ecf_threshold: 0.1,
            lln_delta: 0.05,
            lln_coverage: 0.95,
        }
    }
}

/// Frequencies at which the empirical characteristic function is compared.
pub fn ecf_grid() -> Vec<f64> {
    (-8..=8).map(|i| i as f64 * 0.25).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct RungReport {
    pub n: u64,
    pub test: &'static str,
    pub center: f64,
    pub scale: f64,
    pub statistic: f64,
    pub critical_value: f64,
    pub level: f64,
    pub replicates: usize,
    pub reference_size: Option<usize>,
    pub decisive: bool,
    pub ecf_distance: Option<f64>,
    pub reference_shift: Option<f64>,
    pub heavy_count_mean: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LlnRung {
    pub n: u64,
    pub median: f64,
    pub q05: f64,
    pub q95: f64,
    pub within: f64,
}

impl From<RatioSummary> for LlnRung {
    fn from(r: RatioSummary) -> Self {
        LlnRung {
            n: r.n,
            median: r.median,
            q05: r.q05,
            q95: r.q95,
            within: r.within,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LlnSection {
    pub mode: &'static str,
    pub delta: f64,
    pub coverage_threshold: f64,
    pub monotone: bool,
    pub rungs: Vec<LlnRung>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub alpha: f64,
    pub lambda: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub fluctuation: &'static str,
    pub branch: Option<&'static str>,
    pub lln: &'static str,
    pub zone: Option<u8>,
    pub rungs: Vec<RungReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lln_check: Option<LlnSection>,
    pub pass: bool,
}

fn branch_name(r: &RegimeReport) -> Option<&'static str> {
    match r.fluctuation {
        FluctuationRegime::Stable(b) => Some(b.as_str()),
        _ => None,
    }
}

/// Run a campaign. Returns the report whether or not it passed; the caller
/// decides how to surface a failed verdict.
pub fn run(p: &ModelParams, ladder: &[u64], cfg: &VerifyConfig) -> Result<VerifyReport> {
    if ladder.is_empty() {
        return Err(Error::Usage("ladder must contain at least one n".into()));
    }
    let report = classify(p.alpha(), p.gamma1(), p.gamma2());
    let mut out = VerifyReport {
        schema: 1,
        alpha: p.alpha(),
        lambda: p.lambda(),
        gamma1: p.gamma1(),
        gamma2: p.gamma2(),
        fluctuation: report.fluctuation.as_str(),
        branch: branch_name(&report),
        lln: report.lln.as_str(),
        zone: report.zone,
        rungs: Vec::new(),
        lln_check: None,
        pass: false,
    };
    match cfg.test {
        TestKind::LlnFull | TestKind::LlnLight => {
            let mode = if cfg.test == TestKind::LlnFull {
                LlnMode::FullMean
            } else {
                LlnMode::LightMean
            };
            let lln_cfg = LlnConfig {
                replicates: cfg.replicates,
                seed: cfg.seed,
                mode,
                delta: cfg.lln_delta,
                light_only: false,
            };
            let rep = driver::lln_ratio_check(p, ladder, &lln_cfg, cfg.threads)?;
            out.pass = rep.passes(cfg.lln_coverage);
            out.lln_check = Some(LlnSection {
                mode: mode.as_str(),
                delta: cfg.lln_delta,
                coverage_threshold: cfg.lln_coverage,
                monotone: rep.is_monotone(),
                rungs: rep.rungs.into_iter().map(LlnRung::from).collect(),
            });
        }
        _ => {
            for (i, &n) in ladder.iter().enumerate() {
                out.rungs.push(run_rung(p, &report, n, i as u64, cfg)?);
            }
            out.pass = out.rungs.last().is_some_and(|r| r.pass);
        }
    }
    Ok(out)
}

fn rung_plan(
    p: &ModelParams,
    report: &RegimeReport,
    n: u64,
    test: TestKind,
) -> Result<NormalizationPlan> {
    let inst = derive_instance(p, n)?;
    match test {
        TestKind::Normal => {
            // the full-mixture Gaussian normalization, whatever the regime
            let nf = n as f64;
            Ok(NormalizationPlan {
                center: nf * mean_z(p, &inst),
                scale: (nf * var_z(p, &inst)).sqrt(),
                limit: LimitLaw::StdNormal,
            })
        }
        TestKind::Stable => {
            let plan = normalization_plan(p, &inst, report)?;
            if !matches!(plan.limit, LimitLaw::Stable(_)) {
                return Err(mixlim_core::Error::NoTheorem("no stable limit at this point").into());
            }
            Ok(plan)
        }
        _ => Ok(normalization_plan(p, &inst, report)?),
    }
}

fn run_rung(
    p: &ModelParams,
    report: &RegimeReport,
    n: u64,
    index: u64,
    cfg: &VerifyConfig,
) -> Result<RungReport> {
    let inst = derive_instance(p, n)?;
    let plan = rung_plan(p, report, n, cfg.test)?;
    let seed = substream_seed(cfg.seed, u64::MAX - index);
    let sample = driver::monte_carlo(p, &inst, cfg.replicates, seed, &plan, cfg.threads)?;
    let mut values = sample.values;
    values.sort_by(|a, b| a.total_cmp(b));
    let mut rung = RungReport {
        n,
        test: "",
        center: plan.center,
        scale: plan.scale,
        statistic: 0.0,
        critical_value: 0.0,
        level: cfg.level,
        replicates: cfg.replicates,
        reference_size: None,
        decisive: false,
        ecf_distance: None,
        reference_shift: None,
        heavy_count_mean: sample.heavy_count_mean,
        pass: false,
    };
    match plan.limit {
        LimitLaw::StdNormal => {
            let t = ks_one_sample(&values, normal_cdf, cfg.level)?;
            rung.test = "ks_normal";
            rung.statistic = t.statistic;
            rung.critical_value = t.critical_value;
            rung.decisive = t.is_decisive();
            rung.pass = t.pass && rung.decisive;
        }
        LimitLaw::Stable(reference) => {
            let m_ref = cfg.reference_size.unwrap_or(cfg.replicates);
            let ref_seed = substream_seed(cfg.seed ^ 0x05EE_D0F5_AB1E, index);
            let ref_sample =
                driver::stable_sample(&reference.spec, reference.compensated, m_ref, ref_seed)?;
            let t = ks_two_sample(&values, &ref_sample, cfg.level)?;
            let ecf = ecf_distance(
                &values,
                |u| char_exponent(u, &reference.spec, reference.compensated),
                &ecf_grid(),
            )?;
            rung.test = "ks_two_sample_stable";
            rung.statistic = t.statistic;
            rung.critical_value = t.critical_value;
            rung.reference_size = Some(m_ref);
            rung.decisive = t.is_decisive();
            rung.ecf_distance = Some(ecf);
            rung.reference_shift = Some(reference.spec.shift());
            rung.pass = t.pass && rung.decisive && ecf < cfg.ecf_threshold;
        }
    }
    Ok(rung)
}
