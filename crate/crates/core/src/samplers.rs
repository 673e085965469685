//! Inverse-CDF transforms, mixture draws, row sums and the serial Monte Carlo
//! driver.
//!
//! Every replicate owns a substream derived from the master seed, and every
//! mixture draw consumes exactly two uniforms (one for the Bernoulli switch,
//! one for the selected component). Results therefore depend only on
//! `(params, n, replicate index, master seed)`.

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{domain, Error, Result};
use crate::model::{pareto_mass, InstanceParams, ModelParams};
use crate::regimes::NormalizationPlan;
use crate::summation::PairwiseSum;

/// Weyl increment used to separate replicate substreams.
pub const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output finalizer.
pub fn splitmix64_mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replicate `k`: `mix(master ^ k * GOLDEN_GAMMA)`.
pub fn substream_seed(master: u64, k: u64) -> u64 {
    splitmix64_mix(master ^ k.wrapping_mul(GOLDEN_GAMMA))
}

/// A single-owner stream of uniforms on the open interval `(0, 1)`.
///
/// Backed by xoshiro256++ seeded through SplitMix64. Each uniform uses the
/// top 53 bits of one output word: `(w >> 11) + 1/2` scaled by `2^-53`.
#[derive(Debug, Clone)]
pub struct RngStream {
    gen: Xoshiro256PlusPlus,
    consumed: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream {
            gen: Xoshiro256PlusPlus::seed_from_u64(seed),
            consumed: 0,
        }
    }

    /// The stream of replicate `k` under `master`.
    pub fn substream(master: u64, k: u64) -> Self {
        Self::new(substream_seed(master, k))
    }

    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.consumed += 1;
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        ((self.gen.next_u64() >> 11) as f64 + 0.5) * SCALE
    }

    /// Number of uniforms drawn so far.
    pub fn consumed(&self) -> u64 {
        self.consumed
    }
}

/// `-ln(1 - u) / lambda`, the Exponential(lambda) quantile.
pub fn quantile_light(u: f64, lambda: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&u) {
        return Err(domain("u", u, "probability must lie in [0, 1)"));
    }
    if !(lambda > 0.0) {
        return Err(domain("lambda", lambda, "rate must be positive"));
    }
    Ok(-(-u).ln_1p() / lambda)
}

/// Quantile of Pareto(alpha) truncated to `[1, M]`:
/// `(1 − u(1 − M^{−α}))^{−1/α}`.
pub fn quantile_truncated_pareto(u: f64, alpha: f64, truncation: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) {
        return Err(domain("u", u, "probability must lie in [0, 1]"));
    }
    if !(alpha > 0.0) {
        return Err(domain("alpha", alpha, "tail index must be positive"));
    }
    if !(truncation > 1.0) {
        return Err(domain(
            "M",
            truncation,
            "truncated support [1, M] is degenerate",
        ));
    }
    if u == 1.0 {
        return Ok(truncation);
    }
    Ok(pareto_quantile(
        u,
        pareto_mass(alpha, truncation),
        -1.0 / alpha,
        truncation,
    ))
}

#[inline]
fn pareto_quantile(u: f64, mass: f64, neg_inv_alpha: f64, truncation: f64) -> f64 {
    ((-u * mass).ln_1p() * neg_inv_alpha)
        .exp()
        .clamp(1.0, truncation)
}

/// Precomputed constants for drawing from one row's mixture law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureSampler {
    eps: f64,
    inv_lambda: f64,
    mass: f64,
    neg_inv_alpha: f64,
    truncation: f64,
}

impl MixtureSampler {
    pub fn new(p: &ModelParams, inst: &InstanceParams) -> Self {
        MixtureSampler {
            eps: inst.eps(),
            inv_lambda: 1.0 / p.lambda(),
            mass: pareto_mass(p.alpha(), inst.truncation()),
            neg_inv_alpha: -1.0 / p.alpha(),
            truncation: inst.truncation(),
        }
    }

    /// Map a Bernoulli uniform and a component uniform to a draw.
    /// `u_switch <= eps` selects the heavy component. Returns the value and
    /// whether the heavy component was used.
    #[inline]
    pub fn from_uniforms(&self, u_switch: f64, u: f64) -> (f64, bool) {
        if u_switch <= self.eps {
            (
                pareto_quantile(u, self.mass, self.neg_inv_alpha, self.truncation),
                true,
            )
        } else {
            (-(-u).ln_1p() * self.inv_lambda, false)
        }
    }

    #[inline]
    pub fn draw(&self, rng: &mut RngStream) -> (f64, bool) {
        let u_switch = rng.uniform();
        let u = rng.uniform();
        self.from_uniforms(u_switch, u)
    }
}

/// One draw of `Z = (1 − B)X + BY`.
pub fn sample_mixture(rng: &mut RngStream, p: &ModelParams, inst: &InstanceParams) -> f64 {
    MixtureSampler::new(p, inst).draw(rng).0
}

/// Sum of one row together with its number of heavy draws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowSum {
    pub sum: f64,
    pub heavy: u64,
}

pub fn sum_row(rng: &mut RngStream, sampler: &MixtureSampler, n: u64) -> RowSum {
    let mut acc = PairwiseSum::new();
    let mut heavy = 0u64;
    for _ in 0..n {
        let (z, h) = sampler.draw(rng);
        heavy += h as u64;
        acc.add(z);
    }
    RowSum {
        sum: acc.total(),
        heavy,
    }
}

/// `S_n = Σ_{k=1}^{n} Z_{nk}`, pairwise accumulated.
pub fn sample_sum(rng: &mut RngStream, p: &ModelParams, inst: &InstanceParams) -> f64 {
    sum_row(rng, &MixtureSampler::new(p, inst), inst.n()).sum
}

/// Row sum of replicate `k` under `master_seed`.
pub fn replicate(sampler: &MixtureSampler, n: u64, master_seed: u64, k: u64) -> RowSum {
    sum_row(&mut RngStream::substream(master_seed, k), sampler, n)
}

/// Normalized statistics of independent replicates, ordered by replicate index.
#[derive(Debug, Clone, PartialEq)]
pub struct SumSample {
    pub values: Vec<f64>,
    pub n: u64,
    pub plan: NormalizationPlan,
    /// Average number of heavy draws per row.
    pub heavy_count_mean: f64,
}

impl SumSample {
    /// Assemble from row sums listed in replicate order.
    pub fn from_rows<I>(rows: I, n: u64, plan: NormalizationPlan) -> Result<Self>
    where
        I: IntoIterator<Item = RowSum>,
    {
        let mut values = Vec::new();
        let mut heavy_total = 0u64;
        for (i, row) in rows.into_iter().enumerate() {
            let v = plan.normalize(row.sum);
            if !v.is_finite() {
                return Err(Error::NonFinite(i));
            }
            heavy_total += row.heavy;
            values.push(v);
        }
        if values.is_empty() {
            return Err(Error::Empty("replicate set"));
        }
        let heavy_count_mean = heavy_total as f64 / values.len() as f64;
        Ok(SumSample {
            values,
            n,
            plan,
            heavy_count_mean,
        })
    }
}

/// Serial Monte Carlo driver: replicate `k` uses substream `k`.
pub fn monte_carlo(
    p: &ModelParams,
    inst: &InstanceParams,
    replicates: usize,
    master_seed: u64,
    plan: &NormalizationPlan,
) -> Result<SumSample> {
    if replicates == 0 {
        return Err(Error::Empty("replicate set"));
    }
    let sampler = MixtureSampler::new(p, inst);
    let rows = (0..replicates as u64).map(|k| replicate(&sampler, inst.n(), master_seed, k));
    SumSample::from_rows(rows, inst.n(), *plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{derive_instance, mean_z, var_z};
    use crate::regimes::{classify, normalization_plan};

    fn params(a: f64, l: f64, g1: f64, g2: f64) -> ModelParams {
        ModelParams::new(a, l, g1, g2).unwrap()
    }

    #[test]
    fn substreams_differ_and_repeat() {
        let a: Vec<f64> = {
            let mut s = RngStream::substream(42, 3);
            (0..4).map(|_| s.uniform()).collect()
        };
        let b: Vec<f64> = {
            let mut s = RngStream::substream(42, 3);
            (0..4).map(|_| s.uniform()).collect()
        };
        let c: Vec<f64> = {
            let mut s = RngStream::substream(42, 4);
            (0..4).map(|_| s.uniform()).collect()
        };
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.iter().all(|&u| u > 0.0 && u < 1.0));
    }

    #[test]
    fn light_quantile_examples() {
        assert_eq!(quantile_light(0.0, 1.0).unwrap(), 0.0);
        assert!((quantile_light(0.5, 1.0).unwrap() - core::f64::consts::LN_2).abs() < 1e-15);
        let u = 1.0 - (-2.0f64).exp();
        assert!((quantile_light(u, 2.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(quantile_light(1.0, 1.0).is_err());
        assert!(quantile_light(-0.1, 1.0).is_err());
    }

    #[test]
    fn pareto_quantile_examples() {
        assert_eq!(quantile_truncated_pareto(0.0, 0.5, 100.0).unwrap(), 1.0);
        assert_eq!(quantile_truncated_pareto(1.0, 0.5, 100.0).unwrap(), 100.0);
        let x = quantile_truncated_pareto(0.75, 1.0, 4.0).unwrap();
        assert!((x - 16.0 / 7.0).abs() < 1e-14);
        // F(x) = (1 - 1/x)/(1 - 1/4)
        assert!(((1.0 - 1.0 / x) / 0.75 - 0.75).abs() < 1e-14);
        assert!(quantile_truncated_pareto(1.1, 0.5, 100.0).is_err());
        assert!(quantile_truncated_pareto(0.5, 0.5, 1.0).is_err());
    }

    #[test]
    fn forced_uniform_draws() {
        let p = params(0.5, 1.0, 1.0, 1.0);
        let inst = InstanceParams::new(100, 0.1, 100.0).unwrap();
        let s = MixtureSampler::new(&p, &inst);
        let (z, heavy) = s.from_uniforms(0.99, 0.5);
        assert!(!heavy);
        assert!((z - core::f64::consts::LN_2).abs() < 1e-15);
        let (z, heavy) = s.from_uniforms(0.05, 0.0);
        assert!(heavy);
        assert_eq!(z, 1.0);
        // the switch is inclusive at eps
        assert!(s.from_uniforms(0.1, 0.3).1);
    }

    #[test]
    fn two_uniforms_per_draw() {
        let p = params(0.5, 1.0, 1.0, 0.2);
        let inst = derive_instance(&p, 1000).unwrap();
        let mut rng = RngStream::new(7);
        for i in 1..=500u64 {
            sample_mixture(&mut rng, &p, &inst);
            assert_eq!(rng.consumed(), 2 * i);
        }
        let mut rng = RngStream::new(7);
        sample_sum(&mut rng, &p, &inst);
        assert_eq!(rng.consumed(), 2000);
    }

    #[test]
    fn heavy_fraction_is_binomial() {
        let p = params(0.5, 1.0, 1.0, 1.0);
        let inst = InstanceParams::new(1_000_000, 0.1, 100.0).unwrap();
        let row = sum_row(
            &mut RngStream::new(11),
            &MixtureSampler::new(&p, &inst),
            1_000_000,
        );
        let frac = row.heavy as f64 / 1e6;
        assert!((frac - 0.1).abs() < 0.001, "{frac}");
    }

    #[test]
    fn single_term_sum_is_a_draw() {
        let p = params(0.7, 1.5, 1.0, 0.5);
        let inst = InstanceParams::new(1, 0.3, 50.0).unwrap();
        let a = sample_sum(&mut RngStream::new(5), &p, &inst);
        let b = sample_mixture(&mut RngStream::new(5), &p, &inst);
        assert_eq!(a, b);
    }

    #[test]
    fn identity_plan_gives_raw_draws() {
        let p = params(0.7, 1.5, 1.0, 0.5);
        let inst = InstanceParams::new(1, 0.3, 50.0).unwrap();
        let sample = monte_carlo(&p, &inst, 5, 99, &NormalizationPlan::identity()).unwrap();
        for (k, v) in sample.values.iter().enumerate() {
            let mut rng = RngStream::substream(99, k as u64);
            assert_eq!(*v, sample_mixture(&mut rng, &p, &inst));
        }
    }

    #[test]
    fn sum_mean_within_four_standard_errors() {
        let p = params(0.5, 1.0, 1.0, 0.5);
        let inst = derive_instance(&p, 1000).unwrap();
        let reps = 10_000;
        let sample = monte_carlo(&p, &inst, reps, 2024, &NormalizationPlan::identity()).unwrap();
        let mean = sample.values.iter().sum::<f64>() / reps as f64 / 1000.0;
        let se = (var_z(&p, &inst) / 1000.0 / reps as f64).sqrt();
        assert!(
            (mean - mean_z(&p, &inst)).abs() < 4.0 * se,
            "mean {mean} vs {}",
            mean_z(&p, &inst)
        );
    }

    #[test]
    fn light_only_sum_obeys_lln() {
        let p = params(0.5, 2.0, 1.0, 0.1);
        let inst = derive_instance(&p, 100_000).unwrap().light_only();
        let s = sample_sum(&mut RngStream::new(3), &p, &inst) / 1e5;
        let sd = 0.5 / 1e5f64.sqrt();
        assert!((s - 0.5).abs() < 4.0 * sd);
    }

    #[test]
    fn clt_zone_standardized_mean_near_zero() {
        let p = params(0.5, 1.0, 1.0, 2.0);
        let inst = derive_instance(&p, 100_000).unwrap();
        let plan = normalization_plan(&p, &inst, &classify(0.5, 1.0, 2.0)).unwrap();
        let sample = monte_carlo(&p, &inst, 1000, 42, &plan).unwrap();
        let mean = sample.values.iter().sum::<f64>() / 1000.0;
        assert!(mean.abs() < 4.0 / 1000f64.sqrt(), "{mean}");
    }

    #[test]
    fn moments_match_draws() {
        let p = params(0.8, 1.0, 1.0, 0.5);
        let inst = InstanceParams::new(10, 0.2, 30.0).unwrap();
        let s = MixtureSampler::new(&p, &inst);
        let mut rng = RngStream::new(77);
        let m = 1_000_000;
        let mut sum = PairwiseSum::new();
        let mut sq = PairwiseSum::new();
        for _ in 0..m {
            let z = s.draw(&mut rng).0;
            sum.add(z);
            sq.add(z * z);
        }
        let mean = sum.total() / m as f64;
        let var = sq.total() / m as f64 - mean * mean;
        let v = var_z(&p, &inst);
        assert!((mean - mean_z(&p, &inst)).abs() < 4.0 * (v / m as f64).sqrt());
        // standard error of the sample variance from the fourth central moment
        let m4 = (crate::diagnostics::absolute_central_moment(&p, &inst, 4.0)).unwrap();
        let se_var = ((m4 - v * v) / m as f64).sqrt();
        assert!((var - v).abs() < 4.0 * se_var, "{var} vs {v}");
    }
}
