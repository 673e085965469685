use mixlim_core::samplers::RngStream;
use mixlim_core::special::erfc;
use mixlim_core::stable::{cdf, kanter, StableLimitSpec, StableSampler};
use mixlim_core::stats::{ks_one_sample, ks_two_sample};

fn draws(sampler: &StableSampler, seed: u64, m: usize) -> Vec<f64> {
    let mut rng = RngStream::new(seed);
    (0..m).map(|_| sampler.sample(&mut rng)).collect()
}

#[test]
fn kanter_sample_matches_levy_cdf() {
    let spec = StableLimitSpec::unit(0.5).unwrap();
    let sampler = StableSampler::new(&spec, false).unwrap();
    let mut xs = draws(&sampler, 10, 2000);
    xs.sort_by(|a, b| a.total_cmp(b));
    let levy = |x: f64| erfc(std::f64::consts::PI.sqrt() / (2.0 * x.sqrt()));
    let r = ks_one_sample(&xs, levy, 0.01).unwrap();
    assert!(r.statistic < 0.05, "{}", r.statistic);
}

#[test]
fn stability_under_convolution() {
    for &alpha in &[0.3, 0.5, 0.8] {
        let mut rng = RngStream::new(20);
        let m = 10_000;
        let single: Vec<f64> = (0..m)
            .map(|_| kanter(alpha, rng.uniform(), rng.uniform()))
            .collect();
        let scale = 2f64.powf(1.0 / alpha);
        let pair: Vec<f64> = (0..m)
            .map(|_| {
                let k1 = kanter(alpha, rng.uniform(), rng.uniform());
                let k2 = kanter(alpha, rng.uniform(), rng.uniform());
                (k1 + k2) / scale
            })
            .collect();
        let r = ks_two_sample(&single, &pair, 0.01).unwrap();
        assert!(
            r.pass,
            "alpha {alpha}: {} vs {}",
            r.statistic, r.critical_value
        );
    }
}

#[test]
fn independent_samples_agree() {
    let cases = [
        (0.5, false),
        (0.5, true),
        (0.8, true),
        (1.2, true),
        (1.5, true),
        (1.9, true),
    ];
    for &(alpha, comp) in &cases {
        let spec = StableLimitSpec::new(alpha, 1.0, 0.25).unwrap();
        let sampler = StableSampler::new(&spec, comp).unwrap();
        let a = draws(&sampler, 31, 10_000);
        let b = draws(&sampler, 32, 10_000);
        let r = ks_two_sample(&a, &b, 0.01).unwrap();
        assert!(r.statistic < 1.63 * (2.0f64 / 1e4).sqrt(), "alpha {alpha}");
    }
}

#[test]
fn cms_sample_matches_numeric_cdf() {
    let spec = StableLimitSpec::new(1.5, 1.0, 0.0).unwrap();
    let sampler = StableSampler::new(&spec, true).unwrap();
    let mut xs = draws(&sampler, 40, 400);
    xs.sort_by(|a, b| a.total_cmp(b));
    let r = ks_one_sample(&xs, |x| cdf(x, &spec, true).unwrap(), 0.01).unwrap();
    assert!(r.pass, "{} vs {}", r.statistic, r.critical_value);
}

/// Least-squares slope of `ln(1 − F)` against `ln x`.
fn tail_slope(spec: &StableLimitSpec, comp: bool, xs: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .map(|&x| (x.ln(), (1.0 - cdf(x, spec, comp).unwrap()).ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[test]
fn upper_tail_follows_power_law() {
    let xs = [100.0, 316.0, 1000.0, 3162.0, 10_000.0];
    for &alpha in &[0.5, 0.8] {
        let spec = StableLimitSpec::unit(alpha).unwrap();
        let slope = tail_slope(&spec, false, &xs);
        assert!((slope + alpha).abs() < 0.05, "alpha {alpha}: slope {slope}");
    }
    // the survival function is c x^{−α}(1 + o(1))
    let spec = StableLimitSpec::unit(0.5).unwrap();
    let sf = 1.0 - cdf(1e4, &spec, false).unwrap();
    let ratio = sf / 1e4f64.powf(-0.5);
    assert!((0.5..2.0).contains(&ratio), "{ratio}");
}

#[test]
fn cdf_support_and_limits() {
    let spec = StableLimitSpec::unit(0.5).unwrap();
    assert_eq!(cdf(-1.0 - 1e-12, &spec, true).unwrap(), 0.0);
    assert_eq!(cdf(0.0, &spec, false).unwrap(), 0.0);
    assert!(cdf(1e6, &spec, false).unwrap() > 0.99);
    let spec = StableLimitSpec::unit(1.5).unwrap();
    assert!(cdf(-30.0, &spec, true).unwrap() < 1e-6);
}
