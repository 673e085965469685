//! Numeric checks of the triangular-array limit conditions at a fixed row.

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{domain, Result};
use crate::model::{
    heavy_partial_moment, light_partial_moment, mean_z, pareto_mass, var_z, InstanceParams,
    ModelParams,
};
use crate::quad::{integrate_breaks, Tolerance};
use crate::special::gamma;

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if !(v > 0.0) || v.is_nan() {
        return Err(domain(name, v, "must be positive"));
    }
    Ok(())
}

/// `P(Y > y)` for the truncated Pareto law.
fn pareto_survival(y: f64, alpha: f64, truncation: f64) -> f64 {
    if y < 1.0 {
        1.0
    } else if y >= truncation {
        0.0
    } else {
        // (y^{−α} − M^{−α}) / (1 − M^{−α})
        let a = (-alpha * y.ln()).exp();
        let b = (-alpha * truncation.ln()).exp();
        ((a - b) / pareto_mass(alpha, truncation)).max(0.0)
    }
}

/// `Σ_k P(Z_{nk} > β x) = n[(1−ε)e^{−λβx} + ε P(Y > βx)]`.
pub fn tail_sum(x: f64, p: &ModelParams, inst: &InstanceParams, beta: f64) -> Result<f64> {
    check_positive("x", x)?;
    check_positive("beta", beta)?;
    let y = beta * x;
    let eps = inst.eps();
    let light = (1.0 - eps) * (-p.lambda() * y).exp();
    let heavy = eps * pareto_survival(y, p.alpha(), inst.truncation());
    Ok(inst.n() as f64 * (light + heavy))
}

/// `E|Z − EZ|^r` by adaptive quadrature over the mixture density.
///
/// The light part is split at the kink `EZ`; the heavy part is integrated in
/// `s = ln y` over `[0, ln M]`, split at `ln EZ` when it falls inside.
pub fn absolute_central_moment(p: &ModelParams, inst: &InstanceParams, r: f64) -> Result<f64> {
    check_positive("r", r)?;
    let m = mean_z(p, inst);
    let lambda = p.lambda();
    let alpha = p.alpha();
    let eps = inst.eps();
    let tol = Tolerance::new(0.0, 1e-10).with_max_intervals(2000);

    // E|X − m|^r = ∫₀^m (m − x)^r λe^{−λx} dx + e^{−λm} Γ(r+1)/λ^r
    let below = integrate_breaks(
        |x: f64| (m - x).powf(r) * lambda * (-lambda * x).exp(),
        &light_breaks(m, lambda),
        tol,
    )?
    .value;
    let above = (-lambda * m).exp() * gamma(r + 1.0) / lambda.powf(r);
    let light = below + above;

    let heavy = if eps > 0.0 {
        let lm = inst.truncation().ln();
        let mass = pareto_mass(alpha, inst.truncation());
        let mut breaks = Vec::from([0.0]);
        if m > 1.0 && m.ln() < lm {
            breaks.push(m.ln());
        }
        breaks.push(lm);
        integrate_breaks(
            |s: f64| (s.exp() - m).abs().powf(r) * alpha * (-alpha * s).exp() / mass,
            &breaks,
            tol,
        )?
        .value
    } else {
        0.0
    };
    Ok((1.0 - eps) * light + eps * heavy)
}

fn light_breaks(m: f64, lambda: f64) -> Vec<f64> {
    let mut v = Vec::from([0.0]);
    for k in [1.0, 10.0, 40.0] {
        let x = k / lambda;
        if x < m {
            v.push(x);
        }
    }
    v.push(m);
    v
}

/// `Ω_n = E|Z − EZ|^{2+δ} / (n^{δ/2} (Var Z)^{1+δ/2})`.
pub fn lyapounov_ratio(p: &ModelParams, inst: &InstanceParams, delta: f64) -> Result<f64> {
    check_positive("delta", delta)?;
    let moment = absolute_central_moment(p, inst, 2.0 + delta)?;
    let n = inst.n() as f64;
    Ok(moment / (n.powf(0.5 * delta) * var_z(p, inst).powf(1.0 + 0.5 * delta)))
}

/// Truncated-mean centering `(n/β)[(1−ε)E[X 1{X<β}] + ε E[Y 1{Y<β}]]`.
pub fn centering_a_n(p: &ModelParams, inst: &InstanceParams, beta: f64) -> Result<f64> {
    if !(beta.ln() >= f64::EPSILON.sqrt()) {
        return Err(domain(
            "beta",
            beta,
            "centering window must extend past the heavy support start at 1",
        ));
    }
    let eps = inst.eps();
    let light = light_partial_moment(1, beta, p.lambda());
    let heavy = heavy_partial_moment(1.0, beta, p.alpha(), inst.truncation());
    Ok(inst.n() as f64 / beta * ((1.0 - eps) * light + eps * heavy))
}

/// `n[E[(Z/β)² 1{Z<βτ}] − (E[(Z/β) 1{Z<βτ}])²]`.
pub fn truncated_variance(
    p: &ModelParams,
    inst: &InstanceParams,
    beta: f64,
    tau: f64,
) -> Result<f64> {
    check_positive("beta", beta)?;
    check_positive("tau", tau)?;
    let b = beta * tau;
    let eps = inst.eps();
    let (alpha, lambda, m) = (p.alpha(), p.lambda(), inst.truncation());
    let first = (1.0 - eps) * light_partial_moment(1, b, lambda)
        + eps * heavy_partial_moment(1.0, b, alpha, m);
    let second = (1.0 - eps) * light_partial_moment(2, b, lambda)
        + eps * heavy_partial_moment(2.0, b, alpha, m);
    let (first, second) = (first / beta, second / (beta * beta));
    Ok(inst.n() as f64 * (second - first * first).max(0.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsReport {
    /// `(x, Σ_k (1 − F_{nk}(x)))`
    pub tail_sum_values: Vec<(f64, f64)>,
    pub lyapounov: f64,
    pub centering_a_n: f64,
    pub truncated_var: f64,
}

/// Settings for [`diagnostics_report`].
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsConfig {
    pub x_grid: Vec<f64>,
    pub delta: f64,
    pub tau: f64,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        DiagnosticsConfig {
            x_grid: Vec::from([0.5, 1.0, 2.0]),
            delta: 0.5,
            tau: 0.1,
        }
    }
}

pub fn diagnostics_report(
    p: &ModelParams,
    inst: &InstanceParams,
    beta: f64,
    cfg: &DiagnosticsConfig,
) -> Result<DiagnosticsReport> {
    let tail_sum_values = cfg
        .x_grid
        .iter()
        .map(|&x| Ok((x, tail_sum(x, p, inst, beta)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(DiagnosticsReport {
        tail_sum_values,
        lyapounov: lyapounov_ratio(p, inst, cfg.delta)?,
        centering_a_n: centering_a_n(p, inst, beta)?,
        truncated_var: truncated_variance(p, inst, beta, cfg.tau)?,
    })
}
