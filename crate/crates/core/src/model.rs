//! Mixture model parameters and moment formulas.
//!
//! A summand is `Z = (1 - B) X + B Y` with `B ~ Bernoulli(eps)`,
//! `X ~ Exponential(lambda)` and `Y` Pareto(`alpha`) on `[1, ∞)` conditioned
//! to `[1, M]`. Along a triangular array the row parameters are
//! `eps_n = n^{-gamma2}` and `M_n = n^{gamma1}`.

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{domain, Result};
use crate::special::{exprel, gamma, poisson_upper_tail};

/// The asymptotic family `(alpha, lambda, gamma1, gamma2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    alpha: f64,
    lambda: f64,
    gamma1: f64,
    gamma2: f64,
}

impl ModelParams {
    pub fn new(alpha: f64, lambda: f64, gamma1: f64, gamma2: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(domain(
                "alpha",
                alpha,
                "heavy-tail index must lie in (0, 2)",
            ));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(domain("lambda", lambda, "light-tail rate must be positive"));
        }
        if !(gamma1 > 0.0 && gamma1.is_finite()) {
            return Err(domain(
                "gamma1",
                gamma1,
                "truncation exponent must be positive",
            ));
        }
        if !(gamma2 > 0.0 && gamma2.is_finite()) {
            return Err(domain("gamma2", gamma2, "mixing exponent must be positive"));
        }
        Ok(ModelParams {
            alpha,
            lambda,
            gamma1,
            gamma2,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }
    pub fn gamma2(&self) -> f64 {
        self.gamma2
    }
}

/// Concrete row parameters `(n, eps_n, M_n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstanceParams {
    n: u64,
    eps: f64,
    truncation: f64,
}

impl InstanceParams {
    /// Build an instance directly. Accepts `eps = 0` so that the pure
    /// light-tail array can be simulated; [`derive_instance`] never produces it.
    pub fn new(n: u64, eps: f64, truncation: f64) -> Result<Self> {
        if n == 0 {
            return Err(domain("n", 0.0, "row size must be at least 1"));
        }
        if !(0.0..1.0).contains(&eps) {
            return Err(domain("eps", eps, "mixing probability must lie in [0, 1)"));
        }
        if !(truncation > 1.0 && truncation.is_finite()) {
            return Err(domain("M", truncation, "truncation level must exceed 1"));
        }
        Ok(InstanceParams { n, eps, truncation })
    }

    pub fn n(&self) -> u64 {
        self.n
    }
    pub fn eps(&self) -> f64 {
        self.eps
    }
    /// Truncation level `M_n`.
    pub fn truncation(&self) -> f64 {
        self.truncation
    }

    /// Same row with the heavy component switched off.
    pub fn light_only(&self) -> Self {
        InstanceParams { eps: 0.0, ..*self }
    }
}

/// `(n, n^{-gamma2}, n^{gamma1})`.
pub fn derive_instance(p: &ModelParams, n: u64) -> Result<InstanceParams> {
    if n < 2 {
        return Err(domain(
            "n",
            n as f64,
            "need n >= 2 so that eps_n < 1 and M_n > 1",
        ));
    }
    let nf = n as f64;
    InstanceParams::new(n, nf.powf(-p.gamma2), nf.powf(p.gamma1))
}

/// `E[X^s]` for `X ~ Exponential(lambda)`: `Γ(s+1) / lambda^s`.
pub fn mu1(s: f64, lambda: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(domain("s", s, "moment order must be positive"));
    }
    if !(lambda > 0.0) {
        return Err(domain("lambda", lambda, "rate must be positive"));
    }
    Ok(light_moment(s, lambda))
}

fn light_moment(s: f64, lambda: f64) -> f64 {
    gamma(s + 1.0) / lambda.powf(s)
}

/// Exact `E[Y^s]` for the truncated Pareto law on `[1, M]`.
///
/// `(α/(s−α))·(M^{s−α}−1)/(1−M^{−α})`, with the `s = α` case
/// `α·ln M/(1−M^{−α})` obtained as the continuous limit.
pub fn mu2(s: f64, alpha: f64, truncation: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(domain("s", s, "moment order must be positive"));
    }
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(domain(
            "alpha",
            alpha,
            "heavy-tail index must lie in (0, 2)",
        ));
    }
    if !(truncation > 1.0) {
        return Err(domain(
            "M",
            truncation,
            "truncated support [1, M] is degenerate",
        ));
    }
    Ok(heavy_partial_moment(s, truncation, alpha, truncation))
}

/// Probability mass `1 - M^{-alpha}` of the untruncated Pareto law on `[1, M]`.
pub(crate) fn pareto_mass(alpha: f64, truncation: f64) -> f64 {
    -(-alpha * truncation.ln()).exp_m1()
}

/// `E[Y^s 1{Y < b}]` for the truncated Pareto law.
pub(crate) fn heavy_partial_moment(s: f64, b: f64, alpha: f64, truncation: f64) -> f64 {
    let upper = b.min(truncation);
    if upper <= 1.0 {
        return 0.0;
    }
    let l = upper.ln();
    alpha * l * exprel((s - alpha) * l) / pareto_mass(alpha, truncation)
}

/// `E[X^k 1{X < b}]` for `X ~ Exponential(lambda)` and integer `k`.
pub(crate) fn light_partial_moment(k: u32, b: f64, lambda: f64) -> f64 {
    if b <= 0.0 {
        return 0.0;
    }
    let k_fact: f64 = (1..=k).map(|j| j as f64).product();
    k_fact / lambda.powi(k as i32) * poisson_upper_tail(k, lambda * b)
}

/// Exact mixture mean `(1−ε)·μ₁(1) + ε·μ₂(1)`.
pub fn mean_z(p: &ModelParams, inst: &InstanceParams) -> f64 {
    let eps = inst.eps;
    let light = 1.0 / p.lambda;
    let heavy = heavy_partial_moment(1.0, inst.truncation, p.alpha, inst.truncation);
    (1.0 - eps) * light + eps * heavy
}

/// Exact mixture variance.
///
/// Evaluated as `(1−ε)Var X + ε Var Y + ε(1−ε)(EX − EY)²`, which is
/// algebraically `(1−ε)μ₁(2) + εμ₂(2) − (EZ)²` but does not cancel when the
/// heavy part dominates.
pub fn var_z(p: &ModelParams, inst: &InstanceParams) -> f64 {
    let eps = inst.eps;
    let m = inst.truncation;
    let ex = 1.0 / p.lambda;
    let var_x = ex * ex;
    let ey = heavy_partial_moment(1.0, m, p.alpha, m);
    let ey2 = heavy_partial_moment(2.0, m, p.alpha, m);
    let var_y = (ey2 - ey * ey).max(0.0);
    let d = ex - ey;
    (1.0 - eps) * var_x + eps * var_y + eps * (1.0 - eps) * d * d
}

/// A leading-order value that may exceed the `f64` range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Asymptotic {
    pub value: f64,
    /// Set when the value overflowed and `value` is `+inf`.
    pub overflow: bool,
}

impl Asymptotic {
    fn from_log_parts(base: f64, coeff: f64, log_term: f64) -> Self {
        // base + coeff * exp(log_term)
        if log_term > f64::MAX.ln() - coeff.abs().max(1.0).ln() {
            Asymptotic {
                value: f64::INFINITY,
                overflow: true,
            }
        } else {
            Asymptotic {
                value: base + coeff * log_term.exp(),
                overflow: false,
            }
        }
    }
}

/// Leading form of `E[Z_{n1}]`: `μ₁(1) + (α/(1−α)) n^{(1−α)γ₁−γ₂}` for α < 1,
/// `μ₁(1) + α n^{−γ₂} ln(n^{γ₁})` for α = 1 and `μ₁(1)` for α > 1.
pub fn mean_z_asymptotic(p: &ModelParams, n: u64) -> Asymptotic {
    let ln_n = (n as f64).ln();
    let light = 1.0 / p.lambda;
    let a = p.alpha;
    if a < 1.0 {
        Asymptotic::from_log_parts(
            light,
            a / (1.0 - a),
            ((1.0 - a) * p.gamma1 - p.gamma2) * ln_n,
        )
    } else if a == 1.0 {
        let value = light + a * (-p.gamma2 * ln_n).exp() * p.gamma1 * ln_n;
        Asymptotic {
            value,
            overflow: false,
        }
    } else {
        Asymptotic {
            value: light,
            overflow: false,
        }
    }
}

/// Leading form of `Var(Z_{n1})`: `Var X + (α/(2−α)) n^{(2−α)γ₁−γ₂}`.
pub fn var_z_asymptotic(p: &ModelParams, n: u64) -> Asymptotic {
    let ln_n = (n as f64).ln();
    let a = p.alpha;
    Asymptotic::from_log_parts(
        1.0 / (p.lambda * p.lambda),
        a / (2.0 - a),
        ((2.0 - a) * p.gamma1 - p.gamma2) * ln_n,
    )
}
