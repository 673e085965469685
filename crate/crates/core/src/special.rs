//! Scalar special functions used throughout the crate.
//!
//! Thin wrappers over `libm` so the rest of the crate does not care whether
//! `std` is linked.

#[cfg(not(feature = "std"))]
use num_traits::Float;

pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Standard normal distribution function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x * core::f64::consts::FRAC_1_SQRT_2)
}

/// `(e^z - 1) / z`, continuous at `z = 0`.
pub fn exprel(z: f64) -> f64 {
    if z.abs() < 1e-8 {
        1.0 + 0.5 * z
    } else {
        z.exp_m1() / z
    }
}

/// `1 - e^{-z} * sum_{j=0}^{k} z^j / j!`, the probability that a Poisson(z)
/// variable exceeds `k`. Equivalently the regularized lower incomplete gamma
/// function `P(k + 1, z)`.
pub fn poisson_upper_tail(k: u32, z: f64) -> f64 {
    if z <= 0.0 {
        return 0.0;
    }
    if z > 800.0 {
        return 1.0;
    }
    if z < (k as f64) + 1.0 {
        // direct summation of the tail; terms decrease from j = k+1 on
        let mut term = 1.0;
        for j in 1..=k + 1 {
            term *= z / j as f64;
        }
        let mut sum = 0.0;
        let mut j = k + 1;
        loop {
            sum += term;
            j += 1;
            term *= z / j as f64;
            if term < sum * 1e-17 {
                break;
            }
        }
        sum * (-z).exp()
    } else {
        let mut term = 1.0;
        let mut head = 1.0;
        for j in 1..=k {
            term *= z / j as f64;
            head += term;
        }
        1.0 - (-z).exp() * head
    }
}
