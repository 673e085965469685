//! Regime classification of `(alpha, gamma1, gamma2)` and the concrete
//! normalization `(center, scale, limit law)` for one row size.
//!
//! All defining inequalities are strict. A point that sits on one of the
//! boundary curves (up to [`BOUNDARY_TOL`]) is reported as a boundary and is
//! never assigned to a neighbouring regime.

use core::cmp::Ordering;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::model::{mean_z, var_z, InstanceParams, ModelParams};
use crate::stable::StableLimitSpec;

/// Relative tolerance under which two exponents are treated as equal.
///
/// Grid values such as `0.05 * 3` are not exact in binary, so a literal `==`
/// would miss boundary cells of a decimal grid.
pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StableBranch {
    /// `gamma2 ∈ (1−α, 1−α/2)`: centered at `n E[X]`, reference shift 0.
    ShiftZero,
    /// `gamma2 ∈ (0, 1−α)`: centered at `(α/(1−α)) β_n`.
    ShiftCompensated,
    /// `gamma2 = 1−α`: centered at `n E[X] + (α/(1−α)) β_n`.
    ShiftCompensatedBoundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FluctuationRegime {
    /// Gaussian limit under `(n E[Z], sqrt(n Var Z))`.
    CltFull,
    /// Gaussian limit under `(n E[X], sqrt(n Var X))`.
    CltLightPart,
    /// One-sided stable limit under `beta_n = n^{(1−γ₂)/α}`.
    Stable(StableBranch),
    Boundary,
    Unclassified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LlnRegime {
    /// `S_n / (n E[Z]) → 1` in probability.
    LlnFull,
    /// `S_n / (n E[X]) → 1` in probability.
    LlnLightPart,
    /// Neither form of the law of large numbers is established.
    NotEstablished,
    Boundary,
}

impl FluctuationRegime {
    pub fn as_str(&self) -> &'static str {
        match self {
            FluctuationRegime::CltFull => "clt_full",
            FluctuationRegime::CltLightPart => "clt_light_part",
            FluctuationRegime::Stable(_) => "stable",
            FluctuationRegime::Boundary => "boundary",
            FluctuationRegime::Unclassified => "unclassified",
        }
    }

    pub fn is_classified(&self) -> bool {
        !matches!(
            self,
            FluctuationRegime::Boundary | FluctuationRegime::Unclassified
        )
    }
}

impl StableBranch {
    pub fn as_str(&self) -> &'static str {
        match self {
            StableBranch::ShiftZero => "shift_zero",
            StableBranch::ShiftCompensated => "shift_compensated",
            StableBranch::ShiftCompensatedBoundary => "shift_compensated_boundary",
        }
    }
}

impl LlnRegime {
    pub fn as_str(&self) -> &'static str {
        match self {
            LlnRegime::LlnFull => "lln_full",
            LlnRegime::LlnLightPart => "lln_light_part",
            LlnRegime::NotEstablished => "none",
            LlnRegime::Boundary => "boundary",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RegimeReport {
    pub fluctuation: FluctuationRegime,
    pub lln: LlnRegime,
    /// Phase-diagram zone 1..=6; only for `alpha < 1` at interior points.
    pub zone: Option<u8>,
}

impl RegimeReport {
    /// Both regimes are interior (no boundary, nothing unclassified).
    pub fn is_interior(&self) -> bool {
        self.fluctuation.is_classified() && self.lln != LlnRegime::Boundary
    }
}

fn cmp(a: f64, b: f64) -> Ordering {
    let scale = 1.0f64.max(a.abs()).max(b.abs());
    if (a - b).abs() <= BOUNDARY_TOL * scale {
        Ordering::Equal
    } else if a < b {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

fn gt(a: f64, b: f64) -> bool {
    cmp(a, b) == Ordering::Greater
}

fn lt(a: f64, b: f64) -> bool {
    cmp(a, b) == Ordering::Less
}

fn in_open(x: f64, lo: f64, hi: f64) -> bool {
    gt(x, lo) && lt(x, hi)
}

/// The Gaussian condition shared by both index ranges:
/// `γ₂ > (2−α)γ₁` or `γ₂ < min{(2−α)γ₁, 1−αγ₁}`.
fn clt_full_holds(alpha: f64, g1: f64, g2: f64) -> bool {
    let a2 = (2.0 - alpha) * g1;
    let b = 1.0 - alpha * g1;
    gt(g2, a2) || lt(g2, a2.min(b))
}

pub fn classify(alpha: f64, gamma1: f64, gamma2: f64) -> RegimeReport {
    let (g1, g2) = (gamma1, gamma2);
    if alpha >= 1.0 {
        let fluctuation = if clt_full_holds(alpha, g1, g2) {
            FluctuationRegime::CltFull
        } else if lt(g2, (2.0 - alpha) * g1) && gt(g2, 1.0 - alpha * g1) {
            FluctuationRegime::Stable(StableBranch::ShiftZero)
        } else {
            FluctuationRegime::Boundary
        };
        return RegimeReport {
            fluctuation,
            lln: LlnRegime::LlnFull,
            zone: None,
        };
    }

    let fluctuation = if clt_full_holds(alpha, g1, g2) {
        FluctuationRegime::CltFull
    } else if gt(g1, 0.5) && in_open(g2, 1.0 - alpha / 2.0, (2.0 - alpha) * g1) {
        FluctuationRegime::CltLightPart
    } else if gt(g1, 0.5) && in_open(g2, (1.0 - alpha * g1).max(0.0), 1.0 - alpha / 2.0) {
        let branch = match cmp(g2, 1.0 - alpha) {
            Ordering::Greater => StableBranch::ShiftZero,
            Ordering::Equal => StableBranch::ShiftCompensatedBoundary,
            Ordering::Less => StableBranch::ShiftCompensated,
        };
        FluctuationRegime::Stable(branch)
    } else if on_fluctuation_boundary(alpha, g1, g2) {
        FluctuationRegime::Boundary
    } else {
        FluctuationRegime::Unclassified
    };

    let full = (1.0 - alpha) * g1;
    let b = 1.0 - alpha * g1;
    let lln = if gt(g2, full) || lt(g2, full.min(b)) {
        LlnRegime::LlnFull
    } else if in_open(g2, 1.0 - alpha, full) {
        LlnRegime::LlnLightPart
    } else if gt(g2, b) && lt(g2, 1.0 - alpha) && lt(g2, full) {
        LlnRegime::NotEstablished
    } else {
        LlnRegime::Boundary
    };

    let zone = match (fluctuation, lln) {
        (FluctuationRegime::CltFull, LlnRegime::LlnFull) => Some(1),
        (FluctuationRegime::CltLightPart, LlnRegime::LlnFull) => Some(2),
        (FluctuationRegime::CltLightPart, LlnRegime::LlnLightPart) => Some(3),
        (FluctuationRegime::Stable(_), LlnRegime::LlnLightPart) => Some(4),
        (FluctuationRegime::Stable(_), LlnRegime::NotEstablished) => Some(5),
        (FluctuationRegime::Stable(_), LlnRegime::LlnFull) => Some(6),
        _ => None,
    };
    RegimeReport {
        fluctuation,
        lln,
        zone,
    }
}

fn on_fluctuation_boundary(alpha: f64, g1: f64, g2: f64) -> bool {
    let eq = |a: f64, b: f64| cmp(a, b) == Ordering::Equal;
    eq(g2, (2.0 - alpha) * g1)
        || eq(g2, 1.0 - alpha * g1)
        || eq(g2, 1.0 - alpha / 2.0)
        || eq(g1, 0.5)
}

/// Reference law of a normalized sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitLaw {
    StdNormal,
    Stable(StableReference),
}

/// A stable law together with the centering convention of its
/// characteristic exponent (see [`crate::stable::char_exponent`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableReference {
    pub spec: StableLimitSpec,
    pub compensated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizationPlan {
    pub center: f64,
    pub scale: f64,
    pub limit: LimitLaw,
}

impl NormalizationPlan {
    /// `center = 0`, `scale = 1`; yields raw sums.
    pub fn identity() -> Self {
        NormalizationPlan {
            center: 0.0,
            scale: 1.0,
            limit: LimitLaw::StdNormal,
        }
    }

    pub fn normalize(&self, sum: f64) -> f64 {
        (sum - self.center) / self.scale
    }
}

/// Stable scale `beta_n = n^{(1−γ₂)/α}` (constant `c = 1`).
pub fn stable_scale(p: &ModelParams, n: u64) -> f64 {
    ((1.0 - p.gamma2()) / p.alpha() * (n as f64).ln()).exp()
}

pub fn normalization_plan(
    p: &ModelParams,
    inst: &InstanceParams,
    report: &RegimeReport,
) -> Result<NormalizationPlan> {
    let nf = inst.n() as f64;
    let alpha = p.alpha();
    let light_mean = 1.0 / p.lambda();
    let plan = match report.fluctuation {
        FluctuationRegime::Boundary => {
            return Err(Error::NoTheorem("point lies on a regime boundary"))
        }
        FluctuationRegime::Unclassified => {
            return Err(Error::NoTheorem("point is not covered by any regime"))
        }
        FluctuationRegime::CltFull => NormalizationPlan {
            center: nf * mean_z(p, inst),
            scale: (nf * var_z(p, inst)).sqrt(),
            limit: LimitLaw::StdNormal,
        },
        FluctuationRegime::CltLightPart => NormalizationPlan {
            center: nf * light_mean,
            scale: nf.sqrt() * light_mean,
            limit: LimitLaw::StdNormal,
        },
        FluctuationRegime::Stable(branch) if alpha < 1.0 => {
            let beta = stable_scale(p, inst.n());
            let comp = alpha / (1.0 - alpha);
            let (center, shift) = match branch {
                StableBranch::ShiftZero => (nf * light_mean, 0.0),
                StableBranch::ShiftCompensatedBoundary => (nf * light_mean + comp * beta, -comp),
                StableBranch::ShiftCompensated => (comp * beta, -comp),
            };
            NormalizationPlan {
                center,
                scale: beta,
                limit: LimitLaw::Stable(StableReference {
                    spec: StableLimitSpec::new(alpha, 1.0, shift)?,
                    compensated: false,
                }),
            }
        }
        FluctuationRegime::Stable(_) => {
            let beta = stable_scale(p, inst.n());
            let center = nf * mean_z(p, inst);
            // (S − nE Z)/β = (S/β − a_n) + (a_n − nE Z/β); the first term tends
            // to the compensated law, the second is the deterministic offset.
            let a_n = crate::diagnostics::centering_a_n(p, inst, beta)?;
            let shift = a_n - center / beta;
            NormalizationPlan {
                center,
                scale: beta,
                limit: LimitLaw::Stable(StableReference {
                    spec: StableLimitSpec::new(alpha, 1.0, shift)?,
                    compensated: true,
                }),
            }
        }
    };
    if !(plan.scale > 0.0 && plan.scale.is_finite() && plan.center.is_finite()) {
        return Err(crate::error::domain(
            "scale",
            plan.scale,
            "normalization is not finite and positive at this row size",
        ));
    }
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::derive_instance;

    #[test]
    fn spot_checks() {
        let r = classify(0.5, 1.0, 2.0);
        assert_eq!(
            (r.fluctuation, r.lln, r.zone),
            (FluctuationRegime::CltFull, LlnRegime::LlnFull, Some(1))
        );

        let r = classify(0.5, 2.0, 0.6);
        assert_eq!(
            r.fluctuation,
            FluctuationRegime::Stable(StableBranch::ShiftZero)
        );
        assert_eq!((r.lln, r.zone), (LlnRegime::LlnLightPart, Some(4)));

        let r = classify(0.5, 2.0, 0.3);
        assert_eq!(
            r.fluctuation,
            FluctuationRegime::Stable(StableBranch::ShiftCompensated)
        );
        assert_eq!((r.lln, r.zone), (LlnRegime::NotEstablished, Some(5)));

        let r = classify(0.5, 0.6, 0.72);
        assert_eq!(
            r.fluctuation,
            FluctuationRegime::Stable(StableBranch::ShiftZero)
        );
        assert_eq!((r.lln, r.zone), (LlnRegime::LlnFull, Some(6)));

        let r = classify(0.5, 1.0, 1.5);
        assert_eq!(r.fluctuation, FluctuationRegime::Boundary);
        assert_eq!(r.zone, None);

        let r = classify(1.5, 2.0, 0.5);
        assert_eq!(
            r.fluctuation,
            FluctuationRegime::Stable(StableBranch::ShiftZero)
        );
        assert_eq!((r.lln, r.zone), (LlnRegime::LlnFull, None));
    }

    #[test]
    fn zones_two_and_three() {
        let r = classify(0.5, 1.0, 1.3);
        assert_eq!(
            (r.fluctuation, r.lln, r.zone),
            (FluctuationRegime::CltLightPart, LlnRegime::LlnFull, Some(2))
        );
        let r = classify(0.5, 2.0, 0.9);
        assert_eq!(
            (r.fluctuation, r.lln, r.zone),
            (
                FluctuationRegime::CltLightPart,
                LlnRegime::LlnLightPart,
                Some(3)
            )
        );
    }

    #[test]
    fn branch_boundary_at_one_minus_alpha() {
        let r = classify(0.5, 2.0, 0.5);
        assert_eq!(
            r.fluctuation,
            FluctuationRegime::Stable(StableBranch::ShiftCompensatedBoundary)
        );
        assert_eq!(r.lln, LlnRegime::Boundary);
        assert_eq!(r.zone, None);
    }

    #[test]
    fn decimal_grid_boundaries_are_detected() {
        // 1.5 * 0.1 is not 0.15 in binary
        let r = classify(0.5, 0.1, 0.05 * 3.0);
        assert_eq!(r.fluctuation, FluctuationRegime::Boundary);
        let r = classify(0.5, 0.1 * 7.0, 0.15 * 7.0);
        assert_eq!(r.fluctuation, FluctuationRegime::Boundary);
    }

    #[test]
    fn frontier_is_monotone() {
        let alpha = 0.5;
        for &g1 in &[0.6, 1.0, 2.0, 2.9] {
            let mut seen = alloc::vec::Vec::new();
            let mut g2 = 0.001;
            while g2 < 6.0 {
                let f = classify(alpha, g1, g2).fluctuation;
                let tag = match f {
                    FluctuationRegime::Stable(_) => 0,
                    FluctuationRegime::CltLightPart => 1,
                    FluctuationRegime::CltFull => 2,
                    _ => -1,
                };
                if tag >= 0 && seen.last() != Some(&tag) {
                    seen.push(tag);
                }
                g2 += 0.001;
            }
            let lower = (1.0 - alpha * g1).max(0.0);
            let expected: &[i32] = if lower > 0.0 {
                &[2, 0, 1, 2]
            } else {
                &[0, 1, 2]
            };
            assert_eq!(seen.as_slice(), expected, "gamma1 = {g1}");
        }
    }

    #[test]
    fn heavy_index_at_least_one_always_has_lln() {
        for i in 1..60 {
            for j in 1..60 {
                let r = classify(1.3, i as f64 * 0.05, j as f64 * 0.05);
                assert_eq!(r.lln, LlnRegime::LlnFull);
                assert_eq!(r.zone, None);
            }
        }
    }

    #[test]
    fn plan_examples() {
        let p = ModelParams::new(0.5, 1.0, 1.0, 2.0).unwrap();
        let inst = derive_instance(&p, 10_000).unwrap();
        let plan = normalization_plan(&p, &inst, &classify(0.5, 1.0, 2.0)).unwrap();
        assert!((plan.center - 1e4 * mean_z(&p, &inst)).abs() < 1e-9);
        assert!((plan.scale - (1e4 * var_z(&p, &inst)).sqrt()).abs() < 1e-12);
        assert_eq!(plan.limit, LimitLaw::StdNormal);

        let p = ModelParams::new(0.5, 1.0, 2.0, 0.6).unwrap();
        let inst = derive_instance(&p, 100_000).unwrap();
        let plan = normalization_plan(&p, &inst, &classify(0.5, 2.0, 0.6)).unwrap();
        assert!((plan.center - 1e5).abs() < 1e-9);
        assert!((plan.scale / 1e4 - 1.0).abs() < 1e-12);
        match plan.limit {
            LimitLaw::Stable(r) => {
                assert_eq!(r.spec.shift(), 0.0);
                assert!(!r.compensated);
            }
            _ => panic!("expected stable"),
        }

        let p = ModelParams::new(0.5, 1.0, 2.0, 0.3).unwrap();
        let inst = derive_instance(&p, 100_000).unwrap();
        let plan = normalization_plan(&p, &inst, &classify(0.5, 2.0, 0.3)).unwrap();
        assert!((plan.center / 1e7 - 1.0).abs() < 1e-12);
        assert!((plan.scale / 1e7 - 1.0).abs() < 1e-12);
        match plan.limit {
            LimitLaw::Stable(r) => assert!((r.spec.shift() + 1.0).abs() < 1e-15),
            _ => panic!("expected stable"),
        }

        let b = classify(0.5, 1.0, 1.5);
        assert!(matches!(
            normalization_plan(&p, &inst, &b),
            Err(Error::NoTheorem(_))
        ));
    }

    #[test]
    fn heavy_index_above_one_plan_offset_approaches_mean_zero_shift() {
        let p = ModelParams::new(1.5, 1.0, 2.0, 0.2).unwrap();
        let inst = derive_instance(&p, 1_000_000).unwrap();
        let plan = normalization_plan(&p, &inst, &classify(1.5, 2.0, 0.2)).unwrap();
        match plan.limit {
            LimitLaw::Stable(r) => {
                assert!(r.compensated);
                // −α/(α−1) = −3 up to o(1)
                assert!((r.spec.shift() + 3.0).abs() < 0.05, "{}", r.spec.shift());
            }
            _ => panic!("expected stable"),
        }
    }
}
