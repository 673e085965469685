//! Sums of triangular arrays drawn from an exponential / truncated-Pareto
//! mixture: moments, regime classification, simulation, reference stable
//! laws, goodness-of-fit tests and limit-condition diagnostics.
//!
//! The crate is `no_std` with `alloc` when the default `std` feature is off.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod diagnostics;
pub mod error;
pub mod model;
pub mod quad;
pub mod regimes;
pub mod samplers;
pub mod special;
pub mod stable;
pub mod stats;
pub mod summation;

pub use error::{Error, Result};
pub use model::{derive_instance, InstanceParams, ModelParams};
pub use regimes::{classify, normalization_plan, NormalizationPlan, RegimeReport};
pub use stable::StableLimitSpec;
