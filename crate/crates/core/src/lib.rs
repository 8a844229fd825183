//! Constrained evolutionary multi-objective optimization.
//!
//! Four constrained algorithms (NSGA-II, NSGA-III, MOEA/D and the two-archive
//! algorithm) sit on a switchable constraint-handling layer: comparators see
//! either the true constraint violation or a crisp `+1`/`-1` feasibility value.
//! Alongside them live the C-DTLZ and DC-DTLZ benchmarks, IGD/IGD+/HV, and the
//! Wilcoxon/A12 statistics used to compare the two modes.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`.

// `!(x > 0)` is used on purpose to reject NaN along with non-positive values,
// and the numeric kernels index several parallel arrays in one loop.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod algorithms;
pub mod benchmarks;
pub mod cht;
pub mod metrics;
pub mod model;
pub mod scalar;
pub mod stats;
pub mod variation;

pub use scalar::Scalar;

pub type Solution64 = model::Solution<f64>;
pub type ProblemSpec64 = model::ProblemSpec<f64>;
pub type Population64 = model::Population<f64>;
pub type ConstraintConfig64 = cht::ConstraintConfig<f64>;
pub type WeightVectorSet64 = variation::WeightVectorSet<f64>;
pub type AlgorithmConfig64 = algorithms::AlgorithmConfig<f64>;
pub type RunResult64 = algorithms::RunResult<f64>;
pub type MetricResult64 = metrics::MetricResult<f64>;

pub type Solution32 = model::Solution<f32>;
pub type ProblemSpec32 = model::ProblemSpec<f32>;
