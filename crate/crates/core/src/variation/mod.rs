//! Real-coded variation operators and simplex-lattice reference directions.

mod operators;
mod weights;

pub use operators::{polynomial_mutation, sbx_crossover, VariationConfig, VariationError};
pub use weights::{das_dennis, lattice_for_population, two_layer, Layering, WeightVectorSet};
