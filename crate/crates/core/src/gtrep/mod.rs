//! Finite-dimensional irreps in the Gel'fand–Tsetlin basis.

mod coeff;
mod matrix;
mod pattern;
mod weight;

pub use coeff::{coeff_a, coeff_a_with, coeff_b, coeff_c, qnum_real, Perturbation};
pub use matrix::{element_matrix, generator_matrix, write_matrix, CMatrix, RepMatrixSet};
pub use pattern::{dimension, enumerate_patterns, weyl_dimension, GTPattern};
pub use weight::{dominant_weights, validate_weight, HighestWeight};
