//! The free algebra on `I^±_{k,l}` and the rewriting system of the bilinear
//! presentation, producing PBW normal forms over ordered `I^+` monomials.

mod ncpoly;
mod rewrite;
mod symbol;

pub use ncpoly::NCPoly;
pub use rewrite::{
    classify, commutator_residuals, commutator_residuals_with, expand_composite, normalize, qcomm, reorder_rule,
    Normalizer, PairCase,
};
pub use symbol::{GenSymbol, Word};
