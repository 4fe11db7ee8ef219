//! Computation with the nonstandard q-deformed algebras U'_q(so_n): PBW normal
//! forms, Casimir elements, Gel'fand–Tsetlin representations and closed-form
//! Casimir eigenvalues, with cross-checks between the symbolic and numeric sides.

pub mod casimir;
pub mod eigen;
pub mod error;
pub mod gtrep;
pub mod pbw;
pub mod qnum;
pub mod syntax;
pub mod verify;

pub use error::{Error, Result};
