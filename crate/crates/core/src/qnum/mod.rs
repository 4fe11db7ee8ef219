//! Exact scalars: half-integers, Gaussian rationals and the field ℚ(i)(u)
//! with `q = u²`.

mod gauss;
mod halfint;
mod poly;
mod scalar;

pub use gauss::GaussRat;
pub use halfint::HalfInt;
pub use poly::Poly;
pub use scalar::QScalar;

/// `[x]`.
pub fn qbracket(x: HalfInt) -> QScalar {
    QScalar::qbracket(x)
}

/// `q^x`.
pub fn qpower(x: HalfInt) -> QScalar {
    QScalar::qpower(x)
}

/// `[2]_q = q + q^{-1}`.
pub fn qtwo() -> QScalar {
    QScalar::qbracket(HalfInt::from_int(2))
}
