//! Exact witnesses for trace-zero matrices as values of multilinear
//! polynomials on full matrix algebras.
//!
//! Generic code is written against [`Field`]; the concrete aliases below
//! cover the fields used in practice.

pub mod analysis;
pub mod error;
pub mod field;
pub mod freealg;
pub mod json;
pub mod linalg;
pub mod oracle;
pub mod random;
pub mod scalar;
pub mod selftest;
pub mod witness;

pub use error::{Error, Result};
pub use field::{Field, Fp};
pub use freealg::MultilinearPoly;
pub use linalg::{JordanSpec, Matrix};
pub use scalar::{FieldSpec, Scalar};

/// Arbitrary precision rationals.
pub type Rational = num_rational::BigRational;
pub type RatMatrix = Matrix<Rational>;
pub type ScalarMatrix = Matrix<Scalar>;
pub type F2 = Fp<2>;
pub type F3 = Fp<3>;
pub type F7 = Fp<7>;
/// The Mersenne prime `2^31 - 1`, used for randomized checks.
pub type FBig = Fp<2_147_483_647>;
