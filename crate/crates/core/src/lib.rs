//! Exact continued fractions of quadratic surds, with constructions of surds
//! whose long, small-quotient periods collapse to short, large-quotient
//! periods after multiplication by a Fibonacci or Lucas number.
//!
//! Everything number-theoretic is done in arbitrary-precision integers; the
//! only floating point lives in [`families`] where polynomial root loci are
//! checked numerically.

pub mod arith;
pub mod convergents;
pub mod error;
pub mod families;
pub mod poly;
pub mod sequences;
pub mod surd;
pub mod theorems;

pub use arith::{is_perfect_square, isqrt, Integer, Rational};
pub use convergents::{canonicalize, continuant, periodic_value, CFWord, Continuant, Mat2};
pub use error::{Error, Result};
pub use families::{ComplexPoint, Curve, LocusReport};
pub use poly::IntPolynomial;
pub use surd::{PeriodicCF, QuadraticSurd, DEFAULT_MAX_STEPS};
pub use theorems::{Family, TheoremCase, VerificationReport};
