//! Symbolic integer formulas over the alphabet `{1, +, *, ^}`.
//!
//! Every expression is built from the unit `1` with addition, multiplication
//! and exponentiation, and evaluates to a positive integer. The crate provides
//! two canonical encodings of the positive integers as such formulas:
//!
//! * the first canonical form (FCF), the hereditary base-2 expansion written as
//!   a sum of powers of `x = 1+1`;
//! * the second canonical form (SCF), the recursive prime factorization where
//!   every odd prime `p` is written `(SCF(p-1) + 1)`.
//!
//! Batch generators produce either encoding for long runs of consecutive
//! integers: [`fcf_gen`] by a subset-sum set recurrence and [`zeta`] by the
//! windowed Zeta recursion, which also sifts primes along the way.

pub mod arith;
pub mod canonical;
mod error;
pub mod expr;
pub mod fcf_gen;
pub mod meter;
pub mod notation;
pub mod set;
pub mod shortest;
pub mod size;
pub mod zeta;

pub use canonical::CanonicalForm;
pub use error::{Error, Result};
pub use expr::{Expr, Kind, Natural};
pub use notation::Notation;
pub use set::ExprSet;
pub use size::Metric;
