//! Exact-arithmetic analysis of Fuchsian differential operators over Q(z).
//!
//! The crate computes singular points and exponents, decides applicability of
//! the Katz rigidity criterion, constructs the set of primes carrying a strong
//! Frobenius structure together with its period, and certifies mod-p
//! algebraicity of power-series solutions by exhibiting explicit
//! Frobenius-semilinear relations over F_p(z) with checked degree bounds.
//!
//! Everything is exact: arbitrary-precision rationals, dense polynomial and
//! rational-function arithmetic over Q, and dense linear algebra over prime
//! fields F_p with p < 2^31.

pub mod arith;
pub mod certify;
pub mod cli;
pub mod error;
pub mod families;
pub mod fp;
pub mod operator;
pub mod parser;
pub mod poly;
pub mod primes;
pub mod rat;
pub mod ratfun;
pub mod rigidity;

pub use error::{Error, Result};
pub use operator::{Basis, DiffOp, ExponentReport, FuchsReport, SingularPoint};
pub use poly::Poly;
pub use rat::{Rat, Valuation};
pub use ratfun::RatFun;
