//! Exact computations with strange q-series.
//!
//! The crate works with partial sums of Habiro-type series
//! `F(q) = sum f_n(q) (q;q)_n` and `G(q) = sum g_n(q) (q;q^2)_n`, their
//! `s`-dissections and Pochhammer divisibility, their expansions at roots
//! of unity compared against partial theta functions, and the Fishburn-type
//! coefficients of `F(1 - q)`.
//!
//! ```
//! use qstrange::fishburn::xi_coeffs;
//! use qstrange::qfamilies::FamilySpec;
//!
//! let xi = xi_coeffs(&FamilySpec::kz(), 5);
//! let v: Vec<i64> = xi.coeffs.iter().map(|c| c.try_into().unwrap()).collect();
//! assert_eq!(v, [1, 1, 2, 5, 15, 53]);
//! ```

pub mod cli;
pub mod cyclofield;
pub mod dissection;
pub mod error;
pub mod exactpoly;
pub mod fishburn;
pub mod partialtheta;
pub mod qfamilies;
pub mod strangematch;

pub use error::{Error, Result};
