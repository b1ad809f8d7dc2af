//! Exact q-series kernel: truncated Laurent series, theta functions, Hecke-type
//! double sums, Appell functions, mock theta functions, admissible-level string
//! functions, an identity expression language and a verification catalog.

pub mod appell;
pub mod cache;
pub mod catalog;
pub mod error;
pub mod expr;
pub mod hecke;
pub mod mock;
pub mod precision;
pub mod series;
pub mod stringfn;
pub mod theta;

pub use error::{Error, Result};
pub use series::{pochhammer, SignedMonomial, Series};
