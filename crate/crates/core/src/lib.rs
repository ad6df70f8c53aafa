//! Exact evaluation of exponential sums S(f, n) = Σ e_n(f(x)) for quadratic
//! functions f(x) = Σ a_i x^{p^{α_i}+1} over F_{p^n}, p odd.
//!
//! The value always has the shape t·g_p^{n−l}·p^l, where l is the nullity and
//! t the type of the quadratic form Tr_n(f(x)). Nullities come from the
//! associate p-polynomial f* ([`nullity`]); types come from a Gram matrix at
//! small degree ([`quadform`]) and are transported to larger degrees by the
//! formulas in [`lifts`]. [`evaluator`] composes these, and the brute-force
//! sum in [`quadform`] serves as an exact oracle in ℤ[ζ_p] ([`cyclotomic`]).

pub mod cli;
pub mod cyclotomic;
pub mod error;
pub mod evaluator;
pub mod fieldcore;
pub mod lifts;
pub mod linalg;
pub mod nullity;
pub mod quadform;
pub mod tabulate;

pub use error::{Error, Result};
