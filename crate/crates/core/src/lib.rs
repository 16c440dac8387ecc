//! Certified search for small values of `x (alpha x - y)(beta x - z)`.
//!
//! The layers build on one another: exact enclosures ([`exact`]),
//! continued fractions ([`cf`]), simultaneous approximation points
//! ([`dirichlet`]), the cubic along an approximating line ([`cubic`]), the
//! staged witness search ([`pipeline`]) and the construction of metallic
//! pairs with their denominator screens ([`forge`]).

pub mod cf;
pub mod cubic;
pub mod dirichlet;
pub mod error;
pub mod exact;
pub mod forge;
pub mod pipeline;
pub mod precision;

pub use error::{Error, Result};
pub use precision::Precision;
