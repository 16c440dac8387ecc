//! Continued fractions: exact expansion of quadratic surds, certified
//! expansion of enclosed reals, convergent tables, approximation errors and
//! the metallic-mean denominators.

mod approx;
mod expand;
mod metallic;
mod surd;

pub use approx::{bad_approx_estimate, error_record, ErrorRecord};
pub use expand::{
    cf_expand, cf_expand_literal, cf_expand_literal_partial, cf_expand_surd, ConvergentTable,
};
pub use metallic::{metallic_q, metallic_q_closed, metallic_q_seq};
pub use surd::QuadraticSurd;
