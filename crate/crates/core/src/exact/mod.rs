//! Exact arithmetic layer: enclosures over the rationals, real-number
//! specifications, and the certified evaluator of the cubic form
//! `f(x, y, z) = x (alpha x - y)(beta x - z)`.

mod enclosure;
pub mod functions;
pub mod num;
mod real;
pub mod serde_num;

pub use enclosure::Enclosure;
pub use functions::{
    euler_enclosure, ln_enclosure, ln_int, pow_rational, root_enclosure, sqrt_enclosure,
};
pub use real::{eval_form, eval_form_rational, form_value, nearest_int_distance, RealSpec};
