//! Candidate pairs of metallic means: the threshold `b_c(eta)`, the
//! denominator ratio checks, and the prime factorizations behind the lcm
//! condition.

pub mod factor;
mod lcm;
mod pairs;
mod psi;

pub use factor::{
    certify_prime, factorize, factorize_complete, is_probable_prime, FactorBudget, Factorization,
};
pub use lcm::{
    csv_row, gpf_trace, lcm_condition, scan_pairs, write_csv, write_jsonl, FactorizationReport,
    CSV_HEADER,
};
pub use pairs::{enumerate_pairs, ratio_check, smallest_verified_start, MetallicPair, RatioCheck};
pub use psi::{critical_b, critical_b_f64, psi, window_has_integer};
