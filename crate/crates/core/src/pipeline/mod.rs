//! The staged search for small values of the form along approximating
//! lines, witness certificates, and the Littlewood product table.

mod diagnostics;
mod hypotheses;
mod littlewood;
mod stage;
mod witness;

pub use diagnostics::{arccos_square_gap, sigma_diagnostics, LengthChain, SigmaDiagnostics};
pub use hypotheses::{
    check_hypotheses, delta_window, floor_power, gamma_threshold, hypotheses_for, power_le,
    simplest_between, DeltaWindow, HypothesisReport,
};
pub use littlewood::{littlewood_min, LittlewoodRow};
pub use stage::{
    multiples_in, run_pipeline, run_stage, StageConfig, StageOutcome, StageReport, MULTIPLE_CAP,
};
pub use witness::{append_witness_log, verify_witness, Provenance, WitnessCertificate};
