//! The cubic `F(t) = f(v(t))` along an approximating line and its
//! sublevel sets.

pub mod corpus;
mod critical;
mod levelset;
mod line;
mod model;
mod reduced;

pub use critical::{cartan_bound, critical_points, CartanCheck, CriticalPoints};
pub use levelset::{endpoint_tolerance, solve_levelset, LevelInterval, SublevelSet, ENDPOINT_BITS};
pub use line::{build_line, ApproxLine};
pub use model::{build_cubic, CubicModel, MODEL_BITS};
pub use reduced::{depressed_p, level_seeds, reduce_cubic, trig_solutions, Branch, ReducedCubic};
