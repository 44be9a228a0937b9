//! Gehring–Hayman, ball separation and LLC-2 measurements, and the
//! theorem constants.

mod constants;
mod gh;
mod llc;
mod report;
mod separation;
mod tower;

pub use constants::{eval_constants, ConstantKind};
pub use gh::{gehring_hayman, gehring_hayman_ratio, GhMeasurement};
pub use llc::{llc2_constant, llc2_ratio, LlcSchedule};
pub use report::{condition_report, ConditionReport};
pub use separation::{ball_separation_constant, ball_separation_profile, separation_radius, SeparationSample, BISECTION_STEPS};
pub use tower::{TowerNumber, EXP_LIMIT};
