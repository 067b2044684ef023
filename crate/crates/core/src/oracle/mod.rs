//! Ground truth that shares nothing with the planner beyond effect
//! application and literal satisfaction.

mod brute;
mod partial;
mod validate;

pub use brute::{brute_force_solve, BruteOutcome};
pub use partial::{linear_extensions, to_partial_order, PartialOrderPlan};
pub use validate::{validate_plan, validate_steps, Failure, ValidationReport};
