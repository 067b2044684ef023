//! Flexible-commitment planning.
//!
//! A backward-chaining planner that keeps a simulated execution state and,
//! on every iteration, either subgoals (delaying step-ordering commitments)
//! or applies a ready operator (committing to an order eagerly). Which of
//! the two it prefers is decided by a pluggable toggle policy, so the same
//! search can run fully delayed, fully eager, or switch between the two.
//!
//! - [`domain`]: typed STRIPS domains and problems, parsing, grounding.
//! - [`engine`]: planner state, the per-iteration steps and the search.
//! - [`strategy`]: toggle, goal and operator-ranking policies.
//! - [`oracle`]: plan validation, brute-force solving, partial orders.
//! - [`bench`]: benchmark families and the experiment runner.

pub mod bench;
pub mod domain;
pub mod engine;
pub mod oracle;
pub mod strategy;
