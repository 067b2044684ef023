//! The planner proper: state bookkeeping, the per-iteration steps, and the
//! backtracking search that strings them together.

mod expand;
mod invariants;
mod search;
mod state;
mod stepper;
mod trace;

pub use expand::{choose_phase, goal_loop, Phase, SubgoalOptions};
pub use invariants::check_invariants;
pub use search::{search, search_traced, Outcome, SearchConfig, SearchResult, SearchStats};
pub use state::{
    apply_step, initialize, is_terminal, refresh_agenda, subgoal_step, Agenda, AncestorSet, Ancestors, Fringe,
    PlannerState, Signature, Snapshot,
};
pub use stepper::{Prompt, Stepper};
pub use trace::{render_trace, JsonLinesSink, Payload, TraceEvent, TraceSink};
