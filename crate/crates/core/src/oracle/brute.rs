use std::collections::{HashMap, VecDeque};

use crate::domain::{apply_effects, satisfies, OpId, State, Task};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BruteOutcome {
    /// A shortest plan.
    Found(Vec<OpId>),
    /// No plan of length at most `max_len` exists.
    NoPlan,
    /// More than `max_states` distinct states would have to be visited.
    BudgetExceeded,
}

/// Blind breadth-first search over operator sequences from the initial
/// state, merging sequences that reach the same state.
pub fn brute_force_solve(task: &Task, max_len: usize, max_states: usize) -> BruteOutcome {
    let goal_holds = |s: &State| task.goal().iter().all(|&g| satisfies(s, g));
    let start = task.initial_state().clone();
    if goal_holds(&start) {
        return BruteOutcome::Found(Vec::new());
    }
    // state -> (predecessor state, operator, depth)
    let mut seen: HashMap<State, Option<(State, OpId)>> = HashMap::new();
    seen.insert(start.clone(), None);
    let mut frontier = VecDeque::from([(start, 0usize)]);
    while let Some((state, depth)) = frontier.pop_front() {
        if depth == max_len {
            continue;
        }
        for id in task.op_ids() {
            let op = task.op(id);
            if !op.pre.iter().all(|&p| satisfies(&state, p)) {
                continue;
            }
            let next = apply_effects(&state, op);
            if seen.contains_key(&next) {
                continue;
            }
            if seen.len() >= max_states {
                return BruteOutcome::BudgetExceeded;
            }
            seen.insert(next.clone(), Some((state.clone(), id)));
            if goal_holds(&next) {
                let mut plan = vec![id];
                let mut cur = state.clone();
                while let Some(Some((prev, o))) = seen.get(&cur) {
                    plan.push(*o);
                    cur = prev.clone();
                }
                plan.reverse();
                return BruteOutcome::Found(plan);
            }
            frontier.push_back((next, depth + 1));
        }
    }
    BruteOutcome::NoPlan
}
