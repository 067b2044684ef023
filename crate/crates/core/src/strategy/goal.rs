use crate::domain::{satisfies, Lit};

use super::{GoalPolicy, View};

/// Means-ends goal choice: an unsatisfied goal if there is one; top-level
/// goals in goal-statement order before subgoals, subgoals in fringe-entry
/// order.
#[derive(Debug, Clone, Copy, Default)]
pub struct StatementOrderGoals;

impl GoalPolicy for StatementOrderGoals {
    fn name(&self) -> String {
        "statement".into()
    }

    fn select(&self, view: &View, candidates: &[Lit]) -> Lit {
        let c = &view.state.current;
        let n = view.task.goal().len();
        *candidates
            .iter()
            .enumerate()
            .min_by_key(|&(i, &g)| {
                let order = view.task.goal_index(g).unwrap_or(n + i);
                (satisfies(c, g), order)
            })
            .map(|(_, g)| g)
            .expect("candidates are non-empty")
    }
}

/// Means-ends goal choice that works on the most recently entered subgoal
/// first, finishing one subgoal chain before starting the next top-level
/// goal. Top-level goals are taken in goal-statement order.
#[derive(Debug, Clone, Copy, Default)]
pub struct DepthFirstGoals;

impl GoalPolicy for DepthFirstGoals {
    fn name(&self) -> String {
        "depth-first".into()
    }

    fn select(&self, view: &View, candidates: &[Lit]) -> Lit {
        let c = &view.state.current;
        let last = candidates.len();
        *candidates
            .iter()
            .enumerate()
            .min_by_key(|&(i, &g)| match view.task.goal_index(g) {
                Some(k) => (satisfies(c, g), true, k),
                None => (satisfies(c, g), false, last - i),
            })
            .map(|(_, g)| g)
            .expect("candidates are non-empty")
    }
}
