use crate::domain::{satisfies, Lit, OpId, Task};
use crate::engine::PlannerState;

use super::{ApplicableRanker, RelevantRanker, View};

/// Approximate conspiracy number: preconditions unsatisfied in the current
/// state.
pub fn conspiracy_score(task: &Task, ps: &PlannerState, op: OpId) -> usize {
    task.op(op)
        .pre
        .iter()
        .filter(|&&p| !satisfies(&ps.current, p))
        .count()
}

/// Interactions with the other selected operators: how many of them `op`
/// would clobber (deletes one of their preconditions) plus how many would
/// clobber `op`'s effects (delete something it adds).
pub fn threat_score(task: &Task, ps: &PlannerState, op: OpId) -> usize {
    let cand = task.op(op);
    let clobbers = ps
        .selected
        .iter()
        .filter(|&&o| o != op)
        .filter(|&&o| {
            task.op(o)
                .pre
                .iter()
                .any(|p| p.is_positive() && cand.del.contains(&p.atom()))
        })
        .count();
    let clobbered = ps
        .selected
        .iter()
        .filter(|&&o| o != op)
        .filter(|&&o| task.op(o).del.iter().any(|a| cand.add.contains(a)))
        .count();
    clobbers + clobbered
}

/// Fewest unsatisfied preconditions, then fewest preconditions, then
/// canonical operator order.
#[derive(Debug, Clone, Copy, Default)]
pub struct ConspiracyRanker;

impl RelevantRanker for ConspiracyRanker {
    fn name(&self) -> String {
        "conspiracy".into()
    }

    fn rank(&self, view: &View, _goal: Lit, candidates: &mut Vec<OpId>) {
        candidates.sort_by_key(|&o| {
            (
                conspiracy_score(view.task, view.state, o),
                view.task.op(o).pre.len(),
                o,
            )
        });
    }
}

/// Fewest threats, then canonical operator order.
#[derive(Debug, Clone, Copy, Default)]
pub struct ThreatRanker;

impl ApplicableRanker for ThreatRanker {
    fn name(&self) -> String {
        "threat".into()
    }

    fn rank(&self, view: &View, candidates: &mut Vec<OpId>) {
        candidates.sort_by_key(|&o| (threat_score(view.task, view.state, o), o));
    }
}

/// Canonical operator order only (domain file order, then bindings).
#[derive(Debug, Clone, Copy, Default)]
pub struct FileOrderRanker;

impl RelevantRanker for FileOrderRanker {
    fn name(&self) -> String {
        "file-order".into()
    }

    fn rank(&self, _: &View, _: Lit, candidates: &mut Vec<OpId>) {
        candidates.sort_unstable();
    }
}

impl ApplicableRanker for FileOrderRanker {
    fn name(&self) -> String {
        "file-order".into()
    }

    fn rank(&self, _: &View, candidates: &mut Vec<OpId>) {
        candidates.sort_unstable();
    }
}
