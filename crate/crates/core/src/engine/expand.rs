//! Candidate generation shared by the depth-first search and the stepper,
//! so that both see identical choice lists at every decision point.

use crate::domain::{satisfies, Lit, OpId, Task};
use crate::strategy::{independence_partition, Strategy, Toggle, View};

use super::search::PathCounts;
use super::state::{apply_step, Agenda, PlannerState, Signature};
use super::trace::{Payload, Tracer};
use super::SearchConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Subgoal,
    Apply,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Subgoal => "subgoal",
            Phase::Apply => "apply",
        }
    }

    pub fn other(self) -> Phase {
        match self {
            Phase::Subgoal => Phase::Apply,
            Phase::Apply => Phase::Subgoal,
        }
    }

    pub fn from_toggle(t: Toggle) -> Phase {
        match t {
            Toggle::Sub => Phase::Subgoal,
            Toggle::App => Phase::Apply,
        }
    }
}

/// Phase choice: which branch to try first, and whether the other is also live.
///
/// With no applicable operators subgoaling is forced, with no pending goals
/// applying is forced. Otherwise the toggle decides, except that `sub` with
/// every pending goal already satisfied tries applying first.
pub fn choose_phase(
    ps: &PlannerState,
    agenda: &Agenda,
    toggle: Toggle,
) -> (Phase, bool) {
    if agenda.applicable.is_empty() {
        return (Phase::Subgoal, false);
    }
    if agenda.pending.is_empty() {
        return (Phase::Apply, false);
    }
    let some_unsatisfied = agenda
        .pending
        .iter()
        .any(|&g| !satisfies(&ps.current, g));
    match toggle {
        Toggle::Sub if some_unsatisfied => (Phase::Subgoal, true),
        _ => (Phase::Apply, true),
    }
}

/// Goal chosen for subgoaling and its ranked achievers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgoalOptions {
    pub goal: Lit,
    pub ops: Vec<OpId>,
}

/// Does subgoaling on `goal` with `op` close a subgoal loop? True when an
/// unsatisfied precondition of `op` is `goal` itself or one of its
/// ancestors.
pub fn goal_loop(task: &Task, ps: &PlannerState, goal: Lit, op: OpId) -> bool {
    task.op(op).pre.iter().any(|&p| {
        !satisfies(&ps.current, p)
            && (p == goal
                || ps
                    .anc
                    .get(&goal)
                    .is_some_and(|sets| sets.iter().any(|s| s.contains(&p))))
    })
}

/// Subgoal candidates. Goals without usable achievers are dropped from the
/// local pending set one at a time; `None` when none is left.
pub(crate) fn subgoal_options(
    task: &Task,
    strategy: &Strategy,
    config: &SearchConfig,
    view: &View,
    tracer: &mut Tracer,
) -> Option<SubgoalOptions> {
    let ps = view.state;
    let depth = view.depth;
    let mut local = view.agenda.pending.clone();
    while !local.is_empty() {
        let goal = strategy.goal.select(view, &local);
        tracer.emit(|| Payload::Subgoal {
            depth,
            goal: task.lit_name(goal),
        });
        let mut ops = task.relevant(goal).to_vec();
        if config.goal_loop_pruning {
            ops.retain(|&o| {
                let looped = goal_loop(task, ps, goal, o);
                if looped {
                    tracer.emit(|| Payload::Prune {
                        depth,
                        reason: "goal-loop".into(),
                        item: task.op_name(o),
                    });
                }
                !looped
            });
        }
        if ops.is_empty() {
            tracer.emit(|| Payload::Prune {
                depth,
                reason: "no-relevant".into(),
                item: task.lit_name(goal),
            });
            local.retain(|&g| g != goal);
            continue;
        }
        strategy.relevant.rank(view, goal, &mut ops);
        return Some(SubgoalOptions { goal, ops });
    }
    None
}

/// Apply candidates: ranked active applicable operators, restricted to
/// the independence class of the best-ranked one when that pruning is on.
pub(crate) fn apply_options(
    strategy: &Strategy,
    config: &SearchConfig,
    view: &View,
    tracer: &mut Tracer,
) -> Vec<OpId> {
    let mut ops = view.agenda.applicable.clone();
    strategy.applicable.rank(view, &mut ops);
    if config.independence_pruning && ops.len() > 1 {
        let mut classes = independence_partition(view, &ops);
        let first = classes.swap_remove(0);
        for o in classes.into_iter().flatten() {
            tracer.emit(|| Payload::Prune {
                depth: view.depth,
                reason: "independence".into(),
                item: view.task.op_name(o),
            });
        }
        return first;
    }
    ops
}

/// Successor states for `ops`, dropping those that recreate a signature
/// already on the current path.
pub(crate) fn apply_children(
    task: &Task,
    ps: &PlannerState,
    ops: &[OpId],
    path: Option<&PathCounts>,
    depth: usize,
    tracer: &mut Tracer,
) -> Vec<(OpId, PlannerState, Option<Signature>)> {
    ops.iter()
        .filter_map(|&o| {
            let next = apply_step(ps, task, o);
            let Some(path) = path else {
                return Some((o, next, None));
            };
            let sig = next.signature();
            if path.contains_key(&sig) {
                tracer.emit(|| Payload::Prune {
                    depth,
                    reason: "state-loop".into(),
                    item: task.op_name(o),
                });
                return None;
            }
            Some((o, next, Some(sig)))
        })
        .collect()
}
