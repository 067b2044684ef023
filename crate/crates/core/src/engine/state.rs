use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use indexmap::IndexSet;
use rustc_hash::FxBuildHasher;

use crate::domain::{apply_effects, satisfies, Lit, OpId, State, Task};

/// One ancestor goal set.
pub type AncestorSet = BTreeSet<Lit>;

/// Fringe goals in fringe-entry order.
pub type Fringe = IndexSet<Lit, FxBuildHasher>;

/// The ancestor collection of one goal. Shared between states until one of
/// them modifies it.
pub type Ancestors = Arc<BTreeSet<AncestorSet>>;

/// The incrementally maintained part of the planner: current state,
/// fringe goals, selected operators, ancestor and cause functions, plus the
/// head-plan of applied operators.
///
/// `anc` keeps an entry for every fringe goal and for every goal that is a
/// cause of a selected operator. Entries survive a goal leaving the fringe
/// through subgoaling, because the goal's chain is still needed when its
/// preconditions are subgoaled on and when it re-enters the fringe after its
/// operator is applied.
#[derive(Debug, Clone)]
pub struct PlannerState {
    pub current: State,
    /// Insertion order is fringe-entry order.
    pub fringe: Fringe,
    pub selected: BTreeSet<OpId>,
    pub anc: BTreeMap<Lit, Ancestors>,
    pub cause: BTreeMap<OpId, Arc<BTreeSet<Lit>>>,
    pub head: Vec<OpId>,
}

impl PartialEq for PlannerState {
    fn eq(&self, other: &Self) -> bool {
        self.current == other.current
            && self.fringe.iter().eq(other.fringe.iter())
            && self.selected == other.selected
            && self.anc == other.anc
            && self.cause == other.cause
            && self.head == other.head
    }
}

impl Eq for PlannerState {}

/// Exact copy of a [`PlannerState`] for later restoration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot(PlannerState);

impl PlannerState {
    pub fn snapshot(&self) -> Snapshot {
        Snapshot(self.clone())
    }

    pub fn restore(snapshot: &Snapshot) -> PlannerState {
        snapshot.0.clone()
    }

    /// The (C, O, G) triple used for state-loop detection.
    pub fn signature(&self) -> Signature {
        let mut fringe: Vec<Lit> = self.fringe.iter().copied().collect();
        fringe.sort_unstable();
        Signature {
            current: self.current.clone(),
            selected: self.selected.iter().copied().collect(),
            fringe,
        }
    }

    pub fn ancestors(&self, g: Lit) -> Option<&BTreeSet<AncestorSet>> {
        self.anc.get(&g).map(|a| &**a)
    }

    pub fn causes(&self, op: OpId) -> Option<&BTreeSet<Lit>> {
        self.cause.get(&op).map(|c| &**c)
    }

    /// True when every ancestor set of `g` contains a goal already
    /// satisfied: every purpose `g` was selected for has been met. An
    /// empty (or missing) collection is vacuously inactive.
    pub fn goal_inactive(&self, g: Lit) -> bool {
        match self.anc.get(&g) {
            None => true,
            Some(sets) => sets
                .iter()
                .all(|s| s.iter().any(|&x| satisfies(&self.current, x))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    current: State,
    selected: Vec<OpId>,
    fringe: Vec<Lit>,
}

/// Active pending goals (fringe order) and active applicable operators
/// (id order), recomputed from scratch on every iteration.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Agenda {
    pub pending: Vec<Lit>,
    pub applicable: Vec<OpId>,
}

impl Agenda {
    pub fn is_empty(&self) -> bool {
        self.pending.is_empty() && self.applicable.is_empty()
    }
}

/// Initial planner state: fringe = goal statement, current = initial state, nothing
/// selected. Top-level goals get the ancestor collection `{∅}`.
pub fn initialize(task: &Task) -> PlannerState {
    let mut fringe = Fringe::default();
    let mut anc = BTreeMap::new();
    for &g in task.goal() {
        fringe.insert(g);
        anc.insert(g, Arc::new(BTreeSet::from([AncestorSet::new()])));
    }
    PlannerState {
        current: task.initial_state().clone(),
        fringe,
        selected: BTreeSet::new(),
        anc,
        cause: BTreeMap::new(),
        head: Vec::new(),
    }
}

/// Termination: every goal literal satisfied in the current state.
pub fn is_terminal(ps: &PlannerState, task: &Task) -> bool {
    task.goal_satisfied(&ps.current)
}

/// Pending goals and applicable operators.
pub fn refresh_agenda(ps: &PlannerState, task: &Task) -> Agenda {
    let c = &ps.current;
    let init = task.initial_state();
    let pending = ps
        .fringe
        .iter()
        .copied()
        .filter(|&g| !satisfies(c, g) || satisfies(init, g))
        .filter(|&g| !ps.goal_inactive(g))
        .collect();
    let applicable = ps
        .selected
        .iter()
        .copied()
        .filter(|&o| task.op(o).pre.iter().all(|&p| satisfies(c, p)))
        .filter(|&o| {
            let causes = ps.cause.get(&o);
            !causes.is_some_and(|cs| cs.iter().all(|&g| satisfies(c, g) || ps.goal_inactive(g)))
        })
        .collect();
    Agenda {
        pending,
        applicable,
    }
}

/// Subgoal: select `op` to achieve `goal`.
pub fn subgoal_step(ps: &PlannerState, task: &Task, goal: Lit, op: OpId) -> PlannerState {
    let mut next = ps.clone();
    next.selected.insert(op);
    next.fringe.shift_remove(&goal);
    let pre = &task.op(op).pre;
    for &p in pre {
        next.fringe.insert(p);
    }
    Arc::make_mut(next.cause.entry(op).or_default()).insert(goal);
    let extended: Vec<AncestorSet> = ps
        .anc
        .get(&goal)
        .map(|sets| sets.iter())
        .into_iter()
        .flatten()
        .map(|s| {
            let mut s = s.clone();
            s.insert(goal);
            s
        })
        .collect();
    for &p in pre {
        Arc::make_mut(next.anc.entry(p).or_default()).extend(extended.iter().cloned());
    }
    next
}

/// Apply `op` in the simulated state and update the bookkeeping.
pub fn apply_step(ps: &PlannerState, task: &Task, op: OpId) -> PlannerState {
    let mut next = ps.clone();
    let o = task.op(op);
    next.current = apply_effects(&ps.current, o);
    next.selected.remove(&op);
    let causes = next.cause.remove(&op).unwrap_or_default();
    for &p in &o.pre {
        if let Some(sets) = next.anc.get_mut(&p) {
            if sets.iter().any(|s| !s.is_disjoint(&causes)) {
                Arc::make_mut(sets).retain(|s| s.is_disjoint(&causes));
            }
        }
    }
    for &g in causes.iter() {
        next.fringe.insert(g);
        if task.goal_index(g).is_some() {
            let sets = next.anc.entry(g).or_default();
            if !sets.contains(&AncestorSet::new()) {
                Arc::make_mut(sets).insert(AncestorSet::new());
            }
        }
    }
    for &p in &o.pre {
        if next.anc.get(&p).is_none_or(|s| s.is_empty()) {
            next.fringe.shift_remove(&p);
            let still_cause = next.cause.values().any(|cs| cs.contains(&p));
            if !still_cause && !next.fringe.contains(&p) {
                next.anc.remove(&p);
            }
        }
    }
    next.head.push(op);
    next
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::fixture_task;

    fn lit(task: &Task, name: &str) -> Lit {
        let atom = crate::domain::Atom::new(name, &[]);
        Lit::pos(task.atom_id(&atom).unwrap())
    }

    fn op(task: &Task, name: &str) -> OpId {
        task.op_by_name(name, &[]).unwrap()
    }

    #[test]
    fn initial_agenda() {
        let t = fixture_task();
        let ps = initialize(&t);
        let ag = refresh_agenda(&ps, &t);
        let names: Vec<_> = ag.pending.iter().map(|&g| t.lit_name(g)).collect();
        assert_eq!(names, ["(g1)", "(g2)", "(g3)"]);
        assert!(ag.applicable.is_empty());
        assert!(!is_terminal(&ps, &t));
    }

    #[test]
    fn subgoal_then_apply_restore() {
        let t = fixture_task();
        let ps = initialize(&t);
        let snap = ps.snapshot();
        let s1 = subgoal_step(&ps, &t, lit(&t, "g2"), op(&t, "o2"));
        assert_ne!(s1, ps);
        assert_eq!(PlannerState::restore(&snap), ps);
        let g4 = lit(&t, "g4");
        assert!(s1.fringe.contains(&g4));
        assert_eq!(*s1.anc[&g4], BTreeSet::from([AncestorSet::from([lit(&t, "g2")])]));
    }

    #[test]
    fn apply_requeues_causes() {
        let t = fixture_task();
        let ps = initialize(&t);
        let ps = subgoal_step(&ps, &t, lit(&t, "g2"), op(&t, "o2"));
        let ps = subgoal_step(&ps, &t, lit(&t, "g4"), op(&t, "o4"));
        let ps = apply_step(&ps, &t, op(&t, "o4"));
        assert!(ps.fringe.contains(&lit(&t, "g4")));
        assert!(!ps.fringe.contains(&lit(&t, "g5")));
        assert!(!ps.fringe.contains(&lit(&t, "g7")), "g7 no longer needed");
        assert!(!ps.anc.contains_key(&lit(&t, "g7")));
        assert_eq!(ps.head, [op(&t, "o4")]);
    }
}
