use std::collections::BTreeSet;

use crate::domain::{Lit, Task};

use super::state::PlannerState;

/// Bookkeeping invariants of a planner state:
///
/// - `anc` has an entry for exactly the fringe goals and the causes of
///   selected operators;
/// - `cause` has an entry for exactly the selected operators, each
///   non-empty;
/// - top-level goals carry the empty ancestor set and no other goal does;
/// - every literal in an ancestor set of a fringe goal is a top-level goal
///   or a cause of some selected operator;
/// - every precondition of a selected operator is on the fringe or is
///   itself being planned for, as a cause of some selected operator.
pub fn check_invariants(task: &Task, ps: &PlannerState) -> Result<(), String> {
    let causes: BTreeSet<Lit> = ps.cause.values().flat_map(|cs| cs.iter()).copied().collect();
    for &g in &ps.fringe {
        if !ps.anc.contains_key(&g) {
            return Err(format!("fringe goal {} has no ancestor entry", task.lit_name(g)));
        }
    }
    for &g in ps.anc.keys() {
        if !ps.fringe.contains(&g) && !causes.contains(&g) {
            return Err(format!(
                "stray ancestor entry for {}, neither on the fringe nor a cause",
                task.lit_name(g)
            ));
        }
    }
    for (&o, cs) in &ps.cause {
        if !ps.selected.contains(&o) {
            return Err(format!("cause entry for unselected {}", task.op_name(o)));
        }
        if cs.is_empty() {
            return Err(format!("selected {} has no cause", task.op_name(o)));
        }
    }
    for &o in &ps.selected {
        if !ps.cause.contains_key(&o) {
            return Err(format!("selected {} has no cause", task.op_name(o)));
        }
    }
    for (&g, sets) in &ps.anc {
        let top = task.goal_index(g).is_some();
        if top != sets.contains(&BTreeSet::new()) {
            return Err(format!(
                "{} {} the empty ancestor set",
                task.lit_name(g),
                if top { "lacks" } else { "carries" }
            ));
        }
    }
    for &g in &ps.fringe {
        for s in ps.anc[&g].iter() {
            for &x in s {
                if task.goal_index(x).is_none() && !causes.contains(&x) {
                    return Err(format!(
                        "ancestor {} of {} is neither top-level nor a cause",
                        task.lit_name(x),
                        task.lit_name(g)
                    ));
                }
            }
        }
    }
    for &o in &ps.selected {
        for &p in &task.op(o).pre {
            if !ps.fringe.contains(&p) && !causes.contains(&p) {
                return Err(format!(
                    "precondition {} of {} is neither on the fringe nor a cause",
                    task.lit_name(p),
                    task.op_name(o)
                ));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::bench::fixture_task;
    use crate::domain::{Atom, Literal};
    use crate::engine::{initialize, subgoal_step};

    fn lit(task: &Task, name: &str) -> Lit {
        task.lit(&Literal::pos(Atom::new(name, &[]))).unwrap()
    }

    #[test]
    fn shared_precondition_subgoaled_away_is_allowed() {
        let task = fixture_task();
        let o = |n: &str| task.op_by_name(n, &[]).unwrap();
        let mut ps = initialize(&task);
        for (g, op) in [("g1", "o1"), ("g2", "o2"), ("g3", "o3"), ("g4", "o4")] {
            ps = subgoal_step(&ps, &task, lit(&task, g), o(op));
            assert_eq!(check_invariants(&task, &ps), Ok(()), "after {g}");
        }
        // g4 is a precondition of o2 and o3 but left the fringe when subgoaled.
        assert!(!ps.fringe.contains(&lit(&task, "g4")));
    }

    #[test]
    fn corrupted_states_are_reported() {
        let task = fixture_task();
        let o1 = task.op_by_name("o1", &[]).unwrap();
        let ps = subgoal_step(&initialize(&task), &task, lit(&task, "g1"), o1);

        let mut bad = ps.clone();
        bad.selected.insert(task.op_by_name("o2", &[]).unwrap());
        assert!(check_invariants(&task, &bad).unwrap_err().contains("no cause"));

        let mut bad = ps.clone();
        bad.anc.remove(&lit(&task, "g2"));
        assert!(check_invariants(&task, &bad).unwrap_err().contains("no ancestor entry"));

        let mut bad = ps;
        bad.anc.insert(lit(&task, "g1"), Arc::new(BTreeSet::new()));
        assert!(check_invariants(&task, &bad).unwrap_err().contains("the empty ancestor set"));
    }
}
