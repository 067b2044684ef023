use std::collections::BTreeSet;

use crate::domain::{AtomId, Lit, OpId, Task};
use crate::engine::PlannerState;

use super::View;

/// Literals an operator's causes are protecting: the causes themselves and
/// every literal in their ancestor sets.
fn protected(ps: &PlannerState, op: OpId) -> BTreeSet<Lit> {
    let mut out = BTreeSet::new();
    for &g in ps.causes(op).into_iter().flatten() {
        out.insert(g);
        for s in ps.ancestors(g).into_iter().flatten() {
            out.extend(s.iter().copied());
        }
    }
    out
}

/// Does `a` disturb anything `b` needs? Deleting one of its positive
/// literals, or adding an atom one of its negative literals forbids.
fn disturbs(a_add: &[AtomId], a_del: &[AtomId], lits: impl IntoIterator<Item = Lit>) -> bool {
    lits.into_iter().any(|l| {
        if l.is_positive() {
            a_del.contains(&l.atom())
        } else {
            a_add.contains(&l.atom())
        }
    })
}

fn one_way(task: &Task, ps: &PlannerState, a: OpId, b: OpId) -> bool {
    let oa = task.op(a);
    let ob = task.op(b);
    disturbs(&oa.add, &oa.del, ob.pre.iter().copied())
        || ob.add.iter().any(|x| oa.del.contains(x))
        || disturbs(&oa.add, &oa.del, protected(ps, b))
}

/// Conservative interaction test between two applicable operators: either
/// one deletes a precondition or effect of the other, or disturbs a literal
/// in the other's cause/ancestor chain.
pub fn interacts(task: &Task, ps: &PlannerState, a: OpId, b: OpId) -> bool {
    one_way(task, ps, a, b) || one_way(task, ps, b, a)
}

/// Classes of the transitive closure of [`interacts`] over `candidates`.
/// Classes are listed in order of their first member in `candidates`, and
/// members keep their relative order.
pub fn independence_partition(view: &View, candidates: &[OpId]) -> Vec<Vec<OpId>> {
    let n = candidates.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in i + 1..n {
            if interacts(view.task, view.state, candidates[i], candidates[j]) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut classes: Vec<(usize, Vec<OpId>)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match classes.iter_mut().find(|(root, _)| *root == r) {
            Some((_, members)) => members.push(candidates[i]),
            None => classes.push((r, vec![candidates[i]])),
        }
    }
    classes.into_iter().map(|(_, m)| m).collect()
}
