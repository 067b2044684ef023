use std::collections::BTreeSet;

use crate::domain::{OpId, Task};

use super::validate::validate_plan;

/// Plan steps (indices into the source plan) with a precedence relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialOrderPlan {
    pub steps: Vec<OpId>,
    /// Transitively reduced `(before, after)` pairs of step indices.
    pub orderings: BTreeSet<(usize, usize)>,
}

impl PartialOrderPlan {
    /// Every implied `(before, after)` pair.
    pub fn closure(&self) -> BTreeSet<(usize, usize)> {
        closure(self.steps.len(), &self.orderings)
    }

    pub fn precedes(&self, a: usize, b: usize) -> bool {
        self.closure().contains(&(a, b))
    }

    /// Steps grouped into layers: each layer holds the steps whose
    /// predecessors all lie in earlier layers.
    pub fn layers(&self) -> Vec<Vec<usize>> {
        let n = self.steps.len();
        let mut level = vec![0usize; n];
        for j in 0..n {
            for &(a, b) in &self.orderings {
                if b == j {
                    level[j] = level[j].max(level[a] + 1);
                }
            }
        }
        let depth = level.iter().copied().max().map_or(0, |d| d + 1);
        let mut out = vec![Vec::new(); depth];
        for (i, &l) in level.iter().enumerate() {
            out[l].push(i);
        }
        out
    }

    pub fn render(&self, task: &Task) -> String {
        let layers: Vec<String> = self
            .layers()
            .into_iter()
            .map(|layer| {
                let names: Vec<String> =
                    layer.iter().map(|&i| task.op_name(self.steps[i])).collect();
                if names.len() == 1 {
                    names[0].clone()
                } else {
                    format!("{{{}}}", names.join(", "))
                }
            })
            .collect();
        let mut out = format!("layers: {}\n", layers.join(", then "));
        for &(a, b) in &self.orderings {
            out.push_str(&format!(
                "{} < {}\n",
                task.op_name(self.steps[a]),
                task.op_name(self.steps[b])
            ));
        }
        out
    }
}

fn closure(n: usize, edges: &BTreeSet<(usize, usize)>) -> BTreeSet<(usize, usize)> {
    let mut reach = vec![vec![false; n]; n];
    for &(a, b) in edges {
        reach[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    for (i, row) in reach.iter().enumerate() {
        for (j, &r) in row.iter().enumerate() {
            if r {
                out.insert((i, j));
            }
        }
    }
    out
}

/// Relaxes a valid totally ordered plan into a partial order. Step `i`
/// stays before step `j` when `j` consumes a literal last established by
/// `i`, when `j` would destroy a precondition of `i`, or when their
/// effects conflict on some atom. The result is transitively reduced.
pub fn to_partial_order(task: &Task, plan: &[OpId]) -> Result<PartialOrderPlan, String> {
    let report = validate_plan(task, plan);
    if !report.valid {
        return Err("only valid plans can be relaxed".into());
    }
    let n = plan.len();
    let mut edges = BTreeSet::new();
    for j in 0..n {
        let oj = task.op(plan[j]);
        for &p in &oj.pre {
            let establisher = (0..j).rev().find(|&i| {
                let oi = task.op(plan[i]);
                if p.is_positive() {
                    oi.add.contains(&p.atom()) && !oi.del.contains(&p.atom())
                } else {
                    oi.del.contains(&p.atom())
                }
            });
            if let Some(i) = establisher {
                edges.insert((i, j));
            }
        }
        for i in 0..j {
            let oi = task.op(plan[i]);
            let threatens = oi.pre.iter().any(|&p| {
                if p.is_positive() {
                    oj.del.contains(&p.atom())
                } else {
                    oj.add.contains(&p.atom())
                }
            });
            let conflict = oi.del.iter().any(|a| oj.add.contains(a))
                || oi.add.iter().any(|a| oj.del.contains(a));
            if threatens || conflict {
                edges.insert((i, j));
            }
        }
    }
    let full = closure(n, &edges);
    let reduced = full
        .iter()
        .copied()
        .filter(|&(a, b)| !(0..n).any(|k| full.contains(&(a, k)) && full.contains(&(k, b))))
        .collect();
    Ok(PartialOrderPlan {
        steps: plan.to_vec(),
        orderings: reduced,
    })
}

/// All total orders of the steps consistent with the precedence relation,
/// as index sequences. Exponential; meant for small plans.
pub fn linear_extensions(po: &PartialOrderPlan) -> Vec<Vec<usize>> {
    let n = po.steps.len();
    let mut preds = vec![Vec::new(); n];
    for &(a, b) in &po.orderings {
        preds[b].push(a);
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn go(
        preds: &[Vec<usize>],
        cur: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] && preds[i].iter().all(|&p| used[p]) {
                used[i] = true;
                cur.push(i);
                go(preds, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    go(&preds, &mut cur, &mut used, &mut out);
    out
}
