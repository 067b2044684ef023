use std::fmt;
use std::time::{Duration, Instant};

use crate::domain::{Lit, OpId, Task};
use crate::strategy::{Answer, Strategy, View};

use super::expand::{apply_children, apply_options, choose_phase, subgoal_options, Phase};
use super::invariants::check_invariants;
use super::state::{
    initialize, is_terminal, refresh_agenda, subgoal_step, Agenda, PlannerState, Signature,
};
use super::trace::{Payload, TraceSink, Tracer};

/// Occurrence counts of state signatures on the current search path.
pub(crate) type PathCounts = rustc_hash::FxHashMap<Signature, usize>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub depth_init: usize,
    pub depth_increment: usize,
    /// Maximum committed decisions over the whole search; 0 means no limit.
    pub node_budget: u64,
    pub time_limit: Option<Duration>,
    pub goal_loop_pruning: bool,
    pub state_loop_pruning: bool,
    pub independence_pruning: bool,
    /// Run the bookkeeping invariant walk on every state reached.
    pub check_invariants: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            depth_init: 8,
            depth_increment: 8,
            node_budget: 0,
            time_limit: None,
            goal_loop_pruning: true,
            state_loop_pruning: true,
            independence_pruning: true,
            check_invariants: cfg!(debug_assertions),
        }
    }
}

impl SearchConfig {
    /// All pruning off: the configuration under which the search is
    /// complete by construction.
    pub fn unpruned() -> Self {
        SearchConfig {
            goal_loop_pruning: false,
            state_loop_pruning: false,
            independence_pruning: false,
            ..SearchConfig::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Solved,
    Exhausted,
    BudgetExceeded,
    TimeOut,
    /// A policy (interactive prompt, choice script) gave up.
    Aborted(String),
}

impl Outcome {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Solved => "solved",
            Outcome::Exhausted => "exhausted",
            Outcome::BudgetExceeded => "budget-exceeded",
            Outcome::TimeOut => "time-out",
            Outcome::Aborted(_) => "aborted",
        }
    }

    pub fn is_solved(&self) -> bool {
        *self == Outcome::Solved
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Aborted(why) => write!(f, "aborted ({why})"),
            other => f.write_str(other.label()),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Committed decisions (subgoal plus apply steps) over all rounds.
    pub nodes: u64,
    /// Failed subtrees abandoned for a sibling alternative. Subtrees that
    /// touched the depth bound do not count; their failure may be due to
    /// the bound alone.
    pub backtracks: u64,
    pub subgoal_steps: u64,
    pub apply_steps: u64,
    pub rounds: u32,
    pub peak_depth: usize,
    pub invariant_violations: u64,
    pub first_violation: Option<String>,
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub outcome: Outcome,
    /// The head-plan when solved, empty otherwise.
    pub plan: Vec<OpId>,
    pub stats: SearchStats,
}

enum Child {
    Subgoal { goal: Lit, op: OpId },
    Apply {
        op: OpId,
        next: Option<Box<(PlannerState, Option<Signature>)>>,
    },
}

struct Frame {
    ps: PlannerState,
    /// Present when state-loop pruning is on.
    sig: Option<Signature>,
    depth: usize,
    /// Position in the choice script while this frame is on the scripted
    /// path.
    script: Option<usize>,
    expanded: bool,
    /// This frame hit the depth bound and was not expanded.
    cutoff: bool,
    /// Some frame below this one hit the depth bound.
    cut_below: bool,
    agenda: Agenda,
    phases: Vec<Phase>,
    phase_idx: usize,
    children: Vec<Child>,
    child_idx: usize,
}

impl Frame {
    fn new(ps: PlannerState, sig: Option<Signature>, depth: usize, script: Option<usize>) -> Self {
        Frame {
            ps,
            sig,
            depth,
            script,
            expanded: false,
            cutoff: false,
            cut_below: false,
            agenda: Agenda::default(),
            phases: Vec::new(),
            phase_idx: 0,
            children: Vec::new(),
            child_idx: 0,
        }
    }
}

enum Round {
    Solved(Vec<OpId>),
    Exhausted { cutoff: bool },
    Stop(Outcome),
}

struct Searcher<'a, 't> {
    task: &'a Task,
    strategy: &'a mut Strategy,
    config: &'a SearchConfig,
    tracer: Tracer<'t>,
    stats: SearchStats,
    started: Instant,
}

/// Depth-first search with iterative deepening over the three backtrack
/// points (subgoal-or-apply, achiever choice, applicable-operator choice).
pub fn search(task: &Task, strategy: &mut Strategy, config: &SearchConfig) -> SearchResult {
    run(task, strategy, config, Tracer::off())
}

/// [`search`], emitting trace events into `sink`.
pub fn search_traced(
    task: &Task,
    strategy: &mut Strategy,
    config: &SearchConfig,
    sink: &mut dyn TraceSink,
) -> SearchResult {
    run(task, strategy, config, Tracer::new(Some(sink)))
}

fn run(task: &Task, strategy: &mut Strategy, config: &SearchConfig, tracer: Tracer) -> SearchResult {
    let mut s = Searcher {
        task,
        strategy,
        config,
        tracer,
        stats: SearchStats::default(),
        started: Instant::now(),
    };
    let mut bound = config.depth_init.max(1);
    loop {
        s.stats.rounds += 1;
        match s.round(bound) {
            Round::Solved(plan) => return s.finish(Outcome::Solved, plan),
            Round::Stop(outcome) => return s.finish(outcome, Vec::new()),
            Round::Exhausted { cutoff: false } => return s.finish(Outcome::Exhausted, Vec::new()),
            Round::Exhausted { cutoff: true } => {
                bound += config.depth_increment.max(1);
                s.tracer.emit(|| Payload::Deepen { bound });
            }
        }
    }
}

impl Searcher<'_, '_> {
    fn finish(self, outcome: Outcome, plan: Vec<OpId>) -> SearchResult {
        SearchResult {
            outcome,
            plan,
            stats: self.stats,
        }
    }

    fn limit_hit(&self) -> Option<Outcome> {
        if self.config.node_budget > 0 && self.stats.nodes >= self.config.node_budget {
            return Some(Outcome::BudgetExceeded);
        }
        if let Some(limit) = self.config.time_limit {
            if self.stats.nodes % 256 == 0 && self.started.elapsed() >= limit {
                return Some(Outcome::TimeOut);
            }
        }
        None
    }

    fn round(&mut self, bound: usize) -> Round {
        let root = initialize(self.task);
        let script = Some(0).filter(|&p| self.script_live(p));
        let mut path = PathCounts::default();
        let root_sig = self.config.state_loop_pruning.then(|| root.signature());
        if let Some(sig) = &root_sig {
            path.insert(sig.clone(), 1);
        }
        let mut stack = vec![Frame::new(root, root_sig, 0, script)];
        let mut cutoff = false;

        while let Some(top) = stack.last_mut() {
            if !top.expanded {
                top.expanded = true;
                self.stats.peak_depth = self.stats.peak_depth.max(top.depth);
                if self.config.check_invariants {
                    if let Err(msg) = check_invariants(self.task, &top.ps) {
                        self.stats.invariant_violations += 1;
                        self.stats.first_violation.get_or_insert(msg);
                    }
                }
                if is_terminal(&top.ps, self.task) {
                    return Round::Solved(top.ps.head.clone());
                }
                if top.depth >= bound && top.script.is_none() {
                    cutoff = true;
                    top.cutoff = true;
                } else if let Err(why) = self.expand(top, &path) {
                    return Round::Stop(Outcome::Aborted(why));
                }
            }

            if top.child_idx < top.children.len() {
                if let Some(outcome) = self.limit_hit() {
                    return Round::Stop(outcome);
                }
                let i = top.child_idx;
                top.child_idx += 1;
                let on_script = top.phase_idx == 0 && i == 0;
                let child_script = top.script.filter(|&p| on_script && self.script_live(p));
                let depth = top.depth;
                let task = self.task;
                let (next, sig) = match &mut top.children[i] {
                    Child::Subgoal { goal, op } => {
                        let (goal, op) = (*goal, *op);
                        self.stats.subgoal_steps += 1;
                        self.tracer.emit(|| Payload::SelectOp {
                            depth,
                            goal: task.lit_name(goal),
                            op: task.op_name(op),
                        });
                        let next = subgoal_step(&top.ps, task, goal, op);
                        let sig = self.config.state_loop_pruning.then(|| next.signature());
                        (next, sig)
                    }
                    Child::Apply { op, next } => {
                        let op = *op;
                        self.stats.apply_steps += 1;
                        self.tracer.emit(|| Payload::Apply {
                            depth,
                            op: task.op_name(op),
                        });
                        *next.take().expect("each child is visited once")
                    }
                };
                self.stats.nodes += 1;
                if let Some(sig) = &sig {
                    *path.entry(sig.clone()).or_default() += 1;
                }
                stack.push(Frame::new(next, sig, depth + 1, child_script));
                continue;
            }

            if !top.cutoff && top.phase_idx + 1 < top.phases.len() {
                top.phase_idx += 1;
                let phase = top.phases[top.phase_idx];
                if let Err(why) = self.start_phase(top, phase, false, &path) {
                    return Round::Stop(Outcome::Aborted(why));
                }
                continue;
            }

            let done = stack.pop().expect("stack is non-empty");
            if let Some(sig) = &done.sig {
                if let Some(n) = path.get_mut(sig) {
                    *n -= 1;
                    if *n == 0 {
                        path.remove(sig);
                    }
                }
            }
            if let Some(parent) = stack.last_mut() {
                if done.cutoff || done.cut_below {
                    parent.cut_below = true;
                } else {
                    self.stats.backtracks += 1;
                }
                let depth = parent.depth;
                self.tracer.emit(|| Payload::Backtrack { depth });
            }
        }
        Round::Exhausted { cutoff }
    }

    /// Agenda and phase choice for a freshly reached frame, then children of the
    /// first phase.
    fn expand(&mut self, top: &mut Frame, path: &PathCounts) -> Result<(), String> {
        top.agenda = refresh_agenda(&top.ps, self.task);
        if top.agenda.is_empty() {
            return Ok(());
        }
        let both = !top.agenda.pending.is_empty() && !top.agenda.applicable.is_empty();
        let first = if both {
            let toggle = match self.script_answer(top)? {
                Some(Answer::Phase(t)) => {
                    top.script = top.script.map(|p| p + 1);
                    Some(t)
                }
                Some(other) => {
                    return Err(format!(
                        "script answer '{other}' at a subgoal-or-apply prompt"
                    ))
                }
                None => None,
            };
            let depth = top.depth;
            match toggle {
                Some(t) => {
                    self.tracer.emit(|| Payload::Toggle {
                        depth,
                        value: t.to_string(),
                    });
                    Phase::from_toggle(t)
                }
                None => {
                    let view = View {
                        task: self.task,
                        state: &top.ps,
                        agenda: &top.agenda,
                        depth,
                    };
                    let t = self.strategy.toggle.decide(&view).map_err(|e| e.to_string())?;
                    self.tracer.emit(|| Payload::Toggle {
                        depth,
                        value: t.to_string(),
                    });
                    choose_phase(&top.ps, &top.agenda, t).0
                }
            }
        } else {
            choose_phase(&top.ps, &top.agenda, crate::strategy::Toggle::Sub).0
        };
        top.phases = if both {
            vec![first, first.other()]
        } else {
            vec![first]
        };
        let scripted = top.script.is_some();
        self.start_phase(top, first, scripted, path)
    }

    /// The next script answer for `top`, or `None` once the script has run
    /// out or handed over with `auto` (the frame then leaves the scripted
    /// path).
    fn script_answer(&self, top: &mut Frame) -> Result<Option<Answer>, String> {
        let (Some(pos), Some(script)) = (top.script, self.strategy.script.as_ref()) else {
            return Ok(None);
        };
        match script.get(pos) {
            None | Some(Answer::Auto) => {
                top.script = None;
                Ok(None)
            }
            Some(a) => Ok(Some(a.clone())),
        }
    }

    fn script_live(&self, pos: usize) -> bool {
        self.strategy
            .script
            .as_ref()
            .and_then(|s| s.get(pos))
            .is_some_and(|a| *a != Answer::Auto)
    }

    fn start_phase(
        &mut self,
        top: &mut Frame,
        phase: Phase,
        scripted: bool,
        path: &PathCounts,
    ) -> Result<(), String> {
        let depth = top.depth;
        let alternative = top.phases.len() > 1;
        self.tracer.emit(|| Payload::Phase {
            depth,
            phase: phase.as_str().into(),
            alternative,
        });
        top.children.clear();
        top.child_idx = 0;
        let view = View {
            task: self.task,
            state: &top.ps,
            agenda: &top.agenda,
            depth,
        };
        match phase {
            Phase::Subgoal => {
                if let Some(opts) =
                    subgoal_options(self.task, self.strategy, self.config, &view, &mut self.tracer)
                {
                    let mut ops = opts.ops;
                    if scripted && ops.len() > 1 {
                        self.scripted_reorder(top, &mut ops)?;
                    }
                    top.children = ops
                        .into_iter()
                        .map(|op| Child::Subgoal {
                            goal: opts.goal,
                            op,
                        })
                        .collect();
                }
            }
            Phase::Apply => {
                let ops = apply_options(self.strategy, self.config, &view, &mut self.tracer);
                let path = self.config.state_loop_pruning.then_some(path);
                let mut kids =
                    apply_children(self.task, &top.ps, &ops, path, depth, &mut self.tracer);
                if scripted && kids.len() > 1 {
                    let mut ids: Vec<OpId> = kids.iter().map(|(o, _, _)| *o).collect();
                    self.scripted_reorder(top, &mut ids)?;
                    let first = kids.iter().position(|(o, _, _)| *o == ids[0]).unwrap();
                    let chosen = kids.remove(first);
                    kids.insert(0, chosen);
                }
                top.children = kids
                    .into_iter()
                    .map(|(op, next, sig)| Child::Apply {
                        op,
                        next: Some(Box::new((next, sig))),
                    })
                    .collect();
            }
        }
        Ok(())
    }

    /// Moves the scripted choice to the front, keeping the rest in ranked
    /// order.
    fn scripted_reorder(&self, top: &mut Frame, ops: &mut Vec<OpId>) -> Result<(), String> {
        let Some(answer) = self.script_answer(top)? else {
            return Ok(());
        };
        let idx = answer.resolve(self.task, ops)?;
        top.script = top.script.map(|p| p + 1);
        let chosen = ops.remove(idx);
        ops.insert(0, chosen);
        Ok(())
    }
}
