use crate::domain::{Lit, OpId, Task};
use crate::strategy::{Answer, ChoiceScript, Strategy, Toggle, View};

use super::expand::{apply_children, apply_options, choose_phase, subgoal_options, Phase};
use super::search::PathCounts;
use super::search::{search_traced, SearchConfig, SearchResult};
use super::state::{
    initialize, is_terminal, refresh_agenda, subgoal_step, Agenda, PlannerState,
};
use super::trace::{TraceSink, Tracer};

/// What the stepper needs from its driver next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Prompt {
    /// Goal statement satisfied.
    Terminal,
    /// No way forward from here; undo to continue.
    DeadEnd(String),
    /// Subgoal or apply? `suggested` is what the strategy's toggle would do.
    Phase { suggested: Phase },
    /// Pick one of the ranked candidates. A single candidate is `forced`
    /// and answering it is not recorded in the script.
    Choose {
        phase: Phase,
        goal: Option<Lit>,
        candidates: Vec<OpId>,
        forced: bool,
    },
}

struct Node {
    ps: PlannerState,
    phase: Option<Toggle>,
    choice: Option<Answer>,
}

/// Manual, decision-at-a-time driver over the same candidate generation
/// as the search. Recorded answers form a [`ChoiceScript`] that makes the
/// search replay the same path.
pub struct Stepper<'a> {
    task: &'a Task,
    strategy: Strategy,
    config: SearchConfig,
    path: Vec<Node>,
}

impl<'a> Stepper<'a> {
    pub fn new(task: &'a Task, strategy: Strategy, config: SearchConfig) -> Self {
        Stepper {
            task,
            strategy,
            config,
            path: vec![Node {
                ps: initialize(task),
                phase: None,
                choice: None,
            }],
        }
    }

    pub fn state(&self) -> &PlannerState {
        &self.path.last().expect("path is never empty").ps
    }

    /// State before the most recent decision, if any.
    pub fn previous_state(&self) -> Option<&PlannerState> {
        self.path.len().checked_sub(2).map(|i| &self.path[i].ps)
    }

    pub fn agenda(&self) -> Agenda {
        refresh_agenda(self.state(), self.task)
    }

    pub fn depth(&self) -> usize {
        self.path.len() - 1
    }

    fn signatures(&self) -> PathCounts {
        let mut m = PathCounts::default();
        for n in &self.path {
            *m.entry(n.ps.signature()).or_default() += 1;
        }
        m
    }

    fn options(&mut self, phase: Phase) -> (Option<Lit>, Vec<OpId>) {
        let node = self.path.last().expect("path is never empty");
        let agenda = refresh_agenda(&node.ps, self.task);
        let view = View {
            task: self.task,
            state: &node.ps,
            agenda: &agenda,
            depth: self.path.len() - 1,
        };
        let mut tracer = Tracer::off();
        match phase {
            Phase::Subgoal => {
                match subgoal_options(self.task, &self.strategy, &self.config, &view, &mut tracer) {
                    Some(o) => (Some(o.goal), o.ops),
                    None => (None, Vec::new()),
                }
            }
            Phase::Apply => {
                let ops = apply_options(&self.strategy, &self.config, &view, &mut tracer);
                let sigs = self.signatures();
                let path = self.config.state_loop_pruning.then_some(&sigs);
                let kids = apply_children(self.task, &node.ps, &ops, path, view.depth, &mut tracer);
                (None, kids.into_iter().map(|(o, _, _)| o).collect())
            }
        }
    }

    fn phase_now(&self, agenda: &Agenda) -> Option<Phase> {
        let node = self.path.last().expect("path is never empty");
        if agenda.pending.is_empty() || agenda.applicable.is_empty() {
            return Some(choose_phase(&node.ps, agenda, Toggle::Sub).0);
        }
        node.phase.map(Phase::from_toggle)
    }

    pub fn prompt(&mut self) -> Prompt {
        let task = self.task;
        let node = self.path.last().expect("path is never empty");
        if is_terminal(&node.ps, task) {
            return Prompt::Terminal;
        }
        let agenda = refresh_agenda(&node.ps, task);
        if agenda.is_empty() {
            return Prompt::DeadEnd("no active pending goals and no applicable operators".into());
        }
        let Some(phase) = self.phase_now(&agenda) else {
            let view = View {
                task,
                state: &node.ps,
                agenda: &agenda,
                depth: self.path.len() - 1,
            };
            let suggested = match self.strategy.toggle.decide(&view) {
                Ok(t) => choose_phase(&node.ps, &agenda, t).0,
                Err(_) => Phase::Subgoal,
            };
            return Prompt::Phase { suggested };
        };
        let (goal, candidates) = self.options(phase);
        if candidates.is_empty() {
            return Prompt::DeadEnd(match phase {
                Phase::Subgoal => "no pending goal has a usable achiever".into(),
                Phase::Apply => "every applicable operator repeats a state on this path".into(),
            });
        }
        let forced = candidates.len() == 1;
        Prompt::Choose {
            phase,
            goal,
            candidates,
            forced,
        }
    }

    /// Answers the current prompt.
    pub fn answer(&mut self, answer: &Answer) -> Result<(), String> {
        match self.prompt() {
            Prompt::Terminal => Err("the goal statement is already satisfied".into()),
            Prompt::DeadEnd(why) => Err(format!("dead end: {why}")),
            Prompt::Phase { .. } => match answer {
                Answer::Phase(t) => {
                    self.path.last_mut().expect("path is never empty").phase = Some(*t);
                    Ok(())
                }
                other => Err(format!("expected 'sub' or 'app', got '{other}'")),
            },
            Prompt::Choose {
                phase,
                goal,
                candidates,
                forced,
            } => {
                let idx = answer.resolve(self.task, &candidates)?;
                let op = candidates[idx];
                let node = self.path.last_mut().expect("path is never empty");
                if !forced {
                    node.choice = Some(Answer::Op(self.task.op_name(op)));
                }
                let next = match phase {
                    Phase::Subgoal => subgoal_step(&node.ps, self.task, goal.expect("subgoal phase has a goal"), op),
                    Phase::Apply => super::state::apply_step(&node.ps, self.task, op),
                };
                self.path.push(Node {
                    ps: next,
                    phase: None,
                    choice: None,
                });
                Ok(())
            }
        }
    }

    /// Takes back the most recent answer: a pending subgoal-or-apply
    /// answer at the current point, otherwise the last committed decision.
    /// False when there is nothing to undo.
    pub fn undo(&mut self) -> bool {
        let last = self.path.last_mut().expect("path is never empty");
        if last.phase.is_some() {
            last.phase = None;
            return true;
        }
        if self.path.len() == 1 {
            return false;
        }
        self.path.pop();
        self.path.last_mut().expect("path is never empty").choice = None;
        true
    }

    /// Answers recorded so far, in prompt order.
    pub fn script(&self) -> ChoiceScript {
        let mut answers = Vec::new();
        for (i, n) in self.path.iter().enumerate() {
            let committed = i + 1 < self.path.len();
            if let Some(t) = n.phase {
                answers.push(Answer::Phase(t));
            }
            if committed {
                if let Some(c) = &n.choice {
                    answers.push(c.clone());
                }
            }
        }
        ChoiceScript::new(answers)
    }

    /// Runs the search with the recorded script (followed by `auto` when
    /// `hand_over` is set), producing the same trace a non-interactive
    /// replay of the saved script produces.
    pub fn run(&mut self, hand_over: bool, sink: &mut dyn TraceSink) -> (ChoiceScript, SearchResult) {
        let mut script = self.script();
        if hand_over {
            let mut answers = script.answers().to_vec();
            answers.push(Answer::Auto);
            script = ChoiceScript::new(answers);
        }
        let saved = self.strategy.script.replace(script.clone());
        let result = search_traced(self.task, &mut self.strategy, &self.config, sink);
        self.strategy.script = saved;
        (script, result)
    }
}
