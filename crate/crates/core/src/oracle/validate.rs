use std::fmt;

use crate::domain::{apply_effects, satisfies, Lit, OpId, PlanStep, State, Task};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    /// 0-based step whose precondition does not hold.
    MissingPrecondition { step: usize, literal: Lit },
    /// 0-based step naming no ground operator of the problem.
    UnknownOperator { step: usize, name: String },
    /// Every step executed but these goal literals are not satisfied.
    GoalUnsatisfied { literals: Vec<Lit> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub valid: bool,
    pub failure: Option<Failure>,
    /// State after the last executed step.
    pub final_state: State,
    pub steps_executed: usize,
}

impl ValidationReport {
    pub fn describe(&self, task: &Task, plan: &[OpId]) -> String {
        match &self.failure {
            None => format!("valid: {} steps, goal satisfied", self.steps_executed),
            Some(Failure::MissingPrecondition { step, literal }) => format!(
                "invalid: step {} {} has unsatisfied precondition {}",
                step + 1,
                plan.get(*step).map(|&o| task.op_name(o)).unwrap_or_default(),
                task.lit_name(*literal)
            ),
            Some(Failure::UnknownOperator { step, name }) => {
                format!("invalid: step {} {name} is not a ground operator of this problem", step + 1)
            }
            Some(Failure::GoalUnsatisfied { literals }) => format!(
                "invalid: goal literals unsatisfied at the end: {}",
                literals
                    .iter()
                    .map(|&l| task.lit_name(l))
                    .collect::<Vec<_>>()
                    .join(" ")
            ),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::MissingPrecondition { step, literal } => {
                write!(f, "step {step}: missing precondition {literal:?}")
            }
            Failure::UnknownOperator { step, name } => write!(f, "step {step}: unknown {name}"),
            Failure::GoalUnsatisfied { literals } => write!(f, "goal unsatisfied: {literals:?}"),
        }
    }
}

/// Replays `plan` from the initial state, stopping at the first operator
/// whose preconditions fail; valid iff every step runs and the goal holds
/// at the end.
pub fn validate_plan(task: &Task, plan: &[OpId]) -> ValidationReport {
    let mut state = task.initial_state().clone();
    for (i, &o) in plan.iter().enumerate() {
        let op = task.op(o);
        if let Some(&missing) = op.pre.iter().find(|&&p| !satisfies(&state, p)) {
            return ValidationReport {
                valid: false,
                failure: Some(Failure::MissingPrecondition {
                    step: i,
                    literal: missing,
                }),
                final_state: state,
                steps_executed: i,
            };
        }
        state = apply_effects(&state, op);
    }
    let unmet: Vec<Lit> = task
        .goal()
        .iter()
        .copied()
        .filter(|&g| !satisfies(&state, g))
        .collect();
    ValidationReport {
        valid: unmet.is_empty(),
        failure: (!unmet.is_empty()).then_some(Failure::GoalUnsatisfied { literals: unmet }),
        final_state: state,
        steps_executed: plan.len(),
    }
}

/// [`validate_plan`] over plan-file steps, resolving names first.
pub fn validate_steps(task: &Task, steps: &[PlanStep]) -> (Vec<OpId>, ValidationReport) {
    let mut ids = Vec::with_capacity(steps.len());
    for (i, s) in steps.iter().enumerate() {
        match s.resolve(task) {
            Some(id) => ids.push(id),
            None => {
                let prefix = validate_plan(task, &ids);
                let report = ValidationReport {
                    valid: false,
                    failure: Some(match prefix.failure {
                        Some(Failure::MissingPrecondition { .. }) => prefix.failure.unwrap(),
                        _ => Failure::UnknownOperator {
                            step: i,
                            name: s.to_string(),
                        },
                    }),
                    final_state: prefix.final_state,
                    steps_executed: prefix.steps_executed,
                };
                return (ids, report);
            }
        }
    }
    let report = validate_plan(task, &ids);
    (ids, report)
}
