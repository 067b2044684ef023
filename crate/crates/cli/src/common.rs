use std::fs::File;
use std::path::Path;
use std::time::Duration;

use anyhow::anyhow;
use flecs::domain::{format_plan, parse_domain, parse_problem, OpId, PlanStep, Task};
use flecs::engine::{Outcome, SearchConfig, SearchResult};
use flecs::strategy::{Registry, Strategy};

use crate::SearchFlags;

/// An error together with the exit status it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn new(code: u8, error: anyhow::Error) -> Self {
        Failure { code, error }
    }

    /// Bad arguments, unreadable or unparsable input, unwritable output.
    pub fn usage(error: anyhow::Error) -> Self {
        Failure::new(3, error)
    }
}

pub fn outcome_code(outcome: &Outcome) -> u8 {
    match outcome {
        Outcome::Solved => 0,
        Outcome::Exhausted => 1,
        Outcome::BudgetExceeded | Outcome::TimeOut | Outcome::Aborted(_) => 2,
    }
}

pub fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(anyhow!("reading {}: {e}", path.display())))
}

pub fn create(path: &Path) -> Result<File, Failure> {
    File::create(path).map_err(|e| Failure::usage(anyhow!("writing {}: {e}", path.display())))
}

pub fn load_task(domain: &Path, problem: &Path) -> Result<Task, Failure> {
    let d = parse_domain(&read(domain)?)
        .map_err(|e| Failure::usage(anyhow!("{}: {e}", domain.display())))?;
    let p = parse_problem(&read(problem)?, &d)
        .map_err(|e| Failure::usage(anyhow!("{}: {e}", problem.display())))?;
    Ok(Task::new(d, p))
}

pub fn selector(flags: &SearchFlags) -> String {
    match &flags.schedule {
        Some(path) => format!("schedule:{}", path.display()),
        None => flags.strategy.clone(),
    }
}

pub fn strategy(flags: &SearchFlags) -> Result<Strategy, Failure> {
    Registry::builtin()
        .strategy(&selector(flags), &flags.goal_policy, "conspiracy", "threat")
        .map_err(|e| Failure::usage(e.into()))
}

pub fn config(flags: &SearchFlags) -> SearchConfig {
    SearchConfig {
        depth_init: flags.depth_init,
        depth_increment: flags.depth_increment,
        node_budget: flags.node_budget,
        time_limit: flags.time_limit_ms.map(Duration::from_millis),
        goal_loop_pruning: !flags.no_goal_loop,
        state_loop_pruning: !flags.no_state_loop,
        independence_pruning: !flags.no_independence,
        ..SearchConfig::default()
    }
}

pub fn plan_text(task: &Task, plan: &[OpId]) -> String {
    let steps: Vec<PlanStep> = plan.iter().map(|&o| PlanStep::from_op(task, o)).collect();
    format_plan(&steps)
}

/// Search statistics as plan-file comment lines.
pub fn stats_text(strategy: &str, r: &SearchResult) -> String {
    let s = &r.stats;
    format!(
        "; outcome: {}\n; strategy: {strategy}\n; plan length: {}\n; nodes: {}\n; backtracks: {}\n; subgoal steps: {}\n; apply steps: {}\n; rounds: {}\n",
        r.outcome,
        r.plan.len(),
        s.nodes,
        s.backtracks,
        s.subgoal_steps,
        s.apply_steps,
        s.rounds,
    )
}
