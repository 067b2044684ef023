//! Choice policies for the four decision sites of the planner loop.
//!
//! Each site is a trait; concrete policies are registered by name in a
//! [`Registry`] and assembled into a [`Strategy`] at runtime from selector
//! strings.

mod goal;
mod independence;
mod rank;
mod registry;
mod script;
mod toggle;

use std::fmt;

use crate::domain::{Lit, OpId, Task};
use crate::engine::{Agenda, PlannerState};

pub use goal::{DepthFirstGoals, StatementOrderGoals};
pub use independence::{independence_partition, interacts};
pub use rank::{conspiracy_score, threat_score, ConspiracyRanker, FileOrderRanker, ThreatRanker};
pub use registry::Registry;
pub use script::{Answer, ChoiceScript};
pub use toggle::{AlwaysApp, AlwaysSub, Interactive, Schedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Toggle {
    Sub,
    App,
}

impl Toggle {
    pub fn as_str(self) -> &'static str {
        match self {
            Toggle::Sub => "sub",
            Toggle::App => "app",
        }
    }
}

impl fmt::Display for Toggle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Toggle {
    type Err = StrategyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "sub" => Ok(Toggle::Sub),
            "app" => Ok(Toggle::App),
            other => Err(StrategyError::BadToken(other.to_string())),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum StrategyError {
    #[error("unknown {kind} '{name}'")]
    Unknown { kind: &'static str, name: String },
    #[error("'{0}' is neither 'sub' nor 'app'")]
    BadToken(String),
    #[error("schedule is empty")]
    EmptySchedule,
    #[error("script line {line}: {msg}")]
    Script { line: usize, msg: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("decision aborted: {0}")]
    Aborted(String),
}

/// Read-only view handed to every policy.
#[derive(Clone, Copy)]
pub struct View<'a> {
    pub task: &'a Task,
    pub state: &'a PlannerState,
    pub agenda: &'a Agenda,
    /// Number of decisions on the current search path.
    pub depth: usize,
}

/// Subgoal-or-apply choice. Consulted once per iteration in which both subgoaling and
/// applying are possible.
pub trait TogglePolicy: Send {
    fn name(&self) -> String;
    fn decide(&mut self, view: &View) -> Result<Toggle, StrategyError>;
}

/// Goal choice for subgoaling. Not a backtrack point.
pub trait GoalPolicy: Send + Sync {
    fn name(&self) -> String;
    /// `candidates` is non-empty and in fringe order.
    fn select(&self, view: &View, candidates: &[Lit]) -> Lit;
}

/// Ordering of relevant operators for `goal`.
pub trait RelevantRanker: Send + Sync {
    fn name(&self) -> String;
    fn rank(&self, view: &View, goal: Lit, candidates: &mut Vec<OpId>);
}

/// Ordering of applicable operators.
pub trait ApplicableRanker: Send + Sync {
    fn name(&self) -> String;
    fn rank(&self, view: &View, candidates: &mut Vec<OpId>);
}

/// The bundle of choice policies driving one search.
pub struct Strategy {
    pub toggle: Box<dyn TogglePolicy>,
    pub goal: Box<dyn GoalPolicy>,
    pub relevant: Box<dyn RelevantRanker>,
    pub applicable: Box<dyn ApplicableRanker>,
    /// Positional decisions that take precedence over the policies along
    /// the path they describe.
    pub script: Option<ChoiceScript>,
}

impl Strategy {
    /// Default goal policy and rankers with the given toggle policy.
    pub fn with_toggle(toggle: Box<dyn TogglePolicy>) -> Self {
        Strategy {
            toggle,
            goal: Box::new(StatementOrderGoals),
            relevant: Box::new(ConspiracyRanker),
            applicable: Box::new(ThreatRanker),
            script: None,
        }
    }

    pub fn saba() -> Self {
        Strategy::with_toggle(Box::new(AlwaysSub))
    }

    pub fn savta() -> Self {
        Strategy::with_toggle(Box::new(AlwaysApp))
    }

    pub fn describe(&self) -> String {
        format!(
            "toggle={} goals={} relevant={} applicable={}{}",
            self.toggle.name(),
            self.goal.name(),
            self.relevant.name(),
            self.applicable.name(),
            if self.script.is_some() { " +script" } else { "" }
        )
    }
}

impl fmt::Debug for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}
