use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use super::{
    AlwaysApp, AlwaysSub, ApplicableRanker, ChoiceScript, ConspiracyRanker, DepthFirstGoals,
    FileOrderRanker, GoalPolicy, Interactive, RelevantRanker, Schedule, StatementOrderGoals,
    Strategy, StrategyError, ThreatRanker, Toggle, TogglePolicy,
};

type ToggleFactory =
    Box<dyn Fn(Option<&str>) -> Result<Box<dyn TogglePolicy>, StrategyError> + Send + Sync>;
type GoalFactory = Box<dyn Fn() -> Box<dyn GoalPolicy> + Send + Sync>;
type RelevantFactory = Box<dyn Fn() -> Box<dyn RelevantRanker> + Send + Sync>;
type ApplicableFactory = Box<dyn Fn() -> Box<dyn ApplicableRanker> + Send + Sync>;

/// Named constructors for every policy kind. Toggle selectors have the
/// form `NAME` or `NAME:ARG`; `script:PATH` is handled specially and
/// produces a scripted strategy over SABA.
pub struct Registry {
    toggles: BTreeMap<String, ToggleFactory>,
    goals: BTreeMap<String, GoalFactory>,
    relevant: BTreeMap<String, RelevantFactory>,
    applicable: BTreeMap<String, ApplicableFactory>,
}

fn read(path: &str) -> Result<String, StrategyError> {
    std::fs::read_to_string(path).map_err(|source| StrategyError::Io {
        path: path.to_string(),
        source,
    })
}

fn stdin_toggle(view: &super::View) -> Result<Toggle, StrategyError> {
    let mut err = std::io::stderr();
    loop {
        let _ = write!(
            err,
            "[depth {}] {} pending, {} applicable; sub or app? ",
            view.depth,
            view.agenda.pending.len(),
            view.agenda.applicable.len()
        );
        let _ = err.flush();
        let mut line = String::new();
        let n = std::io::stdin()
            .lock()
            .read_line(&mut line)
            .map_err(|e| StrategyError::Aborted(e.to_string()))?;
        if n == 0 {
            return Err(StrategyError::Aborted("end of input".into()));
        }
        match line.trim().parse() {
            Ok(t) => return Ok(t),
            Err(_) => {
                let _ = writeln!(err, "please answer 'sub' or 'app'");
            }
        }
    }
}

impl Registry {
    pub fn empty() -> Self {
        Registry {
            toggles: BTreeMap::new(),
            goals: BTreeMap::new(),
            relevant: BTreeMap::new(),
            applicable: BTreeMap::new(),
        }
    }

    pub fn builtin() -> Self {
        let mut r = Registry::empty();
        r.register_toggle("saba", |_| Ok(Box::new(AlwaysSub)));
        r.register_toggle("savta", |_| Ok(Box::new(AlwaysApp)));
        r.register_toggle("schedule", |arg| {
            let path = arg.ok_or_else(|| StrategyError::Unknown {
                kind: "schedule path",
                name: String::new(),
            })?;
            Ok(Box::new(Schedule::parse(&read(path)?)?.labelled(format!("schedule:{path}"))))
        });
        r.register_toggle("interactive", |_| Ok(Box::new(Interactive::new(stdin_toggle))));
        r.register_goal_policy("statement", || Box::new(StatementOrderGoals));
        r.register_goal_policy("depth-first", || Box::new(DepthFirstGoals));
        r.register_relevant_ranker("conspiracy", || Box::new(ConspiracyRanker));
        r.register_relevant_ranker("file-order", || Box::new(FileOrderRanker));
        r.register_applicable_ranker("threat", || Box::new(ThreatRanker));
        r.register_applicable_ranker("file-order", || Box::new(FileOrderRanker));
        r
    }

    pub fn register_toggle(
        &mut self,
        name: &str,
        f: impl Fn(Option<&str>) -> Result<Box<dyn TogglePolicy>, StrategyError> + Send + Sync + 'static,
    ) {
        self.toggles.insert(name.to_string(), Box::new(f));
    }

    pub fn register_goal_policy(
        &mut self,
        name: &str,
        f: impl Fn() -> Box<dyn GoalPolicy> + Send + Sync + 'static,
    ) {
        self.goals.insert(name.to_string(), Box::new(f));
    }

    pub fn register_relevant_ranker(
        &mut self,
        name: &str,
        f: impl Fn() -> Box<dyn RelevantRanker> + Send + Sync + 'static,
    ) {
        self.relevant.insert(name.to_string(), Box::new(f));
    }

    pub fn register_applicable_ranker(
        &mut self,
        name: &str,
        f: impl Fn() -> Box<dyn ApplicableRanker> + Send + Sync + 'static,
    ) {
        self.applicable.insert(name.to_string(), Box::new(f));
    }

    pub fn toggle_names(&self) -> Vec<&str> {
        self.toggles.keys().map(String::as_str).collect()
    }

    pub fn goal_policy_names(&self) -> Vec<&str> {
        self.goals.keys().map(String::as_str).collect()
    }

    pub fn toggle(&self, selector: &str) -> Result<Box<dyn TogglePolicy>, StrategyError> {
        let (name, arg) = match selector.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (selector, None),
        };
        let f = self.toggles.get(name).ok_or_else(|| StrategyError::Unknown {
            kind: "strategy",
            name: selector.to_string(),
        })?;
        f(arg)
    }

    pub fn goal_policy(&self, name: &str) -> Result<Box<dyn GoalPolicy>, StrategyError> {
        self.goals.get(name).map(|f| f()).ok_or_else(|| StrategyError::Unknown {
            kind: "goal policy",
            name: name.to_string(),
        })
    }

    pub fn relevant_ranker(&self, name: &str) -> Result<Box<dyn RelevantRanker>, StrategyError> {
        self.relevant.get(name).map(|f| f()).ok_or_else(|| StrategyError::Unknown {
            kind: "relevant ranker",
            name: name.to_string(),
        })
    }

    pub fn applicable_ranker(
        &self,
        name: &str,
    ) -> Result<Box<dyn ApplicableRanker>, StrategyError> {
        self.applicable.get(name).map(|f| f()).ok_or_else(|| StrategyError::Unknown {
            kind: "applicable ranker",
            name: name.to_string(),
        })
    }

    /// Builds a strategy from a toggle selector plus named policies.
    pub fn strategy(
        &self,
        selector: &str,
        goal: &str,
        relevant: &str,
        applicable: &str,
    ) -> Result<Strategy, StrategyError> {
        let (toggle, script) = match selector.strip_prefix("script:") {
            Some(path) => (self.toggle("saba")?, Some(ChoiceScript::parse(&read(path)?)?)),
            None => (self.toggle(selector)?, None),
        };
        Ok(Strategy {
            toggle,
            goal: self.goal_policy(goal)?,
            relevant: self.relevant_ranker(relevant)?,
            applicable: self.applicable_ranker(applicable)?,
            script,
        })
    }

    /// Toggle selector with the default goal policy and rankers.
    pub fn default_strategy(&self, selector: &str) -> Result<Strategy, StrategyError> {
        self.strategy(selector, "statement", "conspiracy", "threat")
    }
}

impl Default for Registry {
    fn default() -> Self {
        Registry::builtin()
    }
}
