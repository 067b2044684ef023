use super::{StrategyError, Toggle, TogglePolicy, View};

/// Subgoal Always Before Applying.
#[derive(Debug, Clone, Copy, Default)]
pub struct AlwaysSub;

impl TogglePolicy for AlwaysSub {
    fn name(&self) -> String {
        "saba".into()
    }

    fn decide(&mut self, _: &View) -> Result<Toggle, StrategyError> {
        Ok(Toggle::Sub)
    }
}

/// Subgoal After eVery Try to Apply.
#[derive(Debug, Clone, Copy, Default)]
pub struct AlwaysApp;

impl TogglePolicy for AlwaysApp {
    fn name(&self) -> String {
        "savta".into()
    }

    fn decide(&mut self, _: &View) -> Result<Toggle, StrategyError> {
        Ok(Toggle::App)
    }
}

/// A fixed list of toggle values indexed by search depth: the value at
/// position `d` is used for the iteration that follows the `d`-th decision
/// on the current path, and the last value persists beyond the end.
///
/// Indexing by depth rather than by consultation count keeps the policy a
/// pure function of the view, so backtracking into a branch sees the same
/// values as the first visit.
#[derive(Debug, Clone)]
pub struct Schedule {
    values: Vec<Toggle>,
    label: String,
}

impl Schedule {
    pub fn new(values: Vec<Toggle>) -> Result<Self, StrategyError> {
        if values.is_empty() {
            return Err(StrategyError::EmptySchedule);
        }
        Ok(Schedule {
            values,
            label: "schedule".into(),
        })
    }

    /// One `sub` or `app` per line; blank lines and `#` comments ignored.
    pub fn parse(text: &str) -> Result<Self, StrategyError> {
        let values = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::parse)
            .collect::<Result<Vec<Toggle>, _>>()?;
        Schedule::new(values)
    }

    pub fn labelled(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn value_at(&self, depth: usize) -> Toggle {
        self.values[depth.min(self.values.len() - 1)]
    }

    pub fn values(&self) -> &[Toggle] {
        &self.values
    }
}

impl TogglePolicy for Schedule {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn decide(&mut self, view: &View) -> Result<Toggle, StrategyError> {
        Ok(self.value_at(view.depth))
    }
}

/// Forwards every toggle decision to a callback, e.g. a terminal prompt.
pub struct Interactive {
    callback: Box<dyn FnMut(&View) -> Result<Toggle, StrategyError> + Send>,
}

impl Interactive {
    pub fn new(callback: impl FnMut(&View) -> Result<Toggle, StrategyError> + Send + 'static) -> Self {
        Interactive {
            callback: Box::new(callback),
        }
    }
}

impl TogglePolicy for Interactive {
    fn name(&self) -> String {
        "interactive".into()
    }

    fn decide(&mut self, view: &View) -> Result<Toggle, StrategyError> {
        (self.callback)(view)
    }
}
