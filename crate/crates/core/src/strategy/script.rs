use std::fmt;

use crate::domain::{OpId, Task};

use super::{StrategyError, Toggle};

/// One recorded answer to a decision prompt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Answer {
    /// Answer to a subgoal-or-apply prompt.
    Phase(Toggle),
    /// 1-based position in the ranked candidate list.
    Index(usize),
    /// Operator rendered as `name(c1,...)`.
    Op(String),
    /// Stop following the script; the strategy's own policies take over.
    Auto,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Answer::Phase(t) => write!(f, "{t}"),
            Answer::Index(i) => write!(f, "{i}"),
            Answer::Op(s) => f.write_str(s),
            Answer::Auto => f.write_str("auto"),
        }
    }
}

impl std::str::FromStr for Answer {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        Ok(match s {
            "" => return Err("empty answer".into()),
            "sub" => Answer::Phase(Toggle::Sub),
            "app" => Answer::Phase(Toggle::App),
            "auto" => Answer::Auto,
            _ => match s.parse::<usize>() {
                Ok(0) => return Err("candidate indices start at 1".into()),
                Ok(i) => Answer::Index(i),
                Err(_) => Answer::Op(normalize_op(s)),
            },
        })
    }
}

fn normalize_op(s: &str) -> String {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.contains('(') {
        compact
    } else {
        format!("{compact}()")
    }
}

/// A positional decision script: one answer per prompt along the search
/// path, in the order the prompts arise. A prompt arises at a
/// subgoal-or-apply choice only when both are possible, and at an operator
/// choice only when there is more than one candidate.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChoiceScript {
    answers: Vec<Answer>,
}

impl ChoiceScript {
    pub fn new(answers: Vec<Answer>) -> Self {
        ChoiceScript { answers }
    }

    /// One answer per line; blank lines and `#` comments ignored.
    pub fn parse(text: &str) -> Result<Self, StrategyError> {
        let mut answers = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let l = line.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            answers.push(
                l.parse()
                    .map_err(|msg| StrategyError::Script { line: i + 1, msg })?,
            );
        }
        Ok(ChoiceScript { answers })
    }

    pub fn answers(&self) -> &[Answer] {
        &self.answers
    }

    pub fn get(&self, pos: usize) -> Option<&Answer> {
        self.answers.get(pos)
    }

    pub fn render(&self) -> String {
        self.answers.iter().map(|a| format!("{a}\n")).collect()
    }
}

impl Answer {
    /// Position of the answered operator in `candidates`.
    pub fn resolve(&self, task: &Task, candidates: &[OpId]) -> Result<usize, String> {
        match self {
            Answer::Index(i) if *i <= candidates.len() => Ok(i - 1),
            Answer::Index(i) => Err(format!(
                "index {i} out of range for {} candidates",
                candidates.len()
            )),
            Answer::Op(name) => candidates
                .iter()
                .position(|&o| &task.op_name(o) == name)
                .ok_or_else(|| format!("{name} is not among the candidates")),
            other => Err(format!("'{other}' does not choose an operator")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_answer_kinds() {
        let s = ChoiceScript::parse("sub\n# c\n2\n paint-wall( wallA , roller1 , red )\no1\nauto\n").unwrap();
        assert_eq!(
            s.answers(),
            [
                Answer::Phase(Toggle::Sub),
                Answer::Index(2),
                Answer::Op("paint-wall(wallA,roller1,red)".into()),
                Answer::Op("o1()".into()),
                Answer::Auto,
            ]
        );
        assert_eq!(ChoiceScript::parse(&s.render()).unwrap(), s);
    }

    #[test]
    fn zero_index_rejected() {
        assert!(ChoiceScript::parse("0").is_err());
    }
}
