use std::fmt;

use super::{OpId, ParseError, Task};

/// One line of a plan file: `name(c1,c2,...)`, or a bare `name` for a
/// parameterless operator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlanStep {
    pub schema: String,
    pub binding: Vec<String>,
}

impl PlanStep {
    pub fn from_op(task: &Task, id: OpId) -> Self {
        let op = task.op(id);
        PlanStep {
            schema: task.domain().operators[op.schema].name.clone(),
            binding: op.binding.clone(),
        }
    }

    pub fn resolve(&self, task: &Task) -> Option<OpId> {
        task.op_by_name(&self.schema, &self.binding)
    }
}

impl fmt::Display for PlanStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.schema, self.binding.join(","))
    }
}

fn parse_step(line: &str, lineno: usize) -> Result<PlanStep, ParseError> {
    let err = |msg: &str| ParseError::Plan {
        line: lineno,
        msg: msg.to_string(),
    };
    let (name, binding) = match line.find('(') {
        None => (line, Vec::new()),
        Some(open) => {
            let rest = &line[open + 1..];
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| err("missing closing parenthesis"))?;
            let args: Vec<String> = if inner.trim().is_empty() {
                Vec::new()
            } else {
                inner.split(',').map(|a| a.trim().to_string()).collect()
            };
            if args.iter().any(|a| a.is_empty() || a.contains(['(', ')'])) {
                return Err(err("malformed argument list"));
            }
            (&line[..open], args)
        }
    };
    let name = name.trim();
    if name.is_empty() || name.contains(char::is_whitespace) {
        return Err(err("malformed operator name"));
    }
    Ok(PlanStep {
        schema: name.to_string(),
        binding,
    })
}

/// Parses a plan file. Blank lines and lines starting with `;` are skipped.
pub fn parse_plan(text: &str) -> Result<Vec<PlanStep>, ParseError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with(';')
        })
        .map(|(i, l)| parse_step(l.trim(), i + 1))
        .collect()
}

pub fn format_plan(steps: &[PlanStep]) -> String {
    steps.iter().map(|s| format!("{s}\n")).collect()
}
