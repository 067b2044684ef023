//! Typed STRIPS domains and problems: representation, parsing, grounding.
//!
//! Two layers live here. The *definition* layer ([`Domain`], [`ProblemDef`],
//! [`Atom`], [`Literal`], [`GroundOperator`]) is string-based and mirrors the
//! file formats. The *compiled* layer ([`Task`], [`State`], [`Lit`],
//! [`OpId`]) interns every atom and ground operator of one problem so the
//! search can work with small integer ids and bitset states.

mod ground;
mod parse;
mod plan;
pub mod sexpr;
mod task;
mod write;

use std::fmt;

pub use ground::{ground_all, relevant_operators, Binding};
pub use parse::{parse_domain, parse_problem};
pub use plan::{format_plan, parse_plan, PlanStep};
pub use task::{apply_effects, satisfies, AtomId, GroundOp, Lit, OpId, State, Task};
pub use write::{write_domain, write_problem};

use sexpr::Pos;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: Pos, msg: String },
    #[error("operator '{operator}' uses undeclared variable '{var}'")]
    UndeclaredVariable { operator: String, var: String },
    #[error("duplicate operator name '{0}'")]
    DuplicateOperator(String),
    #[error("undeclared type '{ty}' at {pos}")]
    UnknownType { ty: String, pos: Pos },
    #[error("constant '{constant}' is not declared in :objects")]
    UndeclaredConstant { constant: String },
    #[error("goal or initial atom '{0}' is not ground")]
    Unground(String),
    #[error("predicate '{predicate}' used with {found} arguments, expected {expected}")]
    ArityMismatch {
        predicate: String,
        expected: usize,
        found: usize,
    },
    #[error("problem is for domain '{found}', expected '{expected}'")]
    DomainMismatch { expected: String, found: String },
    #[error("plan line {line}: {msg}")]
    Plan { line: usize, msg: String },
}

impl ParseError {
    pub(crate) fn syntax(pos: Pos, msg: impl Into<String>) -> Self {
        ParseError::Syntax {
            pos,
            msg: msg.into(),
        }
    }
}

/// An argument inside an operator template: a `?variable` or a constant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "?{v}"),
            Term::Const(c) => f.write_str(c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AtomTemplate {
    pub predicate: String,
    pub args: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LiteralTemplate {
    pub atom: AtomTemplate,
    pub positive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Param {
    pub var: String,
    pub ty: String,
}

/// An operator with typed parameters. `add` and `del` hold positive
/// templates only; negation appears in preconditions and goals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorSchema {
    pub name: String,
    pub params: Vec<Param>,
    pub pre: Vec<LiteralTemplate>,
    pub add: Vec<AtomTemplate>,
    pub del: Vec<AtomTemplate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Domain {
    pub name: String,
    pub types: Vec<String>,
    /// In file order, which is also the deterministic tie-break order.
    pub operators: Vec<OperatorSchema>,
}

impl Domain {
    pub fn operator(&self, name: &str) -> Option<(usize, &OperatorSchema)> {
        self.operators.iter().enumerate().find(|(_, o)| o.name == name)
    }
}

/// A ground atom: predicate applied to object constants.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<String>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: &[&str]) -> Self {
        Atom {
            predicate: predicate.into(),
            args: args.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.predicate)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        f.write_str(")")
    }
}

/// A ground, possibly negated atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub atom: Atom,
    pub positive: bool,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal {
            atom,
            positive: true,
        }
    }

    pub fn neg(atom: Atom) -> Self {
        Literal {
            atom,
            positive: false,
        }
    }

    pub fn negated(&self) -> Self {
        Literal {
            atom: self.atom.clone(),
            positive: !self.positive,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.atom)
        } else {
            write!(f, "(not {})", self.atom)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ProblemDef {
    pub name: String,
    pub domain: String,
    /// `(constant, type)` in declaration order.
    pub objects: Vec<(String, String)>,
    pub init: Vec<Atom>,
    pub goal: Vec<Literal>,
}

/// A fully instantiated operator in definition-layer form. Identity is
/// `(schema, binding)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroundOperator {
    pub schema: String,
    /// Constants for the schema parameters, in parameter order.
    pub binding: Vec<String>,
    pub pre: Vec<Literal>,
    pub add: Vec<Atom>,
    pub del: Vec<Atom>,
}

impl fmt::Display for GroundOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.schema, self.binding.join(","))
    }
}
