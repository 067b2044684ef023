use std::fmt::Write;

use super::{AtomTemplate, Domain, LiteralTemplate, ProblemDef};

fn template(t: &AtomTemplate) -> String {
    let mut s = format!("({}", t.predicate);
    for a in &t.args {
        let _ = write!(s, " {a}");
    }
    s.push(')');
    s
}

fn literal_template(l: &LiteralTemplate) -> String {
    if l.positive {
        template(&l.atom)
    } else {
        format!("(not {})", template(&l.atom))
    }
}

/// Renders a domain in the canonical file syntax accepted by [`super::parse_domain`].
pub fn write_domain(domain: &Domain) -> String {
    let mut out = format!("(domain {}\n  (:types", domain.name);
    for t in &domain.types {
        let _ = write!(out, " {t}");
    }
    out.push(')');
    for op in &domain.operators {
        let _ = write!(out, "\n  (:operator {}\n    (:params", op.name);
        for p in &op.params {
            let _ = write!(out, " (?{} {})", p.var, p.ty);
        }
        out.push_str(")\n    (:pre");
        for l in &op.pre {
            let _ = write!(out, " {}", literal_template(l));
        }
        out.push_str(")\n    (:add");
        for a in &op.add {
            let _ = write!(out, " {}", template(a));
        }
        out.push_str(")\n    (:del");
        for a in &op.del {
            let _ = write!(out, " {}", template(a));
        }
        out.push_str("))");
    }
    out.push_str(")\n");
    out
}

/// Renders a problem in the canonical file syntax accepted by [`super::parse_problem`].
pub fn write_problem(problem: &ProblemDef) -> String {
    let mut out = format!(
        "(problem {}\n  (:domain {})\n  (:objects",
        problem.name, problem.domain
    );
    for (c, t) in &problem.objects {
        let _ = write!(out, " ({c} {t})");
    }
    out.push_str(")\n  (:init");
    for a in &problem.init {
        let _ = write!(out, "\n    {a}");
    }
    out.push_str(")\n  (:goal");
    for l in &problem.goal {
        let _ = write!(out, "\n    {l}");
    }
    out.push_str("))\n");
    out
}
