use std::collections::{BTreeMap, HashSet};

use super::sexpr::{self, Pos, Sexpr};
use super::{
    Atom, AtomTemplate, Domain, Literal, LiteralTemplate, OperatorSchema, Param, ParseError,
    ProblemDef, Term,
};

/// Parses a domain file:
///
/// ```text
/// (domain NAME (:types T ...)
///   (:operator NAME (:params (?v T) ...) (:pre LIT ...) (:add ATOM ...) (:del ATOM ...)) ...)
/// ```
pub fn parse_domain(text: &str) -> Result<Domain, ParseError> {
    let root = sexpr::parse_one(text)?;
    let items = expect_list(&root, "domain definition")?;
    expect_keyword(items, 0, "domain", root.pos())?;
    let name = expect_symbol(items.get(1), "domain name", root.pos())?;

    let mut domain = Domain {
        name,
        ..Domain::default()
    };
    let mut seen_ops = HashSet::new();
    for section in &items[2..] {
        match section.head() {
            Some(":types") => {
                for t in &section.as_list().unwrap()[1..] {
                    let ty = expect_symbol(Some(t), "type name", t.pos())?;
                    if !domain.types.contains(&ty) {
                        domain.types.push(ty);
                    }
                }
            }
            Some(":operator") => {
                let op = parse_operator(section, &domain.types)?;
                if !seen_ops.insert(op.name.clone()) {
                    return Err(ParseError::DuplicateOperator(op.name));
                }
                domain.operators.push(op);
            }
            _ => {
                return Err(ParseError::syntax(
                    section.pos(),
                    "expected (:types ...) or (:operator ...)",
                ))
            }
        }
    }
    Ok(domain)
}

fn parse_operator(expr: &Sexpr, types: &[String]) -> Result<OperatorSchema, ParseError> {
    let items = expr.as_list().unwrap();
    let name = expect_symbol(items.get(1), "operator name", expr.pos())?;
    let mut op = OperatorSchema {
        name,
        params: Vec::new(),
        pre: Vec::new(),
        add: Vec::new(),
        del: Vec::new(),
    };
    for section in &items[2..] {
        let body = &expect_list(section, "operator section")?[1..];
        match section.head() {
            Some(":params") => {
                for p in body {
                    let pair = expect_list(p, "(?var type)")?;
                    if pair.len() != 2 {
                        return Err(ParseError::syntax(p.pos(), "expected (?var type)"));
                    }
                    let var = expect_symbol(pair.first(), "variable", p.pos())?;
                    let var = var.strip_prefix('?').unwrap_or(&var).to_string();
                    let ty = expect_symbol(pair.get(1), "type", p.pos())?;
                    if !types.contains(&ty) {
                        return Err(ParseError::UnknownType {
                            ty,
                            pos: pair[1].pos(),
                        });
                    }
                    op.params.push(Param { var, ty });
                }
            }
            Some(":pre") => {
                for l in body {
                    op.pre.push(parse_literal_template(l)?);
                }
            }
            Some(":add") => {
                for a in body {
                    op.add.push(parse_atom_template(a)?);
                }
            }
            Some(":del") => {
                for a in body {
                    op.del.push(parse_atom_template(a)?);
                }
            }
            _ => {
                return Err(ParseError::syntax(
                    section.pos(),
                    "expected :params, :pre, :add or :del",
                ))
            }
        }
    }

    let declared: HashSet<&str> = op.params.iter().map(|p| p.var.as_str()).collect();
    let templates = op
        .pre
        .iter()
        .map(|l| &l.atom)
        .chain(op.add.iter())
        .chain(op.del.iter());
    for t in templates {
        for arg in &t.args {
            if let Term::Var(v) = arg {
                if !declared.contains(v.as_str()) {
                    return Err(ParseError::UndeclaredVariable {
                        operator: op.name.clone(),
                        var: format!("?{v}"),
                    });
                }
            }
        }
    }
    Ok(op)
}

fn parse_atom_template(expr: &Sexpr) -> Result<AtomTemplate, ParseError> {
    let items = expect_list(expr, "atom")?;
    let predicate = expect_symbol(items.first(), "predicate", expr.pos())?;
    if predicate == "not" {
        return Err(ParseError::syntax(
            expr.pos(),
            "negation is only allowed in preconditions and goals",
        ));
    }
    let args = items[1..]
        .iter()
        .map(|a| {
            let s = expect_symbol(Some(a), "argument", a.pos())?;
            Ok(match s.strip_prefix('?') {
                Some(v) => Term::Var(v.to_string()),
                None => Term::Const(s),
            })
        })
        .collect::<Result<_, ParseError>>()?;
    Ok(AtomTemplate { predicate, args })
}

fn parse_literal_template(expr: &Sexpr) -> Result<LiteralTemplate, ParseError> {
    if expr.head() == Some("not") {
        let items = expr.as_list().unwrap();
        if items.len() != 2 {
            return Err(ParseError::syntax(expr.pos(), "expected (not (pred ...))"));
        }
        Ok(LiteralTemplate {
            atom: parse_atom_template(&items[1])?,
            positive: false,
        })
    } else {
        Ok(LiteralTemplate {
            atom: parse_atom_template(expr)?,
            positive: true,
        })
    }
}

/// Parses a problem file against an already-parsed domain:
///
/// ```text
/// (problem NAME (:domain NAME) (:objects (c T) ...) (:init ATOM ...) (:goal LIT ...))
/// ```
pub fn parse_problem(text: &str, domain: &Domain) -> Result<ProblemDef, ParseError> {
    let root = sexpr::parse_one(text)?;
    let items = expect_list(&root, "problem definition")?;
    expect_keyword(items, 0, "problem", root.pos())?;
    let mut problem = ProblemDef {
        name: expect_symbol(items.get(1), "problem name", root.pos())?,
        domain: domain.name.clone(),
        ..ProblemDef::default()
    };

    let mut init_exprs = Vec::new();
    let mut goal_exprs = Vec::new();
    for section in &items[2..] {
        let body = &expect_list(section, "problem section")?[1..];
        match section.head() {
            Some(":domain") => {
                let found = expect_symbol(body.first(), "domain name", section.pos())?;
                if found != domain.name {
                    return Err(ParseError::DomainMismatch {
                        expected: domain.name.clone(),
                        found,
                    });
                }
            }
            Some(":objects") => {
                for o in body {
                    let pair = expect_list(o, "(constant type)")?;
                    if pair.len() != 2 {
                        return Err(ParseError::syntax(o.pos(), "expected (constant type)"));
                    }
                    let c = expect_symbol(pair.first(), "constant", o.pos())?;
                    let ty = expect_symbol(pair.get(1), "type", o.pos())?;
                    if !domain.types.contains(&ty) {
                        return Err(ParseError::UnknownType {
                            ty,
                            pos: pair[1].pos(),
                        });
                    }
                    problem.objects.push((c, ty));
                }
            }
            Some(":init") => init_exprs.extend(body.iter()),
            Some(":goal") => goal_exprs.extend(body.iter()),
            _ => {
                return Err(ParseError::syntax(
                    section.pos(),
                    "expected :domain, :objects, :init or :goal",
                ))
            }
        }
    }

    let declared: HashSet<&str> = problem.objects.iter().map(|(c, _)| c.as_str()).collect();
    let mut arities = domain_arities(domain);
    for e in init_exprs {
        let t = parse_atom_template(e)?;
        problem.init.push(ground_atom(&t, &declared, &mut arities)?);
    }
    for e in goal_exprs {
        let t = parse_literal_template(e)?;
        let atom = ground_atom(&t.atom, &declared, &mut arities)?;
        problem.goal.push(Literal {
            atom,
            positive: t.positive,
        });
    }
    Ok(problem)
}

fn domain_arities(domain: &Domain) -> BTreeMap<String, usize> {
    let mut arities = BTreeMap::new();
    for op in &domain.operators {
        let templates = op
            .pre
            .iter()
            .map(|l| &l.atom)
            .chain(op.add.iter())
            .chain(op.del.iter());
        for t in templates {
            arities.entry(t.predicate.clone()).or_insert(t.args.len());
        }
    }
    arities
}

fn ground_atom(
    t: &AtomTemplate,
    declared: &HashSet<&str>,
    arities: &mut BTreeMap<String, usize>,
) -> Result<Atom, ParseError> {
    let mut args = Vec::with_capacity(t.args.len());
    for a in &t.args {
        match a {
            Term::Var(_) => {
                return Err(ParseError::Unground(format!(
                    "({} {})",
                    t.predicate,
                    t.args.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" ")
                )))
            }
            Term::Const(c) => {
                if !declared.contains(c.as_str()) {
                    return Err(ParseError::UndeclaredConstant {
                        constant: c.clone(),
                    });
                }
                args.push(c.clone());
            }
        }
    }
    let expected = *arities.entry(t.predicate.clone()).or_insert(args.len());
    if expected != args.len() {
        return Err(ParseError::ArityMismatch {
            predicate: t.predicate.clone(),
            expected,
            found: args.len(),
        });
    }
    Ok(Atom {
        predicate: t.predicate.clone(),
        args,
    })
}

fn expect_list<'a>(e: &'a Sexpr, what: &str) -> Result<&'a [Sexpr], ParseError> {
    e.as_list()
        .ok_or_else(|| ParseError::syntax(e.pos(), format!("expected {what} list")))
}

fn expect_symbol(e: Option<&Sexpr>, what: &str, fallback: Pos) -> Result<String, ParseError> {
    match e {
        Some(Sexpr::Symbol(s, _)) => Ok(s.clone()),
        Some(other) => Err(ParseError::syntax(other.pos(), format!("expected {what}"))),
        None => Err(ParseError::syntax(fallback, format!("missing {what}"))),
    }
}

fn expect_keyword(items: &[Sexpr], idx: usize, kw: &str, pos: Pos) -> Result<(), ParseError> {
    match items.get(idx).and_then(Sexpr::as_symbol) {
        Some(s) if s == kw => Ok(()),
        _ => Err(ParseError::syntax(pos, format!("expected '({kw} ...)'"))),
    }
}
