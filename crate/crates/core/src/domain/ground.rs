use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{Atom, AtomTemplate, Domain, GroundOperator, Literal, OperatorSchema, Term};

/// Constants for a schema's parameters, in parameter order.
pub type Binding = Vec<String>;

/// Objects grouped by type, each group sorted lexicographically.
pub(crate) fn objects_by_type(objects: &[(String, String)]) -> BTreeMap<&str, Vec<&str>> {
    let mut by_type: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (c, t) in objects {
        by_type.entry(t.as_str()).or_default().push(c.as_str());
    }
    for v in by_type.values_mut() {
        v.sort_unstable();
        v.dedup();
    }
    by_type
}

fn subst(t: &AtomTemplate, schema: &OperatorSchema, binding: &[String]) -> Atom {
    Atom {
        predicate: t.predicate.clone(),
        args: t
            .args
            .iter()
            .map(|a| match a {
                Term::Const(c) => c.clone(),
                Term::Var(v) => {
                    let idx = schema
                        .params
                        .iter()
                        .position(|p| &p.var == v)
                        .expect("parser guarantees every variable is a parameter");
                    binding[idx].clone()
                }
            })
            .collect(),
    }
}

pub(crate) fn instantiate(schema: &OperatorSchema, binding: &[String]) -> GroundOperator {
    GroundOperator {
        schema: schema.name.clone(),
        binding: binding.to_vec(),
        pre: schema
            .pre
            .iter()
            .map(|l| Literal {
                atom: subst(&l.atom, schema, binding),
                positive: l.positive,
            })
            .collect(),
        add: schema.add.iter().map(|t| subst(t, schema, binding)).collect(),
        del: schema.del.iter().map(|t| subst(t, schema, binding)).collect(),
    }
}

/// Extends partial bindings over every type-compatible object for each
/// unbound parameter, yielding complete bindings in lexicographic order.
fn complete(
    schema: &OperatorSchema,
    partial: Vec<Option<String>>,
    by_type: &BTreeMap<&str, Vec<&str>>,
    out: &mut BTreeSet<Binding>,
) {
    fn go(
        schema: &OperatorSchema,
        idx: usize,
        cur: &mut Vec<String>,
        partial: &[Option<String>],
        by_type: &BTreeMap<&str, Vec<&str>>,
        out: &mut BTreeSet<Binding>,
    ) {
        if idx == schema.params.len() {
            out.insert(cur.clone());
            return;
        }
        if let Some(fixed) = &partial[idx] {
            cur.push(fixed.clone());
            go(schema, idx + 1, cur, partial, by_type, out);
            cur.pop();
            return;
        }
        let Some(candidates) = by_type.get(schema.params[idx].ty.as_str()) else {
            return;
        };
        for c in candidates {
            cur.push(c.to_string());
            go(schema, idx + 1, cur, partial, by_type, out);
            cur.pop();
        }
    }
    let mut cur = Vec::with_capacity(schema.params.len());
    go(schema, 0, &mut cur, &partial, by_type, out);
}

/// Every type-compatible grounding of every schema, in schema file order and
/// then lexicographic binding order.
pub fn ground_all(domain: &Domain, objects: &[(String, String)]) -> Vec<GroundOperator> {
    let by_type = objects_by_type(objects);
    let mut out = Vec::new();
    for schema in &domain.operators {
        let mut bindings = BTreeSet::new();
        complete(schema, vec![None; schema.params.len()], &by_type, &mut bindings);
        out.extend(bindings.iter().map(|b| instantiate(schema, b)));
    }
    out
}

/// Ground operators that could achieve `goal`: those with the goal atom in
/// their add-list (positive goal) or delete-list (negative goal).
///
/// Bindings come from unifying the goal against each matching effect
/// template; parameters the template leaves free range over all objects of
/// the parameter's type. Output is in schema file order, then lexicographic
/// binding order.
pub fn relevant_operators(
    goal: &Literal,
    domain: &Domain,
    objects: &[(String, String)],
) -> Vec<GroundOperator> {
    let by_type = objects_by_type(objects);
    let type_of: HashMap<&str, &str> = objects
        .iter()
        .map(|(c, t)| (c.as_str(), t.as_str()))
        .collect();

    let mut out = Vec::new();
    for schema in &domain.operators {
        let effects = if goal.positive {
            &schema.add
        } else {
            &schema.del
        };
        let mut bindings = BTreeSet::new();
        for t in effects {
            if t.predicate != goal.atom.predicate || t.args.len() != goal.atom.args.len() {
                continue;
            }
            if let Some(partial) = unify(schema, t, &goal.atom, &type_of) {
                complete(schema, partial, &by_type, &mut bindings);
            }
        }
        out.extend(bindings.iter().map(|b| instantiate(schema, b)));
    }
    out
}

fn unify(
    schema: &OperatorSchema,
    template: &AtomTemplate,
    atom: &Atom,
    type_of: &HashMap<&str, &str>,
) -> Option<Vec<Option<String>>> {
    let mut partial: Vec<Option<String>> = vec![None; schema.params.len()];
    for (term, value) in template.args.iter().zip(&atom.args) {
        match term {
            Term::Const(c) => {
                if c != value {
                    return None;
                }
            }
            Term::Var(v) => {
                let idx = schema.params.iter().position(|p| &p.var == v)?;
                if type_of.get(value.as_str()) != Some(&schema.params[idx].ty.as_str()) {
                    return None;
                }
                match &partial[idx] {
                    Some(bound) if bound != value => return None,
                    _ => partial[idx] = Some(value.clone()),
                }
            }
        }
    }
    Some(partial)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::parse_domain;

    fn brushes(n: usize) -> Domain {
        let mut text = String::from("(domain brushes (:types part color brush)");
        for i in 1..=n {
            text.push_str(&format!(
                "(:operator paint-with-brush{i} (:params (?p part) (?c color))
                   (:pre (unused brush{i})) (:add (painted ?p ?c)) (:del (unused brush{i})))"
            ));
        }
        text.push(')');
        parse_domain(&text).unwrap()
    }

    fn objs(list: &[(&str, &str)]) -> Vec<(String, String)> {
        list.iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect()
    }

    #[test]
    fn eight_brushes_give_eight_achievers() {
        let d = brushes(8);
        let o = objs(&[("wallA", "part"), ("seat", "part"), ("red", "color"), ("green", "color")]);
        let goal = Literal::pos(Atom::new("painted", &["wallA", "red"]));
        let rel = relevant_operators(&goal, &d, &o);
        assert_eq!(rel.len(), 8);
        assert!(rel.iter().all(|g| g.binding == ["wallA", "red"]));
        assert_eq!(rel[0].schema, "paint-with-brush1");
        assert_eq!(rel[7].schema, "paint-with-brush8");
    }

    #[test]
    fn unmatched_goal_has_no_achievers() {
        let d = brushes(2);
        let o = objs(&[("seat", "part"), ("red", "color")]);
        let goal = Literal::pos(Atom::new("polished", &["seat"]));
        assert!(relevant_operators(&goal, &d, &o).is_empty());
    }

    #[test]
    fn negative_goal_uses_delete_list() {
        let d = brushes(3);
        let o = objs(&[("seat", "part"), ("red", "color"), ("blue", "color")]);
        let goal = Literal::neg(Atom::new("unused", &["brush2"]));
        let rel = relevant_operators(&goal, &d, &o);
        // free parameters ?p ?c are enumerated: 1 part x 2 colours
        assert_eq!(rel.len(), 2);
        assert!(rel.iter().all(|g| g.schema == "paint-with-brush2"));
        assert_eq!(rel[0].binding, ["seat", "blue"]);
    }

    #[test]
    fn type_mismatch_blocks_unification() {
        let d = brushes(1);
        let o = objs(&[("seat", "part"), ("red", "color")]);
        let goal = Literal::pos(Atom::new("painted", &["red", "seat"]));
        assert!(relevant_operators(&goal, &d, &o).is_empty());
    }

    #[test]
    fn ground_all_is_schema_then_lexicographic() {
        let d = brushes(2);
        let o = objs(&[("b", "part"), ("a", "part"), ("red", "color")]);
        let all = ground_all(&d, &o);
        let names: Vec<_> = all.iter().map(|g| g.to_string()).collect();
        assert_eq!(
            names,
            [
                "paint-with-brush1(a,red)",
                "paint-with-brush1(b,red)",
                "paint-with-brush2(a,red)",
                "paint-with-brush2(b,red)"
            ]
        );
    }
}
