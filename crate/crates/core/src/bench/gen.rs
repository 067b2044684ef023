use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::{
    parse_domain, parse_problem, Atom, AtomTemplate, Domain, Literal, LiteralTemplate,
    OperatorSchema, Param, ProblemDef, Task, Term,
};

use super::BenchError;

fn nullary(p: &str) -> AtomTemplate {
    AtomTemplate {
        predicate: p.to_string(),
        args: Vec::new(),
    }
}

fn pos(atom: AtomTemplate) -> LiteralTemplate {
    LiteralTemplate {
        atom,
        positive: true,
    }
}

/// `A_i`: pre `{I_i}`, add `{G_i}`, del `{I_j | j < i}`.
pub fn gen_dms1(m: usize) -> Domain {
    let operators = (1..=m)
        .map(|i| OperatorSchema {
            name: format!("A{i}"),
            params: Vec::new(),
            pre: vec![pos(nullary(&format!("I{i}")))],
            add: vec![nullary(&format!("G{i}"))],
            del: (1..i).map(|j| nullary(&format!("I{j}"))).collect(),
        })
        .collect();
    Domain {
        name: format!("dms1-{m}"),
        types: Vec::new(),
        operators,
    }
}

/// `A_i(g)`: pre `{I_i}`, add `{(achieved g)}`, del `{I_i}` for any goal
/// object `g`.
pub fn gen_use_once(n: usize) -> Domain {
    let operators = (1..=n)
        .map(|i| OperatorSchema {
            name: format!("A{i}"),
            params: vec![Param {
                var: "g".into(),
                ty: "goal".into(),
            }],
            pre: vec![pos(nullary(&format!("I{i}")))],
            add: vec![AtomTemplate {
                predicate: "achieved".into(),
                args: vec![Term::Var("g".into())],
            }],
            del: vec![nullary(&format!("I{i}"))],
        })
        .collect();
    Domain {
        name: format!("use-once-{n}"),
        types: vec!["goal".into()],
        operators,
    }
}

/// The colour-ordering painting domain that `D^mS^1` abstracts: painting
/// with a colour spoils every lighter one. Colours are listed light to dark.
pub fn gen_painting_colors(colors: &[&str]) -> Domain {
    let operators = colors
        .iter()
        .enumerate()
        .map(|(i, c)| OperatorSchema {
            name: format!("paint-{c}"),
            params: vec![Param {
                var: "obj".into(),
                ty: "object".into(),
            }],
            pre: vec![pos(AtomTemplate {
                predicate: "usable".into(),
                args: vec![Term::Const(c.to_string())],
            })],
            add: vec![AtomTemplate {
                predicate: c.to_string(),
                args: vec![Term::Var("obj".into())],
            }],
            del: colors[..i]
                .iter()
                .map(|l| AtomTemplate {
                    predicate: "usable".into(),
                    args: vec![Term::Const(l.to_string())],
                })
                .collect(),
        })
        .collect();
    Domain {
        name: "painting-colors".into(),
        types: vec!["object".into(), "color".into()],
        operators,
    }
}

/// The single-use brush domain that `D^1`-use-once abstracts.
pub fn gen_brushes(n: usize) -> Domain {
    let operators = (1..=n)
        .map(|i| {
            let unused = AtomTemplate {
                predicate: "unused".into(),
                args: vec![Term::Const(format!("brush{i}"))],
            };
            OperatorSchema {
                name: format!("paint-with-brush{i}"),
                params: vec![
                    Param {
                        var: "p".into(),
                        ty: "part".into(),
                    },
                    Param {
                        var: "c".into(),
                        ty: "color".into(),
                    },
                ],
                pre: vec![pos(unused.clone())],
                add: vec![AtomTemplate {
                    predicate: "painted".into(),
                    args: vec![Term::Var("p".into()), Term::Var("c".into())],
                }],
                del: vec![unused],
            }
        })
        .collect();
    Domain {
        name: "brushes".into(),
        types: vec!["part".into(), "color".into(), "brush".into()],
        operators,
    }
}

pub const ROLLERS_DOMAIN: &str = "\
(domain rollers
  (:types wall roller color)
  (:operator designate-roller
    (:params (?w wall) (?r roller) (?c color))
    (:pre (clean ?r) (needs-painting ?w))
    (:add (ready ?w ?r ?c) (chosen ?r ?c))
    (:del))
  (:operator fill-roller
    (:params (?r roller) (?c color))
    (:pre (clean ?r) (chosen ?r ?c))
    (:add (filled-with-paint ?r ?c))
    (:del (clean ?r)))
  (:operator paint-wall
    (:params (?w wall) (?r roller) (?c color))
    (:pre (ready ?w ?r ?c) (filled-with-paint ?r ?c))
    (:add (painted ?w ?c))
    (:del (ready ?w ?r ?c) (needs-painting ?w))))
";

/// Roller painting problem: every wall needs painting, every roller is
/// clean, and each wall's goal is its colour. More colours than rollers
/// gives a legitimately unsolvable instance.
pub fn gen_rollers(walls: &[(&str, &str)], rollers: usize) -> (Domain, ProblemDef) {
    let domain = parse_domain(ROLLERS_DOMAIN).expect("built-in domain parses");
    let mut objects: Vec<(String, String)> = walls
        .iter()
        .map(|(w, _)| (w.to_string(), "wall".to_string()))
        .collect();
    objects.extend((1..=rollers).map(|r| (format!("roller{r}"), "roller".to_string())));
    let mut colors: Vec<&str> = Vec::new();
    for (_, c) in walls {
        if !colors.contains(c) {
            colors.push(c);
        }
    }
    objects.extend(colors.iter().map(|c| (c.to_string(), "color".to_string())));
    let mut init: Vec<Atom> = walls
        .iter()
        .map(|(w, _)| Atom::new("needs-painting", &[w]))
        .collect();
    init.extend((1..=rollers).map(|r| Atom::new("clean", &[&format!("roller{r}")])));
    let goal = walls
        .iter()
        .map(|(w, c)| Literal::pos(Atom::new("painted", &[w, c])))
        .collect();
    let problem = ProblemDef {
        name: format!("rollers-{}w-{}r", walls.len(), rollers),
        domain: domain.name.clone(),
        objects,
        init,
        goal,
    };
    (domain, problem)
}

/// The five-wall, two-roller problem: three red walls, two green.
pub fn five_walls() -> (Domain, ProblemDef) {
    gen_rollers(
        &[
            ("wallA", "red"),
            ("wallB", "red"),
            ("wallC", "red"),
            ("wallD", "green"),
            ("wallE", "green"),
        ],
        2,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GoalFamily {
    Dms1,
    UseOnce,
}

/// A problem over a goal family: `k` goals drawn uniformly without
/// replacement from `m`, listed in the order drawn; every `I_i` initially
/// true. For use-once, `m` is the number of goal objects and `ops` the
/// number of operators.
pub fn gen_random_goals(
    family: GoalFamily,
    m: usize,
    ops: usize,
    k: usize,
    seed: u64,
) -> Result<ProblemDef, BenchError> {
    if k == 0 || k > m {
        return Err(BenchError::GoalCount { k, m });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picked: Vec<usize> = sample(&mut rng, m, k).into_iter().map(|i| i + 1).collect();
    Ok(match family {
        GoalFamily::Dms1 => ProblemDef {
            name: format!("dms1-{m}-k{k}-s{seed}"),
            domain: format!("dms1-{m}"),
            objects: Vec::new(),
            init: (1..=m).map(|i| Atom::new(format!("I{i}"), &[])).collect(),
            goal: picked
                .iter()
                .map(|i| Literal::pos(Atom::new(format!("G{i}"), &[])))
                .collect(),
        },
        GoalFamily::UseOnce => ProblemDef {
            name: format!("use-once-{ops}-k{k}-s{seed}"),
            domain: format!("use-once-{ops}"),
            objects: (1..=m).map(|i| (format!("g{i}"), "goal".to_string())).collect(),
            init: (1..=ops).map(|i| Atom::new(format!("I{i}"), &[])).collect(),
            goal: picked
                .iter()
                .map(|i| Literal::pos(Atom::new("achieved", &[&format!("g{i}")])))
                .collect(),
        },
    })
}

pub const FIXTURE_DOMAIN: &str = "\
; Seven goals g1..g7. g6 has no achiever; g7 holds initially.
(domain fixture
  (:types)
  (:operator o1 (:params) (:pre (g6) (g7)) (:add (g1)) (:del))
  (:operator o2 (:params) (:pre (g4)) (:add (g2) (g1)) (:del))
  (:operator o3 (:params) (:pre (g4) (g5)) (:add (g3)) (:del (g4)))
  (:operator o4 (:params) (:pre (g7)) (:add (g4) (g5)) (:del)))
";

pub const FIXTURE_PROBLEM: &str = "\
(problem fixture (:domain fixture)
  (:objects)
  (:init (g7))
  (:goal (g1) (g2) (g3)))
";

/// The seven-goal worked example.
pub fn fixture_task() -> Task {
    let d = parse_domain(FIXTURE_DOMAIN).expect("fixture domain parses");
    let p = parse_problem(FIXTURE_PROBLEM, &d).expect("fixture problem parses");
    Task::new(d, p)
}

/// Shape limits for [`gen_tiny`].
#[derive(Debug, Clone, Copy)]
pub struct TinyShape {
    pub max_objects: usize,
    pub max_schemas: usize,
    pub max_goals: usize,
    pub predicates: usize,
}

impl Default for TinyShape {
    fn default() -> Self {
        TinyShape {
            max_objects: 4,
            max_schemas: 4,
            max_goals: 3,
            predicates: 3,
        }
    }
}

/// A small random STRIPS problem: one object type, predicates and schemas
/// of arity 0 or 1, negative preconditions and goals allowed.
pub fn gen_tiny(seed: u64, shape: TinyShape) -> (Domain, ProblemDef) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_obj = rng.gen_range(1..=shape.max_objects);
    let objects: Vec<String> = (0..n_obj).map(|i| format!("c{i}")).collect();
    let arity: Vec<usize> = (0..shape.predicates).map(|_| rng.gen_range(0..=1)).collect();

    let template = |rng: &mut ChaCha8Rng, param: bool| -> AtomTemplate {
        let p = rng.gen_range(0..arity.len());
        let args = if arity[p] == 0 {
            Vec::new()
        } else if param && rng.gen_bool(0.75) {
            vec![Term::Var("x".into())]
        } else {
            vec![Term::Const(objects[rng.gen_range(0..objects.len())].clone())]
        };
        AtomTemplate {
            predicate: format!("p{p}"),
            args,
        }
    };

    let n_schema = rng.gen_range(1..=shape.max_schemas);
    let mut operators = Vec::new();
    for s in 0..n_schema {
        let param = rng.gen_bool(0.5);
        let n_pre = rng.gen_range(0..=2);
        let mut pre: Vec<LiteralTemplate> = Vec::new();
        for _ in 0..n_pre {
            let atom = template(&mut rng, param);
            if !pre.iter().any(|l| l.atom == atom) {
                pre.push(LiteralTemplate {
                    atom,
                    positive: rng.gen_bool(0.75),
                });
            }
        }
        let mut add: Vec<AtomTemplate> = Vec::new();
        for _ in 0..rng.gen_range(1..=2) {
            let a = template(&mut rng, param);
            if !add.contains(&a) {
                add.push(a);
            }
        }
        let mut del: Vec<AtomTemplate> = Vec::new();
        for _ in 0..rng.gen_range(0..=2) {
            let a = template(&mut rng, param);
            if !del.contains(&a) && !add.contains(&a) {
                del.push(a);
            }
        }
        operators.push(OperatorSchema {
            name: format!("op{s}"),
            params: if param {
                vec![Param {
                    var: "x".into(),
                    ty: "obj".into(),
                }]
            } else {
                Vec::new()
            },
            pre,
            add,
            del,
        });
    }
    let domain = Domain {
        name: "tiny".into(),
        types: vec!["obj".into()],
        operators,
    };

    let ground = |rng: &mut ChaCha8Rng| -> Atom {
        let p = rng.gen_range(0..arity.len());
        let args: Vec<&str> = if arity[p] == 0 {
            Vec::new()
        } else {
            vec![objects[rng.gen_range(0..objects.len())].as_str()]
        };
        Atom::new(format!("p{p}"), &args)
    };
    let mut init: Vec<Atom> = Vec::new();
    for _ in 0..rng.gen_range(0..=3) {
        let a = ground(&mut rng);
        if !init.contains(&a) {
            init.push(a);
        }
    }
    let mut goal: Vec<Literal> = Vec::new();
    for _ in 0..rng.gen_range(1..=shape.max_goals) {
        let atom = ground(&mut rng);
        if !goal.iter().any(|l| l.atom == atom) {
            goal.push(Literal {
                atom,
                positive: rng.gen_bool(0.8),
            });
        }
    }
    let problem = ProblemDef {
        name: format!("tiny-{seed}"),
        domain: "tiny".into(),
        objects: objects.iter().map(|o| (o.clone(), "obj".to_string())).collect(),
        init,
        goal,
    };
    (domain, problem)
}
