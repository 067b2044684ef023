use std::collections::HashMap;
use std::fmt;

use super::ground::{ground_all, relevant_operators};
use super::{Atom, Domain, GroundOperator, Literal, ProblemDef};

/// Interned ground atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomId(pub u32);

/// Interned ground literal: an atom plus polarity, packed into one word.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn pos(atom: AtomId) -> Self {
        Lit(atom.0 << 1)
    }

    pub fn neg(atom: AtomId) -> Self {
        Lit((atom.0 << 1) | 1)
    }

    pub fn atom(self) -> AtomId {
        AtomId(self.0 >> 1)
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn negated(self) -> Self {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_positive() {
            write!(f, "+{}", self.atom().0)
        } else {
            write!(f, "-{}", self.atom().0)
        }
    }
}

/// Interned ground operator. Ids follow schema file order, then
/// lexicographic binding order, so sorting by id is the canonical tie-break.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpId(pub u32);

/// A set of ground atoms with constant-time membership (closed world).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct State {
    bits: Vec<u64>,
}

impl State {
    /// Empty state able to hold atoms `0..n_atoms`.
    pub fn empty(n_atoms: usize) -> Self {
        State {
            bits: vec![0; n_atoms.div_ceil(64)],
        }
    }

    pub fn contains(&self, a: AtomId) -> bool {
        let i = a.0 as usize;
        self.bits
            .get(i / 64)
            .is_some_and(|w| w & (1u64 << (i % 64)) != 0)
    }

    pub fn insert(&mut self, a: AtomId) {
        let i = a.0 as usize;
        if i / 64 >= self.bits.len() {
            self.bits.resize(i / 64 + 1, 0);
        }
        self.bits[i / 64] |= 1u64 << (i % 64);
    }

    pub fn remove(&mut self, a: AtomId) {
        let i = a.0 as usize;
        if let Some(w) = self.bits.get_mut(i / 64) {
            *w &= !(1u64 << (i % 64));
        }
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|w| *w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.bits.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64)
                .filter(move |b| w & (1u64 << b) != 0)
                .map(move |b| AtomId((wi * 64 + b) as u32))
        })
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|a| a.0)).finish()
    }
}

impl FromIterator<AtomId> for State {
    fn from_iter<I: IntoIterator<Item = AtomId>>(iter: I) -> Self {
        let mut s = State::default();
        for a in iter {
            s.insert(a);
        }
        s
    }
}

/// Closed-world satisfaction: a positive literal holds iff its atom is in
/// the state, a negative one iff it is absent.
pub fn satisfies(state: &State, lit: Lit) -> bool {
    state.contains(lit.atom()) == lit.is_positive()
}

/// `(state ∪ add) − del`. An atom both added and deleted ends up absent.
pub fn apply_effects(state: &State, op: &GroundOp) -> State {
    let mut next = state.clone();
    for &a in &op.add {
        next.insert(a);
    }
    for &a in &op.del {
        next.remove(a);
    }
    next
}

/// Compiled ground operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundOp {
    pub schema: usize,
    pub binding: Vec<String>,
    pub pre: Vec<Lit>,
    pub add: Vec<AtomId>,
    pub del: Vec<AtomId>,
}

/// A problem compiled against its domain: every atom and every
/// type-compatible ground operator interned, plus the achiever index used
/// for subgoaling.
#[derive(Debug, Clone)]
pub struct Task {
    domain: Domain,
    problem: ProblemDef,
    atoms: Vec<Atom>,
    atom_ids: HashMap<Atom, AtomId>,
    ops: Vec<GroundOp>,
    op_ids: HashMap<(usize, Vec<String>), OpId>,
    init: State,
    goal: Vec<Lit>,
    relevant: HashMap<Lit, Vec<OpId>>,
}

impl Task {
    pub fn new(domain: Domain, problem: ProblemDef) -> Self {
        let mut task = Task {
            domain,
            problem,
            atoms: Vec::new(),
            atom_ids: HashMap::new(),
            ops: Vec::new(),
            op_ids: HashMap::new(),
            init: State::default(),
            goal: Vec::new(),
            relevant: HashMap::new(),
        };

        let init_atoms: Vec<AtomId> = task
            .problem
            .init
            .clone()
            .iter()
            .map(|a| task.intern(a))
            .collect();
        let goal: Vec<Lit> = task
            .problem
            .goal
            .clone()
            .iter()
            .map(|l| task.intern_literal(l))
            .collect();
        task.goal = goal;

        for g in ground_all(&task.domain, &task.problem.objects) {
            let schema = task.domain.operator(&g.schema).map(|(i, _)| i).unwrap();
            let op = GroundOp {
                schema,
                binding: g.binding.clone(),
                pre: g.pre.iter().map(|l| task.intern_literal(l)).collect(),
                add: g.add.iter().map(|a| task.intern(a)).collect(),
                del: g.del.iter().map(|a| task.intern(a)).collect(),
            };
            let id = OpId(task.ops.len() as u32);
            task.op_ids.insert((schema, g.binding), id);
            task.ops.push(op);
        }

        let n = task.atoms.len();
        task.init = State::empty(n);
        for a in init_atoms {
            task.init.insert(a);
        }

        for i in 0..n {
            let atom = task.atoms[i].clone();
            for lit in [Literal::pos(atom.clone()), Literal::neg(atom)] {
                let id = task.lit(&lit).unwrap();
                let ops: Vec<OpId> =
                    relevant_operators(&lit, &task.domain, &task.problem.objects)
                        .iter()
                        .map(|g| task.op_id(g).expect("achiever is a grounding"))
                        .collect();
                if !ops.is_empty() {
                    task.relevant.insert(id, ops);
                }
            }
        }
        task
    }

    fn intern(&mut self, atom: &Atom) -> AtomId {
        if let Some(&id) = self.atom_ids.get(atom) {
            return id;
        }
        let id = AtomId(self.atoms.len() as u32);
        self.atoms.push(atom.clone());
        self.atom_ids.insert(atom.clone(), id);
        id
    }

    fn intern_literal(&mut self, l: &Literal) -> Lit {
        let a = self.intern(&l.atom);
        if l.positive {
            Lit::pos(a)
        } else {
            Lit::neg(a)
        }
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn problem(&self) -> &ProblemDef {
        &self.problem
    }

    pub fn n_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn initial_state(&self) -> &State {
        &self.init
    }

    pub fn empty_state(&self) -> State {
        State::empty(self.atoms.len())
    }

    /// Goal literals in goal-statement order.
    pub fn goal(&self) -> &[Lit] {
        &self.goal
    }

    pub fn goal_index(&self, lit: Lit) -> Option<usize> {
        self.goal.iter().position(|&g| g == lit)
    }

    pub fn goal_satisfied(&self, state: &State) -> bool {
        self.goal.iter().all(|&g| satisfies(state, g))
    }

    pub fn op(&self, id: OpId) -> &GroundOp {
        &self.ops[id.0 as usize]
    }

    pub fn n_ops(&self) -> usize {
        self.ops.len()
    }

    pub fn op_ids(&self) -> impl Iterator<Item = OpId> {
        (0..self.ops.len() as u32).map(OpId)
    }

    /// Achievers of `lit` (adders for a positive literal, deleters for a
    /// negative one) in canonical order.
    pub fn relevant(&self, lit: Lit) -> &[OpId] {
        self.relevant.get(&lit).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn atom(&self, id: AtomId) -> &Atom {
        &self.atoms[id.0 as usize]
    }

    pub fn atom_id(&self, atom: &Atom) -> Option<AtomId> {
        self.atom_ids.get(atom).copied()
    }

    pub fn lit(&self, l: &Literal) -> Option<Lit> {
        let a = self.atom_id(&l.atom)?;
        Some(if l.positive { Lit::pos(a) } else { Lit::neg(a) })
    }

    pub fn literal(&self, l: Lit) -> Literal {
        Literal {
            atom: self.atom(l.atom()).clone(),
            positive: l.is_positive(),
        }
    }

    pub fn op_id(&self, g: &GroundOperator) -> Option<OpId> {
        let (schema, _) = self.domain.operator(&g.schema)?;
        self.op_ids.get(&(schema, g.binding.clone())).copied()
    }

    pub fn op_by_name(&self, schema: &str, binding: &[String]) -> Option<OpId> {
        let (schema, _) = self.domain.operator(schema)?;
        self.op_ids.get(&(schema, binding.to_vec())).copied()
    }

    /// Definition-layer view of a compiled operator.
    pub fn ground_operator(&self, id: OpId) -> GroundOperator {
        let op = self.op(id);
        GroundOperator {
            schema: self.domain.operators[op.schema].name.clone(),
            binding: op.binding.clone(),
            pre: op.pre.iter().map(|&l| self.literal(l)).collect(),
            add: op.add.iter().map(|&a| self.atom(a).clone()).collect(),
            del: op.del.iter().map(|&a| self.atom(a).clone()).collect(),
        }
    }

    /// `name(c1,c2,...)`, the plan-file rendering.
    pub fn op_name(&self, id: OpId) -> String {
        let op = self.op(id);
        format!(
            "{}({})",
            self.domain.operators[op.schema].name,
            op.binding.join(",")
        )
    }

    pub fn lit_name(&self, l: Lit) -> String {
        self.literal(l).to_string()
    }

    pub fn state_atoms(&self, s: &State) -> Vec<Atom> {
        let mut v: Vec<Atom> = s.iter().map(|a| self.atom(a).clone()).collect();
        v.sort();
        v
    }
}
