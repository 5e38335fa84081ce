//! Satisfaction of formulas in finite models.
//!
//! [`evaluate`] compiles the formula into a [`Prepared`] plan and runs it.
//! The plan is a faithful rewriting: universal quantifiers become negated
//! existential blocks, negations are pushed inward, consecutive existential
//! quantifiers form one block, and each conjunct of a block is tested as soon
//! as the variables it mentions are bound. Candidates for a block variable
//! come from a conjunct that pins it down (an equation or a relation with
//! an index) when one exists, and from the whole carrier otherwise.
//! Quantifier-free connective operands are tried first. Blocks containing nested
//! quantifiers are memoized on the values of their free variables.
//!
//! [`evaluate_naive`] follows the inductive definition of satisfaction
//! literally and serves as the reference in tests.

use super::model::{Candidates, FiniteModel};
use super::signature::{Signature, Symbol};
use super::syntax::{Formula, Term, Var};
use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::atomic::{AtomicUsize, Ordering};

/// Values of variables, keyed by name and sort.
pub type Assignment = BTreeMap<Var, usize>;

fn check_assignment(m: &FiniteModel, phi: &Formula, s: &Assignment) -> Result<()> {
    for v in phi.free_variables() {
        let value = s
            .get(&v)
            .ok_or_else(|| Error::MissingAssignment(format!("{}:{}", v.name, v.sort)))?;
        let sort = m
            .signature()
            .sort_index(&v.sort)
            .ok_or_else(|| Error::Sort(format!("unknown sort {}", v.sort)))?;
        if *value >= m.carrier(sort) {
            return Err(Error::Model(format!(
                "value {value} of {} is outside its carrier",
                v.name
            )));
        }
    }
    Ok(())
}

/// Value of a term under an assignment.
pub fn evaluate_term(m: &FiniteModel, t: &Term, s: &Assignment) -> Result<usize> {
    match t {
        Term::Var(v) => s
            .get(v)
            .copied()
            .ok_or_else(|| Error::MissingAssignment(format!("{}:{}", v.name, v.sort))),
        Term::Const(c) => {
            let i = m
                .signature()
                .constant_index(c)
                .ok_or_else(|| Error::UnknownSymbol(c.clone()))?;
            Ok(m.constant(i))
        }
        Term::App(f, args) => {
            let i = m
                .signature()
                .function_index(f)
                .ok_or_else(|| Error::UnknownSymbol(f.clone()))?;
            let vals = args
                .iter()
                .map(|a| evaluate_term(m, a, s))
                .collect::<Result<Vec<_>>>()?;
            Ok(m.function(i).apply(&vals))
        }
    }
}

/// Direct recursive evaluation following the inductive clauses.
pub fn evaluate_naive(m: &FiniteModel, phi: &Formula, s: &Assignment) -> Result<bool> {
    phi.check(m.signature())?;
    check_assignment(m, phi, s)?;
    let mut env = s.clone();
    naive(m, phi, &mut env)
}

fn naive(m: &FiniteModel, phi: &Formula, s: &mut Assignment) -> Result<bool> {
    Ok(match phi {
        Formula::Pred(p, args) => {
            let i = m
                .signature()
                .predicate_index(p)
                .ok_or_else(|| Error::UnknownSymbol(p.clone()))?;
            let vals = args
                .iter()
                .map(|a| evaluate_term(m, a, s))
                .collect::<Result<Vec<_>>>()?;
            m.relation(i).holds(&vals)
        }
        Formula::Eq(a, b) => evaluate_term(m, a, s)? == evaluate_term(m, b, s)?,
        Formula::Not(a) => !naive(m, a, s)?,
        Formula::Implies(a, b) => !naive(m, a, s)? || naive(m, b, s)?,
        Formula::And(a, b) => naive(m, a, s)? && naive(m, b, s)?,
        Formula::Or(a, b) => naive(m, a, s)? || naive(m, b, s)?,
        Formula::Iff(a, b) => naive(m, a, s)? == naive(m, b, s)?,
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let universal = matches!(phi, Formula::Forall(..));
            let sort = m
                .signature()
                .sort_index(&v.sort)
                .ok_or_else(|| Error::Sort(v.sort.clone()))?;
            let saved = s.get(v).copied();
            let mut result = universal;
            for x in 0..m.carrier(sort) {
                s.insert(v.clone(), x);
                if naive(m, body, s)? != universal {
                    result = !universal;
                    break;
                }
            }
            match saved {
                Some(x) => s.insert(v.clone(), x),
                None => s.remove(v),
            };
            result
        }
    })
}

/// Evaluates `phi` in `m` under `s`.
pub fn evaluate(m: &FiniteModel, phi: &Formula, s: &Assignment) -> Result<bool> {
    let prepared = Prepared::compile(m.signature(), phi)?;
    Evaluator::new(m).run(&prepared, s)
}

#[derive(Debug, Clone)]
enum CTerm {
    Slot(usize),
    Const(usize),
    App(usize, Vec<CTerm>),
}

impl CTerm {
    fn slots(&self, out: &mut BTreeSet<usize>) {
        match self {
            CTerm::Slot(s) => {
                out.insert(*s);
            }
            CTerm::Const(_) => {}
            CTerm::App(_, args) => args.iter().for_each(|a| a.slots(out)),
        }
    }

    fn mentions(&self, slot: usize) -> bool {
        match self {
            CTerm::Slot(s) => *s == slot,
            CTerm::Const(_) => false,
            CTerm::App(_, args) => args.iter().any(|a| a.mentions(slot)),
        }
    }
}

#[derive(Debug, Clone)]
enum Gen {
    Eq(CTerm),
    Atom { pred: usize, pos: usize, args: Vec<CTerm> },
}

#[derive(Debug, Clone)]
struct Block {
    id: usize,
    vars: Vec<(usize, usize)>,
    pre: Vec<Node>,
    at: Vec<Vec<Node>>,
    gens: Vec<Vec<Gen>>,
    free: Vec<usize>,
    memo: bool,
}

#[derive(Debug, Clone)]
enum Node {
    Atom(usize, Vec<CTerm>),
    Eq(CTerm, CTerm),
    Not(Box<Node>),
    And(Vec<Node>),
    Or(Vec<Node>),
    Iff(Box<Node>, Box<Node>),
    Exists(Box<Block>),
}

impl Node {
    fn slots(&self, out: &mut BTreeSet<usize>) {
        match self {
            Node::Atom(_, args) => args.iter().for_each(|a| a.slots(out)),
            Node::Eq(a, b) => {
                a.slots(out);
                b.slots(out);
            }
            Node::Not(a) => a.slots(out),
            Node::And(xs) | Node::Or(xs) => xs.iter().for_each(|x| x.slots(out)),
            Node::Iff(a, b) => {
                a.slots(out);
                b.slots(out);
            }
            Node::Exists(b) => out.extend(b.free.iter().copied()),
        }
    }

    /// Rough exponent of the work needed: the deepest chain of bound
    /// variables.
    fn cost(&self) -> usize {
        match self {
            Node::Atom(..) | Node::Eq(..) => 0,
            Node::Not(a) => a.cost(),
            Node::And(xs) | Node::Or(xs) => xs.iter().map(Node::cost).max().unwrap_or(0),
            Node::Iff(a, b) => a.cost() + b.cost(),
            Node::Exists(b) => {
                let inner = b
                    .pre
                    .iter()
                    .chain(b.at.iter().flatten())
                    .map(Node::cost)
                    .max()
                    .unwrap_or(0);
                b.vars.len() + inner
            }
        }
    }

    fn has_block(&self) -> bool {
        match self {
            Node::Atom(..) | Node::Eq(..) => false,
            Node::Not(a) => a.has_block(),
            Node::And(xs) | Node::Or(xs) => xs.iter().any(Node::has_block),
            Node::Iff(a, b) => a.has_block() || b.has_block(),
            Node::Exists(_) => true,
        }
    }
}

static NEXT_UID: AtomicUsize = AtomicUsize::new(1);

/// A formula compiled against a signature, reusable across models of that
/// signature and across threads.
#[derive(Debug, Clone)]
pub struct Prepared {
    uid: usize,
    root: Node,
    slots: usize,
    free: Vec<(Var, usize)>,
}

struct Compiler<'a> {
    sig: &'a Signature,
    scope: Vec<(Var, usize)>,
    next_slot: usize,
    next_block: usize,
}

impl Prepared {
    pub fn compile(sig: &Signature, phi: &Formula) -> Result<Prepared> {
        phi.check(sig)?;
        let free_vars: Vec<Var> = phi.free_variables().into_iter().collect();
        let mut c = Compiler {
            sig,
            scope: Vec::new(),
            next_slot: 0,
            next_block: 0,
        };
        let mut free = Vec::new();
        for v in free_vars {
            let sort = sig.sort_index(&v.sort).ok_or_else(|| Error::Sort(v.sort.clone()))?;
            c.scope.push((v.clone(), c.next_slot));
            free.push((v, sort));
            c.next_slot += 1;
        }
        let root = c.compile(phi, false)?;
        Ok(Prepared {
            uid: NEXT_UID.fetch_add(1, Ordering::Relaxed),
            root,
            slots: c.next_slot,
            free,
        })
    }

    /// Free variables in slot order.
    pub fn free_variables(&self) -> impl Iterator<Item = &Var> {
        self.free.iter().map(|(v, _)| v)
    }
}

impl<'a> Compiler<'a> {
    fn slot_of(&self, v: &Var) -> usize {
        self.scope
            .iter()
            .rev()
            .find(|(w, _)| w == v)
            .map(|(_, s)| *s)
            .expect("variable resolved during checking")
    }

    fn term(&self, t: &Term) -> Result<CTerm> {
        Ok(match t {
            Term::Var(v) => CTerm::Slot(self.slot_of(v)),
            Term::Const(c) => match self.sig.symbol(c) {
                Some(Symbol::Constant(i)) => CTerm::Const(i),
                _ => return Err(Error::UnknownSymbol(c.clone())),
            },
            Term::App(f, args) => match self.sig.symbol(f) {
                Some(Symbol::Function(i)) => CTerm::App(i, args.iter().map(|a| self.term(a)).collect::<Result<_>>()?),
                _ => return Err(Error::UnknownSymbol(f.clone())),
            },
        })
    }

    fn negate(node: Node, neg: bool) -> Node {
        if neg {
            Node::Not(Box::new(node))
        } else {
            node
        }
    }

    fn junction(and: bool, a: Node, b: Node) -> Node {
        let mut items = Vec::new();
        for x in [a, b] {
            match (x, and) {
                (Node::And(xs), true) | (Node::Or(xs), false) => items.extend(xs),
                (x, _) => items.push(x),
            }
        }
        // Quantifier-free operands go first; quantified ones keep their
        // written order, which the formula author controls.
        items.sort_by_key(|n| n.cost() > 0);
        if and {
            Node::And(items)
        } else {
            Node::Or(items)
        }
    }

    fn compile(&mut self, f: &Formula, neg: bool) -> Result<Node> {
        Ok(match f {
            Formula::Pred(p, args) => {
                let i = self
                    .sig
                    .predicate_index(p)
                    .ok_or_else(|| Error::UnknownSymbol(p.clone()))?;
                let args = args.iter().map(|a| self.term(a)).collect::<Result<_>>()?;
                Self::negate(Node::Atom(i, args), neg)
            }
            Formula::Eq(a, b) => Self::negate(Node::Eq(self.term(a)?, self.term(b)?), neg),
            Formula::Not(a) => self.compile(a, !neg)?,
            Formula::And(a, b) => {
                let (x, y) = (self.compile(a, neg)?, self.compile(b, neg)?);
                Self::junction(!neg, x, y)
            }
            Formula::Or(a, b) => {
                let (x, y) = (self.compile(a, neg)?, self.compile(b, neg)?);
                Self::junction(neg, x, y)
            }
            Formula::Implies(a, b) => {
                let (x, y) = (self.compile(a, !neg)?, self.compile(b, neg)?);
                Self::junction(neg, x, y)
            }
            Formula::Iff(a, b) => {
                let (x, y) = (self.compile(a, false)?, self.compile(b, false)?);
                Self::negate(Node::Iff(Box::new(x), Box::new(y)), neg)
            }
            Formula::Exists(..) | Formula::Forall(..) => {
                // exists v. b is a block over b; forall v. b is the negation
                // of a block over ~b. An outer negation cancels or adds one.
                let universal = matches!(f, Formula::Forall(..));
                let block = self.block(f, universal)?;
                Self::negate(block, universal != neg)
            }
        })
    }

    /// Builds the existential block for quantifier `f`, whose body is to be
    /// read at polarity `neg`.
    fn block(&mut self, f: &Formula, neg: bool) -> Result<Node> {
        let mut vars: Vec<Var> = Vec::new();
        let mut neg = neg;
        // The first quantifier is always absorbed; later ones only when they
        // are existential at the current polarity.
        let mut body = match f {
            Formula::Exists(v, b) | Formula::Forall(v, b) => {
                vars.push(v.clone());
                &**b
            }
            _ => unreachable!(),
        };
        loop {
            match (body, neg) {
                (Formula::Exists(v, b), false) | (Formula::Forall(v, b), true) => {
                    vars.push(v.clone());
                    body = b;
                }
                (Formula::Not(x), _) if matches!(**x, Formula::Not(_) | Formula::Exists(..) | Formula::Forall(..)) => {
                    neg = !neg;
                    body = x;
                }
                _ => break,
            }
        }
        let base = self.scope.len();
        let mut var_slots = Vec::new();
        for v in &vars {
            let sort = self
                .sig
                .sort_index(&v.sort)
                .ok_or_else(|| Error::Sort(v.sort.clone()))?;
            let slot = self.next_slot;
            self.next_slot += 1;
            self.scope.push((v.clone(), slot));
            var_slots.push((slot, sort));
        }
        let inner = self.compile(body, neg);
        self.scope.truncate(base);
        let inner = inner?;
        let conjuncts = match inner {
            Node::And(xs) => xs,
            x => vec![x],
        };
        let id = self.next_block;
        self.next_block += 1;
        Ok(Node::Exists(Box::new(schedule(id, var_slots, conjuncts))))
    }
}

fn schedule(id: usize, vars: Vec<(usize, usize)>, conjuncts: Vec<Node>) -> Block {
    let position: HashMap<usize, usize> = vars.iter().enumerate().map(|(i, (s, _))| (*s, i)).collect();
    let mut pre = Vec::new();
    let mut at: Vec<Vec<Node>> = vec![Vec::new(); vars.len()];
    let mut free = BTreeSet::new();
    let memo = conjuncts.iter().any(Node::has_block);
    for c in conjuncts {
        let mut slots = BTreeSet::new();
        c.slots(&mut slots);
        let depth = slots.iter().filter_map(|s| position.get(s)).max().copied();
        free.extend(slots.into_iter().filter(|s| !position.contains_key(s)));
        match depth {
            Some(d) => at[d].push(c),
            None => pre.push(c),
        }
    }
    pre.sort_by_key(|n| n.cost() > 0);
    let mut gens = Vec::with_capacity(vars.len());
    for (d, list) in at.iter_mut().enumerate() {
        list.sort_by_key(|n| n.cost() > 0);
        let slot = vars[d].0;
        let mut g = Vec::new();
        for c in list.iter() {
            match c {
                Node::Eq(CTerm::Slot(s), t) | Node::Eq(t, CTerm::Slot(s)) if *s == slot && !t.mentions(slot) => {
                    g.push(Gen::Eq(t.clone()));
                }
                Node::Atom(pred, args) => {
                    for (pos, a) in args.iter().enumerate() {
                        if matches!(a, CTerm::Slot(s) if *s == slot)
                            && args.iter().enumerate().all(|(j, b)| j == pos || !b.mentions(slot))
                        {
                            g.push(Gen::Atom {
                                pred: *pred,
                                pos,
                                args: args.clone(),
                            });
                            break;
                        }
                    }
                }
                _ => {}
            }
        }
        // Equations pin the value down completely; try them first.
        g.sort_by_key(|x| !matches!(x, Gen::Eq(_)));
        gens.push(g);
    }
    Block {
        id,
        vars,
        pre,
        at,
        gens,
        free: free.into_iter().collect(),
        memo,
    }
}

const MEMO_LIMIT: usize = 1 << 22;
const UNBOUND: usize = usize::MAX;

/// Runs prepared formulas against one model, keeping a memo table of
/// quantifier blocks across runs. Not shared between threads; create one
/// per thread.
pub struct Evaluator<'m> {
    model: &'m FiniteModel,
    memo: HashMap<Vec<usize>, bool>,
    env: Vec<usize>,
}

impl<'m> Evaluator<'m> {
    pub fn new(model: &'m FiniteModel) -> Self {
        Evaluator {
            model,
            memo: HashMap::new(),
            env: Vec::new(),
        }
    }

    pub fn model(&self) -> &'m FiniteModel {
        self.model
    }

    pub fn run(&mut self, p: &Prepared, s: &Assignment) -> Result<bool> {
        let mut values = Vec::with_capacity(p.free.len());
        for (v, sort) in &p.free {
            let x = *s
                .get(v)
                .ok_or_else(|| Error::MissingAssignment(format!("{}:{}", v.name, v.sort)))?;
            if x >= self.model.carrier(*sort) {
                return Err(Error::Model(format!("value {x} of {} is outside its carrier", v.name)));
            }
            values.push(x);
        }
        Ok(self.run_values(p, &values))
    }

    /// Runs with free-variable values given in slot order (the order of
    /// [`Prepared::free_variables`]). Values must be in range.
    pub fn run_values(&mut self, p: &Prepared, values: &[usize]) -> bool {
        assert_eq!(values.len(), p.free.len(), "one value per free variable");
        let mut env = std::mem::take(&mut self.env);
        env.clear();
        env.resize(p.slots, UNBOUND);
        env[..values.len()].copy_from_slice(values);
        let r = self.node(p.uid, &p.root, &mut env);
        self.env = env;
        r
    }

    fn term(&self, t: &CTerm, env: &[usize]) -> usize {
        match t {
            CTerm::Slot(s) => env[*s],
            CTerm::Const(c) => self.model.constant(*c),
            CTerm::App(f, args) => {
                let mut buf = [0usize; 8];
                if args.len() <= buf.len() {
                    for (b, a) in buf.iter_mut().zip(args) {
                        *b = self.term(a, env);
                    }
                    self.model.function(*f).apply(&buf[..args.len()])
                } else {
                    let vals: Vec<usize> = args.iter().map(|a| self.term(a, env)).collect();
                    self.model.function(*f).apply(&vals)
                }
            }
        }
    }

    fn node(&mut self, uid: usize, n: &Node, env: &mut [usize]) -> bool {
        match n {
            Node::Atom(p, args) => {
                let mut buf = [0usize; 8];
                if args.len() <= buf.len() {
                    for (b, a) in buf.iter_mut().zip(args) {
                        *b = self.term(a, env);
                    }
                    self.model.relation(*p).holds(&buf[..args.len()])
                } else {
                    let vals: Vec<usize> = args.iter().map(|a| self.term(a, env)).collect();
                    self.model.relation(*p).holds(&vals)
                }
            }
            Node::Eq(a, b) => self.term(a, env) == self.term(b, env),
            Node::Not(a) => !self.node(uid, a, env),
            Node::And(xs) => xs.iter().all(|x| self.node(uid, x, env)),
            Node::Or(xs) => xs.iter().any(|x| self.node(uid, x, env)),
            Node::Iff(a, b) => self.node(uid, a, env) == self.node(uid, b, env),
            Node::Exists(b) => self.block(uid, b, env),
        }
    }

    fn block(&mut self, uid: usize, b: &Block, env: &mut [usize]) -> bool {
        let key = if b.memo {
            let mut k = Vec::with_capacity(b.free.len() + 2);
            k.push(uid);
            k.push(b.id);
            k.extend(b.free.iter().map(|&s| env[s]));
            if let Some(&r) = self.memo.get(&k) {
                return r;
            }
            Some(k)
        } else {
            None
        };
        let r = b.pre.iter().all(|c| self.node(uid, c, env)) && self.search(uid, b, 0, env);
        for (s, _) in &b.vars {
            env[*s] = UNBOUND;
        }
        if let Some(k) = key {
            if self.memo.len() >= MEMO_LIMIT {
                self.memo.clear();
            }
            self.memo.insert(k, r);
        }
        r
    }

    fn candidates(&self, b: &Block, d: usize, env: &[usize]) -> Candidates {
        let (_, sort) = b.vars[d];
        let mut best: Option<Candidates> = None;
        for g in &b.gens[d] {
            match g {
                Gen::Eq(t) => return Candidates::List(vec![self.term(t, env)]),
                Gen::Atom { pred, pos, args } => {
                    let bound: Vec<Option<usize>> = args
                        .iter()
                        .enumerate()
                        .map(|(j, a)| if j == *pos { None } else { Some(self.term(a, env)) })
                        .collect();
                    if let Some(c) = self.model.relation(*pred).candidates(*pos, &bound) {
                        if best.as_ref().is_none_or(|b| c.len() < b.len()) {
                            best = Some(c);
                        }
                    }
                }
            }
        }
        best.unwrap_or(Candidates::Range(0..self.model.carrier(sort)))
    }

    fn search(&mut self, uid: usize, b: &Block, d: usize, env: &mut [usize]) -> bool {
        if d == b.vars.len() {
            return true;
        }
        let slot = b.vars[d].0;
        let cands = self.candidates(b, d, env);
        for i in 0..cands.len() {
            env[slot] = cands.get(i);
            if b.at[d].iter().all(|c| self.node(uid, c, env)) && self.search(uid, b, d + 1, env) {
                return true;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::model::ModelBuilder;
    use crate::logic::parse::parse_formula;
    use crate::logic::signature::SignatureBuilder;
    use std::sync::Arc;

    fn graph() -> FiniteModel {
        let sig = Arc::new(
            SignatureBuilder::new()
                .sort("V")
                .predicate("E", &["V", "V"])
                .function("s", &["V"], "V")
                .constant("o", "V")
                .build()
                .unwrap(),
        );
        ModelBuilder::new(sig)
            .carrier("V", 4)
            .unwrap()
            .table_relation("E", vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]])
            .unwrap()
            .function("s", vec![1, 2, 3, 0])
            .unwrap()
            .constant("o", 0)
            .unwrap()
            .build()
            .unwrap()
    }

    #[test]
    fn planner_matches_naive() {
        let m = graph();
        for text in [
            "forall x:V. E(x, s(x))",
            "forall x:V. exists y:V. E(y, x)",
            "exists x:V. exists y:V. E(x, y) & E(y, x)",
            "forall x:V. forall y:V. E(x, y) -> y = s(x)",
            "~(exists x:V. s(s(x)) = x)",
            "forall x:V. (E(x, o) <-> x = s(s(s(o))))",
            "exists x:V. forall y:V. x = y | ~E(y, x) | E(x, y)",
        ] {
            let f = parse_formula(text, m.signature()).unwrap();
            let a = Assignment::new();
            assert_eq!(
                evaluate(&m, &f, &a).unwrap(),
                evaluate_naive(&m, &f, &a).unwrap(),
                "{text}"
            );
        }
    }

    #[test]
    fn missing_assignment() {
        let m = graph();
        let f = parse_formula("E(x, o)", m.signature()).unwrap();
        assert!(matches!(
            evaluate(&m, &f, &Assignment::new()),
            Err(Error::MissingAssignment(_))
        ));
        let mut s = Assignment::new();
        s.insert(Var::new("x", "V"), 3);
        assert!(evaluate(&m, &f, &s).unwrap());
    }
}
