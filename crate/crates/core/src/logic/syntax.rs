use super::signature::{Signature, Symbol};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// A variable is identified by its name together with its sort.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Var {
    pub name: String,
    pub sort: String,
}

impl Var {
    pub fn new(name: impl Into<String>, sort: impl Into<String>) -> Self {
        Var {
            name: name.into(),
            sort: sort.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Term {
    Var(Var),
    Const(String),
    App(String, Vec<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Formula {
    Pred(String, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
}

impl Term {
    pub fn var(name: &str, sort: &str) -> Term {
        Term::Var(Var::new(name, sort))
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(name.to_string())
    }

    pub fn app(f: &str, args: Vec<Term>) -> Term {
        Term::App(f.to_string(), args)
    }

    pub fn variables(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.variables(out)),
        }
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        match self {
            Term::Var(w) => w == v,
            Term::Const(_) => false,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(v)),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
            _ => 0,
        }
    }

    /// Sort of the term under `sig`, checking arities and argument sorts.
    pub fn sort_in(&self, sig: &Signature) -> Result<usize> {
        match self {
            Term::Var(v) => sig
                .sort_index(&v.sort)
                .ok_or_else(|| Error::Sort(format!("variable {} has unknown sort {}", v.name, v.sort))),
            Term::Const(c) => match sig.symbol(c) {
                Some(Symbol::Constant(i)) => Ok(sig.constant_sort(i)),
                _ => Err(Error::UnknownSymbol(c.clone())),
            },
            Term::App(f, args) => match sig.symbol(f) {
                Some(Symbol::Function(i)) => {
                    let (arg_sorts, result) = sig.function_sorts(i);
                    if arg_sorts.len() != args.len() {
                        return Err(Error::Arity {
                            symbol: f.clone(),
                            expected: arg_sorts.len(),
                            found: args.len(),
                        });
                    }
                    for (a, &s) in args.iter().zip(arg_sorts) {
                        let got = a.sort_in(sig)?;
                        if got != s {
                            return Err(Error::Sort(format!(
                                "argument {a} of {f} has sort {}, expected {}",
                                sig.sorts()[got],
                                sig.sorts()[s]
                            )));
                        }
                    }
                    Ok(result)
                }
                _ => Err(Error::UnknownSymbol(f.clone())),
            },
        }
    }
}

impl Formula {
    pub fn pred(p: &str, args: Vec<Term>) -> Formula {
        Formula::Pred(p.to_string(), args)
    }

    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Eq(a, b)
    }

    pub fn neq(a: Term, b: Term) -> Formula {
        Formula::not(Formula::Eq(a, b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(v: Var, body: Formula) -> Formula {
        Formula::Forall(v, Box::new(body))
    }

    pub fn exists(v: Var, body: Formula) -> Formula {
        Formula::Exists(v, Box::new(body))
    }

    pub fn forall_all(vars: impl IntoIterator<Item = Var>, body: Formula) -> Formula {
        let vars: Vec<Var> = vars.into_iter().collect();
        vars.into_iter().rev().fold(body, |acc, v| Formula::forall(v, acc))
    }

    pub fn exists_all(vars: impl IntoIterator<Item = Var>, body: Formula) -> Formula {
        let vars: Vec<Var> = vars.into_iter().collect();
        vars.into_iter().rev().fold(body, |acc, v| Formula::exists(v, acc))
    }

    /// Right-nested conjunction `a1 & (a2 & (...))`. Panics on an empty list.
    pub fn and_all(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut items: Vec<Formula> = items.into_iter().collect();
        let mut acc = items.pop().expect("empty conjunction");
        while let Some(f) = items.pop() {
            acc = Formula::and(f, acc);
        }
        acc
    }

    /// Right-nested disjunction. Panics on an empty list.
    pub fn or_all(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut items: Vec<Formula> = items.into_iter().collect();
        let mut acc = items.pop().expect("empty disjunction");
        while let Some(f) = items.pop() {
            acc = Formula::or(f, acc);
        }
        acc
    }

    pub fn free_variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        let mut add_term = |t: &Term, bound: &Vec<Var>| {
            let mut vs = BTreeSet::new();
            t.variables(&mut vs);
            for v in vs {
                if !bound.contains(&v) {
                    out.insert(v);
                }
            }
        };
        match self {
            Formula::Pred(_, args) => args.iter().for_each(|t| add_term(t, bound)),
            Formula::Eq(a, b) => {
                add_term(a, bound);
                add_term(b, bound);
            }
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_variables().is_empty()
    }

    pub fn has_free(&self, v: &Var) -> bool {
        match self {
            Formula::Pred(_, args) => args.iter().any(|t| t.contains_var(v)),
            Formula::Eq(a, b) => a.contains_var(v) || b.contains_var(v),
            Formula::Not(a) => a.has_free(v),
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) | Formula::Iff(a, b) => {
                a.has_free(v) || b.has_free(v)
            }
            Formula::Forall(w, body) | Formula::Exists(w, body) => w != v && body.has_free(v),
        }
    }

    /// Rewrites into the primitive basis `~`, `->`, `forall` using
    /// `a & b := ~(a -> ~b)`, `a | b := ~a -> b`,
    /// `a <-> b := (a -> b) & (b -> a)` and `exists v. a := ~forall v. ~a`.
    pub fn desugar(&self) -> Formula {
        match self {
            Formula::Pred(..) | Formula::Eq(..) => self.clone(),
            Formula::Not(a) => Formula::not(a.desugar()),
            Formula::Implies(a, b) => Formula::implies(a.desugar(), b.desugar()),
            Formula::And(a, b) => Formula::not(Formula::implies(a.desugar(), Formula::not(b.desugar()))),
            Formula::Or(a, b) => Formula::implies(Formula::not(a.desugar()), b.desugar()),
            Formula::Iff(a, b) => {
                let (a, b) = (a.desugar(), b.desugar());
                let ab = Formula::implies(a.clone(), b.clone());
                let ba = Formula::implies(b, a);
                Formula::not(Formula::implies(ab, Formula::not(ba)))
            }
            Formula::Forall(v, body) => Formula::forall(v.clone(), body.desugar()),
            Formula::Exists(v, body) => Formula::not(Formula::forall(v.clone(), Formula::not(body.desugar()))),
        }
    }

    pub fn is_primitive(&self) -> bool {
        match self {
            Formula::Pred(..) | Formula::Eq(..) => true,
            Formula::Not(a) => a.is_primitive(),
            Formula::Implies(a, b) => a.is_primitive() && b.is_primitive(),
            Formula::Forall(_, b) => b.is_primitive(),
            _ => false,
        }
    }

    /// Number of connectives, quantifiers and atoms.
    pub fn size(&self) -> usize {
        match self {
            Formula::Pred(..) | Formula::Eq(..) => 1,
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => 1 + a.size(),
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) | Formula::Iff(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    /// Checks that the formula is well-sorted against `sig`.
    pub fn check(&self, sig: &Signature) -> Result<()> {
        match self {
            Formula::Pred(p, args) => match sig.symbol(p) {
                Some(Symbol::Predicate(i)) => {
                    let sorts = sig.predicate_sorts(i);
                    if sorts.len() != args.len() {
                        return Err(Error::Arity {
                            symbol: p.clone(),
                            expected: sorts.len(),
                            found: args.len(),
                        });
                    }
                    for (a, &s) in args.iter().zip(sorts) {
                        if a.sort_in(sig)? != s {
                            return Err(Error::Sort(format!(
                                "argument {a} of {p} should have sort {}",
                                sig.sorts()[s]
                            )));
                        }
                    }
                    Ok(())
                }
                _ => Err(Error::UnknownSymbol(p.clone())),
            },
            Formula::Eq(a, b) => {
                if a.sort_in(sig)? != b.sort_in(sig)? {
                    return Err(Error::Sort(format!("equality between {a} and {b} of different sorts")));
                }
                Ok(())
            }
            Formula::Not(a) => a.check(sig),
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) | Formula::Iff(a, b) => {
                a.check(sig)?;
                b.check(sig)
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                if sig.sort_index(&v.sort).is_none() {
                    return Err(Error::Sort(format!("unknown sort {} for {}", v.sort, v.name)));
                }
                body.check(sig)
            }
        }
    }
}

// Precedence levels used by the printer, loosest first.
const LEVEL_IFF: u8 = 0;
const LEVEL_IMP: u8 = 1;
const LEVEL_OR: u8 = 2;
const LEVEL_AND: u8 = 3;
const LEVEL_UNARY: u8 = 4;

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{}", v.name),
            Term::Const(c) => write!(f, "{c}"),
            Term::App(g, args) => {
                write!(f, "{g}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl Formula {
    fn own_level(&self, context: u8) -> u8 {
        match self {
            Formula::Pred(..) | Formula::Eq(..) | Formula::Not(_) => LEVEL_UNARY,
            Formula::And(..) => LEVEL_AND,
            Formula::Or(..) => LEVEL_OR,
            Formula::Implies(..) => LEVEL_IMP,
            Formula::Iff(..) => LEVEL_IFF,
            // A quantifier extends as far right as possible, so it is
            // bracketed whenever it is an operand.
            Formula::Forall(..) | Formula::Exists(..) => {
                if context == LEVEL_IFF {
                    LEVEL_IFF
                } else {
                    LEVEL_UNARY + 1
                }
            }
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, level: u8) -> fmt::Result {
        let own = self.own_level(level);
        let wrap = own < level || own > LEVEL_UNARY;
        if wrap {
            write!(f, "(")?;
        }
        match self {
            Formula::Pred(p, args) => {
                write!(f, "{p}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")?;
            }
            Formula::Eq(a, b) => write!(f, "{a} = {b}")?,
            Formula::Not(inner) => match inner.as_ref() {
                Formula::Eq(a, b) => write!(f, "{a} != {b}")?,
                _ => {
                    write!(f, "~")?;
                    inner.fmt_at(f, LEVEL_UNARY)?;
                }
            },
            Formula::And(a, b) => {
                a.fmt_at(f, LEVEL_AND)?;
                write!(f, " & ")?;
                b.fmt_at(f, LEVEL_UNARY)?;
            }
            Formula::Or(a, b) => {
                a.fmt_at(f, LEVEL_OR)?;
                write!(f, " | ")?;
                b.fmt_at(f, LEVEL_AND)?;
            }
            Formula::Implies(a, b) => {
                a.fmt_at(f, LEVEL_OR)?;
                write!(f, " -> ")?;
                b.fmt_at(f, LEVEL_IMP)?;
            }
            Formula::Iff(a, b) => {
                a.fmt_at(f, LEVEL_IMP)?;
                write!(f, " <-> ")?;
                b.fmt_at(f, LEVEL_IMP)?;
            }
            Formula::Forall(v, b) | Formula::Exists(v, b) => {
                let q = if matches!(self, Formula::Forall(..)) {
                    "forall"
                } else {
                    "exists"
                };
                write!(f, "{q} {}:{}. ", v.name, v.sort)?;
                b.fmt_at(f, LEVEL_IFF)?;
            }
        }
        if wrap {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, LEVEL_IFF)
    }
}
