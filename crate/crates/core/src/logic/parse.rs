//! Recursive-descent parser for the formula surface syntax.
//!
//! ```text
//! formula       := quantified | biconditional
//! quantified    := ("forall" | "exists") IDENT ":" IDENT "." formula
//! biconditional := implication ("<->" implication)?
//! implication   := disjunction ("->" implication)?
//! disjunction   := conjunction ("|" conjunction)*
//! conjunction   := negation ("&" negation)*
//! negation      := "~" negation | quantified | atom
//! atom          := "(" formula ")" | IDENT "(" term ("," term)* ")"
//!                | term "=" term | term "!=" term
//! term          := IDENT | IDENT "(" term ("," term)* ")"
//! ```
//!
//! A quantifier in operand position extends as far to the right as
//! possible. Sorts of free variables are inferred from the positions they
//! occur in; with a single-sorted signature they default to that sort.

use super::signature::{is_keyword, Signature, Symbol};
use super::syntax::{Formula, Term, Var};
use crate::error::{Error, Result};
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Colon,
    Dot,
    Eq,
    Neq,
    Not,
    And,
    Or,
    Imp,
    Iff,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b':' => Tok::Colon,
            b'.' => Tok::Dot,
            b'=' => Tok::Eq,
            b'~' => Tok::Not,
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'!' if bytes.get(i + 1) == Some(&b'=') => {
                i += 1;
                Tok::Neq
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Imp
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                i += 2;
                Tok::Iff
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len()
                    && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_' || bytes[i + 1] == b'\'')
                {
                    i += 1;
                }
                Tok::Ident(text[start..=i].to_string())
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(Error::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{ch}`"),
                });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

#[derive(Debug, Clone)]
enum RawTerm {
    Ident(String, usize),
    App(String, Vec<RawTerm>),
}

#[derive(Debug, Clone)]
enum Raw {
    Pred(String, Vec<RawTerm>),
    Eq(RawTerm, RawTerm, bool),
    Not(Box<Raw>),
    Bin(Tok, Box<Raw>, Box<Raw>),
    Quant(bool, String, String, Box<Raw>, usize),
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    sig: &'a Signature,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, usize)> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) => {
                self.bump();
                Ok((s, pos))
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn formula(&mut self) -> Result<Raw> {
        if self.at_quantifier() {
            return self.quantified();
        }
        let left = self.implication()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            let right = self.implication()?;
            return Ok(Raw::Bin(Tok::Iff, Box::new(left), Box::new(right)));
        }
        Ok(left)
    }

    fn at_quantifier(&self) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == "forall" || s == "exists")
    }

    fn quantified(&mut self) -> Result<Raw> {
        let pos = self.pos();
        let forall = matches!(self.bump(), Tok::Ident(s) if s == "forall");
        let (name, _) = self.ident("a bound variable name")?;
        self.expect(Tok::Colon, "`:` after the bound variable")?;
        let (sort, _) = self.ident("a sort name")?;
        self.expect(Tok::Dot, "`.` after the quantifier prefix")?;
        let body = self.formula()?;
        Ok(Raw::Quant(forall, name, sort, Box::new(body), pos))
    }

    fn implication(&mut self) -> Result<Raw> {
        let left = self.disjunction()?;
        if *self.peek() == Tok::Imp {
            self.bump();
            let right = self.implication()?;
            return Ok(Raw::Bin(Tok::Imp, Box::new(left), Box::new(right)));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> Result<Raw> {
        let mut left = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let right = self.conjunction()?;
            left = Raw::Bin(Tok::Or, Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<Raw> {
        let mut left = self.negation()?;
        while *self.peek() == Tok::And {
            self.bump();
            let right = self.negation()?;
            left = Raw::Bin(Tok::And, Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn negation(&mut self) -> Result<Raw> {
        if *self.peek() == Tok::Not {
            self.bump();
            return Ok(Raw::Not(Box::new(self.negation()?)));
        }
        if self.at_quantifier() {
            return self.quantified();
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Raw> {
        if *self.peek() == Tok::LParen {
            self.bump();
            let f = self.formula()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(f);
        }
        let (name, pos) = self.ident("an atomic formula")?;
        if *self.peek() == Tok::LParen {
            match self.sig.symbol(&name) {
                Some(Symbol::Predicate(_)) => {
                    let args = self.arguments()?;
                    return Ok(Raw::Pred(name, args));
                }
                Some(Symbol::Function(_)) => {}
                _ => return Err(Error::UnknownSymbol(name)),
            }
        }
        let left = self.term_after(name, pos)?;
        let negated = match self.peek() {
            Tok::Eq => false,
            Tok::Neq => true,
            _ => return self.err("expected `=` or `!=` after a term"),
        };
        self.bump();
        let right = self.term()?;
        Ok(Raw::Eq(left, right, negated))
    }

    fn arguments(&mut self) -> Result<Vec<RawTerm>> {
        self.expect(Tok::LParen, "`(`")?;
        let mut args = vec![self.term()?];
        loop {
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                    args.push(self.term()?);
                }
                Tok::RParen => {
                    self.bump();
                    return Ok(args);
                }
                _ => return self.err("expected `,` or `)` in argument list"),
            }
        }
    }

    fn term(&mut self) -> Result<RawTerm> {
        let (name, pos) = self.ident("a term")?;
        self.term_after(name, pos)
    }

    fn term_after(&mut self, name: String, pos: usize) -> Result<RawTerm> {
        if *self.peek() == Tok::LParen {
            let args = self.arguments()?;
            Ok(RawTerm::App(name, args))
        } else {
            Ok(RawTerm::Ident(name, pos))
        }
    }
}

/// Parses `text` against `sig` and checks that the result is well-sorted.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, sig };
    let raw = p.formula()?;
    if *p.peek() != Tok::End {
        return p.err("unexpected trailing input");
    }
    let mut free: HashMap<String, Option<usize>> = HashMap::new();
    loop {
        let before = free.clone();
        infer(&raw, sig, &mut Vec::new(), &mut free)?;
        if before == free {
            break;
        }
    }
    let mut resolved = HashMap::new();
    for (name, sort) in &free {
        let sort = match sort {
            Some(s) => *s,
            None if sig.sorts().len() == 1 => 0,
            None => return Err(Error::Sort(format!("cannot infer the sort of free variable {name}"))),
        };
        resolved.insert(name.clone(), sig.sorts()[sort].clone());
    }
    let f = build(&raw, sig, &mut Vec::new(), &resolved)?;
    f.check(sig)?;
    Ok(f)
}

fn bound_sort(scope: &[(String, String)], name: &str) -> Option<String> {
    scope.iter().rev().find(|(n, _)| n == name).map(|(_, s)| s.clone())
}

/// Sort of a raw term when it can already be determined.
fn known_sort(
    t: &RawTerm,
    sig: &Signature,
    scope: &[(String, String)],
    free: &HashMap<String, Option<usize>>,
) -> Option<usize> {
    match t {
        RawTerm::Ident(name, _) => {
            if let Some(s) = bound_sort(scope, name) {
                return sig.sort_index(&s);
            }
            if let Some(Symbol::Constant(i)) = sig.symbol(name) {
                return Some(sig.constant_sort(i));
            }
            free.get(name).copied().flatten()
        }
        RawTerm::App(f, _) => match sig.symbol(f) {
            Some(Symbol::Function(i)) => Some(sig.function_sorts(i).1),
            _ => None,
        },
    }
}

fn constrain(
    t: &RawTerm,
    expected: Option<usize>,
    sig: &Signature,
    scope: &[(String, String)],
    free: &mut HashMap<String, Option<usize>>,
) -> Result<()> {
    match t {
        RawTerm::Ident(name, pos) => {
            if bound_sort(scope, name).is_some() {
                return Ok(());
            }
            match sig.symbol(name) {
                Some(Symbol::Constant(_)) => Ok(()),
                Some(_) => Err(Error::Syntax {
                    pos: *pos,
                    msg: format!("`{name}` is not a term"),
                }),
                None => {
                    let slot = free.entry(name.clone()).or_insert(None);
                    match (*slot, expected) {
                        (None, e) => *slot = e,
                        (Some(a), Some(b)) if a != b => {
                            return Err(Error::Sort(format!(
                                "free variable {name} used at sorts {} and {}",
                                sig.sorts()[a],
                                sig.sorts()[b]
                            )))
                        }
                        _ => {}
                    }
                    Ok(())
                }
            }
        }
        RawTerm::App(f, args) => match sig.symbol(f) {
            Some(Symbol::Function(i)) => {
                let sorts = sig.function_sorts(i).0.to_vec();
                if sorts.len() != args.len() {
                    return Err(Error::Arity {
                        symbol: f.clone(),
                        expected: sorts.len(),
                        found: args.len(),
                    });
                }
                for (a, s) in args.iter().zip(sorts) {
                    constrain(a, Some(s), sig, scope, free)?;
                }
                Ok(())
            }
            _ => Err(Error::UnknownSymbol(f.clone())),
        },
    }
}

fn infer(
    raw: &Raw,
    sig: &Signature,
    scope: &mut Vec<(String, String)>,
    free: &mut HashMap<String, Option<usize>>,
) -> Result<()> {
    match raw {
        Raw::Pred(p, args) => {
            let i = sig.predicate_index(p).ok_or_else(|| Error::UnknownSymbol(p.clone()))?;
            let sorts = sig.predicate_sorts(i).to_vec();
            if sorts.len() != args.len() {
                return Err(Error::Arity {
                    symbol: p.clone(),
                    expected: sorts.len(),
                    found: args.len(),
                });
            }
            for (a, s) in args.iter().zip(sorts) {
                constrain(a, Some(s), sig, scope, free)?;
            }
            Ok(())
        }
        Raw::Eq(a, b, _) => {
            let sa = known_sort(a, sig, scope, free);
            let sb = known_sort(b, sig, scope, free);
            constrain(a, sb, sig, scope, free)?;
            constrain(b, sa, sig, scope, free)
        }
        Raw::Not(a) => infer(a, sig, scope, free),
        Raw::Bin(_, a, b) => {
            infer(a, sig, scope, free)?;
            infer(b, sig, scope, free)
        }
        Raw::Quant(_, name, sort, body, pos) => {
            if sig.sort_index(sort).is_none() {
                return Err(Error::Syntax {
                    pos: *pos,
                    msg: format!("unknown sort `{sort}`"),
                });
            }
            scope.push((name.clone(), sort.clone()));
            let r = infer(body, sig, scope, free);
            scope.pop();
            r
        }
    }
}

fn build_term(
    t: &RawTerm,
    sig: &Signature,
    scope: &[(String, String)],
    free: &HashMap<String, String>,
) -> Result<Term> {
    match t {
        RawTerm::Ident(name, _) => {
            if let Some(s) = bound_sort(scope, name) {
                return Ok(Term::Var(Var::new(name.clone(), s)));
            }
            if let Some(Symbol::Constant(_)) = sig.symbol(name) {
                return Ok(Term::Const(name.clone()));
            }
            let sort = free.get(name).ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
            Ok(Term::Var(Var::new(name.clone(), sort.clone())))
        }
        RawTerm::App(f, args) => Ok(Term::App(
            f.clone(),
            args.iter()
                .map(|a| build_term(a, sig, scope, free))
                .collect::<Result<_>>()?,
        )),
    }
}

fn build(
    raw: &Raw,
    sig: &Signature,
    scope: &mut Vec<(String, String)>,
    free: &HashMap<String, String>,
) -> Result<Formula> {
    Ok(match raw {
        Raw::Pred(p, args) => Formula::Pred(
            p.clone(),
            args.iter()
                .map(|a| build_term(a, sig, scope, free))
                .collect::<Result<_>>()?,
        ),
        Raw::Eq(a, b, negated) => {
            let eq = Formula::Eq(build_term(a, sig, scope, free)?, build_term(b, sig, scope, free)?);
            if *negated {
                Formula::not(eq)
            } else {
                eq
            }
        }
        Raw::Not(a) => Formula::not(build(a, sig, scope, free)?),
        Raw::Bin(op, a, b) => {
            let (a, b) = (build(a, sig, scope, free)?, build(b, sig, scope, free)?);
            match op {
                Tok::And => Formula::and(a, b),
                Tok::Or => Formula::or(a, b),
                Tok::Imp => Formula::implies(a, b),
                Tok::Iff => Formula::iff(a, b),
                _ => unreachable!(),
            }
        }
        Raw::Quant(forall, name, sort, body, _) => {
            scope.push((name.clone(), sort.clone()));
            let body = build(body, sig, scope, free);
            scope.pop();
            let v = Var::new(name.clone(), sort.clone());
            if *forall {
                Formula::forall(v, body?)
            } else {
                Formula::exists(v, body?)
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::signature::SignatureBuilder;

    fn sig() -> Signature {
        SignatureBuilder::new()
            .sort("R")
            .predicate("P", &["R", "R"])
            .predicate("Q", &["R"])
            .function("f", &["R", "R"], "R")
            .constant("c", "R")
            .build()
            .unwrap()
    }

    #[test]
    fn simple_universal() {
        let f = parse_formula("forall x:R. x = x", &sig()).unwrap();
        let x = Var::new("x", "R");
        assert_eq!(
            f,
            Formula::forall(x.clone(), Formula::eq(Term::Var(x.clone()), Term::Var(x)))
        );
    }

    #[test]
    fn free_and_bound_occurrences() {
        let s = SignatureBuilder::new()
            .sort("R")
            .predicate("P", &["R"])
            .predicate("Q", &["R"])
            .build()
            .unwrap();
        let f = parse_formula("P(v) & forall v:R. Q(v)", &s).unwrap();
        assert!(matches!(f, Formula::And(..)));
        assert_eq!(f.free_variables().len(), 1);
    }

    #[test]
    fn unclosed_argument_list() {
        let err = parse_formula("forall x:R. P(x, y,", &sig()).unwrap_err();
        match err {
            Error::Syntax { pos, .. } => assert_eq!(pos, 19),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn errors_are_classified() {
        assert!(matches!(parse_formula("Z(c)", &sig()), Err(Error::UnknownSymbol(_))));
        assert!(matches!(parse_formula("P(c)", &sig()), Err(Error::Arity { .. })));
        assert!(matches!(
            parse_formula("g(c) = c", &sig()),
            Err(Error::UnknownSymbol(_))
        ));
        assert!(matches!(parse_formula("c = ", &sig()), Err(Error::Syntax { .. })));
        assert!(matches!(parse_formula("c # c", &sig()), Err(Error::Syntax { .. })));
    }

    #[test]
    fn precedence_and_printing() {
        let s = sig();
        for text in [
            "Q(c) -> Q(c) -> Q(c)",
            "Q(c) & Q(c) | ~Q(c)",
            "forall x:R. exists y:R. P(x, y) <-> f(x, y) != c",
            "~(forall x:R. Q(x)) & (exists y:R. Q(y))",
            "(Q(c) <-> Q(c)) <-> Q(c)",
        ] {
            let f = parse_formula(text, &s).unwrap();
            let printed = f.to_string();
            assert_eq!(parse_formula(&printed, &s).unwrap(), f, "{printed}");
        }
        let f = parse_formula("Q(c) -> Q(c) -> Q(c)", &s).unwrap();
        assert!(matches!(&f, Formula::Implies(_, b) if matches!(**b, Formula::Implies(..))));
    }

    #[test]
    fn free_sorts_are_inferred() {
        let s = SignatureBuilder::new()
            .sort("Obj")
            .sort("Mor")
            .predicate("In", &["Mor", "Obj", "Obj"])
            .build()
            .unwrap();
        let f = parse_formula("In(f, A, B) & g = f", &s).unwrap();
        let fv: Vec<_> = f.free_variables().into_iter().map(|v| (v.name, v.sort)).collect();
        assert!(fv.contains(&("g".into(), "Mor".into())));
        assert!(parse_formula("x = y", &s).is_err());
    }
}
