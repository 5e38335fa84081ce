//! Translation of ring sentences into sentences about `Mor(P, P)`.
//!
//! Ring variables become morphism variables relativized by `In(·, P, P)`,
//! products become `Comp` atoms, sums go through graphs in a pairing
//! `(Q, i1, p1, i2, p2)` quantified once at the top, `zero` becomes a zero
//! morphism `z` of `P` and `one` becomes `Id(P)`.

use super::formulas::{comp, id, inn, obj_var, tv, Builder, FormulaStyle};
use crate::algebra::ring_signature;
use crate::error::{Error, Result};
use crate::logic::{Formula, Term, Var};

struct Ctx {
    p: Term,
    q: Term,
    i1: Term,
    p1: Term,
    i2: Term,
    p2: Term,
    z: Term,
}

fn uses_addition(f: &Formula) -> bool {
    fn term(t: &Term) -> bool {
        match t {
            Term::App(op, args) => op == "add" || args.iter().any(term),
            _ => false,
        }
    }
    match f {
        Formula::Pred(_, args) => args.iter().any(term),
        Formula::Eq(a, b) => term(a) || term(b),
        Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => uses_addition(a),
        Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) | Formula::Iff(a, b) => {
            uses_addition(a) || uses_addition(b)
        }
    }
}

fn morphism(v: &Var) -> Var {
    Var::new(v.name.clone(), "Mor")
}

impl Ctx {
    /// `g` is the graph of `f`.
    fn graph(&self, b: &mut Builder, g: &Term, f: &Term) -> Formula {
        let one = id(&self.p);
        let mut parts = vec![inn(g, &self.q, &self.q)];
        for (inj, proj, value) in [
            (&self.i1, &self.p1, &one),
            (&self.i2, &self.p2, &one),
            (&self.i1, &self.p2, &self.z),
            (&self.i2, &self.p1, f),
        ] {
            let t = b.mor();
            parts.push(Formula::exists(
                t.clone(),
                Formula::and(comp(g, inj, &tv(&t)), comp(proj, &tv(&t), value)),
            ));
        }
        Formula::and_all(parts)
    }

    /// `x = y + z` as `Gr_x = Gr_y ∘ Gr_z`.
    fn sum(&self, b: &mut Builder, x: &Term, y: &Term, z: &Term) -> Formula {
        let (gy, gz, gx) = (b.mor(), b.mor(), b.mor());
        let fy = self.graph(b, &tv(&gy), y);
        let fz = self.graph(b, &tv(&gz), z);
        let fx = self.graph(b, &tv(&gx), x);
        Formula::exists_all(
            [gy.clone(), gz.clone(), gx.clone()],
            Formula::and_all([fy, fz, comp(&tv(&gy), &tv(&gz), &tv(&gx)), fx]),
        )
    }

    fn simple(&self, t: &Term) -> Option<Term> {
        match t {
            Term::Var(v) => Some(Term::Var(morphism(v))),
            Term::Const(c) if c == "zero" => Some(self.z.clone()),
            Term::Const(c) if c == "one" => Some(id(&self.p)),
            _ => None,
        }
    }

    /// `target` is the value of `t`.
    fn define(&self, b: &mut Builder, t: &Term, target: &Term) -> Result<Formula> {
        if let Some(s) = self.simple(t) {
            return Ok(Formula::eq(target.clone(), s));
        }
        let Term::App(op, args) = t else {
            return Err(Error::UnknownSymbol(format!("{t}")));
        };
        if args.len() != 2 || (op != "add" && op != "mul") {
            return Err(Error::UnknownSymbol(op.clone()));
        }
        let mut vars = Vec::new();
        let mut defs = Vec::new();
        let mut operands = Vec::new();
        for a in args {
            match self.simple(a) {
                Some(s) => operands.push(s),
                None => {
                    let u = b.mor();
                    defs.push(inn(&tv(&u), &self.p, &self.p));
                    defs.push(self.define(b, a, &tv(&u))?);
                    operands.push(tv(&u));
                    vars.push(u);
                }
            }
        }
        let body = if op == "mul" {
            comp(&operands[0], &operands[1], target)
        } else {
            self.sum(b, target, &operands[0], &operands[1])
        };
        defs.push(body);
        Ok(Formula::exists_all(vars, Formula::and_all(defs)))
    }

    fn translate(&self, b: &mut Builder, f: &Formula) -> Result<Formula> {
        let rel = |v: &Var| inn(&Term::Var(morphism(v)), &self.p, &self.p);
        Ok(match f {
            Formula::Pred(p, _) => return Err(Error::UnknownSymbol(p.clone())),
            Formula::Eq(l, r) => match (self.simple(l), self.simple(r)) {
                (_, Some(s)) => self.define(b, l, &s)?,
                (Some(s), None) => self.define(b, r, &s)?,
                (None, None) => {
                    let u = b.mor();
                    let dl = self.define(b, l, &tv(&u))?;
                    let dr = self.define(b, r, &tv(&u))?;
                    Formula::exists(u.clone(), Formula::and_all([inn(&tv(&u), &self.p, &self.p), dl, dr]))
                }
            },
            Formula::Not(a) => Formula::not(self.translate(b, a)?),
            Formula::And(x, y) => Formula::and(self.translate(b, x)?, self.translate(b, y)?),
            Formula::Or(x, y) => Formula::or(self.translate(b, x)?, self.translate(b, y)?),
            Formula::Implies(x, y) => Formula::implies(self.translate(b, x)?, self.translate(b, y)?),
            Formula::Iff(x, y) => Formula::iff(self.translate(b, x)?, self.translate(b, y)?),
            Formula::Forall(v, a) => Formula::forall(morphism(v), Formula::implies(rel(v), self.translate(b, a)?)),
            Formula::Exists(v, a) => Formula::exists(morphism(v), Formula::and(rel(v), self.translate(b, a)?)),
        })
    }
}

/// The translation of a ring sentence, with one free object variable `P`
/// (the object whose endomorphisms play the ring).
pub fn ring_sentence_to_category(phi: &Formula) -> Result<Formula> {
    phi.check(&ring_signature())?;
    if !phi.is_sentence() {
        let free: Vec<String> = phi.free_variables().iter().map(|v| v.name.clone()).collect();
        return Err(Error::NotASentence(free.join(", ")));
    }
    let mut b = Builder::new(FormulaStyle::ZeroTest);
    let p = obj_var("P");
    let pt = tv(&p);
    let q = b.obj();
    let (i1, p1, i2, p2, z) = (b.mor(), b.mor(), b.mor(), b.mor(), b.mor());
    let ctx = Ctx {
        p: pt.clone(),
        q: tv(&q),
        i1: tv(&i1),
        p1: tv(&p1),
        i2: tv(&i2),
        p2: tv(&p2),
        z: tv(&z),
    };
    let body = ctx.translate(&mut b, phi)?;
    let zero = b.zero_between(&ctx.z, &pt, &pt);
    let with_zero = Formula::exists(z.clone(), Formula::and_all([inn(&ctx.z, &pt, &pt), zero, body]));
    if !uses_addition(phi) {
        return Ok(with_zero);
    }
    let (qt, i1t, p1t, i2t, p2t) = (&ctx.q, &ctx.i1, &ctx.p1, &ctx.i2, &ctx.p2);
    let (c1, c2) = (b.mor(), b.mor());
    let joint = b.jointly_epi(i1t, i2t, &pt, &pt, qt);
    let Formula::Exists(_, inner) = with_zero else {
        unreachable!()
    };
    let apparatus = Formula::exists_all(
        [q.clone(), z.clone(), i1.clone(), p1.clone(), i2.clone(), p2.clone()],
        Formula::and_all([
            inn(&ctx.z, &pt, &pt),
            inn(i1t, &pt, qt),
            inn(p1t, qt, &pt),
            comp(p1t, i1t, &id(&pt)),
            inn(i2t, &pt, qt),
            inn(p2t, qt, &pt),
            comp(p2t, i2t, &id(&pt)),
            Formula::exists(
                c1.clone(),
                Formula::and(comp(p1t, i2t, &tv(&c1)), Formula::eq(tv(&c1), ctx.z.clone())),
            ),
            Formula::exists(
                c2.clone(),
                Formula::and(comp(p2t, i1t, &tv(&c2)), Formula::eq(tv(&c2), ctx.z.clone())),
            ),
            joint,
            *inner,
        ]),
    );
    Ok(apparatus)
}

/// `∃P (Proobr(P) ∧ T(φ))`, with the bounded progenerator formula.
pub fn xi(phi: &Formula) -> Result<Formula> {
    let body = ring_sentence_to_category(phi)?;
    let mut b = Builder::new(FormulaStyle::ZeroTest);
    let p = obj_var("P");
    let pro = b.pret(&tv(&p));
    Ok(Formula::exists(p, Formula::and(pro, body)))
}
