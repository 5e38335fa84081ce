//! Checking of Hilbert-style deductions with modus ponens, generalization
//! and the logical axiom schemes LAS1 to LAS14.
//!
//! Axiom instances are matched on the primitive-basis rewriting of both the
//! step and the scheme, so a step may use `&`, `|`, `<->` and `exists`
//! freely.

use super::subst::substitute;
use super::syntax::{Formula, Term, Var};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Justification {
    Hypothesis,
    /// Logical axiom scheme number, 1 to 14.
    Axiom(u8),
    ModusPonens {
        premise: usize,
        implication: usize,
    },
    Generalization {
        premise: usize,
        var: Var,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Deduction {
    pub steps: Vec<Step>,
}

impl Deduction {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, formula: Formula, justification: Justification) -> usize {
        self.steps.push(Step { formula, justification });
        self.steps.len() - 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub step: usize,
    pub reason: String,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {}: {}", self.step, self.reason)
    }
}

/// Accepts `d` as a deduction from `hypotheses`, or reports the first bad
/// step.
pub fn check_deduction(d: &Deduction, hypotheses: &[Formula]) -> Result<(), Rejection> {
    if d.steps.is_empty() {
        return Err(Rejection {
            step: 0,
            reason: "empty deduction".into(),
        });
    }
    let hyps: Vec<Formula> = hypotheses.iter().map(Formula::desugar).collect();
    let mut hyp_free = BTreeSet::new();
    for h in hypotheses {
        hyp_free.extend(h.free_variables());
    }
    let mut seen: Vec<Formula> = Vec::with_capacity(d.steps.len());
    for (i, step) in d.steps.iter().enumerate() {
        let f = step.formula.desugar();
        let reject = |reason: String| Err(Rejection { step: i, reason });
        match &step.justification {
            Justification::Hypothesis => {
                if !hyps.contains(&f) {
                    return reject("not among the hypotheses".into());
                }
            }
            Justification::Axiom(k) => {
                if let Err(reason) = match_scheme(*k, &f) {
                    return reject(format!("not an instance of LAS{k}: {reason}"));
                }
            }
            Justification::ModusPonens { premise, implication } => {
                if *premise >= i || *implication >= i {
                    return reject("modus ponens cites a later step".into());
                }
                let expected = Formula::implies(seen[*premise].clone(), f.clone());
                if seen[*implication] != expected {
                    return reject(format!(
                        "step {implication} is not the implication from step {premise} to this formula"
                    ));
                }
            }
            Justification::Generalization { premise, var } => {
                if *premise >= i {
                    return reject("generalization cites a later step".into());
                }
                if f != Formula::forall(var.clone(), seen[*premise].clone()) {
                    return reject(format!("not the generalization of step {premise} over {}", var.name));
                }
                if hyp_free.contains(var) {
                    return reject(format!("{} is free in a hypothesis", var.name));
                }
            }
        }
        seen.push(f);
    }
    Ok(())
}

// Scheme patterns over metavariables, written in the primitive basis.
#[derive(Debug, Clone)]
enum Pat {
    Meta(usize),
    Not(Box<Pat>),
    Imp(Box<Pat>, Box<Pat>),
}

fn m(i: usize) -> Pat {
    Pat::Meta(i)
}

fn not(p: Pat) -> Pat {
    Pat::Not(Box::new(p))
}

fn imp(a: Pat, b: Pat) -> Pat {
    Pat::Imp(Box::new(a), Box::new(b))
}

fn and(a: Pat, b: Pat) -> Pat {
    not(imp(a, not(b)))
}

fn or(a: Pat, b: Pat) -> Pat {
    imp(not(a), b)
}

fn propositional_scheme(k: u8) -> Option<Pat> {
    let (phi, psi, chi) = (m(0), m(1), m(2));
    Some(match k {
        1 => imp(phi.clone(), imp(psi, phi)),
        2 => imp(
            imp(phi.clone(), imp(psi.clone(), chi.clone())),
            imp(imp(phi.clone(), psi), imp(phi, chi)),
        ),
        3 => imp(and(phi.clone(), psi), phi),
        4 => imp(and(phi, psi.clone()), psi),
        5 => imp(phi.clone(), imp(psi.clone(), and(phi, psi))),
        6 => imp(phi.clone(), or(phi, psi)),
        7 => imp(psi.clone(), or(phi, psi)),
        8 => imp(
            imp(phi.clone(), chi.clone()),
            imp(imp(psi.clone(), chi.clone()), imp(or(phi, psi), chi)),
        ),
        9 => imp(imp(phi.clone(), psi.clone()), imp(imp(phi.clone(), not(psi)), not(phi))),
        10 => imp(not(not(phi.clone())), phi),
        _ => return None,
    })
}

fn match_pat<'a>(p: &Pat, f: &'a Formula, binds: &mut [Option<&'a Formula>; 3]) -> bool {
    match (p, f) {
        (Pat::Meta(i), _) => match binds[*i] {
            Some(prev) => prev == f,
            None => {
                binds[*i] = Some(f);
                true
            }
        },
        (Pat::Not(a), Formula::Not(b)) => match_pat(a, b, binds),
        (Pat::Imp(a1, a2), Formula::Implies(b1, b2)) => match_pat(a1, b1, binds) && match_pat(a2, b2, binds),
        _ => false,
    }
}

/// Checks a primitive-basis formula against scheme `k`.
fn match_scheme(k: u8, f: &Formula) -> Result<(), String> {
    if let Some(p) = propositional_scheme(k) {
        let mut binds = [None, None, None];
        return if match_pat(&p, f, &mut binds) {
            Ok(())
        } else {
            Err("shape mismatch".into())
        };
    }
    match k {
        // (forall v. phi) -> phi(v|theta)
        11 => {
            let Formula::Implies(a, b) = f else {
                return Err("not an implication".into());
            };
            let Formula::Forall(v, phi) = a.as_ref() else {
                return Err("antecedent is not universal".into());
            };
            instance_of(phi, v, b)
        }
        // phi(v|theta) -> exists v. phi, with exists v. phi = ~forall v. ~phi
        12 => {
            let Formula::Implies(a, b) = f else {
                return Err("not an implication".into());
            };
            let Formula::Not(inner) = b.as_ref() else {
                return Err("consequent is not existential".into());
            };
            let Formula::Forall(v, neg) = inner.as_ref() else {
                return Err("consequent is not existential".into());
            };
            let Formula::Not(phi) = neg.as_ref() else {
                return Err("consequent is not existential".into());
            };
            instance_of(phi, v, a)
        }
        // (forall v. (psi -> phi)) -> (psi -> forall v. phi), v not free in psi
        13 => {
            let shape = || -> Option<()> {
                let Formula::Implies(a, b) = f else { return None };
                let Formula::Forall(v, body) = a.as_ref() else {
                    return None;
                };
                let Formula::Implies(psi, phi) = body.as_ref() else {
                    return None;
                };
                let Formula::Implies(psi2, all) = b.as_ref() else {
                    return None;
                };
                let Formula::Forall(v2, phi2) = all.as_ref() else {
                    return None;
                };
                (v == v2 && psi == psi2 && phi == phi2 && !psi.has_free(v)).then_some(())
            };
            shape().ok_or_else(|| "shape or freeness condition fails".into())
        }
        // (forall v. (phi -> psi)) -> ((exists v. phi) -> psi), v not free in psi
        14 => {
            let shape = || -> Option<()> {
                let Formula::Implies(a, b) = f else { return None };
                let Formula::Forall(v, body) = a.as_ref() else {
                    return None;
                };
                let Formula::Implies(phi, psi) = body.as_ref() else {
                    return None;
                };
                let Formula::Implies(ex, psi2) = b.as_ref() else {
                    return None;
                };
                let Formula::Not(inner) = ex.as_ref() else { return None };
                let Formula::Forall(v2, neg) = inner.as_ref() else {
                    return None;
                };
                let Formula::Not(phi2) = neg.as_ref() else { return None };
                (v == v2 && phi == phi2 && psi == psi2 && !psi.has_free(v)).then_some(())
            };
            shape().ok_or_else(|| "shape or freeness condition fails".into())
        }
        _ => Err(format!("unknown scheme {k}")),
    }
}

/// Decides whether `target` is `phi(v|theta)` for some term `theta` with an
/// admissible substitution.
fn instance_of(phi: &Formula, v: &Var, target: &Formula) -> Result<(), String> {
    let mut theta: Option<Term> = None;
    if !unify_formula(phi, target, v, false, &mut theta) {
        return Err("no term makes the instance match".into());
    }
    let theta = theta.unwrap_or_else(|| Term::Var(v.clone()));
    match substitute(phi, v, &theta) {
        Ok(out) if &out == target => Ok(()),
        Ok(_) => Err("instance mismatch".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn unify_term(p: &Term, t: &Term, v: &Var, shadowed: bool, theta: &mut Option<Term>) -> bool {
    match (p, t) {
        (Term::Var(w), _) if w == v && !shadowed => match theta {
            Some(prev) => prev == t,
            None => {
                *theta = Some(t.clone());
                true
            }
        },
        (Term::Var(a), Term::Var(b)) => a == b,
        (Term::Const(a), Term::Const(b)) => a == b,
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| unify_term(x, y, v, shadowed, theta))
        }
        _ => false,
    }
}

fn unify_formula(p: &Formula, t: &Formula, v: &Var, shadowed: bool, theta: &mut Option<Term>) -> bool {
    match (p, t) {
        (Formula::Pred(a, xs), Formula::Pred(b, ys)) => {
            a == b && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| unify_term(x, y, v, shadowed, theta))
        }
        (Formula::Eq(a1, a2), Formula::Eq(b1, b2)) => {
            unify_term(a1, b1, v, shadowed, theta) && unify_term(a2, b2, v, shadowed, theta)
        }
        (Formula::Not(a), Formula::Not(b)) => unify_formula(a, b, v, shadowed, theta),
        (Formula::Implies(a1, a2), Formula::Implies(b1, b2)) => {
            unify_formula(a1, b1, v, shadowed, theta) && unify_formula(a2, b2, v, shadowed, theta)
        }
        (Formula::Forall(w1, a), Formula::Forall(w2, b)) => {
            w1 == w2 && unify_formula(a, b, v, shadowed || w1 == v, theta)
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(n: &str) -> Var {
        Var::new(n, "R")
    }

    fn p(n: &str) -> Formula {
        Formula::pred("P", vec![Term::Var(var(n))])
    }

    fn q() -> Formula {
        Formula::pred("Q", vec![Term::constant("c")])
    }

    #[test]
    fn modus_ponens() {
        let (phi, psi) = (p("x"), q());
        let imp = Formula::implies(phi.clone(), psi.clone());
        let mut d = Deduction::new();
        d.push(phi.clone(), Justification::Hypothesis);
        d.push(imp.clone(), Justification::Hypothesis);
        d.push(
            psi,
            Justification::ModusPonens {
                premise: 0,
                implication: 1,
            },
        );
        assert!(check_deduction(&d, &[phi, imp]).is_ok());
    }

    #[test]
    fn generalization_over_hypothesis_variable_fails() {
        let phi = p("x");
        let mut d = Deduction::new();
        d.push(phi.clone(), Justification::Hypothesis);
        d.push(
            Formula::forall(var("x"), phi.clone()),
            Justification::Generalization {
                premise: 0,
                var: var("x"),
            },
        );
        let r = check_deduction(&d, &[phi]).unwrap_err();
        assert_eq!(r.step, 1);
    }

    #[test]
    fn las1_instance() {
        let f = Formula::implies(p("x"), Formula::implies(q(), p("x")));
        let mut d = Deduction::new();
        d.push(f, Justification::Axiom(1));
        assert!(check_deduction(&d, &[]).is_ok());
        let mut bad = Deduction::new();
        bad.push(
            Formula::implies(p("x"), Formula::implies(q(), q())),
            Justification::Axiom(1),
        );
        assert!(check_deduction(&bad, &[]).is_err());
    }

    #[test]
    fn las3_uses_conjunction_sugar() {
        let f = Formula::implies(Formula::and(p("x"), q()), p("x"));
        assert!(match_scheme(3, &f.desugar()).is_ok());
        assert!(match_scheme(4, &f.desugar()).is_err());
    }

    #[test]
    fn las11_and_las12() {
        let body = Formula::pred("R2", vec![Term::Var(var("v")), Term::Var(var("w"))]);
        let inst = Formula::pred("R2", vec![Term::constant("c"), Term::Var(var("w"))]);
        let f11 = Formula::implies(Formula::forall(var("v"), body.clone()), inst.clone());
        assert!(match_scheme(11, &f11.desugar()).is_ok());
        let f12 = Formula::implies(inst, Formula::exists(var("v"), body.clone()));
        assert!(match_scheme(12, &f12.desugar()).is_ok());
        // theta = w is captured by a binder on w.
        let guarded = Formula::forall(var("w"), body);
        let bad = Formula::implies(
            Formula::forall(var("v"), guarded),
            Formula::forall(
                var("w"),
                Formula::pred("R2", vec![Term::Var(var("w")), Term::Var(var("w"))]),
            ),
        );
        assert!(match_scheme(11, &bad.desugar()).is_err());
    }

    #[test]
    fn las13_freeness() {
        let ok = Formula::implies(
            Formula::forall(var("v"), Formula::implies(q(), p("v"))),
            Formula::implies(q(), Formula::forall(var("v"), p("v"))),
        );
        assert!(match_scheme(13, &ok.desugar()).is_ok());
        let bad = Formula::implies(
            Formula::forall(var("v"), Formula::implies(p("v"), p("v"))),
            Formula::implies(p("v"), Formula::forall(var("v"), p("v"))),
        );
        assert!(match_scheme(13, &bad.desugar()).is_err());
    }

    #[test]
    fn las14_freeness() {
        let ok = Formula::implies(
            Formula::forall(var("v"), Formula::implies(p("v"), q())),
            Formula::implies(Formula::exists(var("v"), p("v")), q()),
        );
        assert!(match_scheme(14, &ok.desugar()).is_ok());
    }
}
