//! Random terms, formulas and axiom instances for property checks.

use super::eval::{evaluate, evaluate_term, Assignment};
use super::model::FiniteModel;
use super::signature::Signature;
use super::subst::substitute;
use super::syntax::{Formula, Term, Var};
use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::Rng;

/// A term of depth at most `depth` over `vars` (all of one sort) and the
/// symbols of a one-sorted signature.
pub fn random_term(sig: &Signature, vars: &[Var], depth: usize, rng: &mut impl Rng) -> Term {
    let fns = sig.function_count();
    if depth > 0 && fns > 0 && rng.gen_bool(0.5) {
        let f = rng.gen_range(0..fns);
        let arity = sig.function_sorts(f).0.len();
        let args = (0..arity).map(|_| random_term(sig, vars, depth - 1, rng)).collect();
        return Term::app(sig.function_name(f), args);
    }
    if sig.constant_count() > 0 && (vars.is_empty() || rng.gen_bool(0.25)) {
        return Term::constant(sig.constant_name(rng.gen_range(0..sig.constant_count())));
    }
    Term::Var(vars.choose(rng).expect("a variable or a constant").clone())
}

fn random_atom(sig: &Signature, vars: &[Var], rng: &mut impl Rng) -> Formula {
    let preds = sig.predicate_count();
    if preds > 0 && rng.gen_bool(0.5) {
        let p = rng.gen_range(0..preds);
        let args = (0..sig.predicate_sorts(p).len())
            .map(|_| random_term(sig, vars, 1, rng))
            .collect();
        return Formula::pred(sig.predicate_name(p), args);
    }
    Formula::eq(random_term(sig, vars, 2, rng), random_term(sig, vars, 2, rng))
}

/// A formula whose variables come from `vars`; quantifiers may bind any of
/// them, so free and bound occurrences mix.
pub fn random_formula(sig: &Signature, vars: &[Var], depth: usize, rng: &mut impl Rng) -> Formula {
    if depth == 0 {
        return random_atom(sig, vars, rng);
    }
    let sub = |rng: &mut _| random_formula(sig, vars, depth - 1, rng);
    match rng.gen_range(0..8) {
        0 => Formula::not(sub(rng)),
        1 => Formula::and(sub(rng), sub(rng)),
        2 => Formula::or(sub(rng), sub(rng)),
        3 => Formula::implies(sub(rng), sub(rng)),
        4 => Formula::iff(sub(rng), sub(rng)),
        5 => Formula::forall(vars.choose(rng).unwrap().clone(), sub(rng)),
        6 => Formula::exists(vars.choose(rng).unwrap().clone(), sub(rng)),
        _ => random_atom(sig, vars, rng),
    }
}

/// An instance of logical axiom scheme `k` (1 to 14) built from random
/// formulas. Term instances of schemes 11 and 12 are redrawn until the
/// substitution is admissible.
pub fn las_instance(k: u8, sig: &Signature, vars: &[Var], rng: &mut impl Rng) -> Result<Formula> {
    let f = |rng: &mut _| random_formula(sig, vars, 2, rng);
    let (phi, psi, chi) = (f(rng), f(rng), f(rng));
    let imp = Formula::implies;
    Ok(match k {
        1 => imp(phi.clone(), imp(psi, phi)),
        2 => imp(
            imp(phi.clone(), imp(psi.clone(), chi.clone())),
            imp(imp(phi.clone(), psi), imp(phi, chi)),
        ),
        3 => imp(Formula::and(phi.clone(), psi), phi),
        4 => imp(Formula::and(phi, psi.clone()), psi),
        5 => imp(phi.clone(), imp(psi.clone(), Formula::and(phi, psi))),
        6 => imp(phi.clone(), Formula::or(phi, psi)),
        7 => imp(psi.clone(), Formula::or(phi, psi)),
        8 => imp(
            imp(phi.clone(), chi.clone()),
            imp(imp(psi.clone(), chi.clone()), imp(Formula::or(phi, psi), chi)),
        ),
        9 => imp(
            imp(phi.clone(), psi.clone()),
            imp(imp(phi.clone(), Formula::not(psi)), Formula::not(phi)),
        ),
        10 => imp(Formula::not(Formula::not(phi.clone())), phi),
        11 | 12 => {
            let v = vars.choose(rng).unwrap().clone();
            let mut phi = phi;
            loop {
                let theta = random_term(sig, vars, 1, rng);
                match substitute(&phi, &v, &theta) {
                    Ok(inst) if k == 11 => break imp(Formula::forall(v, phi), inst),
                    Ok(inst) => break imp(inst, Formula::exists(v, phi)),
                    Err(Error::Inadmissible { .. }) => phi = f(rng),
                    Err(e) => return Err(e),
                }
            }
        }
        13 | 14 => {
            let v = vars.choose(rng).unwrap().clone();
            // Binding v makes it not free in psi.
            let psi = Formula::forall(v.clone(), psi);
            if k == 13 {
                imp(
                    Formula::forall(v.clone(), imp(psi.clone(), phi.clone())),
                    imp(psi, Formula::forall(v, phi)),
                )
            } else {
                imp(
                    Formula::forall(v.clone(), imp(phi.clone(), psi.clone())),
                    imp(Formula::exists(v, phi), psi),
                )
            }
        }
        _ => return Err(Error::InvalidParameter(format!("no axiom scheme {k}"))),
    })
}

/// One draw of the substitution lemma: `M ⊨ φ(v|θ)[s]` iff
/// `M ⊨ φ[s(v := θ[s])]`. Returns `None` when the drawn substitution is
/// not admissible.
pub fn substitution_lemma_draw(m: &FiniteModel, vars: &[Var], rng: &mut impl Rng) -> Result<Option<bool>> {
    let sig = m.signature();
    let phi = random_formula(sig, vars, 3, rng);
    let v = vars.choose(rng).unwrap().clone();
    let theta = random_term(sig, vars, 2, rng);
    let inst = match substitute(&phi, &v, &theta) {
        Ok(f) => f,
        Err(Error::Inadmissible { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let size = m.carrier(0);
    let s: Assignment = vars.iter().map(|x| (x.clone(), rng.gen_range(0..size))).collect();
    let left = evaluate(m, &inst, &s)?;
    let mut s2 = s.clone();
    s2.insert(v, evaluate_term(m, &theta, &s)?);
    Ok(Some(left == evaluate(m, &phi, &s2)?))
}
