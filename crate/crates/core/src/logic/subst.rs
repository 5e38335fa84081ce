use super::syntax::{Formula, Term, Var};
use crate::error::{Error, Result};
use std::collections::BTreeSet;

pub fn substitute_term(t: &Term, v: &Var, theta: &Term) -> Term {
    match t {
        Term::Var(w) if w == v => theta.clone(),
        Term::Var(_) | Term::Const(_) => t.clone(),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| substitute_term(a, v, theta)).collect()),
    }
}

/// Replaces every free occurrence of `v` in `phi` by `theta`.
///
/// The substitution is refused when some free occurrence of `v` lies in the
/// scope of a quantifier binding a variable of `theta`. When `theta` is a
/// variable its sort must equal that of `v`.
pub fn substitute(phi: &Formula, v: &Var, theta: &Term) -> Result<Formula> {
    if let Term::Var(w) = theta {
        if w.sort != v.sort {
            return Err(Error::Sort(format!(
                "cannot substitute {} of sort {} for {} of sort {}",
                w.name, w.sort, v.name, v.sort
            )));
        }
    }
    let mut theta_vars = BTreeSet::new();
    theta.variables(&mut theta_vars);
    let mut binders = Vec::new();
    go(phi, v, theta, &theta_vars, &mut binders)
}

fn go(phi: &Formula, v: &Var, theta: &Term, theta_vars: &BTreeSet<Var>, binders: &mut Vec<Var>) -> Result<Formula> {
    let check = |t: &Term, binders: &Vec<Var>| -> Result<Term> {
        if t.contains_var(v) {
            if let Some(w) = binders.iter().find(|w| theta_vars.contains(*w)) {
                return Err(Error::Inadmissible {
                    var: v.name.clone(),
                    term: theta.to_string(),
                    captured: w.name.clone(),
                });
            }
        }
        Ok(substitute_term(t, v, theta))
    };
    Ok(match phi {
        Formula::Pred(p, args) => Formula::Pred(
            p.clone(),
            args.iter().map(|a| check(a, binders)).collect::<Result<_>>()?,
        ),
        Formula::Eq(a, b) => Formula::Eq(check(a, binders)?, check(b, binders)?),
        Formula::Not(a) => Formula::not(go(a, v, theta, theta_vars, binders)?),
        Formula::Implies(a, b) => Formula::implies(
            go(a, v, theta, theta_vars, binders)?,
            go(b, v, theta, theta_vars, binders)?,
        ),
        Formula::And(a, b) => Formula::and(
            go(a, v, theta, theta_vars, binders)?,
            go(b, v, theta, theta_vars, binders)?,
        ),
        Formula::Or(a, b) => Formula::or(
            go(a, v, theta, theta_vars, binders)?,
            go(b, v, theta, theta_vars, binders)?,
        ),
        Formula::Iff(a, b) => Formula::iff(
            go(a, v, theta, theta_vars, binders)?,
            go(b, v, theta, theta_vars, binders)?,
        ),
        Formula::Forall(w, body) | Formula::Exists(w, body) => {
            let body = if w == v {
                (**body).clone()
            } else {
                binders.push(w.clone());
                let r = go(body, v, theta, theta_vars, binders);
                binders.pop();
                r?
            };
            if matches!(phi, Formula::Forall(..)) {
                Formula::forall(w.clone(), body)
            } else {
                Formula::exists(w.clone(), body)
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Var {
        Var::new(n, "R")
    }

    fn tv(n: &str) -> Term {
        Term::Var(v(n))
    }

    #[test]
    fn replaces_free_occurrences() {
        let phi = Formula::pred("P", vec![tv("v")]);
        let out = substitute(&phi, &v("v"), &Term::constant("c")).unwrap();
        assert_eq!(out, Formula::pred("P", vec![Term::constant("c")]));
    }

    #[test]
    fn capture_is_refused() {
        let phi = Formula::forall(v("y"), Formula::pred("P", vec![tv("v"), tv("y")]));
        assert!(matches!(
            substitute(&phi, &v("v"), &tv("y")),
            Err(Error::Inadmissible { .. })
        ));
        let phi = Formula::exists(v("y"), Formula::pred("P", vec![tv("v"), tv("y")]));
        let theta = Term::app("f", vec![tv("y")]);
        assert!(substitute(&phi, &v("v"), &theta).is_err());
    }

    #[test]
    fn no_free_occurrence_leaves_formula() {
        let phi = Formula::forall(v("x"), Formula::pred("P", vec![tv("x")]));
        assert_eq!(substitute(&phi, &v("v"), &tv("t")).unwrap(), phi);
        // A binder that captures nothing because v does not occur below it.
        let phi = Formula::and(
            Formula::pred("P", vec![tv("v")]),
            Formula::forall(v("y"), Formula::pred("P", vec![tv("y")])),
        );
        assert!(substitute(&phi, &v("v"), &tv("y")).is_ok());
    }

    #[test]
    fn rebinding_shadows() {
        let phi = Formula::forall(v("v"), Formula::pred("P", vec![tv("v")]));
        assert_eq!(substitute(&phi, &v("v"), &Term::constant("c")).unwrap(), phi);
    }
}
