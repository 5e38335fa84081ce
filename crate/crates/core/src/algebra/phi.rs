use super::ring::FiniteRing;
use crate::logic::{Formula, Term, Var};

/// The sentence describing `r` up to isomorphism: `m` pairwise distinct
/// elements, nothing else, and the full addition and multiplication
/// tables among them.
pub fn sentence_phi_r(r: &FiniteRing) -> Formula {
    let n = r.size();
    let xs: Vec<Var> = (0..n).map(|i| Var::new(format!("x{}", i + 1), "R")).collect();
    let t = |i: usize| Term::Var(xs[i].clone());
    let mut parts = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            parts.push(Formula::neq(t(i), t(j)));
        }
    }
    let y = Var::new("x", "R");
    parts.push(Formula::forall(
        y.clone(),
        Formula::or_all((0..n).map(|i| Formula::eq(Term::Var(y.clone()), t(i)))),
    ));
    for (op, f) in [
        ("add", FiniteRing::add as fn(&FiniteRing, usize, usize) -> usize),
        ("mul", FiniteRing::mul),
    ] {
        for i in 0..n {
            for j in 0..n {
                parts.push(Formula::eq(Term::app(op, vec![t(i), t(j)]), t(f(r, i, j))));
            }
        }
    }
    Formula::exists_all(xs, Formula::and_all(parts))
}
