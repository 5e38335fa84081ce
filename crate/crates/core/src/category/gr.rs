//! Ring structure on `Mor(P, P)` from composition alone.
//!
//! A pairing for `P` is an object `Q` with `i1, i2 : P → Q` and
//! `p1, p2 : Q → P` such that `p1∘i1 = p2∘i2 = 1`, `p1∘i2 = p2∘i1 = 0`,
//! and the injections are jointly epimorphic, so `Q ≅ P ⊕ P`. Every
//! `f ∈ Mor(P, P)` has a unique graph `Gr_f ∈ Mor(Q, Q)` with
//! `p1∘Gr_f∘i1 = 1`, `p2∘Gr_f∘i2 = 1`, `p2∘Gr_f∘i1 = 0`, `p1∘Gr_f∘i2 = f`,
//! and `Gr_{g+h} = Gr_g∘Gr_h`. Only `In`, `Comp` and `Id` are consulted.

use super::model::CategoryModel;
use crate::algebra::FiniteRing;
use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Pairing {
    pub object: usize,
    pub sum: usize,
    pub i1: usize,
    pub p1: usize,
    pub i2: usize,
    pub p2: usize,
}

impl CategoryModel {
    /// An object with exactly one morphism to and from every object,
    /// found by counting when the model was encoded.
    pub fn zero_object(&self) -> Option<usize> {
        self.zero
    }

    /// The morphism `a → b` that factors through the zero object.
    pub fn categorical_zero(&self, a: usize, b: usize) -> Option<usize> {
        let o = self.zero_object()?;
        self.compose(self.morphisms(o, b).start, self.morphisms(a, o).start)
    }

    fn jointly_epi(&self, q: usize, i1: usize, i2: usize, p: usize) -> bool {
        (0..self.object_count()).all(|c| {
            let (zq, zp) = (self.categorical_zero(q, c), self.categorical_zero(p, c));
            let (zq, zp) = match (zq, zp) {
                (Some(a), Some(b)) => (a, b),
                _ => return false,
            };
            self.morphisms(q, c).all(|g| {
                let k1 = self.compose(g, i1) == Some(zp);
                let k2 = self.compose(g, i2) == Some(zp);
                !(k1 && k2) || g == zq
            })
        })
    }
}

/// Every pairing for `p`, in order of (object, i1, p1, i2, p2).
pub fn pairings(cat: &CategoryModel, p: usize) -> Vec<Pairing> {
    pairings_limited(cat, p, usize::MAX)
}

fn pairings_limited(cat: &CategoryModel, p: usize, limit: usize) -> Vec<Pairing> {
    let mut out = Vec::new();
    let Some(z) = cat.categorical_zero(p, p) else {
        return out;
    };
    let one = cat.identity(p);
    for q in 0..cat.object_count() {
        let splits: Vec<(usize, usize)> = cat
            .morphisms(p, q)
            .flat_map(|i| cat.morphisms(q, p).map(move |r| (i, r)))
            .filter(|&(i, r)| cat.compose(r, i) == Some(one))
            .collect();
        for &(i1, p1) in &splits {
            for &(i2, p2) in &splits {
                if cat.compose(p1, i2) == Some(z) && cat.compose(p2, i1) == Some(z) && cat.jointly_epi(q, i1, i2, p) {
                    out.push(Pairing {
                        object: p,
                        sum: q,
                        i1,
                        p1,
                        i2,
                        p2,
                    });
                    if out.len() >= limit {
                        return out;
                    }
                }
            }
        }
    }
    out
}

/// The first pairing for `p` in the deterministic search order.
pub fn find_pairing(cat: &CategoryModel, p: usize) -> Result<Pairing> {
    pairings_limited(cat, p, 1).pop().ok_or(Error::NoPairing(p))
}

/// `Gr_f` for every `f ∈ Mor(P, P)`, indexed by `f - start`.
pub fn graph_table(cat: &CategoryModel, pr: &Pairing) -> Result<Vec<usize>> {
    let (p, q) = (pr.object, pr.sum);
    let ends = cat.morphisms(p, p);
    let one = cat.identity(p);
    let z = cat.categorical_zero(p, p).ok_or(Error::NoPairing(p))?;
    let mut table = vec![usize::MAX; ends.len()];
    for g in cat.morphisms(q, q) {
        let gi1 = cat.compose(g, pr.i1).expect("composable");
        let gi2 = cat.compose(g, pr.i2).expect("composable");
        let at = |x: usize, y: usize| cat.compose(x, y).expect("composable");
        if at(pr.p1, gi1) == one && at(pr.p2, gi2) == one && at(pr.p2, gi1) == z {
            let f = at(pr.p1, gi2) - ends.start;
            if table[f] != usize::MAX {
                return Err(Error::CategoryAxiom(format!(
                    "two graphs for endomorphism {}",
                    f + ends.start
                )));
            }
            table[f] = g;
        }
    }
    if let Some(f) = table.iter().position(|&g| g == usize::MAX) {
        return Err(Error::CategoryAxiom(format!(
            "no graph for endomorphism {}",
            f + ends.start
        )));
    }
    Ok(table)
}

/// The ring on `Mor(P, P)` (elements numbered from the start of the block)
/// with composition as multiplication and addition through graphs.
pub fn ring_from_pairing(cat: &CategoryModel, pr: &Pairing) -> Result<FiniteRing> {
    let p = pr.object;
    let ends = cat.morphisms(p, p);
    let n = ends.len();
    let gr = graph_table(cat, pr)?;
    let inverse: std::collections::HashMap<usize, usize> = gr.iter().enumerate().map(|(f, &g)| (g, f)).collect();
    let mut add = vec![vec![0; n]; n];
    let mut mul = vec![vec![0; n]; n];
    for a in 0..n {
        for b in 0..n {
            let g = cat.compose(gr[a], gr[b]).expect("composable");
            add[a][b] = *inverse
                .get(&g)
                .ok_or_else(|| Error::CategoryAxiom("product of graphs is not a graph".into()))?;
            mul[a][b] = cat.compose(ends.start + a, ends.start + b).expect("composable") - ends.start;
        }
    }
    FiniteRing::from_tables(format!("Mor({p},{p})"), &add, &mul)
}

/// Recovers the endomorphism ring of object `p` from the category.
pub fn ring_from_endo_monoid(cat: &CategoryModel, p: usize) -> Result<FiniteRing> {
    ring_from_pairing(cat, &find_pairing(cat, p)?)
}
