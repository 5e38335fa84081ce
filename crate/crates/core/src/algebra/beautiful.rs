//! Beautiful linear combinations `τ(x_1, …, x_n) = α_1x_1 + ⋯ + α_nx_n`.
//!
//! Variables range over the regular module, scalars act on the left. Both
//! sides of each defining identity are sums of terms linear in a single
//! variable, so an identity holds for all assignments exactly when it holds
//! for every assignment with one nonzero variable. That reduces each check
//! to comparing two scalar actions on every element of `R`.

use super::ring::FiniteRing;
use crate::caps::Caps;
use crate::error::Result;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LinearCombination {
    pub coefficients: Vec<usize>,
}

impl LinearCombination {
    pub fn new(coefficients: Vec<usize>) -> Self {
        assert!(!coefficients.is_empty(), "a linear combination needs at least one term");
        LinearCombination { coefficients }
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `Σ α_i x_i` in the regular module.
    pub fn apply(&self, r: &FiniteRing, xs: &[usize]) -> usize {
        self.coefficients
            .iter()
            .zip(xs)
            .fold(r.zero(), |acc, (&a, &x)| r.add(acc, r.mul(a, x)))
    }
}

/// Default bound on the length of the combinations σ in identity (a).
pub const SIGMA_BOUND: usize = 2;

pub fn is_beautiful(tau: &LinearCombination, r: &FiniteRing) -> bool {
    is_beautiful_with(tau, r, SIGMA_BOUND)
}

pub fn is_beautiful_with(tau: &LinearCombination, r: &FiniteRing, sigma_bound: usize) -> bool {
    let alpha = &tau.coefficients;
    let n = alpha.len();
    // (c): Σ α_i x = x.
    if !r.elements().all(|x| tau.apply(r, &vec![x; n]) == x) {
        return false;
    }
    // (b): the variable x_j^i occurs on the left as α_i α_j x and on the
    // right only when i = j, as α_i x.
    for i in 0..n {
        for j in 0..n {
            let right = if i == j { alpha[i] } else { r.zero() };
            if r.elements()
                .any(|x| r.mul(alpha[i], r.mul(alpha[j], x)) != r.mul(right, x))
            {
                return false;
            }
        }
    }
    // (a): for σ = β_1x_1 + ⋯ + β_mx_m, the variable x_j^i occurs as
    // α_i β_j x on the left and β_j α_i x on the right. Only the set of
    // coefficients matters, so every length up to the bound sees the same
    // β values.
    if sigma_bound >= 1 {
        for &a in alpha {
            for beta in r.elements() {
                if r.elements()
                    .any(|x| r.mul(a, r.mul(beta, x)) != r.mul(beta, r.mul(a, x)))
                {
                    return false;
                }
            }
        }
    }
    true
}

fn tuples(r: &FiniteRing, n: usize, caps: &Caps) -> Result<Vec<Vec<usize>>> {
    caps.check("enumeration", (r.size() as u128).saturating_pow(n as u32))?;
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t: Vec<usize>| {
                r.elements().map(move |a| {
                    let mut t = t.clone();
                    t.push(a);
                    t
                })
            })
            .collect();
    }
    Ok(out)
}

/// All beautiful combinations of length `n`, in lexicographic order of
/// coefficient tuples.
pub fn enumerate_beautiful(r: &FiniteRing, n: usize, caps: &Caps) -> Result<Vec<LinearCombination>> {
    let all = tuples(r, n, caps)?;
    let found = crate::par::map(&all, |t| is_beautiful(&LinearCombination::new(t.clone()), r));
    Ok(all
        .into_iter()
        .zip(found)
        .filter(|(_, ok)| *ok)
        .map(|(t, _)| LinearCombination::new(t))
        .collect())
}

/// Combinations whose coefficients are central, pairwise orthogonal
/// idempotents summing to 1, computed directly from the characterization.
pub fn characterized_beautiful(r: &FiniteRing, n: usize) -> Vec<LinearCombination> {
    let idem: Vec<usize> = r
        .elements()
        .filter(|&a| r.is_central(a) && r.is_idempotent(a))
        .collect();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(r: &FiniteRing, idem: &[usize], n: usize, cur: &mut Vec<usize>, out: &mut Vec<LinearCombination>) {
        if cur.len() == n {
            let sum = cur.iter().fold(r.zero(), |acc, &a| r.add(acc, a));
            if sum == r.one() {
                out.push(LinearCombination::new(cur.clone()));
            }
            return;
        }
        for &e in idem {
            if cur.iter().all(|&f| r.mul(e, f) == r.zero()) {
                cur.push(e);
                rec(r, idem, n, cur, out);
                cur.pop();
            }
        }
    }
    rec(r, &idem, n, &mut cur, &mut out);
    out.sort();
    out
}
