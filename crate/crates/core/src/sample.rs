//! Seeded samples of sentences used to compare structures: ten fixed
//! sentences followed by random ones.

use crate::algebra::ring_signature;
use crate::groups::group_signature;
use crate::logic::random::random_term;
use crate::logic::{parse_formula, Formula, Signature, Var};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

pub const SAMPLE_SIZE: usize = 25;
pub const DEFAULT_SEED: u64 = 7;

const RING_FIXED: [&str; 10] = [
    "forall x:R. forall y:R. mul(x, y) = mul(y, x)",
    "~(zero = one)",
    "add(one, one) = zero",
    "exists x:R. mul(x, x) = x & ~(x = zero) & ~(x = one)",
    "exists x:R. ~(x = zero) & mul(x, x) = zero",
    "forall x:R. x = zero | exists y:R. mul(x, y) = one",
    "forall x:R. forall y:R. mul(x, y) = zero -> x = zero | y = zero",
    "exists x:R. mul(x, x) = add(x, one)",
    "forall x:R. add(add(x, x), add(x, x)) = zero",
    "exists x:R. exists y:R. ~(mul(x, y) = mul(y, x))",
];

const GROUP_FIXED: [&str; 10] = [
    "forall x:G. forall y:G. mul(x, y) = mul(y, x)",
    "forall x:G. x = one",
    "exists x:G. mul(x, x) = one & ~(x = one)",
    "forall x:G. mul(x, x) = one",
    "exists x:G. ~(x = one) & mul(x, mul(x, x)) = one",
    "exists x:G. ~(x = one) & forall y:G. mul(x, y) = mul(y, x)",
    "forall x:G. forall y:G. inv(mul(x, y)) = mul(inv(y), inv(x))",
    "forall x:G. inv(x) = x",
    "exists x:G. exists y:G. ~(mul(x, y) = mul(y, x))",
    "forall x:G. mul(x, x) = one -> x = one",
];

/// The ten fixed ring sentences followed by fifteen random ones.
pub fn ring_sentence_sample(seed: u64) -> Vec<Formula> {
    sample(&ring_signature(), &RING_FIXED, seed)
}

/// The ten fixed group sentences followed by fifteen random ones.
pub fn group_sentence_sample(seed: u64) -> Vec<Formula> {
    sample(&group_signature(), &GROUP_FIXED, seed)
}

fn sample(sig: &Arc<Signature>, fixed: &[&str], seed: u64) -> Vec<Formula> {
    let mut out: Vec<Formula> = fixed
        .iter()
        .map(|s| parse_formula(s, sig).expect("fixed sentence parses"))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < SAMPLE_SIZE {
        out.push(random_sentence(sig, &mut rng));
    }
    out
}

/// A sentence over a one-sorted signature: a prefix of one to three
/// quantifiers over a boolean combination of one to three equations
/// between terms of depth at most 2.
pub fn random_sentence(sig: &Signature, rng: &mut impl Rng) -> Formula {
    let sort = sig.sorts()[0].clone();
    let k = rng.gen_range(1..=3);
    let vars: Vec<Var> = (0..k).map(|i| Var::new(format!("x{i}"), sort.clone())).collect();
    let atoms = rng.gen_range(1..=3);
    let mut body = random_equation(sig, &vars, rng);
    for _ in 1..atoms {
        let eq = random_equation(sig, &vars, rng);
        body = match rng.gen_range(0..3) {
            0 => Formula::and(body, eq),
            1 => Formula::or(body, eq),
            _ => Formula::implies(body, eq),
        };
    }
    if rng.gen_bool(0.25) {
        body = Formula::not(body);
    }
    vars.into_iter().rev().fold(body, |acc, v| {
        if rng.gen_bool(0.5) {
            Formula::forall(v, acc)
        } else {
            Formula::exists(v, acc)
        }
    })
}

fn random_equation(sig: &Signature, vars: &[Var], rng: &mut impl Rng) -> Formula {
    Formula::eq(random_term(sig, vars, 2, rng), random_term(sig, vars, 2, rng))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_deterministic_sentences() {
        for (a, b, sig) in [
            (ring_sentence_sample(7), ring_sentence_sample(7), ring_signature()),
            (group_sentence_sample(7), group_sentence_sample(7), group_signature()),
        ] {
            assert_eq!(a.len(), SAMPLE_SIZE);
            assert_eq!(a, b);
            for phi in &a {
                assert!(phi.is_sentence());
                phi.check(&sig).unwrap();
            }
        }
        assert_ne!(ring_sentence_sample(7), ring_sentence_sample(8));
    }
}
