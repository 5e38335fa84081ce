use modeq::algebra::{build_ring, ring_model, ring_signature, RingSpec};
use modeq::logic::random::{las_instance, random_formula, substitution_lemma_draw};
use modeq::logic::{
    check_deduction, evaluate, evaluate_naive, parse_formula, Assignment, Deduction, FiniteModel, Justification, Var,
};
use modeq::Caps;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn vars() -> Vec<Var> {
    ["x", "y", "z"].iter().map(|n| Var::new(*n, "R")).collect()
}

fn models() -> Vec<FiniteModel> {
    let caps = Caps::default();
    [
        RingSpec::zmod(2),
        RingSpec::zmod(4),
        RingSpec::zmod(6),
        RingSpec::poly_quotient(2, &[1, 1, 1]),
        RingSpec::matrix(RingSpec::zmod(2), 2),
    ]
    .iter()
    .map(|s| ring_model(&build_ring(s, &caps).unwrap()))
    .collect()
}

fn assignment(m: &FiniteModel, rng: &mut ChaCha8Rng) -> Assignment {
    vars()
        .into_iter()
        .map(|v| (v, rng.gen_range(0..m.carrier(0))))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn print_parse_round_trip(seed in any::<u64>(), depth in 0usize..5) {
        let sig = ring_signature();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = random_formula(&sig, &vars(), depth, &mut rng);
        let text = phi.to_string();
        let back = parse_formula(&text, &sig).unwrap();
        prop_assert_eq!(back, phi, "{}", text);
    }

    #[test]
    fn substitution_lemma(seed in any::<u64>(), which in 0usize..5) {
        let m = &models()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Some(held) = substitution_lemma_draw(m, &vars(), &mut rng).unwrap() {
            prop_assert!(held);
        }
    }

    #[test]
    fn abbreviations_agree_with_primitive_forms(seed in any::<u64>(), which in 0usize..5) {
        let m = &models()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = random_formula(m.signature(), &vars(), 3, &mut rng);
        let s = assignment(m, &mut rng);
        let plain = phi.desugar();
        prop_assert!(plain.is_primitive());
        prop_assert_eq!(evaluate(m, &phi, &s).unwrap(), evaluate_naive(m, &plain, &s).unwrap());
    }

    #[test]
    fn planner_matches_naive_evaluator(seed in any::<u64>(), which in 0usize..5) {
        let m = &models()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = random_formula(m.signature(), &vars(), 4, &mut rng);
        let s = assignment(m, &mut rng);
        prop_assert_eq!(evaluate(m, &phi, &s).unwrap(), evaluate_naive(m, &phi, &s).unwrap(), "{}", phi);
    }

    #[test]
    fn axiom_instances_are_accepted_and_valid(seed in any::<u64>(), k in 1u8..=14, which in 0usize..5) {
        let m = &models()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = las_instance(k, m.signature(), &vars(), &mut rng).unwrap();
        let mut d = Deduction::new();
        d.push(f.clone(), Justification::Axiom(k));
        prop_assert!(check_deduction(&d, &[]).is_ok(), "LAS{} rejected: {}", k, f);
        for _ in 0..4 {
            let s = assignment(m, &mut rng);
            prop_assert!(evaluate(m, &f, &s).unwrap(), "LAS{} false: {}", k, f);
        }
    }

    #[test]
    fn mislabelled_axioms_are_rejected(seed in any::<u64>()) {
        // Scheme 1 instances are never instances of scheme 10.
        let sig = ring_signature();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = las_instance(1, &sig, &vars(), &mut rng).unwrap();
        let mut d = Deduction::new();
        d.push(f, Justification::Axiom(10));
        prop_assert!(check_deduction(&d, &[]).is_err());
    }
}
