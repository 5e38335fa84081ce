use super::*;
use crate::algebra::{build_ring, ring_isomorphic, FiniteRing, RingSpec};
use crate::caps::Caps;
use crate::logic::{evaluate, parse_formula, Assignment, Var};
use crate::module::{build_skeleton, end_ring, free_module, regular_module, Skeleton};
use std::sync::Arc;

fn ring(spec: RingSpec) -> Arc<FiniteRing> {
    Arc::new(build_ring(&spec, &Caps::default()).unwrap())
}

fn cat(spec: RingSpec, bound: usize) -> CategoryModel {
    let caps = Caps::default();
    let skel = build_skeleton(&ring(spec), bound, &caps).unwrap();
    encode_category(&skel, &caps).unwrap()
}

fn regular(c: &CategoryModel) -> usize {
    let skel = c.skeleton();
    skel.find(&regular_module(skel.ring()), &Caps::default())
        .unwrap()
        .unwrap()
}

fn f2_square(c: &CategoryModel) -> usize {
    let skel = c.skeleton();
    let m = free_module(skel.ring(), 2, &Caps::default()).unwrap();
    skel.find(&m, &Caps::default()).unwrap().unwrap()
}

#[test]
fn encoding_sizes() {
    let c = cat(RingSpec::zmod(2), 4);
    assert_eq!(c.object_count(), 3);
    assert_eq!(c.morphism_count(), 31);
    for spec in [
        RingSpec::zmod(2),
        RingSpec::zmod(4),
        RingSpec::matrix(RingSpec::zmod(2), 2),
    ] {
        let c = cat(spec, 1);
        assert_eq!((c.object_count(), c.morphism_count()), (1, 1));
        assert_eq!(c.identity(0), 0);
    }
    let sig = category_signature();
    assert_eq!(sig.sorts(), ["Obj", "Mor"]);
}

#[test]
fn basic_examples() {
    let c = cat(RingSpec::zmod(2), 4);
    let (r, r2) = (regular(&c), f2_square(&c));
    for a in 0..c.object_count() {
        assert!(eval_formula(&c, FormulaName::Equivalence, &[c.identity(a)]).unwrap());
    }
    assert!(eval_formula(&c, FormulaName::Simp, &[r]).unwrap());
    assert!(!eval_formula(&c, FormulaName::Simp, &[r2]).unwrap());
    let projection = c
        .morphisms(r2, r)
        .find(|&f| c.hom(f).is_surjective(c.skeleton().module(r)))
        .unwrap();
    assert!(eval_formula(&c, FormulaName::Retraction, &[projection]).unwrap());
    let inclusion = c.morphisms(r, r2).find(|&f| c.hom(f).is_injective()).unwrap();
    assert!(eval_formula(&c, FormulaName::Mono, &[inclusion]).unwrap());
    assert!(!eval_formula(&c, FormulaName::Epi, &[c.zero_morphism(r, r)]).unwrap());
    assert_eq!(c.categorical_zero(r, r2), Some(c.zero_morphism(r, r2)));
    assert!(eval_formula(&c, FormulaName::ProobrBounded, &[r]).unwrap());
    assert!(eval_formula(&c, FormulaName::Mono, &[]).is_err());
    assert!(eval_formula(&c, FormulaName::Mono, &[c.morphism_count()]).is_err());
}

fn all_names() -> Vec<FormulaName> {
    let mut v = FormulaName::ALL_UNARY.to_vec();
    v.push(FormulaName::SumFinBounded(2));
    v
}

#[test]
fn formulas_agree_with_oracles_on_small_skeletons() {
    let caps = Caps::default();
    for (spec, bound) in [
        (RingSpec::zmod(2), 4),
        (RingSpec::zmod(3), 9),
        (RingSpec::zmod(4), 8),
        (RingSpec::product(RingSpec::zmod(2), RingSpec::zmod(2)), 4),
    ] {
        let c = cat(spec.clone(), bound);
        for style in [FormulaStyle::Literal, FormulaStyle::ZeroTest] {
            let report = compare_with_oracles(&c, &all_names(), style, &caps).unwrap();
            let bad: Vec<_> = report.disagreements().collect();
            assert!(bad.is_empty(), "{} B={bound} {style:?}: {bad:?}", spec.label());
        }
    }
}

#[test]
fn comm_and_local_pick_out_the_regular_module() {
    let caps = Caps::default();
    let c = cat(RingSpec::zmod(4), 16);
    let r = regular(&c);
    for name in [FormulaName::Comm, FormulaName::Local] {
        let rows = c.eval_all(name, FormulaStyle::ZeroTest).unwrap();
        let holds: Vec<usize> = rows.iter().filter(|(_, v)| *v).map(|(a, _)| a[0]).collect();
        assert_eq!(holds, vec![r], "{name}");
    }
    let report = compare_with_oracles(&c, &[FormulaName::Principal], FormulaStyle::ZeroTest, &caps).unwrap();
    assert!(report.all_agree);
    assert!(report.rows.iter().all(|r| !r.verdict));
    let c = cat(RingSpec::zmod(2), 4);
    let rows = c.eval_all(FormulaName::Principal, FormulaStyle::ZeroTest).unwrap();
    let holds: Vec<usize> = rows.iter().filter(|(_, v)| *v).map(|(a, _)| a[0]).collect();
    assert_eq!(holds, vec![regular(&c)]);
}

#[test]
fn parallel_evaluation_matches_sequential() {
    let c = cat(RingSpec::zmod(4), 8);
    let name = FormulaName::Epi;
    let fresh = cat(RingSpec::zmod(4), 8);
    let all = fresh.eval_all(name, FormulaStyle::Literal).unwrap();
    let seq: Vec<bool> = (0..c.morphism_count())
        .map(|f| c.eval_with(name, FormulaStyle::Literal, &[f]).unwrap())
        .collect();
    assert_eq!(all.iter().map(|(_, v)| *v).collect::<Vec<_>>(), seq);
    let shared = Arc::new(cat(RingSpec::zmod(4), 8));
    let handles: Vec<_> = (0..4)
        .map(|t| {
            let c = shared.clone();
            std::thread::spawn(move || {
                (0..c.morphism_count())
                    .map(|f| {
                        c.eval_with(name, FormulaStyle::Literal, &[(f + t * 7) % c.morphism_count()])
                            .unwrap()
                    })
                    .collect::<Vec<_>>()
            })
        })
        .collect();
    for (t, h) in handles.into_iter().enumerate() {
        let got = h.join().unwrap();
        for (f, v) in got.into_iter().enumerate() {
            assert_eq!(v, seq[(f + t * 7) % seq.len()]);
        }
    }
}

#[test]
fn recovered_rings() {
    let caps = Caps::default();
    for (spec, bound) in [(RingSpec::zmod(2), 4), (RingSpec::zmod(4), 16), (RingSpec::zmod(3), 9)] {
        let c = cat(spec.clone(), bound);
        let r = regular(&c);
        let got = ring_from_endo_monoid(&c, r).unwrap();
        let want = end_ring(c.skeleton().module(r), &caps).unwrap();
        assert!(ring_isomorphic(&got, &want).is_some(), "{}", spec.label());
        assert!(ring_isomorphic(&got, c.skeleton().ring()).is_some());
    }
}

#[test]
fn graphs() {
    let c = cat(RingSpec::zmod(4), 16);
    let p = regular(&c);
    let pr = find_pairing(&c, p).unwrap();
    let table = graph_table(&c, &pr).unwrap();
    let ends = c.morphisms(p, p);
    // Gr is injective.
    let mut sorted = table.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), table.len());
    let zero = c.zero_morphism(p, p) - ends.start;
    assert_eq!(table[zero], c.identity(pr.sum));
    // Find the endomorphisms 1 and 2 = 1 + 1 by their maps.
    let m = c.skeleton().module(p);
    let gen = m.generators()[0];
    let one = c.identity(p);
    let two = ends
        .clone()
        .find(|&f| c.map(f)[gen] as usize == m.add(gen, gen))
        .unwrap();
    assert_eq!(
        c.compose(table[one - ends.start], table[one - ends.start]),
        Some(table[two - ends.start])
    );
}

#[test]
fn pairing_choice_does_not_matter() {
    let c = cat(RingSpec::zmod(2), 4);
    let p = regular(&c);
    let all = pairings(&c, p);
    assert_eq!(all.len(), 6);
    let first = ring_from_pairing(&c, &all[0]).unwrap();
    for pr in &all {
        let r = ring_from_pairing(&c, pr).unwrap();
        assert!(ring_isomorphic(&r, &first).is_some());
    }
    let small = cat(RingSpec::zmod(2), 2);
    assert!(matches!(
        ring_from_endo_monoid(&small, 1),
        Err(crate::Error::NoPairing(1))
    ));
}

fn at_p(c: &CategoryModel, phi: &crate::logic::Formula, p: usize) -> bool {
    let mut s = Assignment::new();
    s.insert(Var::new("P", "Obj"), p);
    evaluate(c.model(), phi, &s).unwrap()
}

#[test]
fn translated_sentences() {
    let caps = Caps::default();
    let sentences = [
        "forall x:R. mul(x, one) = x",
        "exists x:R. add(x, x) = zero & ~(x = zero)",
        "forall x:R. forall y:R. mul(x, y) = mul(y, x)",
        "forall x:R. exists y:R. add(x, y) = zero",
        "exists x:R. ~(x = zero) & mul(x, x) = zero",
    ];
    for (spec, bound) in [(RingSpec::zmod(2), 4), (RingSpec::zmod(3), 9), (RingSpec::zmod(4), 16)] {
        let c = cat(spec.clone(), bound);
        let r = ring(spec.clone());
        let p = regular(&c);
        let rm = crate::algebra::ring_model(&r);
        for text in sentences {
            let phi = parse_formula(text, &crate::algebra::ring_signature()).unwrap();
            let t = ring_sentence_to_category(&phi).unwrap();
            let want = evaluate(&rm, &phi, &Assignment::new()).unwrap();
            assert_eq!(at_p(&c, &t, p), want, "{} {text}", spec.label());
        }
    }
    let _ = caps;
    let open = parse_formula("mul(x, one) = x", &crate::algebra::ring_signature()).unwrap();
    assert!(matches!(
        ring_sentence_to_category(&open),
        Err(crate::Error::NotASentence(_))
    ));
}

#[test]
fn xi_examples() {
    let z2 = ring(RingSpec::zmod(2));
    let phi = crate::algebra::sentence_phi_r(&z2);
    let s = xi(&phi).unwrap();
    assert!(s.is_sentence());
    let c = cat(RingSpec::zmod(2), 4);
    assert!(evaluate(c.model(), &s, &Assignment::new()).unwrap());
    let c3 = cat(RingSpec::zmod(3), 9);
    assert!(!evaluate(c3.model(), &s, &Assignment::new()).unwrap());
}

#[test]
fn literal_formulas_are_well_formed() {
    let sig = category_signature();
    for name in [
        LiteralFormulaName::SumOmega,
        LiteralFormulaName::SumFin,
        LiteralFormulaName::Sum,
        LiteralFormulaName::Under,
        LiteralFormulaName::Und,
        LiteralFormulaName::Finite,
        LiteralFormulaName::Proobr,
    ] {
        let f = build_literal_formula(name);
        f.check(&sig).unwrap();
        let free: Vec<_> = f.free_variables().into_iter().collect();
        let mut want = name.parameters();
        want.sort();
        assert_eq!(free, want, "{name:?}");
    }
    for name in all_names() {
        for style in [FormulaStyle::Literal, FormulaStyle::ZeroTest] {
            let f = build_formula_with(name, style);
            f.check(&sig).unwrap();
            let mut want = name.parameters();
            want.sort();
            assert_eq!(f.free_variables().into_iter().collect::<Vec<_>>(), want);
        }
        let text = name.to_string();
        assert_eq!(text.parse::<FormulaName>().unwrap(), name);
    }
    assert!("nonsense".parse::<FormulaName>().is_err());
}

#[test]
fn truncated_subcategory() {
    let caps = Caps::default();
    let r = ring(RingSpec::zmod(6));
    let mods = vec![
        crate::module::zero_module(&r),
        regular_module(&r),
        free_module(&r, 2, &caps).unwrap(),
    ];
    let skel = Skeleton::from_modules(r.clone(), mods);
    let c = encode_category(&skel, &caps).unwrap();
    let got = ring_from_endo_monoid(&c, 1).unwrap();
    assert!(ring_isomorphic(&got, &r).is_some());
}
