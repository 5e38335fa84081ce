use super::*;
use crate::algebra::{build_ring, ring_isomorphic, FiniteRing, RingSpec};
use crate::caps::Caps;
use std::sync::Arc;

fn ring(spec: RingSpec) -> Arc<FiniteRing> {
    Arc::new(build_ring(&spec, &Caps::default()).unwrap())
}

fn caps() -> Caps {
    Caps::default()
}

/// All additive, equivariant maps by brute force over every function.
fn brute_homs(a: &FiniteModule, b: &FiniteModule) -> usize {
    let total = b.size().pow(a.size() as u32);
    (0..total)
        .filter(|&code| {
            let mut c = code;
            let map: Vec<u16> = a
                .elements()
                .map(|_| {
                    let y = c % b.size();
                    c /= b.size();
                    y as u16
                })
                .collect();
            ModuleHom { map }.is_homomorphism(a, b)
        })
        .count()
}

fn brute_submodules(m: &FiniteModule) -> usize {
    (0u32..1 << m.size())
        .filter(|mask| {
            let mut s = fixedbitset::FixedBitSet::with_capacity(m.size());
            for x in m.elements() {
                if mask >> x & 1 == 1 {
                    s.insert(x);
                }
            }
            m.is_submodule(&s)
        })
        .count()
}

#[test]
fn free_modules() {
    let z2 = ring(RingSpec::zmod(2));
    assert_eq!(free_module(&z2, 2, &caps()).unwrap().size(), 4);
    assert!(free_module(&z2, 0, &caps()).unwrap().is_zero());
    let z4 = ring(RingSpec::zmod(4));
    let r = free_module(&z4, 1, &caps()).unwrap();
    for x in 0..4 {
        for s in 0..4 {
            assert_eq!(r.act(x, s), z4.mul(x, s));
        }
    }
}

#[test]
fn submodule_counts() {
    let z2 = ring(RingSpec::zmod(2));
    let v = free_module(&z2, 2, &caps()).unwrap();
    assert_eq!(submodules(&v, &caps()).unwrap().len(), 5);
    assert_eq!(brute_submodules(&v), 5);
    let z4 = ring(RingSpec::zmod(4));
    let r = regular_module(&z4);
    let subs = submodules(&r, &caps()).unwrap();
    assert_eq!(subs.len(), 3);
    assert_eq!(subs[1].ones().collect::<Vec<_>>(), vec![0, 2]);
    for spec in [RingSpec::zmod(6), RingSpec::poly_quotient(2, &[0, 0, 1])] {
        let rr = ring(spec);
        let m = free_module(&rr, 2, &caps()).unwrap();
        if m.size() <= 16 {
            assert_eq!(submodules(&m, &caps()).unwrap().len(), brute_submodules(&m));
        }
    }
}

#[test]
fn hom_counts_match_brute_force() {
    let z4 = ring(RingSpec::zmod(4));
    let skel = build_skeleton(&z4, 8, &caps()).unwrap();
    for a in skel.modules() {
        for b in skel.modules() {
            if b.size().pow(a.size() as u32) > 1 << 20 {
                continue;
            }
            assert_eq!(
                hom_set(a, b, &caps()).unwrap().len(),
                brute_homs(a, b),
                "{a:?} -> {b:?}"
            );
        }
    }
    let rr = regular_module(&z4);
    for m in skel.modules() {
        assert_eq!(hom_set(&rr, m, &caps()).unwrap().len(), m.size());
    }
    let z2 = skel.modules().iter().find(|m| m.size() == 2).unwrap();
    assert_eq!(hom_set(&rr, z2, &caps()).unwrap().len(), 2);
    assert_eq!(hom_set(&zero_module(&z4), z2, &caps()).unwrap().len(), 1);
}

#[test]
fn endomorphism_rings() {
    let z2 = ring(RingSpec::zmod(2));
    let v = free_module(&z2, 2, &caps()).unwrap();
    let end = end_ring(&v, &caps()).unwrap();
    let m2 = build_ring(&RingSpec::matrix(RingSpec::zmod(2), 2), &caps()).unwrap();
    assert!(ring_isomorphic(&end, &m2).is_some());
    for spec in [
        RingSpec::zmod(4),
        RingSpec::zmod(6),
        RingSpec::poly_quotient(2, &[1, 1, 1]),
        RingSpec::matrix(RingSpec::zmod(2), 2),
    ] {
        let r = ring(spec);
        let end = end_ring(&regular_module(&r), &caps()).unwrap();
        assert!(ring_isomorphic(&end, &r).is_some(), "{}", r.name());
    }
    assert_eq!(end_ring(&zero_module(&z2), &caps()).unwrap().size(), 1);
}

#[test]
fn predicate_examples() {
    let z4 = ring(RingSpec::zmod(4));
    let p = module_predicates(&regular_module(&z4), &caps()).unwrap();
    assert_eq!(p.progenerator, Verdict::True);
    let skel = build_skeleton(&z4, 4, &caps()).unwrap();
    let z2 = skel.modules().iter().find(|m| m.size() == 2).unwrap();
    let p = module_predicates(z2, &caps()).unwrap();
    assert_eq!((p.simple, p.projective), (Verdict::True, Verdict::False));
    let f2 = ring(RingSpec::zmod(2));
    let v = free_module(&f2, 2, &caps()).unwrap();
    let p = module_predicates(&v, &caps()).unwrap();
    assert_eq!((p.generator, p.simple), (Verdict::True, Verdict::False));
}

#[test]
fn baer_agrees_with_skeleton_lifting() {
    for spec in [
        RingSpec::zmod(4),
        RingSpec::zmod(6),
        RingSpec::poly_quotient(2, &[0, 0, 1]),
    ] {
        let r = ring(spec);
        let skel = build_skeleton(&r, 8, &caps()).unwrap();
        for m in skel.modules() {
            assert_eq!(
                is_injective(m, &caps()).unwrap(),
                is_injective_relative(m, &skel, &caps()).unwrap(),
                "{} {m:?}",
                r.name()
            );
        }
    }
}

#[test]
fn skeleton_examples() {
    let f2 = ring(RingSpec::zmod(2));
    assert_eq!(build_skeleton(&f2, 4, &caps()).unwrap().len(), 3);
    let z4 = ring(RingSpec::zmod(4));
    let s = build_skeleton(&z4, 4, &caps()).unwrap();
    assert_eq!(
        s.modules().iter().map(FiniteModule::size).collect::<Vec<_>>(),
        vec![1, 2, 4, 4]
    );
    assert_eq!(build_skeleton(&z4, 1, &caps()).unwrap().len(), 1);
    // Z4-modules of order at most 16: 1, 2, 4, 4, 8, 8, 16, 16, 16.
    assert_eq!(build_skeleton(&z4, 16, &caps()).unwrap().len(), 9);
    let m2 = ring(RingSpec::matrix(RingSpec::zmod(2), 2));
    assert_eq!(
        build_skeleton(&m2, 16, &caps())
            .unwrap()
            .modules()
            .iter()
            .map(FiniteModule::size)
            .collect::<Vec<_>>(),
        vec![1, 4, 16]
    );
}

#[test]
fn skeleton_is_closed_under_sums() {
    let z6 = ring(RingSpec::zmod(6));
    let s = build_skeleton(&z6, 12, &caps()).unwrap();
    for a in s.modules() {
        for b in s.modules() {
            if a.size() * b.size() <= 12 {
                let sum = direct_sum(a, b, &caps()).unwrap();
                assert!(s.find(&sum, &caps()).unwrap().is_some());
            }
        }
    }
}

#[test]
fn morita_examples() {
    let f2 = ring(RingSpec::zmod(2));
    let f3 = ring(RingSpec::zmod(3));
    let m2 = ring(RingSpec::matrix(RingSpec::zmod(2), 2));
    match morita_similar(&f2, &m2, None, &caps()).unwrap() {
        MoritaOutcome::Similar { module, .. } => assert_eq!(module.size(), 4),
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        morita_similar(&f2, &f3, None, &caps()).unwrap(),
        MoritaOutcome::NotSimilar { .. }
    ));
    let z4 = ring(RingSpec::zmod(4));
    match morita_similar(&z4, &z4, None, &caps()).unwrap() {
        MoritaOutcome::Similar { module, .. } => assert_eq!(module.size(), 4),
        other => panic!("{other:?}"),
    }
}
