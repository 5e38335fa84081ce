use modeq::algebra::{build_ring, ring_features, ring_isomorphic, ring_model, FiniteRing, RingSpec};
use modeq::groups::gl_model;
use modeq::lattice::{lattice_add, lattice_mul, projective_space, Copies, Interpretation};
use modeq::module::{free_module, submodules};
use modeq::ultra::{enumerate_filters, filter_product, Filter};
use modeq::Caps;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn ring(spec: RingSpec) -> Arc<FiniteRing> {
    Arc::new(build_ring(&spec, &Caps::default()).unwrap())
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn units_of_zmod_are_coprime_residues(n in 2usize..40) {
        let r = ring(RingSpec::zmod(n));
        let want: Vec<usize> = (0..n).filter(|&k| gcd(k, n) == 1).collect();
        prop_assert_eq!(ring_features(&r).units, want);
    }

    #[test]
    fn chinese_remainder(a in 2usize..8, b in 2usize..8) {
        let prod = ring(RingSpec::product(RingSpec::zmod(a), RingSpec::zmod(b)));
        let cyclic = ring(RingSpec::zmod(a * b));
        prop_assert_eq!(ring_isomorphic(&prod, &cyclic).is_some(), gcd(a, b) == 1);
    }

    #[test]
    fn opposite_of_commutative_is_itself(n in 2usize..12) {
        let r = ring(RingSpec::zmod(n));
        let op = ring(RingSpec::opposite(RingSpec::zmod(n)));
        prop_assert!(ring_isomorphic(&r, &op).is_some());
    }

    #[test]
    fn principal_filter_products_are_powers(n in 1usize..5, mask in 1usize..16, k in 2usize..5) {
        let y: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        prop_assume!(!y.is_empty());
        let r = ring(RingSpec::zmod(k));
        let d = Filter::principal(n, &y).unwrap();
        let p = filter_product(&vec![ring_model(&r); n], &d, &Caps::default()).unwrap();
        prop_assert_eq!(p.model.carrier(0), k.pow(y.len() as u32));
    }

    #[test]
    fn lattice_meet_and_join_are_intersection_and_sum(seed in any::<u64>()) {
        let r = ring(RingSpec::zmod(4));
        let ps = projective_space(&r, 2, &Caps::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (rng.gen_range(0..ps.len()), rng.gen_range(0..ps.len()));
        let (sa, sb) = (ps.submodule(a), ps.submodule(b));
        let mut inter = sa.clone();
        inter.intersect_with(sb);
        prop_assert_eq!(ps.submodule(ps.meet(a, b)), &inter);
        prop_assert_eq!(ps.submodule(ps.join(a, b)), &ps.module().sum_sets(sa, sb));
    }
}

#[test]
fn filters_on_finite_sets_are_principal() {
    for n in 1..=5 {
        let e = enumerate_filters(n, &Caps::default()).unwrap();
        // One filter per subset, the empty generator giving the improper one.
        assert_eq!(e.filters.len(), 1 << n);
        assert_eq!(e.ultrafilters.len(), n);
    }
}

#[test]
fn general_linear_group_orders() {
    // M3(F2) has 512 elements.
    let caps = Caps::generous();
    for (spec, n, order) in [
        (RingSpec::zmod(2), 2, 6),
        (RingSpec::zmod(3), 2, 48),
        (RingSpec::zmod(4), 2, 96),
        (RingSpec::zmod(2), 3, 168),
        (RingSpec::poly_quotient(2, &[1, 1, 1]), 2, 180),
    ] {
        let r = build_ring(&spec, &caps).unwrap();
        assert_eq!(
            gl_model(&r, n, &caps).unwrap().order(),
            order,
            "GL_{n}({})",
            spec.label()
        );
    }
}

#[test]
fn submodule_counts_of_free_modules() {
    // Gaussian binomial sums over F2 and F3, and the count for Z4^2.
    let caps = Caps::generous();
    for (spec, n, count) in [
        (RingSpec::zmod(2), 2, 5),
        (RingSpec::zmod(2), 3, 16),
        (RingSpec::zmod(2), 4, 67),
        (RingSpec::zmod(3), 2, 6),
        (RingSpec::zmod(3), 3, 28),
        (RingSpec::zmod(4), 2, 15),
    ] {
        let r = ring(spec.clone());
        let m = free_module(&r, n, &caps).unwrap();
        assert_eq!(submodules(&m, &caps).unwrap().len(), count, "{}^{n}", spec.label());
    }
}

#[test]
fn lattice_products_over_matrix_ring() {
    let caps = Caps::generous();
    let r = ring(RingSpec::matrix(RingSpec::zmod(2), 2));
    let ps = projective_space(&r, 3, &caps).unwrap();
    assert_eq!(ps.len(), 2825);
    let it = Interpretation::new(&ps, Copies::standard(&ps, 1, &caps).unwrap(), &caps).unwrap();
    assert_eq!(it.end.size(), 16);
    assert!(ring_isomorphic(&it.end, &r).is_some());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut noncommuting = 0;
    for _ in 0..10 {
        let (q, s) = (rng.gen_range(0..16), rng.gen_range(0..16));
        let gq = it.graph_submodule(q).unwrap();
        let gs = it.graph_submodule(s).unwrap();
        assert_eq!(lattice_mul(&it, gq, gs).unwrap().q, it.end.mul(q, s));
        assert_eq!(lattice_add(&it, gq, gs).unwrap().q, it.end.add(q, s));
        noncommuting += usize::from(it.end.mul(q, s) != it.end.mul(s, q));
    }
    // The sample exercises the order of multiplication.
    assert!(noncommuting > 0);
}
