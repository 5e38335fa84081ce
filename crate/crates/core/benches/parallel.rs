use criterion::{criterion_group, criterion_main, Criterion};
use modeq::algebra::{build_ring, ring_model, sentence_phi_r, FiniteRing};
use modeq::catalog::default_catalog;
use modeq::logic::{evaluate, Assignment};
use modeq::module::{build_skeleton, module_predicates, FiniteModule};
use modeq::{par, Caps};
use std::sync::Arc;

fn rings(caps: &Caps) -> Vec<FiniteRing> {
    default_catalog()
        .iter()
        .map(|e| build_ring(&e.spec, caps).unwrap())
        .collect()
}

/// Every `φ_R` against every catalog ring.
fn phi_table(rings: &[FiniteRing], map: impl Fn(usize, &(dyn Fn(usize) -> bool + Sync)) -> Vec<bool>) -> usize {
    let n = rings.len();
    let cell = |k: usize| {
        let (i, j) = (k / n, k % n);
        evaluate(&ring_model(&rings[j]), &sentence_phi_r(&rings[i]), &Assignment::new()).unwrap()
    };
    map(n * n, &cell).into_iter().filter(|&b| b).count()
}

fn predicates(modules: &[FiniteModule], map: impl Fn(&[FiniteModule]) -> Vec<bool>) -> usize {
    map(modules).into_iter().filter(|&b| b).count()
}

fn bench(c: &mut Criterion) {
    let caps = Caps::generous();
    let rs = rings(&caps);
    let mut g = c.benchmark_group("phi_table");
    g.sample_size(10);
    g.bench_function("parallel", |b| b.iter(|| phi_table(&rs, |n, f| par::map_range(n, f))));
    g.bench_function("sequential", |b| {
        b.iter(|| phi_table(&rs, |n, f| par::seq::map_range(n, f)))
    });
    g.finish();

    let z4 = Arc::new(build_ring(&modeq::algebra::RingSpec::zmod(4), &caps).unwrap());
    let skel = build_skeleton(&z4, 64, &caps).unwrap();
    let projective = |m: &FiniteModule| module_predicates(m, &caps).unwrap().projective.known() == Some(true);
    let mut g = c.benchmark_group("module_predicates");
    g.sample_size(10);
    g.bench_function("parallel", |b| {
        b.iter(|| predicates(skel.modules(), |ms| par::map(ms, projective)))
    });
    g.bench_function("sequential", |b| {
        b.iter(|| predicates(skel.modules(), |ms| par::seq::map(ms, projective)))
    });
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
