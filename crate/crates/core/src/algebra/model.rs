use super::ring::FiniteRing;
use crate::logic::{FiniteModel, ModelBuilder, Signature, SignatureBuilder};
use std::sync::{Arc, OnceLock};

/// The one-sorted ring language: sort `R`, binary `add` and `mul`,
/// constants `zero` and `one`.
pub fn ring_signature() -> Arc<Signature> {
    static SIG: OnceLock<Arc<Signature>> = OnceLock::new();
    SIG.get_or_init(|| {
        Arc::new(
            SignatureBuilder::new()
                .sort("R")
                .function("add", &["R", "R"], "R")
                .function("mul", &["R", "R"], "R")
                .constant("zero", "R")
                .constant("one", "R")
                .build()
                .expect("ring signature"),
        )
    })
    .clone()
}

/// `r` as a structure of the ring language.
pub fn ring_model(r: &FiniteRing) -> FiniteModel {
    let n = r.size();
    let table = |op: &dyn Fn(usize, usize) -> usize| (0..n * n).map(|i| op(i % n, i / n)).collect::<Vec<_>>();
    ModelBuilder::new(ring_signature())
        .carrier("R", n)
        .and_then(|b| b.function("add", table(&|a, b| r.add(a, b))))
        .and_then(|b| b.function("mul", table(&|a, b| r.mul(a, b))))
        .and_then(|b| b.constant("zero", r.zero()))
        .and_then(|b| b.constant("one", r.one()))
        .and_then(|b| b.build())
        .expect("ring tables form a valid model")
}
