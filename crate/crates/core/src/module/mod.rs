//! Finite right modules, homomorphisms, skeletons of small modules and the
//! algebraic oracles used to check the categorical formulas.

mod finite;
mod hom;
mod morita;
mod predicates;
mod skeleton;
mod sub;

pub use finite::{direct_sum, free_module, regular_module, zero_module, FiniteModule, ModuleDoc};
pub use hom::{end_ring, end_ring_with_homs, hom_set, module_isomorphic, HomSet, ModuleHom, Presentation};
pub use morita::{morita_similar, MoritaOutcome, MoritaReport};
pub use predicates::{
    is_cogenerator_relative, is_generator, is_injective, is_injective_relative, is_projective, is_simple,
    module_predicates, trace_ideal, ModulePredicates, Verdict,
};
pub use skeleton::{build_skeleton, Skeleton};
pub use sub::submodules;

#[cfg(test)]
mod tests;
