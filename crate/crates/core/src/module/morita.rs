use super::finite::FiniteModule;
use super::hom::end_ring;
use super::predicates::{is_generator, is_projective};
use super::skeleton::build_skeleton;
use crate::algebra::{ring_isomorphic, FiniteRing};
use crate::caps::Caps;
use crate::error::Result;
use serde::Serialize;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub enum MoritaOutcome {
    /// A progenerator `P` over `s` with `End(P) ≅ r`; `iso[x]` is the image
    /// in `End(P)` of the element `x` of `r`.
    Similar {
        bound: usize,
        module: FiniteModule,
        iso: Vec<usize>,
    },
    /// Every progenerator up to the theoretical size bound was checked.
    NotSimilar { bound: usize },
    /// No witness up to `bound`, which is below the theoretical bound.
    Unknown { bound: usize, needed: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MoritaReport {
    pub verdict: String,
    pub bound: usize,
    pub witness_size: Option<usize>,
    pub witness: Option<String>,
}

impl MoritaOutcome {
    pub fn report(&self) -> MoritaReport {
        match self {
            MoritaOutcome::Similar { bound, module, .. } => MoritaReport {
                verdict: "similar".into(),
                bound: *bound,
                witness_size: Some(module.size()),
                witness: Some(module.name().to_string()),
            },
            MoritaOutcome::NotSimilar { bound } => MoritaReport {
                verdict: "not_similar".into(),
                bound: *bound,
                witness_size: None,
                witness: None,
            },
            MoritaOutcome::Unknown { bound, .. } => MoritaReport {
                verdict: "unknown".into(),
                bound: *bound,
                witness_size: None,
                witness: None,
            },
        }
    }
}

/// Looks for a progenerator `P` over `s` with `End(P) ≅ r` among modules
/// of at most `bound` elements (default: the theoretical bound `|S||R|`,
/// clipped to the skeleton cap).
pub fn morita_similar(r: &FiniteRing, s: &Arc<FiniteRing>, bound: Option<usize>, caps: &Caps) -> Result<MoritaOutcome> {
    let needed = s.size() * r.size();
    let bound = bound.unwrap_or(needed.min(caps.skeleton_bound));
    let skel = build_skeleton(s, bound, caps)?;
    for p in skel.modules() {
        if p.is_zero() || !is_generator(p, caps)? || !is_projective(p, caps)? {
            continue;
        }
        let end = end_ring(p, caps)?;
        if end.size() != r.size() {
            continue;
        }
        if let Some(iso) = ring_isomorphic(r, &end) {
            return Ok(MoritaOutcome::Similar {
                bound,
                module: p.clone(),
                iso,
            });
        }
    }
    if bound >= needed {
        Ok(MoritaOutcome::NotSimilar { bound })
    } else {
        Ok(MoritaOutcome::Unknown { bound, needed })
    }
}
