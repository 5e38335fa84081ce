//! Algebraic oracles for the categorical properties of a module.

use super::finite::{free_module, regular_module, FiniteModule};
use super::hom::{hom_set, HomSet, Presentation};
use super::skeleton::Skeleton;
use super::sub::submodules;
use crate::caps::Caps;
use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    True,
    False,
    /// A search bound was exhausted before the question was settled.
    Unknown,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }

    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::False, _) | (_, Verdict::False) => Verdict::False,
            (Verdict::True, Verdict::True) => Verdict::True,
            _ => Verdict::Unknown,
        }
    }

    pub fn known(self) -> Option<bool> {
        match self {
            Verdict::True => Some(true),
            Verdict::False => Some(false),
            Verdict::Unknown => None,
        }
    }
}

fn settle(r: Result<bool>) -> Result<Verdict> {
    match r {
        Ok(b) => Ok(Verdict::from_bool(b)),
        Err(Error::CapExceeded { .. }) => Ok(Verdict::Unknown),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModulePredicates {
    pub simple: Verdict,
    pub projective: Verdict,
    pub injective: Verdict,
    pub generator: Verdict,
    pub progenerator: Verdict,
}

pub fn is_simple(m: &FiniteModule, caps: &Caps) -> Result<bool> {
    Ok(!m.is_zero() && submodules(m, caps)?.len() == 2)
}

/// `m` is projective iff the canonical epimorphism `R^g → m` onto a
/// generating set splits.
pub fn is_projective(m: &FiniteModule, caps: &Caps) -> Result<bool> {
    let pres = Presentation::new(m, caps)?;
    let g = pres.len();
    let ring = m.ring();
    let free = free_module(ring, g, caps)?;
    let nr = ring.size();
    // π(c_0, …, c_{g-1}) = Σ gen_i c_i; section candidates are preimages.
    let mut cands = vec![Vec::new(); g];
    for t in free.elements() {
        let mut x = t;
        let mut value = m.zero();
        for &gen in &pres.gens {
            value = m.add(value, m.act(gen, x % nr));
            x /= nr;
        }
        if let Some(i) = pres.gens.iter().position(|&gen| gen == value) {
            cands[i].push(t);
        }
    }
    // Duplicate generators cannot occur: they are chosen outside the span.
    Ok(pres.search(&free, &cands, &mut Vec::new(), &mut |_| true))
}

/// Baer's criterion: every homomorphism from a right ideal into `m` is
/// left multiplication by an element of `m`.
pub fn is_injective(m: &FiniteModule, caps: &Caps) -> Result<bool> {
    let ring = m.ring();
    let rr = regular_module(ring);
    for ideal in submodules(&rr, caps)? {
        let (imod, elems) = rr.submodule(&ideal);
        for f in hom_set(&imod, m, caps)? {
            let extends = m
                .elements()
                .any(|x| elems.iter().enumerate().all(|(k, &i)| m.act(x, i) == f.apply(k)));
            if !extends {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Injectivity relative to a skeleton: every map into `m` from the source
/// of a monomorphism between representatives extends along it.
pub fn is_injective_relative(m: &FiniteModule, skel: &Skeleton, caps: &Caps) -> Result<bool> {
    let pres: Vec<Presentation> = skel
        .modules()
        .iter()
        .map(|a| Presentation::new(a, caps))
        .collect::<Result<_>>()?;
    for (ia, a) in skel.modules().iter().enumerate() {
        let into_m = HomSet::new(a, m, &pres[ia], caps)?;
        for (ib, b) in skel.modules().iter().enumerate() {
            let ab = HomSet::new(a, b, &pres[ia], caps)?;
            let bm = HomSet::new(b, m, &pres[ib], caps)?;
            for u in 0..ab.len() {
                if !ab.hom(u).is_injective() {
                    continue;
                }
                for f in 0..into_m.len() {
                    let lifts =
                        (0..bm.len()).any(|g| a.elements().all(|x| bm.apply(g, ab.apply(u, x)) == into_m.apply(f, x)));
                    if !lifts {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// The trace ideal `Σ f(m)` over all `f : m → R_R`, as a set of ring
/// elements.
pub fn trace_ideal(m: &FiniteModule, caps: &Caps) -> Result<Vec<usize>> {
    let rr = regular_module(m.ring());
    let homs = hom_set(m, &rr, caps)?;
    let images = homs.iter().flat_map(|f| f.map.iter().map(|&y| y as usize));
    Ok(rr.span(images).ones().collect())
}

/// `m` is a generator iff some `m^n` maps onto `R`, iff the trace ideal is
/// all of `R`.
pub fn is_generator(m: &FiniteModule, caps: &Caps) -> Result<bool> {
    Ok(trace_ideal(m, caps)?.len() == m.ring().size())
}

/// Cogenerator relative to a skeleton: every nonzero element of every
/// representative survives some map into `m`.
pub fn is_cogenerator_relative(m: &FiniteModule, skel: &Skeleton, caps: &Caps) -> Result<bool> {
    for x in skel.modules() {
        let homs = hom_set(x, m, caps)?;
        for e in x.elements().filter(|&e| e != x.zero()) {
            if !homs.iter().any(|f| f.apply(e) != m.zero()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn module_predicates(m: &FiniteModule, caps: &Caps) -> Result<ModulePredicates> {
    let simple = settle(is_simple(m, caps))?;
    let projective = settle(is_projective(m, caps))?;
    let injective = settle(is_injective(m, caps))?;
    let generator = settle(is_generator(m, caps))?;
    Ok(ModulePredicates {
        simple,
        projective,
        injective,
        generator,
        progenerator: projective.and(generator),
    })
}
