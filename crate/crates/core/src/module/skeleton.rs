//! Isomorphism-class representatives of small modules.
//!
//! Every nonzero module `M` has a proper submodule `N` and an `x ∉ N` with
//! `M = N + xR`. With `I = {r : xr ∈ N}` and `φ(i) = xi`, the map
//! `(n, r) ↦ n + xr` identifies `M` with `(N ⊕ R) / {(φ(i), -i)}`, and
//! `|M| = |N| |R| / |I|`. Starting from the zero module and applying this
//! construction to every representative, right ideal and homomorphism
//! therefore reaches every module up to the bound.

use super::finite::{direct_sum, regular_module, zero_module, FiniteModule};
use super::hom::{hom_set, module_isomorphic, HomSet, Presentation};
use super::sub::submodules;
use crate::algebra::FiniteRing;
use crate::caps::Caps;
use crate::error::Result;
use fixedbitset::FixedBitSet;
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct Skeleton {
    ring: Arc<FiniteRing>,
    bound: usize,
    modules: Vec<FiniteModule>,
    complete: bool,
}

impl Skeleton {
    /// A full subcategory on explicitly chosen, pairwise non-isomorphic
    /// modules. Such a skeleton makes no completeness claim.
    pub fn from_modules(ring: Arc<FiniteRing>, modules: Vec<FiniteModule>) -> Skeleton {
        let bound = modules.iter().map(FiniteModule::size).max().unwrap_or(1);
        Skeleton {
            ring,
            bound,
            modules,
            complete: false,
        }
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Whether this holds every module up to the bound.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn modules(&self) -> &[FiniteModule] {
        &self.modules
    }

    pub fn len(&self) -> usize {
        self.modules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modules.is_empty()
    }

    pub fn module(&self, i: usize) -> &FiniteModule {
        &self.modules[i]
    }

    /// Index of the representative isomorphic to `m`.
    pub fn find(&self, m: &FiniteModule, caps: &Caps) -> Result<Option<usize>> {
        for (i, rep) in self.modules.iter().enumerate() {
            if module_isomorphic(m, rep, caps)?.is_some() {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Hom sets between every ordered pair of representatives, indexed
    /// `[source][target]`, together with the presentations used.
    pub fn hom_tables(&self, caps: &Caps) -> Result<(Vec<Presentation>, Vec<Vec<HomSet>>)> {
        let pres = self
            .modules
            .iter()
            .map(|m| Presentation::new(m, caps))
            .collect::<Result<Vec<_>>>()?;
        let n = self.modules.len();
        let flat = crate::par::map_range(n * n, |k| {
            let (a, b) = (k / n, k % n);
            HomSet::new(&self.modules[a], &self.modules[b], &pres[a], caps)
        });
        let mut rows = Vec::with_capacity(n);
        let mut it = flat.into_iter();
        for _ in 0..n {
            rows.push(it.by_ref().take(n).collect::<Result<Vec<_>>>()?);
        }
        Ok((pres, rows))
    }
}

/// `(N ⊕ R) / {(φ(i), -i) : i ∈ I}` for a right ideal `I` (given by its
/// elements) and `φ : I → N` (given by values on those elements).
fn extension(
    n: &FiniteModule,
    ring: &Arc<FiniteRing>,
    ideal: &[usize],
    phi: &[u16],
    caps: &Caps,
) -> Result<FiniteModule> {
    let rr = regular_module(ring);
    let sum = direct_sum(
        n,
        &rr,
        &Caps {
            module_size: usize::MAX,
            ..*caps
        },
    )?;
    let mut kernel = FixedBitSet::with_capacity(sum.size());
    for (k, &i) in ideal.iter().enumerate() {
        kernel.insert(n.pair_index(phi[k] as usize, ring.neg(i)));
    }
    Ok(sum.quotient(&kernel).0)
}

/// Representatives of all right `R`-modules with at most `bound` elements,
/// sorted by size and then by discovery order.
pub fn build_skeleton(ring: &Arc<FiniteRing>, bound: usize, caps: &Caps) -> Result<Skeleton> {
    caps.check("skeleton_bound", bound as u128)?;
    let caps = Caps {
        module_size: caps.module_size.max(bound),
        ..*caps
    };
    let rr = regular_module(ring);
    let ideals: Vec<(Vec<usize>, FiniteModule)> = submodules(&rr, &Caps::generous())?
        .into_iter()
        .filter(|s| s.count_ones(..) < ring.size())
        .map(|s| {
            let (m, elems) = rr.submodule(&s);
            (elems, m)
        })
        .collect();
    let mut reps: Vec<FiniteModule> = vec![zero_module(ring)];
    let mut by_key: HashMap<(usize, Vec<(usize, usize)>), Vec<usize>> = HashMap::new();
    by_key.entry(reps[0].invariant()).or_default().push(0);
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let jobs: Vec<(usize, usize)> = frontier
            .iter()
            .flat_map(|&n| (0..ideals.len()).map(move |i| (n, i)))
            .filter(|&(n, i)| reps[n].size() * ring.size() / ideals[i].0.len() <= bound)
            .collect();
        let reps_ref = &reps;
        let ideals_ref = &ideals;
        let produced = crate::par::map(&jobs, |&(n, i)| -> Result<Vec<FiniteModule>> {
            let (elems, imod) = &ideals_ref[i];
            let nmod = &reps_ref[n];
            let mut out = Vec::new();
            for phi in hom_set(imod, nmod, &caps)? {
                out.push(extension(nmod, ring, elems, &phi.map, &caps)?);
            }
            Ok(out)
        });
        let mut next = Vec::new();
        for batch in produced {
            for m in batch? {
                let key = m.invariant();
                let mut known = false;
                for &j in by_key.get(&key).map(Vec::as_slice).unwrap_or(&[]) {
                    if module_isomorphic(&m, &reps[j], &caps)?.is_some() {
                        known = true;
                        break;
                    }
                }
                if !known {
                    let j = reps.len();
                    by_key.entry(key).or_default().push(j);
                    reps.push(m);
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    let mut order: Vec<usize> = (0..reps.len()).collect();
    order.sort_by_key(|&i| (reps[i].size(), i));
    let mut modules: Vec<FiniteModule> = order.into_iter().map(|i| reps[i].clone()).collect();
    for (i, m) in modules.iter_mut().enumerate() {
        if m.size() == 1 {
            *m = m.clone().with_name("0");
        } else {
            *m = m.clone().with_name(format!("X{i}"));
        }
    }
    if ring.size() <= bound {
        if let Some(i) = (Skeleton {
            ring: ring.clone(),
            bound,
            modules: modules.clone(),
            complete: true,
        })
        .find(&rr, &caps)?
        {
            modules[i] = modules[i].clone().with_name("R");
        }
    }
    Ok(Skeleton {
        ring: ring.clone(),
        bound,
        modules,
        complete: true,
    })
}
