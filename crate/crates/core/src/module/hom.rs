//! Homomorphism enumeration.
//!
//! A module `a` is presented by a small generating set `g_1..g_k` and the
//! generators of the kernel of `R^k → a`. A homomorphism out of `a` is then
//! exactly an assignment of images to the generators that kills every
//! kernel generator.

use super::finite::FiniteModule;
use crate::algebra::FiniteRing;
use crate::caps::Caps;
use crate::error::{Error, Result};
use std::collections::{HashMap, HashSet};

#[derive(Debug, Clone)]
pub struct Presentation {
    pub gens: Vec<usize>,
    /// Kernel generators, grouped by the largest index with a nonzero
    /// coefficient.
    relations: Vec<Vec<Vec<usize>>>,
    /// For each element, coefficients `r` with `Σ g_i r_i = x`.
    coords: Vec<Vec<usize>>,
}

impl Presentation {
    pub fn new(a: &FiniteModule, caps: &Caps) -> Result<Self> {
        let ring = a.ring();
        let gens = a.generators();
        let k = gens.len();
        let nr = ring.size();
        caps.check("enumeration", (nr as u128).saturating_pow(k as u32))?;
        let mut coords: Vec<Option<Vec<usize>>> = vec![None; a.size()];
        let mut kernel = Vec::new();
        let mut t = vec![0usize; k];
        loop {
            let value = t
                .iter()
                .zip(&gens)
                .fold(a.zero(), |acc, (&r, &g)| a.add(acc, a.act(g, r)));
            if coords[value].is_none() {
                coords[value] = Some(t.clone());
            }
            if value == a.zero() {
                kernel.push(t.clone());
            }
            let mut j = 0;
            while j < k {
                t[j] += 1;
                if t[j] < nr {
                    break;
                }
                t[j] = 0;
                j += 1;
            }
            if j == k {
                break;
            }
        }
        let relations = kernel_generators(ring, k, &kernel);
        let mut grouped = vec![Vec::new(); k];
        for rel in relations {
            if let Some(top) = rel.iter().rposition(|&r| r != ring.zero()) {
                grouped[top].push(rel);
            }
        }
        Ok(Presentation {
            gens,
            relations: grouped,
            coords: coords.into_iter().map(|c| c.expect("generators span")).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn coords(&self, x: usize) -> &[usize] {
        &self.coords[x]
    }

    pub fn relation_count(&self) -> usize {
        self.relations.iter().map(Vec::len).sum()
    }

    /// Value at `x` of the homomorphism sending generator `i` to `images[i]`.
    pub fn extend(&self, b: &FiniteModule, images: &[usize], x: usize) -> usize {
        self.coords[x]
            .iter()
            .zip(images)
            .fold(b.zero(), |acc, (&r, &y)| b.add(acc, b.act(y, r)))
    }

    fn relations_hold(&self, b: &FiniteModule, images: &[usize], depth: usize) -> bool {
        self.relations[depth].iter().all(|rel| {
            rel.iter()
                .zip(images)
                .fold(b.zero(), |acc, (&r, &y)| b.add(acc, b.act(y, r)))
                == b.zero()
        })
    }

    /// Depth-first search over generator images drawn from `cands`,
    /// calling `visit` on every valid assignment until it returns true.
    pub fn search(
        &self,
        b: &FiniteModule,
        cands: &[Vec<usize>],
        prefix: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let depth = prefix.len();
        if depth == self.gens.len() {
            return visit(prefix);
        }
        for &y in &cands[depth] {
            prefix.push(y);
            if self.relations_hold(b, prefix, depth) && self.search(b, cands, prefix, visit) {
                prefix.pop();
                return true;
            }
            prefix.pop();
        }
        false
    }
}

fn kernel_generators(ring: &FiniteRing, k: usize, kernel: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let zero = vec![ring.zero(); k];
    let mut span: HashSet<Vec<usize>> = HashSet::new();
    span.insert(zero);
    let mut gens = Vec::new();
    for rel in kernel {
        if span.contains(rel) {
            continue;
        }
        gens.push(rel.clone());
        let multiples: Vec<Vec<usize>> = ring
            .elements()
            .map(|r| rel.iter().map(|&c| ring.mul(c, r)).collect())
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        let mut next = HashSet::with_capacity(span.len() * multiples.len());
        for s in &span {
            for m in &multiples {
                next.insert(s.iter().zip(m).map(|(&x, &y)| ring.add(x, y)).collect::<Vec<_>>());
            }
        }
        span = next;
    }
    gens
}

/// An element map between modules.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModuleHom {
    pub map: Vec<u16>,
}

impl ModuleHom {
    pub fn apply(&self, x: usize) -> usize {
        self.map[x] as usize
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = HashSet::new();
        self.map.iter().all(|y| seen.insert(*y))
    }

    pub fn is_surjective(&self, target: &FiniteModule) -> bool {
        let mut hit = vec![false; target.size()];
        for &y in &self.map {
            hit[y as usize] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ModuleHom) -> ModuleHom {
        ModuleHom {
            map: other.map.iter().map(|&y| self.map[y as usize]).collect(),
        }
    }

    /// Checks additivity and equivariance.
    pub fn is_homomorphism(&self, a: &FiniteModule, b: &FiniteModule) -> bool {
        self.map.len() == a.size()
            && a.elements().all(|x| {
                a.elements()
                    .all(|y| self.apply(a.add(x, y)) == b.add(self.apply(x), self.apply(y)))
                    && a.ring()
                        .elements()
                        .all(|r| self.apply(a.act(x, r)) == b.act(self.apply(x), r))
            })
    }
}

#[derive(Debug, Clone)]
enum Lookup {
    Dense(Vec<u32>),
    Sparse(HashMap<Vec<u16>, u32>),
}

/// All homomorphisms `a → b`, indexed by generator images.
#[derive(Debug, Clone)]
pub struct HomSet {
    source_size: usize,
    target_size: usize,
    gens: usize,
    images: Vec<u16>,
    maps: Vec<u16>,
    lookup: Lookup,
}

const DENSE_LIMIT: u128 = 1 << 22;

impl HomSet {
    pub fn new(a: &FiniteModule, b: &FiniteModule, pres: &Presentation, caps: &Caps) -> Result<HomSet> {
        let g = pres.len();
        caps.check("enumeration", (b.size() as u128).saturating_pow(g as u32))?;
        let all: Vec<usize> = b.elements().collect();
        let cands = vec![all; g];
        let found: Vec<Vec<u16>> = if g == 0 {
            vec![Vec::new()]
        } else {
            crate::par::flat_map_range(b.size(), |y0| {
                let mut out = Vec::new();
                let mut prefix = vec![y0];
                if pres.relations_hold(b, &prefix, 0) {
                    pres.search(b, &cands, &mut prefix, &mut |imgs| {
                        out.push(imgs.iter().map(|&y| y as u16).collect());
                        false
                    });
                }
                out
            })
        };
        caps.check("morphisms", found.len() as u128)?;
        let mut images = Vec::with_capacity(found.len() * g);
        let mut maps = Vec::with_capacity(found.len() * a.size());
        let mut buf = vec![0usize; g];
        for imgs in &found {
            images.extend_from_slice(imgs);
            for (slot, &y) in buf.iter_mut().zip(imgs) {
                *slot = y as usize;
            }
            for x in a.elements() {
                maps.push(pres.extend(b, &buf, x) as u16);
            }
        }
        let space = (b.size() as u128).saturating_pow(g as u32);
        let lookup = if space <= DENSE_LIMIT {
            let mut dense = vec![u32::MAX; space as usize];
            for (i, imgs) in found.iter().enumerate() {
                dense[dense_key(b.size(), imgs.iter().map(|&y| y as usize))] = i as u32;
            }
            Lookup::Dense(dense)
        } else {
            Lookup::Sparse(found.iter().enumerate().map(|(i, v)| (v.clone(), i as u32)).collect())
        };
        Ok(HomSet {
            source_size: a.size(),
            target_size: b.size(),
            gens: g,
            images,
            maps,
            lookup,
        })
    }

    pub fn len(&self) -> usize {
        if self.source_size == 0 {
            0
        } else {
            self.maps.len() / self.source_size
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn source_size(&self) -> usize {
        self.source_size
    }

    pub fn target_size(&self) -> usize {
        self.target_size
    }

    pub fn generator_count(&self) -> usize {
        self.gens
    }

    pub fn map(&self, i: usize) -> &[u16] {
        &self.maps[i * self.source_size..(i + 1) * self.source_size]
    }

    #[inline]
    pub fn apply(&self, i: usize, x: usize) -> usize {
        self.maps[i * self.source_size + x] as usize
    }

    pub fn images(&self, i: usize) -> &[u16] {
        &self.images[i * self.gens..(i + 1) * self.gens]
    }

    pub fn hom(&self, i: usize) -> ModuleHom {
        ModuleHom {
            map: self.map(i).to_vec(),
        }
    }

    /// Index of the homomorphism with the given generator images.
    pub fn index_of(&self, images: impl Iterator<Item = usize> + Clone) -> Option<usize> {
        let found = match &self.lookup {
            Lookup::Dense(d) => d[dense_key(self.target_size, images)],
            Lookup::Sparse(h) => *h.get(&images.map(|y| y as u16).collect::<Vec<_>>())?,
        };
        (found != u32::MAX).then_some(found as usize)
    }

    /// Index of the homomorphism with the given element map.
    pub fn index_of_map(&self, map: &[u16], gens: &[usize]) -> Option<usize> {
        let i = self.index_of(gens.iter().map(|&g| map[g] as usize))?;
        (self.map(i) == map).then_some(i)
    }
}

fn dense_key(base: usize, images: impl Iterator<Item = usize>) -> usize {
    let mut key = 0usize;
    let mut mult = 1usize;
    for y in images {
        key += y * mult;
        mult *= base;
    }
    key
}

/// Every homomorphism `a → b`.
pub fn hom_set(a: &FiniteModule, b: &FiniteModule, caps: &Caps) -> Result<Vec<ModuleHom>> {
    let pres = Presentation::new(a, caps)?;
    let set = HomSet::new(a, b, &pres, caps)?;
    Ok((0..set.len()).map(|i| set.hom(i)).collect())
}

/// An isomorphism `a → b`, if one exists.
pub fn module_isomorphic(a: &FiniteModule, b: &FiniteModule, caps: &Caps) -> Result<Option<ModuleHom>> {
    if a.size() != b.size() || a.invariant() != b.invariant() {
        return Ok(None);
    }
    let pres = Presentation::new(a, caps)?;
    let shape = |m: &FiniteModule, x: usize| (m.additive_order(x), m.cyclic(x).count_ones(..));
    let cands: Vec<Vec<usize>> = pres
        .gens
        .iter()
        .map(|&g| {
            let want = shape(a, g);
            b.elements().filter(|&y| shape(b, y) == want).collect()
        })
        .collect();
    let mut result = None;
    pres.search(b, &cands, &mut Vec::new(), &mut |imgs| {
        let map: Vec<u16> = a.elements().map(|x| pres.extend(b, imgs, x) as u16).collect();
        let h = ModuleHom { map };
        if h.is_injective() {
            result = Some(h);
            true
        } else {
            false
        }
    });
    Ok(result)
}

/// The endomorphism ring with pointwise addition and composition
/// `(fg)(x) = f(g(x))`, elements numbered as in the hom set.
pub fn end_ring(m: &FiniteModule, caps: &Caps) -> Result<FiniteRing> {
    end_ring_with_homs(m, caps).map(|(r, _)| r)
}

pub fn end_ring_with_homs(m: &FiniteModule, caps: &Caps) -> Result<(FiniteRing, HomSet)> {
    let pres = Presentation::new(m, caps)?;
    let homs = HomSet::new(m, m, &pres, caps)?;
    let n = homs.len();
    caps.check("ring_size", n as u128)?;
    let mut add = vec![vec![0usize; n]; n];
    let mut mul = vec![vec![0usize; n]; n];
    for f in 0..n {
        for g in 0..n {
            let sum = pres.gens.iter().map(|&x| m.add(homs.apply(f, x), homs.apply(g, x)));
            add[f][g] = homs
                .index_of(sum)
                .ok_or_else(|| Error::ModuleAxiom("sum of homs missing".into()))?;
            let comp = pres.gens.iter().map(|&x| homs.apply(f, homs.apply(g, x)));
            mul[f][g] = homs
                .index_of(comp)
                .ok_or_else(|| Error::ModuleAxiom("composite missing".into()))?;
        }
    }
    let ring = FiniteRing::from_tables(format!("End({})", m.name()), &add, &mul)?;
    Ok((ring, homs))
}
