use crate::algebra::{build_ring, FiniteRing, RingSpec};
use crate::caps::Caps;
use crate::error::{Error, Result};
use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// A finite right module over a finite ring, stored as an addition table
/// and an action table `x · r`.
#[derive(Clone)]
pub struct FiniteModule {
    ring: Arc<FiniteRing>,
    name: String,
    m: usize,
    add: Vec<u16>,
    neg: Vec<u16>,
    act: Vec<u16>,
    zero: usize,
}

impl fmt::Debug for FiniteModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FiniteModule({}, {} elements over {})",
            self.name,
            self.m,
            self.ring.name()
        )
    }
}

/// Serialised form: the ring recipe plus the two tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleDoc {
    pub ring: RingSpec,
    pub add: Vec<Vec<usize>>,
    /// `action[x][r]` is `x · r`.
    pub action: Vec<Vec<usize>>,
}

impl FiniteModule {
    /// Builds a module from tables, verifying every module axiom.
    pub fn from_tables(ring: Arc<FiniteRing>, add: &[Vec<usize>], action: &[Vec<usize>]) -> Result<Self> {
        let m = add.len();
        let nr = ring.size();
        if m == 0 || m > u16::MAX as usize {
            return Err(Error::ModuleAxiom(format!("unsupported carrier size {m}")));
        }
        if add.iter().any(|row| row.len() != m) || action.len() != m || action.iter().any(|row| row.len() != nr) {
            return Err(Error::ModuleAxiom("table shapes do not match".into()));
        }
        if add.iter().flatten().chain(action.iter().flatten()).any(|&v| v >= m) {
            return Err(Error::ModuleAxiom("table entry outside the carrier".into()));
        }
        let a = |x: usize, y: usize| add[x][y];
        let zero = (0..m)
            .find(|&e| (0..m).all(|x| a(e, x) == x))
            .ok_or_else(|| Error::ModuleAxiom("addition has no identity".into()))?;
        let mut neg = vec![0u16; m];
        for x in 0..m {
            let y = (0..m)
                .find(|&y| a(x, y) == zero)
                .ok_or_else(|| Error::ModuleAxiom(format!("element {x} has no negative")))?;
            neg[x] = y as u16;
            for y in 0..m {
                if a(x, y) != a(y, x) {
                    return Err(Error::ModuleAxiom(format!("addition is not commutative at ({x}, {y})")));
                }
                for z in 0..m {
                    if a(a(x, y), z) != a(x, a(y, z)) {
                        return Err(Error::ModuleAxiom(format!(
                            "addition is not associative at ({x}, {y}, {z})"
                        )));
                    }
                }
            }
        }
        for x in 0..m {
            if action[x][ring.one()] != x {
                return Err(Error::ModuleAxiom(format!("{x} · 1 != {x}")));
            }
            for r in 0..nr {
                for y in 0..m {
                    if action[a(x, y)][r] != a(action[x][r], action[y][r]) {
                        return Err(Error::ModuleAxiom(format!("(x + y) · r fails at ({x}, {y}, {r})")));
                    }
                }
                for s in 0..nr {
                    if action[x][ring.add(r, s)] != a(action[x][r], action[x][s]) {
                        return Err(Error::ModuleAxiom(format!("x · (r + s) fails at ({x}, {r}, {s})")));
                    }
                    if action[x][ring.mul(r, s)] != action[action[x][r]][s] {
                        return Err(Error::ModuleAxiom(format!("x · (rs) fails at ({x}, {r}, {s})")));
                    }
                }
            }
        }
        let flat = |t: &[Vec<usize>]| t.iter().flatten().map(|&v| v as u16).collect();
        Ok(FiniteModule {
            ring,
            name: format!("M{m}"),
            m,
            add: flat(add),
            neg,
            act: flat(action),
            zero,
        })
    }

    pub fn from_doc(doc: &ModuleDoc, caps: &Caps) -> Result<Self> {
        let ring = Arc::new(build_ring(&doc.ring, caps)?);
        caps.check("module_size", doc.add.len() as u128)?;
        FiniteModule::from_tables(ring, &doc.add, &doc.action)
    }

    pub fn to_doc(&self, spec: RingSpec) -> ModuleDoc {
        let m = self.m;
        ModuleDoc {
            ring: spec,
            add: (0..m).map(|x| (0..m).map(|y| self.add(x, y)).collect()).collect(),
            action: (0..m)
                .map(|x| self.ring.elements().map(|r| self.act(x, r)).collect())
                .collect(),
        }
    }

    /// Internal constructor for tables produced by trusted constructions.
    fn from_raw(ring: Arc<FiniteRing>, name: String, m: usize, add: Vec<u16>, act: Vec<u16>, zero: usize) -> Self {
        let mut neg = vec![0u16; m];
        for x in 0..m {
            for y in 0..m {
                if add[x * m + y] as usize == zero {
                    neg[x] = y as u16;
                    break;
                }
            }
        }
        FiniteModule {
            ring,
            name,
            m,
            add,
            neg,
            act,
            zero,
        }
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn is_zero(&self) -> bool {
        self.m == 1
    }

    #[inline]
    pub fn add(&self, x: usize, y: usize) -> usize {
        self.add[x * self.m + y] as usize
    }

    #[inline]
    pub fn neg(&self, x: usize) -> usize {
        self.neg[x] as usize
    }

    #[inline]
    pub fn sub(&self, x: usize, y: usize) -> usize {
        self.add(x, self.neg(y))
    }

    /// `x · r`.
    #[inline]
    pub fn act(&self, x: usize, r: usize) -> usize {
        self.act[x * self.ring.size() + r] as usize
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.m
    }

    pub fn additive_order(&self, x: usize) -> usize {
        let (mut k, mut y) = (1, x);
        while y != self.zero {
            y = self.add(y, x);
            k += 1;
        }
        k
    }

    /// The cyclic submodule `xR` as a set.
    pub fn cyclic(&self, x: usize) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.m);
        for r in self.ring.elements() {
            s.insert(self.act(x, r));
        }
        s
    }

    /// Cheap isomorphism invariant: sorted multiset of (additive order,
    /// size of xR) together with the carrier size.
    pub fn invariant(&self) -> (usize, Vec<(usize, usize)>) {
        let mut v: Vec<(usize, usize)> = self
            .elements()
            .map(|x| (self.additive_order(x), self.cyclic(x).count_ones(..)))
            .collect();
        v.sort_unstable();
        (self.m, v)
    }

    /// The sum `S + T` of two submodules given as sets.
    pub fn sum_sets(&self, s: &FixedBitSet, t: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.m);
        for x in s.ones() {
            for y in t.ones() {
                out.insert(self.add(x, y));
            }
        }
        out
    }

    /// Submodule generated by `gens`.
    pub fn span(&self, gens: impl IntoIterator<Item = usize>) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.m);
        s.insert(self.zero);
        for g in gens {
            if !s.contains(g) {
                s = self.sum_sets(&s, &self.cyclic(g));
            }
        }
        s
    }

    pub fn is_submodule(&self, s: &FixedBitSet) -> bool {
        s.contains(self.zero)
            && s.ones().all(|x| {
                s.ones().all(|y| s.contains(self.add(x, y))) && self.ring.elements().all(|r| s.contains(self.act(x, r)))
            })
    }

    /// Greedy small generating set: repeatedly adds an element outside the
    /// current span whose cyclic submodule is largest.
    pub fn generators(&self) -> Vec<usize> {
        let sizes: Vec<usize> = self.elements().map(|x| self.cyclic(x).count_ones(..)).collect();
        let mut order: Vec<usize> = self.elements().collect();
        order.sort_by_key(|&x| (std::cmp::Reverse(sizes[x]), x));
        let mut span = FixedBitSet::with_capacity(self.m);
        span.insert(self.zero);
        let mut gens = Vec::new();
        while span.count_ones(..) < self.m {
            let g = *order.iter().find(|&&x| !span.contains(x)).unwrap();
            gens.push(g);
            span = self.sum_sets(&span, &self.cyclic(g));
        }
        gens
    }

    /// The submodule `s` as a module in its own right, with the inclusion
    /// map (new index to old index).
    pub fn submodule(&self, s: &FixedBitSet) -> (FiniteModule, Vec<usize>) {
        let elems: Vec<usize> = s.ones().collect();
        let mut index = vec![usize::MAX; self.m];
        for (i, &e) in elems.iter().enumerate() {
            index[e] = i;
        }
        let k = elems.len();
        let nr = self.ring.size();
        let mut add = Vec::with_capacity(k * k);
        for &x in &elems {
            for &y in &elems {
                add.push(index[self.add(x, y)] as u16);
            }
        }
        let mut act = Vec::with_capacity(k * nr);
        for &x in &elems {
            for r in 0..nr {
                act.push(index[self.act(x, r)] as u16);
            }
        }
        let zero = index[self.zero];
        (
            FiniteModule::from_raw(self.ring.clone(), format!("sub({})", self.name), k, add, act, zero),
            elems,
        )
    }

    /// The quotient by submodule `s`, with the projection map. Cosets are
    /// numbered in order of their least element.
    pub fn quotient(&self, s: &FixedBitSet) -> (FiniteModule, Vec<usize>) {
        let mut class = vec![usize::MAX; self.m];
        let mut reps = Vec::new();
        for x in self.elements() {
            if class[x] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(x);
            for y in s.ones() {
                class[self.add(x, y)] = c;
            }
        }
        let k = reps.len();
        let nr = self.ring.size();
        let mut add = Vec::with_capacity(k * k);
        for &x in &reps {
            for &y in &reps {
                add.push(class[self.add(x, y)] as u16);
            }
        }
        let mut act = Vec::with_capacity(k * nr);
        for &x in &reps {
            for r in 0..nr {
                act.push(class[self.act(x, r)] as u16);
            }
        }
        let zero = class[self.zero];
        (
            FiniteModule::from_raw(self.ring.clone(), format!("{}/S", self.name), k, add, act, zero),
            class,
        )
    }

    /// Element of `self ⊕ other` with components `(x, y)`.
    pub fn pair_index(&self, x: usize, y: usize) -> usize {
        x + self.m * y
    }
}

/// `R^n` with componentwise operations; tuple `(c_0, …, c_{n-1})` has index
/// `Σ c_i |R|^i`. Rank 0 gives the zero module.
pub fn free_module(ring: &Arc<FiniteRing>, n: usize, caps: &Caps) -> Result<FiniteModule> {
    let nr = ring.size();
    let m = (nr as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    caps.check("module_size", m)?;
    let m = m as usize;
    if m > u16::MAX as usize {
        return Err(Error::cap("module_size", m as u128, u16::MAX as usize));
    }
    let decode = |mut x: usize| -> Vec<usize> {
        (0..n)
            .map(|_| {
                let c = x % nr;
                x /= nr;
                c
            })
            .collect()
    };
    let encode = |c: &[usize]| c.iter().rev().fold(0, |acc, &e| acc * nr + e);
    let tuples: Vec<Vec<usize>> = (0..m).map(decode).collect();
    let mut add = Vec::with_capacity(m * m);
    for x in &tuples {
        for y in &tuples {
            let s: Vec<usize> = x.iter().zip(y).map(|(&a, &b)| ring.add(a, b)).collect();
            add.push(encode(&s) as u16);
        }
    }
    let mut act = Vec::with_capacity(m * nr);
    for x in &tuples {
        for r in 0..nr {
            let s: Vec<usize> = x.iter().map(|&a| ring.mul(a, r)).collect();
            act.push(encode(&s) as u16);
        }
    }
    let zero = encode(&vec![ring.zero(); n]);
    let name = match n {
        0 => "0".to_string(),
        1 => "R".to_string(),
        _ => format!("R^{n}"),
    };
    Ok(FiniteModule::from_raw(ring.clone(), name, m, add, act, zero))
}

pub fn zero_module(ring: &Arc<FiniteRing>) -> FiniteModule {
    FiniteModule::from_raw(ring.clone(), "0".into(), 1, vec![0], vec![0; ring.size()], 0)
}

/// The regular module `R_R`.
pub fn regular_module(ring: &Arc<FiniteRing>) -> FiniteModule {
    free_module(ring, 1, &Caps::generous()).expect("regular module fits")
}

/// `a ⊕ b`; the pair `(x, y)` has index `x + |a| y`.
pub fn direct_sum(a: &FiniteModule, b: &FiniteModule, caps: &Caps) -> Result<FiniteModule> {
    let m = a.size() * b.size();
    caps.check("module_size", m as u128)?;
    if m > u16::MAX as usize {
        return Err(Error::cap("module_size", m as u128, u16::MAX as usize));
    }
    let nr = a.ring().size();
    let mut add = Vec::with_capacity(m * m);
    for p in 0..m {
        let (x1, y1) = (p % a.size(), p / a.size());
        for q in 0..m {
            let (x2, y2) = (q % a.size(), q / a.size());
            add.push(a.pair_index(a.add(x1, x2), b.add(y1, y2)) as u16);
        }
    }
    let mut act = Vec::with_capacity(m * nr);
    for p in 0..m {
        let (x, y) = (p % a.size(), p / a.size());
        for r in 0..nr {
            act.push(a.pair_index(a.act(x, r), b.act(y, r)) as u16);
        }
    }
    Ok(FiniteModule::from_raw(
        a.ring().clone(),
        format!("{}+{}", a.name(), b.name()),
        m,
        add,
        act,
        a.pair_index(a.zero(), b.zero()),
    ))
}
