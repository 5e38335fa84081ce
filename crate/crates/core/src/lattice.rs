//! The projective space `P(V)` of a finite free module: submodules under
//! inclusion, the first-order definable lattice operations, recovery of
//! `End(P)` from graph submodules inside `P ⊕ P ⊕ P`, and matrices whose
//! columns generate submodules.

use crate::algebra::{ring_isomorphic, FiniteRing};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::logic::{
    Assignment, Evaluator, FiniteModel, Formula, ModelBuilder, Prepared, Signature, SignatureBuilder, Term, Var,
};
use crate::module::{end_ring_with_homs, free_module, module_isomorphic, submodules, FiniteModule, HomSet};
use crate::par;
use fixedbitset::FixedBitSet;
use serde::Serialize;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

/// One sort `M` of submodules and the inclusion relation `sub(M, M)`.
pub fn lattice_signature() -> Arc<Signature> {
    static SIG: OnceLock<Arc<Signature>> = OnceLock::new();
    SIG.get_or_init(|| {
        Arc::new(
            SignatureBuilder::new()
                .sort("M")
                .predicate("sub", &["M", "M"])
                .build()
                .expect("lattice signature"),
        )
    })
    .clone()
}

/// All submodules of `V = R^n`, ordered by size, with their inclusion
/// order stored as down-sets and up-sets.
#[derive(Debug, Clone)]
pub struct ProjectiveSpace {
    module: FiniteModule,
    rank: usize,
    subs: Vec<FixedBitSet>,
    index: HashMap<FixedBitSet, usize>,
    down: Vec<FixedBitSet>,
    up: Vec<FixedBitSet>,
    down_count: Vec<usize>,
    up_count: Vec<usize>,
}

pub fn projective_space(r: &Arc<FiniteRing>, n: usize, caps: &Caps) -> Result<ProjectiveSpace> {
    let module = free_module(r, n, caps)?;
    let subs = submodules(&module, caps)?;
    let count = subs.len();
    caps.check("enumeration", (count as u128).pow(2))?;
    let index: HashMap<FixedBitSet, usize> = subs.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let down: Vec<FixedBitSet> = par::map(&subs, |s| {
        let mut d = FixedBitSet::with_capacity(count);
        for (j, t) in subs.iter().enumerate() {
            if t.is_subset(s) {
                d.insert(j);
            }
        }
        d
    });
    let mut up = vec![FixedBitSet::with_capacity(count); count];
    for (i, d) in down.iter().enumerate() {
        for j in d.ones() {
            up[j].insert(i);
        }
    }
    let down_count = down.iter().map(|d| d.count_ones(..)).collect();
    let up_count = up.iter().map(|u| u.count_ones(..)).collect();
    let ps = ProjectiveSpace {
        module,
        rank: n,
        subs,
        index,
        down,
        up,
        down_count,
        up_count,
    };
    ps.verify_closure()?;
    Ok(ps)
}

impl ProjectiveSpace {
    pub fn module(&self) -> &FiniteModule {
        &self.module
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        self.module.ring()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.subs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subs.is_empty()
    }

    pub fn submodule(&self, i: usize) -> &FixedBitSet {
        &self.subs[i]
    }

    pub fn size_of(&self, i: usize) -> usize {
        self.subs[i].count_ones(..)
    }

    pub fn find(&self, s: &FixedBitSet) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.down[b].contains(a)
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.subs.len() - 1
    }

    /// Greatest common lower bound, found from the order alone.
    pub fn meet(&self, a: usize, b: usize) -> usize {
        let mut d = self.down[a].clone();
        d.intersect_with(&self.down[b]);
        let k = d.count_ones(..);
        d.ones().find(|&j| self.down_count[j] == k).expect("lattice meet")
    }

    /// Least common upper bound, found from the order alone.
    pub fn join(&self, a: usize, b: usize) -> usize {
        let mut u = self.up[a].clone();
        u.intersect_with(&self.up[b]);
        let k = u.count_ones(..);
        u.ones().find(|&j| self.up_count[j] == k).expect("lattice join")
    }

    /// `a ⊕ b`: the join, provided `a ∩ b = 0`.
    pub fn direct_sum(&self, a: usize, b: usize) -> Result<usize> {
        if self.meet(a, b) != self.bottom() {
            return Err(Error::Copies(format!("submodules {a} and {b} intersect")));
        }
        Ok(self.join(a, b))
    }

    fn set_index(&self, s: &FixedBitSet) -> Result<usize> {
        self.find(s)
            .ok_or_else(|| Error::ModuleAxiom("set is not a submodule of the ambient module".into()))
    }

    /// Checks that intersections and sums of submodules are submodules and
    /// that the order-theoretic meet and join agree with them.
    fn verify_closure(&self) -> Result<()> {
        let n = self.len();
        let bad = par::any_range(n, |a| {
            (a..n).any(|b| {
                let mut i = self.subs[a].clone();
                i.intersect_with(&self.subs[b]);
                // The join contains A + B; equal size means equality.
                let j = self.join(a, b);
                let sum_size = self.size_of(a) * self.size_of(b) / i.count_ones(..);
                self.find(&i) != Some(self.meet(a, b))
                    || !self.subs[a].is_subset(&self.subs[j])
                    || !self.subs[b].is_subset(&self.subs[j])
                    || self.size_of(j) != sum_size
            })
        });
        if bad {
            return Err(Error::ModuleAxiom("submodule lattice is not closed".into()));
        }
        Ok(())
    }

    /// The space as a model of [`lattice_signature`].
    pub fn model(&self) -> FiniteModel {
        let n = self.len();
        let tuples = (0..n).flat_map(|b| self.down[b].ones().map(move |a| vec![a, b]));
        ModelBuilder::new(lattice_signature())
            .carrier("M", n)
            .and_then(|b| b.table_relation("sub", tuples))
            .and_then(|b| b.build())
            .expect("lattice model")
    }
}

fn m(name: &str) -> Var {
    Var::new(name, "M")
}

fn sub(a: &Var, b: &Var) -> Formula {
    Formula::pred("sub", vec![Term::Var(a.clone()), Term::Var(b.clone())])
}

/// `M = V`: every submodule lies in `M`.
pub fn formula_is_top(x: &Var) -> Formula {
    let y = m("_t");
    Formula::forall(y.clone(), sub(&y, x))
}

/// `M = ∅`: `M` lies in every submodule.
pub fn formula_is_bottom(x: &Var) -> Formula {
    let y = m("_b");
    Formula::forall(y.clone(), sub(x, &y))
}

/// `M1 = M2 ∩ M3`.
pub fn formula_meet(m1: &Var, m2: &Var, m3: &Var) -> Formula {
    let m4 = m("_m4");
    Formula::and_all([
        sub(m1, m2),
        sub(m1, m3),
        Formula::forall(
            m4.clone(),
            Formula::implies(Formula::and(sub(&m4, m2), sub(&m4, m3)), sub(&m4, m1)),
        ),
    ])
}

/// `M1 = M2 + M3`.
pub fn formula_join(m1: &Var, m2: &Var, m3: &Var) -> Formula {
    let m4 = m("_m4");
    Formula::and_all([
        sub(m2, m1),
        sub(m3, m1),
        Formula::forall(
            m4.clone(),
            Formula::implies(Formula::and(sub(m2, &m4), sub(m3, &m4)), sub(m1, &m4)),
        ),
    ])
}

/// `M2 ∩ M3 = ∅`, i.e. the intersection exists and is the bottom.
pub fn formula_disjoint(m2: &Var, m3: &Var) -> Formula {
    let z = m("_z");
    Formula::exists(z.clone(), Formula::and(formula_meet(&z, m2, m3), formula_is_bottom(&z)))
}

/// `M1 = M2 ⊕ M3`.
pub fn formula_direct_sum(m1: &Var, m2: &Var, m3: &Var) -> Formula {
    Formula::and(formula_join(m1, m2, m3), formula_disjoint(m2, m3))
}

/// The body of `P1 ≅_d P2` after `∃P`, with `P` free. `S` names
/// `P1 ⊕ P2`.
pub fn formula_iso_d_witness(p1: &Var, p2: &Var, p: &Var) -> Formula {
    let s = m("_s");
    Formula::exists(
        s.clone(),
        Formula::and_all([
            formula_direct_sum(&s, p1, p2),
            sub(p, &s),
            Formula::not(formula_is_bottom(p)),
            formula_disjoint(p, p1),
            formula_disjoint(p, p2),
            formula_direct_sum(&s, p, p1),
            formula_direct_sum(&s, p, p2),
        ]),
    )
}

/// `P1 ≅_d P2`: disjoint, and some `P` is a common complement inside
/// `P1 ⊕ P2`.
pub fn formula_iso_d(p1: &Var, p2: &Var) -> Formula {
    let p = m("_p");
    Formula::and(
        formula_disjoint(p1, p2),
        Formula::exists(p.clone(), formula_iso_d_witness(p1, p2, &p)),
    )
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Agreement {
    pub checked: usize,
    pub true_count: usize,
    /// Tuples of submodule indices where formula and oracle differ.
    pub mismatches: Vec<Vec<usize>>,
}

impl Agreement {
    fn record(&mut self, tuple: Vec<usize>, formula: bool, oracle: bool) {
        self.checked += 1;
        self.true_count += usize::from(oracle);
        if formula != oracle {
            self.mismatches.push(tuple);
        }
    }

    pub fn agrees(&self) -> bool {
        self.mismatches.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeOpsReport {
    pub ring: String,
    pub rank: usize,
    pub submodules: usize,
    pub top: Agreement,
    pub bottom: Agreement,
    pub meet: Agreement,
    pub join: Agreement,
    pub direct_sum: Agreement,
    pub iso_d: Agreement,
    /// For each `≅_d` pair, the first witness `P` found.
    pub witnesses: Vec<(usize, usize, usize)>,
    pub all_agree: bool,
}

/// Evaluates each definable operation on every pair or triple of
/// submodules and compares with the set-theoretic meaning. The `≅_d`
/// oracle is "disjoint, isomorphic and nonzero": the formula demands a
/// nonzero `P`, which does not exist when both sides are zero.
pub fn lattice_definable_ops(ps: &ProjectiveSpace, caps: &Caps) -> Result<LatticeOpsReport> {
    let n = ps.len();
    caps.check("enumeration", (n as u128).pow(4))?;
    let model = ps.model();
    let sig = lattice_signature();
    let (a, b, c) = (m("a"), m("b"), m("c"));
    let compile = |f: Formula| Prepared::compile(&sig, &f);
    let top = compile(formula_is_top(&a))?;
    let bottom = compile(formula_is_bottom(&a))?;
    let meet = compile(formula_meet(&a, &b, &c))?;
    let join = compile(formula_join(&a, &b, &c))?;
    let dsum = compile(formula_direct_sum(&a, &b, &c))?;
    let iso = compile(formula_iso_d(&a, &b))?;
    let witness = compile(formula_iso_d_witness(&a, &b, &c))?;
    let mut ev = Evaluator::new(&model);
    let run = |ev: &mut Evaluator, p: &Prepared, vals: &[(&Var, usize)]| -> Result<bool> {
        let s: Assignment = vals.iter().map(|(v, x)| ((*v).clone(), *x)).collect();
        ev.run(p, &s)
    };
    let md = ps.module();
    let is_zero = |i: usize| ps.subs[i].count_ones(..) == 1;
    let mut rep = LatticeOpsReport {
        ring: ps.ring().name().to_string(),
        rank: ps.rank,
        submodules: n,
        top: Agreement::default(),
        bottom: Agreement::default(),
        meet: Agreement::default(),
        join: Agreement::default(),
        direct_sum: Agreement::default(),
        iso_d: Agreement::default(),
        witnesses: Vec::new(),
        all_agree: false,
    };
    for x in 0..n {
        let f = run(&mut ev, &top, &[(&a, x)])?;
        rep.top.record(vec![x], f, ps.subs[x].count_ones(..) == md.size());
        let f = run(&mut ev, &bottom, &[(&a, x)])?;
        rep.bottom.record(vec![x], f, is_zero(x));
    }
    for y in 0..n {
        for z in 0..n {
            let mut inter = ps.subs[y].clone();
            inter.intersect_with(&ps.subs[z]);
            let sum = md.sum_sets(&ps.subs[y], &ps.subs[z]);
            let disjoint = inter.count_ones(..) == 1;
            for x in 0..n {
                let vals = [(&a, x), (&b, y), (&c, z)];
                let f = run(&mut ev, &meet, &vals)?;
                rep.meet.record(vec![x, y, z], f, ps.subs[x] == inter);
                let f = run(&mut ev, &join, &vals)?;
                rep.join.record(vec![x, y, z], f, ps.subs[x] == sum);
                let f = run(&mut ev, &dsum, &vals)?;
                rep.direct_sum.record(vec![x, y, z], f, ps.subs[x] == sum && disjoint);
            }
            let f = run(&mut ev, &iso, &[(&a, y), (&b, z)])?;
            let oracle = disjoint && !is_zero(y) && {
                let (my, _) = md.submodule(&ps.subs[y]);
                let (mz, _) = md.submodule(&ps.subs[z]);
                module_isomorphic(&my, &mz, caps)?.is_some()
            };
            rep.iso_d.record(vec![y, z], f, oracle);
            if f {
                for p in 0..n {
                    if run(&mut ev, &witness, &[(&a, y), (&b, z), (&c, p)])? {
                        rep.witnesses.push((y, z, p));
                        break;
                    }
                }
            }
        }
    }
    rep.all_agree = [&rep.top, &rep.bottom, &rep.meet, &rep.join, &rep.direct_sum, &rep.iso_d]
        .iter()
        .all(|x| x.agrees());
    Ok(rep)
}

/// Three disjoint copies `P_1, P_2, P_3` of a module `P` inside `V`, with
/// identifications `f_i: P → P_i` given as element maps.
#[derive(Debug, Clone)]
pub struct Copies {
    pub p: FiniteModule,
    pub maps: [Vec<usize>; 3],
}

impl Copies {
    /// `P = R^k` placed in coordinate blocks `0..k`, `k..2k`, `2k..3k` of
    /// `V = R^n`.
    pub fn standard(ps: &ProjectiveSpace, k: usize, caps: &Caps) -> Result<Copies> {
        if k == 0 || 3 * k > ps.rank {
            return Err(Error::Copies(format!(
                "rank {} cannot hold three copies of R^{k}",
                ps.rank
            )));
        }
        let p = free_module(ps.ring(), k, caps)?;
        let nr = ps.ring().size();
        let maps = [0, 1, 2].map(|b| p.elements().map(|e| e * nr.pow((b * k) as u32)).collect());
        Ok(Copies { p, maps })
    }

    pub fn apply(&self, i: usize, e: usize) -> usize {
        self.maps[i][e]
    }
}

/// `V_q³` for an endomorphism `q` of `P`: the submodule of graph vectors
/// `f_1(e) + f_2(e) + f_3(qe)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GraphSubmodule {
    /// Index of `q` in the endomorphism ring.
    pub q: usize,
    /// Index of `V_q³` in the projective space.
    pub sub: usize,
}

/// The fixed submodules built from a choice of copies.
#[derive(Debug, Clone)]
pub struct Interpretation<'a> {
    pub ps: &'a ProjectiveSpace,
    pub copies: Copies,
    pub end: FiniteRing,
    homs: HomSet,
    hom_index: HashMap<Vec<u16>, usize>,
    pub p: [usize; 3],
    pub u12: usize,
    pub u23: usize,
    pub u123: usize,
    pub u13: usize,
}

impl<'a> Interpretation<'a> {
    /// Checks that the copies are disjoint images of module embeddings and
    /// builds `U_{1,2}`, `U_{2,3}` (the graphs of the identifications,
    /// checked against their defining formula) and `U_{1,2,3}`, `U_{1,3}`
    /// by meets and joins.
    pub fn new(ps: &'a ProjectiveSpace, copies: Copies, caps: &Caps) -> Result<Interpretation<'a>> {
        let v = ps.module();
        let p = &copies.p;
        for (i, f) in copies.maps.iter().enumerate() {
            if f.len() != p.size() {
                return Err(Error::Copies(format!("map {} has the wrong length", i + 1)));
            }
            let hom = p
                .elements()
                .all(|x| p.elements().all(|y| f[p.add(x, y)] == v.add(f[x], f[y])))
                && p.elements()
                    .all(|x| ps.ring().elements().all(|r| f[p.act(x, r)] == v.act(f[x], r)));
            let mut image = FixedBitSet::with_capacity(v.size());
            f.iter().for_each(|&x| image.insert(x));
            if !hom || image.count_ones(..) != p.size() {
                return Err(Error::Copies(format!("map {} is not an embedding", i + 1)));
            }
        }
        let image = |i: usize| -> Result<usize> {
            let mut s = FixedBitSet::with_capacity(v.size());
            copies.maps[i].iter().for_each(|&x| s.insert(x));
            ps.set_index(&s)
        };
        let pi = [image(0)?, image(1)?, image(2)?];
        let p12 = ps.direct_sum(pi[0], pi[1])?;
        ps.direct_sum(p12, pi[2])?;
        let (end, homs) = end_ring_with_homs(p, caps)?;
        let hom_index = (0..homs.len()).map(|i| (homs.map(i).to_vec(), i)).collect();
        let graph = |a: usize, b: usize| -> Result<usize> {
            let mut s = FixedBitSet::with_capacity(v.size());
            for e in p.elements() {
                s.insert(v.add(copies.apply(a, e), copies.apply(b, e)));
            }
            ps.set_index(&s)
        };
        let u12 = graph(0, 1)?;
        let u23 = graph(1, 2)?;
        for (u, a, b) in [(u12, pi[0], pi[1]), (u23, pi[1], pi[2])] {
            let ab = ps.direct_sum(a, b)?;
            if !(ps.leq(u, ab) && ps.leq(a, ps.direct_sum(u, b)?) && ps.leq(b, ps.direct_sum(u, a)?)) {
                return Err(Error::Copies("graph of the identification fails its formula".into()));
            }
        }
        let u123 = ps.meet(ps.direct_sum(pi[0], u23)?, ps.direct_sum(pi[2], u12)?);
        let u13 = ps.meet(ps.direct_sum(pi[0], pi[2])?, ps.direct_sum(u123, pi[1])?);
        Ok(Interpretation {
            ps,
            copies,
            end,
            homs,
            hom_index,
            p: pi,
            u12,
            u23,
            u123,
            u13,
        })
    }

    fn dsum(&self, a: usize, b: usize) -> Result<usize> {
        self.ps.direct_sum(a, b)
    }

    /// The set `{ f_1(x(e)) + f_2(y(e)) + f_3(z(e)) }` over `e ∈ P`, with
    /// absent components zero.
    fn vectors(&self, parts: [Option<&dyn Fn(usize) -> usize>; 3]) -> FixedBitSet {
        let v = self.ps.module();
        let mut s = FixedBitSet::with_capacity(v.size());
        for e in self.copies.p.elements() {
            let mut x = v.zero();
            for (i, part) in parts.iter().enumerate() {
                if let Some(g) = part {
                    x = v.add(x, self.copies.apply(i, g(e)));
                }
            }
            s.insert(x);
        }
        s
    }

    fn endo(&self, q: usize) -> impl Fn(usize) -> usize + '_ {
        move |e| self.homs.apply(q, e)
    }

    /// `V_q³`, built from its vectors and checked against the formula
    /// `V ⊆ U_{1,2} ⊕ P_3 ∧ U_{1,2} ⊆ V ⊕ P_3`.
    pub fn graph_submodule(&self, q: usize) -> Result<GraphSubmodule> {
        let id = |e: usize| e;
        let qe = self.endo(q);
        let s = self.vectors([Some(&id), Some(&id), Some(&qe)]);
        let sub = self.ps.set_index(&s)?;
        if !self.is_graph(sub)? {
            return Err(Error::Copies(format!("graph of endomorphism {q} fails its formula")));
        }
        Ok(GraphSubmodule { q, sub })
    }

    fn is_graph(&self, x: usize) -> Result<bool> {
        let ps = self.ps;
        let p3 = self.p[2];
        Ok(ps.leq(x, self.dsum(self.u12, p3)?) && ps.meet(x, p3) == ps.bottom() && ps.leq(self.u12, ps.join(x, p3)))
    }

    /// Every submodule satisfying the `V_q³` formula, found by scanning
    /// the lattice.
    pub fn graph_family(&self) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for x in 0..self.ps.len() {
            if self.is_graph(x)? {
                out.push(x);
            }
        }
        Ok(out)
    }

    /// The endomorphism `q` with `f_1(e) + f_2(e) + f_3(qe) ∈ V`.
    pub fn read_off(&self, sub: usize) -> Result<usize> {
        let v = self.ps.module();
        let p = &self.copies.p;
        let set = self.ps.submodule(sub);
        let mut map = Vec::with_capacity(p.size());
        for e in p.elements() {
            let base = v.add(self.copies.apply(0, e), self.copies.apply(1, e));
            let hits: Vec<usize> = p
                .elements()
                .filter(|&e2| set.contains(v.add(base, self.copies.apply(2, e2))))
                .collect();
            if hits.len() != 1 {
                return Err(Error::Copies(format!("submodule {sub} is not a graph over P")));
            }
            map.push(hits[0] as u16);
        }
        self.hom_index
            .get(&map)
            .copied()
            .ok_or_else(|| Error::Copies(format!("submodule {sub} is not the graph of an endomorphism")))
    }

    /// The unique `W` with `W ⊆ (P_a ⊕ P_3) ∩ (V ⊕ P_b) ∧ P_a ⊆ W ⊕ P_3`;
    /// `(a, b) = (1, 2)` gives `W_q^{1,3}` and `(2, 1)` gives `W_q^{2,3}`.
    fn w_x3(&self, v: usize, a: usize, b: usize) -> Result<usize> {
        let ps = self.ps;
        let (pa, pb, p3) = (self.p[a], self.p[b], self.p[2]);
        let bound = ps.meet(self.dsum(pa, p3)?, self.dsum(v, pb)?);
        let sols: Vec<usize> = ps.down[bound]
            .ones()
            .filter(|&w| ps.meet(w, p3) == ps.bottom() && ps.leq(pa, ps.join(w, p3)))
            .collect();
        match sols.as_slice() {
            [w] => Ok(*w),
            _ => Err(Error::Copies(format!("{} solutions for W^{{{},3}}", sols.len(), a + 1))),
        }
    }

    pub fn w13(&self, v: usize) -> Result<usize> {
        self.w_x3(v, 0, 1)
    }

    pub fn w23(&self, v: usize) -> Result<usize> {
        self.w_x3(v, 1, 0)
    }

    /// `V_{q+r}³ = (U_{1,2} ⊕ P_3) ∩ (W_q^{1,3} ⊕ W_r^{2,3})`.
    pub fn add(&self, vq: usize, vr: usize) -> Result<usize> {
        let left = self.dsum(self.u12, self.p[2])?;
        let right = self.dsum(self.w13(vq)?, self.w23(vr)?)?;
        Ok(self.ps.meet(left, right))
    }

    /// `V_{-q}³` as `(k - 1)·q`, where `k` is the first multiple reaching
    /// `V_0³ = U_{1,2}`.
    pub fn neg(&self, vq: usize) -> Result<usize> {
        let mut prev = self.u12;
        let mut cur = vq;
        while cur != self.u12 {
            prev = cur;
            cur = self.add(cur, vq)?;
        }
        Ok(prev)
    }

    /// `X_q^{2,3} = (W_q^{2,3} + P_2) ∩ U_{2,3}`.
    fn x23(&self, vq: usize) -> Result<usize> {
        Ok(self.ps.meet(self.ps.join(self.w23(vq)?, self.p[1]), self.u23))
    }

    /// `W_q^{3,2}`, the vectors `f_3(e) + f_2(qe)`, checked against its
    /// defining formula.
    pub fn w32(&self, vq: usize) -> Result<usize> {
        let ps = self.ps;
        let q = self.read_off(vq)?;
        let id = |e: usize| e;
        let qe = self.endo(q);
        let w = ps.set_index(&self.vectors([None, Some(&qe), Some(&id)]))?;
        let (p2, p3) = (self.p[1], self.p[2]);
        let lhs = {
            let a = ps.meet(ps.join(w, p3), p2);
            let b = ps.meet(ps.join(self.w23(vq)?, p2), p3);
            ps.meet(ps.join(a, b), self.u23)
        };
        let ok = ps.leq(w, self.dsum(p2, p3)?) && ps.leq(p3, self.dsum(p2, w)?) && self.x23(vq)? == lhs;
        if !ok {
            return Err(Error::Copies("W^{3,2} fails its defining formula".into()));
        }
        Ok(w)
    }

    /// `W_{qr}^{1,2} = (W_q^{3,2} + W_{-r}^{1,3}) ∩ (P_1 ⊕ P_2)`, turned back
    /// into a graph submodule: `(W_s^{1,2} + U_{2,3}) ∩ (P_1 ⊕ P_3)` is
    /// `W_{-s}^{1,3}`, then `(W_{-s}^{1,3} + P_2) ∩ (U_{1,2} ⊕ P_3)` is
    /// `V_{-s}³`, and a final negation gives `V_s³`.
    pub fn mul(&self, vq: usize, vr: usize) -> Result<usize> {
        let ps = self.ps;
        let w_neg_r = self.w13(self.neg(vr)?)?;
        let ws12 = ps.meet(ps.join(self.w32(vq)?, w_neg_r), self.dsum(self.p[0], self.p[1])?);
        let w13_neg_s = ps.meet(ps.join(ws12, self.u23), self.dsum(self.p[0], self.p[2])?);
        let v_neg_s = ps.meet(ps.join(w13_neg_s, self.p[1]), self.dsum(self.u12, self.p[2])?);
        self.neg(v_neg_s)
    }
}

/// The lattice-side operations checked against the endomorphism ring.
pub fn lattice_add(it: &Interpretation, g1: GraphSubmodule, g2: GraphSubmodule) -> Result<GraphSubmodule> {
    let sub = it.add(g1.sub, g2.sub)?;
    let expected = it.graph_submodule(it.end.add(g1.q, g2.q))?;
    if expected.sub != sub {
        return Err(Error::Copies(format!(
            "lattice sum of {} and {} is not the graph of q + r",
            g1.q, g2.q
        )));
    }
    Ok(expected)
}

pub fn lattice_mul(it: &Interpretation, g1: GraphSubmodule, g2: GraphSubmodule) -> Result<GraphSubmodule> {
    let sub = it.mul(g1.sub, g2.sub)?;
    let s = it.read_off(sub)?;
    if s != it.end.mul(g1.q, g2.q) {
        return Err(Error::Copies(format!(
            "lattice product of {} and {} is not qr",
            g1.q, g2.q
        )));
    }
    Ok(GraphSubmodule { q: s, sub })
}

/// Recovered ring with the data needed to audit it.
#[derive(Debug, Clone, Serialize)]
pub struct RecoveryCertificate {
    pub ring: String,
    pub ambient_rank: usize,
    pub copy_size: usize,
    /// Lattice indices of `P_1, P_2, P_3`.
    pub copies: [usize; 3],
    /// `graphs[q]` is the lattice index of `V_q³`.
    pub graphs: Vec<usize>,
    /// Lattice indices found by solving the `V_q³` formula.
    pub family: Vec<usize>,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
    /// `q ↦ V_q³` as positions in `family`; a ring isomorphism from the
    /// endomorphism ring when `is_isomorphism` holds.
    pub map: Vec<usize>,
    pub is_isomorphism: bool,
    /// Isomorphism from the endomorphism ring found independently.
    pub witness: Option<Vec<usize>>,
}

/// Builds the ring on `{V_q³}` under the lattice operations.
pub fn recover_end_ring(it: &Interpretation) -> Result<(FiniteRing, RecoveryCertificate)> {
    let family = it.graph_family()?;
    let pos: HashMap<usize, usize> = family.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let k = family.len();
    let at = |x: usize| -> Result<usize> {
        pos.get(&x)
            .copied()
            .ok_or_else(|| Error::Copies(format!("submodule {x} left the graph family")))
    };
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|a| (0..k).map(move |b| (a, b))).collect();
    let cells = par::map(&pairs, |&(a, b)| -> Result<(usize, usize)> {
        Ok((at(it.add(family[a], family[b])?)?, at(it.mul(family[a], family[b])?)?))
    });
    let mut add = vec![vec![0; k]; k];
    let mut mul = vec![vec![0; k]; k];
    for (&(a, b), cell) in pairs.iter().zip(cells) {
        let (s, p) = cell?;
        add[a][b] = s;
        mul[a][b] = p;
    }
    let ring = FiniteRing::from_tables(format!("lattice({})", it.end.name()), &add, &mul)?;
    let graphs = it
        .end
        .elements()
        .map(|q| it.graph_submodule(q).map(|g| g.sub))
        .collect::<Result<Vec<_>>>()?;
    let map = graphs.iter().map(|&g| at(g)).collect::<Result<Vec<_>>>()?;
    let e = &it.end;
    let bijective = k == e.size() && {
        let mut seen = map.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len() == k
    };
    let is_isomorphism = bijective
        && e.elements().all(|a| {
            e.elements()
                .all(|b| map[e.add(a, b)] == ring.add(map[a], map[b]) && map[e.mul(a, b)] == ring.mul(map[a], map[b]))
        });
    let witness = ring_isomorphic(e, &ring);
    let cert = RecoveryCertificate {
        ring: it.ps.ring().name().to_string(),
        ambient_rank: it.ps.rank(),
        copy_size: it.copies.p.size(),
        copies: it.p,
        graphs,
        family,
        add,
        mul,
        map,
        is_isomorphism,
        witness,
    };
    Ok((ring, cert))
}

/// Matrices over `R` whose columns generate submodules of `R^n`.
#[derive(Debug, Clone)]
pub struct MatrixEncoding<'a> {
    ps: &'a ProjectiveSpace,
}

/// An `n × n` matrix, row-major.
pub type SubmoduleMatrix = Vec<usize>;

pub fn submodule_matrix_encoding(ps: &ProjectiveSpace) -> MatrixEncoding<'_> {
    MatrixEncoding { ps }
}

impl<'a> MatrixEncoding<'a> {
    fn n(&self) -> usize {
        self.ps.rank
    }

    fn column(&self, x: &[usize], j: usize) -> usize {
        let nr = self.ps.ring().size();
        let n = self.n();
        (0..n).rev().fold(0, |acc, i| acc * nr + x[i * n + j])
    }

    fn columns(&self, x: &[usize]) -> Vec<usize> {
        (0..self.n()).map(|j| self.column(x, j)).collect()
    }

    fn coords(&self, v: usize) -> Vec<usize> {
        let nr = self.ps.ring().size();
        (0..self.n()).map(|i| v / nr.pow(i as u32) % nr).collect()
    }

    /// A matrix whose columns generate submodule `i`, zero-padded. Tries the
    /// greedy generating set first, then every `n`-tuple of elements.
    pub fn encode(&self, i: usize) -> Result<SubmoduleMatrix> {
        let v = self.ps.module();
        let n = self.n();
        let target = self.ps.submodule(i);
        let (sm, elems) = v.submodule(target);
        let mut gens: Vec<usize> = sm.generators().into_iter().map(|g| elems[g]).collect();
        if gens.len() > n {
            gens = self
                .search_generators(&elems, target)
                .ok_or_else(|| Error::InvalidParameter(format!("submodule {i} needs more than {n} generators")))?;
        }
        gens.resize(n, v.zero());
        let mut x = vec![0; n * n];
        for (j, &g) in gens.iter().enumerate() {
            for (r, c) in self.coords(g).into_iter().enumerate() {
                x[r * n + j] = c;
            }
        }
        Ok(x)
    }

    fn search_generators(&self, elems: &[usize], target: &FixedBitSet) -> Option<Vec<usize>> {
        let v = self.ps.module();
        let n = self.n();
        let mut idx = vec![0usize; n];
        loop {
            let gens: Vec<usize> = idx.iter().map(|&k| elems[k]).collect();
            if &v.span(gens.iter().copied()) == target {
                return Some(gens);
            }
            let mut p = 0;
            loop {
                if p == n {
                    return None;
                }
                idx[p] += 1;
                if idx[p] < elems.len() {
                    break;
                }
                idx[p] = 0;
                p += 1;
            }
        }
    }

    /// The lattice index of the column span of `x`.
    pub fn decode(&self, x: &[usize]) -> usize {
        let span = self.ps.module().span(self.columns(x));
        self.ps.find(&span).expect("column span is a submodule")
    }

    /// `∃A (X1 = X2 A)`, searched exhaustively; the columns of `A` are
    /// independent, so each is searched over `R^n` separately. Returns `A`.
    pub fn leq(&self, x1: &[usize], x2: &[usize]) -> Option<SubmoduleMatrix> {
        let r = self.ps.ring();
        let n = self.n();
        let vectors = (r.size() as u128).pow(n as u32) as usize;
        let mut a = vec![0; n * n];
        for j in 0..n {
            let want: Vec<usize> = (0..n).map(|i| x1[i * n + j]).collect();
            let col = (0..vectors).map(|c| self.coords(c)).find(|c| {
                (0..n).all(|i| (0..n).fold(r.zero(), |acc, l| r.add(acc, r.mul(x2[i * n + l], c[l]))) == want[i])
            })?;
            for (i, c) in col.into_iter().enumerate() {
                a[i * n + j] = c;
            }
        }
        Some(a)
    }

    /// `X1 = X2 A ∧ X2 = X1 B`.
    pub fn equivalent(&self, x1: &[usize], x2: &[usize]) -> bool {
        self.leq(x1, x2).is_some() && self.leq(x2, x1).is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EncodingReport {
    pub submodules: usize,
    pub round_trip: Agreement,
    pub leq: Agreement,
    pub equivalent: Agreement,
    pub all_agree: bool,
}

/// Round trip for every submodule, and `leq` and equivalence against
/// inclusion and equality on every pair.
pub fn verify_matrix_encoding(ps: &ProjectiveSpace) -> Result<EncodingReport> {
    let enc = submodule_matrix_encoding(ps);
    let n = ps.len();
    let mats = (0..n).map(|i| enc.encode(i)).collect::<Result<Vec<_>>>()?;
    let mut round_trip = Agreement::default();
    let mut leq = Agreement::default();
    let mut equivalent = Agreement::default();
    for (i, x) in mats.iter().enumerate() {
        round_trip.record(vec![i], enc.decode(x) == i, true);
    }
    let rows = par::map_range(n, |i| {
        (0..n)
            .map(|j| {
                (
                    enc.leq(&mats[i], &mats[j]).is_some(),
                    enc.equivalent(&mats[i], &mats[j]),
                )
            })
            .collect::<Vec<_>>()
    });
    for (i, row) in rows.into_iter().enumerate() {
        for (j, (l, e)) in row.into_iter().enumerate() {
            leq.record(vec![i, j], l, ps.leq(i, j));
            equivalent.record(vec![i, j], e, i == j);
        }
    }
    let all_agree = round_trip.agrees() && leq.agrees() && equivalent.agrees();
    Ok(EncodingReport {
        submodules: n,
        round_trip,
        leq,
        equivalent,
        all_agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_ring, RingSpec};

    fn ring(spec: RingSpec) -> Arc<FiniteRing> {
        Arc::new(build_ring(&spec, &Caps::default()).unwrap())
    }

    #[test]
    fn small_spaces() {
        let caps = Caps::default();
        let f2 = ring(RingSpec::zmod(2));
        assert_eq!(projective_space(&f2, 2, &caps).unwrap().len(), 5);
        assert_eq!(projective_space(&f2, 0, &caps).unwrap().len(), 1);
        assert_eq!(projective_space(&ring(RingSpec::zmod(4)), 1, &caps).unwrap().len(), 3);
        // Subgroups of Z/4 × Z/4.
        assert_eq!(projective_space(&ring(RingSpec::zmod(4)), 2, &caps).unwrap().len(), 15);
    }

    #[test]
    fn definable_ops_match_sets() {
        let caps = Caps::default();
        for spec in [RingSpec::zmod(2), RingSpec::zmod(4)] {
            let ps = projective_space(&ring(spec), 2, &caps).unwrap();
            let rep = lattice_definable_ops(&ps, &caps).unwrap();
            assert!(rep.all_agree, "{rep:?}");
        }
        let ps = projective_space(&ring(RingSpec::zmod(2)), 2, &caps).unwrap();
        let rep = lattice_definable_ops(&ps, &caps).unwrap();
        let line = |v: usize| ps.find(&ps.module().span([v])).unwrap();
        let (x, y, d) = (line(1), line(2), line(3));
        assert!(rep.witnesses.contains(&(x, y, d)));
        assert!(!rep.iso_d.mismatches.iter().any(|t| t == &vec![x, ps.top()]));
        assert_eq!(ps.meet(x, ps.top()), x);
        assert_eq!(ps.join(x, ps.bottom()), x);
    }

    fn interp(ps: &ProjectiveSpace) -> Interpretation<'_> {
        let caps = Caps::default();
        Interpretation::new(ps, Copies::standard(ps, 1, &caps).unwrap(), &caps).unwrap()
    }

    #[test]
    fn graph_submodules() {
        let caps = Caps::default();
        let ps = projective_space(&ring(RingSpec::zmod(2)), 3, &caps).unwrap();
        let it = interp(&ps);
        let one = it.graph_submodule(it.end.one()).unwrap();
        assert_eq!(one.sub, it.u123);
        assert_eq!(ps.size_of(one.sub), 2);
        assert_eq!(it.graph_submodule(it.end.zero()).unwrap().sub, it.u12);
        let sum = lattice_add(&it, one, one).unwrap();
        assert_eq!(sum.q, it.end.zero());
    }

    #[test]
    fn z4_operations() {
        let caps = Caps::default();
        let ps = projective_space(&ring(RingSpec::zmod(4)), 3, &caps).unwrap();
        let it = interp(&ps);
        // With P = R_R, the endomorphism `e ↦ ae` is numbered by where it
        // sends 1, which is the element a itself.
        let g = |a: usize| {
            let q = it.end.elements().find(|&q| it.homs.apply(q, 1) == a).unwrap();
            it.graph_submodule(q).unwrap()
        };
        assert_eq!(lattice_add(&it, g(1), g(2)).unwrap(), g(3));
        assert_eq!(lattice_mul(&it, g(2), g(2)).unwrap(), g(0));
        assert_eq!(lattice_mul(&it, g(1), g(3)).unwrap(), g(3));
        for a in 0..4 {
            assert_eq!(ps.size_of(g(a).sub), 4);
        }
    }

    #[test]
    fn recovery() {
        let caps = Caps::default();
        for spec in [
            RingSpec::zmod(2),
            RingSpec::zmod(4),
            RingSpec::poly_quotient(2, &[0, 0, 1]),
        ] {
            let r = ring(spec);
            let ps = projective_space(&r, 3, &caps).unwrap();
            let it = interp(&ps);
            let (rec, cert) = recover_end_ring(&it).unwrap();
            assert!(cert.is_isomorphism);
            assert!(ring_isomorphic(&r, &rec).is_some());
            assert_eq!(cert.family.len(), r.size());
        }
    }

    #[test]
    fn bad_copies() {
        let caps = Caps::default();
        let ps = projective_space(&ring(RingSpec::zmod(2)), 3, &caps).unwrap();
        let mut c = Copies::standard(&ps, 1, &caps).unwrap();
        c.maps[2] = c.maps[1].clone();
        assert!(matches!(Interpretation::new(&ps, c, &caps), Err(Error::Copies(_))));
        assert!(Copies::standard(&ps, 2, &caps).is_err());
    }

    #[test]
    fn matrix_encoding() {
        let caps = Caps::default();
        let ps = projective_space(&ring(RingSpec::zmod(2)), 2, &caps).unwrap();
        let enc = submodule_matrix_encoding(&ps);
        assert_eq!(enc.decode(&[1, 0, 0, 1]), ps.top());
        assert_eq!(enc.decode(&[0, 0, 0, 0]), ps.bottom());
        let diag = enc.decode(&[1, 0, 1, 0]);
        assert_eq!(ps.size_of(diag), 2);
        assert_eq!(ps.submodule(diag).ones().collect::<Vec<_>>(), vec![0, 3]);
        assert!(enc.leq(&[1, 0, 1, 0], &[1, 0, 0, 1]).is_some());
        assert!(enc.leq(&[1, 0, 0, 1], &[1, 0, 1, 0]).is_none());
        for spec in [RingSpec::zmod(2), RingSpec::zmod(4)] {
            let ps = projective_space(&ring(spec), 2, &caps).unwrap();
            assert!(verify_matrix_encoding(&ps).unwrap().all_agree);
        }
    }
}
