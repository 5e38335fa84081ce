//! Isomorphism search between finite models of one signature.
//!
//! Elements are first split by invariants (preimage counts under every
//! function, fixed points of diagonals, orbit lengths under binary
//! functions, membership counts in relations, constants). The search then
//! maps elements one at a time and closes the partial map under every
//! function; a clash in either direction prunes the branch.

use super::model::{FiniteModel, Relation};
use serde::Serialize;
use std::collections::HashSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelIsomorphism {
    /// For each sort, the image of every element.
    pub maps: Vec<Vec<usize>>,
}

fn relation_tuples(m: &FiniteModel, i: usize) -> Vec<Vec<usize>> {
    match m.relation(i) {
        Relation::Table(t) => t.tuples().to_vec(),
        Relation::Computed(o) => {
            let sorts = m.signature().predicate_sorts(i).to_vec();
            let sizes: Vec<usize> = sorts.iter().map(|&s| m.carrier(s)).collect();
            let mut out = Vec::new();
            let mut t = vec![0usize; sizes.len()];
            'outer: loop {
                if o.holds(&t) {
                    out.push(t.clone());
                }
                for j in 0..t.len() {
                    t[j] += 1;
                    if t[j] < sizes[j] {
                        continue 'outer;
                    }
                    t[j] = 0;
                }
                break;
            }
            out
        }
    }
}

fn invariants(m: &FiniteModel, rels: &[Vec<Vec<usize>>]) -> Vec<Vec<Vec<u64>>> {
    let sig = m.signature();
    let nsorts = sig.sorts().len();
    let mut inv: Vec<Vec<Vec<u64>>> = (0..nsorts).map(|s| vec![Vec::new(); m.carrier(s)]).collect();
    for f in 0..sig.function_count() {
        let (args, result) = sig.function_sorts(f);
        let table = m.function(f).values();
        let mut pre = vec![0u64; m.carrier(result)];
        for &v in table {
            pre[v] += 1;
        }
        for (x, c) in pre.into_iter().enumerate() {
            inv[result][x].push(c);
        }
        if args.iter().all(|&a| a == args[0]) {
            let s = args[0];
            for x in 0..m.carrier(s) {
                let diag = m.function(f).apply(&vec![x; args.len()]);
                inv[s][x].push(u64::from(result == s && diag == x));
                if args.len() == 2 && result == s {
                    // Length of the orbit x, f(x,x), f(f(x,x),x), ...
                    let mut seen = HashSet::new();
                    let mut y = x;
                    while seen.insert(y) {
                        y = m.function(f).apply(&[y, x]);
                    }
                    inv[s][x].push(seen.len() as u64);
                }
            }
        }
    }
    for c in 0..sig.constant_count() {
        let s = sig.constant_sort(c);
        for x in 0..m.carrier(s) {
            inv[s][x].push(u64::from(m.constant(c) == x));
        }
    }
    for (i, tuples) in rels.iter().enumerate() {
        let sorts = sig.predicate_sorts(i);
        for (p, &s) in sorts.iter().enumerate() {
            let mut count = vec![0u64; m.carrier(s)];
            for t in tuples {
                count[t[p]] += 1;
            }
            for (x, c) in count.into_iter().enumerate() {
                inv[s][x].push(c);
            }
        }
    }
    inv
}

struct Search<'a> {
    m1: &'a FiniteModel,
    m2: &'a FiniteModel,
    inv1: Vec<Vec<Vec<u64>>>,
    inv2: Vec<Vec<Vec<u64>>>,
    rels1: Vec<Vec<Vec<usize>>>,
    rels2: Vec<HashSet<Vec<usize>>>,
    // For each relation and sort, tuple indices containing each element.
    occurs: Vec<Vec<Vec<usize>>>,
    fwd: Vec<Vec<Option<usize>>>,
    bwd: Vec<Vec<Option<usize>>>,
    mapped: Vec<Vec<usize>>,
    trail: Vec<(usize, usize)>,
}

impl<'a> Search<'a> {
    fn assign(&mut self, s: usize, a: usize, b: usize, queue: &mut Vec<(usize, usize)>) -> bool {
        match (self.fwd[s][a], self.bwd[s][b]) {
            (Some(x), _) => x == b,
            (None, Some(_)) => false,
            (None, None) => {
                if self.inv1[s][a] != self.inv2[s][b] {
                    return false;
                }
                self.fwd[s][a] = Some(b);
                self.bwd[s][b] = Some(a);
                self.mapped[s].push(a);
                self.trail.push((s, a));
                queue.push((s, a));
                true
            }
        }
    }

    fn undo(&mut self, len: usize) {
        while self.trail.len() > len {
            let (s, a) = self.trail.pop().unwrap();
            let b = self.fwd[s][a].take().unwrap();
            self.bwd[s][b] = None;
            self.mapped[s].pop();
        }
    }

    fn propagate(&mut self, mut queue: Vec<(usize, usize)>) -> bool {
        let sig = self.m1.signature().clone();
        while let Some((s, x)) = queue.pop() {
            for f in 0..sig.function_count() {
                let (args, result) = sig.function_sorts(f);
                let args = args.to_vec();
                for p in 0..args.len() {
                    if args[p] != s {
                        continue;
                    }
                    let lens: Vec<usize> = args
                        .iter()
                        .enumerate()
                        .map(|(j, &a)| if j == p { 1 } else { self.mapped[a].len() })
                        .collect();
                    if lens.contains(&0) {
                        continue;
                    }
                    let mut ix = vec![0usize; args.len()];
                    let mut t1 = vec![0usize; args.len()];
                    let mut t2 = vec![0usize; args.len()];
                    loop {
                        for j in 0..args.len() {
                            let a = if j == p { x } else { self.mapped[args[j]][ix[j]] };
                            t1[j] = a;
                            t2[j] = self.fwd[args[j]][a].unwrap();
                        }
                        let out1 = self.m1.function(f).apply(&t1);
                        let out2 = self.m2.function(f).apply(&t2);
                        if !self.assign(result, out1, out2, &mut queue) {
                            return false;
                        }
                        let mut j = 0;
                        while j < ix.len() {
                            ix[j] += 1;
                            if ix[j] < lens[j] {
                                break;
                            }
                            ix[j] = 0;
                            j += 1;
                        }
                        if j == ix.len() {
                            break;
                        }
                    }
                }
            }
            for r in 0..self.rels1.len() {
                let sorts = sig.predicate_sorts(r);
                if !sorts.contains(&s) {
                    continue;
                }
                let candidates: Vec<usize> = self.occurs_of(r, s, x);
                for ti in candidates {
                    let t = &self.rels1[r][ti];
                    let image: Option<Vec<usize>> = t.iter().zip(sorts).map(|(&a, &so)| self.fwd[so][a]).collect();
                    if let Some(img) = image {
                        if !self.rels2[r].contains(&img) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn occurs_of(&self, r: usize, s: usize, x: usize) -> Vec<usize> {
        let sorts = self.m1.signature().predicate_sorts(r);
        self.occurs[r]
            .get(x)
            .map(|v| {
                v.iter()
                    .copied()
                    .filter(|&ti| self.rels1[r][ti].iter().zip(sorts).any(|(&a, &so)| so == s && a == x))
                    .collect()
            })
            .unwrap_or_default()
    }

    fn complete(&self) -> bool {
        let sig = self.m1.signature();
        for f in 0..sig.function_count() {
            let (args, result) = sig.function_sorts(f);
            let n = self.m1.function(f).values().len();
            let sizes: Vec<usize> = args.iter().map(|&a| self.m1.carrier(a)).collect();
            let mut t1 = vec![0usize; args.len()];
            for _ in 0..n {
                let t2: Vec<usize> = t1.iter().zip(args).map(|(&a, &s)| self.fwd[s][a].unwrap()).collect();
                let v1 = self.m1.function(f).apply(&t1);
                if self.fwd[result][v1] != Some(self.m2.function(f).apply(&t2)) {
                    return false;
                }
                for j in 0..t1.len() {
                    t1[j] += 1;
                    if t1[j] < sizes[j] {
                        break;
                    }
                    t1[j] = 0;
                }
            }
        }
        for c in 0..sig.constant_count() {
            let s = sig.constant_sort(c);
            if self.fwd[s][self.m1.constant(c)] != Some(self.m2.constant(c)) {
                return false;
            }
        }
        for (r, tuples) in self.rels1.iter().enumerate() {
            let sorts = sig.predicate_sorts(r);
            for t in tuples {
                let img: Vec<usize> = t.iter().zip(sorts).map(|(&a, &s)| self.fwd[s][a].unwrap()).collect();
                if !self.rels2[r].contains(&img) {
                    return false;
                }
            }
        }
        true
    }

    fn next_unmapped(&self) -> Option<(usize, usize)> {
        for (s, f) in self.fwd.iter().enumerate() {
            if let Some(a) = f.iter().position(Option::is_none) {
                return Some((s, a));
            }
        }
        None
    }

    fn solve(&mut self) -> bool {
        let Some((s, a)) = self.next_unmapped() else {
            return self.complete();
        };
        for b in 0..self.m2.carrier(s) {
            if self.bwd[s][b].is_some() || self.inv1[s][a] != self.inv2[s][b] {
                continue;
            }
            let mark = self.trail.len();
            let mut queue = Vec::new();
            if self.assign(s, a, b, &mut queue) && self.propagate(queue) && self.solve() {
                return true;
            }
            self.undo(mark);
        }
        false
    }
}

/// Finds an isomorphism from `m1` onto `m2`, if one exists. Relations
/// computed on demand are enumerated over their whole argument space.
pub fn models_isomorphic(m1: &FiniteModel, m2: &FiniteModel) -> Option<ModelIsomorphism> {
    if m1.signature() != m2.signature() || m1.carriers() != m2.carriers() {
        return None;
    }
    let sig = m1.signature();
    let rels1: Vec<Vec<Vec<usize>>> = (0..sig.predicate_count()).map(|i| relation_tuples(m1, i)).collect();
    let rels2v: Vec<Vec<Vec<usize>>> = (0..sig.predicate_count()).map(|i| relation_tuples(m2, i)).collect();
    if rels1.iter().zip(&rels2v).any(|(a, b)| a.len() != b.len()) {
        return None;
    }
    let inv1 = invariants(m1, &rels1);
    let inv2 = invariants(m2, &rels2v);
    for s in 0..sig.sorts().len() {
        let mut a = inv1[s].clone();
        let mut b = inv2[s].clone();
        a.sort();
        b.sort();
        if a != b {
            return None;
        }
    }
    let max_carrier = m1.carriers().iter().copied().max().unwrap_or(0);
    let occurs: Vec<Vec<Vec<usize>>> = rels1
        .iter()
        .map(|tuples| {
            let mut occ = vec![Vec::new(); max_carrier];
            for (ti, t) in tuples.iter().enumerate() {
                for &a in t {
                    if occ[a].last() != Some(&ti) {
                        occ[a].push(ti);
                    }
                }
            }
            occ
        })
        .collect();
    let nsorts = sig.sorts().len();
    let mut search = Search {
        m1,
        m2,
        inv1,
        inv2,
        rels1,
        rels2: rels2v.into_iter().map(|v| v.into_iter().collect()).collect(),
        occurs,
        fwd: (0..nsorts).map(|s| vec![None; m1.carrier(s)]).collect(),
        bwd: (0..nsorts).map(|s| vec![None; m2.carrier(s)]).collect(),
        mapped: vec![Vec::new(); nsorts],
        trail: Vec::new(),
    };
    let mut queue = Vec::new();
    for c in 0..sig.constant_count() {
        let s = sig.constant_sort(c);
        if !search.assign(s, m1.constant(c), m2.constant(c), &mut queue) {
            return None;
        }
    }
    if !search.propagate(queue) || !search.solve() {
        return None;
    }
    Some(ModelIsomorphism {
        maps: search
            .fwd
            .iter()
            .map(|f| f.iter().map(|x| x.unwrap()).collect())
            .collect(),
    })
}
