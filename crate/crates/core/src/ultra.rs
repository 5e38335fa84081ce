//! Filters over finite index sets and filter products of finite models.
//!
//! Subsets of `I = {0, .., n-1}` are bitmasks. Over a finite set every
//! filter is `{X : Y ⊆ X}` for `Y` the intersection of its members, so the
//! `=_D` classes of choice functions are determined by their restriction to
//! `Y`; the product carrier is that set of restrictions, each class
//! represented by its least choice function (zero outside `Y`).

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::logic::{
    models_isomorphic, sampled_equivalence, EquivalenceReport, FiniteModel, Formula, ModelBuilder, ModelIsomorphism,
};
use serde::Serialize;
use std::fmt;

type Mask = u32;

fn mask_elements(n: usize, m: Mask) -> Vec<usize> {
    (0..n).filter(|&i| m >> i & 1 == 1).collect()
}

/// A family of subsets of a finite index set, closed under intersection
/// and supersets and containing the whole set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Filter {
    n: usize,
    /// Sorted member masks.
    members: Vec<Mask>,
}

impl Filter {
    /// Checks the filter axioms on the given family.
    pub fn new(n: usize, members: impl IntoIterator<Item = Vec<usize>>) -> Result<Filter> {
        if n > 31 {
            return Err(Error::InvalidParameter(format!("index set of size {n}")));
        }
        let mut masks = Vec::new();
        for set in members {
            let mut m = 0;
            for i in set {
                if i >= n {
                    return Err(Error::Filter(format!("index {i} outside the index set")));
                }
                m |= 1 << i;
            }
            masks.push(m);
        }
        Filter::from_masks(n, masks)
    }

    fn from_masks(n: usize, mut members: Vec<Mask>) -> Result<Filter> {
        members.sort_unstable();
        members.dedup();
        let f = Filter { n, members };
        f.check()?;
        Ok(f)
    }

    fn full(&self) -> Mask {
        ((1u64 << self.n) - 1) as Mask
    }

    fn check(&self) -> Result<()> {
        if !self.contains_mask(self.full()) {
            return Err(Error::Filter("the index set is not a member".into()));
        }
        for &a in &self.members {
            for &b in &self.members {
                if !self.contains_mask(a & b) {
                    return Err(Error::Filter(format!(
                        "not closed under intersection: {:?} ∩ {:?}",
                        mask_elements(self.n, a),
                        mask_elements(self.n, b)
                    )));
                }
            }
            let rest = self.full() & !a;
            // Every superset of `a` is `a` plus a subset of the rest.
            let mut sub: Mask = rest;
            loop {
                if !self.contains_mask(a | sub) {
                    return Err(Error::Filter(format!(
                        "not upward closed above {:?}",
                        mask_elements(self.n, a)
                    )));
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
        }
        Ok(())
    }

    /// `{X : y ⊆ X}`.
    pub fn principal(n: usize, y: &[usize]) -> Result<Filter> {
        let mut ym: Mask = 0;
        for &i in y {
            if i >= n {
                return Err(Error::Filter(format!("index {i} outside the index set")));
            }
            ym |= 1 << i;
        }
        let full = ((1u64 << n) - 1) as Mask;
        Filter::from_masks(n, (0..=full).filter(|&x| x & ym == ym).collect())
    }

    /// `{I}`.
    pub fn trivial(n: usize) -> Filter {
        Filter::principal(n, &(0..n).collect::<Vec<_>>()).expect("valid")
    }

    /// The whole power set.
    pub fn improper(n: usize) -> Filter {
        Filter::principal(n, &[]).expect("valid")
    }

    pub fn index_size(&self) -> usize {
        self.n
    }

    pub fn contains(&self, set: &[usize]) -> bool {
        self.contains_mask(set.iter().fold(0, |m, &i| m | 1 << i))
    }

    fn contains_mask(&self, m: Mask) -> bool {
        self.members.binary_search(&m).is_ok()
    }

    pub fn members(&self) -> Vec<Vec<usize>> {
        self.members.iter().map(|&m| mask_elements(self.n, m)).collect()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_proper(&self) -> bool {
        !self.contains_mask(0)
    }

    /// Exactly one of `X` and `I ∖ X` is a member, for every `X`.
    pub fn is_ultra(&self) -> bool {
        (0..=self.full()).all(|x| self.contains_mask(x) != self.contains_mask(self.full() & !x))
    }

    /// The intersection of all members; the filter is everything above it.
    pub fn generator(&self) -> Vec<usize> {
        mask_elements(self.n, self.generator_mask())
    }

    fn generator_mask(&self) -> Mask {
        self.members.iter().fold(self.full(), |a, &m| a & m)
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "↑{:?} over {}", self.generator(), self.n)
    }
}

impl Serialize for Filter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Filter", 4)?;
        st.serialize_field("index_size", &self.n)?;
        st.serialize_field("generator", &self.generator())?;
        st.serialize_field("proper", &self.is_proper())?;
        st.serialize_field("members", &self.members.len())?;
        st.end()
    }
}

/// A filter in which every set or its complement is a member.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Ultrafilter(Filter);

impl Ultrafilter {
    pub fn new(f: Filter) -> Result<Ultrafilter> {
        if !f.is_proper() {
            return Err(Error::ImproperFilter);
        }
        if !f.is_ultra() {
            return Err(Error::Filter(format!("{f} is not an ultrafilter")));
        }
        Ok(Ultrafilter(f))
    }

    /// `{X : i ∈ X}`.
    pub fn principal(n: usize, i: usize) -> Result<Ultrafilter> {
        Ultrafilter::new(Filter::principal(n, &[i])?)
    }

    pub fn filter(&self) -> &Filter {
        &self.0
    }

    /// The index generating it.
    pub fn point(&self) -> usize {
        self.0.generator()[0]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FilterEnumeration {
    pub index_size: usize,
    /// Every filter, including the improper one.
    pub filters: Vec<Filter>,
    pub ultrafilters: Vec<Ultrafilter>,
}

/// Every family of subsets of `{0, .., n-1}` satisfying the filter axioms,
/// found by deciding subsets from the largest down. Each ultrafilter is
/// checked to be principal at a single index.
pub fn enumerate_filters(n: usize, caps: &Caps) -> Result<FilterEnumeration> {
    caps.check("index_set", n as u128)?;
    if n > 5 {
        return Err(Error::cap("index_set", n as u128, 5));
    }
    let full: Mask = ((1u64 << n) - 1) as Mask;
    let mut order: Vec<Mask> = (0..=full).collect();
    order.sort_by_key(|m| (std::cmp::Reverse(m.count_ones()), *m));
    let mut state = vec![None::<bool>; full as usize + 1];
    let mut found = Vec::new();
    search(&order, 0, &mut state, &mut found, n);
    let mut filters: Vec<Filter> = found
        .into_iter()
        .map(|m| Filter::from_masks(n, m))
        .collect::<Result<_>>()?;
    filters.sort_by_key(|f| (std::cmp::Reverse(f.generator_mask().count_ones()), f.generator_mask()));
    let mut ultrafilters = Vec::new();
    for f in &filters {
        if f.is_proper() && f.is_ultra() {
            let u = Ultrafilter::new(f.clone())?;
            if Ultrafilter::principal(n, u.point())? != u {
                return Err(Error::Filter(format!("non-principal ultrafilter {f}")));
            }
            ultrafilters.push(u);
        }
    }
    if ultrafilters.len() != n {
        return Err(Error::Filter(format!(
            "{} ultrafilters over {n} indices",
            ultrafilters.len()
        )));
    }
    Ok(FilterEnumeration {
        index_size: n,
        filters,
        ultrafilters,
    })
}

fn search(order: &[Mask], k: usize, state: &mut [Option<bool>], out: &mut Vec<Vec<Mask>>, n: usize) {
    if k == order.len() {
        out.push(
            (0..state.len() as Mask)
                .filter(|&m| state[m as usize] == Some(true))
                .collect(),
        );
        return;
    }
    let x = order[k];
    let full = state.len() as Mask - 1;
    for include in [true, false] {
        if k == 0 && !include {
            continue;
        }
        // Supersets were decided earlier; upward closure forces `x` in if
        // any member is below it, which is checked when `x` is excluded.
        let ok = if include {
            // Every strict superset must already be in.
            (0..n).all(|i| x >> i & 1 == 1 || state[(x | 1 << i) as usize] == Some(true))
                && (0..=full).all(|y| state[y as usize] != Some(true) || state[(x & y) as usize] != Some(false))
        } else {
            // `x` must not be an intersection of two members.
            (0..=full).all(|y| {
                state[y as usize] != Some(true) || (0..=full).all(|z| state[z as usize] != Some(true) || y & z != x)
            })
        };
        if ok {
            state[x as usize] = Some(include);
            search(order, k + 1, state, out, n);
            state[x as usize] = None;
        }
    }
}

/// A filter product `∏_D A_i` with the data needed to read its elements.
#[derive(Debug, Clone)]
pub struct FilterProduct {
    pub model: FiniteModel,
    pub filter: Filter,
    /// `Y`, the generator of the filter.
    pub support: Vec<usize>,
    /// Carrier sizes of every factor, indexed `[factor][sort]`.
    sizes: Vec<Vec<usize>>,
}

impl FilterProduct {
    /// The least choice function in class `c` of sort `s`.
    pub fn representative(&self, s: usize, mut c: usize) -> Vec<usize> {
        let mut f = vec![0; self.sizes.len()];
        for &i in &self.support {
            let k = self.sizes[i][s];
            f[i] = c % k;
            c /= k;
        }
        f
    }

    /// The class of a choice function.
    pub fn class_of(&self, s: usize, f: &[usize]) -> usize {
        class_of(&self.support, &self.sizes, s, f)
    }
}

fn class_of(support: &[usize], sizes: &[Vec<usize>], s: usize, f: &[usize]) -> usize {
    let mut c = 0;
    let mut mult = 1;
    for &i in support {
        c += f[i] * mult;
        mult *= sizes[i][s];
    }
    c
}

/// Tuples of `arity` elements of the given carrier sizes, first coordinate
/// least significant.
fn tuples(sizes: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = sizes.iter().product();
    (0..total).map(move |mut k| {
        sizes
            .iter()
            .map(|&n| {
                let x = k % n;
                k /= n;
                x
            })
            .collect()
    })
}

/// `∏_D A_i` for a proper filter `D` over the indices of `models`.
pub fn filter_product(models: &[FiniteModel], d: &Filter, caps: &Caps) -> Result<FilterProduct> {
    if models.is_empty() || models.len() != d.index_size() {
        return Err(Error::InvalidParameter(format!(
            "{} models for a filter over {} indices",
            models.len(),
            d.index_size()
        )));
    }
    if !d.is_proper() {
        return Err(Error::ImproperFilter);
    }
    let sig = models[0].signature().clone();
    if models.iter().any(|m| m.signature() != &sig) {
        return Err(Error::Signature("factors have different signatures".into()));
    }
    let ym = d.generator_mask();
    if Filter::principal(d.n, &mask_elements(d.n, ym))? != *d {
        return Err(Error::Filter(format!("{d} is not generated by its intersection")));
    }
    let support = mask_elements(d.n, ym);
    let sizes: Vec<Vec<usize>> = models.iter().map(|m| m.carriers().to_vec()).collect();
    let nsorts = sig.sorts().len();
    let mut carriers = Vec::with_capacity(nsorts);
    for s in 0..nsorts {
        let k: u128 = support.iter().map(|&i| sizes[i][s] as u128).product();
        caps.check("enumeration", k)?;
        carriers.push(k as usize);
    }
    let mut p = FilterProduct {
        model: models[0].clone(),
        filter: d.clone(),
        support,
        sizes,
    };
    verify_equivalence(&p, d, caps)?;
    // A second representative that differs outside the support, used to
    // check that operations respect the classes.
    let other = |p: &FilterProduct, s: usize, c: usize| -> Vec<usize> {
        let mut f = p.representative(s, c);
        for i in 0..f.len() {
            if ym >> i & 1 == 0 {
                f[i] = p.sizes[i][s] - 1;
            }
        }
        f
    };
    let mut b = ModelBuilder::new(sig.clone());
    for (s, name) in sig.sorts().iter().enumerate() {
        b = b.carrier(name, carriers[s])?;
    }
    for fi in 0..sig.function_count() {
        let (args, result) = sig.function_sorts(fi);
        let arg_sizes: Vec<usize> = args.iter().map(|&s| carriers[s]).collect();
        caps.check("enumeration", arg_sizes.iter().map(|&k| k as u128).product())?;
        let mut values = Vec::new();
        for t in tuples(&arg_sizes) {
            let mut results = Vec::with_capacity(2);
            for alt in [false, true] {
                let reps: Vec<Vec<usize>> = t
                    .iter()
                    .zip(args)
                    .map(|(&c, &s)| if alt { other(&p, s, c) } else { p.representative(s, c) })
                    .collect();
                let image: Vec<usize> = (0..models.len())
                    .map(|i| {
                        models[i]
                            .function(fi)
                            .apply(&reps.iter().map(|r| r[i]).collect::<Vec<_>>())
                    })
                    .collect();
                results.push(p.class_of(result, &image));
            }
            if results[0] != results[1] {
                return Err(Error::Filter(format!(
                    "{} is not well defined on classes",
                    sig.function_name(fi)
                )));
            }
            values.push(results[0]);
        }
        b = b.function(sig.function_name(fi), values)?;
    }
    for pi in 0..sig.predicate_count() {
        let sorts = sig.predicate_sorts(pi).to_vec();
        let arg_sizes: Vec<usize> = sorts.iter().map(|&s| carriers[s]).collect();
        caps.check("enumeration", arg_sizes.iter().map(|&k| k as u128).product())?;
        let mut holding = Vec::new();
        for t in tuples(&arg_sizes) {
            let mut verdicts = Vec::with_capacity(2);
            for alt in [false, true] {
                let reps: Vec<Vec<usize>> = t
                    .iter()
                    .zip(&sorts)
                    .map(|(&c, &s)| if alt { other(&p, s, c) } else { p.representative(s, c) })
                    .collect();
                let agree: Mask = (0..models.len())
                    .filter(|&i| {
                        models[i]
                            .relation(pi)
                            .holds(&reps.iter().map(|r| r[i]).collect::<Vec<_>>())
                    })
                    .fold(0, |m, i| m | 1 << i);
                verdicts.push(d.contains_mask(agree));
            }
            if verdicts[0] != verdicts[1] {
                return Err(Error::Filter(format!(
                    "{} is not well defined on classes",
                    sig.predicate_name(pi)
                )));
            }
            if verdicts[0] {
                holding.push(t);
            }
        }
        b = b.table_relation(sig.predicate_name(pi), holding)?;
    }
    for ci in 0..sig.constant_count() {
        let s = sig.constant_sort(ci);
        let f: Vec<usize> = models.iter().map(|m| m.constant(ci)).collect();
        b = b.constant(sig.constant_name(ci), p.class_of(s, &f))?;
    }
    p.model = b.build()?;
    Ok(p)
}

/// Checks that `=_D` is an equivalence relation whose classes are the
/// restriction classes. Exhaustive over choice functions when they fit in
/// the enumeration cap (all triples when those fit too).
fn verify_equivalence(p: &FilterProduct, d: &Filter, caps: &Caps) -> Result<()> {
    let n = p.sizes.len();
    let agree = |f: &[usize], g: &[usize]| -> Mask { (0..n).filter(|&i| f[i] == g[i]).fold(0, |m, i| m | 1 << i) };
    let eq = |f: &[usize], g: &[usize]| d.contains_mask(agree(f, g));
    for s in 0..p.sizes[0].len() {
        let sizes: Vec<usize> = p.sizes.iter().map(|z| z[s]).collect();
        let total: u128 = sizes.iter().map(|&k| k as u128).product();
        if total > caps.enumeration as u128 {
            continue;
        }
        let all: Vec<Vec<usize>> = tuples(&sizes).collect();
        for f in &all {
            let c = p.class_of(s, f);
            if !eq(f, &p.representative(s, c)) {
                return Err(Error::Filter(format!(
                    "choice function {f:?} is not equivalent to its representative"
                )));
            }
        }
        let classes: usize = p.support.iter().map(|&i| sizes[i]).product();
        if (classes as u128).pow(2) <= caps.enumeration as u128 {
            for a in 0..classes {
                for b in a + 1..classes {
                    if eq(&p.representative(s, a), &p.representative(s, b)) {
                        return Err(Error::Filter(format!("classes {a} and {b} of sort {s} coincide")));
                    }
                }
            }
        }
        if total.pow(3) <= caps.enumeration as u128 {
            for f in &all {
                for g in &all {
                    if eq(f, g) != eq(g, f) {
                        return Err(Error::Filter("=_D is not symmetric".into()));
                    }
                    if !eq(f, g) {
                        continue;
                    }
                    for h in &all {
                        if eq(g, h) && !eq(f, h) {
                            return Err(Error::Filter("=_D is not transitive".into()));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct UltrapowerReport {
    pub filter: Filter,
    pub point: usize,
    pub base_size: Vec<usize>,
    pub product_size: Vec<usize>,
    pub isomorphism: Option<ModelIsomorphism>,
    pub equivalence: EquivalenceReport,
    pub all_agree: bool,
}

/// Builds `∏_D U` for the constant family and compares it with `U`: an
/// isomorphism search and every given sentence on both sides.
pub fn check_ultrapower_equivalence(
    u: &FiniteModel,
    d: &Ultrafilter,
    sentences: &[Formula],
    caps: &Caps,
) -> Result<UltrapowerReport> {
    let family = vec![u.clone(); d.filter().index_size()];
    let p = filter_product(&family, d.filter(), caps)?;
    let isomorphism = models_isomorphic(u, &p.model);
    let equivalence = sampled_equivalence(u, &p.model, sentences)?;
    let all_agree = isomorphism.is_some() && equivalence.all_agree;
    Ok(UltrapowerReport {
        filter: d.filter().clone(),
        point: d.point(),
        base_size: u.carriers().to_vec(),
        product_size: p.model.carriers().to_vec(),
        isomorphism,
        equivalence,
        all_agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_ring, ring_model, RingSpec};
    use crate::logic::parse_formula;

    /// Every family of subsets satisfying the axioms, by brute force.
    fn brute_force_filters(n: usize) -> Vec<Vec<Mask>> {
        let subsets = 1usize << n;
        let mut out = Vec::new();
        for fam in 0u64..(1u64 << subsets) {
            let members: Vec<Mask> = (0..subsets as Mask).filter(|&m| fam >> m & 1 == 1).collect();
            if Filter::from_masks(n, members.clone()).is_ok() {
                out.push(members);
            }
        }
        out
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for n in 1..=4 {
            let e = enumerate_filters(n, &Caps::default()).unwrap();
            let mut got: Vec<Vec<Mask>> = e.filters.iter().map(|f| f.members.clone()).collect();
            let mut want = brute_force_filters(n);
            got.sort();
            want.sort();
            assert_eq!(got, want, "n = {n}");
            assert_eq!(e.filters.len(), 1 << n);
            assert_eq!(e.ultrafilters.len(), n);
        }
        let e = enumerate_filters(3, &Caps::default()).unwrap();
        assert!(e.filters.contains(&Filter::trivial(3)));
        assert!(e.filters.contains(&Filter::improper(3)));
        assert!(e.ultrafilters.iter().all(|u| u.filter().is_proper()));
        assert!(matches!(
            enumerate_filters(6, &Caps::default()),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn axioms() {
        assert!(Filter::new(3, [vec![0, 1, 2], vec![0, 1]]).is_ok());
        assert!(Filter::new(3, [vec![0, 1]]).is_err());
        assert!(Filter::new(3, [vec![0, 1, 2], vec![0, 1], vec![1, 2]]).is_err());
        assert!(Filter::new(2, [vec![0, 1], vec![0], vec![1]]).is_err());
        let f = Filter::principal(4, &[1, 3]).unwrap();
        assert_eq!(f.generator(), vec![1, 3]);
        assert!(f.contains(&[0, 1, 3]) && !f.contains(&[1]));
        assert!(!f.is_ultra());
        assert!(Ultrafilter::new(Filter::improper(2)).is_err());
        assert_eq!(Ultrafilter::principal(4, 2).unwrap().point(), 2);
    }

    fn rm(n: usize) -> FiniteModel {
        ring_model(&build_ring(&RingSpec::zmod(n), &Caps::default()).unwrap())
    }

    #[test]
    fn principal_products_pick_a_factor() {
        let caps = Caps::default();
        let models = [rm(2), rm(3), rm(2)];
        let d = Filter::principal(3, &[1]).unwrap();
        let p = filter_product(&models, &d, &caps).unwrap();
        assert!(models_isomorphic(&p.model, &models[1]).is_some());
        assert_eq!(p.representative(0, 2), vec![0, 2, 0]);
        assert!(matches!(
            filter_product(&models, &Filter::improper(3), &caps),
            Err(Error::ImproperFilter)
        ));
    }

    #[test]
    fn trivial_filter_on_identical_models() {
        let caps = Caps::default();
        let u = rm(2);
        let p = filter_product(&[u.clone(), u.clone(), u.clone()], &Filter::trivial(3), &caps).unwrap();
        assert_eq!(p.model.carriers(), &[8]);
        // Z2^3 as a ring.
        let z2cube = ring_model(
            &build_ring(
                &RingSpec::product(
                    RingSpec::zmod(2),
                    RingSpec::product(RingSpec::zmod(2), RingSpec::zmod(2)),
                ),
                &caps,
            )
            .unwrap(),
        );
        assert!(models_isomorphic(&p.model, &z2cube).is_some());
        let one = filter_product(&[u.clone()], &Filter::trivial(1), &caps).unwrap();
        assert!(models_isomorphic(&one.model, &u).is_some());
    }

    #[test]
    fn ultrapowers() {
        let caps = Caps::default();
        let u = rm(4);
        let sig = u.signature().clone();
        let sentences: Vec<Formula> = [
            "exists x:R. ~(x = zero) & add(x, x) = zero",
            "forall x:R. mul(x, x) = x -> x = zero | x = one",
        ]
        .iter()
        .map(|t| parse_formula(t, &sig).unwrap())
        .collect();
        for d in enumerate_filters(3, &caps).unwrap().ultrafilters {
            let r = check_ultrapower_equivalence(&u, &d, &sentences, &caps).unwrap();
            assert!(r.all_agree);
            assert_eq!(r.product_size, vec![4]);
        }
        let one = rm(1);
        let d = Ultrafilter::principal(2, 0).unwrap();
        assert!(
            check_ultrapower_equivalence(&one, &d, &sentences, &caps)
                .unwrap()
                .all_agree
        );
    }
}
