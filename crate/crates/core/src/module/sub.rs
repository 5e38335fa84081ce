use super::finite::FiniteModule;
use crate::caps::Caps;
use crate::error::Result;
use fixedbitset::FixedBitSet;
use std::collections::HashSet;

/// All submodules of `m`, found by closing `S + xR` from `{0}`, with one
/// `x` per coset of `S`. Sorted by size, then by element list.
pub fn submodules(m: &FiniteModule, caps: &Caps) -> Result<Vec<FixedBitSet>> {
    caps.check("module_size", m.size() as u128)?;
    let cyclic: Vec<FixedBitSet> = m.elements().map(|x| m.cyclic(x)).collect();
    let mut zero = FixedBitSet::with_capacity(m.size());
    zero.insert(m.zero());
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    seen.insert(zero.clone());
    let mut queue = vec![zero];
    while let Some(s) = queue.pop() {
        let mut covered = s.clone();
        for x in m.elements() {
            if covered.contains(x) {
                continue;
            }
            for y in s.ones() {
                covered.insert(m.add(x, y));
            }
            let t = m.sum_sets(&s, &cyclic[x]);
            if seen.insert(t.clone()) {
                queue.push(t);
            }
        }
    }
    let mut out: Vec<FixedBitSet> = seen.into_iter().collect();
    out.sort_by(|a, b| {
        a.count_ones(..)
            .cmp(&b.count_ones(..))
            .then_with(|| a.ones().cmp(b.ones()))
    });
    Ok(out)
}
