use super::eval::EvalCache;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::logic::{Candidates, FiniteModel, ModelBuilder, RelationOracle, Signature, SignatureDoc};
use crate::module::{HomSet, ModuleHom, Presentation, Skeleton};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::ops::Range;
use std::sync::{Arc, OnceLock};

const ASSOCIATIVITY_SAMPLES: usize = 1 << 16;
const SIGNATURE_JSON: &str = include_str!("signature.json");

/// The fixed two-sorted category signature: sorts `Obj`, `Mor`, predicates
/// `In(f, A, B)` (f : A → B) and `Comp(f, g, h)` (h = f∘g), function `Id`.
pub fn category_signature() -> Arc<Signature> {
    static SIG: OnceLock<Arc<Signature>> = OnceLock::new();
    SIG.get_or_init(|| Arc::new(Signature::from_json(SIGNATURE_JSON).expect("shipped signature is valid")))
        .clone()
}

pub fn category_signature_doc() -> SignatureDoc {
    category_signature().doc().clone()
}

/// Morphism bookkeeping shared between the model's computed relations and
/// the [`CategoryModel`]. Morphisms are numbered by (source, target, index
/// in the hom set), so `Mor(A, ·)` is a contiguous block.
pub(crate) struct Arrows {
    objects: usize,
    pres: Vec<Presentation>,
    homs: Vec<Vec<HomSet>>,
    offsets: Vec<usize>,
    src: Vec<u32>,
    tgt: Vec<u32>,
    local: Vec<u32>,
}

impl fmt::Debug for Arrows {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Arrows({} objects, {} morphisms)", self.objects, self.src.len())
    }
}

impl Arrows {
    fn new(pres: Vec<Presentation>, homs: Vec<Vec<HomSet>>, caps: &Caps) -> Result<Self> {
        let n = homs.len();
        let total: usize = homs.iter().flatten().map(HomSet::len).sum();
        caps.check("morphisms", total as u128)?;
        let mut offsets = Vec::with_capacity(n * n + 1);
        let (mut src, mut tgt, mut local) = (Vec::new(), Vec::new(), Vec::new());
        for a in 0..n {
            for b in 0..n {
                offsets.push(src.len());
                for i in 0..homs[a][b].len() {
                    src.push(a as u32);
                    tgt.push(b as u32);
                    local.push(i as u32);
                }
            }
        }
        offsets.push(src.len());
        Ok(Arrows {
            objects: n,
            pres,
            homs,
            offsets,
            src,
            tgt,
            local,
        })
    }

    fn range(&self, a: usize, b: usize) -> Range<usize> {
        let k = a * self.objects + b;
        self.offsets[k]..self.offsets[k + 1]
    }

    fn from(&self, a: usize) -> Range<usize> {
        self.offsets[a * self.objects]..self.offsets[(a + 1) * self.objects]
    }

    /// Every `g` with `f∘g = h`, or `None` when scanning `Mor(src h, src f)`
    /// is no more work. Solved generator by generator through preimages
    /// under `f`.
    fn right_factors(&self, f: usize, h: usize) -> Option<Vec<usize>> {
        let (b, c) = (self.src[f] as usize, self.tgt[f] as usize);
        let a = self.src[h] as usize;
        let fmap = self.homs[b][c].map(self.local[f] as usize);
        let targets = self.homs[a][c].images(self.local[h] as usize);
        let mut pre: Vec<Vec<usize>> = vec![Vec::new(); targets.len()];
        for (x, &y) in fmap.iter().enumerate() {
            for (p, &t) in pre.iter_mut().zip(targets) {
                if t == y {
                    p.push(x);
                }
            }
        }
        let total = pre.iter().try_fold(1usize, |acc, p| acc.checked_mul(p.len()))?;
        let range = self.range(a, b);
        if total >= range.len() {
            return None;
        }
        let mut out = Vec::new();
        if total == 0 {
            return Some(out);
        }
        let homs = &self.homs[a][b];
        let mut digits = vec![0usize; pre.len()];
        loop {
            if let Some(i) = homs.index_of(digits.iter().zip(&pre).map(|(&d, p)| p[d])) {
                out.push(range.start + i);
            }
            let mut k = 0;
            loop {
                if k == digits.len() {
                    return Some(out);
                }
                digits[k] += 1;
                if digits[k] < pre[k].len() {
                    break;
                }
                digits[k] = 0;
                k += 1;
            }
        }
    }

    fn compose(&self, f: usize, g: usize) -> Option<usize> {
        let (b, c) = (self.src[f] as usize, self.tgt[f] as usize);
        let (a, b2) = (self.src[g] as usize, self.tgt[g] as usize);
        if b != b2 {
            return None;
        }
        let (fi, gi) = (self.local[f] as usize, self.local[g] as usize);
        let hf = &self.homs[b][c];
        let images = self.homs[a][b].images(gi).iter().map(|&y| hf.apply(fi, y as usize));
        let i = self.homs[a][c].index_of(images).expect("composite is a homomorphism");
        Some(self.range(a, c).start + i)
    }
}

#[derive(Debug)]
struct InOracle(Arc<Arrows>);

impl RelationOracle for InOracle {
    fn holds(&self, args: &[usize]) -> bool {
        let a = &self.0;
        a.src[args[0]] as usize == args[1] && a.tgt[args[0]] as usize == args[2]
    }

    fn candidates(&self, pos: usize, bound: &[Option<usize>]) -> Option<Candidates> {
        let a = &self.0;
        match pos {
            0 => match (bound[1], bound[2]) {
                (Some(x), Some(y)) => Some(Candidates::Range(a.range(x, y))),
                (Some(x), None) => Some(Candidates::Range(a.from(x))),
                (None, Some(y)) => Some(Candidates::List((0..a.objects).flat_map(|x| a.range(x, y)).collect())),
                (None, None) => None,
            },
            1 => bound[0].map(|f| Candidates::List(vec![a.src[f] as usize])),
            _ => bound[0].map(|f| Candidates::List(vec![a.tgt[f] as usize])),
        }
    }
}

#[derive(Debug)]
struct CompOracle(Arc<Arrows>);

impl RelationOracle for CompOracle {
    fn holds(&self, args: &[usize]) -> bool {
        self.0.compose(args[0], args[1]) == Some(args[2])
    }

    fn candidates(&self, pos: usize, bound: &[Option<usize>]) -> Option<Candidates> {
        let a = &self.0;
        let obj = |x: u32| x as usize;
        match (pos, bound[0], bound[1], bound[2]) {
            (2, Some(f), Some(g), _) => Some(Candidates::List(a.compose(f, g).into_iter().collect())),
            (0, _, Some(g), Some(h)) => Some(if a.src[g] == a.src[h] {
                Candidates::Range(a.range(obj(a.tgt[g]), obj(a.tgt[h])))
            } else {
                Candidates::List(Vec::new())
            }),
            (1, Some(f), _, Some(h)) => Some(if a.tgt[f] == a.tgt[h] {
                match a.right_factors(f, h) {
                    Some(list) => Candidates::List(list),
                    None => Candidates::Range(a.range(obj(a.src[h]), obj(a.src[f]))),
                }
            } else {
                Candidates::List(Vec::new())
            }),
            (0, _, Some(g), None) => Some(Candidates::Range(a.from(obj(a.tgt[g])))),
            (2, _, Some(g), None) => Some(Candidates::Range(a.from(obj(a.src[g])))),
            (1, _, _, Some(h)) => Some(Candidates::Range(a.from(obj(a.src[h])))),
            (1, Some(f), None, None) => Some(Candidates::List(
                (0..a.objects).flat_map(|x| a.range(x, obj(a.src[f]))).collect(),
            )),
            (0, None, None, Some(h)) => Some(Candidates::List(
                (0..a.objects).flat_map(|x| a.range(x, obj(a.tgt[h]))).collect(),
            )),
            (2, Some(f), None, None) => Some(Candidates::List(
                (0..a.objects).flat_map(|x| a.range(x, obj(a.tgt[f]))).collect(),
            )),
            _ => None,
        }
    }
}

/// A skeleton of `mod-R` as a finite model of the category signature,
/// with back-references from model elements to modules and homomorphisms.
#[derive(Debug, Clone)]
pub struct CategoryModel {
    skeleton: Arc<Skeleton>,
    arrows: Arc<Arrows>,
    model: Arc<FiniteModel>,
    identities: Vec<usize>,
    pub(super) zero: Option<usize>,
    cache: Arc<EvalCache>,
}

/// Encodes every representative of the skeleton and every homomorphism
/// between them, then checks the category axioms.
pub fn encode_category(skel: &Skeleton, caps: &Caps) -> Result<CategoryModel> {
    let (pres, homs) = skel.hom_tables(caps)?;
    let arrows = Arc::new(Arrows::new(pres, homs, caps)?);
    let n = skel.len();
    let mut identities = Vec::with_capacity(n);
    for a in 0..n {
        let m = skel.module(a);
        let id: Vec<u16> = m.elements().map(|x| x as u16).collect();
        let i = arrows.homs[a][a]
            .index_of_map(&id, &arrows.pres[a].gens)
            .ok_or_else(|| Error::CategoryAxiom(format!("identity of object {a} missing")))?;
        identities.push(arrows.range(a, a).start + i);
    }
    let model = ModelBuilder::new(category_signature())
        .carrier("Obj", n)?
        .carrier("Mor", arrows.src.len())?
        .computed_relation("In", Arc::new(InOracle(arrows.clone())))?
        .computed_relation("Comp", Arc::new(CompOracle(arrows.clone())))?
        .function("Id", identities.clone())?
        .build()?;
    let cat = CategoryModel {
        skeleton: Arc::new(skel.clone()),
        model: Arc::new(model),
        zero: (0..n).find(|&o| (0..n).all(|x| arrows.range(o, x).len() == 1 && arrows.range(x, o).len() == 1)),
        arrows,
        identities,
        cache: Arc::default(),
    };
    cat.verify_axioms(caps)?;
    Ok(cat)
}

impl CategoryModel {
    pub(crate) fn cache(&self) -> &EvalCache {
        &self.cache
    }

    pub fn model(&self) -> &FiniteModel {
        &self.model
    }

    pub fn skeleton(&self) -> &Skeleton {
        &self.skeleton
    }

    pub fn object_count(&self) -> usize {
        self.arrows.objects
    }

    pub fn morphism_count(&self) -> usize {
        self.arrows.src.len()
    }

    pub fn source(&self, f: usize) -> usize {
        self.arrows.src[f] as usize
    }

    pub fn target(&self, f: usize) -> usize {
        self.arrows.tgt[f] as usize
    }

    /// The morphisms `a → b` as a range of model elements.
    pub fn morphisms(&self, a: usize, b: usize) -> Range<usize> {
        self.arrows.range(a, b)
    }

    pub fn identity(&self, a: usize) -> usize {
        self.identities[a]
    }

    /// `f∘g`, if `g` ends where `f` starts.
    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        self.arrows.compose(f, g)
    }

    /// The zero morphism `a → b`.
    pub fn zero_morphism(&self, a: usize, b: usize) -> usize {
        let zero = self.skeleton.module(b).zero() as u16;
        let map = vec![zero; self.skeleton.module(a).size()];
        self.morphism_of(a, b, &map).expect("zero map is a homomorphism")
    }

    pub fn is_zero_morphism(&self, f: usize) -> bool {
        let z = self.skeleton.module(self.target(f)).zero() as u16;
        self.map(f).iter().all(|&y| y == z)
    }

    /// The underlying map of `f` on elements of its source.
    pub fn map(&self, f: usize) -> &[u16] {
        let a = &self.arrows;
        a.homs[a.src[f] as usize][a.tgt[f] as usize].map(a.local[f] as usize)
    }

    pub fn hom(&self, f: usize) -> ModuleHom {
        ModuleHom {
            map: self.map(f).to_vec(),
        }
    }

    /// The model element of the homomorphism `a → b` with the given map.
    pub fn morphism_of(&self, a: usize, b: usize, map: &[u16]) -> Option<usize> {
        let ar = &self.arrows;
        let i = ar.homs[a][b].index_of_map(map, &ar.pres[a].gens)?;
        Some(ar.range(a, b).start + i)
    }

    pub fn hom_set(&self, a: usize, b: usize) -> &HomSet {
        &self.arrows.homs[a][b]
    }

    /// Checks that composition agrees with composing maps, that identities
    /// are neutral and that composition is associative. Pairs are checked
    /// exhaustively; triples exhaustively while their number stays under
    /// the enumeration cap, else on a fixed-seed random sample.
    pub fn verify_axioms(&self, caps: &Caps) -> Result<()> {
        let n = self.object_count();
        let bad = |msg: String| Err(Error::CategoryAxiom(msg));
        for f in 0..self.morphism_count() {
            let (a, b) = (self.source(f), self.target(f));
            if self.compose(self.identity(b), f) != Some(f) || self.compose(f, self.identity(a)) != Some(f) {
                return bad(format!("identity law fails at morphism {f}"));
            }
        }
        let check = |f: usize, g: usize| -> Option<String> {
            let h = self.compose(f, g).expect("composable");
            let (mf, mg) = (self.map(f), self.map(g));
            let agrees = mg.iter().zip(self.map(h)).all(|(&y, &z)| mf[y as usize] == z);
            let ends = self.source(h) == self.source(g) && self.target(h) == self.target(f);
            (!agrees || !ends).then(|| format!("composite of {f} and {g} is wrong"))
        };
        let pairs: u128 = (0..n * n * n)
            .map(|k| {
                let (a, b, c) = (k / (n * n), (k / n) % n, k % n);
                (self.morphisms(a, b).len() * self.morphisms(b, c).len()) as u128
            })
            .sum();
        let failure = if pairs <= caps.enumeration as u128 {
            let triples: Vec<(usize, usize, usize)> =
                (0..n * n * n).map(|k| (k / (n * n), (k / n) % n, k % n)).collect();
            crate::par::map(&triples, |&(a, b, c)| {
                self.morphisms(a, b)
                    .find_map(|g| self.morphisms(b, c).find_map(|f| check(f, g)))
            })
            .into_iter()
            .flatten()
            .next()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            (0..ASSOCIATIVITY_SAMPLES).find_map(|_| {
                let g = rng.gen_range(0..self.morphism_count());
                let f = rng.gen_range(self.arrows.from(self.target(g)));
                check(f, g)
            })
        };
        if let Some(msg) = failure {
            return bad(msg);
        }
        let count: u128 = (0..n * n * n * n)
            .map(|k| {
                let (a, b, c, d) = (k / (n * n * n), (k / (n * n)) % n, (k / n) % n, k % n);
                (self.morphisms(a, b).len() * self.morphisms(b, c).len()) as u128 * self.morphisms(c, d).len() as u128
            })
            .sum();
        let assoc = |f: usize, g: usize, h: usize| {
            let gh = self.compose(g, h).expect("composable");
            let fg = self.compose(f, g).expect("composable");
            self.compose(f, gh) == self.compose(fg, h)
        };
        if count <= caps.enumeration as u128 {
            for h in 0..self.morphism_count() {
                for g in self.arrows.from(self.target(h)) {
                    for f in self.arrows.from(self.target(g)) {
                        if !assoc(f, g, h) {
                            return bad(format!("associativity fails at ({f}, {g}, {h})"));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..ASSOCIATIVITY_SAMPLES {
                let h = rng.gen_range(0..self.morphism_count());
                let gs = self.arrows.from(self.target(h));
                let g = rng.gen_range(gs);
                let fs = self.arrows.from(self.target(g));
                let f = rng.gen_range(fs);
                if !assoc(f, g, h) {
                    return bad(format!("associativity fails at ({f}, {g}, {h})"));
                }
            }
        }
        Ok(())
    }
}
