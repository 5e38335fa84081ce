//! Categorical formulas over the signature `Obj, Mor, In, Comp, Id`.
//!
//! Builders take their object and morphism arguments as terms and bind
//! fresh variables named `_oN` / `_mN`, which cannot clash with the names
//! used for parameters.

use crate::error::{Error, Result};
use crate::logic::{Formula, Term, Var};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// The formulas with a fixed meaning on bounded skeletons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaName {
    Equivalence,
    LeftZero,
    RightZero,
    ZeroObject,
    ZeroMorphism,
    Retraction,
    Coretraction,
    Mono,
    Epi,
    Projective,
    Injective,
    Generator,
    Cogenerator,
    Simp,
    SumFinBounded(usize),
    Pret,
    ProobrBounded,
    Comm,
    Local,
    Principal,
}

/// How "is zero" tests enter mono, epi, generator and cogenerator. The
/// literal forms compare pairs of morphisms; the zero-test forms compare a
/// single morphism with zero, which is equivalent in additive categories
/// and quadratically cheaper.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaStyle {
    #[default]
    Literal,
    ZeroTest,
}

/// The unbounded formulas built for inspection only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LiteralFormulaName {
    SumOmega,
    SumFin,
    Sum,
    Under,
    Und,
    Finite,
    Proobr,
}

impl FormulaName {
    pub const ALL_UNARY: [FormulaName; 19] = [
        FormulaName::Equivalence,
        FormulaName::LeftZero,
        FormulaName::RightZero,
        FormulaName::ZeroObject,
        FormulaName::ZeroMorphism,
        FormulaName::Retraction,
        FormulaName::Coretraction,
        FormulaName::Mono,
        FormulaName::Epi,
        FormulaName::Projective,
        FormulaName::Injective,
        FormulaName::Generator,
        FormulaName::Cogenerator,
        FormulaName::Simp,
        FormulaName::Pret,
        FormulaName::ProobrBounded,
        FormulaName::Comm,
        FormulaName::Local,
        FormulaName::Principal,
    ];

    /// The free variables of the formula, in argument order.
    pub fn parameters(&self) -> Vec<Var> {
        use FormulaName::*;
        match self {
            Equivalence | ZeroMorphism | Retraction | Coretraction | Mono | Epi => vec![mor_var("f")],
            SumFinBounded(_) => vec![obj_var("X"), obj_var("M")],
            LeftZero => vec![obj_var("T")],
            RightZero => vec![obj_var("F")],
            ZeroObject => vec![obj_var("O")],
            Simp => vec![obj_var("M")],
            Pret | ProobrBounded => vec![obj_var("P")],
            Comm | Local | Principal => vec![obj_var("X")],
            Projective | Injective | Generator | Cogenerator => vec![obj_var("A")],
        }
    }

    /// Whether the only parameter is a morphism.
    pub fn on_morphisms(&self) -> bool {
        self.parameters()[0].sort == "Mor"
    }
}

impl fmt::Display for FormulaName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormulaName::SumFinBounded(k) => write!(f, "sum_fin_bounded({k})"),
            other => {
                let s = serde_json::to_string(other).expect("unit variant");
                write!(f, "{}", s.trim_matches('"'))
            }
        }
    }
}

impl FromStr for FormulaName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("sum_fin_bounded(").and_then(|r| r.strip_suffix(')')) {
            let k = rest
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("formula name `{s}`")))?;
            return Ok(FormulaName::SumFinBounded(k));
        }
        serde_json::from_str(&format!("\"{s}\"")).map_err(|_| Error::InvalidParameter(format!("formula name `{s}`")))
    }
}

impl LiteralFormulaName {
    pub fn parameters(&self) -> Vec<Var> {
        use LiteralFormulaName::*;
        match self {
            SumOmega | SumFin | Sum => vec![obj_var("X"), obj_var("M")],
            Under => vec![obj_var("P"), obj_var("M"), obj_var("N"), obj_var("X"), mor_var("f")],
            Und => vec![obj_var("P"), obj_var("M"), obj_var("N"), obj_var("X"), mor_var("f")],
            Finite => vec![obj_var("P"), obj_var("X")],
            Proobr => vec![obj_var("P")],
        }
    }
}

pub(crate) fn obj_var(name: &str) -> Var {
    Var::new(name, "Obj")
}

pub(crate) fn mor_var(name: &str) -> Var {
    Var::new(name, "Mor")
}

pub(crate) fn tv(v: &Var) -> Term {
    Term::Var(v.clone())
}

pub(crate) fn inn(f: &Term, a: &Term, b: &Term) -> Formula {
    Formula::pred("In", vec![f.clone(), a.clone(), b.clone()])
}

/// `h = f∘g`.
pub(crate) fn comp(f: &Term, g: &Term, h: &Term) -> Formula {
    Formula::pred("Comp", vec![f.clone(), g.clone(), h.clone()])
}

pub(crate) fn id(a: &Term) -> Term {
    Term::app("Id", vec![a.clone()])
}

/// Builder state: a counter for fresh bound variables and the style.
pub(crate) struct Builder {
    next: usize,
    pub(crate) style: FormulaStyle,
}

impl Builder {
    pub(crate) fn new(style: FormulaStyle) -> Self {
        Builder { next: 0, style }
    }

    pub(crate) fn obj(&mut self) -> Var {
        self.next += 1;
        Var::new(format!("_o{}", self.next), "Obj")
    }

    pub(crate) fn mor(&mut self) -> Var {
        self.next += 1;
        Var::new(format!("_m{}", self.next), "Mor")
    }

    pub(crate) fn left_zero(&mut self, t: &Term) -> Formula {
        let (x, f, g) = (self.obj(), self.mor(), self.mor());
        Formula::forall(
            x.clone(),
            Formula::exists(
                f.clone(),
                Formula::and(
                    inn(&tv(&f), t, &tv(&x)),
                    Formula::forall(
                        g.clone(),
                        Formula::implies(inn(&tv(&g), t, &tv(&x)), Formula::eq(tv(&g), tv(&f))),
                    ),
                ),
            ),
        )
    }

    pub(crate) fn right_zero(&mut self, t: &Term) -> Formula {
        let (x, f, g) = (self.obj(), self.mor(), self.mor());
        Formula::forall(
            x.clone(),
            Formula::exists(
                f.clone(),
                Formula::and(
                    inn(&tv(&f), &tv(&x), t),
                    Formula::forall(
                        g.clone(),
                        Formula::implies(inn(&tv(&g), &tv(&x), t), Formula::eq(tv(&g), tv(&f))),
                    ),
                ),
            ),
        )
    }

    pub(crate) fn zero_object(&mut self, o: &Term) -> Formula {
        Formula::and(self.left_zero(o), self.right_zero(o))
    }

    /// `f : a → b` factors through a zero object.
    pub(crate) fn zero_between(&mut self, f: &Term, a: &Term, b: &Term) -> Formula {
        let (o, g, h) = (self.obj(), self.mor(), self.mor());
        let zo = self.zero_object(&tv(&o));
        Formula::exists(
            o.clone(),
            Formula::and(
                zo,
                Formula::exists_all(
                    [g.clone(), h.clone()],
                    Formula::and_all([
                        inn(&tv(&g), a, &tv(&o)),
                        inn(&tv(&h), &tv(&o), b),
                        comp(&tv(&h), &tv(&g), f),
                    ]),
                ),
            ),
        )
    }

    /// Binds the source and target of `f` and states `body` about them.
    fn with_ends(&mut self, f: &Term, body: impl FnOnce(&mut Self, &Term, &Term) -> Formula) -> Formula {
        let (a, b) = (self.obj(), self.obj());
        let inner = body(self, &tv(&a), &tv(&b));
        Formula::exists_all([a.clone(), b.clone()], Formula::and(inn(f, &tv(&a), &tv(&b)), inner))
    }

    pub(crate) fn zero_morphism(&mut self, f: &Term) -> Formula {
        self.with_ends(f, |s, a, b| s.zero_between(f, a, b))
    }

    pub(crate) fn equivalence_between(&mut self, f: &Term, a: &Term, b: &Term) -> Formula {
        let g = self.mor();
        Formula::exists(
            g.clone(),
            Formula::and_all([inn(&tv(&g), b, a), comp(f, &tv(&g), &id(b)), comp(&tv(&g), f, &id(a))]),
        )
    }

    pub(crate) fn equivalence(&mut self, f: &Term) -> Formula {
        self.with_ends(f, |s, a, b| s.equivalence_between(f, a, b))
    }

    pub(crate) fn retraction(&mut self, f: &Term) -> Formula {
        self.with_ends(f, |s, a, b| {
            let g = s.mor();
            Formula::exists(g.clone(), Formula::and(inn(&tv(&g), b, a), comp(f, &tv(&g), &id(b))))
        })
    }

    pub(crate) fn coretraction(&mut self, f: &Term) -> Formula {
        self.with_ends(f, |s, a, b| {
            let g = s.mor();
            Formula::exists(g.clone(), Formula::and(inn(&tv(&g), b, a), comp(&tv(&g), f, &id(a))))
        })
    }

    pub(crate) fn mono_between(&mut self, f: &Term, a: &Term, b: &Term) -> Formula {
        let c = self.obj();
        let ct = tv(&c);
        match self.style {
            FormulaStyle::Literal => {
                let (g1, h, g2) = (self.mor(), self.mor(), self.mor());
                Formula::forall_all(
                    [c.clone(), g1.clone(), h.clone(), g2.clone()],
                    Formula::implies(
                        Formula::and_all([
                            inn(&tv(&g1), &ct, a),
                            comp(f, &tv(&g1), &tv(&h)),
                            inn(&tv(&g2), &ct, a),
                            comp(f, &tv(&g2), &tv(&h)),
                        ]),
                        Formula::eq(tv(&g1), tv(&g2)),
                    ),
                )
            }
            FormulaStyle::ZeroTest => {
                let (g, h) = (self.mor(), self.mor());
                let zh = self.zero_between(&tv(&h), &ct, b);
                let zg = self.zero_between(&tv(&g), &ct, a);
                Formula::forall_all(
                    [c.clone(), g.clone(), h.clone()],
                    Formula::implies(
                        Formula::and_all([inn(&tv(&g), &ct, a), comp(f, &tv(&g), &tv(&h)), zh]),
                        zg,
                    ),
                )
            }
        }
    }

    pub(crate) fn epi_between(&mut self, f: &Term, a: &Term, b: &Term) -> Formula {
        let c = self.obj();
        let ct = tv(&c);
        match self.style {
            FormulaStyle::Literal => {
                let (g1, h, g2) = (self.mor(), self.mor(), self.mor());
                Formula::forall_all(
                    [c.clone(), g1.clone(), h.clone(), g2.clone()],
                    Formula::implies(
                        Formula::and_all([
                            inn(&tv(&g1), b, &ct),
                            comp(&tv(&g1), f, &tv(&h)),
                            inn(&tv(&g2), b, &ct),
                            comp(&tv(&g2), f, &tv(&h)),
                        ]),
                        Formula::eq(tv(&g1), tv(&g2)),
                    ),
                )
            }
            FormulaStyle::ZeroTest => {
                let (g, h) = (self.mor(), self.mor());
                let zh = self.zero_between(&tv(&h), a, &ct);
                let zg = self.zero_between(&tv(&g), b, &ct);
                Formula::forall_all(
                    [c.clone(), g.clone(), h.clone()],
                    Formula::implies(
                        Formula::and_all([inn(&tv(&g), b, &ct), comp(&tv(&g), f, &tv(&h)), zh]),
                        zg,
                    ),
                )
            }
        }
    }

    pub(crate) fn mono(&mut self, f: &Term) -> Formula {
        self.with_ends(f, |s, a, b| s.mono_between(f, a, b))
    }

    pub(crate) fn epi(&mut self, f: &Term) -> Formula {
        self.with_ends(f, |s, a, b| s.epi_between(f, a, b))
    }

    /// Every epimorphism `X → Y` lifts maps `A → Y` along it: `g̃ = f∘g`.
    pub(crate) fn projective(&mut self, a: &Term) -> Formula {
        let (x, y, f, gt, g) = (self.obj(), self.obj(), self.mor(), self.mor(), self.mor());
        let (xt, yt, ft) = (tv(&x), tv(&y), tv(&f));
        let epi = self.epi_between(&ft, &xt, &yt);
        Formula::forall_all(
            [x.clone(), y.clone(), f.clone()],
            Formula::implies(
                inn(&ft, &xt, &yt),
                Formula::or(
                    Formula::forall(
                        gt.clone(),
                        Formula::implies(
                            inn(&tv(&gt), a, &yt),
                            Formula::exists(
                                g.clone(),
                                Formula::and(inn(&tv(&g), a, &xt), comp(&ft, &tv(&g), &tv(&gt))),
                            ),
                        ),
                    ),
                    Formula::not(epi),
                ),
            ),
        )
    }

    /// Every map `X → A` extends along every monomorphism `X → Y`:
    /// `g̃ = g∘f`.
    pub(crate) fn injective(&mut self, a: &Term) -> Formula {
        let (x, y, f, gt, g) = (self.obj(), self.obj(), self.mor(), self.mor(), self.mor());
        let (xt, yt, ft) = (tv(&x), tv(&y), tv(&f));
        let mono = self.mono_between(&ft, &xt, &yt);
        Formula::forall_all(
            [x.clone(), y.clone(), f.clone()],
            Formula::implies(
                inn(&ft, &xt, &yt),
                Formula::or(
                    Formula::forall(
                        gt.clone(),
                        Formula::implies(
                            inn(&tv(&gt), &xt, a),
                            Formula::exists(
                                g.clone(),
                                Formula::and(inn(&tv(&g), &yt, a), comp(&tv(&g), &ft, &tv(&gt))),
                            ),
                        ),
                    ),
                    Formula::not(mono),
                ),
            ),
        )
    }

    /// `dual` false: maps out of `a` separate parallel morphisms (generator);
    /// `dual` true: maps into `a` do (cogenerator).
    fn separates(&mut self, a: &Term, dual: bool) -> Formula {
        let (x, y) = (self.obj(), self.obj());
        let (xt, yt) = (tv(&x), tv(&y));
        let probe = |g: &Term| if dual { inn(g, &yt, a) } else { inn(g, a, &xt) };
        let after = |f: &Term, g: &Term, h: &Term| if dual { comp(g, f, h) } else { comp(f, g, h) };
        match self.style {
            FormulaStyle::Literal => {
                let (f, f2, g, h, h2) = (self.mor(), self.mor(), self.mor(), self.mor(), self.mor());
                Formula::forall_all(
                    [x.clone(), y.clone(), f.clone(), f2.clone()],
                    Formula::implies(
                        Formula::and_all([
                            inn(&tv(&f), &xt, &yt),
                            inn(&tv(&f2), &xt, &yt),
                            Formula::neq(tv(&f), tv(&f2)),
                        ]),
                        Formula::exists_all(
                            [g.clone(), h.clone(), h2.clone()],
                            Formula::and_all([
                                probe(&tv(&g)),
                                after(&tv(&f), &tv(&g), &tv(&h)),
                                after(&tv(&f2), &tv(&g), &tv(&h2)),
                                Formula::neq(tv(&h), tv(&h2)),
                            ]),
                        ),
                    ),
                )
            }
            FormulaStyle::ZeroTest => {
                let (f, g, h) = (self.mor(), self.mor(), self.mor());
                let zf = self.zero_between(&tv(&f), &xt, &yt);
                let zh = if dual {
                    self.zero_between(&tv(&h), &xt, a)
                } else {
                    self.zero_between(&tv(&h), a, &yt)
                };
                Formula::forall_all(
                    [x.clone(), y.clone(), f.clone()],
                    Formula::implies(
                        Formula::and(inn(&tv(&f), &xt, &yt), Formula::not(zf)),
                        Formula::exists_all(
                            [g.clone(), h.clone()],
                            Formula::and_all([probe(&tv(&g)), after(&tv(&f), &tv(&g), &tv(&h)), Formula::not(zh)]),
                        ),
                    ),
                )
            }
        }
    }

    pub(crate) fn generator(&mut self, a: &Term) -> Formula {
        self.separates(a, false)
    }

    pub(crate) fn cogenerator(&mut self, a: &Term) -> Formula {
        self.separates(a, true)
    }

    /// Nonzero, and every monomorphism into `m` starts at a zero object or
    /// is an equivalence: exactly two subobject classes.
    pub(crate) fn simp(&mut self, m: &Term) -> Formula {
        let nz = Formula::not(self.zero_object(m));
        let (x, f) = (self.obj(), self.mor());
        let (xt, ft) = (tv(&x), tv(&f));
        let mono = self.mono_between(&ft, &xt, m);
        let zx = self.zero_object(&xt);
        let eq = self.equivalence_between(&ft, &xt, m);
        Formula::and(
            nz,
            Formula::forall_all(
                [x.clone(), f.clone()],
                Formula::implies(Formula::and(inn(&ft, &xt, m), mono), Formula::or(zx, eq)),
            ),
        )
    }

    pub(crate) fn isomorphic(&mut self, x: &Term, y: &Term) -> Formula {
        let f = self.mor();
        let eq = self.equivalence_between(&tv(&f), x, y);
        Formula::exists(f.clone(), Formula::and(inn(&tv(&f), x, y), eq))
    }

    /// `c ≅ a ⊕ b`: split injections and projections with the cross
    /// composites zero, jointly epimorphic injections.
    pub(crate) fn direct_sum(&mut self, c: &Term, a: &Term, b: &Term) -> Formula {
        let (i1, p1, i2, p2) = (self.mor(), self.mor(), self.mor(), self.mor());
        let (i1t, p1t, i2t, p2t) = (tv(&i1), tv(&p1), tv(&i2), tv(&p2));
        let (t1, t2) = (self.mor(), self.mor());
        let z12 = self.zero_between(&tv(&t1), b, a);
        let z21 = self.zero_between(&tv(&t2), a, b);
        let joint = self.jointly_epi(&i1t, &i2t, a, b, c);
        Formula::exists_all(
            [i1.clone(), p1.clone(), i2.clone(), p2.clone()],
            Formula::and_all([
                inn(&i1t, a, c),
                inn(&p1t, c, a),
                comp(&p1t, &i1t, &id(a)),
                inn(&i2t, b, c),
                inn(&p2t, c, b),
                comp(&p2t, &i2t, &id(b)),
                Formula::exists(t1.clone(), Formula::and(comp(&p1t, &i2t, &tv(&t1)), z12)),
                Formula::exists(t2.clone(), Formula::and(comp(&p2t, &i1t, &tv(&t2)), z21)),
                joint,
            ]),
        )
    }

    /// A map out of `c` vanishing on both injections is zero.
    pub(crate) fn jointly_epi(&mut self, i1: &Term, i2: &Term, a: &Term, b: &Term, c: &Term) -> Formula {
        let (d, g, t1, t2) = (self.obj(), self.mor(), self.mor(), self.mor());
        let dt = tv(&d);
        let z1 = self.zero_between(&tv(&t1), a, &dt);
        let z2 = self.zero_between(&tv(&t2), b, &dt);
        let zg = self.zero_between(&tv(&g), c, &dt);
        Formula::forall_all(
            [d.clone(), g.clone(), t1.clone(), t2.clone()],
            Formula::implies(
                Formula::and_all([
                    inn(&tv(&g), c, &dt),
                    comp(&tv(&g), i1, &tv(&t1)),
                    comp(&tv(&g), i2, &tv(&t2)),
                    z1,
                    z2,
                ]),
                zg,
            ),
        )
    }

    /// `x ≅ m^j` for some `1 ≤ j ≤ k`, built by iterating binary sums.
    pub(crate) fn sum_fin_bounded(&mut self, k: usize, x: &Term, m: &Term) -> Formula {
        let simp = self.simp(m);
        let mut powers = Vec::new();
        for j in 1..=k.max(1) {
            powers.push(self.power(j, x, m));
        }
        Formula::and(simp, Formula::or_all(powers))
    }

    fn power(&mut self, j: usize, x: &Term, m: &Term) -> Formula {
        if j == 1 {
            return self.isomorphic(m, x);
        }
        let y = self.obj();
        let rest = self.power(j - 1, &tv(&y), m);
        let sum = self.direct_sum(x, &tv(&y), m);
        Formula::exists(y.clone(), Formula::and(rest, sum))
    }

    /// Projective generator with a simple epimorphic image.
    pub(crate) fn pret(&mut self, p: &Term) -> Formula {
        let proj = self.projective(p);
        let gen = self.generator(p);
        let (m, f) = (self.obj(), self.mor());
        let simp = self.simp(&tv(&m));
        let epi = self.epi_between(&tv(&f), p, &tv(&m));
        Formula::and_all([
            Formula::exists_all(
                [m.clone(), f.clone()],
                Formula::and_all([inn(&tv(&f), p, &tv(&m)), simp, epi]),
            ),
            gen,
            proj,
        ])
    }

    fn non_unit(&mut self, f: &Term, x: &Term) -> Formula {
        let g = self.mor();
        Formula::forall(
            g.clone(),
            Formula::implies(
                inn(&tv(&g), x, x),
                Formula::not(Formula::and(comp(f, &tv(&g), &id(x)), comp(&tv(&g), f, &id(x)))),
            ),
        )
    }

    /// `h = f ⊕ g` for orthogonal idempotents `f, g` of `x`. Without
    /// addition this says: `h` is an idempotent above `f` and `g`, and any
    /// `k` with `k∘h = k` that kills `f` and `g` is zero. The last clause
    /// forces the idempotent `h - f - g` to vanish.
    fn orthogonal_sum(&mut self, h: &Term, f: &Term, g: &Term, x: &Term) -> Formula {
        let z = self.mor();
        let zz = self.zero_between(&tv(&z), x, x);
        let (k, t1, t2) = (self.mor(), self.mor(), self.mor());
        let z1 = self.zero_between(&tv(&t1), x, x);
        let z2 = self.zero_between(&tv(&t2), x, x);
        let zk = self.zero_between(&tv(&k), x, x);
        Formula::and_all([
            comp(f, f, f),
            comp(g, g, g),
            Formula::exists(
                z.clone(),
                Formula::and_all([comp(f, g, &tv(&z)), comp(g, f, &tv(&z)), zz]),
            ),
            comp(h, h, h),
            comp(h, f, f),
            comp(f, h, f),
            comp(h, g, g),
            comp(g, h, g),
            Formula::forall_all(
                [k.clone(), t1.clone(), t2.clone()],
                Formula::implies(
                    Formula::and_all([
                        inn(&tv(&k), x, x),
                        comp(&tv(&k), h, &tv(&k)),
                        comp(&tv(&k), f, &tv(&t1)),
                        comp(&tv(&k), g, &tv(&t2)),
                        z1,
                        z2,
                    ]),
                    zk,
                ),
            ),
        ])
    }

    pub(crate) fn comm(&mut self, x: &Term) -> Formula {
        let pro = self.pret(x);
        let (f, g, h) = (self.mor(), self.mor(), self.mor());
        let (ft, gt, ht) = (tv(&f), tv(&g), tv(&h));
        Formula::and(
            pro,
            Formula::forall_all(
                [f.clone(), g.clone(), h.clone()],
                Formula::implies(
                    Formula::and_all([inn(&ft, x, x), inn(&gt, x, x), comp(&ft, &gt, &ht)]),
                    comp(&gt, &ft, &ht),
                ),
            ),
        )
    }

    pub(crate) fn local(&mut self, x: &Term) -> Formula {
        let pro = self.pret(x);
        let (f, g, h) = (self.mor(), self.mor(), self.mor());
        let (ft, gt, ht) = (tv(&f), tv(&g), tv(&h));
        let nf = self.non_unit(&ft, x);
        let ng = self.non_unit(&gt, x);
        let sum = self.orthogonal_sum(&ht, &ft, &gt, x);
        let nh = self.non_unit(&ht, x);
        Formula::and(
            pro,
            Formula::forall_all(
                [f.clone(), g.clone(), h.clone()],
                Formula::implies(
                    Formula::and_all([inn(&ft, x, x), nf, inn(&gt, x, x), ng, inn(&ht, x, x), sum]),
                    nh,
                ),
            ),
        )
    }

    /// Read as "no zero divisors": nonzero `f, g` have nonzero composites
    /// both ways. Taken literally the body fails at `f = 0`.
    pub(crate) fn principal(&mut self, x: &Term) -> Formula {
        let pro = self.pret(x);
        let (f, g, h1, h2) = (self.mor(), self.mor(), self.mor(), self.mor());
        let (ft, gt) = (tv(&f), tv(&g));
        let zf = self.zero_between(&ft, x, x);
        let zg = self.zero_between(&gt, x, x);
        let z1 = self.zero_between(&tv(&h1), x, x);
        let z2 = self.zero_between(&tv(&h2), x, x);
        Formula::and(
            pro,
            Formula::forall_all(
                [f.clone(), g.clone()],
                Formula::implies(
                    Formula::and_all([inn(&ft, x, x), Formula::not(zf), inn(&gt, x, x), Formula::not(zg)]),
                    Formula::and(
                        Formula::exists(h1.clone(), Formula::and(comp(&ft, &gt, &tv(&h1)), Formula::not(z1))),
                        Formula::exists(h2.clone(), Formula::and(comp(&gt, &ft, &tv(&h2)), Formula::not(z2))),
                    ),
                ),
            ),
        )
    }

    fn subobject(&mut self, y: &Term, x: &Term) -> Formula {
        let f = self.mor();
        let mono = self.mono_between(&tv(&f), y, x);
        Formula::exists(f.clone(), Formula::and(inn(&tv(&f), y, x), mono))
    }

    fn summand_of(&mut self, y: &Term, x: &Term) -> Formula {
        let q = self.obj();
        let ds = self.direct_sum(y, x, &tv(&q));
        Formula::exists(q.clone(), ds)
    }

    pub(crate) fn sum_omega(&mut self, x: &Term, m: &Term) -> Formula {
        let simp = self.simp(m);
        let absorbs = self.direct_sum(x, x, m);
        let y = self.obj();
        let yt = tv(&y);
        let y_absorbs = self.direct_sum(&yt, &yt, m);
        let contains = self.summand_of(&yt, x);
        Formula::and_all([
            simp,
            absorbs,
            Formula::forall(y.clone(), Formula::implies(y_absorbs, contains)),
        ])
    }

    pub(crate) fn sum_fin(&mut self, x: &Term, m: &Term) -> Formula {
        let simp = self.simp(m);
        let y = self.obj();
        let yt = tv(&y);
        let omega = self.sum_omega(&yt, m);
        let summand = self.summand_of(&yt, x);
        let iso = self.isomorphic(x, &yt);
        Formula::and(
            simp,
            Formula::exists(y.clone(), Formula::and_all([omega, summand, Formula::not(iso)])),
        )
    }

    pub(crate) fn sum(&mut self, x: &Term, m: &Term) -> Formula {
        let simp = self.simp(m);
        let (y, p) = (self.obj(), self.obj());
        let yt = tv(&y);
        let sub = self.subobject(&yt, x);
        let zy = self.zero_object(&yt);
        let ds = self.direct_sum(&yt, &tv(&p), m);
        Formula::and(
            simp,
            Formula::forall(
                y.clone(),
                Formula::implies(Formula::and(sub, Formula::not(zy)), Formula::exists(p.clone(), ds)),
            ),
        )
    }

    /// The long conjunction is read with both universal blocks inside the
    /// scope of `∃g`, and with `p_M, p_M'` ranging over `Mor(N, M)`.
    pub(crate) fn under(&mut self, p: &Term, m: &Term, n: &Term, x: &Term, f: &Term) -> Formula {
        let nfd = self.sum_fin(n, m);
        let g = self.mor();
        let gt = tv(&g);
        let epi = self.epi_between(&gt, x, n);
        // First block: every split pair (i_M, p_M) lifts to a split pair (i, p).
        let (im, pm, i, pp, s1, s2) = (self.mor(), self.mor(), self.mor(), self.mor(), self.mor(), self.mor());
        let lift = Formula::forall_all(
            [im.clone(), pm.clone()],
            Formula::implies(
                Formula::and_all([
                    inn(&tv(&im), m, n),
                    inn(&tv(&pm), n, m),
                    comp(&tv(&pm), &tv(&im), &id(m)),
                ]),
                Formula::exists_all(
                    [i.clone(), pp.clone()],
                    Formula::and_all([
                        inn(&tv(&i), p, x),
                        inn(&tv(&pp), x, p),
                        comp(&tv(&pp), &tv(&i), &id(p)),
                        Formula::exists(
                            s1.clone(),
                            Formula::and(comp(&gt, &tv(&i), &tv(&s1)), comp(&tv(&im), f, &tv(&s1))),
                        ),
                        Formula::exists(
                            s2.clone(),
                            Formula::and(comp(f, &tv(&pp), &tv(&s2)), comp(&tv(&pm), &gt, &tv(&s2))),
                        ),
                    ]),
                ),
            ),
        );
        // Second block: disjoint images downstairs force disjoint images upstairs.
        let vars: Vec<Var> = (0..8).map(|_| self.mor()).collect();
        let [im1, im2, pm1, pm2, i1, i2, p1, p2] = [0, 1, 2, 3, 4, 5, 6, 7].map(|k| tv(&vars[k]));
        let mut hyp = vec![
            inn(&im1, m, n),
            inn(&im2, m, n),
            inn(&pm1, n, m),
            inn(&pm2, n, m),
            inn(&i1, p, x),
            inn(&i2, p, x),
            inn(&p1, x, p),
            inn(&p2, x, p),
            comp(&pm1, &im1, &id(m)),
            comp(&pm2, &im2, &id(m)),
            comp(&p1, &i1, &id(p)),
            comp(&p2, &i2, &id(p)),
        ];
        for (up, im_, pm_, pp_) in [(&i1, &im1, &pm1, &p1), (&i2, &im2, &pm2, &p2)] {
            let (a, b) = (self.mor(), self.mor());
            hyp.push(Formula::exists(
                a.clone(),
                Formula::and(comp(&gt, up, &tv(&a)), comp(im_, f, &tv(&a))),
            ));
            hyp.push(Formula::exists(
                b.clone(),
                Formula::and(comp(f, pp_, &tv(&b)), comp(pm_, &gt, &tv(&b))),
            ));
        }
        for (l, r) in [(&pm1, &im2), (&pm2, &im1)] {
            let t = self.mor();
            let z = self.zero_between(&tv(&t), m, m);
            hyp.push(Formula::exists(t.clone(), Formula::and(comp(l, r, &tv(&t)), z)));
        }
        let mut concl = Vec::new();
        for (l, r) in [(&p1, &i2), (&p2, &i1)] {
            let t = self.mor();
            let z = self.zero_between(&tv(&t), p, p);
            concl.push(Formula::exists(t.clone(), Formula::and(comp(l, r, &tv(&t)), z)));
        }
        let disjoint = Formula::forall_all(vars, Formula::implies(Formula::and_all(hyp), Formula::and_all(concl)));
        Formula::and(
            nfd,
            Formula::exists(g.clone(), Formula::and_all([inn(&gt, x, n), epi, lift, disjoint])),
        )
    }

    /// Read with `∃Q (X ≅ X' ⊕ Q)` in the consequent.
    pub(crate) fn und(&mut self, p: &Term, m: &Term, n: &Term, x2: &Term, f: &Term) -> Formula {
        let x = self.obj();
        let xt = tv(&x);
        let under = self.under(p, m, n, &xt, f);
        let summand = self.summand_of(&xt, x2);
        Formula::forall(x.clone(), Formula::implies(under, summand))
    }

    pub(crate) fn finite(&mut self, p: &Term, x: &Term) -> Formula {
        let (m, f, y) = (self.obj(), self.mor(), self.obj());
        let (mt, ft, yt) = (tv(&m), tv(&f), tv(&y));
        let simp = self.simp(&mt);
        let epi = self.epi_between(&ft, p, &mt);
        let fin = self.sum_fin(&yt, &mt);
        let und = self.und(p, &mt, &yt, x, &ft);
        Formula::exists_all(
            [m.clone(), f.clone()],
            Formula::and_all([
                inn(&ft, p, &mt),
                simp,
                epi,
                Formula::exists(y.clone(), Formula::and(fin, und)),
            ]),
        )
    }

    pub(crate) fn proobr(&mut self, p: &Term) -> Formula {
        let pret = self.pret(p);
        let (s, x) = (self.obj(), self.obj());
        let (st, xt) = (tv(&s), tv(&x));
        let pret_s = self.pret(&st);
        let fin = self.finite(&st, &xt);
        let summand = self.summand_of(&xt, p);
        Formula::and(
            pret,
            Formula::forall(
                s.clone(),
                Formula::implies(pret_s, Formula::exists(x.clone(), Formula::and(fin, summand))),
            ),
        )
    }
}

/// The formula for `name` in the literal style.
pub fn build_formula(name: FormulaName) -> Formula {
    build_formula_with(name, FormulaStyle::Literal)
}

pub fn build_formula_with(name: FormulaName, style: FormulaStyle) -> Formula {
    use FormulaName::*;
    let mut b = Builder::new(style);
    let params: Vec<Term> = name.parameters().iter().map(tv).collect();
    let x = &params[0];
    match name {
        Equivalence => b.equivalence(x),
        LeftZero => b.left_zero(x),
        RightZero => b.right_zero(x),
        ZeroObject => b.zero_object(x),
        ZeroMorphism => b.zero_morphism(x),
        Retraction => b.retraction(x),
        Coretraction => b.coretraction(x),
        Mono => b.mono(x),
        Epi => b.epi(x),
        Projective => b.projective(x),
        Injective => b.injective(x),
        Generator => b.generator(x),
        Cogenerator => b.cogenerator(x),
        Simp => b.simp(x),
        SumFinBounded(k) => b.sum_fin_bounded(k, x, &params[1]),
        Pret | ProobrBounded => b.pret(x),
        Comm => b.comm(x),
        Local => b.local(x),
        Principal => b.principal(x),
    }
}

/// The unbounded formulas, for inspection. No semantic claim is attached to
/// them on finite skeletons.
pub fn build_literal_formula(name: LiteralFormulaName) -> Formula {
    use LiteralFormulaName::*;
    let mut b = Builder::new(FormulaStyle::Literal);
    let p: Vec<Term> = name.parameters().iter().map(tv).collect();
    match name {
        SumOmega => b.sum_omega(&p[0], &p[1]),
        SumFin => b.sum_fin(&p[0], &p[1]),
        Sum => b.sum(&p[0], &p[1]),
        Under => b.under(&p[0], &p[1], &p[2], &p[3], &p[4]),
        Und => b.und(&p[0], &p[1], &p[2], &p[3], &p[4]),
        Finite => b.finite(&p[0], &p[1]),
        Proobr => b.proobr(&p[0]),
    }
}
