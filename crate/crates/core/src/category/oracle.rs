//! Algebraic counterparts of the categorical formulas, computed on the
//! underlying maps and modules, and agreement reports.

use super::formulas::{FormulaName, FormulaStyle};
use super::model::CategoryModel;
use crate::caps::Caps;
use crate::error::Result;
use crate::module::{
    direct_sum, is_cogenerator_relative, is_generator, is_injective_relative, is_projective, is_simple,
    module_isomorphic, FiniteModule,
};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleRow {
    pub formula: String,
    pub args: Vec<usize>,
    pub verdict: bool,
    pub oracle: bool,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AgreementReport {
    pub rows: Vec<OracleRow>,
    pub all_agree: bool,
}

impl AgreementReport {
    pub fn disagreements(&self) -> impl Iterator<Item = &OracleRow> {
        self.rows.iter().filter(|r| !r.agree)
    }
}

fn compose_maps(f: &[u16], g: &[u16]) -> Vec<u16> {
    g.iter().map(|&y| f[y as usize]).collect()
}

/// Composition and identity on the endomorphism maps of object `x`.
struct Ends {
    maps: Vec<Vec<u16>>,
    identity: Vec<u16>,
    zero: Vec<u16>,
}

impl Ends {
    fn new(cat: &CategoryModel, x: usize) -> Self {
        let m = cat.skeleton().module(x);
        Ends {
            maps: cat.morphisms(x, x).map(|f| cat.map(f).to_vec()).collect(),
            identity: m.elements().map(|e| e as u16).collect(),
            zero: vec![m.zero() as u16; m.size()],
        }
    }

    fn commutative(&self) -> bool {
        self.maps
            .iter()
            .all(|f| self.maps.iter().all(|g| compose_maps(f, g) == compose_maps(g, f)))
    }

    fn only_trivial_idempotents(&self) -> bool {
        self.maps
            .iter()
            .filter(|e| compose_maps(e, e) == **e)
            .all(|e| *e == self.zero || *e == self.identity)
    }

    fn no_zero_divisors(&self) -> bool {
        let nz: Vec<&Vec<u16>> = self.maps.iter().filter(|f| **f != self.zero).collect();
        nz.iter().all(|f| nz.iter().all(|g| compose_maps(f, g) != self.zero))
    }
}

fn power_of(x: &FiniteModule, m: &FiniteModule, k: usize, caps: &Caps) -> Result<bool> {
    let mut p = m.clone();
    for _ in 1..=k {
        if p.size() > x.size() {
            break;
        }
        if p.size() == x.size() && module_isomorphic(&p, x, caps)?.is_some() {
            return Ok(true);
        }
        p = direct_sum(
            &p,
            m,
            &Caps {
                module_size: usize::MAX,
                ..*caps
            },
        )?;
    }
    Ok(false)
}

/// The algebraic verdict for `name` at `args`. Injective and cogenerator
/// are relative to the skeleton, as their formulas are.
pub fn oracle_verdict(cat: &CategoryModel, name: FormulaName, args: &[usize], caps: &Caps) -> Result<bool> {
    use FormulaName::*;
    let skel = cat.skeleton();
    let obj = |i: usize| skel.module(i);
    let x = args[0];
    let progenerator = |x: usize| -> Result<bool> {
        let m = obj(x);
        Ok(!m.is_zero() && is_generator(m, caps)? && is_projective(m, caps)?)
    };
    Ok(match name {
        Equivalence => {
            let (a, b) = (cat.source(x), cat.target(x));
            let h = cat.hom(x);
            h.is_injective() && h.is_surjective(obj(b)) && obj(a).size() == obj(b).size()
        }
        LeftZero | RightZero | ZeroObject => obj(x).is_zero(),
        ZeroMorphism => cat.is_zero_morphism(x),
        Retraction | Coretraction => {
            let (a, b) = (cat.source(x), cat.target(x));
            let f = cat.map(x);
            cat.morphisms(b, a).any(|g| {
                let g = cat.map(g);
                if name == Retraction {
                    compose_maps(f, g).iter().enumerate().all(|(i, &y)| y as usize == i)
                } else {
                    compose_maps(g, f).iter().enumerate().all(|(i, &y)| y as usize == i)
                }
            })
        }
        Mono => cat.hom(x).is_injective(),
        Epi => cat.hom(x).is_surjective(obj(cat.target(x))),
        Projective => is_projective(obj(x), caps)?,
        Injective => is_injective_relative(obj(x), skel, caps)?,
        Generator => is_generator(obj(x), caps)?,
        Cogenerator => is_cogenerator_relative(obj(x), skel, caps)?,
        Simp => is_simple(obj(x), caps)?,
        SumFinBounded(k) => is_simple(obj(args[1]), caps)? && power_of(obj(x), obj(args[1]), k, caps)?,
        Pret | ProobrBounded => progenerator(x)?,
        Comm => progenerator(x)? && Ends::new(cat, x).commutative(),
        Local => progenerator(x)? && Ends::new(cat, x).only_trivial_idempotents(),
        Principal => progenerator(x)? && Ends::new(cat, x).no_zero_divisors(),
    })
}

/// Evaluates each formula at every argument tuple and compares it with
/// the oracle.
pub fn compare_with_oracles(
    cat: &CategoryModel,
    names: &[FormulaName],
    style: FormulaStyle,
    caps: &Caps,
) -> Result<AgreementReport> {
    let mut rows = Vec::new();
    for &name in names {
        for (args, verdict) in cat.eval_all(name, style)? {
            let oracle = oracle_verdict(cat, name, &args, caps)?;
            rows.push(OracleRow {
                formula: name.to_string(),
                args,
                verdict,
                oracle,
                agree: verdict == oracle,
            });
        }
    }
    let all_agree = rows.iter().all(|r| r.agree);
    Ok(AgreementReport { rows, all_agree })
}
