//! The end-to-end property checks, one per numbered criterion. Each check
//! is exact; timings are left to the caller so reports stay deterministic.

use crate::algebra::{
    build_ring, characterized_beautiful, enumerate_beautiful, ring_isomorphic, ring_model, sentence_phi_r, FiniteRing,
    RingSpec,
};
use crate::caps::Caps;
use crate::catalog::{agreement_configs, build_catalog, catalog_entry, full_skeleton_for_gr, CatalogEntry};
use crate::category::{compare_with_oracles, encode_category, ring_from_endo_monoid, xi, FormulaName, FormulaStyle};
use crate::error::Result;
use crate::groups::{check_relativization, check_transvection_identities};
use crate::lattice::{
    lattice_definable_ops, projective_space, recover_end_ring, verify_matrix_encoding, Copies, Interpretation,
};
use crate::logic::random::{las_instance, substitution_lemma_draw};
use crate::logic::{check_deduction, Assignment, Deduction, Evaluator, Formula, Justification, Prepared, Term, Var};
use crate::module::{
    build_skeleton, end_ring, free_module, module_isomorphic, morita_similar, regular_module, zero_module,
    MoritaOutcome, Skeleton,
};
use crate::sample::{group_sentence_sample, ring_sentence_sample};
use crate::ultra::{check_ultrapower_equivalence, enumerate_filters};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::sync::Arc;

pub const CRITERIA: usize = 11;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub id: usize,
    pub title: &'static str,
    pub pass: bool,
    pub details: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub caps: Caps,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: crate::sample::DEFAULT_SEED,
            // M2(F2)^2 alone has 256 elements.
            caps: Caps::generous(),
        }
    }
}

pub fn title(id: usize) -> &'static str {
    match id {
        1 => "Morita similarity of small rings",
        2 => "ring recovered from composition",
        3 => "characteristic sentences",
        4 => "ring sentences translated into the category",
        5 => "categorical formulas against algebraic oracles",
        6 => "beautiful linear combinations",
        7 => "ultrafilters and ultrapowers",
        8 => "ring recovered from the submodule lattice",
        9 => "matrix encoding of submodules",
        10 => "unit groups",
        11 => "substitution and deduction",
        _ => "unknown",
    }
}

/// Runs check `id`; errors are reported as failures with the message.
pub fn run_check(id: usize, cfg: &SuiteConfig) -> CheckOutcome {
    let mut details = Vec::new();
    let result = match id {
        1 => morita(cfg, &mut details),
        2 => gr(cfg, &mut details),
        3 => phi(cfg, &mut details),
        4 => xi_check(cfg, &mut details),
        5 => oracles(cfg, &mut details),
        6 => beautiful(cfg, &mut details),
        7 => ultra(cfg, &mut details),
        8 => lattice(cfg, &mut details),
        9 => matrices(cfg, &mut details),
        10 => groups(cfg, &mut details),
        11 => logic(cfg, &mut details),
        _ => Ok(false),
    };
    let pass = match result {
        Ok(p) => p,
        Err(e) => {
            details.push(format!("error: {e}"));
            false
        }
    };
    CheckOutcome {
        id,
        title: title(id),
        pass,
        details,
    }
}

fn ring(spec: &RingSpec, caps: &Caps) -> Result<Arc<FiniteRing>> {
    build_ring(spec, caps).map(Arc::new)
}

fn catalog(cfg: &SuiteConfig) -> Result<Vec<(CatalogEntry, Arc<FiniteRing>)>> {
    build_catalog(&cfg.caps)
}

fn morita(cfg: &SuiteConfig, out: &mut Vec<String>) -> Result<bool> {
    let caps = &cfg.caps;
    let f2 = ring(&RingSpec::zmod(2), caps)?;
    let f3 = ring(&RingSpec::zmod(3), caps)?;
    let m2 = ring(&RingSpec::matrix(RingSpec::zmod(2), 2), caps)?;
    let mut ok = true;
    match morita_similar(&f2, &m2, None, caps)? {
        MoritaOutcome::Similar { module, .. } => {
            let iso = ring_isomorphic(&end_ring(&module, caps)?, &f2).is_some();
            out.push(format!(
                "F2 ~ M2(F2): witness of size {}, End ≅ F2: {iso}",
                module.size()
            ));
            ok &= iso;
        }
        other => {
            out.push(format!("F2 ~ M2(F2): {:?}", other.report()));
            ok = false;
        }
    }
    let v = morita_similar(&f2, &f3, None, caps)?;
    let absent = matches!(v, MoritaOutcome::NotSimilar { .. });
    out.push(format!("F2 ~ F3: {}", v.report().verdict));
    ok &= absent;
    for (e, r) in catalog(cfg)? {
        let good = match morita_similar(&r, &r, None, caps)? {
            MoritaOutcome::Similar { module, .. } => module_isomorphic(&module, &regular_module(&r), caps)?.is_some(),
            _ => false,
        };
        out.push(format!("{} ~ itself via R_R: {good}", e.key));
        ok &= good;
    }
    Ok(ok)
}

/// The skeleton up to `|R|²`, or the full subcategory on `0, R, R²`.
fn gr_skeleton(key: &str, r: &Arc<FiniteRing>, caps: &Caps) -> Result<Skeleton> {
    if full_skeleton_for_gr(key) {
        build_skeleton(r, r.size() * r.size(), caps)
    } else {
        Ok(Skeleton::from_modules(
            r.clone(),
            vec![zero_module(r), regular_module(r), free_module(r, 2, caps)?],
        ))
    }
}

fn gr(cfg: &SuiteConfig, out: &mut Vec<String>) -> Result<bool> {
    let caps = &cfg.caps;
    let mut ok = true;
    for (e, r) in catalog(cfg)? {
        let skel = gr_skeleton(e.key, &r, caps)?;
        let cat = encode_category(&skel, caps)?;
        let p = skel
            .find(&regular_module(&r), caps)?
            .expect("the regular module is in the skeleton");
        let got = ring_from_endo_monoid(&cat, p)?;
        let want = end_ring(skel.module(p), caps)?;
        let iso = ring_isomorphic(&got, &want).is_some();
        let scope = if full_skeleton_for_gr(e.key) {
            format!("B = {}", r.size() * r.size())
        } else {
            "objects 0, R, R^2".to_string()
        };
        out.push(format!(
            "{} ({scope}, {} morphisms): {iso}",
            e.key,
            cat.morphism_count()
        ));
        ok &= iso;
    }
    Ok(ok)
}

fn phi(cfg: &SuiteConfig, out: &mut Vec<String>) -> Result<bool> {
    let rings = catalog(cfg)?;
    let mut ok = true;
    for (ei, ri) in &rings {
        let p = Prepared::compile(&crate::algebra::ring_signature(), &sentence_phi_r(ri))?;
        let mut row = String::new();
        for (_, rj) in &rings {
            let model = ring_model(rj);
            let got = Evaluator::new(&model).run(&p, &Assignment::new())?;
            let want = ring_isomorphic(ri, rj).is_some();
            ok &= got == want;
            row.push(if got == want {
                if got {
                    '1'
                } else {
                    '0'
                }
            } else {
                'x'
            });
        }
        out.push(format!("{:>8} {row}", ei.key));
    }
    Ok(ok)
}

fn xi_check(cfg: &SuiteConfig, out: &mut Vec<String>) -> Result<bool> {
    let caps = &cfg.caps;
    let mut ok = true;
    let eval = |sentence: &Formula, over: &RingSpec| -> Result<bool> {
        let r = ring(over, caps)?;
        let cat = encode_category(&build_skeleton(&r, 16, caps)?, caps)?;
        let p = Prepared::compile(cat.model().signature(), sentence)?;
        Evaluator::new(cat.model()).run(&p, &Assignment::new())
    };
    for n in [2, 3, 4] {
        let spec = RingSpec::zmod(n);
        let s = xi(&sentence_phi_r(&build_ring(&spec, caps)?))?;
        let v = eval(&s, &spec)?;
        out.push(format!("xi(Z{n}) over skeleton(Z{n}, 16): {v}"));
        ok &= v;
    }
    let s = xi(&sentence_phi_r(&build_ring(&RingSpec::zmod(4), caps)?))?;
    let v = eval(&s, &catalog_entry("f4")?.spec)?;
    out.push(format!("xi(Z4) over skeleton(F4, 16): {v}"));
    Ok(ok && !v)
}

pub const AGREEMENT_FORMULAS: [FormulaName; 9] = [
    FormulaName::Simp,
    FormulaName::Mono,
    FormulaName::Epi,
    FormulaName::Retraction,
    FormulaName::Projective,
    FormulaName::Generator,
    FormulaName::ProobrBounded,
    FormulaName::Comm,
    FormulaName::Local,
];

fn oracles(cfg: &SuiteConfig, out: &mut Vec<String>) -> Result<bool> {
    let caps = &cfg.caps;
    let mut ok = true;
    for (key, bound) in agreement_configs() {
        let r = ring(&catalog_entry(key)?.spec, caps)?;
        let cat = encode_category(&build_skeleton(&r, bound, caps)?, caps)?;
        let rep = compare_with_oracles(&cat, &AGREEMENT_FORMULAS, FormulaStyle::ZeroTest, caps)?;
        let bad: Vec<String> = rep
            .disagreements()
            .take(5)
            .map(|x| format!("{}{:?}", x.formula, x.args))
            .collect();
        out.push(format!(
            "{key} B = {bound}: {} objects, {} morphisms, {} verdicts, {} disagreements {}",
            cat.object_count(),
            cat.morphism_count(),
            rep.rows.len(),
            rep.disagreements().count(),
            bad.join(" ")
        ));
        ok &= rep.all_agree;
    }
    Ok(ok)
}

fn beautiful(cfg: &SuiteConfig, out: &mut Vec<String>) -> Result<bool> {
    let mut ok = true;
    for (e, r) in catalog(cfg)? {
        let mut counts = Vec::new();
        for n in 1..=3 {
            let mut got = enumerate_beautiful(&r, n, &cfg.caps)?;
            let mut want = characterized_beautiful(&r, n);
            got.sort_by(|a, b| a.coefficients.cmp(&b.coefficients));
            want.sort_by(|a, b| a.coefficients.cmp(&b.coefficients));
            ok &= got == want;
            counts.push(got.len());
            if e.key == "zmod6" && n == 2 {
                ok &= got.len() == 4;
            }
        }
        out.push(format!("{}: counts for n = 1, 2, 3: {counts:?}", e.key));
    }
    Ok(ok)
}

fn ultra(cfg: &SuiteConfig, out: &mut Vec<String>) -> Result<bool> {
    let caps = &cfg.caps;
    let sentences = ring_sentence_sample(cfg.seed);
    let mut ok = true;
    let mut enumerations = Vec::new();
    for n in [2, 3, 4] {
        let e = enumerate_filters(n, caps)?;
        let principal = e.ultrafilters.iter().all(|u| u.filter().generator().len() == 1);
        ok &= e.ultrafilters.len() == n && principal;
        out.push(format!(
            "|I| = {n}: {} filters, {} ultrafilters, all principal: {principal}",
            e.filters.len(),
            e.ultrafilters.len()
        ));
        enumerations.push(e);
    }
    for (entry, r) in catalog(cfg)? {
        let model = ring_model(&r);
        let mut checked = 0;
        let mut good = true;
        for e in &enumerations {
            for u in &e.ultrafilters {
                let rep = check_ultrapower_equivalence(&model, u, &sentences, caps)?;
                good &= rep.all_agree && rep.equivalence.verdicts.len() == sentences.len();
                checked += 1;
            }
        }
        out.push(format!(
            "{}: {checked} ultrapowers isomorphic and equivalent: {good}",
            entry.key
        ));
        ok &= good;
    }
    Ok(ok)
}

fn lattice(cfg: &SuiteConfig, out: &mut Vec<String>) -> Result<bool> {
    let caps = &cfg.caps;
    let mut ok = true;
    for spec in [
        RingSpec::zmod(2),
        RingSpec::zmod(4),
        RingSpec::poly_quotient(2, &[0, 0, 1]),
    ] {
        let r = ring(&spec, caps)?;
        let ps = projective_space(&r, 3, caps)?;
        let it = Interpretation::new(&ps, Copies::standard(&ps, 1, caps)?, caps)?;
        let (rec, cert) = recover_end_ring(&it)?;
        let iso = ring_isomorphic(&rec, &r).is_some() && cert.is_isomorphism;
        out.push(format!(
            "P({}^3), {} submodules: recovered ring of size {} ≅ R: {iso}",
            spec.label(),
            ps.len(),
            rec.size()
        ));
        ok &= iso;
    }
    for spec in [RingSpec::zmod(2), RingSpec::zmod(4)] {
        let ps = projective_space(&ring(&spec, caps)?, 2, caps)?;
        let rep = lattice_definable_ops(&ps, caps)?;
        out.push(format!(
            "P({}^2), {} submodules: meet {}, join {}, direct sum {}, ≅_d {} checked; agree: {}",
            spec.label(),
            rep.submodules,
            rep.meet.checked,
            rep.join.checked,
            rep.direct_sum.checked,
            rep.iso_d.checked,
            rep.all_agree
        ));
        ok &= rep.all_agree;
    }
    Ok(ok)
}

fn matrices(cfg: &SuiteConfig, out: &mut Vec<String>) -> Result<bool> {
    let caps = &cfg.caps;
    let mut ok = true;
    for (spec, n) in [(RingSpec::zmod(2), 3), (RingSpec::zmod(4), 2)] {
        let ps = projective_space(&ring(&spec, caps)?, n, caps)?;
        let rep = verify_matrix_encoding(&ps)?;
        out.push(format!(
            "{}^{n}: {} submodules, {} pairs; leq agrees: {}, round trip: {}",
            spec.label(),
            rep.submodules,
            rep.leq.checked,
            rep.leq.agrees(),
            rep.round_trip.agrees()
        ));
        ok &= rep.all_agree;
    }
    Ok(ok)
}

fn groups(cfg: &SuiteConfig, out: &mut Vec<String>) -> Result<bool> {
    let caps = &cfg.caps;
    let mut ok = true;
    for n in [3, 4] {
        let r = ring(&RingSpec::zmod(n), caps)?;
        let rep = check_transvection_identities(&r, 3)?;
        for row in &rep.rows {
            let status = match (&row.skipped, row.pass) {
                (Some(why), _) => format!("skipped ({why})"),
                (None, true) => "pass".to_string(),
                (None, false) => format!("fail at {}", row.counterexample.as_deref().unwrap_or("?")),
            };
            let note = if row.diagnostic { " [diagnostic]" } else { "" };
            out.push(format!(
                "Z{n}, n = 3: {} over {} parameters: {status}{note}",
                row.id, row.parameters
            ));
        }
        ok &= rep.all_pass && rep.rows.iter().take(2).all(|r| r.pass && r.skipped.is_none());
    }
    let sentences = group_sentence_sample(cfg.seed);
    for (spec, n) in [(RingSpec::zmod(2), 2), (RingSpec::zmod(3), 2), (RingSpec::zmod(4), 1)] {
        let rep = check_relativization(&build_ring(&spec, caps)?, n, &sentences, caps)?;
        let agree = rep.rows.iter().filter(|r| r.agree).count();
        out.push(format!(
            "GL_{n}({}) of order {}: {agree}/{} sentences agree with their relativization",
            spec.label(),
            rep.group_order,
            rep.rows.len()
        ));
        ok &= rep.all_agree;
    }
    Ok(ok)
}

/// Hypotheses `φ, φ → ψ` and the conclusion `ψ`.
pub fn modus_ponens_fixture() -> (Deduction, Vec<Formula>) {
    let x = Var::new("x", "R");
    let phi = Formula::eq(Term::Var(x.clone()), Term::constant("zero"));
    let psi = Formula::eq(
        Term::app("mul", vec![Term::Var(x), Term::constant("one")]),
        Term::constant("zero"),
    );
    let imp = Formula::implies(phi.clone(), psi.clone());
    let mut d = Deduction::new();
    let a = d.push(phi.clone(), Justification::Hypothesis);
    let b = d.push(imp.clone(), Justification::Hypothesis);
    d.push(
        psi,
        Justification::ModusPonens {
            premise: a,
            implication: b,
        },
    );
    (d, vec![phi, imp])
}

/// Generalizing over `y`, which is not free in the hypothesis.
pub fn generalization_fixture() -> (Deduction, Vec<Formula>) {
    let (x, y) = (Var::new("x", "R"), Var::new("y", "R"));
    let hyp = Formula::eq(Term::Var(x), Term::constant("zero"));
    let las1 = Formula::implies(
        hyp.clone(),
        Formula::implies(Formula::eq(Term::Var(y.clone()), Term::Var(y.clone())), hyp.clone()),
    );
    let mut d = Deduction::new();
    let a = d.push(las1.clone(), Justification::Axiom(1));
    d.push(
        Formula::forall(y.clone(), las1),
        Justification::Generalization { premise: a, var: y },
    );
    (d, vec![hyp])
}

/// Generalizing over `x`, which is free in the hypothesis `x = 0`.
pub fn generalization_violation_fixture() -> (Deduction, Vec<Formula>) {
    let x = Var::new("x", "R");
    let hyp = Formula::eq(Term::Var(x.clone()), Term::constant("zero"));
    let mut d = Deduction::new();
    let a = d.push(hyp.clone(), Justification::Hypothesis);
    d.push(
        Formula::forall(x.clone(), hyp.clone()),
        Justification::Generalization { premise: a, var: x },
    );
    (d, vec![hyp])
}

pub const SUBSTITUTION_DRAWS: usize = 1000;
pub const LAS_INSTANCES_PER_SCHEME: usize = 20;

fn logic(cfg: &SuiteConfig, out: &mut Vec<String>) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let models: Vec<_> = ["zmod2", "zmod3", "zmod4", "f4", "m2f2"]
        .iter()
        .map(|k| Ok(ring_model(&build_ring(&catalog_entry(k)?.spec, &cfg.caps)?)))
        .collect::<Result<_>>()?;
    let vars: Vec<Var> = ["x", "y", "z"].iter().map(|n| Var::new(*n, "R")).collect();
    let (mut held, mut drawn, mut skipped) = (0, 0, 0);
    while drawn < SUBSTITUTION_DRAWS {
        let m = &models[drawn % models.len()];
        match substitution_lemma_draw(m, &vars, &mut rng)? {
            Some(h) => {
                drawn += 1;
                held += usize::from(h);
            }
            None => skipped += 1,
        }
    }
    out.push(format!(
        "substitution lemma: {held}/{drawn} draws hold ({skipped} inadmissible draws redrawn)"
    ));
    let sig = crate::algebra::ring_signature();
    let mut accepted = 0;
    let mut total = 0;
    for k in 1..=14u8 {
        for _ in 0..LAS_INSTANCES_PER_SCHEME {
            let f = las_instance(k, &sig, &vars, &mut rng)?;
            let mut d = Deduction::new();
            d.push(f, Justification::Axiom(k));
            total += 1;
            accepted += usize::from(check_deduction(&d, &[]).is_ok());
        }
    }
    out.push(format!("axiom instances accepted: {accepted}/{total}"));
    let (d, h) = modus_ponens_fixture();
    let mp = check_deduction(&d, &h).is_ok();
    let (d, h) = generalization_fixture();
    let gen = check_deduction(&d, &h).is_ok();
    let (d, h) = generalization_violation_fixture();
    let violation = check_deduction(&d, &h);
    out.push(format!(
        "modus ponens accepted: {mp}; generalization accepted: {gen}; violation rejected: {}",
        violation.is_err()
    ));
    Ok(held == drawn && accepted == total && mp && gen && violation.is_err())
}
