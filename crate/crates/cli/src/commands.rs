use crate::{CatCmd, Group, GroupCmd, LatticeCmd, ModuleCmd, Outcome, RingCmd, SkeletonArg, SuiteCmd, UltraCmd};
use modeq::algebra::{build_ring, ring_features, ring_isomorphic, ring_model, sentence_phi_r, FiniteRing, RingSpec};
use modeq::catalog::catalog_entry;
use modeq::category::{
    compare_with_oracles, encode_category, ring_from_endo_monoid, xi, CategoryModel, FormulaName, FormulaStyle,
};
use modeq::groups::{
    check_relativization, check_transvection_identities, gl_model, group_signature, verify_matrix_units,
    MatrixUnitSystem,
};
use modeq::lattice::{
    lattice_definable_ops, projective_space, recover_end_ring, verify_matrix_encoding, Copies, Interpretation,
    ProjectiveSpace,
};
use modeq::logic::{parse_formula, Assignment, Evaluator, Prepared};
use modeq::module::{
    build_skeleton, end_ring, is_cogenerator_relative, is_injective_relative, module_predicates, regular_module,
    Skeleton,
};
use modeq::sample::{group_sentence_sample, ring_sentence_sample};
use modeq::suite::{run_check, SuiteConfig, CRITERIA};
use modeq::ultra::{check_ultrapower_equivalence, enumerate_filters, filter_product, Filter};
use modeq::{Caps, Error, Result};
use serde_json::{json, Map, Value};
use std::path::Path;
use std::sync::Arc;

struct Report {
    body: Map<String, Value>,
    violations: Vec<String>,
}

impl Report {
    fn new() -> Self {
        Report {
            body: Map::new(),
            violations: Vec::new(),
        }
    }

    fn set(&mut self, key: &str, v: impl Into<Value>) {
        self.body.insert(key.to_string(), v.into());
    }

    fn require(&mut self, holds: bool, what: impl Into<String>) {
        if !holds {
            self.violations.push(what.into());
        }
    }

    fn done(self, name: &'static str) -> Result<Outcome> {
        Ok(Outcome {
            name,
            body: self.body,
            violations: self.violations,
        })
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialise")
}

/// A catalog key, or a path to a JSON ring spec.
pub fn load_spec(arg: &str) -> Result<RingSpec> {
    let path = Path::new(arg);
    if path.is_file() || arg.ends_with(".json") {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{arg}: {e}")))?;
        return serde_json::from_str(&text).map_err(|e| Error::InvalidParameter(format!("{arg}: {e}")));
    }
    Ok(catalog_entry(arg)?.spec)
}

fn load_ring(arg: &str, caps: &Caps) -> Result<(RingSpec, Arc<FiniteRing>)> {
    let spec = load_spec(arg)?;
    let r = build_ring(&spec, caps)?;
    Ok((spec, Arc::new(r)))
}

fn skeleton(arg: &SkeletonArg, caps: &Caps) -> Result<(RingSpec, Skeleton)> {
    let (spec, r) = load_ring(&arg.ring.ring, caps)?;
    Ok((spec, build_skeleton(&r, arg.bound, caps)?))
}

fn category(arg: &SkeletonArg, caps: &Caps) -> Result<(RingSpec, CategoryModel)> {
    let (spec, skel) = skeleton(arg, caps)?;
    Ok((spec, encode_category(&skel, caps)?))
}

fn ring_summary(rep: &mut Report, spec: &RingSpec, r: &FiniteRing) {
    rep.set("ring", spec.label());
    rep.set("spec", to_value(spec));
    rep.set("size", r.size());
    rep.set("commutative", r.is_commutative());
}

fn features(r: &FiniteRing) -> Value {
    let f = ring_features(r);
    json!({
        "units": f.units,
        "central_idempotents": f.central_idempotents,
        "center": f.center_elements,
        "center_size": f.center.size(),
    })
}

pub fn run(cmd: &Group, caps: &Caps) -> Result<Outcome> {
    match cmd {
        Group::Ring(c) => ring(c, caps),
        Group::Module(c) => module(c, caps),
        Group::Cat(c) => cat(c, caps),
        Group::Ultra(c) => ultra(c, caps),
        Group::Lattice(c) => lattice(c, caps),
        Group::Group(c) => group(c, caps),
        Group::Suite(c) => suite(c, caps),
    }
}

fn ring(cmd: &RingCmd, caps: &Caps) -> Result<Outcome> {
    let mut rep = Report::new();
    match cmd {
        RingCmd::New { ring, features: with } => {
            let (spec, r) = load_ring(&ring.ring, caps)?;
            ring_summary(&mut rep, &spec, &r);
            if *with {
                rep.set("features", features(&r));
            }
            rep.done("ring new")
        }
        RingCmd::Features { ring } => {
            let (spec, r) = load_ring(&ring.ring, caps)?;
            ring_summary(&mut rep, &spec, &r);
            rep.set("features", features(&r));
            rep.done("ring features")
        }
        RingCmd::Iso { ring, other } => {
            let (s1, r1) = load_ring(&ring.ring, caps)?;
            let (s2, r2) = load_ring(other, caps)?;
            let map = ring_isomorphic(&r1, &r2);
            rep.set("left", s1.label());
            rep.set("right", s2.label());
            rep.set("isomorphic", map.is_some());
            rep.set("map", to_value(&map));
            rep.done("ring iso")
        }
    }
}

fn module(cmd: &ModuleCmd, caps: &Caps) -> Result<Outcome> {
    let mut rep = Report::new();
    match cmd {
        ModuleCmd::Skeleton(arg) => {
            let (spec, skel) = skeleton(arg, caps)?;
            rep.set("ring", spec.label());
            rep.set("bound", arg.bound);
            rep.set("complete", skel.is_complete());
            let objects: Vec<Value> = skel
                .modules()
                .iter()
                .enumerate()
                .map(|(i, m)| json!({"index": i, "name": m.name(), "size": m.size(), "invariant": m.invariant().1}))
                .collect();
            rep.set("objects", objects);
            rep.done("module skeleton")
        }
        ModuleCmd::Predicates(arg) => {
            let (spec, skel) = skeleton(arg, caps)?;
            rep.set("ring", spec.label());
            rep.set("bound", arg.bound);
            let mut objects = Vec::new();
            for (i, m) in skel.modules().iter().enumerate() {
                let p = module_predicates(m, caps)?;
                objects.push(json!({
                    "index": i,
                    "name": m.name(),
                    "size": m.size(),
                    "predicates": to_value(&p),
                    "injective_in_skeleton": is_injective_relative(m, &skel, caps)?,
                    "cogenerator_in_skeleton": is_cogenerator_relative(m, &skel, caps)?,
                }));
            }
            rep.set("objects", objects);
            rep.done("module predicates")
        }
    }
}

fn style(s: &str) -> Result<FormulaStyle> {
    serde_json::from_value(Value::from(s)).map_err(|_| Error::InvalidParameter(format!("unknown formula style {s}")))
}

fn cat(cmd: &CatCmd, caps: &Caps) -> Result<Outcome> {
    let mut rep = Report::new();
    match cmd {
        CatCmd::Encode(arg) => {
            let (spec, cat) = category(arg, caps)?;
            rep.set("ring", spec.label());
            rep.set("bound", arg.bound);
            rep.set("objects", cat.object_count());
            rep.set("morphisms", cat.morphism_count());
            match cat.verify_axioms(caps) {
                Ok(()) => rep.set("axioms", "verified"),
                Err(Error::CategoryAxiom(msg)) => {
                    rep.set("axioms", msg.clone());
                    rep.require(false, format!("category axioms: {msg}"));
                }
                Err(e) => return Err(e),
            }
            rep.done("cat encode")
        }
        CatCmd::Eval {
            skel,
            formula,
            style: st,
            oracle,
        } => {
            let name: FormulaName = formula.parse()?;
            let st = style(st)?;
            let (spec, cat) = category(skel, caps)?;
            rep.set("ring", spec.label());
            rep.set("bound", skel.bound);
            rep.set("formula", name.to_string());
            rep.set("style", to_value(&st));
            if *oracle {
                let agreement = compare_with_oracles(&cat, &[name], st, caps)?;
                for row in agreement.disagreements() {
                    rep.require(
                        false,
                        format!(
                            "{}{:?}: formula {} oracle {}",
                            row.formula, row.args, row.verdict, row.oracle
                        ),
                    );
                }
                rep.set("all_agree", agreement.all_agree);
                rep.set("rows", to_value(&agreement.rows));
            } else {
                let rows: Vec<Value> = cat
                    .eval_all(name, st)?
                    .into_iter()
                    .map(|(args, v)| json!({"args": args, "verdict": v}))
                    .collect();
                rep.set("rows", rows);
            }
            rep.done("cat eval")
        }
        CatCmd::Gr(arg) => {
            let (spec, skel) = skeleton(arg, caps)?;
            let r = skel.ring().clone();
            let p = skel
                .find(&regular_module(&r), caps)?
                .ok_or_else(|| Error::InvalidParameter(format!("bound {} is below |R| = {}", arg.bound, r.size())))?;
            let cat = encode_category(&skel, caps)?;
            let got = ring_from_endo_monoid(&cat, p)?;
            let end = end_ring(skel.module(p), caps)?;
            let to_end = ring_isomorphic(&got, &end);
            let to_r = ring_isomorphic(&got, &r);
            rep.set("ring", spec.label());
            rep.set("bound", arg.bound);
            rep.set("objects", cat.object_count());
            rep.set("morphisms", cat.morphism_count());
            rep.set("recovered_size", got.size());
            rep.set("isomorphic_to_end", to_end.is_some());
            rep.set("isomorphism", to_value(&to_r));
            let rel = if to_r.is_some() { "≅" } else { "≇" };
            rep.set("certificate", format!("recovered {rel} {}", spec.label()));
            rep.require(to_end.is_some(), "recovered ring is not End(R_R)");
            rep.require(
                to_r.is_some(),
                format!("recovered ring is not isomorphic to {}", spec.label()),
            );
            rep.done("cat gr")
        }
        CatCmd::Xi { skel, over, expect } => {
            let (spec, r) = load_ring(&skel.ring.ring, caps)?;
            let over_arg = SkeletonArg {
                ring: crate::RingArg {
                    ring: over.clone().unwrap_or_else(|| skel.ring.ring.clone()),
                },
                bound: skel.bound,
            };
            let (over_spec, cat) = category(&over_arg, caps)?;
            let sentence = xi(&sentence_phi_r(&r))?;
            let p = Prepared::compile(cat.model().signature(), &sentence)?;
            let value = Evaluator::new(cat.model()).run(&p, &Assignment::new())?;
            rep.set("ring", spec.label());
            rep.set("over", over_spec.label());
            rep.set("bound", skel.bound);
            rep.set("value", value);
            if let Some(want) = expect {
                rep.set("expected", *want);
                rep.require(
                    value == *want,
                    format!("xi({}) over {} is {value}", spec.label(), over_spec.label()),
                );
            }
            rep.done("cat xi")
        }
    }
}

fn ultra(cmd: &UltraCmd, caps: &Caps) -> Result<Outcome> {
    let mut rep = Report::new();
    match cmd {
        UltraCmd::Enum { index } => {
            let e = enumerate_filters(*index, caps)?;
            let principal = e.ultrafilters.iter().all(|u| u.filter().generator().len() == 1);
            rep.set("index_size", *index);
            rep.set("filters", to_value(&e.filters));
            rep.set(
                "ultrafilters",
                e.ultrafilters.iter().map(|u| u.point()).collect::<Vec<_>>(),
            );
            rep.require(e.ultrafilters.len() == *index, "ultrafilter count differs from |I|");
            rep.require(principal, "non-principal ultrafilter");
            rep.done("ultra enum")
        }
        UltraCmd::Product { ring, index, generator } => {
            let (spec, r) = load_ring(&ring.ring, caps)?;
            let d = Filter::principal(*index, generator)?;
            let family = vec![ring_model(&r); *index];
            let p = filter_product(&family, &d, caps)?;
            rep.set("ring", spec.label());
            rep.set("filter", to_value(&d));
            rep.set("product_size", p.model.carriers().to_vec());
            rep.set("expected_size", r.size().pow(generator.len() as u32));
            rep.require(
                p.model.carrier(0) == r.size().pow(generator.len() as u32),
                "product size is not |R|^|Y|",
            );
            rep.done("ultra product")
        }
        UltraCmd::Check { ring, index, seed } => {
            let (spec, r) = load_ring(&ring.ring, caps)?;
            let model = ring_model(&r);
            let sentences = ring_sentence_sample(*seed);
            let e = enumerate_filters(*index, caps)?;
            let mut rows = Vec::new();
            for u in &e.ultrafilters {
                let c = check_ultrapower_equivalence(&model, u, &sentences, caps)?;
                rep.require(
                    c.isomorphism.is_some(),
                    format!("ultrapower at point {} is not isomorphic", c.point),
                );
                for v in c.equivalence.disagreements() {
                    rep.require(
                        false,
                        format!("ultrapower at point {} differs on {}", c.point, v.sentence),
                    );
                }
                rows.push(json!({
                    "point": c.point,
                    "product_size": c.product_size,
                    "isomorphic": c.isomorphism.is_some(),
                    "sentences": c.equivalence.verdicts.len(),
                    "agree": c.all_agree,
                }));
            }
            rep.set("ring", spec.label());
            rep.set("index_size", *index);
            rep.set("seed", *seed);
            rep.set("ultrapowers", rows);
            rep.done("ultra check")
        }
    }
}

fn space(ring: &crate::RingArg, rank: usize, caps: &Caps) -> Result<(RingSpec, ProjectiveSpace)> {
    let (spec, r) = load_ring(&ring.ring, caps)?;
    Ok((spec, projective_space(&r, rank, caps)?))
}

fn lattice(cmd: &LatticeCmd, caps: &Caps) -> Result<Outcome> {
    let mut rep = Report::new();
    match cmd {
        LatticeCmd::Space { ring, rank, ops } => {
            let (spec, ps) = space(ring, *rank, caps)?;
            rep.set("ring", spec.label());
            rep.set("rank", *rank);
            rep.set("submodules", ps.len());
            let mut by_size = std::collections::BTreeMap::new();
            for i in 0..ps.len() {
                *by_size.entry(ps.size_of(i).to_string()).or_insert(0usize) += 1;
            }
            rep.set("by_size", to_value(&by_size));
            if *ops {
                let o = lattice_definable_ops(&ps, caps)?;
                for (name, a) in [
                    ("top", &o.top),
                    ("bottom", &o.bottom),
                    ("meet", &o.meet),
                    ("join", &o.join),
                    ("direct_sum", &o.direct_sum),
                    ("iso_d", &o.iso_d),
                ] {
                    rep.require(
                        a.agrees(),
                        format!("{name} formula disagrees at {:?}", a.mismatches.first()),
                    );
                }
                rep.set("ops", to_value(&o));
            }
            rep.done("lattice space")
        }
        LatticeCmd::Recover { ring, rank } => {
            let (spec, ps) = space(ring, *rank, caps)?;
            let it = Interpretation::new(&ps, Copies::standard(&ps, 1, caps)?, caps)?;
            let (rec, cert) = recover_end_ring(&it)?;
            let iso = ring_isomorphic(&rec, ps.ring()).is_some();
            rep.set("ring", spec.label());
            rep.set("rank", *rank);
            rep.set("submodules", ps.len());
            rep.set("certificate", to_value(&cert));
            rep.set("isomorphic_to_ring", iso);
            rep.require(cert.is_isomorphism, "q ↦ V_q is not a ring isomorphism");
            rep.require(iso, format!("recovered ring is not isomorphic to {}", spec.label()));
            rep.done("lattice recover")
        }
        LatticeCmd::Matrix { ring, rank } => {
            let (spec, ps) = space(ring, *rank, caps)?;
            let e = verify_matrix_encoding(&ps)?;
            rep.set("ring", spec.label());
            rep.set("rank", *rank);
            rep.require(e.round_trip.agrees(), "encode/decode round trip");
            rep.require(e.leq.agrees(), "matrix order disagrees with inclusion");
            rep.require(e.equivalent.agrees(), "matrix equivalence disagrees with equality");
            rep.set("encoding", to_value(&e));
            rep.done("lattice matrix")
        }
    }
}

fn group(cmd: &GroupCmd, caps: &Caps) -> Result<Outcome> {
    let mut rep = Report::new();
    match cmd {
        GroupCmd::Gl { ring, rank } => {
            let (spec, r) = load_ring(&ring.ring, caps)?;
            let g = gl_model(&r, *rank, caps)?;
            let units = verify_matrix_units(&MatrixUnitSystem::standard(&r, *rank, caps)?);
            rep.set("ring", spec.label());
            rep.set("rank", *rank);
            rep.set("order", g.order());
            rep.set("matrix_units", to_value(&units));
            rep.require(
                units.pass,
                format!("standard matrix units fail at {:?}", units.counterexample),
            );
            rep.done("group gl")
        }
        GroupCmd::Identities { ring, rank } => {
            let (spec, r) = load_ring(&ring.ring, caps)?;
            let ids = check_transvection_identities(&r, *rank)?;
            for row in ids
                .rows
                .iter()
                .filter(|r| !r.pass && !r.diagnostic && r.skipped.is_none())
            {
                rep.require(
                    false,
                    format!("{} fails at {}", row.id, row.counterexample.as_deref().unwrap_or("?")),
                );
            }
            rep.set("ring", spec.label());
            rep.set("report", to_value(&ids));
            rep.done("group identities")
        }
        GroupCmd::Relativize {
            ring,
            rank,
            seed,
            sentence,
        } => {
            let (spec, r) = load_ring(&ring.ring, caps)?;
            let sentences = if sentence.is_empty() {
                group_sentence_sample(*seed)
            } else {
                let sig = group_signature();
                sentence
                    .iter()
                    .map(|s| parse_formula(s, &sig))
                    .collect::<Result<Vec<_>>>()?
            };
            let rel = check_relativization(&r, *rank, &sentences, caps)?;
            for row in rel.rows.iter().filter(|r| !r.agree) {
                rep.require(false, format!("relativization of {} disagrees", row.sentence));
            }
            rep.set("ring", spec.label());
            rep.set("seed", *seed);
            rep.set("report", to_value(&rel));
            rep.done("group relativize")
        }
    }
}

fn suite(cmd: &SuiteCmd, caps: &Caps) -> Result<Outcome> {
    let SuiteCmd::All { catalog, seed, only } = cmd;
    if catalog != "default" {
        return Err(Error::InvalidParameter(format!("unknown catalog {catalog}")));
    }
    if let Some(bad) = only.iter().find(|&&i| i == 0 || i > CRITERIA) {
        return Err(Error::InvalidParameter(format!("no check numbered {bad}")));
    }
    let cfg = SuiteConfig {
        seed: *seed,
        caps: *caps,
    };
    let ids: Vec<usize> = if only.is_empty() {
        (1..=CRITERIA).collect()
    } else {
        only.clone()
    };
    let mut rep = Report::new();
    let mut checks = Vec::new();
    for id in ids {
        let o = run_check(id, &cfg);
        rep.require(o.pass, format!("check {id}: {}", o.title));
        checks.push(to_value(&o));
    }
    rep.set("catalog", catalog.as_str());
    rep.set("seed", *seed);
    rep.set("caps", to_value(caps));
    rep.set("checks", checks);
    rep.done("suite all")
}
