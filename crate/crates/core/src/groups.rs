//! Unit groups of matrix rings, matrix units, commutator identities for
//! transvections, and the translation of group sentences into ring
//! sentences about invertible elements.

use crate::algebra::{matrix_entries, matrix_index, matrix_ring, ring_model, ring_signature, FiniteRing};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::logic::{
    Assignment, Evaluator, FiniteModel, Formula, ModelBuilder, Prepared, Signature, SignatureBuilder, Term, Var,
};
use serde::Serialize;
use std::sync::{Arc, OnceLock};

/// Sort `G`, binary `mul`, unary `inv`, constant `one`.
pub fn group_signature() -> Arc<Signature> {
    static SIG: OnceLock<Arc<Signature>> = OnceLock::new();
    SIG.get_or_init(|| {
        Arc::new(
            SignatureBuilder::new()
                .sort("G")
                .function("mul", &["G", "G"], "G")
                .function("inv", &["G"], "G")
                .constant("one", "G")
                .build()
                .expect("group signature"),
        )
    })
    .clone()
}

/// `GL_n(R)` as a structure of the group language. Element `k` of the
/// carrier is the matrix `units[k]` of `matrices`.
#[derive(Debug, Clone)]
pub struct GroupModel {
    pub model: FiniteModel,
    pub matrices: FiniteRing,
    pub units: Vec<usize>,
    pub rank: usize,
}

impl GroupModel {
    pub fn order(&self) -> usize {
        self.units.len()
    }
}

pub fn gl_model(r: &FiniteRing, n: usize, caps: &Caps) -> Result<GroupModel> {
    if n == 0 {
        return Err(Error::InvalidParameter("rank must be at least 1".into()));
    }
    caps.check("ring_size", (r.size() as u128).saturating_pow((n * n) as u32))?;
    let m = matrix_ring(r, n)?;
    let units: Vec<usize> = m.elements().filter(|&x| m.is_unit(x)).collect();
    let mut index = vec![usize::MAX; m.size()];
    for (k, &u) in units.iter().enumerate() {
        index[u] = k;
    }
    let g = units.len();
    let mul: Vec<usize> = (0..g * g).map(|i| index[m.mul(units[i % g], units[i / g])]).collect();
    let inv: Vec<usize> = units.iter().map(|&u| index[m.inverse(u).expect("unit")]).collect();
    let one = index[m.one()];
    let model = ModelBuilder::new(group_signature())
        .carrier("G", g)?
        .function("mul", mul.clone())?
        .function("inv", inv.clone())?
        .constant("one", one)?
        .build()?;
    let at = |a: usize, b: usize| mul[a + g * b];
    for a in 0..g {
        if at(a, one) != a || at(one, a) != a || at(a, inv[a]) != one || at(inv[a], a) != one {
            return Err(Error::RingAxiom(format!("unit group fails at element {a}")));
        }
    }
    if (g as u128).pow(3) <= caps.enumeration as u128 {
        for a in 0..g {
            for b in 0..g {
                for c in 0..g {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(Error::RingAxiom("unit group multiplication is not associative".into()));
                    }
                }
            }
        }
    }
    Ok(GroupModel {
        model,
        matrices: m,
        units,
        rank: n,
    })
}

/// An `n × n` matrix over a finite ring, row-major. Used where the full
/// matrix ring is too large to tabulate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    n: usize,
    entries: Vec<usize>,
}

impl Matrix {
    pub fn zero(r: &FiniteRing, n: usize) -> Matrix {
        Matrix {
            n,
            entries: vec![r.zero(); n * n],
        }
    }

    pub fn identity(r: &FiniteRing, n: usize) -> Matrix {
        let mut m = Matrix::zero(r, n);
        for i in 0..n {
            m.entries[i * n + i] = r.one();
        }
        m
    }

    /// `λ e_ij`, indices from 0.
    pub fn unit(r: &FiniteRing, n: usize, i: usize, j: usize, lambda: usize) -> Matrix {
        let mut m = Matrix::zero(r, n);
        m.entries[i * n + j] = lambda;
        m
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.entries[i * self.n + j]
    }

    pub fn add(&self, r: &FiniteRing, other: &Matrix) -> Matrix {
        Matrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| r.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, r: &FiniteRing, other: &Matrix) -> Matrix {
        Matrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| r.sub(a, b))
                .collect(),
        }
    }

    pub fn mul(&self, r: &FiniteRing, other: &Matrix) -> Matrix {
        let n = self.n;
        let mut entries = vec![r.zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = r.zero();
                for l in 0..n {
                    acc = r.add(acc, r.mul(self.get(i, l), other.get(l, j)));
                }
                entries[i * n + j] = acc;
            }
        }
        Matrix { n, entries }
    }

    fn from_element(base: usize, n: usize, x: usize) -> Matrix {
        Matrix {
            n,
            entries: matrix_entries(base, n, x),
        }
    }

    fn element(&self, base: usize) -> usize {
        matrix_index(base, &self.entries)
    }
}

/// A family `e_ij` of elements of `M_n(R)`.
#[derive(Debug, Clone)]
pub struct MatrixUnitSystem {
    pub ring: Arc<FiniteRing>,
    pub rank: usize,
    /// `units[i * rank + j]` is `e_ij` (indices from 0).
    pub units: Vec<usize>,
}

impl MatrixUnitSystem {
    /// The standard units of `M_n(base)`, with the matrix ring built here.
    pub fn standard(base: &FiniteRing, n: usize, caps: &Caps) -> Result<MatrixUnitSystem> {
        if n == 0 {
            return Err(Error::InvalidParameter("rank must be at least 1".into()));
        }
        caps.check("ring_size", (base.size() as u128).saturating_pow((n * n) as u32))?;
        let ring = Arc::new(matrix_ring(base, n)?);
        let units = (0..n * n)
            .map(|k| Matrix::unit(base, n, k / n, k % n, base.one()).element(base.size()))
            .collect();
        Ok(MatrixUnitSystem { ring, rank: n, units })
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.units[i * self.rank + j]
    }

    /// `c e_ij c⁻¹` for a unit `c` of the matrix ring.
    pub fn conjugate(&self, c: usize) -> Result<MatrixUnitSystem> {
        let r = &self.ring;
        let ci = r
            .inverse(c)
            .ok_or_else(|| Error::InvalidParameter(format!("{c} is not invertible")))?;
        Ok(MatrixUnitSystem {
            ring: self.ring.clone(),
            rank: self.rank,
            units: self.units.iter().map(|&e| r.mul(r.mul(c, e), ci)).collect(),
        })
    }

    /// The same system with `e_ij` replaced by `x`.
    pub fn with_unit(&self, i: usize, j: usize, x: usize) -> MatrixUnitSystem {
        let mut s = self.clone();
        s.units[i * self.rank + j] = x;
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatrixUnitCheck {
    pub pass: bool,
    /// First `(i, j, s, t)` (from 1) where `e_ij e_st ≠ δ_js e_it`.
    pub counterexample: Option<[usize; 4]>,
    /// `Σ e_ii = 1`.
    pub complete: bool,
}

pub fn verify_matrix_units(sys: &MatrixUnitSystem) -> MatrixUnitCheck {
    let r = &sys.ring;
    let n = sys.rank;
    let mut counterexample = None;
    'outer: for i in 0..n {
        for j in 0..n {
            for s in 0..n {
                for t in 0..n {
                    let want = if j == s { sys.get(i, t) } else { r.zero() };
                    if r.mul(sys.get(i, j), sys.get(s, t)) != want {
                        counterexample = Some([i + 1, j + 1, s + 1, t + 1]);
                        break 'outer;
                    }
                }
            }
        }
    }
    let complete = (0..n).fold(r.zero(), |acc, i| r.add(acc, sys.get(i, i))) == r.one();
    MatrixUnitCheck {
        pass: counterexample.is_none() && complete,
        counterexample,
        complete,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityRow {
    pub id: String,
    pub parameters: usize,
    pub pass: bool,
    pub counterexample: Option<String>,
    /// Why the identity was not checked.
    pub skipped: Option<String>,
    /// Reported for information only; does not affect the overall verdict.
    pub diagnostic: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub ring: String,
    pub rank: usize,
    pub rows: Vec<IdentityRow>,
    pub all_pass: bool,
}

/// `a⁻¹ b⁻¹ a b` where `prod(x, y)` is the product `x` then `y` in the
/// chosen order.
fn commutator(prod: &dyn Fn(&Matrix, &Matrix) -> Matrix, a: &Matrix, ai: &Matrix, b: &Matrix, bi: &Matrix) -> Matrix {
    prod(&prod(&prod(ai, bi), a), b)
}

/// Exhaustive checks of the transvection commutator identities in
/// `M_n(r)`, `n ≥ 3`, and of the involutions `1 - 2e_ii` when 2 is a unit.
///
/// `[x, y] = x⁻¹y⁻¹xy`. The identity `[1 + λe_12, 1 + re_2k] = 1 + λr e_1k`
/// holds for the usual product. The identity
/// `[1 + re_12, 1 - se_23] = 1 + (rs)e_13` holds when products are read as
/// composition in the reverse order (`x∘y = yx`); for the usual product the
/// right side is `1 - (rs)e_13`, and that literal reading is reported as a
/// diagnostic row.
pub fn check_transvection_identities(r: &FiniteRing, n: usize) -> Result<IdentityReport> {
    if n < 3 {
        return Err(Error::InvalidParameter(
            "the commutator identities need rank at least 3".into(),
        ));
    }
    let one = Matrix::identity(r, n);
    let e = |i: usize, j: usize, x: usize| Matrix::unit(r, n, i, j, x);
    let std = |x: &Matrix, y: &Matrix| x.mul(r, y);
    let rev = |x: &Matrix, y: &Matrix| y.mul(r, x);
    let mut rows = Vec::new();

    let mut first = IdentityRow {
        id: "[1+λe12, 1+re2k] = 1+λr e1k".into(),
        parameters: 0,
        pass: true,
        counterexample: None,
        skipped: None,
        diagnostic: false,
    };
    'first: for k in 2..n {
        for lambda in r.elements() {
            for x in r.elements() {
                first.parameters += 1;
                let a = one.add(r, &e(0, 1, lambda));
                let ai = one.sub(r, &e(0, 1, lambda));
                let b = one.add(r, &e(1, k, x));
                let bi = one.sub(r, &e(1, k, x));
                let got = commutator(&std, &a, &ai, &b, &bi);
                if got != one.add(r, &e(0, k, r.mul(lambda, x))) {
                    first.pass = false;
                    first.counterexample = Some(format!("k={} λ={lambda} r={x}", k + 1));
                    break 'first;
                }
            }
        }
    }
    rows.push(first);

    for (id, prod, diagnostic) in [
        (
            "[1+re12, 1-se23] = 1+(rs)e13, reversed composition",
            &rev as &dyn Fn(&Matrix, &Matrix) -> Matrix,
            false,
        ),
        ("[1+re12, 1-se23] = 1+(rs)e13, usual product", &std, true),
    ] {
        let mut row = IdentityRow {
            id: id.into(),
            parameters: 0,
            pass: true,
            counterexample: None,
            skipped: None,
            diagnostic,
        };
        'second: for x in r.elements() {
            for s in r.elements() {
                row.parameters += 1;
                let a = one.add(r, &e(0, 1, x));
                let ai = one.sub(r, &e(0, 1, x));
                let b = one.sub(r, &e(1, 2, s));
                let bi = one.add(r, &e(1, 2, s));
                let got = commutator(prod, &a, &ai, &b, &bi);
                if got != one.add(r, &e(0, 2, r.mul(x, s))) {
                    row.pass = false;
                    row.counterexample = Some(format!("r={x} s={s}"));
                    break 'second;
                }
            }
        }
        rows.push(row);
    }

    let two = r.add(r.one(), r.one());
    let half = r.inverse(two);
    for id in ["(1-2eii)^2 = 1", "[1-2e11, 1-2eii] = 1"] {
        let mut row = IdentityRow {
            id: id.into(),
            parameters: 0,
            pass: true,
            counterexample: None,
            skipped: None,
            diagnostic: false,
        };
        if half.is_none() {
            row.skipped = Some("2 is not invertible".into());
            rows.push(row);
            continue;
        }
        let inv = |i: usize| one.sub(r, &e(i, i, two));
        for i in 0..n {
            row.parameters += 1;
            let ok = if id.starts_with('(') {
                std(&inv(i), &inv(i)) == one
            } else {
                commutator(&std, &inv(0), &inv(0), &inv(i), &inv(i)) == one
            };
            if !ok {
                row.pass = false;
                row.counterexample = Some(format!("i={}", i + 1));
                break;
            }
        }
        rows.push(row);
    }
    let all_pass = rows.iter().all(|x| x.diagnostic || x.pass);
    Ok(IdentityReport {
        ring: r.name().to_string(),
        rank: n,
        rows,
        all_pass,
    })
}

struct Relativizer {
    next: usize,
}

impl Relativizer {
    fn fresh(&mut self) -> Var {
        self.next += 1;
        Var::new(format!("_u{}", self.next), "R")
    }

    /// `∃x' (x x' = 1 ∧ x' x = 1)`.
    fn unit(&mut self, x: &Term) -> Formula {
        let w = self.fresh();
        Formula::exists(w.clone(), self.inverse_pair(x, &Term::Var(w)))
    }

    fn inverse_pair(&self, x: &Term, w: &Term) -> Formula {
        let one = Term::constant("one");
        Formula::and(
            Formula::eq(Term::app("mul", vec![x.clone(), w.clone()]), one.clone()),
            Formula::eq(Term::app("mul", vec![w.clone(), x.clone()]), one),
        )
    }

    /// Rewrites `t` without `inv`, collecting a witness variable and its
    /// defining formula for each inverse.
    fn term(&mut self, t: &Term, defs: &mut Vec<(Var, Formula)>) -> Result<Term> {
        Ok(match t {
            Term::Var(v) => Term::Var(Var::new(v.name.clone(), "R")),
            Term::Const(c) if c == "one" => t.clone(),
            Term::App(f, args) if f == "mul" && args.len() == 2 => {
                let a = self.term(&args[0], defs)?;
                let b = self.term(&args[1], defs)?;
                Term::app("mul", vec![a, b])
            }
            Term::App(f, args) if f == "inv" && args.len() == 1 => {
                let a = self.term(&args[0], defs)?;
                let w = self.fresh();
                let def = self.inverse_pair(&a, &Term::Var(w.clone()));
                defs.push((w.clone(), def));
                Term::Var(w)
            }
            other => return Err(Error::UnknownSymbol(format!("{other}"))),
        })
    }

    fn formula(&mut self, f: &Formula) -> Result<Formula> {
        Ok(match f {
            Formula::Eq(a, b) => {
                let mut defs = Vec::new();
                let a = self.term(a, &mut defs)?;
                let b = self.term(b, &mut defs)?;
                let vars: Vec<Var> = defs.iter().map(|(v, _)| v.clone()).collect();
                let mut parts: Vec<Formula> = defs.into_iter().map(|(_, d)| d).collect();
                parts.push(Formula::eq(a, b));
                Formula::exists_all(vars, Formula::and_all(parts))
            }
            Formula::Pred(p, _) => return Err(Error::UnknownSymbol(p.clone())),
            Formula::Not(a) => Formula::not(self.formula(a)?),
            Formula::And(a, b) => Formula::and(self.formula(a)?, self.formula(b)?),
            Formula::Or(a, b) => Formula::or(self.formula(a)?, self.formula(b)?),
            Formula::Implies(a, b) => Formula::implies(self.formula(a)?, self.formula(b)?),
            Formula::Iff(a, b) => Formula::iff(self.formula(a)?, self.formula(b)?),
            Formula::Forall(v, body) => {
                let x = Var::new(v.name.clone(), "R");
                let u = self.unit(&Term::Var(x.clone()));
                Formula::forall(x, Formula::implies(u, self.formula(body)?))
            }
            Formula::Exists(v, body) => {
                let x = Var::new(v.name.clone(), "R");
                let u = self.unit(&Term::Var(x.clone()));
                Formula::exists(x, Formula::and(u, self.formula(body)?))
            }
        })
    }
}

/// Translates a sentence of the group language into the ring language:
/// quantifiers are restricted to units and each `inv(t)` becomes a
/// witnessed two-sided inverse.
pub fn relativize_group_sentence(phi: &Formula) -> Result<Formula> {
    phi.check(&group_signature())?;
    if !phi.is_sentence() {
        let free: Vec<String> = phi.free_variables().into_iter().map(|v| v.name).collect();
        return Err(Error::NotASentence(free.join(", ")));
    }
    Relativizer { next: 0 }.formula(phi)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelativizationRow {
    pub sentence: String,
    pub group: bool,
    pub ring: bool,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelativizationReport {
    pub ring: String,
    pub rank: usize,
    pub group_order: usize,
    pub rows: Vec<RelativizationRow>,
    pub all_agree: bool,
}

/// Evaluates each group sentence in `GL_n(r)` and its relativization in
/// `M_n(r)`.
pub fn check_relativization(
    r: &FiniteRing,
    n: usize,
    sentences: &[Formula],
    caps: &Caps,
) -> Result<RelativizationReport> {
    let g = gl_model(r, n, caps)?;
    let rm = ring_model(&g.matrices);
    let mut eg = Evaluator::new(&g.model);
    let mut er = Evaluator::new(&rm);
    let empty = Assignment::new();
    let mut rows = Vec::new();
    for phi in sentences {
        let rel = relativize_group_sentence(phi)?;
        let group = eg.run(&Prepared::compile(&group_signature(), phi)?, &empty)?;
        let ring = er.run(&Prepared::compile(&ring_signature(), &rel)?, &empty)?;
        rows.push(RelativizationRow {
            sentence: phi.to_string(),
            group,
            ring,
            agree: group == ring,
        });
    }
    let all_agree = rows.iter().all(|x| x.agree);
    Ok(RelativizationReport {
        ring: r.name().to_string(),
        rank: n,
        group_order: g.order(),
        rows,
        all_agree,
    })
}

/// The matrix of element `x` of a tabulated matrix ring over `base`.
pub fn matrix_of(base: &FiniteRing, n: usize, x: usize) -> Matrix {
    Matrix::from_element(base.size(), n, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_ring, RingSpec};
    use crate::logic::parse_formula;

    fn ring(n: usize) -> FiniteRing {
        build_ring(&RingSpec::zmod(n), &Caps::default()).unwrap()
    }

    /// Invertible matrices counted by brute force over all pairs.
    fn count_invertible(r: &FiniteRing, n: usize) -> usize {
        let all: Vec<Matrix> = (0..r.size().pow((n * n) as u32)).map(|x| matrix_of(r, n, x)).collect();
        let one = Matrix::identity(r, n);
        all.iter()
            .filter(|a| all.iter().any(|b| a.mul(r, b) == one && b.mul(r, a) == one))
            .count()
    }

    #[test]
    fn general_linear_groups() {
        let caps = Caps::default();
        assert_eq!(gl_model(&ring(2), 2, &caps).unwrap().order(), 6);
        assert_eq!(count_invertible(&ring(2), 2), 6);
        assert_eq!(gl_model(&ring(2), 1, &caps).unwrap().order(), 1);
        assert_eq!(gl_model(&ring(4), 1, &caps).unwrap().units, vec![1, 3]);
        assert_eq!(
            gl_model(&ring(3), 2, &caps).unwrap().order(),
            count_invertible(&ring(3), 2)
        );
        assert!(matches!(gl_model(&ring(2), 3, &caps), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn matrix_units() {
        let caps = Caps::default();
        let z3 = ring(3);
        let sys = MatrixUnitSystem::standard(&z3, 2, &caps).unwrap();
        assert!(verify_matrix_units(&sys).pass);
        let g = gl_model(&z3, 2, &caps).unwrap();
        for &c in g.units.iter().step_by(5) {
            assert!(verify_matrix_units(&sys.conjugate(c).unwrap()).pass);
        }
        let broken = sys.with_unit(0, 1, sys.ring.zero());
        let check = verify_matrix_units(&broken);
        assert!(!check.pass);
        assert_eq!(check.counterexample, Some([1, 2, 2, 1]));
    }

    #[test]
    fn transvections() {
        let z3 = check_transvection_identities(&ring(3), 3).unwrap();
        assert!(z3.all_pass, "{z3:?}");
        assert_eq!(z3.rows[0].parameters, 9);
        // The literal reading fails exactly when 2rs is nonzero.
        assert!(!z3.rows[2].pass);
        let f2 = check_transvection_identities(&ring(2), 3).unwrap();
        assert!(f2.all_pass);
        assert!(f2.rows[2].pass);
        assert!(f2.rows[3].skipped.is_some() && f2.rows[4].skipped.is_some());
        let z4 = check_transvection_identities(&ring(4), 4).unwrap();
        assert!(z4.all_pass);
        assert!(check_transvection_identities(&ring(3), 2).is_err());
    }

    #[test]
    fn zero_parameter_commutator_is_trivial() {
        let r = ring(5);
        let one = Matrix::identity(&r, 3);
        let b = one.add(&r, &Matrix::unit(&r, 3, 1, 2, 4));
        let bi = one.sub(&r, &Matrix::unit(&r, 3, 1, 2, 4));
        let std = |x: &Matrix, y: &Matrix| x.mul(&r, y);
        assert_eq!(commutator(&std, &one, &one, &b, &bi), one);
    }

    #[test]
    fn relativization() {
        let caps = Caps::default();
        let sig = group_signature();
        let p = |t: &str| parse_formula(t, &sig).unwrap();
        let inverses = p("forall x:G. exists y:G. mul(x, y) = one");
        let commutative = p("forall x:G. forall y:G. mul(x, y) = mul(y, x)");
        let involution = p("exists x:G. mul(x, x) = one & ~(x = one)");
        let with_inv = p("forall x:G. mul(inv(inv(x)), inv(x)) = one");
        let f2 = check_relativization(
            &ring(2),
            2,
            &[inverses.clone(), commutative.clone(), with_inv.clone()],
            &caps,
        )
        .unwrap();
        assert!(f2.all_agree);
        assert!(f2.rows[0].ring && !f2.rows[1].group && !f2.rows[1].ring && f2.rows[2].ring);
        let z4 = check_relativization(&ring(4), 1, &[involution], &caps).unwrap();
        assert!(z4.all_agree && z4.rows[0].group);
        let rel = relativize_group_sentence(&inverses).unwrap();
        rel.check(&ring_signature()).unwrap();
        assert!(rel.is_sentence());
        assert!(relativize_group_sentence(&p("mul(x, one) = x")).is_err());
    }
}
