use super::ring::FiniteRing;
use crate::caps::Caps;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Recipe for a finite ring. Serialised with a `kind` tag, e.g.
/// `{"kind": "matrix", "base": {"kind": "zmod", "n": 2}, "k": 2}`.
///
/// `poly_quotient` lists the coefficients of the monic modulus from the
/// constant term upwards, so `[1, 0, 1]` is `x² + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RingSpec {
    Zmod { n: usize },
    Matrix { base: Box<RingSpec>, k: usize },
    PolyQuotient { p: usize, modulus: Vec<usize> },
    Product { left: Box<RingSpec>, right: Box<RingSpec> },
    Opposite { base: Box<RingSpec> },
    Tables { add: Vec<Vec<usize>>, mul: Vec<Vec<usize>> },
}

impl RingSpec {
    pub fn zmod(n: usize) -> Self {
        RingSpec::Zmod { n }
    }

    pub fn matrix(base: RingSpec, k: usize) -> Self {
        RingSpec::Matrix {
            base: Box::new(base),
            k,
        }
    }

    pub fn poly_quotient(p: usize, modulus: &[usize]) -> Self {
        RingSpec::PolyQuotient {
            p,
            modulus: modulus.to_vec(),
        }
    }

    pub fn product(left: RingSpec, right: RingSpec) -> Self {
        RingSpec::Product {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn opposite(base: RingSpec) -> Self {
        RingSpec::Opposite { base: Box::new(base) }
    }

    /// Number of elements the ring will have, computed without building it.
    pub fn size(&self) -> Result<u128> {
        Ok(match self {
            RingSpec::Zmod { n } => *n as u128,
            RingSpec::Matrix { base, k } => {
                let b = base.size()?;
                let e = (*k as u32).saturating_mul(*k as u32);
                b.checked_pow(e).unwrap_or(u128::MAX)
            }
            RingSpec::PolyQuotient { p, modulus } => {
                let d = modulus.len().saturating_sub(1) as u32;
                (*p as u128).checked_pow(d).unwrap_or(u128::MAX)
            }
            RingSpec::Product { left, right } => left.size()?.saturating_mul(right.size()?),
            RingSpec::Opposite { base } => base.size()?,
            RingSpec::Tables { add, .. } => add.len() as u128,
        })
    }

    /// Short human-readable name such as `M2(Z2)` or `F2[x]/(x^2+x+1)`.
    pub fn label(&self) -> String {
        match self {
            RingSpec::Zmod { n } => format!("Z{n}"),
            RingSpec::Matrix { base, k } => format!("M{k}({})", base.label()),
            RingSpec::PolyQuotient { p, modulus } => {
                let mut terms = Vec::new();
                for (i, &c) in modulus.iter().enumerate().rev() {
                    if c % p.max(&1) == 0 {
                        continue;
                    }
                    let mono = match i {
                        0 => String::new(),
                        1 => "x".to_string(),
                        _ => format!("x^{i}"),
                    };
                    terms.push(match (c, mono.is_empty()) {
                        (_, true) => c.to_string(),
                        (1, false) => mono,
                        _ => format!("{c}{mono}"),
                    });
                }
                format!("F{p}[x]/({})", terms.join("+"))
            }
            RingSpec::Product { left, right } => format!("{}x{}", left.label(), right.label()),
            RingSpec::Opposite { base } => format!("op({})", base.label()),
            RingSpec::Tables { add, .. } => format!("T{}", add.len()),
        }
    }
}

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Builds the ring described by `spec`, refusing anything larger than
/// `caps.ring_size` before allocating tables.
pub fn build_ring(spec: &RingSpec, caps: &Caps) -> Result<FiniteRing> {
    caps.check("ring_size", spec.size()?)?;
    let ring = match spec {
        RingSpec::Zmod { n } => {
            if *n == 0 {
                return Err(Error::InvalidParameter("zmod needs n >= 1".into()));
            }
            zmod(*n)?
        }
        RingSpec::Matrix { base, k } => {
            if *k == 0 {
                return Err(Error::InvalidParameter("matrix size k must be at least 1".into()));
            }
            matrix_ring(&build_ring(base, caps)?, *k)?
        }
        RingSpec::PolyQuotient { p, modulus } => poly_quotient(*p, modulus)?,
        RingSpec::Product { left, right } => product(&build_ring(left, caps)?, &build_ring(right, caps)?)?,
        RingSpec::Opposite { base } => build_ring(base, caps)?.opposite(),
        RingSpec::Tables { add, mul } => FiniteRing::from_tables("tables", add, mul)?,
    };
    Ok(ring.renamed(spec.label()))
}

fn zmod(n: usize) -> Result<FiniteRing> {
    let mut add = Vec::with_capacity(n * n);
    let mut mul = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            add.push(((a + b) % n) as u16);
            mul.push(((a * b) % n) as u16);
        }
    }
    FiniteRing::from_flat(format!("Z{n}"), n, add, mul)
}

/// Decodes a matrix index into row-major entries, entry (0,0) least
/// significant.
pub(crate) fn matrix_entries(base: usize, k: usize, mut x: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(k * k);
    for _ in 0..k * k {
        out.push(x % base);
        x /= base;
    }
    out
}

pub(crate) fn matrix_index(base: usize, entries: &[usize]) -> usize {
    entries.iter().rev().fold(0, |acc, &e| acc * base + e)
}

pub(crate) fn matrix_ring(r: &FiniteRing, k: usize) -> Result<FiniteRing> {
    let b = r.size();
    let n = b.pow((k * k) as u32);
    let decoded: Vec<Vec<usize>> = (0..n).map(|x| matrix_entries(b, k, x)).collect();
    let mut add = vec![0u16; n * n];
    let mut mul = vec![0u16; n * n];
    let mut s = vec![0usize; k * k];
    let mut p = vec![0usize; k * k];
    for x in 0..n {
        let dx = &decoded[x];
        for y in 0..n {
            let dy = &decoded[y];
            for i in 0..k * k {
                s[i] = r.add(dx[i], dy[i]);
            }
            for i in 0..k {
                for j in 0..k {
                    let mut acc = r.zero();
                    for l in 0..k {
                        acc = r.add(acc, r.mul(dx[i * k + l], dy[l * k + j]));
                    }
                    p[i * k + j] = acc;
                }
            }
            add[x * n + y] = matrix_index(b, &s) as u16;
            mul[x * n + y] = matrix_index(b, &p) as u16;
        }
    }
    FiniteRing::from_flat(format!("M{k}({})", r.name()), n, add, mul)
}

fn poly_quotient(p: usize, modulus: &[usize]) -> Result<FiniteRing> {
    if !is_prime(p) {
        return Err(Error::InvalidParameter(format!("{p} is not prime")));
    }
    if modulus.len() < 2 {
        return Err(Error::InvalidParameter("modulus must have degree at least 1".into()));
    }
    if modulus[modulus.len() - 1] % p != 1 {
        return Err(Error::InvalidParameter("modulus must be monic".into()));
    }
    let d = modulus.len() - 1;
    let n = p.pow(d as u32);
    let coeffs = |mut x: usize| -> Vec<usize> {
        let mut c = vec![0; d];
        for slot in c.iter_mut() {
            *slot = x % p;
            x /= p;
        }
        c
    };
    let encode = |c: &[usize]| c.iter().rev().fold(0, |acc, &e| acc * p + e);
    let decoded: Vec<Vec<usize>> = (0..n).map(coeffs).collect();
    let mut add = vec![0u16; n * n];
    let mut mul = vec![0u16; n * n];
    for x in 0..n {
        for y in 0..n {
            let (a, b) = (&decoded[x], &decoded[y]);
            let s: Vec<usize> = a.iter().zip(b).map(|(u, v)| (u + v) % p).collect();
            let mut prod = vec![0usize; 2 * d];
            for i in 0..d {
                for j in 0..d {
                    prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
                }
            }
            // Reduce from the top: x^d = -(m_0 + ... + m_{d-1} x^{d-1}).
            for top in (d..2 * d).rev() {
                let c = prod[top];
                if c == 0 {
                    continue;
                }
                prod[top] = 0;
                for i in 0..d {
                    let sub = c * (modulus[i] % p) % p;
                    let slot = &mut prod[top - d + i];
                    *slot = (*slot + p - sub) % p;
                }
            }
            add[x * n + y] = encode(&s) as u16;
            mul[x * n + y] = encode(&prod[..d]) as u16;
        }
    }
    FiniteRing::from_flat(String::new(), n, add, mul)
}

fn product(a: &FiniteRing, b: &FiniteRing) -> Result<FiniteRing> {
    let (na, nb) = (a.size(), b.size());
    let n = na * nb;
    let mut add = vec![0u16; n * n];
    let mut mul = vec![0u16; n * n];
    for x in 0..n {
        for y in 0..n {
            let (x1, x2, y1, y2) = (x % na, x / na, y % na, y / na);
            add[x * n + y] = (a.add(x1, y1) + na * b.add(x2, y2)) as u16;
            mul[x * n + y] = (a.mul(x1, y1) + na * b.mul(x2, y2)) as u16;
        }
    }
    FiniteRing::from_flat(String::new(), n, add, mul)
}
