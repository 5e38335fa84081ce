use crate::error::{Error, Result};
use std::fmt;

/// A finite ring with unit, stored as dense operation tables over the
/// element indices `0..size`.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteRing {
    name: String,
    n: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    zero: usize,
    one: usize,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteRing({}, {} elements)", self.name, self.n)
    }
}

fn identity_of(n: usize, table: &[u16], what: &str) -> Result<usize> {
    (0..n)
        .find(|&e| (0..n).all(|x| table[e * n + x] as usize == x && table[x * n + e] as usize == x))
        .ok_or_else(|| Error::RingAxiom(format!("{what} has no two-sided identity")))
}

impl FiniteRing {
    /// Builds a ring from tables where `add[a][b]` is `a + b`. Every ring
    /// axiom is verified exhaustively; the identities are located in the
    /// tables.
    pub fn from_tables(name: impl Into<String>, add: &[Vec<usize>], mul: &[Vec<usize>]) -> Result<Self> {
        let n = add.len();
        if n == 0 {
            return Err(Error::RingAxiom("empty carrier".into()));
        }
        if n > u16::MAX as usize + 1 {
            return Err(Error::cap("ring_size", n as u128, u16::MAX as usize + 1));
        }
        if mul.len() != n || add.iter().chain(mul).any(|row| row.len() != n) {
            return Err(Error::RingAxiom("tables are not square of equal size".into()));
        }
        if add.iter().chain(mul).flatten().any(|&v| v >= n) {
            return Err(Error::RingAxiom("table entry outside the carrier".into()));
        }
        let flat = |t: &[Vec<usize>]| t.iter().flatten().map(|&v| v as u16).collect::<Vec<u16>>();
        Self::from_flat(name.into(), n, flat(add), flat(mul))
    }

    pub(crate) fn from_flat(name: String, n: usize, add: Vec<u16>, mul: Vec<u16>) -> Result<Self> {
        let zero = identity_of(n, &add, "addition")?;
        let one = identity_of(n, &mul, "multiplication")?;
        let a = |x: usize, y: usize| add[x * n + y] as usize;
        let m = |x: usize, y: usize| mul[x * n + y] as usize;
        let mut neg = vec![0u16; n];
        for x in 0..n {
            let y = (0..n)
                .find(|&y| a(x, y) == zero)
                .ok_or_else(|| Error::RingAxiom(format!("element {x} has no additive inverse")))?;
            neg[x] = y as u16;
            for y in 0..n {
                if a(x, y) != a(y, x) {
                    return Err(Error::RingAxiom(format!("addition is not commutative at ({x}, {y})")));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                let (xy_a, xy_m) = (a(x, y), m(x, y));
                for z in 0..n {
                    if a(xy_a, z) != a(x, a(y, z)) {
                        return Err(Error::RingAxiom(format!(
                            "addition is not associative at ({x}, {y}, {z})"
                        )));
                    }
                    if m(xy_m, z) != m(x, m(y, z)) {
                        return Err(Error::RingAxiom(format!(
                            "multiplication is not associative at ({x}, {y}, {z})"
                        )));
                    }
                    if m(x, a(y, z)) != a(xy_m, m(x, z)) {
                        return Err(Error::RingAxiom(format!(
                            "left distributivity fails at ({x}, {y}, {z})"
                        )));
                    }
                    if m(a(y, z), x) != a(m(y, x), m(z, x)) {
                        return Err(Error::RingAxiom(format!(
                            "right distributivity fails at ({x}, {y}, {z})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteRing {
            name,
            n,
            add,
            mul,
            neg,
            zero,
            one,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub(crate) fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.n + b] as usize
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b] as usize
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn add_table(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|a| (0..self.n).map(|b| self.add(a, b)).collect())
            .collect()
    }

    pub fn mul_table(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|a| (0..self.n).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    /// `k · a` for an integer `k ≥ 0`.
    pub fn times(&self, k: usize, a: usize) -> usize {
        (0..k).fold(self.zero, |acc, _| self.add(acc, a))
    }

    pub fn inverse(&self, a: usize) -> Option<usize> {
        (0..self.n).find(|&b| self.mul(a, b) == self.one && self.mul(b, a) == self.one)
    }

    pub fn is_unit(&self, a: usize) -> bool {
        self.inverse(a).is_some()
    }

    pub fn is_central(&self, a: usize) -> bool {
        (0..self.n).all(|x| self.mul(a, x) == self.mul(x, a))
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.n).all(|a| self.is_central(a))
    }

    pub fn is_idempotent(&self, a: usize) -> bool {
        self.mul(a, a) == a
    }

    /// Additive order of `a`.
    pub fn additive_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != self.zero {
            x = self.add(x, a);
            k += 1;
        }
        k
    }

    /// The opposite ring: same addition, multiplication `a ∘ b = b · a`.
    pub fn opposite(&self) -> FiniteRing {
        let n = self.n;
        let mut mul = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = self.mul[b * n + a];
            }
        }
        FiniteRing {
            name: format!("op({})", self.name),
            mul,
            ..self.clone()
        }
    }

    /// Subring carried by `elements`, reindexed in the given order. The
    /// subset must be closed under both operations and contain 0 and 1.
    pub fn subring(&self, name: impl Into<String>, elements: &[usize]) -> Result<FiniteRing> {
        let mut index = vec![usize::MAX; self.n];
        for (i, &e) in elements.iter().enumerate() {
            index[e] = i;
        }
        let k = elements.len();
        let mut add = Vec::with_capacity(k * k);
        let mut mul = Vec::with_capacity(k * k);
        for &a in elements {
            for &b in elements {
                let (s, p) = (index[self.add(a, b)], index[self.mul(a, b)]);
                if s == usize::MAX || p == usize::MAX {
                    return Err(Error::RingAxiom(
                        "subset is not closed under the ring operations".into(),
                    ));
                }
                add.push(s as u16);
                mul.push(p as u16);
            }
        }
        FiniteRing::from_flat(name.into(), k, add, mul)
    }
}
