use super::signature::Signature;
use crate::error::{Error, Result};
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::Range;
use std::sync::Arc;

/// Values a relation argument can take given the other arguments.
#[derive(Debug, Clone)]
pub enum Candidates {
    Range(Range<usize>),
    List(Vec<usize>),
}

impl Candidates {
    pub fn len(&self) -> usize {
        match self {
            Candidates::Range(r) => r.len(),
            Candidates::List(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> usize {
        match self {
            Candidates::Range(r) => r.start + i,
            Candidates::List(v) => v[i],
        }
    }
}

/// A relation whose tuples are computed on demand.
pub trait RelationOracle: Send + Sync + fmt::Debug {
    fn holds(&self, args: &[usize]) -> bool;

    /// Superset of the values at `pos` that can make the relation hold,
    /// given the arguments marked `Some`. `None` means no narrowing.
    fn candidates(&self, pos: usize, bound: &[Option<usize>]) -> Option<Candidates>;
}

#[derive(Debug, Clone)]
pub struct TableRelation {
    arity: usize,
    tuples: Vec<Vec<usize>>,
    set: HashSet<Vec<usize>>,
    // For each position, the other arguments mapped to the admissible values.
    index: Vec<HashMap<Vec<usize>, Vec<usize>>>,
}

impl TableRelation {
    pub fn new(arity: usize, tuples: impl IntoIterator<Item = Vec<usize>>) -> Self {
        let mut set = HashSet::new();
        let mut list = Vec::new();
        for t in tuples {
            assert_eq!(t.len(), arity, "tuple arity");
            if set.insert(t.clone()) {
                list.push(t);
            }
        }
        list.sort();
        let mut index = vec![HashMap::new(); arity];
        for t in &list {
            for (pos, idx) in index.iter_mut().enumerate() {
                let mut key = t.clone();
                key.remove(pos);
                idx.entry(key).or_insert_with(Vec::new).push(t[pos]);
            }
        }
        TableRelation {
            arity,
            tuples: list,
            set,
            index,
        }
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    pub fn contains(&self, t: &[usize]) -> bool {
        self.set.contains(t)
    }
}

#[derive(Debug, Clone)]
pub enum Relation {
    Table(TableRelation),
    Computed(Arc<dyn RelationOracle>),
}

impl Relation {
    pub fn holds(&self, args: &[usize]) -> bool {
        match self {
            Relation::Table(t) => t.contains(args),
            Relation::Computed(o) => o.holds(args),
        }
    }

    pub fn candidates(&self, pos: usize, bound: &[Option<usize>]) -> Option<Candidates> {
        match self {
            Relation::Table(t) => {
                let mut key = Vec::with_capacity(t.arity.saturating_sub(1));
                for (i, b) in bound.iter().enumerate() {
                    if i != pos {
                        key.push((*b)?);
                    }
                }
                Some(Candidates::List(t.index[pos].get(&key).cloned().unwrap_or_default()))
            }
            Relation::Computed(o) => o.candidates(pos, bound),
        }
    }
}

/// A total function stored as a table in mixed radix over its argument
/// carriers, first argument least significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionTable {
    pub(crate) strides: Vec<usize>,
    pub(crate) values: Vec<usize>,
}

impl FunctionTable {
    pub fn apply(&self, args: &[usize]) -> usize {
        let mut ix = 0;
        for (a, s) in args.iter().zip(&self.strides) {
            ix += a * s;
        }
        self.values[ix]
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }
}

/// A finite many-sorted structure. Elements of each sort are `0..k`.
#[derive(Debug, Clone)]
pub struct FiniteModel {
    signature: Arc<Signature>,
    carriers: Vec<usize>,
    relations: Vec<Relation>,
    functions: Vec<FunctionTable>,
    constants: Vec<usize>,
}

impl FiniteModel {
    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn carrier(&self, sort: usize) -> usize {
        self.carriers[sort]
    }

    pub fn carriers(&self) -> &[usize] {
        &self.carriers
    }

    pub fn relation(&self, i: usize) -> &Relation {
        &self.relations[i]
    }

    pub fn function(&self, i: usize) -> &FunctionTable {
        &self.functions[i]
    }

    pub fn constant(&self, i: usize) -> usize {
        self.constants[i]
    }

    pub fn carrier_of(&self, sort: &str) -> Option<usize> {
        self.signature.sort_index(sort).map(|i| self.carriers[i])
    }

    /// Number of argument tuples of predicate `i`.
    pub fn tuple_space(&self, i: usize) -> u128 {
        self.signature
            .predicate_sorts(i)
            .iter()
            .map(|&s| self.carriers[s] as u128)
            .product()
    }
}

/// Builder for [`FiniteModel`]; symbols not given explicitly are an error.
pub struct ModelBuilder {
    signature: Arc<Signature>,
    carriers: Vec<Option<usize>>,
    relations: Vec<Option<Relation>>,
    functions: Vec<Option<Vec<usize>>>,
    constants: Vec<Option<usize>>,
}

impl ModelBuilder {
    pub fn new(signature: Arc<Signature>) -> Self {
        let (s, p, f, c) = (
            signature.sorts().len(),
            signature.predicate_count(),
            signature.function_count(),
            signature.constant_count(),
        );
        ModelBuilder {
            signature,
            carriers: vec![None; s],
            relations: vec![None; p],
            functions: vec![None; f],
            constants: vec![None; c],
        }
    }

    fn sort(&self, name: &str) -> Result<usize> {
        self.signature
            .sort_index(name)
            .ok_or_else(|| Error::Model(format!("unknown sort {name}")))
    }

    pub fn carrier(mut self, sort: &str, size: usize) -> Result<Self> {
        let s = self.sort(sort)?;
        self.carriers[s] = Some(size);
        Ok(self)
    }

    pub fn table_relation(mut self, name: &str, tuples: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        let i = self
            .signature
            .predicate_index(name)
            .ok_or_else(|| Error::UnknownSymbol(name.into()))?;
        let arity = self.signature.predicate_sorts(i).len();
        let tuples: Vec<Vec<usize>> = tuples.into_iter().collect();
        if tuples.iter().any(|t| t.len() != arity) {
            return Err(Error::Model(format!("tuple of wrong arity for {name}")));
        }
        self.relations[i] = Some(Relation::Table(TableRelation::new(arity, tuples)));
        Ok(self)
    }

    pub fn computed_relation(mut self, name: &str, oracle: Arc<dyn RelationOracle>) -> Result<Self> {
        let i = self
            .signature
            .predicate_index(name)
            .ok_or_else(|| Error::UnknownSymbol(name.into()))?;
        self.relations[i] = Some(Relation::Computed(oracle));
        Ok(self)
    }

    /// Function values in mixed radix, first argument least significant.
    pub fn function(mut self, name: &str, values: Vec<usize>) -> Result<Self> {
        let i = self
            .signature
            .function_index(name)
            .ok_or_else(|| Error::UnknownSymbol(name.into()))?;
        self.functions[i] = Some(values);
        Ok(self)
    }

    pub fn constant(mut self, name: &str, value: usize) -> Result<Self> {
        let i = self
            .signature
            .constant_index(name)
            .ok_or_else(|| Error::UnknownSymbol(name.into()))?;
        self.constants[i] = Some(value);
        Ok(self)
    }

    pub fn build(self) -> Result<FiniteModel> {
        let sig = self.signature;
        let carriers: Vec<usize> = self
            .carriers
            .iter()
            .enumerate()
            .map(|(i, c)| match c {
                Some(0) => Err(Error::Model(format!("empty carrier for sort {}", sig.sorts()[i]))),
                Some(c) => Ok(*c),
                None => Err(Error::Model(format!("no carrier for sort {}", sig.sorts()[i]))),
            })
            .collect::<Result<_>>()?;
        let mut relations = Vec::new();
        for (i, r) in self.relations.into_iter().enumerate() {
            let r = r.ok_or_else(|| Error::Model(format!("no relation for {}", sig.predicate_name(i))))?;
            if let Relation::Table(t) = &r {
                let sorts = sig.predicate_sorts(i);
                for tup in t.tuples() {
                    if tup.iter().zip(sorts).any(|(&x, &s)| x >= carriers[s]) {
                        return Err(Error::Model(format!("tuple out of range in {}", sig.predicate_name(i))));
                    }
                }
            }
            relations.push(r);
        }
        let mut functions = Vec::new();
        for (i, f) in self.functions.into_iter().enumerate() {
            let values = f.ok_or_else(|| Error::Model(format!("no table for {}", sig.function_name(i))))?;
            let (args, result) = sig.function_sorts(i);
            let mut strides = Vec::with_capacity(args.len());
            let mut size = 1usize;
            for &a in args {
                strides.push(size);
                size *= carriers[a];
            }
            if values.len() != size {
                return Err(Error::Model(format!(
                    "table for {} has {} entries, expected {size}",
                    sig.function_name(i),
                    values.len()
                )));
            }
            if values.iter().any(|&v| v >= carriers[result]) {
                return Err(Error::Model(format!("value out of range in {}", sig.function_name(i))));
            }
            functions.push(FunctionTable { strides, values });
        }
        let mut constants = Vec::new();
        for (i, c) in self.constants.into_iter().enumerate() {
            let c = c.ok_or_else(|| Error::Model(format!("no value for {}", sig.constant_name(i))))?;
            if c >= carriers[sig.constant_sort(i)] {
                return Err(Error::Model(format!("constant {} out of range", sig.constant_name(i))));
            }
            constants.push(c);
        }
        Ok(FiniteModel {
            signature: sig,
            carriers,
            relations,
            functions,
            constants,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::signature::SignatureBuilder;

    #[test]
    fn builder_validates() {
        let sig = Arc::new(
            SignatureBuilder::new()
                .sort("S")
                .predicate("E", &["S", "S"])
                .function("f", &["S"], "S")
                .constant("c", "S")
                .build()
                .unwrap(),
        );
        let ok = ModelBuilder::new(sig.clone())
            .carrier("S", 2)
            .unwrap()
            .table_relation("E", vec![vec![0, 1]])
            .unwrap()
            .function("f", vec![1, 0])
            .unwrap()
            .constant("c", 0)
            .unwrap()
            .build()
            .unwrap();
        assert!(ok.relation(0).holds(&[0, 1]));
        assert!(!ok.relation(0).holds(&[1, 0]));
        assert_eq!(ok.function(0).apply(&[1]), 0);
        let bad = ModelBuilder::new(sig.clone())
            .carrier("S", 2)
            .unwrap()
            .table_relation("E", vec![vec![0, 2]])
            .unwrap()
            .function("f", vec![1, 0])
            .unwrap()
            .constant("c", 0)
            .unwrap()
            .build();
        assert!(bad.is_err());
        let empty = ModelBuilder::new(sig).carrier("S", 0).unwrap().build();
        assert!(empty.is_err());
    }
}
