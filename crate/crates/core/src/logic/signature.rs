use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symbol {
    Predicate(usize),
    Function(usize),
    Constant(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionDecl {
    pub args: Vec<String>,
    pub result: String,
}

/// The JSON document form of a signature.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SignatureDoc {
    pub sorts: Vec<String>,
    #[serde(default)]
    pub predicates: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub functions: BTreeMap<String, FunctionDecl>,
    #[serde(default)]
    pub constants: BTreeMap<String, String>,
}

/// A validated many-sorted signature. Symbols of each kind are indexed in
/// name order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    doc: SignatureDoc,
    pred_names: Vec<String>,
    pred_sorts: Vec<Vec<usize>>,
    fn_names: Vec<String>,
    fn_sorts: Vec<(Vec<usize>, usize)>,
    const_names: Vec<String>,
    const_sorts: Vec<usize>,
    lookup: HashMap<String, Symbol>,
}

impl Signature {
    pub fn new(doc: SignatureDoc) -> Result<Self> {
        if doc.sorts.is_empty() {
            return Err(Error::Signature("no sorts declared".into()));
        }
        let mut sort_ix = HashMap::new();
        for (i, s) in doc.sorts.iter().enumerate() {
            if !is_ident(s) || sort_ix.insert(s.clone(), i).is_some() {
                return Err(Error::Signature(format!("bad or duplicate sort `{s}`")));
            }
        }
        let sort = |s: &String| {
            sort_ix
                .get(s)
                .copied()
                .ok_or_else(|| Error::Signature(format!("undeclared sort `{s}`")))
        };
        let mut lookup = HashMap::new();
        let mut claim = |name: &String, sym: Symbol| {
            if !is_ident(name) || is_keyword(name) {
                return Err(Error::Signature(format!("bad symbol name `{name}`")));
            }
            if lookup.insert(name.clone(), sym).is_some() {
                return Err(Error::Signature(format!("symbol `{name}` declared twice")));
            }
            Ok(())
        };
        let mut pred_names = Vec::new();
        let mut pred_sorts = Vec::new();
        for (i, (name, args)) in doc.predicates.iter().enumerate() {
            if args.is_empty() {
                return Err(Error::Signature(format!("predicate `{name}` has arity 0")));
            }
            claim(name, Symbol::Predicate(i))?;
            pred_names.push(name.clone());
            pred_sorts.push(args.iter().map(sort).collect::<Result<Vec<_>>>()?);
        }
        let mut fn_names = Vec::new();
        let mut fn_sorts = Vec::new();
        for (i, (name, decl)) in doc.functions.iter().enumerate() {
            if decl.args.is_empty() {
                return Err(Error::Signature(format!("function `{name}` has arity 0")));
            }
            claim(name, Symbol::Function(i))?;
            fn_names.push(name.clone());
            fn_sorts.push((
                decl.args.iter().map(sort).collect::<Result<Vec<_>>>()?,
                sort(&decl.result)?,
            ));
        }
        let mut const_names = Vec::new();
        let mut const_sorts = Vec::new();
        for (i, (name, s)) in doc.constants.iter().enumerate() {
            claim(name, Symbol::Constant(i))?;
            const_names.push(name.clone());
            const_sorts.push(sort(s)?);
        }
        Ok(Signature {
            doc,
            pred_names,
            pred_sorts,
            fn_names,
            fn_sorts,
            const_names,
            const_sorts,
            lookup,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SignatureDoc = serde_json::from_str(text).map_err(|e| Error::Signature(e.to_string()))?;
        Signature::new(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.doc).expect("signature serializes")
    }

    pub fn doc(&self) -> &SignatureDoc {
        &self.doc
    }

    pub fn sorts(&self) -> &[String] {
        &self.doc.sorts
    }

    pub fn sort_index(&self, name: &str) -> Option<usize> {
        self.doc.sorts.iter().position(|s| s == name)
    }

    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        self.lookup.get(name).copied()
    }

    pub fn predicate_count(&self) -> usize {
        self.pred_names.len()
    }

    pub fn function_count(&self) -> usize {
        self.fn_names.len()
    }

    pub fn constant_count(&self) -> usize {
        self.const_names.len()
    }

    pub fn predicate_name(&self, i: usize) -> &str {
        &self.pred_names[i]
    }

    pub fn predicate_sorts(&self, i: usize) -> &[usize] {
        &self.pred_sorts[i]
    }

    pub fn function_name(&self, i: usize) -> &str {
        &self.fn_names[i]
    }

    pub fn function_sorts(&self, i: usize) -> (&[usize], usize) {
        (&self.fn_sorts[i].0, self.fn_sorts[i].1)
    }

    pub fn constant_name(&self, i: usize) -> &str {
        &self.const_names[i]
    }

    pub fn constant_sort(&self, i: usize) -> usize {
        self.const_sorts[i]
    }

    pub fn predicate_index(&self, name: &str) -> Option<usize> {
        match self.symbol(name) {
            Some(Symbol::Predicate(i)) => Some(i),
            _ => None,
        }
    }

    pub fn function_index(&self, name: &str) -> Option<usize> {
        match self.symbol(name) {
            Some(Symbol::Function(i)) => Some(i),
            _ => None,
        }
    }

    pub fn constant_index(&self, name: &str) -> Option<usize> {
        match self.symbol(name) {
            Some(Symbol::Constant(i)) => Some(i),
            _ => None,
        }
    }
}

/// Incremental construction of a [`Signature`].
#[derive(Debug, Default, Clone)]
pub struct SignatureBuilder {
    doc: SignatureDoc,
}

impl SignatureBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn sort(mut self, name: &str) -> Self {
        self.doc.sorts.push(name.to_string());
        self
    }

    pub fn predicate(mut self, name: &str, args: &[&str]) -> Self {
        self.doc
            .predicates
            .insert(name.to_string(), args.iter().map(|s| s.to_string()).collect());
        self
    }

    pub fn function(mut self, name: &str, args: &[&str], result: &str) -> Self {
        self.doc.functions.insert(
            name.to_string(),
            FunctionDecl {
                args: args.iter().map(|s| s.to_string()).collect(),
                result: result.to_string(),
            },
        );
        self
    }

    pub fn constant(mut self, name: &str, sort: &str) -> Self {
        self.doc.constants.insert(name.to_string(), sort.to_string());
        self
    }

    pub fn build(self) -> Result<Signature> {
        Signature::new(self.doc)
    }
}

pub(crate) fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

pub(crate) fn is_keyword(s: &str) -> bool {
    s == "forall" || s == "exists"
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_bad_sorts() {
        assert!(SignatureBuilder::new()
            .sort("R")
            .constant("a", "R")
            .predicate("a", &["R"])
            .build()
            .is_err());
        assert!(SignatureBuilder::new().sort("R").constant("a", "S").build().is_err());
        assert!(SignatureBuilder::new().sort("R").predicate("P", &[]).build().is_err());
        assert!(SignatureBuilder::new().build().is_err());
    }

    #[test]
    fn json_round_trip() {
        let sig = SignatureBuilder::new()
            .sort("R")
            .function("add", &["R", "R"], "R")
            .constant("zero", "R")
            .build()
            .unwrap();
        let again = Signature::from_json(&sig.to_json()).unwrap();
        assert_eq!(sig, again);
        assert_eq!(again.function_index("add"), Some(0));
    }
}
