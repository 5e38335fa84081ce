use super::formulas::{build_formula_with, FormulaName, FormulaStyle};
use super::model::CategoryModel;
use crate::error::{Error, Result};
use crate::logic::{Evaluator, Prepared};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

type Key = (FormulaName, FormulaStyle);

/// Compiled formulas and verdicts for one category model. Shared by clones
/// of the model; guarded by mutexes, and since verdicts are deterministic
/// the cache never changes an answer.
#[derive(Debug, Default)]
pub(crate) struct EvalCache {
    prepared: Mutex<HashMap<Key, Arc<(Prepared, Vec<usize>)>>>,
    results: Mutex<HashMap<(Key, Vec<usize>), bool>>,
}

impl CategoryModel {
    /// The compiled formula and, for each parameter in order, its slot.
    fn prepared(&self, key: Key) -> Result<Arc<(Prepared, Vec<usize>)>> {
        if let Some(p) = self.cache().prepared.lock().expect("cache lock").get(&key) {
            return Ok(p.clone());
        }
        let phi = build_formula_with(key.0, key.1);
        let p = Prepared::compile(self.model().signature(), &phi)?;
        let slots: Vec<_> = p.free_variables().cloned().collect();
        let order = key
            .0
            .parameters()
            .iter()
            .map(|v| slots.iter().position(|w| w == v).expect("parameter is free"))
            .collect();
        let entry = Arc::new((p, order));
        self.cache()
            .prepared
            .lock()
            .expect("cache lock")
            .insert(key, entry.clone());
        Ok(entry)
    }

    fn check_args(&self, name: FormulaName, args: &[usize]) -> Result<()> {
        let params = name.parameters();
        if params.len() != args.len() {
            return Err(Error::InvalidParameter(format!(
                "{name} takes {} arguments, got {}",
                params.len(),
                args.len()
            )));
        }
        for (v, &x) in params.iter().zip(args) {
            let limit = if v.sort == "Obj" {
                self.object_count()
            } else {
                self.morphism_count()
            };
            if x >= limit {
                return Err(Error::Model(format!("value {x} of {} is outside its carrier", v.name)));
            }
        }
        Ok(())
    }

    fn run_with(&self, ev: &mut Evaluator<'_>, p: &(Prepared, Vec<usize>), args: &[usize]) -> bool {
        let mut values = vec![0; args.len()];
        for (&slot, &x) in p.1.iter().zip(args) {
            values[slot] = x;
        }
        ev.run_values(&p.0, &values)
    }

    /// Truth of the formula at the given arguments (objects or morphisms in
    /// parameter order), cached per formula and arguments.
    pub fn eval_with(&self, name: FormulaName, style: FormulaStyle, args: &[usize]) -> Result<bool> {
        self.check_args(name, args)?;
        let key = (name, style);
        let ck = (key, args.to_vec());
        if let Some(&r) = self.cache().results.lock().expect("cache lock").get(&ck) {
            return Ok(r);
        }
        let p = self.prepared(key)?;
        let mut ev = Evaluator::new(self.model());
        let r = self.run_with(&mut ev, &p, args);
        self.cache().results.lock().expect("cache lock").insert(ck, r);
        Ok(r)
    }

    /// Every argument tuple of the formula with its verdict, in
    /// lexicographic order of the tuples.
    pub fn eval_all(&self, name: FormulaName, style: FormulaStyle) -> Result<Vec<(Vec<usize>, bool)>> {
        let sizes: Vec<usize> = name
            .parameters()
            .iter()
            .map(|v| {
                if v.sort == "Obj" {
                    self.object_count()
                } else {
                    self.morphism_count()
                }
            })
            .collect();
        let total: usize = sizes.iter().product();
        let tuple = |mut k: usize| {
            let mut t = vec![0; sizes.len()];
            for (slot, &s) in t.iter_mut().zip(&sizes).rev() {
                *slot = k % s;
                k /= s;
            }
            t
        };
        let p = self.prepared((name, style))?;
        // Chunks keep one evaluator (and its memo) per task.
        let chunk = (total / 64).clamp(1, 4096);
        let chunks = total.div_ceil(chunk);
        let verdicts: Vec<Vec<bool>> = crate::par::map_range(chunks, |c| {
            let mut ev = Evaluator::new(self.model());
            (c * chunk..((c + 1) * chunk).min(total))
                .map(|k| self.run_with(&mut ev, &p, &tuple(k)))
                .collect()
        });
        let out: Vec<(Vec<usize>, bool)> = verdicts
            .into_iter()
            .flatten()
            .enumerate()
            .map(|(k, r)| (tuple(k), r))
            .collect();
        let mut cache = self.cache().results.lock().expect("cache lock");
        for (args, r) in &out {
            cache.insert(((name, style), args.clone()), *r);
        }
        Ok(out)
    }
}

/// Truth of a formula in its literal style; see [`CategoryModel::eval_with`].
pub fn eval_formula(cat: &CategoryModel, name: FormulaName, args: &[usize]) -> Result<bool> {
    cat.eval_with(name, FormulaStyle::Literal, args)
}
