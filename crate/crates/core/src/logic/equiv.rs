use super::eval::{Assignment, Evaluator, Prepared};
use super::model::FiniteModel;
use super::syntax::Formula;
use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SentenceVerdict {
    pub sentence: String,
    pub left: bool,
    pub right: bool,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub verdicts: Vec<SentenceVerdict>,
    pub all_agree: bool,
}

impl EquivalenceReport {
    pub fn disagreements(&self) -> impl Iterator<Item = &SentenceVerdict> {
        self.verdicts.iter().filter(|v| !v.agree)
    }
}

/// Evaluates every sentence in both models and reports agreement.
pub fn sampled_equivalence(m1: &FiniteModel, m2: &FiniteModel, sentences: &[Formula]) -> Result<EquivalenceReport> {
    if m1.signature() != m2.signature() {
        return Err(Error::Signature("models have different signatures".into()));
    }
    let mut e1 = Evaluator::new(m1);
    let mut e2 = Evaluator::new(m2);
    let empty = Assignment::new();
    let mut verdicts = Vec::with_capacity(sentences.len());
    for phi in sentences {
        let free = phi.free_variables();
        if !free.is_empty() {
            let names: Vec<String> = free.into_iter().map(|v| v.name).collect();
            return Err(Error::NotASentence(names.join(", ")));
        }
        let p = Prepared::compile(m1.signature(), phi)?;
        let left = e1.run(&p, &empty)?;
        let right = e2.run(&p, &empty)?;
        verdicts.push(SentenceVerdict {
            sentence: phi.to_string(),
            left,
            right,
            agree: left == right,
        });
    }
    let all_agree = verdicts.iter().all(|v| v.agree);
    Ok(EquivalenceReport { verdicts, all_agree })
}
