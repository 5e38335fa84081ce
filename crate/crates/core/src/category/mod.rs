//! A skeleton of `mod-R` as a two-sorted finite structure, the categorical
//! formulas evaluated on it, and the recovery of ring structure from
//! composition.

mod eval;
mod formulas;
mod gr;
mod model;
mod oracle;
mod xi;

pub use eval::eval_formula;
pub use formulas::{
    build_formula, build_formula_with, build_literal_formula, FormulaName, FormulaStyle, LiteralFormulaName,
};
pub use gr::{find_pairing, graph_table, pairings, ring_from_endo_monoid, ring_from_pairing, Pairing};
pub use model::{category_signature, category_signature_doc, encode_category, CategoryModel};
pub use oracle::{compare_with_oracles, oracle_verdict, AgreementReport, OracleRow};
pub use xi::{ring_sentence_to_category, xi};

#[cfg(test)]
mod tests;
