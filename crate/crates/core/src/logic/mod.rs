//! Many-sorted first-order logic over finite models.

pub mod deduction;
pub mod equiv;
pub mod eval;
pub mod iso;
pub mod model;
pub mod parse;
pub mod random;
pub mod signature;
pub mod subst;
pub mod syntax;

pub use deduction::{check_deduction, Deduction, Justification, Rejection, Step};
pub use equiv::{sampled_equivalence, EquivalenceReport, SentenceVerdict};
pub use eval::{evaluate, evaluate_naive, evaluate_term, Assignment, Evaluator, Prepared};
pub use iso::{models_isomorphic, ModelIsomorphism};
pub use model::{Candidates, FiniteModel, ModelBuilder, Relation, RelationOracle, TableRelation};
pub use parse::parse_formula;
pub use signature::{FunctionDecl, Signature, SignatureBuilder, SignatureDoc, Symbol};
pub use subst::{substitute, substitute_term};
pub use syntax::{Formula, Term, Var};
