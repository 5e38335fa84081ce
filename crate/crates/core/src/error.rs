use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("arity mismatch for `{symbol}`: expected {expected}, found {found}")]
    Arity {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("sort mismatch: {0}")]
    Sort(String),
    #[error("substitution of {term} for {var} is not admissible: {captured} would be captured")]
    Inadmissible {
        var: String,
        term: String,
        captured: String,
    },
    #[error("no assignment for free variable {0}")]
    MissingAssignment(String),
    #[error("not a sentence: free variables {0}")]
    NotASentence(String),
    #[error("invalid signature: {0}")]
    Signature(String),
    #[error("invalid model: {0}")]
    Model(String),
    #[error("{cap} cap exceeded: {requested} > {limit}")]
    CapExceeded {
        cap: &'static str,
        requested: u128,
        limit: u128,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("ring axiom violated: {0}")]
    RingAxiom(String),
    #[error("module axiom violated: {0}")]
    ModuleAxiom(String),
    #[error("category axiom violated: {0}")]
    CategoryAxiom(String),
    #[error("filter axiom violated: {0}")]
    Filter(String),
    #[error("improper filter")]
    ImproperFilter,
    #[error("no pairing apparatus for object {0}: the skeleton bound is too small")]
    NoPairing(usize),
    #[error("invalid copies: {0}")]
    Copies(String),
    #[error("{0}")]
    Io(String),
}

impl Error {
    pub(crate) fn cap(cap: &'static str, requested: u128, limit: usize) -> Self {
        Error::CapExceeded {
            cap,
            requested,
            limit: limit as u128,
        }
    }
}
