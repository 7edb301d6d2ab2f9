use thiserror::Error;

use crate::logic::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("invalid vocabulary: {0}")]
    Vocabulary(String),

    #[error("unknown point `{0}`")]
    UnknownPoint(String),

    #[error("{0} points given; at most 64 are supported")]
    TooManyPoints(usize),

    #[error("invalid domain: {0}")]
    Domain(String),

    #[error("set {0} is not a member of the domain family")]
    NotInFamily(String),

    #[error("invalid layering: {0}")]
    Layering(String),

    #[error("point `{0}` lies outside the layered set")]
    Unranked(String),

    #[error("unknown condition id `{0}`")]
    UnknownCondition(String),

    #[error("condition `{0}` needs a layering")]
    MissingLayering(String),

    #[error("precondition `{condition}` fails ({witness})")]
    Precondition { condition: String, witness: String },

    #[error("copy {0} would attack itself")]
    SelfAttack(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("depth {depth} is below the bound {bound}")]
    DepthBelowBound { depth: usize, bound: usize },

    #[error("{points} points do not match the {valuations} valuations of the vocabulary")]
    ValuationMismatch { points: usize, valuations: usize },

    #[error("unknown world `{0}`")]
    UnknownWorld(String),

    #[error("accessibility relation: {0}")]
    Access(String),

    #[error("layers exhausted at world `{world}` along chain {}", chain.join(" R "))]
    LayersExhausted { world: String, chain: Vec<String> },

    #[error("no decision edges declared")]
    MissingDecisionEdges,

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("{path}: {message}")]
    Instance { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
