use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("empty tangle argument set")]
    EmptyTangle,
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("schema parameter out of range: {0}")]
    SchemaRange(String),
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid model document: {0}")]
    Document(#[from] serde_json::Error),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("duplicate point `{0}`")]
    DuplicatePoint(String),
    #[error("point map is not total: `{0}` has no image")]
    PartialMap(String),
    #[error("bad atom name `{0}` (expected p<index>, index >= 1)")]
    BadAtom(String),
    #[error("temporal operator evaluated on a static model")]
    StaticModel,
    #[error("empty tangle family")]
    EmptyFamily,
    #[error("models disagree on the presence of a point map")]
    MixedDynamics,
    #[error("{0}")]
    Parameter(String),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}
