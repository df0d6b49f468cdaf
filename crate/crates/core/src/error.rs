use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported affine type: {0}")]
    UnsupportedType(String),
    #[error("node {0} out of range")]
    BadNode(usize),
    #[error("not a sink: {0}")]
    NotASink(usize),
    #[error("not a source: {0}")]
    NotASource(usize),
    #[error("not a lattice point: ({0},{1})")]
    NotLatticePoint(usize, i64),
    #[error("word not adapted")]
    WordNotAdapted,
    #[error("word not reduced")]
    WordNotReduced,
    #[error("invalid height function: {0}")]
    InvalidQDatum(String),
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
    #[error("not movable: {0}")]
    NotMovable(usize),
    #[error("ranges differ")]
    RangesDiffer,
    #[error("degenerate box")]
    DegenerateBox,
    #[error("not an i-box: [{0},{1}]")]
    NotAnIBox(i64, i64),
    #[error("frozen vertex")]
    FrozenVertex(usize),
    #[error("index {0} out of range")]
    BadIndex(usize),
    #[error("non-Laurent division")]
    NonLaurentDivision,
    #[error("infinite range")]
    InfiniteRange,
    #[error("backend supports A_n^{{(1)}} only")]
    WrongBackend,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("transport failed: {0}")]
    Transport(String),
}

pub type Result<T> = std::result::Result<T, Error>;
