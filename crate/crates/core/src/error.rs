use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cannot parse omega {input:?}: {reason}")]
    ParseOmega { input: String, reason: &'static str },
    #[error("cannot parse word {input:?}: unexpected {found:?}")]
    ParseWord { input: String, found: char },
    #[error("omega {0} is eventually constant; the tree action is not faithful there")]
    EventuallyConstant(String),
    #[error("omega {0} is eventually constant but not constant; no model is available")]
    UnsupportedOmega(String),
    #[error("sections need a word with an even number of `a` letters")]
    OddParity,
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(u32),
    #[error("generator count mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("generator index {index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },
    #[error("adjacency is not symmetric on vertices {0} and {1}")]
    NonSymmetricAdjacency(i64, i64),
    #[error("adjacency is undefined for a vertex and itself ({0})")]
    SelfAdjacency(i64),
    #[error("vertex {0} lies outside the matrix window")]
    VertexOutsideWindow(i64),
    #[error("integer overflow in reflection matrix product")]
    Overflow,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
