use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Arrays or index data do not fit together (wrong sizes, bad indices).
    #[error("structural error: {0}")]
    Structural(String),
    #[error("pairing matrix is singular")]
    SingularPairing,
    #[error("no Hodge decomposition found over the rationals: {0}")]
    HodgeInfeasible(String),
    #[error("unknown edge {0}")]
    UnknownEdge(usize),
    #[error("edge {0} is already white")]
    AlreadyWhite(usize),
    #[error("edge {0} is white")]
    WhiteEdge(usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("invalid arity {0}")]
    Arity(usize),
    #[error("unstable type (g, n) = ({0}, {1}): need 2g + n - 2 > 0")]
    Unstable(usize, usize),
    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),
    #[error("slot mismatch: {0}")]
    SlotMismatch(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
}
