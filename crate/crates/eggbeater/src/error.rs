use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("word is trivial (reduces to the identity)")]
    TrivialWord,

    #[error("word is not long (no alternating balanced form)")]
    NotLong,

    #[error("word is not a nonzero power of a single generator")]
    NotAPower,

    #[error("invalid model parameters: {0}")]
    BadParams(String),

    #[error("point outside the required domain: {0}")]
    OutOfDomain(String),

    #[error("point not in a gluing square: {0}")]
    NotInGluingSquare(String),

    #[error("homotopy class contains the extra generator; no reference loop")]
    NoReferenceLoop,

    #[error("reference loop does not close up")]
    OpenLoop,

    #[error("winding number ambiguous: endpoint on a window boundary")]
    WindingAmbiguous,

    #[error("linear system singular for sign vector {0}")]
    SingularSystem(String),

    #[error("k = {k} below minimal valid k for this word")]
    KTooSmall { k: u64 },

    #[error("no valid k found up to cap {cap}")]
    KCapExceeded { cap: u64 },

    #[error("fixed-point record set incomplete or invalid: {0}")]
    BadRecords(String),

    #[error("chart transition undefined at {0}")]
    ChartAmbiguity(String),

    #[error("matrix not symplectic")]
    NotSymplectic,

    #[error("Cayley-type transform undefined: {0}")]
    CayleyUndefined(String),

    #[error("shear strength is zero")]
    ZeroStrength,

    #[error("path end degenerate with vanishing crossing form")]
    DegenerateEnd,

    #[error("tangential crossing: isolated degeneracy with zero crossing form")]
    TangentialCrossing,

    #[error("unhandled degeneracy on a path segment: {0}")]
    UnhandledDegeneracy(String),

    #[error("quadratic form singular; signature taken on nonsingular part")]
    SingularForm,

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
