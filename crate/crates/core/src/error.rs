use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    /// A nonzero term of degree `found` survived where `I^required` was expected.
    #[error("element is not in I^{required}: a term of degree {found} survives")]
    FiltrationViolation { required: usize, found: usize },

    #[error("chain is not a cycle")]
    NotACycle,

    #[error("line {label} is not transverse to the lattice cell at {cell}")]
    NonTransverse { label: String, cell: String },

    #[error("word is not in the commutator subgroup")]
    NotInCommutatorSubgroup,

    #[error("word has lower-central-series depth {depth}, expected at least {required}")]
    NotInLowerCentral { required: usize, depth: usize },

    #[error("degenerate commutator: first two letters coincide")]
    DegenerateCommutator,

    #[error("torsion in degree {degree} quotient for {label}: invariant factor {factor}")]
    Torsion {
        degree: usize,
        label: String,
        factor: String,
    },

    #[error("unsupported direction for {label}: {reason}")]
    UnsupportedDirection { label: String, reason: String },

    #[error("invalid link: {0}")]
    InvalidLink(String),

    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("structure mismatch: {0}")]
    StructureMismatch(String),

    #[error("coefficient does not fit the lattice chain representation")]
    Overflow,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }
}
