use alloc::string::String;
use core::fmt;

/// Errors surfaced by the core pipeline.
///
/// Every variant corresponds to a violated precondition of some operation;
/// none of them should occur on inputs produced by the pipeline itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A matrix expected to satisfy Aᵀ = −A does not.
    NotSkewSymmetric,
    /// The eliminated block of a Schur complement is singular.
    SingularBlock,
    /// Matrix dimensions do not match the operation.
    DimensionMismatch(String),
    /// A matrix expected to have full row rank is rank deficient.
    RankDeficient,
    /// A cyclic column window of a twist is linearly dependent.
    DegenerateWindow(usize),
    /// The rotation system does not close up into a disk embedding.
    InconsistentEmbedding(String),
    /// Operation requires a well-connected graph.
    NotWellConnected(String),
    /// The site passed to a local move does not match its pattern.
    InvalidSite(String),
    /// Built-in graphs exist only for 1 ≤ n ≤ 5.
    UnsupportedN(usize),
    /// A bipartite graph expected to be reduced is not.
    NotReduced(String),
    /// The graph admits no dimer cover at all.
    NoDimerCover,
    /// A quantity that must be strictly positive is not.
    NonPositive(String),
    /// Plücker data is not consistent with an orthogonal point.
    NotOrthogonal(String),
    /// A Pfaffian identity failed for the recorded index set.
    PfaffianMismatch(String),
    /// The reconstructed span does not have the expected rank.
    RankUnexpected { expected: usize, got: usize },
    /// A point expected to be Ω-isotropic is not.
    NotIsotropic,
    /// Interior block of the Laplacian is singular.
    SingularInterior,
    /// Weight/conductance keys do not match the edge set.
    BadWeights(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotSkewSymmetric => write!(f, "matrix is not skew-symmetric"),
            Error::SingularBlock => write!(f, "eliminated block is singular"),
            Error::DimensionMismatch(s) => write!(f, "dimension mismatch: {s}"),
            Error::RankDeficient => write!(f, "matrix does not have full row rank"),
            Error::DegenerateWindow(i) => {
                write!(f, "cyclic column window at column {i} is singular")
            }
            Error::InconsistentEmbedding(s) => write!(f, "inconsistent disk embedding: {s}"),
            Error::NotWellConnected(s) => write!(f, "graph is not well connected: {s}"),
            Error::InvalidSite(s) => write!(f, "invalid move site: {s}"),
            Error::UnsupportedN(n) => write!(f, "no built-in graph for n = {n}"),
            Error::NotReduced(s) => write!(f, "bipartite graph is not reduced: {s}"),
            Error::NoDimerCover => write!(f, "graph admits no dimer cover"),
            Error::NonPositive(s) => write!(f, "value must be positive: {s}"),
            Error::NotOrthogonal(s) => write!(f, "not an orthogonal point: {s}"),
            Error::PfaffianMismatch(s) => write!(f, "Pfaffian identity failed at J = {s}"),
            Error::RankUnexpected { expected, got } => {
                write!(f, "span has rank {got}, expected {expected}")
            }
            Error::NotIsotropic => write!(f, "point is not Ω-isotropic"),
            Error::SingularInterior => write!(f, "interior Laplacian block is singular"),
            Error::BadWeights(s) => write!(f, "bad weight map: {s}"),
        }
    }
}
