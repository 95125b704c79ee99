use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid Coxeter matrix: {0}")]
    InvalidCoxeterMatrix(String),
    #[error("Coxeter system is not finite: {0}")]
    NotFinite(String),
    #[error("unknown group type `{0}`")]
    UnknownType(String),
    #[error("letter {letter} out of range for rank {rank}")]
    LetterOutOfRange { letter: usize, rank: usize },
    #[error("`{0}` is not a reduced word of a Coxeter element")]
    NotCoxeterElement(String),
    #[error("element is not c-sortable")]
    NotSortable,
    #[error("point is not interior to the fundamental chamber")]
    NotInterior,
    #[error("group of order {order} exceeds the enumeration cap {cap}")]
    GroupTooLarge { order: u128, cap: u128 },
    #[error("word is not realizing: root configurations have {size} roots of rank {rank}, expected {expected} independent roots")]
    NotRealizing { rank: usize, size: usize, expected: usize },
    #[error("{0} is not a facet of the subword complex")]
    NotAFacet(String),
    #[error("position {0} is not in the facet")]
    PositionNotInFacet(usize),
    #[error("roots do not form the root configuration of a facet")]
    NotRootConfiguration,
    #[error("element is not representable as a subword of the word")]
    NotRepresentable,
    #[error("root configuration is linearly dependent")]
    DependentConfiguration,
    #[error("subspace is not a noncrossing subspace: {0}")]
    NotNoncrossing(String),
    #[error("weights must be positive")]
    NonPositiveWeight,
    #[error("not a cluster: {0}")]
    NotACluster(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
