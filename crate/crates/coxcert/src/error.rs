use thiserror::Error;

/// A twisted Coxeter candidate together with the partial-product lengths it
/// realized before failing the additivity check. Carried by
/// [`Error::GoodPairSearchFailed`] so a failed exhaustive search is auditable.
#[derive(Debug, Clone)]
pub struct ScanRow {
    /// 1-based simple reflection indices.
    pub c_word: Vec<usize>,
    /// Observed lengths of the partial twisted products.
    pub partial_lengths: Vec<usize>,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Cartan type {series}{rank}")]
    InvalidCartanType { series: char, rank: usize },

    #[error("cannot parse Cartan type string {0:?}")]
    ParseType(String),

    #[error("type {type_str} admits no diagram automorphism of order {twist}")]
    UnsupportedTwist { type_str: String, twist: usize },

    #[error("node permutation does not preserve the Cartan matrix")]
    NotDiagramAutomorphism,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("elements belong to different root data")]
    MismatchedRootData,

    #[error("cached word has {word_len} letters but the element has length {length}; word is not reduced")]
    WordNotReduced { word_len: usize, length: usize },

    /// Exhaustive search found no length-additive twisted Coxeter element.
    /// This would contradict the established existence result; treated as an
    /// alarm, never expected to fire.
    #[error("no twisted Coxeter element passed the length-additivity certificate ({} candidates scanned)", scan.len())]
    GoodPairSearchFailed { scan: Vec<ScanRow> },

    #[error("matrix is singular")]
    SingularMatrix,

    /// The geometric-series formula for (F-1)^-1 disagreed with direct
    /// inversion. Another never-expected alarm.
    #[error("summation formula and direct inversion of F-1 disagree")]
    InverseFormulaMismatch,

    #[error("operation requires an even Coxeter number, got h = {h}")]
    OddCoxeterNumber { h: usize },

    #[error("cocharacter must be nonzero")]
    ZeroCocharacter,

    #[error("operation requires a concrete q (the Frobenius was built symbolic)")]
    QRequired,

    #[error("q = {q} is too small; q >= 2 required")]
    QTooSmall { q: u64 },

    #[error("oracle groups are only enumerated over fields of size 2 or 3, got {field}")]
    UnsupportedOracleField { field: u64 },

    #[error("oracle groups are only built for types A1, A2, B2, got {type_str}")]
    UnsupportedOracleType { type_str: String },

    #[error("Weyl group of order {order} exceeds the enumeration limit {limit}")]
    GroupTooLarge { order: u128, limit: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;
