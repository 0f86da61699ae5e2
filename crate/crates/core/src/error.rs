use thiserror::Error;

use crate::series::TransformKind;

/// Errors raised by the exact and numeric pipelines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("reciprocal of a series with zero constant term")]
    ReciprocalOfZeroConstantTerm,
    #[error("composition requires the inner series to have zero constant term")]
    ComposeWithNonzeroConstantTerm,
    #[error("series is not invertible under composition (needs c0 = 0 and c1 != 0)")]
    NotInvertibleAsComposition,
    #[error("square root requires constant term 1")]
    SqrtConstantTermNotOne,
    #[error("quadratic series equation is degenerate at order zero")]
    DegenerateQuadratic,

    #[error("expected a {expected:?} series, got {found:?}")]
    TransformMismatch {
        expected: TransformKind,
        found: TransformKind,
    },
    #[error("moment sequence is not a probability sequence (m0 = {0})")]
    NotAProbabilitySequence(String),
    #[error("S-transform undefined: first moment is zero")]
    STransformUndefined,
    #[error("moment order {requested} exceeds available order {available}")]
    OrderTooLarge { requested: usize, available: usize },

    #[error("unknown catalog measure `{0}`")]
    UnknownCatalogName(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("non-crossing oracle limited to n <= {max}, got {n}")]
    OrderTooLargeForOracle { n: usize, max: usize },

    #[error("graph schema error: {0}")]
    SchemaError(String),
    #[error("pair ({0}, {1}) appears in two color classes")]
    OverlappingColorClasses(usize, usize),
    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),
    #[error("duplicate color value {0}")]
    DuplicateColorValue(String),
    #[error("expected {expected} color values, got {found}")]
    ColorValueCount { expected: usize, found: usize },
    #[error("automorphism search limited to {max} vertices, got {n}")]
    TooManyVertices { n: usize, max: usize },
    #[error("graph is not connected")]
    NotConnected,
    #[error("unsupported graph: {0}")]
    UnsupportedGraph(String),

    #[error("Cauchy transform evaluated on its support at {0}")]
    EvaluationOnSupport(f64),
    #[error("adaptive quadrature did not converge")]
    QuadratureNonConvergence,

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
}

pub type Result<T> = std::result::Result<T, Error>;
