//! Exact free-probability transforms and quantum-symmetry spectral measures of
//! small graphs.
//!
//! Everything except [`stieltjes`] works over exact rationals; truncated power
//! series carry their order explicitly.

pub mod error;
pub mod freeconv;
pub mod graphs;
pub mod measures;
pub mod nc;
pub mod series;
pub mod stieltjes;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
pub use freeconv::{DistributivityReport, NsvReport, PowerKind};
pub use graphs::{MeasureStatus, PrecoloredGraph, QuantumMeasure};
pub use measures::{CatalogMeasure, CatalogValue, MomentSequence, SignedAtomicMeasure};
pub use nc::NonCrossingPartition;
pub use series::{Rational, Transform, TransformKind, TruncatedSeries, DEFAULT_ORDER};
pub use stieltjes::ClosedFormG;
pub use transforms::FreeCumulantSequence;
pub use verify::VerificationReport;
