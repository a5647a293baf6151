//! Metric measure spaces and measure-growth diagnostics.
//!
//! Balls are open throughout: `B(x, r) = {y : d(x, y) < r}`.

mod analytic;
mod diagnostics;
mod discrete;
pub mod generate;

pub use analytic::{unit_ball_volume, AnalyticSpace, RadialPolynomial};
pub use diagnostics::{
    almost_continuity_check, doubling_check, lower_bound_probe, ContinuityOutcome, ContinuityProbe,
    ContinuityReport, DoublingProbe, DoublingReport, GrowthCertificate, GrowthProbe,
};
pub use discrete::{DiscreteSpace, Metric, RadialProfile, FULL_TRIANGLE_CHECK_LIMIT};

use std::fmt::Debug;

use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Error, PartialEq)]
pub enum SpaceError {
    #[error("space has no points")]
    Empty,
    #[error("invalid space: {0}")]
    Invalid(String),
    #[error("unknown point {0}")]
    UnknownPoint(usize),
    #[error("radius must be positive")]
    NonPositiveRadius,
    #[error("triangle inequality fails for d({i},{j}) via {k}")]
    TriangleInequality { i: usize, j: usize, k: usize },
    #[error("expected a {expected}-dimensional point, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("probe set is empty")]
    EmptyProbeSet,
    #[error("mass {t} exceeds the total mass {total}")]
    MassExceedsTotal { t: f64, total: f64 },
    #[error("parameter out of range: {0}")]
    Parameter(&'static str),
}

/// Mass of `B(x, r)` as a function of `r` for a fixed centre.
pub type RadialMeasure<'a, T> = Box<dyn Fn(T) -> T + Send + Sync + 'a>;

/// Anything with a ball-measure oracle.
pub trait MetricMeasureSpace<T: Real>: Sync {
    type Point: Clone + Debug + Send + Sync;

    fn ball_measure(&self, x: &Self::Point, r: T) -> Result<T, SpaceError>;

    /// `None` when the space has infinite mass.
    fn total_mass(&self) -> Option<T>;

    /// `r -> mu(B(x, r))`, prepared for many evaluations at one centre.
    fn radial<'a>(&'a self, x: &Self::Point) -> Result<RadialMeasure<'a, T>, SpaceError>;

    fn describe_point(&self, x: &Self::Point) -> String;
}
