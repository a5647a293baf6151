//! Distribution functions, decreasing rearrangements and maximal averages.
//!
//! [`WeightedSample`] holds a function on a discrete measure space,
//! [`StepFunction`] its rearrangement `f*` (exact over any [`Scalar`]), and
//! [`Piecewise`] the `a + b/t` family that `f**` and `f** - f*` live in, with
//! closed-form power integrals.
//!
//! [`Scalar`]: crate::Scalar

mod piecewise;
mod sample;
mod step;

pub use piecewise::{Piece, Piecewise};
pub use sample::WeightedSample;
pub use step::StepFunction;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RearrangeError {
    #[error("{values} values but {weights} weights")]
    LengthMismatch { values: usize, weights: usize },
    #[error("weight {index} is not positive")]
    NonPositiveWeight { index: usize },
    #[error("level must be nonnegative")]
    NegativeLevel,
    #[error("mass parameter outside the admissible range")]
    MassOutOfRange,
    #[error("malformed step function: {0}")]
    MalformedSteps(&'static str),
    #[error("oscillation routes disagree: steps {steps}, identity {identity}")]
    OscillationMismatch { steps: f64, identity: f64 },
}
