//! Rearrangement calculus, rearrangement-invariant norms and pointwise
//! `s`-gradients on metric measure spaces, with numerical harnesses for the
//! oscillation inequality, its converse and the resulting embeddings.
//!
//! Everything numerical is generic over [`Real`]; the rearrangement core
//! only needs [`Scalar`] and also runs on exact rationals.

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod hajlasz;
mod quad;
pub mod rearrange;
pub mod rinorm;
pub mod scalar;
pub mod space;
pub mod verify;

pub use scalar::{Real, Scalar};

/// Double-precision instantiations of the generic types.
pub type Sample = rearrange::WeightedSample<f64>;
pub type Step = rearrange::StepFunction<f64>;
pub type Space = space::DiscreteSpace<f64>;
pub type Spec = rinorm::RiSpaceSpec<f64>;
pub type Pair = hajlasz::GradientPair<f64>;
pub type Problem = hajlasz::GradientProblem<f64>;
