//! Pointwise `s`-gradients on finite metric measure spaces.
//!
//! `g >= 0` is an `s`-gradient of `f` when
//! `|f(x) - f(y)| <= d(x, y)^s (g(x) + g(y))` for every pair of atoms.

mod lp;
mod minimal;
mod pairs;
mod qp;
mod test_function;

pub use minimal::{minimal_gradient, Certificate, GradientProblem, MinimalGradient, Objective, SolverOptions};
pub use pairs::DistancePowers;
pub use test_function::TestFunction;

use serde::Serialize;
use thiserror::Error;

use crate::rearrange::WeightedSample;
use crate::scalar::Real;
use crate::space::{DiscreteSpace, SpaceError};

#[derive(Debug, Error, PartialEq)]
pub enum HajlaszError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("function has {got} values, space has {expected} points")]
    LengthMismatch { expected: usize, got: usize },
    #[error("gradient entry {index} is negative or not finite")]
    NegativeGradient { index: usize },
    #[error("smoothness exponent must be positive and finite")]
    InvalidExponent,
    #[error("tolerance must be nonnegative")]
    InvalidTolerance,
    #[error("weight {index} is not a positive finite number")]
    InvalidWeight { index: usize },
    #[error("constraint values must be finite and nonnegative")]
    InvalidConstraint,
    #[error("points {i} and {j} coincide but f differs")]
    CoincidentPoints { i: usize, j: usize },
    #[error("not an s-gradient: pair ({i}, {j}) violated by {max_violation}")]
    NotAGradient { i: usize, j: usize, max_violation: f64 },
    #[error("objective {0} is not supported; use lp:1, lp:2 or linf")]
    UnsupportedObjective(String),
    #[error("solver stopped after {iterations} iterations with residual {residual}")]
    NotConverged { iterations: usize, residual: f64, best: Vec<f64> },
}

/// Outcome of checking the pair inequality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradientCheck<T> {
    pub ok: bool,
    /// `max_{i<j} |f_i - f_j| - d_ij^s (g_i + g_j)`; `-inf` for one point.
    pub max_violation: T,
    /// Pair attaining `max_violation`.
    pub witness: Option<(usize, usize)>,
}

/// `(f, g, s)` with `g` known to be an `s`-gradient of `f`.
///
/// Only produced by [`verify_gradient`], [`canonical_gradient`] and the
/// minimal-gradient solver, so consumers can skip the quadratic re-check.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientPair<T> {
    f: WeightedSample<T>,
    g: WeightedSample<T>,
    s: T,
    max_violation: T,
}

impl<T: Real> GradientPair<T> {
    pub fn f(&self) -> &WeightedSample<T> {
        &self.f
    }

    pub fn g(&self) -> &WeightedSample<T> {
        &self.g
    }

    pub fn s(&self) -> T {
        self.s
    }

    /// Largest pair violation seen when the pair was certified (`<= tol`).
    pub fn max_violation(&self) -> T {
        self.max_violation
    }

    pub fn into_parts(self) -> (WeightedSample<T>, WeightedSample<T>) {
        (self.f, self.g)
    }
}

fn check_inputs<T: Real>(space: &DiscreteSpace<T>, values: &[T], s: T) -> Result<(), HajlaszError> {
    if values.len() != space.len() {
        return Err(HajlaszError::LengthMismatch { expected: space.len(), got: values.len() });
    }
    if !(s > T::zero()) || !s.is_finite() {
        return Err(HajlaszError::InvalidExponent);
    }
    Ok(())
}

fn check_gradient<T: Real>(g: &[T]) -> Result<(), HajlaszError> {
    match g.iter().position(|&v| !(v >= T::zero()) || !v.is_finite()) {
        Some(index) => Err(HajlaszError::NegativeGradient { index }),
        None => Ok(()),
    }
}

/// Checks `|f_i - f_j| <= d_ij^s (g_i + g_j) + tol` over all pairs.
///
/// Acceptance is decided in the divided form `c_ij <= g_i + g_j + tol / d^s`
/// with `c_ij = |f_i - f_j| / d^s`, the same quotient the canonical gradient
/// is built from, so that gradient passes at `tol = 0` in floating point.
pub fn is_s_gradient<T: Real>(
    space: &DiscreteSpace<T>,
    f: &WeightedSample<T>,
    g: &WeightedSample<T>,
    s: T,
    tol: T,
) -> Result<GradientCheck<T>, HajlaszError> {
    check_inputs(space, f.values(), s)?;
    check_inputs(space, g.values(), s)?;
    check_gradient(g.values())?;
    if !(tol >= T::zero()) {
        return Err(HajlaszError::InvalidTolerance);
    }
    Ok(pairs::check_pairs(&DistancePowers::new(space, s), f.values(), g.values(), tol))
}

/// As [`is_s_gradient`] with precomputed distance powers.
pub fn is_s_gradient_with<T: Real>(
    dp: &DistancePowers<T>,
    f: &[T],
    g: &[T],
    tol: T,
) -> Result<GradientCheck<T>, HajlaszError> {
    if f.len() != dp.len() || g.len() != dp.len() {
        return Err(HajlaszError::LengthMismatch { expected: dp.len(), got: f.len().min(g.len()) });
    }
    check_gradient(g)?;
    if !(tol >= T::zero()) {
        return Err(HajlaszError::InvalidTolerance);
    }
    Ok(pairs::check_pairs(dp, f, g, tol))
}

/// Certifies `g` as an `s`-gradient of `f` within `tol`.
pub fn verify_gradient<T: Real>(
    space: &DiscreteSpace<T>,
    f: WeightedSample<T>,
    g: WeightedSample<T>,
    s: T,
    tol: T,
) -> Result<GradientPair<T>, HajlaszError> {
    let check = is_s_gradient(space, &f, &g, s, tol)?;
    if !check.ok {
        let (i, j) = check.witness.unwrap_or((0, 0));
        return Err(HajlaszError::NotAGradient { i, j, max_violation: check.max_violation.to_f64_lossy() });
    }
    Ok(GradientPair { f, g, s, max_violation: check.max_violation })
}

/// `g_i = (1/2) max_{j != i} |f_i - f_j| / d_ij^s`, always an `s`-gradient.
pub fn canonical_gradient<T: Real>(
    space: &DiscreteSpace<T>,
    f: &WeightedSample<T>,
    s: T,
) -> Result<GradientPair<T>, HajlaszError> {
    check_inputs(space, f.values(), s)?;
    canonical_gradient_with(&DistancePowers::new(space, s), f)
}

/// As [`canonical_gradient`] with precomputed distance powers.
pub fn canonical_gradient_with<T: Real>(
    dp: &DistancePowers<T>,
    f: &WeightedSample<T>,
) -> Result<GradientPair<T>, HajlaszError> {
    if f.len() != dp.len() {
        return Err(HajlaszError::LengthMismatch { expected: dp.len(), got: f.len() });
    }
    let g = pairs::canonical(dp, f.values());
    let check = pairs::check_pairs(dp, f.values(), &g, T::zero());
    debug_assert!(check.ok);
    Ok(GradientPair {
        g: WeightedSample::new(g, f.weights().to_vec()).expect("weights already validated"),
        f: f.clone(),
        s: dp.s(),
        max_violation: check.max_violation,
    })
}
