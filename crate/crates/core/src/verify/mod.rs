//! Numerical harnesses for the oscillation inequality, its converse and the embeddings.
//!
//! Each report stores the per-probe left and right sides it compared, so
//! `pass` can always be recomputed from the stored arrays.

mod converse;
mod embedding;
mod oscillation;

pub use converse::{converse_probe, converse_rhs_integral, ConverseProbe, ConverseReport, ConverseSpace, SkipReason, SkippedProbe};
pub use embedding::{embedding_report, log_weighted_norm, EmbeddingCase, EmbeddingReport};
pub use oscillation::{oscillation_constant, oscillation_inequality_report, InequalityReport, OscillationParams, ReportIds, TheoreticalConstant};

use serde::Serialize;
use thiserror::Error;

use crate::hajlasz::HajlaszError;
use crate::rearrange::RearrangeError;
use crate::rinorm::RinormError;
use crate::scalar::Real;
use crate::space::SpaceError;

/// Number of points in the default log-spaced mass grid.
pub const DEFAULT_GRID_POINTS: usize = 64;

#[derive(Debug, Error, PartialEq)]
pub enum VerifyError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Rearrange(#[from] RearrangeError),
    #[error(transparent)]
    Rinorm(#[from] RinormError),
    #[error(transparent)]
    Hajlasz(#[from] HajlaszError),
    #[error("parameter out of range: {0}")]
    Parameter(&'static str),
    #[error("mass level {t} outside the admissible range [{lo}, {hi}]")]
    OutOfRange { t: f64, lo: f64, hi: f64 },
    #[error("admissible range is empty: [{lo}, {hi}]")]
    EmptyRange { lo: f64, hi: f64 },
    #[error("requested {requested} but {diagnosis}")]
    CaseMismatch { requested: EmbeddingCase, diagnosis: String },
    #[error("no embedding case applies: {0}")]
    Undetermined(String),
    #[error("no probe could be evaluated")]
    NoProbes,
}

/// `[10 * smallest atom, total / 2]` for a sample with these weights.
pub fn admissible_range<T: Real>(weights: &[T]) -> Result<(T, T), VerifyError> {
    let min = weights.iter().copied().fold(T::infinity(), T::min);
    let total = weights.iter().fold(T::zero(), |a, &w| a + w);
    let (lo, hi) = (T::lit(10.0) * min, total / T::lit(2.0));
    if weights.is_empty() || !(lo <= hi) {
        return Err(VerifyError::EmptyRange { lo: lo.to_f64_lossy(), hi: hi.to_f64_lossy() });
    }
    Ok((lo, hi))
}

/// `count` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid<T: Real>(lo: T, hi: T, count: usize) -> Result<Vec<T>, VerifyError> {
    if !(lo > T::zero()) || !(hi >= lo) || !hi.is_finite() {
        return Err(VerifyError::EmptyRange { lo: lo.to_f64_lossy(), hi: hi.to_f64_lossy() });
    }
    if count == 0 {
        return Err(VerifyError::Parameter("grid needs at least one point"));
    }
    if count == 1 || hi == lo {
        return Ok(vec![lo]);
    }
    let (a, b) = (lo.ln(), hi.ln());
    let last = T::from_usize_lossy(count - 1);
    let mut grid: Vec<T> = (0..count).map(|k| (a + (b - a) * T::from_usize_lossy(k) / last).exp()).collect();
    // pin the ends so rounding in exp/ln cannot leave the range
    grid[0] = lo;
    grid[count - 1] = hi;
    Ok(grid)
}

/// The default admissible grid for a sample with these weights.
pub fn admissible_grid<T: Real>(weights: &[T], count: usize) -> Result<Vec<T>, VerifyError> {
    let (lo, hi) = admissible_range(weights)?;
    log_grid(lo, hi, count)
}

/// Spread of a family of measured constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstantSpread<T> {
    pub min: T,
    pub max: T,
    /// `max / min`; `inf` if some constant is zero or not finite.
    pub spread: T,
}

impl<T: Real> ConstantSpread<T> {
    pub fn of(values: impl IntoIterator<Item = T>) -> Option<Self> {
        let mut it = values.into_iter().peekable();
        it.peek()?;
        let (min, max) = it.fold((T::infinity(), T::neg_infinity()), |(lo, hi), v| (lo.min(v), hi.max(v)));
        let spread = if min > T::zero() && max.is_finite() { max / min } else { T::infinity() };
        Some(Self { min, max, spread })
    }

    /// All constants finite and positive with `max / min <= limit`.
    pub fn bounded_by(&self, limit: T) -> bool {
        self.spread <= limit
    }
}

/// Least-squares slope of `ln y` against `ln x` over the positive points.
pub fn log_log_slope<T: Real>(points: &[(T, T)]) -> Option<T> {
    let pts: Vec<(T, T)> = points
        .iter()
        .filter(|(x, y)| *x > T::zero() && *y > T::zero())
        .map(|&(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = T::from_usize_lossy(pts.len());
    let mx = pts.iter().fold(T::zero(), |a, p| a + p.0) / n;
    let my = pts.iter().fold(T::zero(), |a, p| a + p.1) / n;
    let sxx = pts.iter().fold(T::zero(), |a, p| a + (p.0 - mx) * (p.0 - mx));
    let sxy = pts.iter().fold(T::zero(), |a, p| a + (p.0 - mx) * (p.1 - my));
    if sxx == T::zero() {
        return None;
    }
    Some(sxy / sxx)
}

/// `lhs / rhs` with `0 / 0 = 0` and `x / 0 = inf`.
pub(crate) fn safe_ratio<T: Real>(lhs: T, rhs: T) -> T {
    if lhs == T::zero() {
        T::zero()
    } else if rhs == T::zero() {
        T::infinity()
    } else {
        lhs / rhs
    }
}
