//! Rearrangement-invariant norms over decreasing rearrangements.
//!
//! Every norm here is a functional of `f*` alone, evaluated exactly on
//! [`StepFunction`]s through the closed-form moments of
//! [`Piecewise`](crate::rearrange::Piecewise).

mod hardy;
mod norm;

pub use hardy::{
    boyd_index_estimate, dilation_norm, hardy_p, hardy_p_step, hardy_q, hardy_q_step, maximal_constant,
    probe_family,
};
pub use norm::DoubleStarNorm;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Error, PartialEq)]
pub enum RinormError {
    #[error("cannot parse space spec {0:?}; expected lp:P, lp:inf, lorentz:P:Q, weak-linf or l1+linf")]
    Parse(String),
    #[error("invalid parameter: {0}")]
    Parameter(&'static str),
    #[error("{0} has no implemented associate space")]
    NoAssociate(String),
    #[error("shift {sigma} must lie in (0, 1)")]
    ShiftOutOfRange { sigma: f64 },
    #[error("{0} is not a Lorentz or Lebesgue space")]
    NotLorentz(String),
}

/// Parametric rearrangement-invariant space.
///
/// `Lp` takes `p` in `[1, inf]`; `Lorentz` takes `p > 0` and `q` in
/// `(0, inf]`. Infinite exponents are represented by `T::infinity()`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RiSpaceSpec<T> {
    Lp(T),
    Lorentz { p: T, q: T },
    /// `sup_t (f**(t) - f*(t))`.
    WeakLinf,
    /// `int_0^1 f*`, the K-functional of `L^1 + L^inf` at 1.
    L1PlusLinf,
}

/// Lower and upper Boyd indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoydIndices<T> {
    pub lower: T,
    pub upper: T,
}

impl<T: Real> RiSpaceSpec<T> {
    pub fn lp(p: T) -> Result<Self, RinormError> {
        let s = RiSpaceSpec::Lp(p);
        s.validate()?;
        Ok(s)
    }

    pub fn lorentz(p: T, q: T) -> Result<Self, RinormError> {
        let s = RiSpaceSpec::Lorentz { p, q };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), RinormError> {
        match *self {
            RiSpaceSpec::Lp(p) if !(p >= T::one()) => Err(RinormError::Parameter("Lp needs p >= 1")),
            RiSpaceSpec::Lorentz { p, q } if !(p > T::zero() && p.is_finite() && q > T::zero()) => {
                Err(RinormError::Parameter("Lorentz needs finite p > 0 and q > 0"))
            }
            _ => Ok(()),
        }
    }

    /// Exact for the implemented family.
    pub fn boyd_indices(&self) -> BoydIndices<T> {
        match *self {
            RiSpaceSpec::Lp(p) | RiSpaceSpec::Lorentz { p, .. } => {
                let i = p.recip();
                BoydIndices { lower: i, upper: i }
            }
            // the functional is invariant under dilations
            RiSpaceSpec::WeakLinf => BoydIndices { lower: T::zero(), upper: T::zero() },
            // h(s) = max(1, s)
            RiSpaceSpec::L1PlusLinf => BoydIndices { lower: T::zero(), upper: T::one() },
        }
    }

    /// `phi_X(s) = ||chi_[0, s)||_X`.
    pub fn fundamental_function(&self, s: T) -> Result<T, RinormError> {
        if !(s > T::zero()) {
            return Err(RinormError::Parameter("fundamental function needs s > 0"));
        }
        Ok(match *self {
            RiSpaceSpec::Lp(p) => s.powf(p.recip()),
            RiSpaceSpec::Lorentz { p, q } => {
                if q.is_infinite() {
                    s.powf(p.recip())
                } else {
                    s.powf(p.recip()) * (p / q).powf(q.recip())
                }
            }
            RiSpaceSpec::WeakLinf => T::one(),
            RiSpaceSpec::L1PlusLinf => s.min(T::one()),
        })
    }

    /// Fundamental function of the associate space.
    ///
    /// For `Lp` and `L^1 + L^inf` the associate is known in closed form
    /// (`Lp'` and `L^1 cap L^inf`); for Lorentz spaces it is taken from the
    /// duality `phi_X phi_X' = s`.
    pub fn associate_fundamental_function(&self, s: T) -> Result<T, RinormError> {
        if !(s > T::zero()) {
            return Err(RinormError::Parameter("fundamental function needs s > 0"));
        }
        match *self {
            RiSpaceSpec::Lp(p) => Ok(s.powf(T::one() - p.recip())),
            RiSpaceSpec::L1PlusLinf => Ok(s.max(T::one())),
            RiSpaceSpec::Lorentz { .. } => Ok(s / self.fundamental_function(s)?),
            RiSpaceSpec::WeakLinf => Err(RinormError::NoAssociate(self.to_string())),
        }
    }

    /// `(phi_X(s), phi_X'(s), phi_X(s) phi_X'(s))`.
    pub fn dual_check(&self, s: T) -> Result<(T, T, T), RinormError> {
        let phi = self.fundamental_function(s)?;
        let dual = self.associate_fundamental_function(s)?;
        Ok((phi, dual, phi * dual))
    }

    /// `(p, q)` for Lorentz-type specs, with `Lp = L^{p,p}`.
    pub fn lorentz_exponents(&self) -> Result<(T, T), RinormError> {
        match *self {
            RiSpaceSpec::Lp(p) if p.is_finite() => Ok((p, p)),
            RiSpaceSpec::Lorentz { p, q } => Ok((p, q)),
            _ => Err(RinormError::NotLorentz(self.to_string())),
        }
    }
}

impl<T: Real> fmt::Display for RiSpaceSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = |x: T| if x.is_infinite() { "inf".to_string() } else { format!("{x}") };
        match *self {
            RiSpaceSpec::Lp(p) => write!(f, "lp:{}", num(p)),
            RiSpaceSpec::Lorentz { p, q } => write!(f, "lorentz:{}:{}", num(p), num(q)),
            RiSpaceSpec::WeakLinf => write!(f, "weak-linf"),
            RiSpaceSpec::L1PlusLinf => write!(f, "l1+linf"),
        }
    }
}

fn parse_exponent<T: Real>(s: &str, whole: &str) -> Result<T, RinormError> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("inf") {
        return Ok(T::infinity());
    }
    let value = if let Some((n, d)) = s.split_once('/') {
        let n: f64 = n.trim().parse().map_err(|_| RinormError::Parse(whole.into()))?;
        let d: f64 = d.trim().parse().map_err(|_| RinormError::Parse(whole.into()))?;
        n / d
    } else {
        s.parse::<f64>().map_err(|_| RinormError::Parse(whole.into()))?
    };
    if !value.is_finite() {
        return Err(RinormError::Parse(whole.into()));
    }
    Ok(T::lit(value))
}

/// Accepts `lp:2`, `lp:4/3`, `lp:inf`, `linf`, `lorentz:4:2`, `weak-linf`
/// and `l1+linf` (case-insensitive).
impl<T: Real> FromStr for RiSpaceSpec<T> {
    type Err = RinormError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        let parts: Vec<&str> = lower.split(':').collect();
        let spec = match parts.as_slice() {
            ["linf"] => RiSpaceSpec::Lp(T::infinity()),
            ["weak-linf"] => RiSpaceSpec::WeakLinf,
            ["l1+linf"] => RiSpaceSpec::L1PlusLinf,
            ["lp", p] => RiSpaceSpec::Lp(parse_exponent(p, s)?),
            ["lorentz", p, q] => RiSpaceSpec::Lorentz { p: parse_exponent(p, s)?, q: parse_exponent(q, s)? },
            _ => return Err(RinormError::Parse(s.to_string())),
        };
        spec.validate()?;
        Ok(spec)
    }
}
