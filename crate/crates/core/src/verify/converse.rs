use rayon::prelude::*;
use serde::Serialize;

use crate::hajlasz::{HajlaszError, TestFunction};
use crate::scalar::{pow, Real};
use crate::space::{AnalyticSpace, DiscreteSpace, MetricMeasureSpace};
use crate::verify::{log_log_slope, ConstantSpread, VerifyError};

/// Spaces on which the cone test function can be integrated.
pub trait ConverseSpace<T: Real>: MetricMeasureSpace<T> {
    /// `||f_{r, x0}||_{L^1}`.
    fn test_function_l1(&self, tf: &TestFunction<T>, center: &Self::Point) -> Result<T, HajlaszError>;

    /// Radii below this do not resolve the space; `0` for continua.
    fn radius_floor(&self) -> T {
        T::zero()
    }
}

impl<T: Real> ConverseSpace<T> for AnalyticSpace {
    fn test_function_l1(&self, tf: &TestFunction<T>, center: &Vec<T>) -> Result<T, HajlaszError> {
        tf.l1_norm_analytic(self, center)
    }
}

impl<T: Real> ConverseSpace<T> for DiscreteSpace<T> {
    fn test_function_l1(&self, tf: &TestFunction<T>, center: &usize) -> Result<T, HajlaszError> {
        tf.l1_norm_discrete(self, *center)
    }

    fn radius_floor(&self) -> T {
        self.admissible_radii().0
    }
}

/// `int_0^{2M} t^{sigma - 1} min(1, M / t) dt`
/// `= M^sigma (1/sigma + (2^{sigma - 1} - 1) / (sigma - 1))`, and
/// `M (1 + ln 2)` at `sigma = 1`.
pub fn converse_rhs_integral<T: Real>(m: T, sigma: T) -> T {
    if sigma == T::one() {
        return m * (T::one() + T::LN_2());
    }
    let tail = (T::lit(2.0).powf(sigma - T::one()) - T::one()) / (sigma - T::one());
    m.powf(sigma) * (sigma.recip() + tail)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConverseProbe<T, P> {
    pub center: P,
    pub radius: T,
    /// `M = mu(B(x0, r))`.
    pub mass: T,
    /// `f**(0) - f**(2M) = r^s - ||f||_1 / (2M)`.
    pub lhs: T,
    /// `int_0^{2M} t^{s/alpha - 1} g**(t) dt` in closed form.
    pub rhs_integral: T,
    /// `lhs / rhs_integral`: the oscillation constant this probe forces.
    pub implied_constant: T,
    /// `r^s / (2 M^{s/alpha})`.
    pub c_prime: T,
    pub l1_norm: T,
    /// `r^s M`, which bounds `l1_norm`.
    pub l1_bound: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipReason {
    ZeroMass,
    BelowResolution,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedProbe<T, P> {
    pub center: P,
    pub radius: T,
    pub reason: SkipReason,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConverseReport<T, P> {
    pub s: T,
    pub alpha: T,
    pub probes: Vec<ConverseProbe<T, P>>,
    pub skipped: Vec<SkippedProbe<T, P>>,
    /// `s / slope` of `ln lhs` against `ln M`.
    pub fitted_alpha: Option<T>,
    pub c_prime: ConstantSpread<T>,
    pub implied_constant: ConstantSpread<T>,
    /// Every probe satisfies `||f||_1 <= r^s M` up to rounding.
    pub l1_bound_holds: bool,
}

enum Outcome<T, P> {
    Probe(ConverseProbe<T, P>),
    Skip(SkippedProbe<T, P>),
}

/// Runs the cone construction at every `(x0, r)` and measures the
/// constants of the converse chain. Requires `0 < s <= 1`.
pub fn converse_probe<T, S>(
    space: &S,
    s: T,
    alpha: T,
    centers_radii: &[(S::Point, T)],
) -> Result<ConverseReport<T, S::Point>, VerifyError>
where
    T: Real,
    S: ConverseSpace<T>,
{
    if !(s > T::zero() && s <= T::one()) {
        return Err(VerifyError::Parameter("s must lie in (0, 1]"));
    }
    if !(alpha > T::zero()) || !alpha.is_finite() {
        return Err(VerifyError::Parameter("alpha must be positive"));
    }
    if centers_radii.is_empty() {
        return Err(VerifyError::NoProbes);
    }
    let sigma = s / alpha;
    let floor = space.radius_floor();
    let outcomes: Vec<Outcome<T, S::Point>> = centers_radii
        .par_iter()
        .map(|(center, r)| {
            let r = *r;
            let tf = TestFunction::new(r, s)?;
            let skip = |reason| Ok(Outcome::Skip(SkippedProbe { center: center.clone(), radius: r, reason }));
            if r < floor {
                return skip(SkipReason::BelowResolution);
            }
            let mass = space.ball_measure(center, r)?;
            if !(mass > T::zero()) {
                return skip(SkipReason::ZeroMass);
            }
            let l1_norm = space.test_function_l1(&tf, center)?;
            let rs = tf.sup();
            let lhs = rs - l1_norm / (T::lit(2.0) * mass);
            let rhs_integral = converse_rhs_integral(mass, sigma);
            Ok(Outcome::Probe(ConverseProbe {
                center: center.clone(),
                radius: r,
                mass,
                lhs,
                rhs_integral,
                implied_constant: lhs / rhs_integral,
                c_prime: rs / (T::lit(2.0) * pow(mass, sigma)),
                l1_norm,
                l1_bound: rs * mass,
            }))
        })
        .collect::<Result<_, VerifyError>>()?;

    let mut probes = Vec::new();
    let mut skipped = Vec::new();
    for o in outcomes {
        match o {
            Outcome::Probe(p) => probes.push(p),
            Outcome::Skip(s) => skipped.push(s),
        }
    }
    let c_prime = ConstantSpread::of(probes.iter().map(|p| p.c_prime)).ok_or(VerifyError::NoProbes)?;
    let implied_constant = ConstantSpread::of(probes.iter().map(|p| p.implied_constant)).ok_or(VerifyError::NoProbes)?;
    let points: Vec<(T, T)> = probes.iter().map(|p| (p.mass, p.lhs)).collect();
    let fitted_alpha = log_log_slope(&points).filter(|&k| k > T::zero()).map(|k| s / k);
    let slack = T::lit(1e-12);
    let l1_bound_holds = probes.iter().all(|p| p.l1_norm <= p.l1_bound * (T::one() + slack));
    Ok(ConverseReport { s, alpha, probes, skipped, fitted_alpha, c_prime, implied_constant, l1_bound_holds })
}
