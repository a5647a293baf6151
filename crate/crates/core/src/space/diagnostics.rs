use rayon::prelude::*;
use serde::Serialize;

use crate::scalar::Real;
use crate::space::{MetricMeasureSpace, SpaceError};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthProbe<T, P> {
    pub center: P,
    pub radius: T,
    pub mass: T,
    pub ratio: T,
}

/// Empirical lower-growth constant: `worst_ratio = min mu(B(x, r)) / r^alpha`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthCertificate<T, P> {
    pub alpha: T,
    /// Lower-bound constant; equals `worst_ratio` unless lowered by the caller.
    pub b: T,
    pub worst_ratio: T,
    pub probe_log: Vec<GrowthProbe<T, P>>,
}

impl<T: Real, P> GrowthCertificate<T, P> {
    /// Probe attaining the minimum ratio.
    pub fn worst_probe(&self) -> Option<&GrowthProbe<T, P>> {
        self.probe_log.iter().find(|p| p.ratio == self.worst_ratio)
    }
}

/// Measures `mu(B(x, r)) / r^alpha` over every centre and radius.
pub fn lower_bound_probe<T, S>(
    space: &S,
    alpha: T,
    centers: &[S::Point],
    radii: &[T],
) -> Result<GrowthCertificate<T, S::Point>, SpaceError>
where
    T: Real,
    S: MetricMeasureSpace<T>,
{
    if !(alpha > T::zero()) {
        return Err(SpaceError::Parameter("alpha must be positive"));
    }
    if centers.is_empty() || radii.is_empty() {
        return Err(SpaceError::EmptyProbeSet);
    }
    let rows: Vec<Vec<GrowthProbe<T, S::Point>>> = centers
        .par_iter()
        .map(|x| {
            let radial = space.radial(x)?;
            radii
                .iter()
                .map(|&r| {
                    if !(r > T::zero()) {
                        return Err(SpaceError::NonPositiveRadius);
                    }
                    let mass = radial(r);
                    Ok(GrowthProbe { center: x.clone(), radius: r, mass, ratio: mass / r.powf(alpha) })
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let probe_log: Vec<_> = rows.into_iter().flatten().collect();
    let worst_ratio = probe_log.iter().map(|p| p.ratio).fold(T::infinity(), T::min);
    Ok(GrowthCertificate { alpha, b: worst_ratio, worst_ratio, probe_log })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ContinuityOutcome<T> {
    /// `t <= mu(B(x, radius)) <= c t`.
    Success { radius: T, mass: T },
    /// The map `r -> mu(B(x, r))` jumps across `[t, c t]` at `radius`.
    Failure { radius: T, mass_below: T, mass_above: T },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuityProbe<T, P> {
    pub center: P,
    pub t: T,
    pub outcome: ContinuityOutcome<T>,
    /// Smallest `c` that this probe admits: `mu(B(x, r_t)) / t` with `r_t`
    /// the first radius reaching mass `t`.
    pub required_c: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuityReport<T, P> {
    pub c: T,
    pub probes: Vec<ContinuityProbe<T, P>>,
    pub max_required_c: T,
}

impl<T: Real, P> ContinuityReport<T, P> {
    pub fn all_succeeded(&self) -> bool {
        self.probes.iter().all(|p| matches!(p.outcome, ContinuityOutcome::Success { .. }))
    }

    pub fn failures(&self) -> impl Iterator<Item = &ContinuityProbe<T, P>> {
        self.probes.iter().filter(|p| matches!(p.outcome, ContinuityOutcome::Failure { .. }))
    }
}

const MAX_DOUBLINGS: usize = 2100;
const MAX_BISECTIONS: usize = 200;

/// Brackets the first radius where `radial` reaches `t`: returns `(lo, hi)`
/// with `radial(lo) < t <= radial(hi)` and `hi - lo <= 1e-9 hi`, or `lo = 0`
/// when mass `t` is already present in every ball around the centre.
fn bracket<T: Real>(radial: &dyn Fn(T) -> T, t: T) -> Result<(T, T), SpaceError> {
    let two = T::lit(2.0);
    let mut hi = T::one();
    let mut lo = T::zero();
    if radial(hi) < t {
        let mut steps = 0;
        while radial(hi) < t {
            lo = hi;
            hi = hi * two;
            steps += 1;
            if steps > MAX_DOUBLINGS || hi.is_infinite() {
                return Err(SpaceError::Parameter("mass level is never reached"));
            }
        }
    } else {
        let mut steps = 0;
        loop {
            let half = hi / two;
            if half == T::zero() || steps > MAX_DOUBLINGS {
                break;
            }
            if radial(half) < t {
                lo = half;
                break;
            }
            hi = half;
            steps += 1;
        }
    }
    if lo == T::zero() {
        return Ok((lo, hi));
    }
    let width = T::lit(1e-9);
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= width * hi {
            break;
        }
        let mid = lo + (hi - lo) / two;
        if radial(mid) < t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// For each `(x, t)` looks for `r` with `t <= mu(B(x, r)) <= c t`.
///
/// The smallest admissible radius is bracketed by bisection; since the ball
/// mass is nondecreasing, either the upper end satisfies the bound or the
/// bracket straddles a jump over `[t, c t]` and no radius works.
pub fn almost_continuity_check<T, S>(
    space: &S,
    c: T,
    t_grid: &[T],
    centers: &[S::Point],
) -> Result<ContinuityReport<T, S::Point>, SpaceError>
where
    T: Real,
    S: MetricMeasureSpace<T>,
{
    if !(c > T::one()) {
        return Err(SpaceError::Parameter("c must exceed 1"));
    }
    if t_grid.is_empty() || centers.is_empty() {
        return Err(SpaceError::EmptyProbeSet);
    }
    for &t in t_grid {
        if !(t > T::zero()) {
            return Err(SpaceError::Parameter("mass levels must be positive"));
        }
        if let Some(total) = space.total_mass() {
            if t > total {
                return Err(SpaceError::MassExceedsTotal { t: t.to_f64_lossy(), total: total.to_f64_lossy() });
            }
        }
    }
    let rows: Vec<Vec<ContinuityProbe<T, S::Point>>> = centers
        .par_iter()
        .map(|x| {
            let radial = space.radial(x)?;
            t_grid
                .iter()
                .map(|&t| {
                    let (lo, hi) = bracket(&*radial, t)?;
                    let mass_above = radial(hi);
                    let required_c = mass_above / t;
                    let outcome = if mass_above <= c * t {
                        ContinuityOutcome::Success { radius: hi, mass: mass_above }
                    } else {
                        let mass_below = if lo == T::zero() { T::zero() } else { radial(lo) };
                        ContinuityOutcome::Failure { radius: hi, mass_below, mass_above }
                    };
                    Ok(ContinuityProbe { center: x.clone(), t, outcome, required_c })
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let probes: Vec<_> = rows.into_iter().flatten().collect();
    let max_required_c = probes.iter().map(|p| p.required_c).fold(T::zero(), T::max);
    Ok(ContinuityReport { c, probes, max_required_c })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DoublingProbe<T, P> {
    pub center: P,
    pub radius: T,
    pub mass: T,
    pub doubled_mass: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DoublingReport<T, P> {
    /// `max mu(B(x, 2r)) / mu(B(x, r))` over probes with positive mass.
    pub constant: T,
    pub probes: Vec<DoublingProbe<T, P>>,
    /// Probes whose ball `B(x, r)` has zero mass.
    pub skipped: Vec<DoublingProbe<T, P>>,
}

pub fn doubling_check<T, S>(
    space: &S,
    centers: &[S::Point],
    radii: &[T],
) -> Result<DoublingReport<T, S::Point>, SpaceError>
where
    T: Real,
    S: MetricMeasureSpace<T>,
{
    if centers.is_empty() || radii.is_empty() {
        return Err(SpaceError::EmptyProbeSet);
    }
    let rows: Vec<Vec<DoublingProbe<T, S::Point>>> = centers
        .par_iter()
        .map(|x| {
            let radial = space.radial(x)?;
            radii
                .iter()
                .map(|&r| {
                    if !(r > T::zero()) {
                        return Err(SpaceError::NonPositiveRadius);
                    }
                    Ok(DoublingProbe {
                        center: x.clone(),
                        radius: r,
                        mass: radial(r),
                        doubled_mass: radial(r + r),
                    })
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let (probes, skipped): (Vec<_>, Vec<_>) =
        rows.into_iter().flatten().partition(|p| p.mass > T::zero());
    let constant = probes.iter().map(|p| p.doubled_mass / p.mass).fold(T::zero(), T::max);
    Ok(DoublingReport { constant, probes, skipped })
}
