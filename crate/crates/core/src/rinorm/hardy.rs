use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rearrange::{Piecewise, StepFunction};
use crate::rinorm::{RiSpaceSpec, RinormError};
use crate::scalar::{pow, Real};

fn check_q<T: Real>(q: T, t: T) -> Result<(), RinormError> {
    if !(q > T::zero()) || q.is_infinite() {
        return Err(RinormError::Parameter("Hardy operators need finite q > 0"));
    }
    if !(t > T::zero()) {
        return Err(RinormError::Parameter("Hardy operators need t > 0"));
    }
    Ok(())
}

/// `P^(q) f(t) = (t^{-1} int_0^t |f|^q)^{1/q}`; `+inf` when divergent.
pub fn hardy_p<T: Real>(f: &Piecewise<T>, q: T, t: T) -> Result<T, RinormError> {
    check_q(q, t)?;
    let m = f.moment_between(q, T::zero(), T::zero(), t);
    Ok(pow(m / t, q.recip()))
}

/// `Q_lambda^(q) f(t) = (t^{-lambda} int_t^inf |f(x)|^q x^{lambda - 1} dx)^{1/q}`,
/// `0 <= lambda < 1`; `+inf` when the tail diverges.
pub fn hardy_q<T: Real>(f: &Piecewise<T>, lambda: T, q: T, t: T) -> Result<T, RinormError> {
    check_q(q, t)?;
    if !(lambda >= T::zero() && lambda < T::one()) {
        return Err(RinormError::Parameter("Q_lambda needs 0 <= lambda < 1"));
    }
    let m = f.moment_between(q, lambda - T::one(), t, T::infinity());
    Ok(pow(m / t.powf(lambda), q.recip()))
}

pub fn hardy_p_step<T: Real>(fs: &StepFunction<T>, q: T, t: T) -> Result<T, RinormError> {
    hardy_p(&fs.to_piecewise(), q, t)
}

pub fn hardy_q_step<T: Real>(fs: &StepFunction<T>, lambda: T, q: T, t: T) -> Result<T, RinormError> {
    hardy_q(&fs.to_piecewise(), lambda, q, t)
}

impl<T: Real> RiSpaceSpec<T> {
    /// Norm of a nonincreasing piecewise function (such as `f**`), which is
    /// its own rearrangement. Only Lorentz-type specs and `L^1 + L^inf`.
    pub fn norm_of_decreasing(&self, f: &Piecewise<T>) -> Result<T, RinormError> {
        match *self {
            RiSpaceSpec::Lp(p) if p.is_infinite() => Ok(f.value_at_zero()),
            RiSpaceSpec::Lp(p) => Ok(pow(f.moment(p, T::zero()), p.recip())),
            RiSpaceSpec::Lorentz { p, q } if q.is_finite() => Ok(pow(f.moment(q, q / p - T::one()), q.recip())),
            RiSpaceSpec::L1PlusLinf => Ok(f.moment_between(T::one(), T::zero(), T::zero(), T::one())),
            _ => Err(RinormError::NotLorentz(self.to_string())),
        }
    }
}

/// Deterministic family of nonincreasing step functions used to probe
/// operator norms: indicators at several scales plus random staircases.
pub fn probe_family<T: Real>(count: usize, seed: u64) -> Vec<StepFunction<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<StepFunction<T>> = [0.01, 1.0, 100.0]
        .iter()
        .map(|&m| StepFunction::indicator(T::lit(m), T::one()))
        .collect();
    while out.len() < count {
        let k = rng.random_range(1..=12);
        let mut bps = vec![T::zero()];
        let mut t = 0.0;
        for _ in 0..k {
            t += 10f64.powf(rng.random_range(-2.0..1.0));
            bps.push(T::lit(t));
        }
        let mut levels: Vec<f64> = (0..k).map(|_| 10f64.powf(rng.random_range(-2.0..2.0))).collect();
        levels.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        let f = StepFunction::new(bps, levels.into_iter().map(T::lit).collect())
            .expect("generated staircase is canonical");
        out.push(f);
    }
    out.truncate(count.max(1));
    out
}

/// `h_X(s)` estimated as `max ||f*(./s)||_X / ||f*||_X` over `probes`.
pub fn dilation_norm<T: Real>(spec: &RiSpaceSpec<T>, s: T, probes: &[StepFunction<T>]) -> Result<T, RinormError> {
    if !(s > T::zero()) {
        return Err(RinormError::Parameter("dilation needs s > 0"));
    }
    let mut best = T::zero();
    for f in probes {
        let base = spec.norm(f);
        if !(base > T::zero()) || base.is_infinite() {
            continue;
        }
        let dilated = f.dilated(s).map_err(|_| RinormError::Parameter("dilation needs s > 0"))?;
        best = best.max(spec.norm(&dilated) / base);
    }
    Ok(best)
}

/// `ln h_X(s) / ln s`, which tends to a Boyd index as `s -> inf` or `s -> 0`.
pub fn boyd_index_estimate<T: Real>(spec: &RiSpaceSpec<T>, s: T, probes: &[StepFunction<T>]) -> Result<T, RinormError> {
    if s == T::one() {
        return Err(RinormError::Parameter("Boyd estimate needs s != 1"));
    }
    Ok(dilation_norm(spec, s, probes)?.ln() / s.ln())
}

/// `max ||f**||_X / ||f||_X` over `probes`: an empirical lower estimate of
/// the constant `c_X` in `||f**||_X <= c_X ||f||_X`.
pub fn maximal_constant<T: Real>(spec: &RiSpaceSpec<T>, probes: &[StepFunction<T>]) -> Result<T, RinormError> {
    let mut best = T::zero();
    for f in probes {
        let base = spec.norm(f);
        if !(base > T::zero()) || base.is_infinite() {
            continue;
        }
        best = best.max(spec.norm_of_decreasing(&f.double_star_piecewise())? / base);
    }
    Ok(best)
}
