use crate::rearrange::StepFunction;
use crate::rinorm::{RiSpaceSpec, RinormError};
use crate::scalar::{pow, Real};

/// `||t^{-sigma} f**||` in a Lorentz space; `divergent` when the integral
/// is infinite (then `value` is `+inf`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleStarNorm<T> {
    pub value: T,
    pub divergent: bool,
}

impl<T: Real> RiSpaceSpec<T> {
    /// `||f||_X` from `f*`. Divergent integrals give `+inf`.
    pub fn norm(&self, fs: &StepFunction<T>) -> T {
        if fs.is_zero() {
            return T::zero();
        }
        match *self {
            RiSpaceSpec::Lp(p) if p.is_infinite() => fs.sup(),
            RiSpaceSpec::Lp(p) => {
                let sum = fs.steps().fold(T::zero(), |acc, (lo, hi, v)| acc + pow(v, p) * (hi - lo));
                pow(sum, p.recip())
            }
            RiSpaceSpec::Lorentz { p, q } if q.is_infinite() => {
                // t^{1/p} f*(t) increases inside each step
                fs.steps().fold(T::zero(), |acc, (_, hi, v)| acc.max(hi.powf(p.recip()) * v))
            }
            RiSpaceSpec::Lorentz { p, q } => {
                let m = fs.to_piecewise().moment(q, q / p - T::one());
                pow(m, q.recip())
            }
            RiSpaceSpec::WeakLinf => fs.sup_oscillation(),
            RiSpaceSpec::L1PlusLinf => fs.integral_to(T::one()),
        }
    }

    /// `(int_0^inf (t^{1/p - sigma} f**(t))^q dt/t)^{1/q}` for `X = L^{p,q}`
    /// (`Lp` read as `L^{p,p}`), with `sigma` in `(0, 1)` and `q >= 1`.
    ///
    /// Finite for nonzero `f` exactly when `1/p > sigma` and
    /// `1/p < 1 + sigma`; the `I/t` tail of `f**` is integrated in closed form.
    pub fn norm_doublestar(&self, fs: &StepFunction<T>, sigma: T) -> Result<DoubleStarNorm<T>, RinormError> {
        let (p, q) = self.lorentz_exponents()?;
        if !(sigma > T::zero() && sigma < T::one()) {
            return Err(RinormError::ShiftOutOfRange { sigma: sigma.to_f64_lossy() });
        }
        if !(q >= T::one()) || q.is_infinite() {
            return Err(RinormError::Parameter("norm_doublestar needs finite q >= 1"));
        }
        if fs.is_zero() {
            return Ok(DoubleStarNorm { value: T::zero(), divergent: false });
        }
        let m = fs.double_star_piecewise().moment(q, q * (p.recip() - sigma) - T::one());
        Ok(if m.is_infinite() {
            DoubleStarNorm { value: T::infinity(), divergent: true }
        } else {
            DoubleStarNorm { value: pow(m, q.recip()), divergent: false }
        })
    }
}
