use crate::rearrange::{Piece, Piecewise, RearrangeError};
use crate::scalar::{Real, Scalar};

/// Right-continuous nonincreasing step function on `[0, inf)`.
///
/// Takes the value `levels[j]` on `[breakpoints[j], breakpoints[j + 1])` and
/// vanishes beyond the last breakpoint. Canonical form: breakpoints strictly
/// increasing from zero, levels strictly decreasing and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction<T> {
    breakpoints: Vec<T>,
    levels: Vec<T>,
}

impl<T: Scalar> StepFunction<T> {
    pub(crate) fn from_canonical(breakpoints: Vec<T>, levels: Vec<T>) -> Self {
        debug_assert_eq!(breakpoints.len(), levels.len() + 1);
        Self { breakpoints, levels }
    }

    /// Builds from `(breakpoints, levels)` with `breakpoints[0] == 0`.
    /// Equal neighbouring levels are merged and zero levels dropped.
    pub fn new(breakpoints: Vec<T>, levels: Vec<T>) -> Result<Self, RearrangeError> {
        if breakpoints.len() != levels.len() + 1 || breakpoints[0] != T::zero() {
            return Err(RearrangeError::MalformedSteps("breakpoints must start at 0 and outnumber levels by one"));
        }
        if breakpoints.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(RearrangeError::MalformedSteps("breakpoints must be strictly increasing"));
        }
        if levels.iter().any(|&v| v < T::zero()) || levels.windows(2).any(|w| w[1] > w[0]) {
            return Err(RearrangeError::MalformedSteps("levels must be nonnegative and nonincreasing"));
        }
        let mut bps = vec![T::zero()];
        let mut lvls: Vec<T> = Vec::new();
        for (j, &v) in levels.iter().enumerate() {
            if v == T::zero() {
                break;
            }
            if lvls.last() == Some(&v) {
                *bps.last_mut().expect("nonempty") = breakpoints[j + 1];
            } else {
                lvls.push(v);
                bps.push(breakpoints[j + 1]);
            }
        }
        Ok(Self::from_canonical(bps, lvls))
    }

    pub fn zero() -> Self {
        Self::from_canonical(vec![T::zero()], Vec::new())
    }

    /// `c * chi_[0, m)`.
    pub fn indicator(m: T, c: T) -> Self {
        if !(m > T::zero()) || c == T::zero() {
            return Self::zero();
        }
        Self::from_canonical(vec![T::zero(), m], vec![c.magnitude()])
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.breakpoints
    }

    pub fn levels(&self) -> &[T] {
        &self.levels
    }

    pub fn num_steps(&self) -> usize {
        self.levels.len()
    }

    pub fn is_zero(&self) -> bool {
        self.levels.is_empty()
    }

    /// Measure of the support.
    pub fn support(&self) -> T {
        *self.breakpoints.last().expect("at least one breakpoint")
    }

    /// `f*(0+)`, the essential supremum.
    pub fn sup(&self) -> T {
        self.levels.first().copied().unwrap_or_else(T::zero)
    }

    /// Iterates `(start, end, level)` over the steps.
    pub fn steps(&self) -> impl Iterator<Item = (T, T, T)> + '_ {
        self.levels
            .iter()
            .enumerate()
            .map(move |(j, &v)| (self.breakpoints[j], self.breakpoints[j + 1], v))
    }

    /// Index of the step containing `t` (right-continuous), `None` past the support.
    fn step_index(&self, t: T) -> Option<usize> {
        let k = self.breakpoints.partition_point(|&b| b <= t);
        if k == 0 {
            Some(0)
        } else if k > self.levels.len() {
            None
        } else {
            Some(k - 1)
        }
    }

    /// `f*(t)`; a breakpoint takes the value of the step to its right.
    /// Negative `t` is treated as `0`.
    pub fn value_at(&self, t: T) -> T {
        match self.step_index(t) {
            Some(j) if !self.levels.is_empty() => self.levels[j],
            _ => T::zero(),
        }
    }

    /// `int_0^t f*`.
    pub fn integral_to(&self, t: T) -> T {
        let mut acc = T::zero();
        for (lo, hi, v) in self.steps() {
            if t <= lo {
                break;
            }
            let end = if t < hi { t } else { hi };
            acc = acc + v * (end - lo);
        }
        acc
    }

    pub fn total_integral(&self) -> T {
        self.steps().fold(T::zero(), |acc, (lo, hi, v)| acc + v * (hi - lo))
    }

    /// `f**(t) = t^{-1} int_0^t f*`, with `f**(0) = f*(0+)`.
    pub fn double_star(&self, t: T) -> Result<T, RearrangeError> {
        if t < T::zero() {
            return Err(RearrangeError::MassOutOfRange);
        }
        if t == T::zero() {
            return Ok(self.sup());
        }
        Ok(self.integral_to(t) / t)
    }

    /// `f**(t) - f*(t)` from step arithmetic alone.
    ///
    /// On the step `[lo, hi)` at level `v` this is `(int_0^lo f* - v lo) / t`,
    /// which is exactly zero on the first step.
    pub fn oscillation_at(&self, t: T) -> Result<T, RearrangeError> {
        if t < T::zero() {
            return Err(RearrangeError::MassOutOfRange);
        }
        if t == T::zero() || self.levels.is_empty() {
            return Ok(T::zero());
        }
        let b = match self.step_index(t) {
            Some(j) => {
                let lo = self.breakpoints[j];
                self.integral_to(lo) - self.levels[j] * lo
            }
            None => self.total_integral(),
        };
        Ok(if b < T::zero() { T::zero() } else { b / t })
    }

    /// Lebesgue measure of `{f* > lambda}`.
    pub fn lebesgue_distribution(&self, lambda: T) -> T {
        let count = self.levels.partition_point(|&v| v > lambda);
        self.breakpoints[count]
    }

    /// `c * f*` for `c` of either sign (the rearrangement of `c f`).
    pub fn scaled(&self, c: T) -> Self {
        let c = c.magnitude();
        if c == T::zero() {
            return Self::zero();
        }
        Self::from_canonical(self.breakpoints.clone(), self.levels.iter().map(|&v| v * c).collect())
    }

    /// Dilation `E_s f*(t) = f*(t / s)`.
    pub fn dilated(&self, s: T) -> Result<Self, RearrangeError> {
        if !(s > T::zero()) {
            return Err(RearrangeError::MassOutOfRange);
        }
        Ok(Self::from_canonical(
            self.breakpoints.iter().map(|&b| b * s).collect(),
            self.levels.clone(),
        ))
    }

    /// `int_0^inf f*(t) h*(t) dt` for two step functions.
    pub fn inner_product(&self, other: &Self) -> T {
        let (mut i, mut j) = (0usize, 0usize);
        let mut start = T::zero();
        let mut acc = T::zero();
        while i < self.levels.len() && j < other.levels.len() {
            let end_a = self.breakpoints[i + 1];
            let end_b = other.breakpoints[j + 1];
            let end = end_a.min_of(end_b);
            acc = acc + self.levels[i] * other.levels[j] * (end - start);
            start = end;
            if end_a == end {
                i += 1;
            }
            if end_b == end {
                j += 1;
            }
        }
        acc
    }

    /// Pointwise `self <= other` (as functions on `[0, inf)`).
    pub fn dominated_by(&self, other: &Self) -> bool {
        // both are constant between the union of breakpoints
        self.breakpoints
            .iter()
            .chain(other.breakpoints.iter())
            .all(|&t| self.value_at(t) <= other.value_at(t))
    }
}

impl<T: Real> StepFunction<T> {
    /// `(f*)^p`, which is the rearrangement of `|f|^p` for `p > 0`.
    pub fn powf(&self, p: T) -> Self {
        Self::from_canonical(
            self.breakpoints.clone(),
            self.levels.iter().map(|&v| crate::scalar::pow(v, p)).collect(),
        )
    }

    /// `f*` as a piecewise function (zero tail included).
    pub fn to_piecewise(&self) -> Piecewise<T> {
        let mut pieces: Vec<Piece<T>> = self.steps().map(|(lo, hi, v)| Piece::constant(lo, hi, v)).collect();
        pieces.push(Piece::constant(self.support(), T::infinity(), T::zero()));
        Piecewise::new(pieces)
    }

    /// `f**` as a piecewise `a + b/t` function, including its `I/t` tail.
    pub fn double_star_piecewise(&self) -> Piecewise<T> {
        let mut pieces = Vec::with_capacity(self.levels.len() + 1);
        let mut integral = T::zero();
        for (lo, hi, v) in self.steps() {
            // on [lo, hi): (integral + v (t - lo)) / t
            pieces.push(Piece::hyperbolic(lo, hi, v, integral - v * lo));
            integral = integral + v * (hi - lo);
        }
        pieces.push(Piece::hyperbolic(self.support(), T::infinity(), T::zero(), integral));
        Piecewise::new(pieces)
    }

    /// `f** - f*`, which is `b/t` on every piece.
    pub fn oscillation_piecewise(&self) -> Piecewise<T> {
        let mut pieces = Vec::with_capacity(self.levels.len() + 1);
        let mut integral = T::zero();
        for (lo, hi, v) in self.steps() {
            let b = integral - v * lo;
            pieces.push(Piece::hyperbolic(lo, hi, T::zero(), if b > T::zero() { b } else { T::zero() }));
            integral = integral + v * (hi - lo);
        }
        pieces.push(Piece::hyperbolic(self.support(), T::infinity(), T::zero(), integral));
        Piecewise::new(pieces)
    }

    /// `sup_t (f**(t) - f*(t))`. The difference decreases inside each step,
    /// so the supremum sits at a breakpoint.
    pub fn sup_oscillation(&self) -> T {
        self.breakpoints
            .iter()
            .skip(1)
            .map(|&t| self.oscillation_at(t).unwrap_or_else(|_| T::zero()))
            .fold(T::zero(), |a, b| a.max_of(b))
    }
}
