use crate::hajlasz::pairs::check_pairs;
use crate::hajlasz::{DistancePowers, GradientCheck, HajlaszError};
use crate::rearrange::WeightedSample;
use crate::scalar::{pow, Real};
use crate::space::{AnalyticSpace, DiscreteSpace, MetricMeasureSpace};

/// Cone `f(x) = (r - d(x0, x))^s` on `B(x0, r)` (zero outside) with the
/// candidate gradient `g = chi_{B(x0, r)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestFunction<T> {
    pub radius: T,
    pub s: T,
}

impl<T: Real> TestFunction<T> {
    pub fn new(radius: T, s: T) -> Result<Self, HajlaszError> {
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(crate::space::SpaceError::NonPositiveRadius.into());
        }
        if !(s > T::zero()) || !s.is_finite() {
            return Err(HajlaszError::InvalidExponent);
        }
        Ok(Self { radius, s })
    }

    /// `f` as a function of the distance to the centre.
    pub fn profile(&self, d: T) -> T {
        if d < self.radius {
            pow(self.radius - d, self.s)
        } else {
            T::zero()
        }
    }

    /// `||f||_inf = r^s`.
    pub fn sup(&self) -> T {
        pow(self.radius, self.s)
    }

    /// `(f, g)` sampled on the atoms of a discrete space.
    pub fn sample(
        &self,
        space: &DiscreteSpace<T>,
        center: usize,
    ) -> Result<(WeightedSample<T>, WeightedSample<T>), HajlaszError> {
        let d = space.distances_from(center);
        if d.is_empty() {
            return Err(crate::space::SpaceError::UnknownPoint(center).into());
        }
        let f = d.iter().map(|&d| self.profile(d)).collect();
        let g = d.iter().map(|&d| if d < self.radius { T::one() } else { T::zero() }).collect();
        Ok((space.sample(f)?, space.sample(g)?))
    }

    /// Checks the pair inequality for the sampled `(f, g)`; for `s > 1` it
    /// can fail and the violation is reported, not assumed away.
    pub fn pair_check(&self, space: &DiscreteSpace<T>, center: usize, tol: T) -> Result<GradientCheck<T>, HajlaszError> {
        let (f, g) = self.sample(space, center)?;
        Ok(check_pairs(&DistancePowers::new(space, self.s), f.values(), g.values(), tol))
    }

    /// `mu{f > lambda} = mu(B(x0, r - lambda^{1/s}))` for `0 <= lambda < r^s`.
    pub fn distribution<S: MetricMeasureSpace<T>>(&self, space: &S, center: &S::Point, lambda: T) -> Result<T, HajlaszError> {
        if lambda < T::zero() {
            return Err(HajlaszError::InvalidTolerance);
        }
        if lambda >= self.sup() {
            return Ok(T::zero());
        }
        let rho = self.radius - pow(lambda, self.s.recip());
        if !(rho > T::zero()) {
            return Ok(T::zero());
        }
        Ok(space.ball_measure(center, rho)?)
    }

    /// `||f||_{L^1} = int_0^r s (r - rho)^{s-1} mu(B(x0, rho)) d rho`,
    /// integrated exactly against the polynomial ball-measure profile.
    pub fn l1_norm_analytic(&self, space: &AnalyticSpace, center: &[T]) -> Result<T, HajlaszError> {
        let r = self.radius;
        let s = self.s;
        let mut total = T::zero();
        for piece in space.radial_polynomial(center)? {
            let lo = piece.lo;
            let hi = piece.hi.min(r);
            if !(hi > lo) {
                continue;
            }
            // rho = r - u, u in [r - hi, r - lo]
            let (u0, u1) = (r - hi, r - lo);
            for (k, &ck) in piece.coeffs.iter().enumerate() {
                if ck == T::zero() {
                    continue;
                }
                let mut binom = T::one();
                for m in 0..=k {
                    let e = s + T::from_usize_lossy(m);
                    let sign = if m % 2 == 0 { T::one() } else { -T::one() };
                    let integral = s * (u1.powf(e) - u0.powf(e)) / e;
                    total = total + ck * binom * sign * r.powi((k - m) as i32) * integral;
                    binom = binom * T::from_usize_lossy(k - m) / T::from_usize_lossy(m + 1);
                }
            }
        }
        Ok(total)
    }

    /// `sum_i w_i f_i` on a discrete space.
    pub fn l1_norm_discrete(&self, space: &DiscreteSpace<T>, center: usize) -> Result<T, HajlaszError> {
        let (f, _) = self.sample(space, center)?;
        Ok(f.values().iter().zip(f.weights()).fold(T::zero(), |a, (&v, &w)| a + v * w))
    }
}
