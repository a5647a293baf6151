use crate::scalar::Real;
use crate::space::{MetricMeasureSpace, RadialMeasure, SpaceError};

/// Closed-form measure spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnalyticSpace {
    /// `R^n` with Euclidean distance and Lebesgue measure.
    EuclideanLebesgue { dim: usize },
    /// `R^2` with the max-coordinate distance and the measure
    /// `area + length on {x = 0} + length on {x = 1}`.
    AppendixPlane,
}

/// Volume of the Euclidean unit ball in `R^n`.
pub fn unit_ball_volume<T: Real>(dim: usize) -> T {
    let two_pi = T::lit(2.0) * T::PI();
    let mut v = if dim.is_multiple_of(2) { T::one() } else { T::lit(2.0) };
    let mut k = if dim.is_multiple_of(2) { 2 } else { 3 };
    while k <= dim {
        v = v * two_pi / T::from_usize_lossy(k);
        k += 2;
    }
    v
}

/// `mu(B(x, rho)) = sum_k coeffs[k] rho^k` for `rho` in `(lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialPolynomial<T> {
    pub lo: T,
    pub hi: T,
    pub coeffs: Vec<T>,
}

impl AnalyticSpace {
    pub fn dimension(&self) -> usize {
        match self {
            AnalyticSpace::EuclideanLebesgue { dim } => *dim,
            AnalyticSpace::AppendixPlane => 2,
        }
    }

    fn check_point<T: Real>(&self, x: &[T]) -> Result<(), SpaceError> {
        if x.len() != self.dimension() {
            return Err(SpaceError::DimensionMismatch {
                expected: self.dimension(),
                got: x.len(),
            });
        }
        if x.iter().any(|c| !c.is_finite()) {
            return Err(SpaceError::Invalid("non-finite coordinate".into()));
        }
        Ok(())
    }

    /// Closed-form open-ball measure; `x` must already be validated.
    fn ball<T: Real>(&self, x: &[T], r: T) -> T {
        match self {
            AnalyticSpace::EuclideanLebesgue { dim } => unit_ball_volume::<T>(*dim) * r.powi(*dim as i32),
            AnalyticSpace::AppendixPlane => {
                let a = x[0];
                let mut m = T::lit(4.0) * r * r;
                if a.abs() < r {
                    m = m + T::lit(2.0) * r;
                }
                if (T::one() - a).abs() < r {
                    m = m + T::lit(2.0) * r;
                }
                m
            }
        }
    }

    /// Radial mass profile around `x` as a piecewise polynomial in the radius.
    pub fn radial_polynomial<T: Real>(&self, x: &[T]) -> Result<Vec<RadialPolynomial<T>>, SpaceError> {
        self.check_point(x)?;
        Ok(match self {
            AnalyticSpace::EuclideanLebesgue { dim } => {
                let mut coeffs = vec![T::zero(); dim + 1];
                coeffs[*dim] = unit_ball_volume(*dim);
                vec![RadialPolynomial { lo: T::zero(), hi: T::infinity(), coeffs }]
            }
            AnalyticSpace::AppendixPlane => {
                let mut cuts = vec![x[0].abs(), (T::one() - x[0]).abs()];
                cuts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
                let mut edges = vec![T::zero()];
                edges.extend(cuts.into_iter().filter(|&c| c > T::zero()));
                edges.push(T::infinity());
                edges
                    .windows(2)
                    .filter(|w| w[1] > w[0])
                    .map(|w| {
                        // line terms are present once rho passes the distance to the line
                        let probe = if w[1].is_infinite() { w[0] + T::one() } else { (w[0] + w[1]) / T::lit(2.0) };
                        let linear = self.ball(x, probe) - T::lit(4.0) * probe * probe;
                        RadialPolynomial {
                            lo: w[0],
                            hi: w[1],
                            coeffs: vec![T::zero(), linear / probe, T::lit(4.0)],
                        }
                    })
                    .collect()
            }
        })
    }
}

impl<T: Real> MetricMeasureSpace<T> for AnalyticSpace {
    type Point = Vec<T>;

    fn ball_measure(&self, x: &Vec<T>, r: T) -> Result<T, SpaceError> {
        self.check_point(x)?;
        if !(r > T::zero()) {
            return Err(SpaceError::NonPositiveRadius);
        }
        Ok(self.ball(x, r))
    }

    fn total_mass(&self) -> Option<T> {
        None
    }

    fn radial<'a>(&'a self, x: &Vec<T>) -> Result<RadialMeasure<'a, T>, SpaceError> {
        self.check_point(x)?;
        let x = x.clone();
        Ok(Box::new(move |r| if r > T::zero() { self.ball(&x, r) } else { T::zero() }))
    }

    fn describe_point(&self, x: &Vec<T>) -> String {
        format!("({})", x.iter().map(|v| format!("{v}")).collect::<Vec<_>>().join(";"))
    }
}
