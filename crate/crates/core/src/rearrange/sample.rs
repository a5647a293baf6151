use crate::rearrange::{RearrangeError, StepFunction};
use crate::scalar::{Real, Scalar};

/// Function samples on the atoms of a discrete measure space.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSample<T> {
    values: Vec<T>,
    weights: Vec<T>,
}

impl<T: Scalar> WeightedSample<T> {
    pub fn new(values: Vec<T>, weights: Vec<T>) -> Result<Self, RearrangeError> {
        if values.len() != weights.len() {
            return Err(RearrangeError::LengthMismatch {
                values: values.len(),
                weights: weights.len(),
            });
        }
        if let Some(index) = weights.iter().position(|w| !(*w > T::zero())) {
            return Err(RearrangeError::NonPositiveWeight { index });
        }
        Ok(Self { values, weights })
    }

    /// All atoms carry the same mass.
    pub fn uniform(values: Vec<T>, mass: T) -> Result<Self, RearrangeError> {
        let weights = vec![mass; values.len()];
        Self::new(values, weights)
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn total_mass(&self) -> T {
        self.weights.iter().fold(T::zero(), |acc, &w| acc + w)
    }

    pub fn min_atom(&self) -> Option<T> {
        self.weights.iter().copied().reduce(|a, b| a.min_of(b))
    }

    /// Same atoms, transformed values.
    pub fn map_values(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            values: self.values.iter().map(|&v| f(v)).collect(),
            weights: self.weights.clone(),
        }
    }

    /// Mass of `{|f| > lambda}`.
    pub fn distribution(&self, lambda: T) -> Result<T, RearrangeError> {
        if lambda < T::zero() {
            return Err(RearrangeError::NegativeLevel);
        }
        Ok(self
            .values
            .iter()
            .zip(&self.weights)
            .filter(|(v, _)| v.magnitude() > lambda)
            .fold(T::zero(), |acc, (_, &w)| acc + w))
    }

    /// Sorts `|f|` descending (stable in the atom index), merges ties and
    /// accumulates mass.
    pub fn decreasing_rearrangement(&self) -> StepFunction<T> {
        let mut order: Vec<usize> = (0..self.values.len()).collect();
        order.sort_by(|&i, &j| {
            let (a, b) = (self.values[i].magnitude(), self.values[j].magnitude());
            b.partial_cmp(&a).unwrap_or(std::cmp::Ordering::Equal)
        });

        let mut breakpoints = vec![T::zero()];
        let mut levels: Vec<T> = Vec::new();
        let mut mass = T::zero();
        for i in order {
            let level = self.values[i].magnitude();
            if level == T::zero() {
                break;
            }
            mass = mass + self.weights[i];
            match levels.last() {
                Some(&last) if last == level => {
                    *breakpoints.last_mut().expect("nonempty") = mass;
                }
                _ => {
                    levels.push(level);
                    breakpoints.push(mass);
                }
            }
        }
        StepFunction::from_canonical(breakpoints, levels)
    }

    /// `f**(t) - f*(t)`, computed from the rearrangement and cross-checked
    /// against `t^{-1} * sum_{|f| > f*(t)} (|f| - f*(t)) w`.
    pub fn oscillation(&self, t: T) -> Result<T, RearrangeError> {
        if !(t > T::zero()) || t > self.total_mass() {
            return Err(RearrangeError::MassOutOfRange);
        }
        let rearranged = self.decreasing_rearrangement();
        self.oscillation_with(&rearranged, t)
    }

    /// As [`oscillation`](Self::oscillation) with a precomputed rearrangement.
    pub fn oscillation_with(&self, rearranged: &StepFunction<T>, t: T) -> Result<T, RearrangeError> {
        if !(t > T::zero()) || t > self.total_mass() {
            return Err(RearrangeError::MassOutOfRange);
        }
        let from_steps = rearranged.oscillation_at(t)?;
        let level = rearranged.value_at(t);
        let excess = self
            .values
            .iter()
            .zip(&self.weights)
            .filter(|(v, _)| v.magnitude() > level)
            .fold(T::zero(), |acc, (&v, &w)| acc + (v.magnitude() - level) * w);
        let from_identity = excess / t;

        let diff = (from_steps - from_identity).magnitude();
        let scale = from_steps.magnitude().max_of(from_identity.magnitude());
        let tol = T::from_f64(1e-10).unwrap_or_else(T::zero);
        if diff > tol * scale + T::rounding_floor() * rearranged.sup() {
            return Err(RearrangeError::OscillationMismatch {
                steps: from_steps.to_f64().unwrap_or(f64::NAN),
                identity: from_identity.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(from_steps)
    }
}

impl<T: Real> WeightedSample<T> {
    /// `|f|^p`, the transform used before rearranging in the oscillation
    /// inequality.
    pub fn abs_pow(&self, p: T) -> Self {
        self.map_values(|v| crate::scalar::pow(v.magnitude(), p))
    }
}
