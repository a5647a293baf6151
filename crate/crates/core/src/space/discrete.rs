use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rearrange::WeightedSample;
use crate::scalar::Real;
use crate::space::{MetricMeasureSpace, RadialMeasure, SpaceError};

/// Distance oracle of a [`DiscreteSpace`].
#[derive(Debug, Clone, PartialEq)]
pub enum Metric<T> {
    /// Euclidean distance between coordinate rows.
    Euclidean(Vec<Vec<T>>),
    /// Max-coordinate distance between coordinate rows.
    Chebyshev(Vec<Vec<T>>),
    /// Explicit symmetric matrix.
    Matrix(Vec<Vec<T>>),
}

impl<T: Real> Metric<T> {
    fn len(&self) -> usize {
        match self {
            Metric::Euclidean(p) | Metric::Chebyshev(p) | Metric::Matrix(p) => p.len(),
        }
    }

    #[inline]
    fn distance(&self, i: usize, j: usize) -> T {
        match self {
            Metric::Euclidean(p) => p[i]
                .iter()
                .zip(&p[j])
                .fold(T::zero(), |acc, (&a, &b)| acc + (a - b) * (a - b))
                .sqrt(),
            Metric::Chebyshev(p) => p[i]
                .iter()
                .zip(&p[j])
                .fold(T::zero(), |acc, (&a, &b)| acc.max((a - b).abs())),
            Metric::Matrix(m) => m[i][j],
        }
    }

    fn coordinates(&self) -> Option<&[Vec<T>]> {
        match self {
            Metric::Euclidean(p) | Metric::Chebyshev(p) => Some(p),
            Metric::Matrix(_) => None,
        }
    }
}

/// Above this size the triangle inequality is sampled instead of enumerated.
pub const FULL_TRIANGLE_CHECK_LIMIT: usize = 2000;
const SAMPLED_TRIPLES: usize = 1_000_000;

#[derive(Debug, Clone, Copy)]
struct Extent<T> {
    min_neighbor: T,
    diameter: T,
}

/// Weighted finite metric space.
#[derive(Debug)]
pub struct DiscreteSpace<T> {
    metric: Metric<T>,
    weights: Vec<T>,
    total_mass: T,
    extent: OnceLock<Extent<T>>,
}

impl<T: Real> Clone for DiscreteSpace<T> {
    fn clone(&self) -> Self {
        Self {
            metric: self.metric.clone(),
            weights: self.weights.clone(),
            total_mass: self.total_mass,
            extent: OnceLock::new(),
        }
    }
}

impl<T: Real> DiscreteSpace<T> {
    /// Validates weights and the metric axioms.
    ///
    /// Coordinate metrics are norms, so only distinctness of points is
    /// checked for them. Matrix metrics get the full check (sampled above
    /// [`FULL_TRIANGLE_CHECK_LIMIT`] points).
    pub fn new(metric: Metric<T>, weights: Vec<T>) -> Result<Self, SpaceError> {
        let n = metric.len();
        if n == 0 {
            return Err(SpaceError::Empty);
        }
        if weights.len() != n {
            return Err(SpaceError::Invalid(format!("{n} points but {} weights", weights.len())));
        }
        if let Some(i) = weights.iter().position(|w| !(*w > T::zero()) || !w.is_finite()) {
            return Err(SpaceError::Invalid(format!("weight {i} is not a positive finite number")));
        }
        match &metric {
            Metric::Euclidean(p) | Metric::Chebyshev(p) => check_coordinates(p)?,
            Metric::Matrix(m) => check_matrix(m)?,
        }
        let total_mass = weights.iter().fold(T::zero(), |a, &w| a + w);
        Ok(Self {
            metric,
            weights,
            total_mass,
            extent: OnceLock::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn metric(&self) -> &Metric<T> {
        &self.metric
    }

    pub fn coordinates(&self) -> Option<&[Vec<T>]> {
        self.metric.coordinates()
    }

    pub fn total_mass(&self) -> T {
        self.total_mass
    }

    pub fn min_atom(&self) -> T {
        self.weights.iter().copied().fold(T::infinity(), T::min)
    }

    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> T {
        if i == j {
            T::zero()
        } else {
            self.metric.distance(i, j)
        }
    }

    fn check_point(&self, x: usize) -> Result<(), SpaceError> {
        if x >= self.len() {
            Err(SpaceError::UnknownPoint(x))
        } else {
            Ok(())
        }
    }

    /// Distances from `x` to every point, in point order.
    pub fn distances_from(&self, x: usize) -> Vec<T> {
        (0..self.len()).map(|j| self.distance(x, j)).collect()
    }

    fn extent(&self) -> Extent<T> {
        *self.extent.get_or_init(|| {
            let n = self.len();
            let mut min_neighbor = T::infinity();
            let mut diameter = T::zero();
            for i in 0..n {
                for j in (i + 1)..n {
                    let d = self.distance(i, j);
                    min_neighbor = min_neighbor.min(d);
                    diameter = diameter.max(d);
                }
            }
            Extent { min_neighbor, diameter }
        })
    }

    /// Smallest pairwise distance (`inf` for a single point).
    pub fn min_neighbor_distance(&self) -> T {
        self.extent().min_neighbor
    }

    pub fn diameter(&self) -> T {
        self.extent().diameter
    }

    /// `[4 * min neighbour distance, diameter / 2]`: radii on which the
    /// discrete space is a fair stand-in for a continuum.
    pub fn admissible_radii(&self) -> (T, T) {
        let e = self.extent();
        (T::lit(4.0) * e.min_neighbor, e.diameter / T::lit(2.0))
    }

    /// `[10 * smallest atom, total mass / 2]`.
    pub fn admissible_masses(&self) -> (T, T) {
        (T::lit(10.0) * self.min_atom(), self.total_mass / T::lit(2.0))
    }

    /// Point closest to the given coordinates (coordinate metrics only).
    pub fn nearest_point(&self, target: &[T]) -> Option<usize> {
        let coords = self.coordinates()?;
        let mut best = None;
        let mut best_d = T::infinity();
        for (i, p) in coords.iter().enumerate() {
            let d = p
                .iter()
                .zip(target)
                .fold(T::zero(), |acc, (&a, &b)| acc + (a - b) * (a - b));
            if d < best_d {
                best_d = d;
                best = Some(i);
            }
        }
        best
    }

    /// Attaches this space's atom masses to function values.
    pub fn sample(&self, values: Vec<T>) -> Result<WeightedSample<T>, SpaceError> {
        if values.len() != self.len() {
            return Err(SpaceError::Invalid(format!(
                "function has {} values, space has {} points",
                values.len(),
                self.len()
            )));
        }
        WeightedSample::new(values, self.weights.clone()).map_err(|e| SpaceError::Invalid(e.to_string()))
    }

    /// Sorted distances from `x` with cumulative masses.
    pub fn radial_profile(&self, x: usize) -> Result<RadialProfile<T>, SpaceError> {
        self.check_point(x)?;
        let mut pairs: Vec<(T, T)> = (0..self.len()).map(|j| (self.distance(x, j), self.weights[j])).collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
        let mut radii = Vec::with_capacity(pairs.len());
        let mut cumulative = Vec::with_capacity(pairs.len());
        let mut acc = T::zero();
        for (d, w) in pairs {
            acc = acc + w;
            if radii.last() == Some(&d) {
                *cumulative.last_mut().expect("nonempty") = acc;
            } else {
                radii.push(d);
                cumulative.push(acc);
            }
        }
        Ok(RadialProfile { radii, cumulative })
    }
}

/// `r -> mu(B(x, r))` around one atom: piecewise constant with breaks at
/// the distinct distances from `x`.
#[derive(Debug, Clone)]
pub struct RadialProfile<T> {
    radii: Vec<T>,
    cumulative: Vec<T>,
}

impl<T: Real> RadialProfile<T> {
    /// Mass of the open ball: atoms at distance strictly below `r`.
    pub fn mass_within(&self, r: T) -> T {
        let k = self.radii.partition_point(|&d| d < r);
        if k == 0 {
            T::zero()
        } else {
            self.cumulative[k - 1]
        }
    }

    /// Distinct distances from the centre, ascending (starts at 0).
    pub fn breakpoints(&self) -> &[T] {
        &self.radii
    }
}

fn check_coordinates<T: Real>(points: &[Vec<T>]) -> Result<(), SpaceError> {
    let dim = points[0].len();
    if dim == 0 {
        return Err(SpaceError::Invalid("points have no coordinates".into()));
    }
    for (i, p) in points.iter().enumerate() {
        if p.len() != dim {
            return Err(SpaceError::Invalid(format!("point {i} has {} coordinates, expected {dim}", p.len())));
        }
        if p.iter().any(|c| !c.is_finite()) {
            return Err(SpaceError::Invalid(format!("point {i} has a non-finite coordinate")));
        }
    }
    // distinct points <=> positive distances for a norm metric
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        points[a]
            .iter()
            .zip(&points[b])
            .map(|(x, y)| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal))
            .find(|o| *o != std::cmp::Ordering::Equal)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    for w in order.windows(2) {
        if points[w[0]] == points[w[1]] {
            return Err(SpaceError::Invalid(format!("points {} and {} coincide", w[0], w[1])));
        }
    }
    Ok(())
}

fn check_matrix<T: Real>(m: &[Vec<T>]) -> Result<(), SpaceError> {
    let n = m.len();
    for (i, row) in m.iter().enumerate() {
        if row.len() != n {
            return Err(SpaceError::Invalid(format!("distance row {i} has length {}", row.len())));
        }
        if row[i] != T::zero() {
            return Err(SpaceError::Invalid(format!("d({i},{i}) != 0")));
        }
        for j in 0..i {
            if row[j] != m[j][i] {
                return Err(SpaceError::Invalid(format!("d({i},{j}) != d({j},{i})")));
            }
            if !(row[j] > T::zero()) || !row[j].is_finite() {
                return Err(SpaceError::Invalid(format!("d({i},{j}) is not a positive finite number")));
            }
        }
    }
    let violates = |i: usize, j: usize, k: usize| {
        let slack = T::lit(1e-12) * (m[i][k] + m[k][j]);
        m[i][j] > m[i][k] + m[k][j] + slack
    };
    if n <= FULL_TRIANGLE_CHECK_LIMIT {
        for i in 0..n {
            for j in (i + 1)..n {
                for k in 0..n {
                    if violates(i, j, k) {
                        return Err(SpaceError::TriangleInequality { i, j, k });
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x7121);
        for _ in 0..SAMPLED_TRIPLES {
            let (i, j, k) = (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n));
            if violates(i, j, k) {
                return Err(SpaceError::TriangleInequality { i, j, k });
            }
        }
    }
    Ok(())
}

impl<T: Real> MetricMeasureSpace<T> for DiscreteSpace<T> {
    type Point = usize;

    fn ball_measure(&self, x: &usize, r: T) -> Result<T, SpaceError> {
        self.check_point(*x)?;
        if !(r > T::zero()) {
            return Err(SpaceError::NonPositiveRadius);
        }
        Ok((0..self.len())
            .filter(|&j| self.distance(*x, j) < r)
            .fold(T::zero(), |acc, j| acc + self.weights[j]))
    }

    fn total_mass(&self) -> Option<T> {
        Some(self.total_mass)
    }

    fn radial<'a>(&'a self, x: &usize) -> Result<RadialMeasure<'a, T>, SpaceError> {
        let profile = self.radial_profile(*x)?;
        Ok(Box::new(move |r| profile.mass_within(r)))
    }

    fn describe_point(&self, x: &usize) -> String {
        match self.coordinates() {
            Some(c) => format!(
                "{}:({})",
                x,
                c[*x].iter().map(|v| format!("{v}")).collect::<Vec<_>>().join(";")
            ),
            None => format!("{x}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(n: usize) -> DiscreteSpace<f64> {
        let pts = (0..n).map(|i| vec![i as f64]).collect();
        DiscreteSpace::new(Metric::Euclidean(pts), vec![1.0; n]).unwrap()
    }

    #[test]
    fn open_ball_on_a_line() {
        let s = line(5);
        assert_eq!(s.ball_measure(&2, 1.0).unwrap(), 1.0);
        assert_eq!(s.ball_measure(&2, 1.0001).unwrap(), 3.0);
        assert_eq!(s.ball_measure(&0, 10.0).unwrap(), 5.0);
        assert!(matches!(s.ball_measure(&7, 1.0), Err(SpaceError::UnknownPoint(7))));
        assert!(matches!(s.ball_measure(&0, 0.0), Err(SpaceError::NonPositiveRadius)));
    }

    #[test]
    fn profile_matches_direct_count() {
        let s = line(7);
        let prof = s.radial_profile(3).unwrap();
        assert_eq!(prof.breakpoints(), &[0.0, 1.0, 2.0, 3.0]);
        for r in [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5] {
            assert_eq!(prof.mass_within(r), s.ball_measure(&3, r).unwrap());
        }
    }

    #[test]
    fn rejects_duplicate_points_and_bad_weights() {
        let pts = vec![vec![0.0, 1.0], vec![0.0, 1.0]];
        assert!(DiscreteSpace::new(Metric::Euclidean(pts), vec![1.0, 1.0]).is_err());
        let pts = vec![vec![0.0], vec![1.0]];
        assert!(DiscreteSpace::new(Metric::Euclidean(pts.clone()), vec![1.0, -1.0]).is_err());
        assert!(DiscreteSpace::new(Metric::Chebyshev(pts), vec![1.0]).is_err());
    }

    #[test]
    fn matrix_metric_validation() {
        let good = vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]];
        assert!(DiscreteSpace::new(Metric::Matrix(good), vec![1.0; 3]).is_ok());
        let bad = vec![vec![0.0, 1.0, 3.0], vec![1.0, 0.0, 1.0], vec![3.0, 1.0, 0.0]];
        assert!(matches!(
            DiscreteSpace::new(Metric::Matrix(bad), vec![1.0; 3]),
            Err(SpaceError::TriangleInequality { .. })
        ));
        let asym = vec![vec![0.0, 1.0], vec![2.0, 0.0]];
        assert!(DiscreteSpace::new(Metric::Matrix(asym), vec![1.0; 2]).is_err());
        let zero = vec![vec![0.0, 0.0], vec![0.0, 0.0]];
        assert!(DiscreteSpace::new(Metric::Matrix(zero), vec![1.0; 2]).is_err());
    }

    #[test]
    fn extent_and_admissible_ranges() {
        let s = line(9);
        assert_eq!(s.min_neighbor_distance(), 1.0);
        assert_eq!(s.diameter(), 8.0);
        assert_eq!(s.admissible_radii(), (4.0, 4.0));
        assert_eq!(s.admissible_masses(), (10.0, 4.5));
    }
}
