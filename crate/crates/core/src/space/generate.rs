//! Deterministic generators for discrete spaces.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::Real;
use crate::space::{DiscreteSpace, Metric, SpaceError};

/// Cell centres of a `per_side^dim` grid on `[lo, hi]^dim`, each weighted
/// by its cell volume, with the Euclidean metric.
pub fn uniform_grid<T: Real>(dim: usize, per_side: usize, lo: T, hi: T) -> Result<DiscreteSpace<T>, SpaceError> {
    if dim == 0 || per_side == 0 {
        return Err(SpaceError::Empty);
    }
    if !(hi > lo) {
        return Err(SpaceError::Parameter("grid bounds must satisfy lo < hi"));
    }
    let h = (hi - lo) / T::from_usize_lossy(per_side);
    let n = per_side
        .checked_pow(dim as u32)
        .ok_or(SpaceError::Parameter("grid too large"))?;
    let half = T::lit(0.5);
    let points: Vec<Vec<T>> = (0..n)
        .map(|mut k| {
            let mut p = Vec::with_capacity(dim);
            for _ in 0..dim {
                p.push(lo + (T::from_usize_lossy(k % per_side) + half) * h);
                k /= per_side;
            }
            p.reverse();
            p
        })
        .collect();
    let weights = vec![h.powi(dim as i32); n];
    DiscreteSpace::new(Metric::Euclidean(points), weights)
}

/// `n` uniform points in `[0, 1]^dim` with mass `1/n` each.
pub fn random_cloud<T: Real>(n: usize, dim: usize, seed: u64) -> Result<DiscreteSpace<T>, SpaceError> {
    if n == 0 || dim == 0 {
        return Err(SpaceError::Empty);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Vec<T>> = (0..n)
        .map(|_| (0..dim).map(|_| T::lit(rng.random::<f64>())).collect())
        .collect();
    DiscreteSpace::new(Metric::Euclidean(points), vec![T::one() / T::from_usize_lossy(n); n])
}

/// Window `[-1, 2] x [-1.5, 1.5]` of the plane.
pub const APPENDIX_WINDOW: ([f64; 2], [f64; 2]) = ([-1.0, 2.0], [-1.5, 1.5]);

/// Which part of the plane measure an atom discretises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaneComponent {
    Area,
    LineAtZero,
    LineAtOne,
}

/// Discretisation of the plane measure `area + length on {x = 0} + length
/// on {x = 1}` with the max-coordinate metric.
///
/// Area atoms sit at jittered centres of square cells of side
/// `1/cells_per_unit` and carry the cell area; line atoms are spaced
/// `line_spacing` apart on both lines and carry that length.
pub fn appendix_plane_sample<T: Real>(
    cells_per_unit: usize,
    line_spacing: f64,
    seed: u64,
) -> Result<DiscreteSpace<T>, SpaceError> {
    appendix_plane_sample_labeled(cells_per_unit, line_spacing, seed).map(|(space, _)| space)
}

/// [`appendix_plane_sample`] together with the component of every atom.
pub fn appendix_plane_sample_labeled<T: Real>(
    cells_per_unit: usize,
    line_spacing: f64,
    seed: u64,
) -> Result<(DiscreteSpace<T>, Vec<PlaneComponent>), SpaceError> {
    if cells_per_unit == 0 || !(line_spacing > 0.0) {
        return Err(SpaceError::Empty);
    }
    let ([x0, x1], [y0, y1]) = APPENDIX_WINDOW;
    let h = 1.0 / cells_per_unit as f64;
    let nx = ((x1 - x0) / h).round() as usize;
    let ny = ((y1 - y0) / h).round() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(nx * ny);
    let mut weights = Vec::with_capacity(nx * ny);
    let mut labels = vec![PlaneComponent::Area; nx * ny];
    for i in 0..nx {
        for j in 0..ny {
            // jitter stays inside the cell, away from its edges
            let jx = 0.8 * (rng.random::<f64>() - 0.5);
            let jy = 0.8 * (rng.random::<f64>() - 0.5);
            points.push(vec![
                T::lit(x0 + (i as f64 + 0.5 + jx) * h),
                T::lit(y0 + (j as f64 + 0.5 + jy) * h),
            ]);
            weights.push(T::lit(h * h));
        }
    }
    let nl = ((y1 - y0) / line_spacing).round() as usize;
    let step = (y1 - y0) / nl as f64;
    for (line, label) in [(0.0, PlaneComponent::LineAtZero), (1.0, PlaneComponent::LineAtOne)] {
        for k in 0..nl {
            points.push(vec![T::lit(line), T::lit(y0 + (k as f64 + 0.5) * step)]);
            weights.push(T::lit(step));
            labels.push(label);
        }
    }
    Ok((DiscreteSpace::new(Metric::Chebyshev(points), weights)?, labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{AnalyticSpace, MetricMeasureSpace};

    #[test]
    fn small_grid() {
        let g = uniform_grid::<f64>(2, 4, 0.0, 1.0).unwrap();
        assert_eq!(g.len(), 16);
        assert!(g.weights().iter().all(|&w| w == 1.0 / 16.0));
        assert_eq!(g.coordinates().unwrap()[1], vec![0.125, 0.375]);
        assert!(uniform_grid::<f64>(2, 0, 0.0, 1.0).is_err());
    }

    #[test]
    fn random_cloud_is_seeded() {
        let a = random_cloud::<f64>(100, 2, 7).unwrap();
        let b = random_cloud::<f64>(100, 2, 7).unwrap();
        assert_eq!(a.coordinates(), b.coordinates());
        assert!((a.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn appendix_sample_matches_closed_form() {
        let d = appendix_plane_sample::<f64>(100, 0.005, 3).unwrap();
        let exact = AnalyticSpace::AppendixPlane;
        for (x, r) in [([0.1, 0.0], 0.3), ([0.5, 0.2], 0.6), ([0.5, 0.0], 0.25), ([0.95, -0.4], 0.5)] {
            let center = d.nearest_point(&x).unwrap();
            let c = d.coordinates().unwrap()[center].clone();
            let m_d = d.ball_measure(&center, r).unwrap();
            let m_e: f64 = exact.ball_measure(&c, r).unwrap();
            assert!((m_d - m_e).abs() < 0.02 * m_e, "x={x:?}: {m_d} vs {m_e}");
        }
    }

    #[test]
    fn component_masses() {
        let (d, labels) = appendix_plane_sample_labeled::<f64>(10, 0.1, 1).unwrap();
        let mass = |c| -> f64 { d.weights().iter().zip(&labels).filter(|(_, &l)| l == c).map(|(w, _)| w).sum() };
        assert!((mass(PlaneComponent::Area) - 9.0).abs() < 1e-9);
        assert!((mass(PlaneComponent::LineAtZero) - 3.0).abs() < 1e-9);
        assert!((mass(PlaneComponent::LineAtOne) - 3.0).abs() < 1e-9);
    }
}
