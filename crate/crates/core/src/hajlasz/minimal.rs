use serde::Serialize;

use crate::hajlasz::pairs::{ratio, DistancePowers};
use crate::hajlasz::{lp, qp, HajlaszError};
use crate::rearrange::WeightedSample;
use crate::rinorm::RiSpaceSpec;
use crate::scalar::Real;
use crate::space::DiscreteSpace;

/// Norm minimised over the gradient polytope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// `sum_i w_i g_i`.
    L1,
    /// `(sum_i w_i g_i^2)^{1/2}`.
    L2,
    /// `max_i g_i`.
    Linf,
}

impl Objective {
    pub fn from_spec<T: Real>(spec: &RiSpaceSpec<T>) -> Result<Self, HajlaszError> {
        match *spec {
            RiSpaceSpec::Lp(p) if p == T::one() => Ok(Objective::L1),
            RiSpaceSpec::Lp(p) if p == T::lit(2.0) => Ok(Objective::L2),
            RiSpaceSpec::Lp(p) if p.is_infinite() => Ok(Objective::Linf),
            _ => Err(HajlaszError::UnsupportedObjective(spec.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub max_iterations: usize,
    /// Feasibility slack, relative to `max c_ij`.
    pub feasibility_tol: f64,
    /// Relative duality gap accepted as optimal.
    pub objective_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { max_iterations: 100_000, feasibility_tol: 1e-8, objective_tol: 1e-6 }
    }
}

/// Pair constraints `g_i + g_j >= c_ij` with atom weights.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientProblem<T> {
    weights: Vec<T>,
    /// `c_ij` for `i < j`, packed row by row.
    c: Vec<T>,
    max_c: T,
}

impl<T: Real> GradientProblem<T> {
    /// `c_ij = |f_i - f_j| / d_ij^s` on a discrete space.
    pub fn new(space: &DiscreteSpace<T>, f: &WeightedSample<T>, s: T) -> Result<Self, HajlaszError> {
        if f.len() != space.len() {
            return Err(HajlaszError::LengthMismatch { expected: space.len(), got: f.len() });
        }
        if !(s > T::zero()) || !s.is_finite() {
            return Err(HajlaszError::InvalidExponent);
        }
        Self::from_distance_powers(&DistancePowers::new(space, s), f.values(), space.weights().to_vec())
    }

    pub fn from_distance_powers(dp: &DistancePowers<T>, f: &[T], weights: Vec<T>) -> Result<Self, HajlaszError> {
        let mut c = Vec::with_capacity(dp.len() * dp.len().saturating_sub(1) / 2);
        for (i, j, d) in dp.iter() {
            if d == T::zero() {
                if f[i] != f[j] {
                    return Err(HajlaszError::CoincidentPoints { i, j });
                }
                c.push(T::zero());
            } else {
                c.push(ratio(f[i], f[j], d));
            }
        }
        Self::from_constraints(weights, c)
    }

    /// Direct construction from packed `c_ij` (`i < j`, row by row).
    pub fn from_constraints(weights: Vec<T>, c: Vec<T>) -> Result<Self, HajlaszError> {
        let n = weights.len();
        if c.len() != n * n.saturating_sub(1) / 2 {
            return Err(HajlaszError::LengthMismatch { expected: n * n.saturating_sub(1) / 2, got: c.len() });
        }
        if let Some(i) = weights.iter().position(|w| !(*w > T::zero()) || !w.is_finite()) {
            return Err(HajlaszError::InvalidWeight { index: i });
        }
        if c.iter().any(|v| !(*v >= T::zero()) || !v.is_finite()) {
            return Err(HajlaszError::InvalidConstraint);
        }
        let max_c = c.iter().copied().fold(T::zero(), T::max);
        Ok(Self { weights, c, max_c })
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

    pub fn max_c(&self) -> T {
        self.max_c
    }

    /// `(i, j, c_ij)` for `i < j`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        let n = self.len();
        (0..n)
            .flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
            .zip(self.c.iter().copied())
            .map(|((i, j), c)| (i, j, c))
    }

    /// `max (c_ij - g_i - g_j)` over pairs (`-inf` for a single point).
    pub fn max_violation(&self, g: &[T]) -> T {
        self.pairs().map(|(i, j, c)| c - g[i] - g[j]).fold(T::neg_infinity(), T::max)
    }

    /// `g_i = (1/2) max_j c_ij`.
    pub fn canonical(&self) -> Vec<T> {
        let mut g = vec![T::zero(); self.len()];
        for (i, j, c) in self.pairs() {
            g[i] = g[i].max(c);
            g[j] = g[j].max(c);
        }
        g.iter().map(|&v| v * T::lit(0.5)).collect()
    }

    pub fn objective_value(&self, objective: Objective, g: &[T]) -> T {
        match objective {
            Objective::L1 => g.iter().zip(&self.weights).fold(T::zero(), |a, (&g, &w)| a + w * g),
            Objective::L2 => g.iter().zip(&self.weights).fold(T::zero(), |a, (&g, &w)| a + w * g * g).sqrt(),
            Objective::Linf => g.iter().copied().fold(T::zero(), T::max),
        }
    }

    /// Raises pairs of entries until every constraint holds exactly.
    pub(crate) fn repair(&self, g: &mut [T]) {
        for v in g.iter_mut() {
            if *v < T::zero() {
                *v = T::zero();
            }
        }
        for _ in 0..4 {
            let mut changed = false;
            for (i, j, c) in self.pairs() {
                let deficit = c - g[i] - g[j];
                if deficit > T::zero() {
                    let half = deficit * T::lit(0.5);
                    g[i] = g[i] + half;
                    g[j] = g[j] + (c - g[i] - g[j]).max(T::zero());
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }
}

/// Optimality evidence returned with a minimal gradient.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate<T> {
    /// LP duality: a dual-feasible `y` with value `dual_value`.
    Dual { dual_value: T, relative_gap: T, pivots: usize },
    /// KKT conditions of the quadratic program.
    Kkt { residual: T, relative_gap: T, active: usize, sweeps: usize },
    /// The pair `(i, j)` with `c_ij = max c` forces `max g >= c_ij / 2`.
    MaxPair { i: usize, j: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimalGradient<T> {
    pub g: Vec<T>,
    pub norm_value: T,
    pub certificate: Certificate<T>,
}

impl<T: Real> MinimalGradient<T> {
    pub fn to_sample(&self, weights: &[T]) -> WeightedSample<T> {
        WeightedSample::new(self.g.clone(), weights.to_vec()).expect("weights validated by the problem")
    }
}

/// Minimises the objective over `{g >= 0 : g_i + g_j >= c_ij}`.
pub fn minimal_gradient<T: Real>(
    problem: &GradientProblem<T>,
    objective: Objective,
    options: &SolverOptions,
) -> Result<MinimalGradient<T>, HajlaszError> {
    let n = problem.len();
    if n == 0 || problem.max_c == T::zero() {
        return Ok(MinimalGradient {
            g: vec![T::zero(); n],
            norm_value: T::zero(),
            certificate: Certificate::MaxPair { i: 0, j: 0 },
        });
    }
    match objective {
        Objective::Linf => {
            let (i, j, c) = problem
                .pairs()
                .fold((0, 0, T::neg_infinity()), |best, p| if p.2 > best.2 { p } else { best });
            let half = c * T::lit(0.5);
            Ok(MinimalGradient { g: vec![half; n], norm_value: half, certificate: Certificate::MaxPair { i, j } })
        }
        Objective::L1 => lp::solve(problem, options),
        Objective::L2 => qp::solve(problem, options),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_l1() {
        let p = GradientProblem::from_constraints(vec![1.0f64, 1.0], vec![1.0]).unwrap();
        let sol = minimal_gradient(&p, Objective::L1, &SolverOptions::default()).unwrap();
        assert!((sol.norm_value - 1.0).abs() < 1e-12);
        assert!(p.max_violation(&sol.g) <= 1e-12);
    }

    #[test]
    fn two_point_l2_splits_by_weight() {
        // min w0 g0^2 + w1 g1^2 with g0 + g1 = 1: g_i proportional to 1/w_i
        let p = GradientProblem::from_constraints(vec![1.0f64, 3.0], vec![1.0]).unwrap();
        let sol = minimal_gradient(&p, Objective::L2, &SolverOptions::default()).unwrap();
        assert!((sol.g[0] - 0.75).abs() < 1e-10 && (sol.g[1] - 0.25).abs() < 1e-10, "{:?}", sol.g);
    }

    #[test]
    fn linf_closed_form() {
        let p = GradientProblem::from_constraints(vec![1.0; 3], vec![0.3, 2.0, 0.7]).unwrap();
        let sol = minimal_gradient(&p, Objective::Linf, &SolverOptions::default()).unwrap();
        assert_eq!(sol.norm_value, 1.0);
        assert_eq!(sol.certificate, Certificate::MaxPair { i: 0, j: 2 });
    }

    #[test]
    fn zero_problem() {
        let p = GradientProblem::from_constraints(vec![1.0; 3], vec![0.0; 3]).unwrap();
        for obj in [Objective::L1, Objective::L2, Objective::Linf] {
            let sol = minimal_gradient(&p, obj, &SolverOptions::default()).unwrap();
            assert_eq!(sol.norm_value, 0.0);
        }
    }

    #[test]
    fn objective_from_spec() {
        assert_eq!(Objective::from_spec(&RiSpaceSpec::Lp(1.0)).unwrap(), Objective::L1);
        assert_eq!(Objective::from_spec(&RiSpaceSpec::Lp(f64::INFINITY)).unwrap(), Objective::Linf);
        assert!(Objective::from_spec(&RiSpaceSpec::<f64>::WeakLinf).is_err());
    }
}
