use rayon::prelude::*;
use serde::Serialize;

use crate::hajlasz::GradientPair;
use crate::scalar::{pow, Real};
use crate::verify::{admissible_range, safe_ratio, VerifyError};

/// Inputs of the oscillation inequality besides the gradient pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillationParams<T> {
    /// Lower-growth exponent of the measure.
    pub alpha: T,
    /// Exponent in `(0, 1]`.
    pub p: T,
    /// Almost-continuity constant, at least 1.
    pub c: T,
    /// Relative slack on the theoretical constant.
    pub slack: T,
}

impl<T: Real> OscillationParams<T> {
    pub fn new(alpha: T, p: T, c: T) -> Self {
        Self { alpha, p, c, slack: T::lit(0.1) }
    }

    fn validate(&self) -> Result<(), VerifyError> {
        if !(self.alpha > T::zero()) || !self.alpha.is_finite() {
            return Err(VerifyError::Parameter("alpha must be positive"));
        }
        if !(self.p > T::zero() && self.p <= T::one()) {
            return Err(VerifyError::Parameter("p must lie in (0, 1]"));
        }
        if !(self.c >= T::one()) || !self.c.is_finite() {
            return Err(VerifyError::Parameter("c must be at least 1"));
        }
        if !(self.slack >= T::zero()) {
            return Err(VerifyError::Parameter("slack must be nonnegative"));
        }
        Ok(())
    }
}

/// Labels carried into the report for traceability.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ReportIds {
    pub space: String,
    pub f: String,
    pub g: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheoreticalConstant<T> {
    pub value: T,
    pub formula: &'static str,
}

/// Per-`t` comparison of `((|f|^p)** - (|f|^p)*)^{1/p}` against
/// `t^{s/alpha} ((g^p)**)^{1/p}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport<T> {
    pub t_grid: Vec<T>,
    pub lhs: Vec<T>,
    pub rhs: Vec<T>,
    /// `lhs / rhs`, with `0 / 0 = 0`.
    pub ratio: Vec<T>,
    /// `max ratio`.
    pub empirical_constant: T,
    pub theoretical_constant: TheoreticalConstant<T>,
    /// `empirical_constant <= theoretical * (1 + slack)`.
    pub pass: bool,
    pub s: T,
    pub params: OscillationParams<T>,
    pub ids: ReportIds,
}

impl<T: Real> InequalityReport<T> {
    /// Threshold the empirical constant is compared against.
    pub fn threshold(&self) -> T {
        self.theoretical_constant.value * (T::one() + self.params.slack)
    }

    /// Recomputes `pass` from the stored arrays.
    pub fn recheck(&self) -> bool {
        let threshold = self.threshold();
        self.lhs.iter().zip(&self.rhs).all(|(&l, &r)| safe_ratio(l, r) <= threshold)
    }

    /// Index of the `t` attaining the empirical constant.
    pub fn worst(&self) -> Option<usize> {
        self.ratio.iter().position(|&r| r == self.empirical_constant)
    }
}

/// `(c 2^{s/alpha + 1})^{1/p}`.
pub fn oscillation_constant<T: Real>(s: T, alpha: T, p: T, c: T) -> T {
    pow(c * T::lit(2.0).powf(s / alpha + T::one()), p.recip())
}

/// Evaluates the oscillation inequality on `t_grid`, which must lie inside
/// `[10 * smallest atom, total mass / 2]`.
pub fn oscillation_inequality_report<T: Real>(
    pair: &GradientPair<T>,
    params: OscillationParams<T>,
    t_grid: &[T],
    ids: ReportIds,
) -> Result<InequalityReport<T>, VerifyError> {
    params.validate()?;
    if t_grid.is_empty() {
        return Err(VerifyError::Parameter("t grid is empty"));
    }
    let (lo, hi) = admissible_range(pair.f().weights())?;
    if let Some(&t) = t_grid.iter().find(|&&t| !(t >= lo && t <= hi)) {
        return Err(VerifyError::OutOfRange { t: t.to_f64_lossy(), lo: lo.to_f64_lossy(), hi: hi.to_f64_lossy() });
    }
    let s = pair.s();
    let p = params.p;
    let sigma = s / params.alpha;
    let fp = pair.f().abs_pow(p);
    let fp_star = fp.decreasing_rearrangement();
    let gp_star = pair.g().abs_pow(p).decreasing_rearrangement();
    let inv_p = p.recip();

    let sides: Vec<(T, T)> = t_grid
        .par_iter()
        .map(|&t| {
            // cross-checked against the level-set identity inside oscillation_with
            let osc = fp.oscillation_with(&fp_star, t)?;
            let lhs = pow(osc, inv_p);
            let rhs = t.powf(sigma) * pow(gp_star.double_star(t)?, inv_p);
            Ok((lhs, rhs))
        })
        .collect::<Result<_, VerifyError>>()?;
    let (lhs, rhs): (Vec<T>, Vec<T>) = sides.into_iter().unzip();
    let ratio: Vec<T> = lhs.iter().zip(&rhs).map(|(&l, &r)| safe_ratio(l, r)).collect();
    let empirical_constant = ratio.iter().copied().fold(T::zero(), T::max);
    let theoretical_constant = TheoreticalConstant {
        value: oscillation_constant(s, params.alpha, p, params.c),
        formula: "(c * 2^(s/alpha + 1))^(1/p)",
    };
    let pass = empirical_constant <= theoretical_constant.value * (T::one() + params.slack);
    Ok(InequalityReport {
        t_grid: t_grid.to_vec(),
        lhs,
        rhs,
        ratio,
        empirical_constant,
        theoretical_constant,
        pass,
        s,
        params,
        ids,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hajlasz::{canonical_gradient, TestFunction};
    use crate::space::generate::uniform_grid;
    use crate::space::almost_continuity_check;
    use crate::verify::admissible_grid;

    #[test]
    fn constant_function_has_zero_lhs() {
        let grid = uniform_grid::<f64>(2, 16, 0.0, 2.0).unwrap();
        let f = grid.sample(vec![3.0; grid.len()]).unwrap();
        let pair = canonical_gradient(&grid, &f, 1.0).unwrap();
        let t = admissible_grid(grid.weights(), 16).unwrap();
        let rep = oscillation_inequality_report(&pair, OscillationParams::new(2.0, 1.0, 2.0), &t, ReportIds::default())
            .unwrap();
        assert!(rep.lhs.iter().all(|&v| v == 0.0));
        assert_eq!(rep.empirical_constant, 0.0);
        assert!(rep.pass && rep.recheck());
    }

    #[test]
    fn rejects_out_of_range_and_bad_params() {
        let grid = uniform_grid::<f64>(2, 8, 0.0, 2.0).unwrap();
        let f = grid.sample((0..grid.len()).map(|i| i as f64).collect()).unwrap();
        let pair = canonical_gradient(&grid, &f, 1.0).unwrap();
        let ok = OscillationParams::new(2.0, 1.0, 2.0);
        assert!(matches!(
            oscillation_inequality_report(&pair, ok, &[1e-3], ReportIds::default()),
            Err(VerifyError::OutOfRange { .. })
        ));
        assert!(oscillation_inequality_report(&pair, ok, &[3.0], ReportIds::default()).is_err());
        let bad_p = OscillationParams::new(2.0, 1.5, 2.0);
        assert!(oscillation_inequality_report(&pair, bad_p, &[1.0], ReportIds::default()).is_err());
    }

    #[test]
    fn constant_formula() {
        assert!((oscillation_constant(1.0f64, 2.0, 1.0, 1.0) - 2f64.powf(1.5)).abs() < 1e-14);
        assert!((oscillation_constant(1.0f64, 2.0, 0.5, 2.0) - (2.0 * 2f64.powf(1.5)).powi(2)).abs() < 1e-12);
    }

    #[test]
    fn cone_on_grid_passes() {
        let grid = uniform_grid::<f64>(2, 32, 0.0, 2.0).unwrap();
        let center = grid.nearest_point(&[1.0, 1.0]).unwrap();
        let tf = TestFunction::new(0.6, 1.0).unwrap();
        let (f, g) = tf.sample(&grid, center).unwrap();
        let pair = crate::hajlasz::verify_gradient(&grid, f, g, 1.0, 1e-12).unwrap();
        let t = admissible_grid(grid.weights(), 32).unwrap();
        let centers: Vec<usize> = (0..grid.len()).step_by(37).collect();
        let c = almost_continuity_check(&grid, 1.5, &t, &centers).unwrap().max_required_c.max(1.0);
        let rep = oscillation_inequality_report(&pair, OscillationParams::new(2.0, 1.0, c), &t, ReportIds::default())
            .unwrap();
        assert!(rep.pass, "{} vs {}", rep.empirical_constant, rep.threshold());
        assert_eq!(rep.pass, rep.recheck());
        assert!(rep.lhs.iter().zip(&rep.rhs).all(|(&l, &r)| l >= 0.0 && (l == 0.0 || r > 0.0)));
    }
}
