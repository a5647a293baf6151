use std::fmt;

use serde::Serialize;

use crate::hajlasz::GradientPair;
use crate::quad::gauss_legendre;
use crate::rearrange::StepFunction;
use crate::rinorm::{BoydIndices, RiSpaceSpec};
use crate::scalar::{pow, Real};
use crate::verify::{safe_ratio, VerifyError};

/// Regime of the embedding, fixed by `sigma = s / alpha` and the Boyd
/// indices of `X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingCase {
    /// `sigma < 1` below the lower index: `||t^{-sigma} f**|| <~ ||g||_X`.
    Sobolev,
    /// `X = Lp` with `1/p = sigma`: logarithmic refinement on `(0, 1)`.
    Logarithmic,
    /// `sigma < 1` above the upper index: `f` is bounded.
    Bounded,
    /// `sigma = 1`: `sup phi_X(t) (f** - f*)(t) / t <~ ||g||_X`.
    Critical,
    /// `sigma > 1`: `f` is bounded.
    Supercritical,
}

impl fmt::Display for EmbeddingCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EmbeddingCase::Sobolev => "sobolev",
            EmbeddingCase::Logarithmic => "logarithmic",
            EmbeddingCase::Bounded => "bounded",
            EmbeddingCase::Critical => "critical",
            EmbeddingCase::Supercritical => "supercritical",
        })
    }
}

impl std::str::FromStr for EmbeddingCase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "sobolev" => Ok(EmbeddingCase::Sobolev),
            "logarithmic" => Ok(EmbeddingCase::Logarithmic),
            "bounded" => Ok(EmbeddingCase::Bounded),
            "critical" => Ok(EmbeddingCase::Critical),
            "supercritical" => Ok(EmbeddingCase::Supercritical),
            other => Err(format!("unknown embedding case `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddingReport<T> {
    pub case: EmbeddingCase,
    pub s: T,
    pub alpha: T,
    pub sigma: T,
    pub boyd_lower: T,
    pub boyd_upper: T,
    pub lhs: T,
    pub rhs: T,
    /// `lhs / rhs`, with `0 / 0 = 0`.
    pub empirical_constant: T,
    /// Divergence flag of `||t^{-sigma} f**||_X` where that functional is
    /// defined (Lorentz-type `X`, `0 < sigma < 1`).
    pub doublestar_divergent: Option<bool>,
    /// `alpha p / (alpha - s p)` for `X = Lp` below the critical exponent.
    pub p_star: Option<T>,
    /// `||g||_X`.
    pub g_norm: T,
    /// `||f||_{L^1 + L^inf}`.
    pub f_l1_linf: T,
    /// `||f||_{L^inf}`.
    pub f_sup: T,
}

const SIGMA_TOL: f64 = 1e-12;

fn close<T: Real>(a: T, b: T) -> bool {
    (a - b).abs() <= T::lit(SIGMA_TOL) * a.abs().max(b.abs()).max(T::one())
}

fn select<T: Real>(sigma: T, spec: &RiSpaceSpec<T>, boyd: BoydIndices<T>) -> Result<EmbeddingCase, String> {
    if close(sigma, T::one()) {
        return Ok(EmbeddingCase::Critical);
    }
    if sigma > T::one() {
        return Ok(EmbeddingCase::Supercritical);
    }
    if let RiSpaceSpec::Lp(p) = *spec {
        if close(p.recip(), sigma) {
            return Ok(EmbeddingCase::Logarithmic);
        }
    }
    if boyd.lower > sigma {
        Ok(EmbeddingCase::Sobolev)
    } else if boyd.upper < sigma {
        Ok(EmbeddingCase::Bounded)
    } else {
        Err(format!(
            "s/alpha = {sigma} lies between the Boyd indices [{}, {}] of {spec}, where no case applies",
            boyd.lower, boyd.upper
        ))
    }
}

/// `(int_0^1 (f**(t) / (1 + ln(1/t)))^p dt/t)^{1/p}` for `p > 1`.
///
/// On the first step `f**` is constant and the integral is closed form;
/// later steps are integrated in `u = ln(1/t)`, where the integrand is smooth.
pub fn log_weighted_norm<T: Real>(fs: &StepFunction<T>, p: T) -> Result<T, VerifyError> {
    if !(p > T::one()) || !p.is_finite() {
        return Err(VerifyError::Parameter("log-weighted norm needs finite p > 1"));
    }
    if fs.is_zero() {
        return Ok(T::zero());
    }
    let ds = fs.double_star_piecewise();
    let first = ds.pieces()[0];
    let t1 = first.hi.min(T::one());
    let u1 = T::one() - t1.ln();
    let mut acc = pow(first.a, p) * u1.powf(T::one() - p) / (p - T::one());
    for piece in &ds.pieces()[1..] {
        let lo = piece.lo.max(t1);
        let hi = piece.hi.min(T::one());
        if !(hi > lo) {
            continue;
        }
        let (u_lo, u_hi) = (-hi.ln(), -lo.ln());
        acc = acc + gauss_legendre(|u: T| pow(piece.eval((-u).exp()) / (T::one() + u), p), u_lo, u_hi, 2);
    }
    Ok(pow(acc, p.recip()))
}

/// Evaluates the embedding inequality selected by `s / alpha` and the Boyd
/// indices of `spec`. When `requested` is given it must match the selection.
pub fn embedding_report<T: Real>(
    pair: &GradientPair<T>,
    alpha: T,
    spec: &RiSpaceSpec<T>,
    requested: Option<EmbeddingCase>,
) -> Result<EmbeddingReport<T>, VerifyError> {
    if !(alpha > T::zero()) || !alpha.is_finite() {
        return Err(VerifyError::Parameter("alpha must be positive"));
    }
    spec.validate()?;
    let s = pair.s();
    let sigma = s / alpha;
    let boyd = spec.boyd_indices();
    let case = match (select(sigma, spec, boyd), requested) {
        (Ok(case), None) => case,
        (Ok(case), Some(r)) if case == r => case,
        (Ok(case), Some(r)) => {
            return Err(VerifyError::CaseMismatch {
                requested: r,
                diagnosis: format!(
                    "s/alpha = {sigma} with Boyd indices [{}, {}] of {spec} selects {case}",
                    boyd.lower, boyd.upper
                ),
            })
        }
        (Err(diagnosis), Some(r)) => return Err(VerifyError::CaseMismatch { requested: r, diagnosis }),
        (Err(diagnosis), None) => return Err(VerifyError::Undetermined(diagnosis)),
    };

    let fs = pair.f().decreasing_rearrangement();
    let gs = pair.g().decreasing_rearrangement();
    let g_norm = spec.norm(&gs);
    let f_l1_linf = fs.integral_to(T::one());
    let f_sup = fs.sup();
    let doublestar = if sigma > T::zero() && sigma < T::one() && spec.lorentz_exponents().is_ok() {
        spec.norm_doublestar(&fs, sigma).ok()
    } else {
        None
    };
    let (lhs, rhs) = match case {
        EmbeddingCase::Sobolev => {
            let d = spec.norm_doublestar(&fs, sigma)?;
            (d.value, g_norm)
        }
        EmbeddingCase::Logarithmic => {
            let RiSpaceSpec::Lp(p) = *spec else { unreachable!("selected only for Lp") };
            (log_weighted_norm(&fs, p)?, g_norm + f_l1_linf)
        }
        EmbeddingCase::Bounded | EmbeddingCase::Supercritical => (f_sup, g_norm + f_l1_linf),
        EmbeddingCase::Critical => {
            // phi_X(t)/t is nonincreasing and f** - f* is b/t on each step,
            // so the supremum sits at a left step end
            let mut sup = T::zero();
            for &t in fs.breakpoints().iter().skip(1) {
                let v = spec.fundamental_function(t)? * fs.oscillation_at(t)? / t;
                sup = sup.max(v);
            }
            (sup, g_norm)
        }
    };
    let p_star = match *spec {
        RiSpaceSpec::Lp(p) if p.is_finite() && p.recip() > sigma => Some(alpha * p / (alpha - s * p)),
        _ => None,
    };
    Ok(EmbeddingReport {
        case,
        s,
        alpha,
        sigma,
        boyd_lower: boyd.lower,
        boyd_upper: boyd.upper,
        lhs,
        rhs,
        empirical_constant: safe_ratio(lhs, rhs),
        doublestar_divergent: doublestar.map(|d| d.divergent),
        p_star,
        g_norm,
        f_l1_linf,
        f_sup,
    })
}
