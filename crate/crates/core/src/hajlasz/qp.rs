//! Weighted-L2 minimal gradient: `min (1/2) sum w_i g_i^2` s.t. `g_i + g_j >= c_ij`.
//!
//! Hildreth's dual coordinate ascent on the pair multipliers `y`, with
//! `g = W^{-1} A^T y` kept in sync. Every few sweeps the support of `y` is
//! taken as the active set and the equality-constrained KKT system is solved
//! exactly; the result is accepted once it is primal and dual feasible. The
//! nonnegativity of `g` is implied by `c >= 0` and need not be imposed.

use crate::hajlasz::minimal::{Certificate, GradientProblem, MinimalGradient, Objective, SolverOptions};
use crate::hajlasz::HajlaszError;
use crate::scalar::Real;

const SWEEPS_PER_POLISH: usize = 16;
const ACTIVE_SET_ROUNDS: usize = 12;

struct Dual<T> {
    pairs: Vec<(usize, usize, T)>,
    winv: Vec<T>,
    y: Vec<T>,
    g: Vec<T>,
}

impl<T: Real> Dual<T> {
    fn sweep(&mut self) -> T {
        let mut moved = T::zero();
        for (k, &(i, j, c)) in self.pairs.iter().enumerate() {
            let step = (c - self.g[i] - self.g[j]) / (self.winv[i] + self.winv[j]);
            let next = (self.y[k] + step).max(T::zero());
            let delta = next - self.y[k];
            if delta != T::zero() {
                self.y[k] = next;
                self.g[i] = self.g[i] + delta * self.winv[i];
                self.g[j] = self.g[j] + delta * self.winv[j];
                moved = moved.max(delta.abs());
            }
        }
        moved
    }
}

/// Solves `M z = rhs` for symmetric positive semidefinite `M` by Gaussian
/// elimination with complete pivoting; unknowns on vanishing pivots are set
/// to zero. Returns `None` if the dropped equations are inconsistent.
fn solve_psd<T: Real>(mut m: Vec<T>, mut rhs: Vec<T>, n: usize) -> Option<Vec<T>> {
    let mut perm: Vec<usize> = (0..n).collect();
    let scale = (0..n).map(|i| m[i * n + i].abs()).fold(T::zero(), T::max).max(T::min_positive_value());
    let mut rank = n;
    for col in 0..n {
        let mut best = (col, col, T::zero());
        for r in col..n {
            for c in col..n {
                let v = m[r * n + c].abs();
                if v > best.2 {
                    best = (r, c, v);
                }
            }
        }
        if best.2 <= T::lit(1e-12) * scale {
            rank = col;
            break;
        }
        let (pr, pc, _) = best;
        if pr != col {
            for k in 0..n {
                m.swap(pr * n + k, col * n + k);
            }
            rhs.swap(pr, col);
        }
        if pc != col {
            for k in 0..n {
                m.swap(k * n + pc, k * n + col);
            }
            perm.swap(pc, col);
        }
        let d = m[col * n + col];
        for r in col + 1..n {
            let f = m[r * n + col] / d;
            if f == T::zero() {
                continue;
            }
            for k in col..n {
                m[r * n + k] = m[r * n + k] - f * m[col * n + k];
            }
            rhs[r] = rhs[r] - f * rhs[col];
        }
    }
    for &residual in &rhs[rank..n] {
        if residual.abs() > T::lit(1e-9) * (T::one() + scale) {
            return None;
        }
    }
    let mut z = vec![T::zero(); n];
    for r in (0..rank).rev() {
        let mut acc = rhs[r];
        for k in r + 1..rank {
            acc = acc - m[r * n + k] * z[k];
        }
        z[r] = acc / m[r * n + r];
    }
    let mut out = vec![T::zero(); n];
    for (slot, &p) in perm.iter().enumerate() {
        out[p] = z[slot];
    }
    Some(out)
}

/// Equality-constrained solve on `active`: returns `(y_active, g)`.
fn kkt_on<T: Real>(pairs: &[(usize, usize, T)], winv: &[T], active: &[usize]) -> Option<(Vec<T>, Vec<T>)> {
    let a = active.len();
    let mut m = vec![T::zero(); a * a];
    let mut rhs = vec![T::zero(); a];
    for (r, &k) in active.iter().enumerate() {
        let (i, j, c) = pairs[k];
        rhs[r] = c;
        for (s, &l) in active.iter().enumerate() {
            let (p, q, _) = pairs[l];
            let mut v = T::zero();
            if i == p || i == q {
                v = v + winv[i];
            }
            if j == p || j == q {
                v = v + winv[j];
            }
            m[r * a + s] = v;
        }
    }
    let y = solve_psd(m, rhs, a)?;
    let mut g = vec![T::zero(); winv.len()];
    for (&k, &yk) in active.iter().zip(&y) {
        let (i, j, _) = pairs[k];
        g[i] = g[i] + yk * winv[i];
        g[j] = g[j] + yk * winv[j];
    }
    Some((y, g))
}

/// Primal-dual active-set refinement from a starting support. Returns the
/// full multiplier vector and `g` when a KKT point is reached.
fn polish<T: Real>(pairs: &[(usize, usize, T)], winv: &[T], start: &[T], tol: T) -> Option<(Vec<T>, Vec<T>)> {
    let mut active: Vec<usize> = (0..pairs.len()).filter(|&k| start[k] > T::zero()).collect();
    for _ in 0..ACTIVE_SET_ROUNDS {
        let (ya, g) = kkt_on(pairs, winv, &active)?;
        let negative: Vec<usize> = active
            .iter()
            .zip(&ya)
            .filter(|(_, &y)| y < -tol)
            .map(|(&k, _)| k)
            .collect();
        let violated: Vec<usize> = (0..pairs.len())
            .filter(|&k| {
                let (i, j, c) = pairs[k];
                c - g[i] - g[j] > tol
            })
            .collect();
        if negative.is_empty() && violated.is_empty() {
            let mut y = vec![T::zero(); pairs.len()];
            for (&k, &v) in active.iter().zip(&ya) {
                y[k] = v.max(T::zero());
            }
            return Some((y, g));
        }
        active.retain(|k| !negative.contains(k));
        for k in violated {
            if !active.contains(&k) {
                active.push(k);
            }
        }
        active.sort_unstable();
    }
    None
}

pub(crate) fn solve<T: Real>(
    problem: &GradientProblem<T>,
    options: &SolverOptions,
) -> Result<MinimalGradient<T>, HajlaszError> {
    let c_scale = problem.max_c();
    let w_scale = problem.weights().iter().copied().fold(T::zero(), T::max);
    let pairs: Vec<(usize, usize, T)> = problem
        .pairs()
        .filter(|p| p.2 > T::zero())
        .map(|(i, j, c)| (i, j, c / c_scale))
        .collect();
    let winv: Vec<T> = problem.weights().iter().map(|&w| w_scale / w).collect();
    let mut dual = Dual { y: vec![T::zero(); pairs.len()], g: vec![T::zero(); winv.len()], pairs, winv };
    let tol = T::lit(1e-12);

    let mut sweeps = 0;
    let mut solution = None;
    while sweeps < options.max_iterations {
        let mut moved = T::zero();
        for _ in 0..SWEEPS_PER_POLISH {
            moved = dual.sweep();
            sweeps += 1;
        }
        if let Some(found) = polish(&dual.pairs, &dual.winv, &dual.y, tol) {
            solution = Some(found);
            break;
        }
        if moved == T::zero() {
            break;
        }
    }

    let (y, g_scaled) = match solution {
        Some(s) => s,
        None => {
            let mut g: Vec<T> = dual.g.iter().map(|&v| v * c_scale).collect();
            problem.repair(&mut g);
            return Err(HajlaszError::NotConverged {
                iterations: sweeps,
                residual: problem.max_violation(&dual.g.iter().map(|&v| v * c_scale).collect::<Vec<_>>()).to_f64_lossy(),
                best: g.iter().map(|v| v.to_f64_lossy()).collect(),
            });
        }
    };

    // KKT residual in scaled units: primal violation, dual sign, complementarity
    let mut residual = T::zero();
    let mut complementarity = T::zero();
    for (k, &(i, j, c)) in dual.pairs.iter().enumerate() {
        let slack = g_scaled[i] + g_scaled[j] - c;
        residual = residual.max(-slack).max((y[k] * slack).abs());
        complementarity = complementarity + y[k] * slack;
    }
    let mut g: Vec<T> = g_scaled.iter().map(|&v| v * c_scale).collect();
    problem.repair(&mut g);
    let norm_value = problem.objective_value(Objective::L2, &g);
    let energy = g_scaled.iter().zip(&dual.winv).fold(T::zero(), |a, (&g, &wi)| a + g * g / wi);
    let relative_gap = complementarity.abs() / energy.max(T::min_positive_value());
    if relative_gap > T::lit(options.objective_tol) {
        return Err(HajlaszError::NotConverged {
            iterations: sweeps,
            residual: relative_gap.to_f64_lossy(),
            best: g.iter().map(|v| v.to_f64_lossy()).collect(),
        });
    }
    let active = y.iter().filter(|&&v| v > T::zero()).count();
    Ok(MinimalGradient { g, norm_value, certificate: Certificate::Kkt { residual, relative_gap, active, sweeps } })
}
