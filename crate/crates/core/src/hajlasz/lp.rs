//! Weighted-L1 minimal gradient by the revised simplex method on the dual.
//!
//! Primal: `min w.g` s.t. `g_i + g_j >= c_ij`, `g >= 0`.
//! Dual:   `max c.y` s.t. `sum_{k ∋ i} y_k <= w_i`, `y >= 0`.
//!
//! The dual starts feasible at the slack basis. Every structural column has
//! two nonzeros, so pricing a pair costs O(1) given the simplex multipliers,
//! which are exactly the primal `g`.

use crate::hajlasz::minimal::{Certificate, GradientProblem, MinimalGradient, SolverOptions};
use crate::hajlasz::HajlaszError;
use crate::scalar::Real;

const REFACTOR_EVERY: usize = 64;
const DEGENERATE_SWITCH: usize = 32;

struct Revised<T> {
    n: usize,
    /// Pair endpoints and scaled `c` of each structural column.
    cols: Vec<(usize, usize, T)>,
    /// Basic variable per row: `< cols.len()` structural, else slack `v - cols.len()`.
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    binv: Vec<T>,
    x: Vec<T>,
    w: Vec<T>,
}

impl<T: Real> Revised<T> {
    fn column(&self, var: usize) -> ColumnRef<T> {
        if var < self.cols.len() {
            let (i, j, c) = self.cols[var];
            ColumnRef { rows: [i, j], count: 2, cost: c }
        } else {
            ColumnRef { rows: [var - self.cols.len(), 0], count: 1, cost: T::zero() }
        }
    }

    /// `pi = c_B^T B^{-1}`.
    fn multipliers(&self) -> Vec<T> {
        let n = self.n;
        let mut pi = vec![T::zero(); n];
        for r in 0..n {
            let cost = self.column(self.basis[r]).cost;
            if cost != T::zero() {
                let row = &self.binv[r * n..(r + 1) * n];
                for (p, &b) in pi.iter_mut().zip(row) {
                    *p = *p + cost * b;
                }
            }
        }
        pi
    }

    /// `B^{-1} a_var`.
    fn ftran(&self, var: usize) -> Vec<T> {
        let n = self.n;
        let col = self.column(var);
        (0..n)
            .map(|r| {
                let row = &self.binv[r * n..(r + 1) * n];
                let mut v = row[col.rows[0]];
                if col.count == 2 {
                    v = v + row[col.rows[1]];
                }
                v
            })
            .collect()
    }

    fn pivot(&mut self, r: usize, alpha: &[T], theta: T, entering: usize) {
        let n = self.n;
        let pivot = alpha[r];
        for (k, x) in self.x.iter_mut().enumerate() {
            if k != r {
                *x = *x - theta * alpha[k];
                if *x < T::zero() {
                    *x = T::zero();
                }
            }
        }
        self.x[r] = theta;
        let pivot_row: Vec<T> = self.binv[r * n..(r + 1) * n].iter().map(|&v| v / pivot).collect();
        for (k, &factor) in alpha.iter().enumerate().take(n) {
            if k == r || factor == T::zero() {
                continue;
            }
            let row = &mut self.binv[k * n..(k + 1) * n];
            for (b, &p) in row.iter_mut().zip(&pivot_row) {
                *b = *b - factor * p;
            }
        }
        self.binv[r * n..(r + 1) * n].copy_from_slice(&pivot_row);
        self.in_basis[self.basis[r]] = false;
        self.in_basis[entering] = true;
        self.basis[r] = entering;
    }

    /// Rebuilds `B^{-1}` and `x_B` from the basis by Gauss-Jordan elimination.
    fn refactor(&mut self) -> bool {
        let n = self.n;
        let mut b = vec![T::zero(); n * n];
        for (r, &var) in self.basis.iter().enumerate() {
            let col = self.column(var);
            for &row in &col.rows[..col.count] {
                b[row * n + r] = T::one();
            }
        }
        let Some(inv) = invert(&b, n) else { return false };
        self.binv = inv;
        for r in 0..n {
            let row = &self.binv[r * n..(r + 1) * n];
            let v = row.iter().zip(&self.w).fold(T::zero(), |a, (&b, &w)| a + b * w);
            self.x[r] = if v < T::zero() { T::zero() } else { v };
        }
        true
    }
}

struct ColumnRef<T> {
    rows: [usize; 2],
    count: usize,
    cost: T,
}

/// Dense inverse with partial pivoting; `None` when singular.
fn invert<T: Real>(a: &[T], n: usize) -> Option<Vec<T>> {
    let mut m = a.to_vec();
    let mut inv = vec![T::zero(); n * n];
    for i in 0..n {
        inv[i * n + i] = T::one();
    }
    for col in 0..n {
        let (p, best) = (col..n)
            .map(|r| (r, m[r * n + col].abs()))
            .fold((col, T::zero()), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= T::lit(1e-13) {
            return None;
        }
        if p != col {
            for k in 0..n {
                m.swap(p * n + k, col * n + k);
                inv.swap(p * n + k, col * n + k);
            }
        }
        let d = m[col * n + col];
        for k in 0..n {
            m[col * n + k] = m[col * n + k] / d;
            inv[col * n + k] = inv[col * n + k] / d;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = m[r * n + col];
            if f == T::zero() {
                continue;
            }
            for k in 0..n {
                m[r * n + k] = m[r * n + k] - f * m[col * n + k];
                inv[r * n + k] = inv[r * n + k] - f * inv[col * n + k];
            }
        }
    }
    Some(inv)
}

pub(crate) fn solve<T: Real>(
    problem: &GradientProblem<T>,
    options: &SolverOptions,
) -> Result<MinimalGradient<T>, HajlaszError> {
    let n = problem.len();
    let c_scale = problem.max_c();
    let w_scale = problem.weights().iter().copied().fold(T::zero(), T::max);
    let cols: Vec<(usize, usize, T)> = problem
        .pairs()
        .filter(|p| p.2 > T::zero())
        .map(|(i, j, c)| (i, j, c / c_scale))
        .collect();
    let m = cols.len();
    let w: Vec<T> = problem.weights().iter().map(|&v| v / w_scale).collect();
    let mut binv = vec![T::zero(); n * n];
    for i in 0..n {
        binv[i * n + i] = T::one();
    }
    let mut lp = Revised {
        n,
        basis: (m..m + n).collect(),
        in_basis: (0..m + n).map(|v| v >= m).collect(),
        cols,
        binv,
        x: w.clone(),
        w,
    };

    let eps = T::lit(1e-11);
    let mut degenerate_run = 0usize;
    let mut pivots = 0usize;
    let mut optimal = false;
    while pivots < options.max_iterations {
        let pi = lp.multipliers();
        // pricing: reduced cost c_v - pi^T a_v, positive means improving
        let bland = degenerate_run >= DEGENERATE_SWITCH;
        let mut entering = None;
        let mut best = eps;
        for v in 0..m + n {
            if lp.in_basis[v] {
                continue;
            }
            let d = if v < m {
                let (i, j, c) = lp.cols[v];
                c - pi[i] - pi[j]
            } else {
                -pi[v - m]
            };
            if d > best {
                entering = Some(v);
                if bland {
                    break;
                }
                best = d;
            }
        }
        let Some(e) = entering else {
            optimal = true;
            break;
        };
        let alpha = lp.ftran(e);
        let mut leave: Option<(usize, T)> = None;
        for r in 0..n {
            if alpha[r] > T::lit(1e-12) {
                let ratio = lp.x[r] / alpha[r];
                let better = match leave {
                    None => true,
                    Some((lr, lt)) => {
                        ratio < lt - T::lit(1e-14)
                            || (ratio <= lt + T::lit(1e-14)
                                && if bland { lp.basis[r] < lp.basis[lr] } else { alpha[r] > alpha[lr] })
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        // the dual region is bounded (y_k <= min(w_i, w_j)), so a leaving row exists
        let Some((r, theta)) = leave else {
            return Err(HajlaszError::NotConverged {
                iterations: pivots,
                residual: f64::INFINITY,
                best: problem.canonical().iter().map(|v| v.to_f64_lossy()).collect(),
            });
        };
        degenerate_run = if theta <= T::lit(1e-14) { degenerate_run + 1 } else { 0 };
        lp.pivot(r, &alpha, theta, e);
        pivots += 1;
        if pivots.is_multiple_of(REFACTOR_EVERY) && !lp.refactor() {
            break;
        }
    }

    lp.refactor();
    let pi = lp.multipliers();
    let mut g: Vec<T> = pi.iter().map(|&p| p.max(T::zero()) * c_scale).collect();
    problem.repair(&mut g);
    let primal = problem.objective_value(crate::hajlasz::Objective::L1, &g);
    let dual = lp
        .basis
        .iter()
        .zip(&lp.x)
        .filter(|(&v, _)| v < m)
        .fold(T::zero(), |a, (&v, &x)| a + lp.cols[v].2 * x)
        * c_scale
        * w_scale;
    let relative_gap = (primal - dual).abs() / primal.max(T::min_positive_value());
    if !optimal || relative_gap > T::lit(options.objective_tol) {
        return Err(HajlaszError::NotConverged {
            iterations: pivots,
            residual: relative_gap.to_f64_lossy(),
            best: g.iter().map(|v| v.to_f64_lossy()).collect(),
        });
    }
    Ok(MinimalGradient {
        g,
        norm_value: primal,
        certificate: Certificate::Dual { dual_value: dual, relative_gap, pivots },
    })
}
