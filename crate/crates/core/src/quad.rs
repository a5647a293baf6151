//! Fixed-order Gauss-Legendre rule.
//!
//! Only used on compact intervals where the integrand is analytic with its
//! nearest singularity at least one interval-length away, where 20 nodes
//! already reach rounding level.

use std::sync::OnceLock;

use crate::scalar::Real;

const ORDER: usize = 20;

fn nodes() -> &'static [(f64, f64)] {
    static NODES: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    NODES.get_or_init(|| legendre_nodes(ORDER))
}

/// Nodes and weights on `[-1, 1]` by Newton iteration on `P_n`.
pub(crate) fn legendre_nodes(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// `int_a^b f` with `pieces` equal sub-intervals of the 20-point rule.
pub(crate) fn gauss_legendre<T: Real>(f: impl Fn(T) -> T, a: T, b: T, pieces: usize) -> T {
    let pieces = pieces.max(1);
    let width = (b - a) / T::from_usize_lossy(pieces);
    let half = width / T::lit(2.0);
    let mut acc = T::zero();
    for p in 0..pieces {
        let mid = a + width * T::from_usize_lossy(p) + half;
        for &(x, w) in nodes() {
            acc = acc + T::lit(w) * f(mid + half * T::lit(x));
        }
    }
    acc * half
}
