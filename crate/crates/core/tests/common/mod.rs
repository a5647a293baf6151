//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's numerical routines.
#![allow(dead_code, clippy::needless_range_loop, clippy::too_many_arguments)]

/// Dense `A x = b` by Gaussian elimination with partial pivoting.
pub fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[p][col].abs() < 1e-12 {
            return None;
        }
        a.swap(p, col);
        b.swap(p, col);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for k in col..n {
                a[r][k] -= f * a[col][k];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| a[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

fn feasible(n: usize, c: &[f64], g: &[f64], tol: f64) -> bool {
    g.iter().all(|&v| v >= -tol) && pairs(n).iter().zip(c).all(|(&(i, j), &cij)| g[i] + g[j] >= cij - tol)
}

fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    rec(0, m, k, &mut cur, &mut out);
    out
}

/// `min w.g` over `g >= 0, g_i + g_j >= c_ij` by enumerating every basic
/// solution (n tight constraints among pairs and sign bounds).
pub fn l1_vertex_oracle(w: &[f64], c: &[f64]) -> f64 {
    let n = w.len();
    let ps = pairs(n);
    let m = ps.len() + n;
    let mut best = f64::INFINITY;
    for subset in combinations(m, n) {
        let mut a = Vec::with_capacity(n);
        let mut b = Vec::with_capacity(n);
        for &k in &subset {
            let mut row = vec![0.0; n];
            if k < ps.len() {
                row[ps[k].0] = 1.0;
                row[ps[k].1] = 1.0;
                b.push(c[k]);
            } else {
                row[k - ps.len()] = 1.0;
                b.push(0.0);
            }
            a.push(row);
        }
        if let Some(g) = solve_dense(a, b) {
            if feasible(n, c, &g, 1e-10) {
                best = best.min(w.iter().zip(&g).map(|(w, g)| w * g).sum());
            }
        }
    }
    best
}

/// `min (sum w g^2)^{1/2}` over `g_i + g_j >= c_ij`: the optimum solves the
/// equality-constrained problem on its active set, so the smallest feasible
/// equality solution over all pair subsets is the optimum.
pub fn l2_active_set_oracle(w: &[f64], c: &[f64]) -> f64 {
    let n = w.len();
    let ps = pairs(n);
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << ps.len()) {
        let active: Vec<usize> = (0..ps.len()).filter(|k| mask >> k & 1 == 1).collect();
        let size = n + active.len();
        // KKT: W g - A^T y = 0, A g = c
        let mut a = vec![vec![0.0; size]; size];
        let mut b = vec![0.0; size];
        for i in 0..n {
            a[i][i] = w[i];
        }
        for (r, &k) in active.iter().enumerate() {
            let (i, j) = ps[k];
            a[i][n + r] = -1.0;
            a[j][n + r] = -1.0;
            a[n + r][i] = 1.0;
            a[n + r][j] = 1.0;
            b[n + r] = c[k];
        }
        if let Some(x) = solve_dense(a, b) {
            let g = &x[..n];
            if feasible(n, c, g, 1e-10) {
                best = best.min(w.iter().zip(g).map(|(w, g)| w * g * g).sum::<f64>().sqrt());
            }
        }
    }
    best
}

/// Tanh-sinh quadrature on `[a, b]` (endpoint singularities allowed).
pub fn tanh_sinh(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut prev = f64::NAN;
    let mut h = 0.5;
    for _ in 0..12 {
        let mut sum = 0.0;
        let mut k = 0i64;
        loop {
            let t = k as f64 * h;
            let u = std::f64::consts::FRAC_PI_2 * t.sinh();
            let x = u.tanh();
            let wgt = std::f64::consts::FRAC_PI_2 * t.cosh() / u.cosh().powi(2);
            // distance to the endpoints computed without cancellation
            let dist = half / (u.exp().powi(2) + 1.0) * if u > 0.0 { 2.0 } else { 2.0 * u.exp().powi(2) };
            if wgt < 1e-300 || dist <= f64::MIN_POSITIVE * half {
                break;
            }
            let xp = if u > 0.0 { b - dist } else { mid + half * x };
            let xm = if u > 0.0 { a + dist } else { mid - half * x };
            let fp = f(xp);
            let fm = if k == 0 { 0.0 } else { f(xm) };
            let term = wgt * (fp + fm);
            if !term.is_finite() {
                break;
            }
            sum += term;
            k += 1;
            if k > 100_000 {
                break;
            }
        }
        let est = sum * h * half;
        if (est - prev).abs() <= 1e-13 * est.abs().max(1e-300) {
            return est;
        }
        prev = est;
        h *= 0.5;
    }
    prev
}

/// `int_a^inf f`.
pub fn tanh_sinh_to_infinity(f: impl Fn(f64) -> f64, a: f64) -> f64 {
    // [a, a + 1] directly, then t = (a + 1) / w so the far end sits at w = 0
    let b = a + 1.0;
    tanh_sinh(&f, a, b) + tanh_sinh(|w| if w > 0.0 { f(b / w) * b / (w * w) } else { 0.0 }, 0.0, 1.0)
}

/// Adaptive Simpson with Richardson correction.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &impl Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 50)
}
