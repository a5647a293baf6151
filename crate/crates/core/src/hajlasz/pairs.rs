use rayon::prelude::*;

use crate::hajlasz::GradientCheck;
use crate::scalar::{pow, Real};
use crate::space::DiscreteSpace;

/// `d(x_i, x_j)^s` for all `i < j`, packed row by row.
#[derive(Debug, Clone)]
pub struct DistancePowers<T> {
    n: usize,
    s: T,
    packed: Vec<T>,
}

impl<T: Real> DistancePowers<T> {
    pub fn new(space: &DiscreteSpace<T>, s: T) -> Self {
        let n = space.len();
        let rows: Vec<Vec<T>> = (0..n)
            .into_par_iter()
            .map(|i| (i + 1..n).map(|j| pow(space.distance(i, j), s)).collect())
            .collect();
        Self { n, s, packed: rows.concat() }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn s(&self) -> T {
        self.s
    }

    /// Offset of row `i` (pairs `(i, i+1), (i, i+2), ...`).
    #[inline]
    fn row_start(&self, i: usize) -> usize {
        i * self.n - i * (i + 1) / 2
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.packed[self.row_start(a) + (b - a - 1)]
    }

    /// `(i, j, d_ij^s)` for `i < j`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.n).flat_map(move |i| {
            let start = self.row_start(i);
            (i + 1..self.n).map(move |j| (i, j, self.packed[start + j - i - 1]))
        })
    }

    pub(crate) fn row(&self, i: usize) -> &[T] {
        let start = self.row_start(i);
        &self.packed[start..start + (self.n - i - 1)]
    }
}

/// `|f_i - f_j| / d^s`, the single definition every comparison uses.
#[inline]
pub(crate) fn ratio<T: Real>(fi: T, fj: T, dp: T) -> T {
    (fi - fj).abs() / dp
}

pub(crate) fn canonical<T: Real>(dp: &DistancePowers<T>, f: &[T]) -> Vec<T> {
    let n = dp.len();
    let mut g = vec![T::zero(); n];
    for i in 0..n {
        let fi = f[i];
        let mut gi = g[i];
        for (k, &d) in dp.row(i).iter().enumerate() {
            let j = i + 1 + k;
            let c = ratio(fi, f[j], d);
            if c > gi {
                gi = c;
            }
            if c > g[j] {
                g[j] = c;
            }
        }
        g[i] = gi;
    }
    let half = T::lit(0.5);
    g.iter_mut().for_each(|v| *v = *v * half);
    g
}

/// Per row: feasible, worst violation, witness pair.
type RowCheck<T> = (bool, T, Option<(usize, usize)>);

pub(crate) fn check_pairs<T: Real>(dp: &DistancePowers<T>, f: &[T], g: &[T], tol: T) -> GradientCheck<T> {
    let n = dp.len();
    let rows: Vec<RowCheck<T>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut ok = true;
            let mut worst = T::neg_infinity();
            let mut witness = None;
            for (k, &d) in dp.row(i).iter().enumerate() {
                let j = i + 1 + k;
                let sum = g[i] + g[j];
                if ratio(f[i], f[j], d) > sum + tol / d {
                    ok = false;
                }
                let v = (f[i] - f[j]).abs() - d * sum;
                if v > worst {
                    worst = v;
                    witness = Some((i, j));
                }
            }
            (ok, worst, witness)
        })
        .collect();
    let mut out = GradientCheck { ok: true, max_violation: T::neg_infinity(), witness: None };
    for (ok, worst, witness) in rows {
        out.ok &= ok;
        if worst > out.max_violation {
            out.max_violation = worst;
            out.witness = witness;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::generate::random_cloud;

    #[test]
    fn packed_indexing() {
        let sp = random_cloud::<f64>(7, 2, 1).unwrap();
        let dp = DistancePowers::new(&sp, 0.5);
        let mut count = 0;
        for (i, j, d) in dp.iter() {
            assert_eq!(d, sp.distance(i, j).sqrt());
            assert_eq!(dp.get(j, i), d);
            count += 1;
        }
        assert_eq!(count, 21);
    }
}
