use crate::quad::gauss_legendre;
use crate::scalar::{pow, Real};

/// `t^power * (a + b / t)` on `[lo, hi)`, with `a, b >= 0`.
///
/// This family is closed under everything the crate needs: `f*` is
/// `power = 0, b = 0`, `f**` has `power = 0`, the oscillation `f** - f*` has
/// `a = 0`, and weights like `t^{-sigma}` only shift `power`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece<T> {
    pub lo: T,
    pub hi: T,
    pub power: T,
    pub a: T,
    pub b: T,
}

impl<T: Real> Piece<T> {
    pub fn constant(lo: T, hi: T, value: T) -> Self {
        Self { lo, hi, power: T::zero(), a: value, b: T::zero() }
    }

    pub fn hyperbolic(lo: T, hi: T, a: T, b: T) -> Self {
        Self { lo, hi, power: T::zero(), a, b }
    }

    /// `c * t^k`.
    pub fn monomial(lo: T, hi: T, k: T, c: T) -> Self {
        Self { lo, hi, power: k, a: c, b: T::zero() }
    }

    pub fn eval(&self, t: T) -> T {
        if self.a == T::zero() && self.b == T::zero() {
            return T::zero();
        }
        let base = if self.b == T::zero() { self.a } else { self.a + self.b / t };
        pow(t, self.power) * base
    }

    fn is_zero(&self) -> bool {
        self.a == T::zero() && self.b == T::zero()
    }

    /// `int_{x0}^{x1} t^e (self(t))^q dt` over the sub-range `[x0, x1]`.
    pub fn moment(&self, q: T, e: T, x0: T, x1: T) -> T {
        let lo = self.lo.max(x0);
        let hi = self.hi.min(x1);
        if !(hi > lo) || self.is_zero() {
            return T::zero();
        }
        let exponent = e + self.power * q;
        if self.b == T::zero() {
            pow(self.a, q) * power_integral(exponent, lo, hi)
        } else if self.a == T::zero() {
            pow(self.b, q) * power_integral(exponent - q, lo, hi)
        } else {
            // t = t* u with t* = b/a turns the integrand into a^q t*^{E+1} u^E (1 + 1/u)^q
            let scale = self.b / self.a;
            let j = unit_hyperbolic_integral(exponent, q, lo / scale, hi / scale);
            if j.is_infinite() {
                return T::infinity();
            }
            pow(self.a, q) * scale.powf(exponent + T::one()) * j
        }
    }
}

/// `int_{x0}^{x1} t^e dt`, `+inf` when divergent at either end.
pub(crate) fn power_integral<T: Real>(e: T, x0: T, x1: T) -> T {
    if !(x1 > x0) {
        return T::zero();
    }
    let f = e + T::one();
    let tiny = T::lit(1e-13);
    if x0 == T::zero() {
        if !(f > tiny) || x1.is_infinite() {
            return T::infinity();
        }
        return x1.powf(f) / f;
    }
    if x1.is_infinite() {
        if !(f < -tiny) {
            return T::infinity();
        }
        return -x0.powf(f) / f;
    }
    let log_ratio = (x1 / x0).ln();
    if f.abs() <= tiny {
        return log_ratio;
    }
    // x0^f (e^{f ln(x1/x0)} - 1) / f stays accurate as f -> 0
    x0.powf(f) * (f * log_ratio).exp_m1() / f
}

/// `int_{u0}^{u1} u^e (1 + 1/u)^q du`.
///
/// Binomial series on `u <= 1/2` and `u >= 2` (ratio at most 1/2, so the
/// series converge geometrically), Gauss-Legendre on `[1/2, 2]`. For integer
/// `q` the expansion is finite and used on the whole range.
fn unit_hyperbolic_integral<T: Real>(e: T, q: T, u0: T, u1: T) -> T {
    if !(u1 > u0) {
        return T::zero();
    }
    if is_small_integer(q) {
        let n = q.round().to_usize().unwrap_or(0);
        let mut coef = T::one();
        let mut acc = T::zero();
        for j in 0..=n {
            let term = power_integral(e - T::from_usize_lossy(j), u0, u1);
            if term.is_infinite() && coef != T::zero() {
                return T::infinity();
            }
            acc = acc + coef * term;
            coef = coef * (q - T::from_usize_lossy(j)) / T::from_usize_lossy(j + 1);
        }
        return acc;
    }

    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let mut acc = T::zero();

    // u in [u0, min(u1, 1/2)]: u^{e-q} sum_j C(q,j) u^j
    if u0 < half {
        let top = u1.min(half);
        let s = binomial_series(q, |j| power_integral(e - q + T::from_usize_lossy(j), u0, top));
        if s.is_infinite() {
            return T::infinity();
        }
        acc = acc + s;
    }
    // u in [max(u0, 2), u1]: u^e sum_j C(q,j) u^{-j}
    if u1 > two {
        let bottom = u0.max(two);
        let s = binomial_series(q, |j| power_integral(e - T::from_usize_lossy(j), bottom, u1));
        if s.is_infinite() {
            return T::infinity();
        }
        acc = acc + s;
    }
    // middle, split at 1 so every panel sits one length away from u = 0
    let integrand = |u: T| u.powf(e) * (T::one() + T::one() / u).powf(q);
    for (a, b) in [(half, T::one()), (T::one(), two)] {
        let lo = u0.max(a);
        let hi = u1.min(b);
        if hi > lo {
            acc = acc + gauss_legendre(integrand, lo, hi, 1);
        }
    }
    acc
}

fn is_small_integer<T: Real>(q: T) -> bool {
    q >= T::zero() && q <= T::lit(64.0) && (q - q.round()).abs() <= T::lit(1e-12)
}

/// `sum_j C(q, j) term(j)` until the terms stop mattering.
fn binomial_series<T: Real>(q: T, term: impl Fn(usize) -> T) -> T {
    let mut coef = T::one();
    let mut acc = T::zero();
    let mut quiet = 0;
    for j in 0..400 {
        let t = term(j);
        if t.is_infinite() {
            if coef != T::zero() {
                return T::infinity();
            }
            continue;
        }
        let contrib = coef * t;
        acc = acc + contrib;
        if contrib.abs() <= T::epsilon() * T::lit(0.01) * acc.abs() {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
        coef = coef * (q - T::from_usize_lossy(j)) / T::from_usize_lossy(j + 1);
    }
    acc
}

/// Contiguous nonnegative function on `[0, inf)` built from [`Piece`]s.
#[derive(Debug, Clone, PartialEq)]
pub struct Piecewise<T> {
    pieces: Vec<Piece<T>>,
}

impl<T: Real> Piecewise<T> {
    pub fn new(pieces: Vec<Piece<T>>) -> Self {
        debug_assert!(pieces.windows(2).all(|w| w[0].hi == w[1].lo));
        Self { pieces }
    }

    pub fn pieces(&self) -> &[Piece<T>] {
        &self.pieces
    }

    pub fn eval(&self, t: T) -> T {
        let k = self.pieces.partition_point(|p| p.hi <= t);
        match self.pieces.get(k) {
            Some(p) if p.lo <= t => p.eval(t),
            _ => T::zero(),
        }
    }

    /// Multiplies by `t^k`.
    pub fn times_power(&self, k: T) -> Self {
        Self {
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece { power: p.power + k, ..*p })
                .collect(),
        }
    }

    /// `int_0^inf t^e F(t)^q dt`.
    pub fn moment(&self, q: T, e: T) -> T {
        self.moment_between(q, e, T::zero(), T::infinity())
    }

    /// `int_{x0}^{x1} t^e F(t)^q dt`.
    pub fn moment_between(&self, q: T, e: T, x0: T, x1: T) -> T {
        let mut acc = T::zero();
        for p in &self.pieces {
            if p.hi <= x0 || p.lo >= x1 {
                continue;
            }
            let m = p.moment(q, e, x0, x1);
            if m.is_infinite() {
                return T::infinity();
            }
            acc = acc + m;
        }
        acc
    }

    /// Right limit at zero, `+inf` when the first piece blows up.
    pub fn value_at_zero(&self) -> T {
        match self.pieces.first() {
            None => T::zero(),
            Some(p) if p.is_zero() => T::zero(),
            Some(p) if p.b > T::zero() || p.power < T::zero() => T::infinity(),
            Some(p) if p.power > T::zero() => T::zero(),
            Some(p) => p.a,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn power_integral_cases() {
        assert!((power_integral(2.0f64, 0.0, 3.0) - 9.0).abs() < 1e-12);
        assert!((power_integral(-1.0, 1.0, std::f64::consts::E) - 1.0).abs() < 1e-15);
        assert!((power_integral(-2.0, 2.0, f64::INFINITY) - 0.5).abs() < 1e-15);
        assert!(power_integral(-1.0f64, 0.0, 1.0).is_infinite());
        assert!(power_integral(-0.5, 1.0, f64::INFINITY).is_infinite());
        // near-log exponent stays accurate
        let v = power_integral(-1.0 + 1e-9, 1.0, 10.0);
        assert!((v - 10f64.ln()).abs() < 1e-7);
    }

    #[test]
    fn mixed_piece_against_simpson() {
        for &(q, e) in &[(1.5, 0.0), (4.0 / 3.0, -0.3), (2.0, 1.0), (0.5, -0.5), (3.7, 0.2)] {
            let p = Piece::hyperbolic(0.3, 7.0, 1.3, 0.9);
            let exact = p.moment(q, e, 0.0, f64::INFINITY);
            let approx = simpson(|t: f64| t.powf(e) * (1.3 + 0.9 / t).powf(q), 0.3, 7.0, 200_000);
            assert!((exact - approx).abs() <= 1e-10 * approx, "q={q} e={e}: {exact} vs {approx}");
        }
    }

    #[test]
    fn mixed_piece_reaching_zero_and_infinity() {
        // int_0^inf t^{-3} (1 + 1/t)^{-1/2}... use a convergent case:
        // int_0^inf t^{1/2} (1 + 1/t)^{1/2} t^{-3} diverges at 0, check flag
        let p = Piece::hyperbolic(0.0, f64::INFINITY, 1.0, 1.0);
        assert!(p.moment(0.5, -3.0, 0.0, f64::INFINITY).is_infinite());
        // int_1^inf t^{-3} (1 + 1/t)^{1.5} dt; substitute v = 1/t: int_0^1 v (1+v)^{1.5} dv
        let v = p.moment(1.5, -3.0, 1.0, f64::INFINITY);
        let reference = simpson(|x: f64| x * (1.0 + x).powf(1.5), 0.0, 1.0, 20_000);
        assert!((v - reference).abs() < 1e-12);
    }
}
