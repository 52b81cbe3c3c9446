//! Gegenbauer (ultraspherical) polynomials `C_k^λ`, the Legendre special case
//! and the associated Legendre functions built from them.
//!
//! `C_k^λ(x)` is the coefficient of `z^k` in `(1 - 2xz + z²)^{-λ}`. The
//! three-term recurrence is the evaluation path used throughout the crate;
//! the explicit finite sum is kept as an independent check.

use crate::error::{domain, Result};
use crate::special::gamma_ratio;

pub use crate::special::pochhammer;

/// Parameter and degree selecting the polynomial `C_k^λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GegenbauerIndex {
    lambda: f64,
    degree: usize,
}

impl GegenbauerIndex {
    pub fn new(lambda: f64, degree: usize) -> Result<Self> {
        if !(lambda > -0.5) || !lambda.is_finite() {
            return Err(domain("lambda", lambda, "must satisfy lambda > -1/2"));
        }
        Ok(Self { lambda, degree })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `C_k^λ(x)` by the three-term recurrence.
    pub fn eval(&self, x: f64) -> f64 {
        eval_recurrence(self.lambda, self.degree, x)
    }

    /// `C_k^λ(1) = (2λ)_k / k!`.
    pub fn value_at_one(&self) -> f64 {
        (0..self.degree).fold(1.0, |acc, i| {
            acc * (2.0 * self.lambda + i as f64) / (i + 1) as f64
        })
    }
}

/// Per-dimension constants: the three Gegenbauer parameters `(n-2)/2`,
/// `n/2`, `(n+2)/2` and the normalisation
/// `c_n = 2Γ((n+2)/2) / (Γ(1/2) Γ((n-1)/2))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionParams {
    pub n: u32,
    pub lambda_low: f64,
    pub lambda_mid: f64,
    pub lambda_high: f64,
    pub c_n: f64,
}

impl DimensionParams {
    pub fn new(n: u32) -> Result<Self> {
        if n < 3 {
            return Err(domain("n", n as f64, "dimension must be at least 3"));
        }
        let nf = n as f64;
        let c_n = 2.0 * gamma_ratio(&[(nf + 2.0) / 2.0], &[0.5, (nf - 1.0) / 2.0])?;
        Ok(Self {
            n,
            lambda_low: (nf - 2.0) / 2.0,
            lambda_mid: nf / 2.0,
            lambda_high: (nf + 2.0) / 2.0,
            c_n,
        })
    }

    pub fn nf(&self) -> f64 {
        self.n as f64
    }
}

/// `C_k^λ(x)` from the explicit finite sum
/// `Σ_j (-1)^j (λ)_{k-j} / (j! (k-2j)!) (2x)^{k-2j}`.
///
/// The terms alternate and grow like `(2|x|)^k`, so the sum is accumulated
/// in double-double arithmetic; this keeps it usable as an independent
/// check on the recurrence up to `k ≈ 30`.
pub fn eval_explicit(lambda: f64, k: usize, x: f64) -> f64 {
    let two_x = Dd::from(2.0 * x);
    let mut sum = Dd::from(0.0);
    for j in 0..=k / 2 {
        let mut term = Dd::from(1.0);
        for i in 0..k - j {
            term = term * Dd::sum(lambda, i as f64);
        }
        for i in 1..=j {
            term = term / i as f64;
        }
        for i in 1..=k - 2 * j {
            term = term / i as f64;
        }
        for _ in 0..k - 2 * j {
            term = term * two_x;
        }
        if j % 2 == 1 {
            term = -term;
        }
        sum = sum + term;
    }
    sum.hi + sum.lo
}

/// Unevaluated sum `hi + lo` of two doubles (about 32 significant digits).
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        Self { hi: s, lo: err }
    }

    fn quick(a: f64, b: f64) -> Self {
        let s = a + b;
        Self {
            hi: s,
            lo: b - (s - a),
        }
    }
}

impl From<f64> for Dd {
    fn from(hi: f64) -> Self {
        Self { hi, lo: 0.0 }
    }
}

impl std::ops::Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let s = Dd::sum(self.hi, o.hi);
        Dd::quick(s.hi, s.lo + self.lo + o.lo)
    }
}

impl std::ops::Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl std::ops::Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let err = self.hi.mul_add(o.hi, -p);
        Dd::quick(p, err + self.hi * o.lo + self.lo * o.hi)
    }
}

impl std::ops::Div<f64> for Dd {
    type Output = Dd;
    fn div(self, d: f64) -> Dd {
        let q1 = self.hi / d;
        let r = self + -(Dd::from(q1) * Dd::from(d));
        let q2 = r.hi / d;
        Dd::quick(q1, q2)
    }
}

/// `C_k^λ(x)` via `k C_k = 2(k+λ-1) x C_{k-1} - (k+2λ-2) C_{k-2}`.
pub fn eval_recurrence(lambda: f64, k: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut curr = 2.0 * lambda * x;
    for m in 2..=k {
        let mf = m as f64;
        let next = (2.0 * (mf + lambda - 1.0) * x * curr - (mf + 2.0 * lambda - 2.0) * prev) / mf;
        prev = curr;
        curr = next;
    }
    curr
}

/// `[C_0^λ(x), ..., C_K^λ(x)]` in a single recurrence pass.
pub fn eval_sequence(lambda: f64, max_degree: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(max_degree + 1);
    out.push(1.0);
    if max_degree == 0 {
        return out;
    }
    out.push(2.0 * lambda * x);
    for m in 2..=max_degree {
        let mf = m as f64;
        let next = (2.0 * (mf + lambda - 1.0) * x * out[m - 1]
            - (mf + 2.0 * lambda - 2.0) * out[m - 2])
            / mf;
        out.push(next);
    }
    out
}

/// `d^m/dx^m C_k^λ(x) = 2^m (λ)_m C_{k-m}^{λ+m}(x)`; zero when `m > k`.
pub fn derivative(lambda: f64, k: usize, m: usize, x: f64) -> f64 {
    if m > k {
        return 0.0;
    }
    let scale = (0..m).fold(1.0, |acc, i| acc * 2.0 * (lambda + i as f64));
    scale * eval_recurrence(lambda + m as f64, k - m, x)
}

/// Legendre polynomial `P_k = C_k^{1/2}`.
pub fn legendre(k: usize, x: f64) -> f64 {
    eval_recurrence(0.5, k, x)
}

/// Associated Legendre function `P_k^j(x) = (-1)^j (1-x²)^{j/2} P_k^{(j)}(x)`,
/// with the derivative taken from the Gegenbauer differentiation formula.
pub fn assoc_legendre(k: usize, j: usize, x: f64) -> f64 {
    if j > k {
        return 0.0;
    }
    let sign = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * (1.0 - x * x).powf(j as f64 / 2.0) * derivative(0.5, k, j, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Coefficient of `z^k` in `(1 - 2xz + z²)^{-λ}`, expanded as
    /// `Σ_m (λ)_m / m! (2xz - z²)^m` and collected by the binomial theorem.
    fn generating_coefficient(lambda: f64, k: usize, x: f64) -> f64 {
        let mut total = 0.0;
        // (2xz - z²)^m = Σ_i C(m,i) (2x)^{m-i} (-1)^i z^{m+i}; need m + i = k
        for m in 0..=k {
            if m > k || k - m > m {
                continue;
            }
            let i = k - m;
            let lam_m = (0..m).fold(1.0, |a, q| a * (lambda + q as f64) / (q + 1) as f64);
            let binom = (0..i).fold(1.0, |a, q| a * (m - q) as f64 / (q + 1) as f64);
            let sign = if i.is_multiple_of(2) { 1.0 } else { -1.0 };
            total += lam_m * binom * sign * (2.0 * x).powi((m - i) as i32);
        }
        total
    }

    #[test]
    fn index_rejects_lambda_below_minus_half() {
        assert!(GegenbauerIndex::new(-0.5, 2).is_err());
        assert!(GegenbauerIndex::new(-0.4, 2).is_ok());
    }

    #[test]
    fn explicit_special_cases() {
        assert_eq!(eval_explicit(0.7, 0, 0.3), 1.0);
        assert!((eval_explicit(1.5, 1, 0.4) - 1.2).abs() < 1e-15);
        assert!(eval_explicit(1.0, 2, 0.5).abs() < 1e-15);
        assert!(generating_coefficient(1.0, 2, 0.5).abs() < 1e-15);
    }

    #[test]
    fn explicit_agrees_with_generating_function_coefficients() {
        for &lambda in &[0.5, 1.0, 2.5] {
            for k in 0..10 {
                for &x in &[-0.8, 0.1, 0.6] {
                    let a = eval_explicit(lambda, k, x);
                    let b = generating_coefficient(lambda, k, x);
                    assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "{lambda} {k} {x}");
                }
            }
        }
    }

    #[test]
    fn recurrence_examples() {
        assert_eq!(eval_recurrence(2.0, 1, 0.25), 1.0);
        assert!((eval_recurrence(0.5, 5, 1.0) - 1.0).abs() < 1e-15);
        let a = eval_recurrence(3.0, 7, -0.6);
        let b = eval_explicit(3.0, 7, -0.6);
        assert!((a - b).abs() <= 1e-12 * b.abs());
    }

    #[test]
    fn recurrence_matches_explicit_on_grid() {
        for &lambda in &[0.5, 1.0, 1.5, 2.0, 3.0] {
            for k in 0..=30 {
                for &x in &[-0.9, -0.5, 0.0, 0.3, 0.7, 0.99] {
                    let r = eval_recurrence(lambda, k, x);
                    let e = eval_explicit(lambda, k, x);
                    assert!(
                        (r - e).abs() <= 1e-10 * r.abs().max(1.0),
                        "lambda={lambda} k={k} x={x}: {r} vs {e}"
                    );
                }
            }
        }
    }

    #[test]
    fn sequence_examples() {
        assert_eq!(eval_sequence(1.0, 1, 0.5), vec![1.0, 1.0]);
        for v in eval_sequence(0.5, 3, 1.0) {
            assert!((v - 1.0).abs() < 1e-15);
        }
        let s = eval_sequence(2.0, 10, 0.0);
        for (k, v) in s.iter().enumerate() {
            if k % 2 == 1 {
                assert_eq!(*v, 0.0);
            } else {
                assert!(v.abs() > 0.0);
            }
        }
        let s = eval_sequence(1.7, 12, 0.35);
        for (k, v) in s.iter().enumerate() {
            assert_eq!(*v, eval_recurrence(1.7, k, 0.35));
        }
    }

    #[test]
    fn endpoint_value_and_parity() {
        for &lambda in &[0.5, 1.0, 1.5, 2.0, 3.0] {
            for k in 0..=30 {
                let idx = GegenbauerIndex::new(lambda, k).unwrap();
                let at_one = idx.eval(1.0);
                let expected = idx.value_at_one();
                assert!((at_one - expected).abs() <= 1e-12 * expected);
                for &x in &[0.2, 0.55, 0.9] {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    let lhs = eval_recurrence(lambda, k, -x);
                    let rhs = sign * eval_recurrence(lambda, k, x);
                    assert!((lhs - rhs).abs() <= 1e-13 * rhs.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(derivative(1.0, 3, 0, 0.2), eval_recurrence(1.0, 3, 0.2));
        assert_eq!(derivative(1.0, 1, 1, 0.77), 2.0);
        assert_eq!(derivative(1.0, 2, 3, 0.1), 0.0);

        // second difference: truncation h²/12 · 945 ≈ 7.9e-7 at h = 1e-4
        let h = 1e-4;
        let x = 0.3;
        let fd = (eval_explicit(1.5, 4, x + h) - 2.0 * eval_explicit(1.5, 4, x)
            + eval_explicit(1.5, 4, x - h))
            / (h * h);
        assert!((derivative(1.5, 4, 2, x) - fd).abs() < 1e-6);
    }

    #[test]
    fn first_derivative_matches_central_differences() {
        // the third-derivative truncation term stays below 1e-6 on this range
        let h = 1e-5;
        let cases = [
            (0.5, &[-0.9, -0.7, 0.0, 0.45, 0.8, 0.9][..]),
            (1.0, &[-0.9, -0.7, 0.0, 0.45, 0.8, 0.9][..]),
            (1.5, &[-0.5, 0.0, 0.3, 0.5][..]),
        ];
        for (lambda, xs) in cases {
            for k in 0..=15 {
                for &x in xs {
                    let fd = (eval_explicit(lambda, k, x + h) - eval_explicit(lambda, k, x - h))
                        / (2.0 * h);
                    let d = derivative(lambda, k, 1, x);
                    assert!((d - fd).abs() < 1e-6, "lambda={lambda} k={k} x={x}");
                }
            }
        }
    }

    #[test]
    fn legendre_examples() {
        assert!((legendre(2, 0.5) + 0.125).abs() < 1e-15);
        for k in 0..6 {
            assert_eq!(assoc_legendre(k, 0, 0.3), legendre(k, 0.3));
        }
        assert!((assoc_legendre(1, 1, 0.6) + 0.8).abs() < 1e-15);
        // P_2^2(x) = 3(1 - x²)
        assert!((assoc_legendre(2, 2, 0.4) - 3.0 * 0.84).abs() < 1e-14);
    }

    #[test]
    fn dimension_constants() {
        let d3 = DimensionParams::new(3).unwrap();
        assert!((d3.c_n - 1.5).abs() < 1e-14);
        assert_eq!(d3.lambda_low, 0.5);
        // c_4 = 2Γ(3) / (√π Γ(3/2)) = 8/π
        let d4 = DimensionParams::new(4).unwrap();
        assert!((d4.c_n - 8.0 / std::f64::consts::PI).abs() < 1e-14);
        assert!(DimensionParams::new(2).is_err());
    }
}
