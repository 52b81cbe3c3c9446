//! Gamma-function helpers shared by the polynomial and kernel code.
//!
//! Ratios of Gamma values are formed in log space so that coefficients like
//! `Γ(k - j + 1) Γ(λ + j)² / Γ(k + 2λ + j)` stay finite for large `k`.

use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{Error, Result};

/// `Γ(x)` with its sign, as `(ln|Γ(x)|, sign)`.
///
/// Poles (non-positive integers) yield an infinite log magnitude.
pub fn ln_gamma_signed(x: f64) -> (f64, f64) {
    if x > 0.0 {
        return (ln_gamma(x), 1.0);
    }
    if x == x.floor() {
        return (f64::INFINITY, 1.0);
    }
    let g = gamma(x);
    (g.abs().ln(), g.signum())
}

/// `ln|Π Γ(num) / Π Γ(den)|` and its sign. A pole in the denominator
/// gives a log magnitude of `-∞`.
pub fn ln_gamma_ratio(num: &[f64], den: &[f64]) -> (f64, f64) {
    let mut log = 0.0;
    let mut sign = 1.0;
    for &a in num {
        let (l, s) = ln_gamma_signed(a);
        log += l;
        sign *= s;
    }
    for &b in den {
        let (l, s) = ln_gamma_signed(b);
        if l.is_infinite() {
            return (f64::NEG_INFINITY, 1.0);
        }
        log -= l;
        sign *= s;
    }
    (log, sign)
}

/// `Π Γ(num) / Π Γ(den)` evaluated through log-Gamma.
pub fn gamma_ratio(num: &[f64], den: &[f64]) -> Result<f64> {
    let (log, sign) = ln_gamma_ratio(num, den);
    let v = sign * log.exp();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow("Gamma ratio"))
    }
}

/// `Γ(λ + 1/2) / (Γ(λ) Γ(1/2))`, the mass normalisation of the
/// product-formula kernel and of `∫₀^π sin^{2λ-1}θ dθ`.
pub fn kernel_normalization(lambda: f64) -> f64 {
    let sqrt_pi = std::f64::consts::PI.sqrt();
    gamma_ratio(&[lambda + 0.5], &[lambda]).expect("finite for lambda > 0") / sqrt_pi
}

/// Pochhammer symbol `(a)_k = a (a+1) ... (a+k-1)`, with `(a)_0 = 1`.
pub fn pochhammer(a: f64, k: usize) -> Result<f64> {
    let mut p = 1.0;
    for i in 0..k {
        p *= a + i as f64;
        if !p.is_finite() {
            return Err(Error::Overflow("Pochhammer symbol"));
        }
    }
    Ok(p)
}

/// `n!` as a float; exact up to 22!.
pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}
