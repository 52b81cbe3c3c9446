//! Truncation of the `ρ`-power series that appear in every constant
//! representation, and the normalised Gegenbauer product series
//! `Σ_k k!/(2λ)_k C_k^λ(x) C_k^λ(y) ρ^k` that all of them reduce to.

use serde::Serialize;

use crate::error::{domain, Error, Result};

/// Truncation controls for `ρ`-power series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesControl {
    pub max_terms: usize,
    pub tail_tol: f64,
}

impl SeriesControl {
    pub const DEFAULT_MAX_TERMS: usize = 32_768;
    pub const DEFAULT_TAIL_TOL: f64 = 1e-14;
    const MIN_TERMS: usize = 8;

    pub fn new(max_terms: usize, tail_tol: f64) -> Result<Self> {
        if max_terms < Self::MIN_TERMS {
            return Err(domain("max_terms", max_terms as f64, "must be at least 8"));
        }
        if !(tail_tol > 0.0) {
            return Err(domain("tail_tol", tail_tol, "must be positive"));
        }
        Ok(Self {
            max_terms,
            tail_tol,
        })
    }

    /// Last retained degree `K` for a series whose `k`-th term is bounded
    /// by `ρ^k (k+1)^{max(2λ-1, 0)}`: the first `K ≥ 8` with
    /// `ρ^K (K+1)^{max(2λ-1,0)} < tail_tol`.
    pub fn truncation_order(&self, rho: f64, lambda: f64) -> Result<usize> {
        if rho == 0.0 {
            return Ok(0);
        }
        if !(0.0..1.0).contains(&rho) {
            return Err(domain("rho", rho, "must satisfy 0 <= rho < 1"));
        }
        let growth = (2.0 * lambda - 1.0).max(0.0);
        let log_rho = rho.ln();
        let log_tol = self.tail_tol.ln();
        (Self::MIN_TERMS..=self.max_terms)
            .find(|&k| k as f64 * log_rho + growth * ((k + 1) as f64).ln() < log_tol)
            .ok_or(Error::NonConvergence {
                rho,
                max_terms: self.max_terms,
            })
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            max_terms: Self::DEFAULT_MAX_TERMS,
            tail_tol: Self::DEFAULT_TAIL_TOL,
        }
    }
}

/// A truncated series value together with the last degree summed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesSum {
    pub value: f64,
    pub order: usize,
}

/// `Σ_{k=0}^{K} k!/(2λ)_k C_k^λ(x) C_k^λ(y) ρ^k`, with `K` from the tail rule.
///
/// Both polynomial sequences and the coefficient are advanced by their
/// recurrences, so the cost is linear in `K`. Requires `λ > 0`.
pub fn normalized_product_series(
    lambda: f64,
    x: f64,
    y: f64,
    rho: f64,
    ctl: &SeriesControl,
) -> Result<SeriesSum> {
    if !(lambda > 0.0) {
        return Err(domain("lambda", lambda, "must be positive"));
    }
    let order = ctl.truncation_order(rho, lambda)?;
    let value = normalized_product_partial_sum(lambda, x, y, rho, order);
    if !value.is_finite() {
        return Err(Error::Overflow("normalised Gegenbauer series"));
    }
    Ok(SeriesSum { value, order })
}

pub(crate) fn normalized_product_partial_sum(
    lambda: f64,
    x: f64,
    y: f64,
    rho: f64,
    order: usize,
) -> f64 {
    let mut sum = 1.0;
    if order == 0 {
        return sum;
    }
    let (mut cx_prev, mut cy_prev) = (1.0, 1.0);
    let (mut cx, mut cy) = (2.0 * lambda * x, 2.0 * lambda * y);
    // k!/(2λ)_k
    let mut coef = 1.0 / (2.0 * lambda);
    let mut rho_k = rho;
    sum += coef * cx * cy * rho_k;
    for k in 2..=order {
        let kf = k as f64;
        let a = 2.0 * (kf + lambda - 1.0);
        let b = kf + 2.0 * lambda - 2.0;
        let cx_next = (a * x * cx - b * cx_prev) / kf;
        let cy_next = (a * y * cy - b * cy_prev) / kf;
        cx_prev = cx;
        cy_prev = cy;
        cx = cx_next;
        cy = cy_next;
        coef *= kf / (2.0 * lambda + kf - 1.0);
        rho_k *= rho;
        sum += coef * cx * cy * rho_k;
    }
    sum
}
