//! Sharp constants `C(ρe₁, ℓ_α)` for the directional derivative of bounded
//! harmonic functions on the unit ball of `ℝⁿ`, and the radial constant
//! `C(x, x/|x|)`.
//!
//! Three independent routes are provided:
//!
//! * [`constant_melen`]: the double integral over the disc, with the inner
//!   integral done by quadrature ([`inner_integral_direct`]);
//! * [`constant_series`]: the Gegenbauer representation `c_n/(1-ρ²)·(F+G+H)`
//!   with `F`, `G` by split quadrature and `H` as a `ρ`-power series;
//! * [`constant_radial`]: the one-dimensional closed form of the radial
//!   constant, which is the `α = 0` specialisation of the other two.
//!
//! All integrals are taken in an angular variable (`x = cos φ`, `y = √(1-x²) cos ψ`)
//! so that the `(1-x²)^{(n-3)/2}` weights become powers of `sin`, and every
//! `|δt - x|` kink is split at its known location.

mod certify;
mod convexity;

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::gegenbauer::DimensionParams;
use crate::quadrature::{integrate, integrate_split, QuadratureRule};
use crate::series::{normalized_product_series, SeriesControl, SeriesSum};
use crate::special::gamma_ratio;

pub use certify::{
    certify_convexity, certify_radial_max, default_alpha_grid, default_t_grid, ConvexityReport,
    RadialMaxReport, CONVEXITY_THRESHOLD, RADIAL_GAP_THRESHOLD,
};
pub use convexity::{
    bracket_expanded, bracket_square, fgh, l_kernel, l_kernel_unfactored, second_derivative_kernel,
    second_derivative_series, Fgh, KernelPoint, LKernel,
};

/// The point `ρe₁` of the unit ball in dimension `n`, with the shrunk
/// radius `δ = (n-2)ρ/n` at which every kink sits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialPoint {
    dim: DimensionParams,
    rho: f64,
    delta: f64,
}

impl RadialPoint {
    pub fn new(n: u32, rho: f64) -> Result<Self> {
        let dim = DimensionParams::new(n)?;
        if !(0.0..1.0).contains(&rho) {
            return Err(domain("rho", rho, "must satisfy 0 <= rho < 1"));
        }
        let delta = (dim.nf() - 2.0) / dim.nf() * rho;
        Ok(Self { dim, rho, delta })
    }

    pub fn dim(&self) -> &DimensionParams {
        &self.dim
    }

    pub fn n(&self) -> u32 {
        self.dim.n
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `c_n / (1 - ρ²)`.
    pub fn prefactor(&self) -> f64 {
        self.dim.c_n / (1.0 - self.rho * self.rho)
    }

    /// The constant at the centre of the ball, `2c_n/(n-1)`.
    pub fn center_value(&self) -> f64 {
        2.0 * self.dim.c_n / (self.dim.nf() - 1.0)
    }
}

/// A direction `ℓ_α = e₁ cos α + e₂ sin α` at the point `ρe₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantQuery {
    point: RadialPoint,
    alpha: f64,
    t: f64,
}

impl ConstantQuery {
    pub fn new(n: u32, rho: f64, alpha: f64) -> Result<Self> {
        Self::at(RadialPoint::new(n, rho)?, alpha)
    }

    pub fn at(point: RadialPoint, alpha: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&alpha) {
            return Err(domain("alpha", alpha, "must lie in [0, pi]"));
        }
        Ok(Self {
            point,
            alpha,
            t: alpha.cos(),
        })
    }

    pub fn point(&self) -> &RadialPoint {
        &self.point
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `t = cos α`.
    pub fn t(&self) -> f64 {
        self.t
    }

    /// Kink location `δ cos α` of the outer integrand.
    pub fn kink(&self) -> f64 {
        self.point.delta * self.t
    }
}

/// `Γ(1/2)Γ((n-2)/2)/Γ((n-1)/2) = ∫_0^π sin^{n-3}ψ dψ`.
fn inner_mass(dim: &DimensionParams) -> f64 {
    let n = dim.nf();
    gamma_ratio(&[0.5, (n - 2.0) / 2.0], &[(n - 1.0) / 2.0]).expect("finite for n >= 3")
}

/// Inner integral at `x = cos φ`, given `sin φ` directly.
fn inner_direct_angular(q: &ConstantQuery, cos_phi: f64, sin_phi: f64, rule: &QuadratureRule) -> Result<f64> {
    let n = q.point.dim.nf();
    let rho = q.point.rho;
    let (ca, sa) = (q.alpha.cos(), q.alpha.sin());
    let base = 1.0 + rho * rho - 2.0 * rho * cos_phi * ca;
    let slope = 2.0 * rho * sin_phi * sa;
    let inner = integrate(
        |psi| psi.sin().powf(n - 3.0) / (base - slope * psi.cos()).powf(n / 2.0 - 1.0),
        0.0,
        PI,
        rule,
    )?;
    Ok(sin_phi.powf(n - 3.0) * inner)
}

/// `∫ (1-x²-y²)^{n/2-2} / (1 - 2ρ(x cos α + y sin α) + ρ²)^{n/2-1} dy` over
/// `|y| < √(1-x²)`, by quadrature after `y = √(1-x²) cos ψ`.
pub fn inner_integral_direct(q: &ConstantQuery, x: f64, rule: &QuadratureRule) -> Result<f64> {
    if !(x.abs() < 1.0) {
        return Err(domain("x", x, "must lie in (-1, 1)"));
    }
    inner_direct_angular(q, x, (1.0 - x * x).sqrt(), rule)
}

/// The same inner integral as the Gegenbauer series
/// `B (1-x²)^{(n-3)/2} Σ_k k!/(n-2)_k C_k^{(n-2)/2}(x) C_k^{(n-2)/2}(cos α) ρ^k`.
pub fn inner_integral_series(q: &ConstantQuery, x: f64, ctl: &SeriesControl) -> Result<SeriesSum> {
    if !(x.abs() < 1.0) {
        return Err(domain("x", x, "must lie in (-1, 1)"));
    }
    let dim = &q.point.dim;
    let s = normalized_product_series(dim.lambda_low, x, q.t, q.point.rho, ctl)?;
    Ok(SeriesSum {
        value: inner_mass(dim) * (1.0 - x * x).powf((dim.nf() - 3.0) / 2.0) * s.value,
        order: s.order,
    })
}

/// `C(ρe₁, ℓ_α)` from the double integral
/// `n(n-2)/(2π(1-ρ²)) ∫ |δ cos α - x| · inner(x) dx`, outer integral in
/// `φ = arccos x` split at the kink.
pub fn constant_melen(q: &ConstantQuery, rule: &QuadratureRule) -> Result<f64> {
    let p = &q.point;
    let n = p.dim.nf();
    let s = q.kink();
    let outer = integrate_split(
        |phi| {
            let (c, sn) = (phi.cos(), phi.sin());
            // the inner call only fails on non-finite values, which the
            // outer quadrature reports as well
            let inner = inner_direct_angular(q, c, sn, rule).unwrap_or(f64::NAN);
            (s - c).abs() * inner * sn
        },
        0.0,
        PI,
        &[s.acos()],
        rule,
    )?;
    Ok(n * (n - 2.0) / (2.0 * PI) / (1.0 - p.rho * p.rho) * outer)
}

/// `∫_{-1}^{1} |s - x| (1-x²)^{(n-3)/2} x^{power} dx` split at `x = s`.
pub(crate) fn kink_moment(n: f64, s: f64, power: i32, rule: &QuadratureRule) -> Result<f64> {
    integrate_split(
        |phi| {
            let c = phi.cos();
            (s - c).abs() * phi.sin().powf(n - 2.0) * c.powi(power)
        },
        0.0,
        PI,
        &[s.acos()],
        rule,
    )
}

/// The series part `H(t)` of the Gegenbauer representation,
/// `2/(n²-1) (1-δ²t²)^{(n+1)/2} Σ_{k≥2} (k-2)!/(n+2)_{k-2} C_{k-2}^{(n+2)/2}(δt) C_k^{(n-2)/2}(t) ρ^k`.
pub(crate) fn h_series(p: &RadialPoint, t: f64, ctl: &SeriesControl) -> Result<SeriesSum> {
    let rho = p.rho;
    if rho == 0.0 {
        return Ok(SeriesSum { value: 0.0, order: 0 });
    }
    let dim = &p.dim;
    let n = dim.nf();
    // |C_k^{(n-2)/2}(t)| is the growing factor; the other one is bounded by 1
    let order = ctl.truncation_order(rho, dim.lambda_low)?.max(2);
    let (lam, mu) = (dim.lambda_low, dim.lambda_high);
    let x = p.delta * t;

    // C_m^μ(δt) with its normalisation m!/(n+2)_m, and C_k^λ(t)
    let (mut cm_prev, mut cm) = (0.0, 1.0);
    let mut coef = 1.0;
    let (mut ck_prev, mut ck) = (1.0, 2.0 * lam * t);
    let mut rho_k = rho * rho;
    let mut sum = 0.0;
    for k in 2..=order {
        let kf = k as f64;
        let next = (2.0 * (kf + lam - 1.0) * t * ck - (kf + 2.0 * lam - 2.0) * ck_prev) / kf;
        ck_prev = ck;
        ck = next;
        let m = k - 2;
        if m >= 1 {
            let mf = m as f64;
            let next = if m == 1 {
                2.0 * mu * x
            } else {
                (2.0 * (mf + mu - 1.0) * x * cm - (mf + 2.0 * mu - 2.0) * cm_prev) / mf
            };
            cm_prev = cm;
            cm = next;
            coef *= mf / (n + 2.0 + mf - 1.0);
        }
        sum += coef * cm * ck * rho_k;
        rho_k *= rho;
    }
    let value = 2.0 / (n * n - 1.0) * (1.0 - x * x).powf((n + 1.0) / 2.0) * sum;
    Ok(SeriesSum { value, order })
}

/// `C(ρe₁, ℓ_α) = c_n/(1-ρ²) · [F + G + H](cos α)` with `H` truncated by
/// the tail rule. `ρ = 0` returns the centre value `2c_n/(n-1)` directly.
pub fn constant_series(
    q: &ConstantQuery,
    ctl: &SeriesControl,
    rule: &QuadratureRule,
) -> Result<SeriesSum> {
    let p = &q.point;
    if p.rho == 0.0 {
        return Ok(SeriesSum {
            value: p.center_value(),
            order: 0,
        });
    }
    let parts = fgh(q.t, p, ctl, rule)?;
    Ok(SeriesSum {
        value: p.prefactor() * (parts.f + parts.g + parts.h),
        order: parts.order,
    })
}

/// The radial constant
/// `c_n/(1-ρ²) ∫ |t - δ| (1-t²)^{(n-3)/2} / (1 - 2tρ + ρ²)^{(n-2)/2} dt`.
pub fn constant_radial(p: &RadialPoint, rule: &QuadratureRule) -> Result<f64> {
    let n = p.dim.nf();
    let rho = p.rho;
    let delta = p.delta;
    let integral = integrate_split(
        |phi| {
            let c = phi.cos();
            (c - delta).abs() * phi.sin().powf(n - 2.0)
                / (1.0 - 2.0 * c * rho + rho * rho).powf((n - 2.0) / 2.0)
        },
        0.0,
        PI,
        &[delta.acos()],
        rule,
    )?;
    Ok(p.prefactor() * integral)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstantRow {
    pub n: u32,
    pub rho: f64,
    pub alpha: f64,
    pub c_series: f64,
    pub c_melen: f64,
    pub abs_diff: f64,
    pub c_radial: f64,
    pub truncation_order: usize,
    pub quad_order: usize,
}

/// Evaluate both direction routes and the radial constant for one query.
pub fn constant_row(
    q: &ConstantQuery,
    ctl: &SeriesControl,
    rule: &QuadratureRule,
) -> Result<ConstantRow> {
    let series = constant_series(q, ctl, rule)?;
    let melen = constant_melen(q, rule)?;
    Ok(ConstantRow {
        n: q.point.n(),
        rho: q.point.rho,
        alpha: q.alpha,
        c_series: series.value,
        c_melen: melen,
        abs_diff: (series.value - melen).abs(),
        c_radial: constant_radial(&q.point, rule)?,
        truncation_order: series.order,
        quad_order: rule.order(),
    })
}
