//! The functions `F`, `G`, `H` of `t = cos α`, two routes to
//! `F'' + G'' + H''`, and the integrand `L(t, z)` whose nonnegativity on
//! `Ω` makes the sum convex.

use std::f64::consts::PI;

use serde::Serialize;

use super::{h_series, kink_moment, RadialPoint};
use crate::error::{domain, Result};
use crate::identities::{kernel_k, KernelParams};
use crate::quadrature::{integrate, QuadratureRule};
use crate::series::{normalized_product_series, SeriesControl, SeriesSum};
use crate::special::kernel_normalization;

/// `F(t)`, `G(t)`, `H(t)` and the truncation order used for `H`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fgh {
    pub f: f64,
    pub g: f64,
    pub h: f64,
    pub order: usize,
}

/// `F(t) = ∫|δt - x|(1-x²)^{(n-3)/2} dx`,
/// `G(t) = (n-2)ρt ∫|δt - x|(1-x²)^{(n-3)/2} x dx` and the series `H(t)`.
pub fn fgh(t: f64, point: &RadialPoint, ctl: &SeriesControl, rule: &QuadratureRule) -> Result<Fgh> {
    if !(-1.0..=1.0).contains(&t) {
        return Err(domain("t", t, "must lie in [-1, 1]"));
    }
    let n = point.dim().nf();
    let s = point.delta() * t;
    let f = kink_moment(n, s, 0, rule)?;
    let g = (n - 2.0) * point.rho() * t * kink_moment(n, s, 1, rule)?;
    let h = h_series(point, t, ctl)?;
    Ok(Fgh {
        f,
        g,
        h: h.value,
        order: h.order,
    })
}

/// Weights of the three series/kernel terms of `F'' + G'' + H''`, without
/// the common `δ²`: `2`, `-4n/(n-1)`, `2n³/((n+1)(n-1)(n-2))`.
fn term_weights(n: f64) -> [f64; 3] {
    [
        2.0,
        -4.0 * n / (n - 1.0),
        2.0 * n * n * n / ((n + 1.0) * (n - 1.0) * (n - 2.0)),
    ]
}

/// `F'' + G'' + H''` as three normalised Gegenbauer product series in
/// `λ = (n-2)/2, n/2, (n+2)/2`, each evaluated at `(δt, t)`.
pub fn second_derivative_series(
    t: f64,
    point: &RadialPoint,
    ctl: &SeriesControl,
) -> Result<SeriesSum> {
    if !(t.abs() < 1.0) {
        return Err(domain("t", t, "must lie in (-1, 1)"));
    }
    let dim = point.dim();
    let n = dim.nf();
    let (rho, delta) = (point.rho(), point.delta());
    if rho == 0.0 {
        return Ok(SeriesSum { value: 0.0, order: 0 });
    }
    let x = delta * t;
    let w = 1.0 - x * x;
    let weights = term_weights(n);
    let lambdas = [dim.lambda_low, dim.lambda_mid, dim.lambda_high];
    let powers = [(n - 3.0) / 2.0, (n - 1.0) / 2.0, (n + 1.0) / 2.0];
    let mut value = 0.0;
    let mut order = 0;
    for i in 0..3 {
        let s = normalized_product_series(lambdas[i], x, t, rho, ctl)?;
        value += weights[i] * w.powf(powers[i]) * s.value;
        order = order.max(s.order);
    }
    Ok(SeriesSum {
        value: delta * delta * value,
        order,
    })
}

/// A point `(t, z)` together with its membership in
/// `Ω = {1 - δ²t² - t² - z² + 2δt²z > 0}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPoint {
    pub t: f64,
    pub z: f64,
    pub delta: f64,
    pub in_omega: bool,
}

impl KernelPoint {
    pub fn new(t: f64, z: f64, delta: f64) -> Self {
        let in_omega = t.abs() < 1.0 && z.abs() < 1.0 && Self::discriminant_of(t, z, delta) > 0.0;
        Self {
            t,
            z,
            delta,
            in_omega,
        }
    }

    /// `1 - δ²t² - t² - z² + 2δt²z`, evaluated as
    /// `(1 - δ²t²)(1 - t²) - (z - δt²)²` to keep it accurate near `∂Ω`.
    fn discriminant_of(t: f64, z: f64, delta: f64) -> f64 {
        let x = delta * t;
        let d = z - x * t;
        (1.0 - x * x) * (1.0 - t * t) - d * d
    }

    pub fn discriminant(&self) -> f64 {
        Self::discriminant_of(self.t, self.z, self.delta)
    }
}

/// `L(t, z)` for fixed `(n, ρ)`, in the factored form
/// `2Γ((n-1)/2)/(Γ((n-2)/2)Γ(1/2)) · D^{(n-4)/2} / (E^{(n+2)/2}(1-t²)^{(n+1)/2}) · (A - nB/(n-2))²`
/// with `D` the discriminant, `E = 1 - 2ρz + ρ²`, `A = E(1-t²)` and `B = D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LKernel {
    n: f64,
    rho: f64,
    delta: f64,
    scale: f64,
}

impl LKernel {
    pub fn new(point: &RadialPoint) -> Self {
        let n = point.dim().nf();
        Self {
            n,
            rho: point.rho(),
            delta: point.delta(),
            scale: 2.0 * kernel_normalization((n - 2.0) / 2.0),
        }
    }

    pub fn point(&self, t: f64, z: f64) -> KernelPoint {
        KernelPoint::new(t, z, self.delta)
    }

    /// `L(t, z)`; zero outside `Ω`.
    pub fn eval(&self, p: &KernelPoint) -> f64 {
        if !p.in_omega {
            return 0.0;
        }
        let n = self.n;
        let d = p.discriminant();
        let e = 1.0 - 2.0 * self.rho * p.z + self.rho * self.rho;
        let one_t = 1.0 - p.t * p.t;
        let a = e * one_t;
        self.scale * d.powf((n - 4.0) / 2.0)
            / (e.powf((n + 2.0) / 2.0) * one_t.powf((n + 1.0) / 2.0))
            * bracket_square(a, d, n)
    }
}

/// `L(t, z)` for the point `(n, ρ)`; see [`LKernel`].
pub fn l_kernel(p: &KernelPoint, n: u32, rho: f64) -> Result<f64> {
    let point = RadialPoint::new(n, rho)?;
    if (point.delta() - p.delta).abs() > 1e-15 {
        return Err(domain("delta", p.delta, "must equal (n-2)rho/n"));
    }
    Ok(LKernel::new(&point).eval(p))
}

/// `L(t, z)` from its definition as a weighted sum of three product-formula
/// kernels `K_λ(δt, t, z)` with `λ = (n-2)/2, n/2, (n+2)/2`.
pub fn l_kernel_unfactored(p: &KernelPoint, point: &RadialPoint) -> Result<f64> {
    if !p.in_omega {
        return Ok(0.0);
    }
    let dim = point.dim();
    let n = dim.nf();
    let rho = point.rho();
    let x = point.delta() * p.t;
    let w = 1.0 - x * x;
    let e = 1.0 - 2.0 * rho * p.z + rho * rho;
    let weights = term_weights(n);
    let lambdas = [dim.lambda_low, dim.lambda_mid, dim.lambda_high];
    let mut sum = 0.0;
    for i in 0..3 {
        let lam = lambdas[i];
        let params = KernelParams::new(lam, x, p.t)?;
        sum += weights[i] * w.powf(lam - 0.5) * e.powf(-lam) * kernel_k(&params, p.z);
    }
    Ok(sum)
}

/// `A² - (2n/(n-2))AB + (n²/(n-2)²)B²`.
pub fn bracket_expanded(a: f64, b: f64, n: f64) -> f64 {
    let r = n / (n - 2.0);
    a * a - 2.0 * r * a * b + r * r * b * b
}

/// `(A - nB/(n-2))²`.
pub fn bracket_square(a: f64, b: f64, n: f64) -> f64 {
    let v = a - n / (n - 2.0) * b;
    v * v
}

/// `F'' + G'' + H'' = δ² ∫ L(t, z) dz` over the support of `K_λ(δt, t, ·)`,
/// integrated in `θ` with `z = δt² + r cos θ`.
///
/// The factor `(1-t²)^{-(n+1)/2}` in `L` makes this route ill-conditioned
/// as `|t| → 1`; it is accepted on `|t| ≤ 0.999`.
pub fn second_derivative_kernel(t: f64, point: &RadialPoint, rule: &QuadratureRule) -> Result<f64> {
    if !(t.abs() <= 0.999) {
        return Err(domain("t", t, "kernel route is limited to |t| <= 0.999"));
    }
    let delta = point.delta();
    if point.rho() == 0.0 {
        return Ok(0.0);
    }
    let kernel = LKernel::new(point);
    let x = delta * t;
    let centre = x * t;
    let r = ((1.0 - x * x) * (1.0 - t * t)).sqrt();
    let integral = integrate(
        |theta| {
            let z = centre + r * theta.cos();
            kernel.eval(&kernel.point(t, z)) * r * theta.sin()
        },
        0.0,
        PI,
        rule,
    )?;
    Ok(delta * delta * integral)
}
