//! Numerical certificates for the Gegenbauer identities the constant
//! representations rest on: orthogonality, the Gegenbauer and Legendre
//! addition theorems, the product formula and its kernel form, the
//! weighted derivative formula and the closed form of the kink integral.
//!
//! Every check returns both sides so callers decide on tolerances.

pub mod suite;

use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::gegenbauer::{assoc_legendre, eval_recurrence, legendre, GegenbauerIndex};
use crate::quadrature::{integrate, integrate_split, QuadratureRule};
use crate::special::{gamma_ratio, kernel_normalization, ln_gamma_ratio};

pub use suite::{run_suite, IdentityCheck, IdentityReport, SuiteConfig};

/// Parameters `(λ, x, y)` of the product-formula kernel `K_λ(x, y, ·)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    lambda: f64,
    x: f64,
    y: f64,
}

impl KernelParams {
    pub fn new(lambda: f64, x: f64, y: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(domain("lambda", lambda, "kernel requires lambda > 0"));
        }
        for (name, v) in [("x", x), ("y", y)] {
            if !(v.abs() < 1.0) {
                return Err(domain(name, v, "must lie in (-1, 1)"));
            }
        }
        Ok(Self { lambda, x, y })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Half-width `√((1-x²)(1-y²))` of the support around its centre `xy`.
    pub fn radius(&self) -> f64 {
        ((1.0 - self.x * self.x) * (1.0 - self.y * self.y)).sqrt()
    }

    /// The open interval `(xy - r, xy + r)` where the kernel is positive.
    pub fn support(&self) -> (f64, f64) {
        let c = self.x * self.y;
        let r = self.radius();
        (c - r, c + r)
    }

    /// `1 - x² - y² - z² + 2xyz`, written as `(1-x²)(1-y²) - (z-xy)²`.
    pub fn discriminant(&self, z: f64) -> f64 {
        let d = z - self.x * self.y;
        (1.0 - self.x * self.x) * (1.0 - self.y * self.y) - d * d
    }
}

/// Coefficient of the `j`-th term in Gegenbauer's addition theorem,
/// `Γ(2λ-1)/Γ(λ)² · 4^j Γ(k-j+1) Γ(λ+j)² (2λ+2j-1) / Γ(k+2λ+j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdditionCoefficient {
    pub lambda: f64,
    pub k: usize,
    pub j: usize,
    pub value: f64,
}

impl AdditionCoefficient {
    pub fn new(lambda: f64, k: usize, j: usize) -> Result<Self> {
        if !(lambda > 0.5) {
            return Err(domain(
                "lambda",
                lambda,
                "addition theorem needs lambda > 1/2; use the Legendre form at 1/2",
            ));
        }
        if j > k {
            return Err(domain("j", j as f64, "must not exceed k"));
        }
        let (kf, jf) = (k as f64, j as f64);
        let (log, sign) = ln_gamma_ratio(
            &[2.0 * lambda - 1.0, kf - jf + 1.0, lambda + jf, lambda + jf],
            &[lambda, lambda, kf + 2.0 * lambda + jf],
        );
        let value = sign * (log + jf * 4f64.ln()).exp() * (2.0 * lambda + 2.0 * jf - 1.0);
        Ok(Self {
            lambda,
            k,
            j,
            value,
        })
    }
}

/// `∫_{-1}^{1} C_k^λ C_l^λ (1-x²)^{λ-1/2} dx`, integrated in `ψ` after
/// `x = cos ψ` so the weight becomes `sin^{2λ} ψ`.
pub fn orthogonality_integral(
    lambda: f64,
    k: usize,
    l: usize,
    rule: &QuadratureRule,
) -> Result<f64> {
    GegenbauerIndex::new(lambda, k)?;
    if lambda == 0.0 {
        return Err(domain("lambda", lambda, "orthogonality requires lambda != 0"));
    }
    integrate(
        |psi| {
            let c = psi.cos();
            eval_recurrence(lambda, k, c) * eval_recurrence(lambda, l, c) * psi.sin().powf(2.0 * lambda)
        },
        0.0,
        PI,
        rule,
    )
}

/// Closed-form squared norm `Γ(1/2)Γ(λ+1/2)(2λ)_k / (Γ(λ)(k+λ)k!)`.
pub fn orthogonality_norm(lambda: f64, k: usize) -> Result<f64> {
    let idx = GegenbauerIndex::new(lambda, k)?;
    if lambda == 0.0 {
        return Err(domain("lambda", lambda, "orthogonality requires lambda != 0"));
    }
    let ratio = gamma_ratio(&[0.5, lambda + 0.5], &[lambda])?;
    Ok(ratio * idx.value_at_one() / (k as f64 + lambda))
}

/// Right side of Gegenbauer's addition theorem; equals
/// `C_k^λ(cosθ cosφ + sinθ sinφ cosψ)`. Defined for `λ > 1/2`.
pub fn addition_theorem_rhs(lambda: f64, k: usize, theta: f64, phi: f64, psi: f64) -> Result<f64> {
    let (st, sp) = (theta.sin(), phi.sin());
    let (ct, cp, cpsi) = (theta.cos(), phi.cos(), psi.cos());
    let mut sum = 0.0;
    for j in 0..=k {
        let coef = AdditionCoefficient::new(lambda, k, j)?.value;
        let mu = lambda + j as f64;
        sum += coef
            * (st * sp).powi(j as i32)
            * eval_recurrence(mu, k - j, ct)
            * eval_recurrence(mu, k - j, cp)
            * eval_recurrence(lambda - 0.5, j, cpsi);
    }
    Ok(sum)
}

/// Right side of the Legendre addition theorem,
/// `P_k(cosθ)P_k(cosφ) + 2 Σ_j (k-j)!/(k+j)! P_k^j(cosθ) P_k^j(cosφ) cos(jψ)`.
pub fn legendre_addition_rhs(k: usize, theta: f64, phi: f64, psi: f64) -> f64 {
    let (ct, cp) = (theta.cos(), phi.cos());
    let mut sum = legendre(k, ct) * legendre(k, cp);
    // (k-j)!/(k+j)!, updated by 1/((k-j+1)(k+j)) per step
    let mut ratio = 1.0;
    for j in 1..=k {
        ratio /= ((k - j + 1) * (k + j)) as f64;
        sum += 2.0
            * ratio
            * assoc_legendre(k, j, ct)
            * assoc_legendre(k, j, cp)
            * (j as f64 * psi).cos();
    }
    sum
}

/// Both sides of Gegenbauer's product formula:
/// `C_k^λ(cosφ)C_k^λ(cosψ)` and
/// `Γ(λ+1/2)/(Γ(1/2)Γ(λ)) (2λ)_k/k! ∫_0^π C_k^λ(cosφ cosψ + sinφ sinψ cosθ) sin^{2λ-1}θ dθ`.
///
/// Convergence in the quadrature order is spectral when `2λ` is an integer
/// and algebraic otherwise (the weight is then not smooth at `0` and `π`).
pub fn product_formula_check(
    lambda: f64,
    k: usize,
    phi: f64,
    psi: f64,
    rule: &QuadratureRule,
) -> Result<(f64, f64)> {
    let idx = GegenbauerIndex::new(lambda, k)?;
    if !(lambda > 0.0) {
        return Err(domain("lambda", lambda, "product formula requires lambda > 0"));
    }
    let lhs = idx.eval(phi.cos()) * idx.eval(psi.cos());
    let (a, b) = (phi.cos() * psi.cos(), phi.sin() * psi.sin());
    let integral = integrate(
        |theta| idx.eval(a + b * theta.cos()) * theta.sin().powf(2.0 * lambda - 1.0),
        0.0,
        PI,
        rule,
    )?;
    Ok((lhs, kernel_normalization(lambda) * idx.value_at_one() * integral))
}

/// The product-formula kernel `K_λ(x, y, z)`; zero off its support.
pub fn kernel_k(params: &KernelParams, z: f64) -> f64 {
    let d = params.discriminant(z);
    if d <= 0.0 {
        return 0.0;
    }
    let lambda = params.lambda;
    let wx = 1.0 - params.x * params.x;
    let wy = 1.0 - params.y * params.y;
    kernel_normalization(lambda) * d.powf(lambda - 1.0) / (wx * wy).powf(lambda - 0.5)
}

/// `∫ g(z) K_λ(x, y, z) dz` over the support, with `z = xy + r cos θ`.
///
/// The substitution turns the `(λ-1)`-power endpoint behaviour of the
/// kernel into `sin^{2λ-1} θ`; the kernel itself is still evaluated through
/// [`kernel_k`].
pub fn kernel_integral<G>(params: &KernelParams, g: G, rule: &QuadratureRule) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    let c = params.x * params.y;
    let r = params.radius();
    integrate(
        |theta| {
            let z = c + r * theta.cos();
            g(z) * kernel_k(params, z) * r * theta.sin()
        },
        0.0,
        PI,
        rule,
    )
}

/// Both sides of the kernel form of the product formula:
/// `C_k^λ(x)C_k^λ(y)` and `(2λ)_k/k! ∫ C_k^λ(z) K_λ(x,y,z) dz`.
pub fn kernel_product_check(
    params: &KernelParams,
    k: usize,
    rule: &QuadratureRule,
) -> Result<(f64, f64)> {
    let idx = GegenbauerIndex::new(params.lambda, k)?;
    let lhs = idx.eval(params.x) * idx.eval(params.y);
    let integral = kernel_integral(params, |z| idx.eval(z), rule)?;
    Ok((lhs, idx.value_at_one() * integral))
}

/// Step for the central differences used by the derivative certificates.
pub const FD_STEP: f64 = 1e-5;

/// Both sides of the weighted derivative identity: a central difference of
/// `(1-x²)^{λ-1/2} C_k^λ(x)` and
/// `-(k+1)(k+2λ-1)/(2(λ-1)) (1-x²)^{λ-3/2} C_{k+1}^{λ-1}(x)`.
pub fn weighted_derivative_check(lambda: f64, k: usize, x: f64) -> Result<(f64, f64)> {
    GegenbauerIndex::new(lambda, k)?;
    if lambda == 1.0 {
        return Err(domain("lambda", lambda, "identity excludes lambda = 1"));
    }
    if !(x.abs() < 1.0) {
        return Err(domain("x", x, "must lie in (-1, 1)"));
    }
    let f = |t: f64| (1.0 - t * t).powf(lambda - 0.5) * eval_recurrence(lambda, k, t);
    let fd = (f(x + FD_STEP) - f(x - FD_STEP)) / (2.0 * FD_STEP);
    let kf = k as f64;
    let rhs = -((kf + 1.0) * (kf + 2.0 * lambda - 1.0) / (2.0 * (lambda - 1.0)))
        * (1.0 - x * x).powf(lambda - 1.5)
        * eval_recurrence(lambda - 1.0, k + 1, x);
    Ok((fd, rhs))
}

fn check_kink_domain(lambda: f64, k: usize, s: f64) -> Result<()> {
    GegenbauerIndex::new(lambda, k)?;
    if k < 2 {
        return Err(domain("k", k as f64, "closed form holds for k >= 2"));
    }
    if !(s.abs() < 1.0) {
        return Err(domain("s", s, "must lie in (-1, 1)"));
    }
    Ok(())
}

/// Closed form of `∫_{-1}^{1} |x-s| (1-x²)^{λ-1/2} C_k^λ(x) dx`:
/// `8λ(λ+1)/(k(k-1)(k+2λ)(k+2λ+1)) (1-s²)^{λ+3/2} C_{k-2}^{λ+2}(s)`.
pub fn kink_integral_closed(lambda: f64, k: usize, s: f64) -> Result<f64> {
    check_kink_domain(lambda, k, s)?;
    let kf = k as f64;
    let coef = 8.0 * lambda * (lambda + 1.0)
        / (kf * (kf - 1.0) * (kf + 2.0 * lambda) * (kf + 2.0 * lambda + 1.0));
    Ok(coef * (1.0 - s * s).powf(lambda + 1.5) * eval_recurrence(lambda + 2.0, k - 2, s))
}

/// The same kink integral by quadrature, in `ψ = arccos x` and split at
/// the kink `ψ = arccos s`.
pub fn kink_integral_brute(lambda: f64, k: usize, s: f64, rule: &QuadratureRule) -> Result<f64> {
    check_kink_domain(lambda, k, s)?;
    integrate_split(
        |psi| {
            let c = psi.cos();
            (c - s).abs() * psi.sin().powf(2.0 * lambda) * eval_recurrence(lambda, k, c)
        },
        0.0,
        PI,
        &[s.acos()],
        rule,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_legendre;

    fn rule() -> QuadratureRule {
        gauss_legendre(128).unwrap()
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-3)
    }

    #[test]
    fn orthogonality_examples() {
        let r = rule();
        assert!(orthogonality_integral(1.0, 0, 2, &r).unwrap().abs() < 1e-12);
        let diag = orthogonality_integral(1.0, 0, 0, &r).unwrap();
        assert!((diag - PI / 2.0).abs() < 1e-12);
        assert!((orthogonality_norm(1.0, 0).unwrap() - PI / 2.0).abs() < 1e-13);
        let diag = orthogonality_integral(1.5, 3, 3, &r).unwrap();
        assert!(close(diag, orthogonality_norm(1.5, 3).unwrap(), 1e-10));
        assert!(orthogonality_integral(0.0, 1, 1, &r).is_err());
    }

    #[test]
    fn addition_coefficient_reduces_at_j_zero() {
        // the j = 0 coefficient is k!/(2λ)_k
        for &lambda in &[0.75, 1.5, 3.0] {
            for k in 0..10 {
                let c = AdditionCoefficient::new(lambda, k, 0).unwrap().value;
                let idx = GegenbauerIndex::new(lambda, k).unwrap();
                assert!(close(c, 1.0 / idx.value_at_one(), 1e-12));
            }
        }
        assert!(AdditionCoefficient::new(0.5, 3, 1).is_err());
        assert!(AdditionCoefficient::new(1.5, 3, 4).is_err());
    }

    #[test]
    fn addition_theorem_examples() {
        assert!((addition_theorem_rhs(1.5, 0, 0.3, 1.0, 2.0).unwrap() - 1.0).abs() < 1e-14);
        let got = addition_theorem_rhs(2.0, 5, 0.0, 1.2, 0.4).unwrap();
        assert!(close(got, eval_recurrence(2.0, 5, 1.2f64.cos()), 1e-12));
        let (t, p, s) = (0.7f64, 1.1f64, 2.0f64);
        let arg = t.cos() * p.cos() + t.sin() * p.sin() * s.cos();
        let got = addition_theorem_rhs(1.5, 4, t, p, s).unwrap();
        assert!((got - eval_recurrence(1.5, 4, arg)).abs() < 1e-10);
        assert!(addition_theorem_rhs(0.5, 2, t, p, s).is_err());
    }

    #[test]
    fn legendre_addition_examples() {
        for &(t, p, s) in &[(0.3, 1.2, 0.7), (2.0, 0.4, 3.0)] {
            let (t, p, s): (f64, f64, f64) = (t, p, s);
            let lhs = t.cos() * p.cos() + t.sin() * p.sin() * s.cos();
            assert!((legendre_addition_rhs(1, t, p, s) - lhs).abs() < 1e-15);
        }
        let got = legendre_addition_rhs(4, 0.9, 0.3, 0.0);
        assert!((got - legendre(4, (0.9f64 - 0.3).cos())).abs() < 1e-14);
        let (t, p, s) = (0.4f64, 2.3f64, 1.7f64);
        let arg = t.cos() * p.cos() + t.sin() * p.sin() * s.cos();
        assert!((legendre_addition_rhs(5, t, p, s) - legendre(5, arg)).abs() < 1e-11);
    }

    #[test]
    fn product_formula_examples() {
        let r = rule();
        let (l, rh) = product_formula_check(1.5, 0, 0.4, 2.2, &r).unwrap();
        assert_eq!(l, 1.0);
        assert!((rh - 1.0).abs() < 1e-12);
        let (l, rh) = product_formula_check(2.0, 5, 0.0, 1.1, &r).unwrap();
        assert!(close(l, rh, 1e-12));
        let (l, rh) = product_formula_check(2.0, 6, 0.9, 1.4, &r).unwrap();
        assert!((l - rh).abs() <= 1e-10);
    }

    #[test]
    fn kernel_examples() {
        let p = KernelParams::new(1.0, 0.0, 0.0).unwrap();
        assert!((kernel_k(&p, 0.5) - 0.5).abs() < 1e-14);
        let p = KernelParams::new(2.0, 0.6, 0.7).unwrap();
        let (lo, hi) = p.support();
        assert_eq!(kernel_k(&p, lo - 1e-3), 0.0);
        assert_eq!(kernel_k(&p, hi + 1e-3), 0.0);
        for i in 0..=200 {
            let z = -1.0 + 2.0 * i as f64 / 200.0;
            assert!(kernel_k(&p, z) >= 0.0);
        }
        assert!(KernelParams::new(0.0, 0.1, 0.1).is_err());
        assert!(KernelParams::new(1.0, 1.0, 0.1).is_err());
    }

    #[test]
    fn kernel_product_examples() {
        let r = rule();
        let p = KernelParams::new(1.5, 0.3, -0.6).unwrap();
        let (l, rh) = kernel_product_check(&p, 0, &r).unwrap();
        assert_eq!(l, 1.0);
        assert!((rh - 1.0).abs() < 1e-12);
        let (l, rh) = kernel_product_check(&p, 4, &r).unwrap();
        assert!((l - rh).abs() <= 1e-9 * l.abs().max(1.0));

        let p0 = KernelParams::new(2.5, 0.0, 0.0).unwrap();
        for k in [1, 3, 5] {
            let (l, rh) = kernel_product_check(&p0, k, &r).unwrap();
            assert_eq!(l, 0.0);
            assert!(rh.abs() < 1e-12);
        }
    }

    #[test]
    fn weighted_derivative_examples() {
        let (l, rh) = weighted_derivative_check(2.0, 0, 0.0).unwrap();
        assert!(l.abs() < 1e-12 && rh.abs() < 1e-15);
        for &(lambda, k, x) in &[(3.0, 2, 0.4), (0.5, 3, -0.2)] {
            let (l, rh) = weighted_derivative_check(lambda, k, x).unwrap();
            assert!((l - rh).abs() < 1e-6, "{lambda} {k} {x}: {l} vs {rh}");
        }
        assert!(weighted_derivative_check(1.0, 2, 0.3).is_err());
        assert!(weighted_derivative_check(2.0, 2, 1.0).is_err());
    }

    #[test]
    fn kink_examples() {
        let r = rule();
        assert!((kink_integral_closed(1.0, 2, 0.0).unwrap() - 0.4).abs() < 1e-15);
        assert!((kink_integral_brute(1.0, 2, 0.0, &r).unwrap() - 0.4).abs() < 1e-13);
        for k in [3, 5, 7] {
            assert_eq!(kink_integral_closed(1.5, k, 0.0).unwrap(), 0.0);
            assert!(kink_integral_brute(1.5, k, 0.0, &r).unwrap().abs() < 1e-13);
        }
        for k in [2, 4, 6] {
            let a = kink_integral_closed(1.5, k, 0.0).unwrap();
            assert!(a.abs() > 0.0);
            assert!((kink_integral_brute(1.5, k, 0.0, &r).unwrap() - a).abs() < 1e-13);
        }
        let a = kink_integral_closed(0.5, 5, 0.7).unwrap();
        let b = kink_integral_brute(0.5, 5, 0.7, &r).unwrap();
        assert!((a - b).abs() <= 1e-9);
        assert!(kink_integral_closed(1.0, 1, 0.2).is_err());
        assert!(kink_integral_brute(1.0, 3, 1.0, &r).is_err());
    }
}
