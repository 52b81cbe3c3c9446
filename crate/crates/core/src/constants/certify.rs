//! Grid certificates: convexity of `F + G + H` in `t`, and maximality of
//! `α ↦ C(ρe₁, ℓ_α)` at the radial direction.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::convexity::{second_derivative_kernel, second_derivative_series};
use super::{constant_radial, constant_series, ConstantQuery, RadialPoint};
use crate::error::{domain, Result};
use crate::quadrature::QuadratureRule;
use crate::series::SeriesControl;

/// Smallest second derivative accepted as "nonnegative".
pub const CONVEXITY_THRESHOLD: f64 = -1e-12;
/// Smallest `C(ℓ_0) - max_interior C(ℓ_α)` accepted.
pub const RADIAL_GAP_THRESHOLD: f64 = -1e-12;
/// Half-width of the default `t` grid.
pub const T_GRID_EDGE: f64 = 0.999;

/// `size` equispaced points on `[-0.999, 0.999]`.
pub fn default_t_grid(size: usize) -> Vec<f64> {
    let step = 2.0 * T_GRID_EDGE / (size - 1) as f64;
    (0..size)
        .map(|i| if i + 1 == size { T_GRID_EDGE } else { -T_GRID_EDGE + step * i as f64 })
        .collect()
}

/// `steps + 1` equispaced angles from `0` to `π` inclusive.
pub fn default_alpha_grid(steps: usize) -> Vec<f64> {
    (0..=steps)
        .map(|i| if i == steps { PI } else { PI * i as f64 / steps as f64 })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub n: u32,
    pub rho: f64,
    pub grid_size: usize,
    pub min_second_derivative: f64,
    pub argmin_t: f64,
    pub threshold: f64,
    pub max_cross_route_discrepancy: f64,
    pub truncation_order: usize,
    pub quad_order: usize,
    pub pass: bool,
}

/// Evaluate `F'' + G'' + H''` by the series route on `grid_size` points of
/// `[-0.999, 0.999]`, compare with the kernel route at every point, and
/// check the minimum against [`CONVEXITY_THRESHOLD`].
pub fn certify_convexity(
    point: &RadialPoint,
    grid_size: usize,
    ctl: &SeriesControl,
    rule: &QuadratureRule,
) -> Result<ConvexityReport> {
    if grid_size < 3 {
        return Err(domain("grid_size", grid_size as f64, "must be at least 3"));
    }
    let grid = default_t_grid(grid_size);
    let evals = grid
        .par_iter()
        .map(|&t| {
            let s = second_derivative_series(t, point, ctl)?;
            let k = second_derivative_kernel(t, point, rule)?;
            Ok((t, s.value, (s.value - k).abs(), s.order))
        })
        .collect::<Result<Vec<_>>>()?;

    // sequential reduction; strict comparison keeps the smallest t on ties
    let mut min = f64::INFINITY;
    let mut argmin = grid[0];
    let mut max_disc: f64 = 0.0;
    let mut order = 0;
    for &(t, v, disc, o) in &evals {
        if v < min {
            min = v;
            argmin = t;
        }
        max_disc = max_disc.max(disc);
        order = order.max(o);
    }
    Ok(ConvexityReport {
        n: point.n(),
        rho: point.rho(),
        grid_size,
        min_second_derivative: min,
        argmin_t: argmin,
        threshold: CONVEXITY_THRESHOLD,
        max_cross_route_discrepancy: max_disc,
        truncation_order: order,
        quad_order: rule.order(),
        pass: min >= CONVEXITY_THRESHOLD,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialMaxReport {
    pub n: u32,
    pub rho: f64,
    pub grid_size: usize,
    /// Every grid angle whose value ties the maximum.
    pub argmax_alpha: Vec<f64>,
    pub max_value: f64,
    pub value_at_zero: f64,
    pub value_at_pi: f64,
    /// `C(ℓ_0)` minus the largest value at a grid angle strictly inside `(0, π)`.
    pub radial_gap: f64,
    pub radial_constant: f64,
    pub radial_discrepancy: f64,
    pub threshold: f64,
    pub truncation_order: usize,
    pub quad_order: usize,
    pub pass: bool,
}

impl RadialMaxReport {
    /// `true` when every maximiser is `0` or `π`.
    pub fn argmax_at_endpoints_only(&self) -> bool {
        self.argmax_alpha.iter().all(|&a| a == 0.0 || a == PI)
    }
}

/// Evaluate `C(ρe₁, ℓ_α)` over `alpha_grid`, which must be sorted and run
/// from `0` to `π`. Values within `1e-12·max(1, |max|)` of the maximum are
/// reported as tied maximisers. Passes when `α = 0` or `α = π` is a
/// maximiser and the interior gap is at least [`RADIAL_GAP_THRESHOLD`].
pub fn certify_radial_max(
    point: &RadialPoint,
    alpha_grid: &[f64],
    ctl: &SeriesControl,
    rule: &QuadratureRule,
) -> Result<RadialMaxReport> {
    if alpha_grid.len() < 2 || alpha_grid[0] != 0.0 || *alpha_grid.last().unwrap() != PI {
        return Err(domain(
            "alpha_grid",
            alpha_grid.len() as f64,
            "grid must start at 0 and end at pi",
        ));
    }
    if alpha_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(domain("alpha_grid", 0.0, "grid must be strictly increasing"));
    }
    let values = alpha_grid
        .par_iter()
        .map(|&alpha| constant_series(&ConstantQuery::at(*point, alpha)?, ctl, rule))
        .collect::<Result<Vec<_>>>()?;

    let max_value = values.iter().map(|v| v.value).fold(f64::NEG_INFINITY, f64::max);
    let tie = 1e-12 * max_value.abs().max(1.0);
    let argmax_alpha: Vec<f64> = alpha_grid
        .iter()
        .zip(&values)
        .filter(|(_, v)| v.value >= max_value - tie)
        .map(|(&a, _)| a)
        .collect();
    let value_at_zero = values[0].value;
    let value_at_pi = values[values.len() - 1].value;
    let interior_max = values[1..values.len() - 1]
        .iter()
        .map(|v| v.value)
        .fold(f64::NEG_INFINITY, f64::max);
    let radial_gap = value_at_zero - interior_max;
    let radial_constant = constant_radial(point, rule)?;
    let order = values.iter().map(|v| v.order).max().unwrap_or(0);
    let endpoint_is_max = argmax_alpha.iter().any(|&a| a == 0.0 || a == PI);
    Ok(RadialMaxReport {
        n: point.n(),
        rho: point.rho(),
        grid_size: alpha_grid.len(),
        argmax_alpha,
        max_value,
        value_at_zero,
        value_at_pi,
        radial_gap,
        radial_constant,
        radial_discrepancy: (max_value - radial_constant).abs(),
        threshold: RADIAL_GAP_THRESHOLD,
        truncation_order: order,
        quad_order: rule.order(),
        pass: endpoint_is_max && radial_gap >= RADIAL_GAP_THRESHOLD,
    })
}
