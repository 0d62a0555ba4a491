//! `L^p` norms of the modified kernel `K_gamma(x, y) = k(x - y) - k(y)` with
//! `k(y) = |y|^{gamma - d} / C_gamma`, by direct quadrature.

use std::f64::consts::PI;

use statrs::function::gamma::gamma as gamma_fn;

use super::{kernel_constant, FracOrder};
use crate::error::Result;
use crate::quad::{tail, tanh_sinh_from_zero};

const INNER_TOL: f64 = 1e-8;
const OUTER_TOL: f64 = 1e-9;
const POLAR_TOL: f64 = 1e-6;
const FLOOR: f64 = 1e-300;

/// `|dx^a - d0^a|` from the two distances.
fn diff(dx: f64, d0: f64, a: f64) -> f64 {
    (dx.powf(a) - d0.powf(a)).abs()
}

/// `|(r^2 + delta r^2)^{a/2} - r^a|` without cancellation, for `|delta|` small.
fn diff_far(r: f64, delta: f64, a: f64) -> f64 {
    (r.powf(a) * (0.5 * a * delta.ln_1p()).exp_m1()).abs()
}

/// `||K_gamma(x, .)||_{L^p}` for `x` in `R^d`.
///
/// Requires `p > 1` and `d(1 - 1/p) < gamma < d(1 - 1/p) + 1`.
pub fn kernel_norm(x: &[f64], gamma: f64, p: f64) -> Result<f64> {
    let d = x.len();
    FracOrder::new(gamma, d, p).check_kernel()?;
    let c = kernel_constant(gamma, d)?.abs();
    let big_r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if big_r == 0.0 {
        return Ok(0.0);
    }
    let a = gamma - d as f64;
    let integral = if d == 1 { line_integral(big_r, a, p)? } else { polar_integral(big_r, a, p, d)? };
    Ok(integral.powf(1.0 / p) / c)
}

fn line_integral(x: f64, a: f64, p: f64) -> Result<f64> {
    let g = |dx: f64, d0: f64| diff(dx, d0, a).powf(p);
    let far = |y: f64| diff_far(y.abs(), -2.0 * x / y + (x / y).powi(2), a).powf(p);
    let parts = [
        tanh_sinh_from_zero(|t| g(x - t, t), 0.5 * x, OUTER_TOL, FLOOR)?,
        tanh_sinh_from_zero(|t| g(t, x - t), 0.5 * x, OUTER_TOL, FLOOR)?,
        tanh_sinh_from_zero(|t| g(t, x + t), x, OUTER_TOL, FLOOR)?,
        tail(far, 2.0 * x, OUTER_TOL, FLOOR)?,
        tanh_sinh_from_zero(|t| g(x + t, t), x, OUTER_TOL, FLOOR)?,
        tail(|r| far(-r), x, OUTER_TOL, FLOOR)?,
    ];
    Ok(parts.iter().map(|e| e.value).sum())
}

fn polar_integral(big_r: f64, a: f64, p: f64, d: usize) -> Result<f64> {
    // |S^{d-2}|, the measure of the sphere orthogonal to the x axis
    let sphere = 2.0 * PI.powf(0.5 * (d as f64 - 1.0)) / gamma_fn(0.5 * (d as f64 - 1.0));
    let angular = |r: f64| -> f64 {
        let integrand = |theta: f64| {
            let s = (0.5 * theta).sin();
            let v = if r >= 2.0 * big_r {
                let delta = (big_r * big_r - 2.0 * r * big_r * theta.cos()) / (r * r);
                diff_far(r, delta, a)
            } else {
                let dx = ((r - big_r).powi(2) + 4.0 * r * big_r * s * s).sqrt();
                diff(dx, r, a)
            };
            v.powf(p) * theta.sin().powi(d as i32 - 2)
        };
        match tanh_sinh_from_zero(integrand, PI, INNER_TOL, FLOOR) {
            Ok(e) => sphere * e.value * r.powi(d as i32 - 1),
            Err(_) => f64::NAN,
        }
    };
    let parts = [
        tanh_sinh_from_zero(angular, 0.5 * big_r, POLAR_TOL, FLOOR)?,
        tanh_sinh_from_zero(|t| angular(big_r - t), 0.5 * big_r, POLAR_TOL, FLOOR)?,
        tanh_sinh_from_zero(|t| angular(big_r + t), big_r, POLAR_TOL, FLOOR)?,
        tail(angular, 2.0 * big_r, POLAR_TOL, FLOOR)?,
    ];
    Ok(parts.iter().map(|e| e.value).sum())
}

/// `||K_gamma(x, .) - K_gamma(x', .)||_{L^p}` on the line, integrated in the
/// original variable around both singular points.
pub fn kernel_difference_norm_1d(x: f64, x_prime: f64, gamma: f64, p: f64) -> Result<f64> {
    FracOrder::new(gamma, 1, p).check_kernel()?;
    let c = kernel_constant(gamma, 1)?.abs();
    let (s1, s2) = (x.min(x_prime), x.max(x_prime));
    let width = s2 - s1;
    if width == 0.0 {
        return Ok(0.0);
    }
    let a = gamma - 1.0;
    let mid = 0.5 * (s1 + s2);
    // `t` is the exact distance to the nearer singular point; the other
    // distance is formed from absolute coordinates.
    let near1 = |t: f64, y: f64| diff(t, (s2 - y).abs(), a).powf(p);
    let near2 = |t: f64, y: f64| diff(t, (s1 - y).abs(), a).powf(p);
    let parts = [
        tanh_sinh_from_zero(|t| near1(t, s1 - t), width, OUTER_TOL, FLOOR)?,
        tanh_sinh_from_zero(|t| near1(t, s1 + t), mid - s1, OUTER_TOL, FLOOR)?,
        tanh_sinh_from_zero(|t| near2(t, s2 - t), s2 - mid, OUTER_TOL, FLOOR)?,
        tanh_sinh_from_zero(|t| near2(t, s2 + t), width, OUTER_TOL, FLOOR)?,
        // beyond one width on either side: the nearer point is at distance r
        tail(|r| diff_far(r, (s2 - s1) / r * (2.0 + (s2 - s1) / r), a).powf(p), width, OUTER_TOL, FLOOR)?,
        tail(|r| diff_far(r, (s2 - s1) / r * (2.0 + (s2 - s1) / r), a).powf(p), width, OUTER_TOL, FLOOR)?,
    ];
    Ok(parts.iter().map(|e| e.value).sum::<f64>().powf(1.0 / p) / c)
}
