//! Fractional operators on periodic grids.
//!
//! Every operator is a radial Fourier multiplier with frequencies
//! `lambda = k / L`. The Riesz potential `I_gamma` uses `(2 pi |lambda|)^{-gamma}`
//! with the zero-frequency bin set to zero.

mod kernel;

pub use kernel::{kernel_difference_norm_1d, kernel_norm};

use std::f64::consts::PI;

use statrs::function::gamma::gamma as gamma_fn;

use crate::error::{Error, Result};
use crate::fft;
use crate::field::SampledField;

/// Order and exponent of a fractional operator, with the admissibility
/// windows used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracOrder {
    pub gamma: f64,
    pub d: usize,
    pub p: f64,
}

impl FracOrder {
    pub fn new(gamma: f64, d: usize, p: f64) -> Self {
        Self { gamma, d, p }
    }

    /// `0 < gamma < d`: the Riesz kernel is locally integrable.
    pub fn check_pointwise(&self) -> Result<()> {
        let d = self.d as f64;
        if !(self.gamma > 0.0 && self.gamma < d) {
            return Err(Error::Window(format!("0 < gamma < d fails: gamma = {}, d = {}", self.gamma, d)));
        }
        Ok(())
    }

    /// `d(1 - 1/p) < gamma < d(1 - 1/p) + 1`, `p > 1`: `K_gamma(x, .)` lies in `L^p`.
    pub fn check_kernel(&self) -> Result<()> {
        let (g, p, d) = (self.gamma, self.p, self.d as f64);
        if !(p > 1.0) {
            return Err(Error::Window(format!("p > 1 fails: p = {p}")));
        }
        let lo = d * (1.0 - 1.0 / p);
        if !(g > lo) {
            return Err(Error::Window(format!("d(1 - 1/p) < gamma fails: {lo} >= {g}")));
        }
        if !(g < lo + 1.0) {
            return Err(Error::Window(format!("gamma < d(1 - 1/p) + 1 fails: {g} >= {}", lo + 1.0)));
        }
        Ok(())
    }
}

pub(crate) fn check_fft_grid(field: &SampledField) -> Result<()> {
    match field.shape().iter().find(|s| !s.is_power_of_two()) {
        Some(&s) => Err(Error::NotPowerOfTwo(s)),
        None => Ok(()),
    }
}

fn riesz_multiplier(gamma: f64) -> impl Fn(f64) -> f64 {
    move |lam: f64| if lam == 0.0 { 0.0 } else { (2.0 * PI * lam).powf(-gamma) }
}

/// Riesz potential `I_gamma`. Negative orders give fractional derivatives.
pub fn riesz_apply(field: &SampledField, gamma: f64) -> Result<SampledField> {
    check_fft_grid(field)?;
    if !gamma.is_finite() {
        return Err(Error::invalid("order must be finite"));
    }
    Ok(fft::apply_radial(field, riesz_multiplier(gamma)))
}

/// Normalisation `C_gamma = pi^{d/2} 2^gamma Gamma(gamma/2) / Gamma((d - gamma)/2)`
/// of the kernel `|x|^{gamma - d} / C_gamma`.
pub fn riesz_constant(gamma: f64, d: usize) -> Result<f64> {
    FracOrder::new(gamma, d, 2.0).check_pointwise()?;
    let d = d as f64;
    Ok(PI.powf(0.5 * d) * 2f64.powf(gamma) * gamma_fn(0.5 * gamma) / gamma_fn(0.5 * (d - gamma)))
}

/// Kernel constant for any non-integer-pole order, signed. Used where the
/// kernel is only needed up to differences (`gamma` may exceed `d`).
pub(crate) fn kernel_constant(gamma: f64, d: usize) -> Result<f64> {
    let d = d as f64;
    let half = 0.5 * (d - gamma);
    if !(gamma > 0.0) || (half <= 0.0 && half == half.round()) {
        return Err(Error::Window(format!(
            "kernel |x|^(gamma-d) needs gamma > 0 and gamma - d not in 0, 2, 4, ...: gamma = {gamma}, d = {d}"
        )));
    }
    Ok(PI.powf(0.5 * d) * 2f64.powf(gamma) * gamma_fn(0.5 * gamma) / gamma_fn(half))
}

/// `K_gamma f(x) = I_gamma f(x) - I_gamma f(0)`; zero at the origin sample.
pub fn modified_apply(field: &SampledField, gamma: f64) -> Result<SampledField> {
    let mut out = riesz_apply(field, gamma)?;
    let origin = out.at_origin();
    out.data_mut().iter_mut().for_each(|v| *v -= origin);
    Ok(out)
}

/// Bessel potential with multiplier `(1 + |lambda|^2)^{s/2}`.
pub fn bessel_apply(field: &SampledField, s: f64) -> Result<SampledField> {
    check_fft_grid(field)?;
    Ok(fft::apply_radial(field, move |lam| (1.0 + lam * lam).powf(0.5 * s)))
}

/// `||f||_p + ||((2 pi |lambda|)^s f^)^v||_p`, an equivalent Sobolev norm for `s >= 0`.
pub fn sobolev_norm(field: &SampledField, p: f64, s: f64) -> Result<f64> {
    check_fft_grid(field)?;
    if !(p >= 1.0) {
        return Err(Error::invalid(format!("p = {p} must be at least 1")));
    }
    if !(s >= 0.0) {
        return Err(Error::invalid(format!("smoothness s = {s} must be non-negative")));
    }
    let high = fft::apply_radial(field, move |lam| (2.0 * PI * lam).powf(s));
    Ok(field.lp_norm(p) + high.lp_norm(p))
}

/// `(int |f^(lambda)|^p (1 + |lambda|^2)^{-d} dlambda)^{1/p}`.
pub fn weighted_fourier_norm(field: &SampledField, p: f64) -> Result<f64> {
    weighted_fourier_norm_with(field, p, field.d() as f64)
}

/// As [`weighted_fourier_norm`] with weight `(1 + |lambda|^2)^{-exponent}`.
///
/// The continuous transform is approximated by `h^d` times the DFT; the
/// frequency integral is a Riemann sum with cell `L^{-d}`.
pub fn weighted_fourier_norm_with(field: &SampledField, p: f64, exponent: f64) -> Result<f64> {
    check_fft_grid(field)?;
    if !(p >= 1.0) {
        return Err(Error::invalid(format!("p = {p} must be at least 1")));
    }
    let spec = fft::forward(field);
    let mags = fft::frequency_magnitudes(field);
    let cell = field.cell();
    let dual_cell: f64 = field.shape().iter().map(|&n| 1.0 / (n as f64 * field.spacing())).product();
    let sum: f64 = spec
        .iter()
        .zip(&mags)
        .map(|(c, &lam)| (cell * c.norm()).powf(p) * (1.0 + lam * lam).powf(-exponent))
        .sum();
    Ok((sum * dual_cell).powf(1.0 / p))
}

/// Outcome of [`laplacian_identity_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplacianCheck {
    /// Relative l2 difference for the better sign.
    pub residual: f64,
    /// `+1` if `Delta I_gamma f = I_{gamma-2} f`, `-1` if `= -I_{gamma-2} f`.
    pub sign: f64,
}

/// Compares the spectral Laplacian of `I_gamma f` with `+-I_{gamma-2} f`.
pub fn laplacian_identity_check(field: &SampledField, gamma: f64) -> Result<LaplacianCheck> {
    check_fft_grid(field)?;
    let lap = fft::apply_radial(field, move |lam| {
        -4.0 * PI * PI * lam * lam * riesz_multiplier(gamma)(lam)
    });
    let lower = riesz_apply(field, gamma - 2.0)?;
    let norm: f64 = lower.data().iter().map(|v| v * v).sum::<f64>().sqrt();
    let diff = |sign: f64| -> f64 {
        let num: f64 = lap
            .data()
            .iter()
            .zip(lower.data())
            .map(|(a, b)| (a - sign * b).powi(2))
            .sum::<f64>()
            .sqrt();
        if norm == 0.0 {
            num
        } else {
            num / norm
        }
    };
    let (plus, minus) = (diff(1.0), diff(-1.0));
    Ok(if minus <= plus {
        LaplacianCheck { residual: minus, sign: -1.0 }
    } else {
        LaplacianCheck { residual: plus, sign: 1.0 }
    })
}

/// `||I_gamma f||_q / ||f||_p` with `1/q = 1/p - gamma/d`.
pub fn hls_ratio(field: &SampledField, gamma: f64, p: f64) -> Result<f64> {
    let d = field.d() as f64;
    FracOrder::new(gamma, field.d(), p).check_pointwise()?;
    let inv_q = 1.0 / p - gamma / d;
    if !(p > 1.0 && inv_q > 0.0) {
        return Err(Error::Window(format!("1 < p < d/gamma fails: p = {p}, d/gamma = {}", d / gamma)));
    }
    let out = riesz_apply(field, gamma)?;
    Ok(out.lp_norm(1.0 / inv_q) / field.lp_norm(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Grid;

    fn harmonic(n: usize, h: f64, freq: f64) -> SampledField {
        let g = Grid::new(1, n, h).unwrap();
        let l = g.length();
        g.sample(|x| (2.0 * PI * freq * x[0] / l).cos())
    }

    #[test]
    fn riesz_on_harmonic() {
        let f = harmonic(64, 1.0 / 16.0, 3.0); // L = 4
        let out = riesz_apply(&f, 0.7).unwrap();
        let want = f.scaled((2.0 * PI * 3.0 / 4.0).powf(-0.7));
        assert!(out.max_abs_diff(&want) < 1e-13);
    }

    #[test]
    fn order_zero_removes_mean() {
        let g = Grid::new(1, 32, 0.125).unwrap();
        let f = g.sample(|x| 2.0 + x[0].sin());
        let out = riesz_apply(&f, 0.0).unwrap();
        let mean = f.data().iter().sum::<f64>() / 32.0;
        for (a, b) in out.data().iter().zip(f.data()) {
            assert!((a - (b - mean)).abs() < 1e-13);
        }
    }

    #[test]
    fn constants() {
        assert!((riesz_constant(1.0, 2).unwrap() - 2.0 * PI).abs() < 1e-12);
        assert!((riesz_constant(2.0, 4).unwrap() - 4.0 * PI * PI).abs() < 1e-11);
        assert!(riesz_constant(0.0, 1).is_err());
        assert!(riesz_constant(1e-8, 1).unwrap() > 1e7);
    }

    #[test]
    fn modified_is_zero_at_origin() {
        let g = Grid::new(2, 16, 0.25).unwrap();
        let f = g.sample(|x| (-x[0] * x[0] - 2.0 * x[1] * x[1]).exp() * x[0]);
        assert_eq!(modified_apply(&f, 1.3).unwrap().at_origin(), 0.0);
    }

    #[test]
    fn bessel_fixes_constants() {
        let g = Grid::new(1, 16, 0.5).unwrap();
        let f = g.sample(|_| 3.0);
        assert!(bessel_apply(&f, -2.0).unwrap().max_abs_diff(&f) < 1e-14);
    }

    #[test]
    fn sobolev_single_bin() {
        let f = harmonic(64, 1.0 / 64.0, 5.0); // L = 1
        let first = f.lp_norm(3.0);
        let total = sobolev_norm(&f, 3.0, 1.0).unwrap();
        assert!(((total - first) / first - 2.0 * PI * 5.0).abs() < 1e-10);
        assert!((sobolev_norm(&f, 3.0, 0.0).unwrap() - 2.0 * first).abs() < 1e-12);
    }

    #[test]
    fn weighted_norm_monotone_in_exponent() {
        let g = Grid::new(1, 128, 1.0 / 16.0).unwrap();
        let f = g.sample(|x| (-8.0 * x[0] * x[0]).exp());
        let a = weighted_fourier_norm_with(&f, 1.5, 1.0).unwrap();
        let b = weighted_fourier_norm_with(&f, 1.5, 2.0).unwrap();
        assert!(b <= a);
        assert_eq!(weighted_fourier_norm(&g.zeros(), 1.5).unwrap(), 0.0);
    }

    #[test]
    fn laplacian_sign_is_negative() {
        let g = Grid::new(1, 256, 1.0 / 32.0).unwrap();
        let f = g.sample(|x| (-4.0 * x[0] * x[0]).exp() * (3.0 * x[0]).sin());
        let c = laplacian_identity_check(&f, 2.5).unwrap();
        assert_eq!(c.sign, -1.0);
        assert!(c.residual < 1e-10);
        assert_eq!(laplacian_identity_check(&g.zeros(), 2.5).unwrap().residual, 0.0);
    }

    #[test]
    fn windows_name_the_inequality() {
        let e = FracOrder::new(0.3, 1, 2.0).check_kernel().unwrap_err();
        assert!(e.to_string().contains("d(1 - 1/p) < gamma"));
        let e = FracOrder::new(1.6, 1, 2.0).check_kernel().unwrap_err();
        assert!(e.to_string().contains("gamma < d(1 - 1/p) + 1"));
    }
}
