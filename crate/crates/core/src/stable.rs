//! Symmetric p-stable laws.
//!
//! A law `SpS(p, sigma)` has characteristic function `exp(-sigma^p |xi|^p)`.
//! For `p = 2` this is a centred Gaussian with variance `2 sigma^2`, not
//! `sigma^2`; every routine here uses that convention.

use std::f64::consts::{FRAC_1_PI, PI, SQRT_2};

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use rayon::prelude::*;
use statrs::function::{erf::erf, gamma::gamma, gamma::ln_gamma};

use crate::error::{Error, Result};
use crate::quad;
use crate::rng;

/// Target absolute error of the characteristic-function inversion.
pub const CDF_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableLaw {
    p: f64,
    sigma: f64,
}

impl StableLaw {
    pub fn new(p: f64, sigma: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 2.0) {
            return Err(Error::invalid(format!("stability index p = {p} must lie in (0, 2]")));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::invalid(format!("scale sigma = {sigma} must be positive")));
        }
        Ok(Self { p, sigma })
    }

    /// `SpS(p, 1)`.
    pub fn standard(p: f64) -> Result<Self> {
        Self::new(p, 1.0)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn with_sigma(&self, sigma: f64) -> Result<Self> {
        Self::new(self.p, sigma)
    }

    pub fn char_fn(&self, xi: f64) -> f64 {
        (-(self.sigma * xi.abs()).powf(self.p)).exp()
    }

    /// One draw by the Chambers–Mallows–Stuck method (symmetric case).
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let p = self.p;
        if p == 2.0 {
            let z: f64 = rng.sample(StandardNormal);
            return SQRT_2 * self.sigma * z;
        }
        // U uniform on the open interval (-pi/2, pi/2)
        let u = loop {
            let v: f64 = rng.random();
            if v > 0.0 {
                break PI * (v - 0.5);
            }
        };
        if p == 1.0 {
            return self.sigma * u.tan();
        }
        let w: f64 = Exp1.sample(rng);
        let a = (p * u).sin() / u.cos().powf(1.0 / p);
        let b = (((1.0 - p) * u).cos() / w).powf((1.0 - p) / p);
        self.sigma * a * b
    }

    /// `n` i.i.d. draws. Chunk `c` of [`rng::CHUNK`] draws comes from stream
    /// `c` of `seed`, so the vector is the same for any thread count.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<f64>> {
        if n == 0 {
            return Err(Error::invalid("sample size must be at least 1"));
        }
        let mut out = vec![0.0; n];
        out.par_chunks_mut(rng::CHUNK).enumerate().for_each(|(c, chunk)| {
            let mut r = rng::stream(seed, c as u64);
            for v in chunk.iter_mut() {
                *v = self.draw(&mut r);
            }
        });
        Ok(out)
    }

    /// Distribution function. Closed forms at `p = 1` (Cauchy) and `p = 2`
    /// (Gaussian); characteristic-function inversion otherwise.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if x == 0.0 {
            return Ok(0.5);
        }
        let z = x / self.sigma;
        if self.p == 1.0 {
            return Ok(0.5 + FRAC_1_PI * z.atan());
        }
        if self.p == 2.0 {
            return Ok(0.5 * (1.0 + erf(0.5 * z)));
        }
        if let Some(upper) = tail_series(z.abs(), self.p) {
            return Ok(if z > 0.0 { 1.0 - upper } else { upper });
        }
        self.gil_pelaez_cdf(x, CDF_TOLERANCE)
    }

    /// Gil-Pelaez inversion, `F(x) = 1/2 + (1/pi) int_0^inf sin(t x) Phi(t) / t dt`,
    /// with absolute error target `tol`. Used for every `p`, including the ones
    /// that have closed forms.
    pub fn gil_pelaez_cdf(&self, x: f64, tol: f64) -> Result<f64> {
        if x == 0.0 {
            return Ok(0.5);
        }
        let p = self.p;
        let z = (x / self.sigma).abs();
        // exp(-t^p) < 1e-18 beyond this point
        let upper = 41.5f64.powf(1.0 / p);
        let width = (PI / z).min(1.0);
        let panels = (upper / width).ceil().max(1.0) as usize;
        let panel_tol = tol * PI / panels as f64;
        let integrand = |t: f64| {
            if t < 1e-12 {
                z
            } else {
                (t * z).sin() * (-t.powf(p)).exp() / t
            }
        };
        let mut total = 0.0;
        let mut err = 0.0;
        for i in 0..panels {
            let a = i as f64 * width;
            let b = ((i + 1) as f64 * width).min(upper);
            let e = quad::gauss_kronrod(integrand, a, b, panel_tol)?;
            total += e.value;
            err += e.error;
        }
        if err / PI > tol {
            return Err(Error::Quadrature { achieved: err / PI, target: tol });
        }
        let upper_half = (0.5 + FRAC_1_PI * total).clamp(0.5, 1.0);
        Ok(if x > 0.0 { upper_half } else { 1.0 - upper_half })
    }

    /// `(E|eta|^r)^{1/r} = C_r sigma` for `0 < r < p`.
    ///
    /// `E|eta|^r` is evaluated by quadrature of
    /// `(2/pi) Gamma(1+r) sin(pi r/2) int_0^inf (1 - Phi(t)) t^{-1-r} dt`.
    pub fn fractional_moment(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::invalid(format!("moment order r = {r} must be positive")));
        }
        if r >= self.p {
            return Err(Error::InfiniteMoment { r, p: self.p });
        }
        let p = self.p;
        let g = |t: f64| -(-t.powf(p)).exp_m1() * t.powf(-1.0 - r);
        let near = quad::tanh_sinh_from_zero(g, 1.0, 1e-12, 1e-15)?;
        let far = quad::tail(g, 1.0, 1e-12, 1e-15)?;
        let moment = 2.0 * FRAC_1_PI * gamma(1.0 + r) * (0.5 * PI * r).sin() * (near.value + far.value);
        Ok(moment.powf(1.0 / r) * self.sigma)
    }
}

/// `1 - F(z)` for `SpS(p, 1)` from the large-argument expansion
/// `(1/pi) sum_k (-1)^{k+1} Gamma(kp)/k! sin(k pi p/2) z^{-kp}`.
///
/// The series converges for `p < 1` and is asymptotic for `p > 1`; `None` when
/// the smallest term is not below `1e-10`.
fn tail_series(z: f64, p: f64) -> Option<f64> {
    if z < 1.0 {
        return None;
    }
    let log_z = z.ln();
    let mut sum = 0.0;
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        let magnitude = (ln_gamma(kf * p) - ln_gamma(kf + 1.0) - kf * p * log_z).exp();
        if magnitude > prev && magnitude > 1e-10 {
            return None;
        }
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        sum += sign * magnitude * (0.5 * PI * kf * p).sin();
        if magnitude < 1e-14 {
            return Some(FRAC_1_PI * sum);
        }
        prev = magnitude;
    }
    None
}

/// Scale of a sum of independent symmetric p-stable variables: `||(sigma_i)||_{l^p}`.
pub fn scale_of_sum(laws: &[StableLaw]) -> Result<f64> {
    let first = laws.first().ok_or_else(|| Error::invalid("empty list of laws"))?;
    let p = first.p;
    let mut acc = 0.0;
    for law in laws {
        if law.p != p {
            return Err(Error::MixedStability(p, law.p));
        }
        acc += law.sigma.powf(p);
    }
    Ok(acc.powf(1.0 / p))
}

/// Empirical characteristic function `n^{-1} sum cos(xi x_i)` (real part;
/// the imaginary part of a symmetric law has mean zero).
pub fn empirical_char_fn(samples: &[f64], xi: f64) -> f64 {
    samples.iter().map(|x| (xi * x).cos()).sum::<f64>() / samples.len() as f64
}
