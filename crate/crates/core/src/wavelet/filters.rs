//! Daubechies low-pass filters by spectral factorization.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 10;

/// Hölder regularity of the Daubechies scaling function, indexed by `N - 1`.
///
/// `N = 1` (Haar) is discontinuous; we record its Sobolev exponent 1/2 so the
/// table stays positive and increasing.
const REGULARITY: [f64; MAX_ORDER] = [
    0.5, 0.5500, 1.0878, 1.6179, 1.9690, 2.1891, 2.4604, 2.7608, 3.0736, 3.3614,
];

pub fn regularity(order: usize) -> Result<f64> {
    if order == 0 || order > MAX_ORDER {
        return Err(Error::UnsupportedOrder(order));
    }
    Ok(REGULARITY[order - 1])
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn horner(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    // value and derivative; coeffs ascending
    let mut v = Complex64::new(0.0, 0.0);
    let mut dv = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dv = dv * z + v;
        v = v * z + c;
    }
    (v, dv)
}

/// Roots of the real polynomial with ascending coefficients `coeffs`.
fn poly_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let deg = coeffs.len() - 1;
    let lead = coeffs[deg];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..deg).map(|i| seed.powu(i as u32) * 2.0).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..deg {
            let (v, _) = horner(&monic, roots[i]);
            let mut den = Complex64::new(1.0, 0.0);
            for (j, r) in roots.iter().enumerate() {
                if j != i {
                    den *= roots[i] - r;
                }
            }
            let step = v / den;
            roots[i] -= step;
            delta = delta.max(step.norm() / (1.0 + roots[i].norm()));
        }
        if delta < 1e-15 {
            break;
        }
    }
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let (v, dv) = horner(coeffs, *r);
            if dv.norm() == 0.0 {
                break;
            }
            *r -= v / dv;
        }
    }
    roots
}

/// Minimum-phase Daubechies low-pass filter with `order` vanishing moments,
/// normalised to `sum h = sqrt(2)`.
pub fn daubechies(order: usize) -> Result<Vec<f64>> {
    if order == 0 || order > MAX_ORDER {
        return Err(Error::UnsupportedOrder(order));
    }
    let n = order;
    // H(z) = (1 + z)^N prod (z - z_i)
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    let mul = |poly: &mut Vec<Complex64>, root: Complex64| {
        let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
        for (i, &c) in poly.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * root;
        }
        *poly = next;
    };
    for _ in 0..n {
        mul(&mut poly, Complex64::new(-1.0, 0.0));
    }
    if n > 1 {
        let p: Vec<f64> = (0..n).map(|k| binomial(n - 1 + k, k)).collect();
        for y in poly_roots(&p) {
            // y = (2 - z - 1/z) / 4  <=>  z^2 - (2 - 4y) z + 1 = 0
            let b = Complex64::new(2.0, 0.0) - y * 4.0;
            let disc = (b * b - 4.0).sqrt();
            // the roots are reciprocal; take the larger one and invert it
            let z1 = (b + disc) * 0.5;
            let z2 = (b - disc) * 0.5;
            let big = if z1.norm() > z2.norm() { z1 } else { z2 };
            mul(&mut poly, big.inv());
        }
    }
    let mut h: Vec<f64> = poly.iter().rev().map(|c| c.re).collect();
    let s: f64 = h.iter().sum();
    let scale = std::f64::consts::SQRT_2 / s;
    h.iter_mut().for_each(|v| *v *= scale);
    Ok(h)
}

/// Quadrature-mirror high-pass filter `g_k = (-1)^k h_{L-1-k}`.
pub fn highpass(h: &[f64]) -> Vec<f64> {
    let len = h.len();
    (0..len)
        .map(|k| if k % 2 == 0 { h[len - 1 - k] } else { -h[len - 1 - k] })
        .collect()
}
