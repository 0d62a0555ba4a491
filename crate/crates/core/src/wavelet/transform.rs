//! Periodised separable fast wavelet transform.

use super::coeffs::{dyadic_exponent, CoeffField};
use super::WaveletBasis;
use crate::error::{Error, Result};
use crate::field::{Grid, SampledField};

fn forward_step(h: &[f64], g: &[f64], x: &[f64], out: &mut [f64]) {
    let m = x.len();
    let half = m / 2;
    for i in 0..half {
        let (mut a, mut d) = (0.0, 0.0);
        for (k, (&hk, &gk)) in h.iter().zip(g).enumerate() {
            let v = x[(2 * i + k) % m];
            a += hk * v;
            d += gk * v;
        }
        out[i] = a;
        out[half + i] = d;
    }
}

fn inverse_step(h: &[f64], g: &[f64], c: &[f64], out: &mut [f64]) {
    let m = c.len();
    let half = m / 2;
    out.iter_mut().for_each(|v| *v = 0.0);
    for i in 0..half {
        let (a, d) = (c[i], c[half + i]);
        for (k, (&hk, &gk)) in h.iter().zip(g).enumerate() {
            out[(2 * i + k) % m] += hk * a + gk * d;
        }
    }
}

/// Applies `step` to every line along every axis of the corner `[0, m)^d` of a
/// row-major `n^d` array.
fn corner_pass(data: &mut [f64], d: usize, n: usize, m: usize, step: &dyn Fn(&[f64], &mut [f64])) {
    let mut line = vec![0.0; m];
    let mut out = vec![0.0; m];
    let mut others = vec![0usize; d];
    for ax in 0..d {
        let stride = n.pow((d - 1 - ax) as u32);
        let count = m.pow((d - 1) as u32);
        others.iter_mut().for_each(|v| *v = 0);
        for _ in 0..count {
            let base: usize = (0..d)
                .filter(|&a| a != ax)
                .map(|a| others[a] * n.pow((d - 1 - a) as u32))
                .sum();
            for (t, v) in line.iter_mut().enumerate() {
                *v = data[base + t * stride];
            }
            step(&line, &mut out);
            for (t, v) in out.iter().enumerate() {
                data[base + t * stride] = *v;
            }
            // odometer over the axes other than `ax`
            for a in (0..d).rev() {
                if a == ax {
                    continue;
                }
                others[a] += 1;
                if others[a] < m {
                    break;
                }
                others[a] = 0;
            }
        }
    }
}

fn check_grid(shape: &[usize], spacing: f64) -> Result<(usize, i32)> {
    let n = shape[0];
    if shape.iter().any(|&s| s != n) {
        return Err(Error::Shape(format!("wavelet transforms need a cubic grid, got {shape:?}")));
    }
    if !n.is_power_of_two() || n < 2 {
        return Err(Error::NotPowerOfTwo(n));
    }
    Ok((n, dyadic_exponent(spacing)?))
}

/// Default scaling level: `j = 0` when the torus is at least one unit long,
/// otherwise the coarsest level the grid allows.
pub fn default_j_min(n: usize, spacing: f64) -> Result<i32> {
    let q = dyadic_exponent(spacing)?;
    Ok(0.max(q - n.trailing_zeros() as i32))
}

/// Wavelet coefficients `<f, psi_{jk}^e>` of a sampled field, from the finest
/// scale down to scaling level `j_min` (default from [`default_j_min`]).
///
/// Sample values are read as `h^{-d/2}` times the coefficients in the finest
/// scaling space, so the result satisfies `sum c^2 = h^d sum f^2`.
pub fn analyze(field: &SampledField, basis: &WaveletBasis, j_min: Option<i32>) -> Result<CoeffField> {
    if field.d() != basis.d() {
        return Err(Error::Shape(format!("field has d={}, basis d={}", field.d(), basis.d())));
    }
    let (n, q) = check_grid(field.shape(), field.spacing())?;
    let j_min = match j_min {
        Some(j) => j,
        None => default_j_min(n, field.spacing())?,
    };
    let d = field.d();
    let mut out = CoeffField::zeros(d, n, field.spacing(), j_min)?;
    let (h, g) = (basis.lowpass(), basis.highpass());
    let mut data = field.data().to_vec();
    let mut m = n;
    let step = |x: &[f64], out: &mut [f64]| forward_step(h, g, x, out);
    for _ in j_min..q {
        corner_pass(&mut data, d, n, m, &step);
        m /= 2;
    }
    let scale = field.spacing().powf(d as f64 / 2.0);
    data.iter_mut().for_each(|v| *v *= scale);
    out.data_mut().copy_from_slice(&data);
    Ok(out)
}

/// Inverse of [`analyze`]: the field `sum c psi` sampled on `grid`.
pub fn synthesize(coeffs: &CoeffField, basis: &WaveletBasis, grid: &Grid) -> Result<SampledField> {
    if coeffs.d() != grid.d || basis.d() != grid.d {
        return Err(Error::Shape("coefficient, basis and grid dimensions differ".into()));
    }
    if coeffs.side() != grid.n || coeffs.spacing() != grid.spacing {
        return Err(Error::ScaleRange {
            j_min: coeffs.j_min(),
            j_max: coeffs.j_max(),
            lo: dyadic_exponent(grid.spacing)? - grid.n.trailing_zeros() as i32,
            hi: dyadic_exponent(grid.spacing)? - 1,
        });
    }
    let (n, d) = (grid.n, grid.d);
    let (h, g) = (basis.lowpass(), basis.highpass());
    let mut data = coeffs.data().to_vec();
    let step = |x: &[f64], out: &mut [f64]| inverse_step(h, g, x, out);
    let levels = coeffs.j_max() - coeffs.j_min() + 1;
    let mut m = n >> levels as u32;
    for _ in 0..levels {
        m *= 2;
        corner_pass(&mut data, d, n, m, &step);
    }
    let scale = grid.spacing.powf(-(d as f64) / 2.0);
    data.iter_mut().for_each(|v| *v *= scale);
    SampledField::new(vec![n; d], grid.spacing, data)
}
