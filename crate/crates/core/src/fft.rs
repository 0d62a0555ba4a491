//! N-dimensional FFT on fields and radial Fourier multipliers.
//!
//! Frequencies follow the torus mapping `lambda_k = k / L` with `k` wrapped to
//! `[-n/2, n/2)`; transforms use the `e^{-2 pi i lambda x}` convention.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::field::SampledField;

type Plans = HashMap<(usize, bool), Arc<dyn Fft<f64>>>;

fn plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    static CACHE: OnceLock<Mutex<(FftPlanner<f64>, Plans)>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new((FftPlanner::new(), HashMap::new())));
    let mut guard = cache.lock().unwrap();
    let (planner, plans) = &mut *guard;
    plans
        .entry((len, inverse))
        .or_insert_with(|| {
            if inverse {
                planner.plan_fft_inverse(len)
            } else {
                planner.plan_fft_forward(len)
            }
        })
        .clone()
}

/// In-place unnormalised transform over every axis of `shape`.
pub fn transform(data: &mut [Complex64], shape: &[usize], inverse: bool) {
    let d = shape.len();
    let total: usize = shape.iter().product();
    debug_assert_eq!(total, data.len());
    let mut line = Vec::new();
    for ax in 0..d {
        let n = shape[ax];
        if n == 1 {
            continue;
        }
        let fft = plan(n, inverse);
        let stride: usize = shape[ax + 1..].iter().product();
        if stride == 1 {
            fft.process(data);
            continue;
        }
        line.resize(n, Complex64::new(0.0, 0.0));
        let block = n * stride;
        for outer in (0..total).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for (k, v) in line.iter_mut().enumerate() {
                    *v = data[base + k * stride];
                }
                fft.process(&mut line);
                for (k, v) in line.iter().enumerate() {
                    data[base + k * stride] = *v;
                }
            }
        }
    }
}

pub fn forward(field: &SampledField) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = field.data().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    transform(&mut buf, field.shape(), false);
    buf
}

/// Inverse transform (normalised by `1/N`) keeping the real part.
pub fn inverse_real(mut spec: Vec<Complex64>, template: &SampledField) -> SampledField {
    transform(&mut spec, template.shape(), true);
    let scale = 1.0 / spec.len() as f64;
    let mut out = template.clone();
    for (o, v) in out.data_mut().iter_mut().zip(&spec) {
        *o = v.re * scale;
    }
    out
}

/// `|lambda|` for every flat frequency index of `field`'s grid.
pub fn frequency_magnitudes(field: &SampledField) -> Vec<f64> {
    let shape = field.shape();
    let h = field.spacing();
    let d = shape.len();
    let mut out = vec![0.0; field.len()];
    let mut idx = vec![0usize; d];
    for (i, o) in out.iter_mut().enumerate() {
        field.multi_index(i, &mut idx);
        let mut s = 0.0;
        for ax in 0..d {
            let n = shape[ax];
            let k = idx[ax] as f64;
            let k = if idx[ax] >= n.div_ceil(2) { k - n as f64 } else { k };
            let lam = k / (n as f64 * h);
            s += lam * lam;
        }
        *o = s.sqrt();
    }
    out
}

/// Applies the radial multiplier `m(|lambda|)` to `field`.
pub fn apply_radial<M: Fn(f64) -> f64>(field: &SampledField, m: M) -> SampledField {
    let mut spec = forward(field);
    let mags = frequency_magnitudes(field);
    for (v, &lam) in spec.iter_mut().zip(&mags) {
        *v *= m(lam);
    }
    inverse_real(spec, field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Grid;

    #[test]
    fn round_trip_2d() {
        let g = Grid::new(2, 8, 0.5).unwrap();
        let f = g.sample(|x| (x[0] * 1.3).sin() + x[1] * x[1]);
        let back = apply_radial(&f, |_| 1.0);
        assert!(back.max_abs_diff(&f) < 1e-12);
    }

    #[test]
    fn frequency_layout() {
        let g = Grid::new(1, 8, 0.25).unwrap(); // L = 2
        let mags = frequency_magnitudes(&g.zeros());
        assert_eq!(mags, vec![0.0, 0.5, 1.0, 1.5, 2.0, 1.5, 1.0, 0.5]);
    }
}
