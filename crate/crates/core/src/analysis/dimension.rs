use rayon::prelude::*;

use super::spectral::fit_line;
use crate::error::{Error, Result};
use crate::field::SampledField;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimensionMethod {
    Box,
    Frostman,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionEstimate {
    pub estimate: f64,
    pub stderr: f64,
    /// Smallest and largest box size used in the fit.
    pub scales: (f64, f64),
    pub method: DimensionMethod,
}

/// Discretised `int int (|x - x'|^2 + |f(x) - f(x')|^2)^{-rho/2} dx dx'` over
/// the grid box, with the diagonal cells (`x = x'`) left out.
pub fn frostman_energy(field: &SampledField, rho: f64) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::invalid(format!("rho = {rho} must be positive")));
    }
    if field.data().iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("field has non-finite samples"));
    }
    let d = field.d();
    let h = field.spacing();
    let data = field.data();
    let n = data.len();
    let e = -0.5 * rho;
    let half: f64 = if d == 1 {
        (0..n)
            .into_par_iter()
            .map(|i| {
                let fi = data[i];
                let mut s = 0.0;
                for (k, fj) in data[i + 1..].iter().enumerate() {
                    let dx = (k + 1) as f64 * h;
                    let df = fi - fj;
                    s += (dx * dx + df * df).powf(e);
                }
                s
            })
            .sum()
    } else {
        let coords: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let mut idx = vec![0usize; d];
                field.multi_index(i, &mut idx);
                idx.iter().map(|&k| k as f64 * h).collect()
            })
            .collect();
        (0..n)
            .into_par_iter()
            .map(|i| {
                let mut s = 0.0;
                for j in i + 1..n {
                    let dx2: f64 = coords[i].iter().zip(&coords[j]).map(|(a, b)| (a - b).powi(2)).sum();
                    let df = data[i] - data[j];
                    s += (dx2 + df * df).powf(e);
                }
                s
            })
            .sum()
    };
    Ok(2.0 * half * field.cell() * field.cell())
}

/// Box-counting dimension of the graph of a one-dimensional field of `2^J`
/// samples, `J >= 12`.
///
/// The graph is rescaled to the unit square. Box sizes `2^{-m}` for
/// `3 <= m <= J - 5`: the three coarsest and the two finest octaves above the
/// sample spacing are left out of the fit.
pub fn box_dimension(field: &SampledField) -> Result<DimensionEstimate> {
    if field.d() != 1 {
        return Err(Error::Shape(format!("box counting needs d = 1, got d = {}", field.d())));
    }
    let y = field.data();
    let n = y.len();
    if !n.is_power_of_two() || n < 1 << 12 {
        return Err(Error::TooFewSamples { needed: 1 << 12, got: n });
    }
    let big_j = n.trailing_zeros() as i32;
    let (lo, hi) = y.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let range = if hi > lo { hi - lo } else { 1.0 };
    let z: Vec<f64> = y.iter().map(|v| (v - lo) / range).collect();
    let pts: Vec<(f64, f64)> = (3..=big_j - 5)
        .map(|m| {
            let boxes = 1usize << m;
            let width = n / boxes;
            let eps = 1.0 / boxes as f64;
            let count: usize = (0..boxes)
                .map(|b| {
                    let end = ((b + 1) * width + 1).min(n);
                    let col = &z[b * width..end];
                    let (a, c) = col.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, c), &v| (a.min(v), c.max(v)));
                    let row = |v: f64| ((v / eps).floor() as usize).min(boxes - 1);
                    row(c) - row(a) + 1
                })
                .sum();
            ((boxes as f64).ln(), (count as f64).ln())
        })
        .collect();
    let (slope, se) = fit_line(&pts);
    Ok(DimensionEstimate {
        estimate: slope,
        stderr: se,
        scales: (2f64.powi(-(big_j - 5)), 0.125),
        method: DimensionMethod::Box,
    })
}
