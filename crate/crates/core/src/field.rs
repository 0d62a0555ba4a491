//! Regularly sampled real fields on the torus `[0, L)^d`.

use crate::error::{Error, Result};

/// Cubic sampling grid: `n` points per axis with spacing `h` in `d` dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub d: usize,
    pub n: usize,
    pub spacing: f64,
}

impl Grid {
    pub fn new(d: usize, n: usize, spacing: f64) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        if n == 0 {
            return Err(Error::invalid("grid side must be positive"));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::invalid(format!("spacing {spacing} must be positive")));
        }
        Ok(Self { d, n, spacing })
    }

    /// Grid covering `[0, length)^d` with `n` points per axis.
    pub fn with_length(d: usize, n: usize, length: f64) -> Result<Self> {
        Self::new(d, n, length / n as f64)
    }

    pub fn length(&self) -> f64 {
        self.n as f64 * self.spacing
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn zeros(&self) -> SampledField {
        SampledField {
            shape: vec![self.n; self.d],
            spacing: self.spacing,
            data: vec![0.0; self.len()],
        }
    }

    /// Samples `f` at the centred coordinates of every grid point (see
    /// [`SampledField::centered_coords`]).
    pub fn sample<F: Fn(&[f64]) -> f64>(&self, f: F) -> SampledField {
        let mut field = self.zeros();
        let mut x = vec![0.0; self.d];
        for i in 0..field.data.len() {
            field.centered_coords_into(i, &mut x);
            field.data[i] = f(&x);
        }
        field
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    shape: Vec<usize>,
    spacing: f64,
    data: Vec<f64>,
}

impl SampledField {
    pub fn new(shape: Vec<usize>, spacing: f64, data: Vec<f64>) -> Result<Self> {
        if shape.is_empty() || shape.contains(&0) {
            return Err(Error::Shape(format!("invalid shape {shape:?}")));
        }
        let len: usize = shape.iter().product();
        if len != data.len() {
            return Err(Error::Shape(format!(
                "shape {shape:?} needs {len} samples, got {}",
                data.len()
            )));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::invalid(format!("spacing {spacing} must be positive")));
        }
        Ok(Self { shape, spacing, data })
    }

    pub fn d(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Cubic grid descriptor, if every axis has the same length.
    pub fn grid(&self) -> Option<Grid> {
        let n = self.shape[0];
        self.shape.iter().all(|&s| s == n).then_some(Grid {
            d: self.d(),
            n,
            spacing: self.spacing,
        })
    }

    pub fn same_grid(&self, other: &SampledField) -> bool {
        self.shape == other.shape && self.spacing == other.spacing
    }

    /// Cell volume `h^d`.
    pub fn cell(&self) -> f64 {
        self.spacing.powi(self.d() as i32)
    }

    /// Multi-index of flat position `i` (row-major, last axis fastest).
    pub fn multi_index(&self, mut i: usize, out: &mut [usize]) {
        for ax in (0..self.d()).rev() {
            out[ax] = i % self.shape[ax];
            i /= self.shape[ax];
        }
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.shape).fold(0, |acc, (&i, &s)| acc * s + i)
    }

    /// Coordinates in `[-L/2, L/2)^d`: index `i >= n/2` maps to `(i - n) h`.
    pub fn centered_coords_into(&self, i: usize, out: &mut [f64]) {
        let mut rest = i;
        for ax in (0..self.d()).rev() {
            let n = self.shape[ax];
            let k = rest % n;
            rest /= n;
            let k = if k >= n.div_ceil(2) { k as f64 - n as f64 } else { k as f64 };
            out[ax] = k * self.spacing;
        }
    }

    pub fn centered_coords(&self, i: usize) -> Vec<f64> {
        let mut x = vec![0.0; self.d()];
        self.centered_coords_into(i, &mut x);
        x
    }

    /// Value at the grid origin (flat index 0).
    pub fn at_origin(&self) -> f64 {
        self.data[0]
    }

    /// `(h^d sum |f|^p)^{1/p}`.
    pub fn lp_norm(&self, p: f64) -> f64 {
        let cell = self.cell();
        if p == 2.0 {
            return (cell * self.data.iter().map(|v| v * v).sum::<f64>()).sqrt();
        }
        (cell * self.data.iter().map(|v| v.abs().powf(p)).sum::<f64>()).powf(1.0 / p)
    }

    pub fn l2_norm(&self) -> f64 {
        self.lp_norm(2.0)
    }

    /// `h^d sum f g`.
    pub fn inner(&self, other: &SampledField) -> Result<f64> {
        if !self.same_grid(other) {
            return Err(Error::Shape("inner product of fields on different grids".into()));
        }
        Ok(self.cell() * self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum::<f64>())
    }

    pub fn scaled(&self, c: f64) -> SampledField {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v *= c);
        out
    }

    pub fn sub(&self, other: &SampledField) -> Result<SampledField> {
        if !self.same_grid(other) {
            return Err(Error::Shape("difference of fields on different grids".into()));
        }
        let mut out = self.clone();
        out.data.iter_mut().zip(&other.data).for_each(|(a, b)| *a -= b);
        Ok(out)
    }

    pub fn max_abs_diff(&self, other: &SampledField) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// `||self - other||_2 / ||other||_2` (plain l2 over samples).
    pub fn rel_l2_diff(&self, other: &SampledField) -> f64 {
        let num: f64 = self.data.iter().zip(&other.data).map(|(a, b)| (a - b) * (a - b)).sum();
        let den: f64 = other.data.iter().map(|b| b * b).sum();
        if den == 0.0 {
            num.sqrt()
        } else {
            (num / den).sqrt()
        }
    }

    /// Every `factor`-th sample along each axis, spacing multiplied by `factor`.
    pub fn subsample(&self, factor: usize) -> Result<SampledField> {
        if factor == 0 || self.shape.iter().any(|&s| s % factor != 0) {
            return Err(Error::Shape(format!("cannot subsample {:?} by {factor}", self.shape)));
        }
        let shape: Vec<usize> = self.shape.iter().map(|s| s / factor).collect();
        let len: usize = shape.iter().product();
        let coarse = SampledField {
            shape: shape.clone(),
            spacing: self.spacing * factor as f64,
            data: vec![0.0; len],
        };
        let mut idx = vec![0; self.d()];
        let mut fine_idx = vec![0; self.d()];
        let mut data = vec![0.0; len];
        for (i, v) in data.iter_mut().enumerate() {
            coarse.multi_index(i, &mut idx);
            for (f, c) in fine_idx.iter_mut().zip(&idx) {
                *f = c * factor;
            }
            *v = self.data[self.flat_index(&fine_idx)];
        }
        Ok(SampledField { data, ..coarse })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centered_coordinates_wrap() {
        let g = Grid::new(1, 8, 0.25).unwrap();
        let f = g.sample(|x| x[0]);
        assert_eq!(f.data(), &[0.0, 0.25, 0.5, 0.75, -1.0, -0.75, -0.5, -0.25]);
        let g2 = Grid::new(2, 4, 1.0).unwrap();
        let f2 = g2.zeros();
        assert_eq!(f2.centered_coords(4 * 3 + 1), vec![-1.0, 1.0]);
    }

    #[test]
    fn norms_use_cell_volume() {
        let g = Grid::new(2, 4, 0.5).unwrap();
        let f = g.sample(|_| 1.0);
        assert!((f.l2_norm() - 2.0).abs() < 1e-15); // area 4
        assert!((f.lp_norm(1.0) - 4.0).abs() < 1e-15);
    }

    #[test]
    fn subsampling_keeps_grid_points() {
        let g = Grid::new(1, 8, 0.125).unwrap();
        let f = g.sample(|x| x[0]);
        let c = f.subsample(2).unwrap();
        assert_eq!(c.spacing(), 0.25);
        assert_eq!(c.data(), &[0.0, 0.25, -0.5, -0.25]);
    }

    #[test]
    fn shape_validation() {
        assert!(SampledField::new(vec![2, 2], 1.0, vec![0.0; 3]).is_err());
        assert!(SampledField::new(vec![2, 0], 1.0, vec![]).is_err());
    }
}
