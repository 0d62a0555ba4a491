//! Compactly supported test functions sampled on grids.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::field::{Grid, SampledField};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    /// `exp(-1 / (1 - rho^2))` for `rho = |x - c| / R < 1`.
    Bump,
    /// `R d/dx_1` of the bump; integrates to zero.
    DerivBump,
    /// Bump times `cos(2 pi freq (x_1 - c_1) / R)`.
    Modulated { freq: f64 },
    /// Grid-scale impulse of unit mass at the grid point nearest the centre.
    /// Not a test function in the smooth sense; used as a negative control.
    Impulse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Smoothness {
    Smooth,
    Rough,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    pub shape: Shape,
    pub center: Vec<f64>,
    pub radius: f64,
    pub amplitude: f64,
}

impl TestFunction {
    pub fn new(shape: Shape, center: Vec<f64>, radius: f64) -> Result<Self> {
        if center.is_empty() {
            return Err(Error::invalid("centre must have at least one coordinate"));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::invalid(format!("radius {radius} must be positive")));
        }
        Ok(Self { shape, center, radius, amplitude: 1.0 })
    }

    pub fn bump(d: usize, radius: f64) -> Result<Self> {
        Self::new(Shape::Bump, vec![0.0; d], radius)
    }

    pub fn deriv_bump(d: usize, radius: f64) -> Result<Self> {
        Self::new(Shape::DerivBump, vec![0.0; d], radius)
    }

    pub fn impulse(d: usize) -> Self {
        Self { shape: Shape::Impulse, center: vec![0.0; d], radius: 0.0, amplitude: 1.0 }
    }

    pub fn d(&self) -> usize {
        self.center.len()
    }

    pub fn smoothness(&self) -> Smoothness {
        match self.shape {
            Shape::Impulse => Smoothness::Rough,
            _ => Smoothness::Smooth,
        }
    }

    /// Radius of the closed ball outside which the function vanishes.
    pub fn support_radius(&self) -> f64 {
        self.radius
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn with_center(mut self, center: Vec<f64>) -> Self {
        self.center = center;
        self
    }

    /// `x -> phi(a x)`.
    pub fn dilated(&self, a: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::invalid(format!("dilation {a} must be positive")));
        }
        if self.shape == Shape::Impulse {
            return Err(Error::invalid("an impulse has no dilation on a fixed grid"));
        }
        Ok(Self {
            center: self.center.iter().map(|c| c / a).collect(),
            radius: self.radius / a,
            ..self.clone()
        })
    }

    /// Point value; `None` for the impulse, which has no pointwise meaning.
    pub fn eval(&self, x: &[f64]) -> Option<f64> {
        let r = self.radius;
        let mut rho2 = 0.0;
        for (xi, ci) in x.iter().zip(&self.center) {
            rho2 += ((xi - ci) / r).powi(2);
        }
        let bump = if rho2 < 1.0 { (-1.0 / (1.0 - rho2)).exp() } else { 0.0 };
        let t = (x[0] - self.center[0]) / r;
        let v = match self.shape {
            Shape::Bump => bump,
            Shape::DerivBump => {
                if rho2 < 1.0 {
                    -2.0 * t * bump / (1.0 - rho2).powi(2)
                } else {
                    0.0
                }
            }
            Shape::Modulated { freq } => bump * (2.0 * PI * freq * t).cos(),
            Shape::Impulse => return None,
        };
        Some(self.amplitude * v)
    }

    /// Samples at centred grid coordinates; the support must fit in the torus.
    pub fn sample(&self, grid: &Grid) -> Result<SampledField> {
        if grid.d != self.d() {
            return Err(Error::Shape(format!("function has d={}, grid d={}", self.d(), grid.d)));
        }
        let half = 0.5 * grid.length();
        if self.shape == Shape::Impulse {
            let mut f = grid.zeros();
            let idx: Vec<usize> = self
                .center
                .iter()
                .map(|c| ((c / grid.spacing).round() as i64).rem_euclid(grid.n as i64) as usize)
                .collect();
            let i = f.flat_index(&idx);
            f.data_mut()[i] = self.amplitude / grid.spacing.powi(grid.d as i32);
            return Ok(f);
        }
        if self.center.iter().any(|c| c.abs() + self.radius > half) {
            return Err(Error::invalid(format!(
                "support of radius {} around {:?} does not fit in a torus of length {}",
                self.radius,
                self.center,
                grid.length()
            )));
        }
        Ok(grid.sample(|x| self.eval(x).unwrap_or(0.0)))
    }
}

/// Twenty smooth test functions in dimension `d`, all supported in the ball of
/// radius 1.6 around the origin.
pub fn corpus(d: usize) -> Vec<TestFunction> {
    let at = |x: f64| {
        let mut c = vec![0.0; d];
        c[0] = x;
        if d > 1 {
            c[1] = -0.5 * x;
        }
        c
    };
    let mut out = Vec::with_capacity(20);
    for (r, c) in [(0.3, 0.0), (0.5, 0.2), (0.8, -0.3), (1.0, 0.0), (1.4, 0.1)] {
        out.push(TestFunction::new(Shape::Bump, at(c), r).unwrap());
    }
    for (r, c) in [(0.35, 0.0), (0.6, -0.2), (0.9, 0.3), (1.2, 0.0), (1.5, 0.05)] {
        out.push(TestFunction::new(Shape::DerivBump, at(c), r).unwrap());
    }
    for (r, f) in [(0.5, 1.0), (0.8, 1.5), (1.0, 2.0), (1.2, 3.0), (1.5, 1.0)] {
        out.push(TestFunction::new(Shape::Modulated { freq: f }, at(0.0), r).unwrap());
    }
    for (r, c, a) in [(0.4, 0.5, 2.0), (0.7, -0.6, 0.5), (0.25, 0.1, 3.0), (1.1, 0.4, 1.0), (0.6, 0.0, -1.5)] {
        let shape = if a > 1.5 { Shape::DerivBump } else { Shape::Bump };
        out.push(TestFunction::new(shape, at(c), r).unwrap().with_amplitude(a));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deriv_bump_has_zero_mean() {
        let g = Grid::new(1, 1024, 1.0 / 256.0).unwrap();
        let f = TestFunction::deriv_bump(1, 0.7).unwrap().sample(&g).unwrap();
        let mean: f64 = f.data().iter().sum::<f64>() * f.cell();
        assert!(mean.abs() < 1e-14);
        // and matches a centred difference of the bump
        let b = TestFunction::bump(1, 0.7).unwrap();
        let x = 0.31;
        let fd = (b.eval(&[x + 1e-6]).unwrap() - b.eval(&[x - 1e-6]).unwrap()) / 2e-6 * 0.7;
        let d = TestFunction::deriv_bump(1, 0.7).unwrap().eval(&[x]).unwrap();
        assert!((fd - d).abs() < 1e-8);
    }

    #[test]
    fn dilation() {
        let f = TestFunction::bump(1, 1.0).unwrap().with_center(vec![0.4]);
        let g = f.dilated(2.0).unwrap();
        assert_eq!(g.eval(&[0.35]), f.eval(&[0.7]));
        assert_eq!(g.radius, 0.5);
    }

    #[test]
    fn corpus_fits_and_is_nonzero() {
        let g = Grid::new(2, 64, 1.0 / 16.0).unwrap();
        let c = corpus(2);
        assert_eq!(c.len(), 20);
        for f in &c {
            assert!(f.sample(&g).unwrap().l2_norm() > 0.0);
        }
    }

    #[test]
    fn impulse_has_unit_mass() {
        let g = Grid::new(2, 8, 0.25).unwrap();
        let f = TestFunction::impulse(2).sample(&g).unwrap();
        assert!((f.data().iter().sum::<f64>() * f.cell() - 1.0).abs() < 1e-15);
        assert_eq!(TestFunction::impulse(1).smoothness(), Smoothness::Rough);
    }
}
