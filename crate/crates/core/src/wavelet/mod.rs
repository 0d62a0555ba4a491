//! Orthonormal periodised Daubechies wavelet bases on `[0, L)^d`.

pub(crate) mod coeffs;
pub mod filters;
mod transform;

pub use coeffs::{dyadic_cube, Atom, CoeffField, Cube, DyadicIndex};
pub use transform::{analyze, default_j_min, synthesize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Daubechies,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "daubechies" | "db" => Ok(Family::Daubechies),
            _ => Err(Error::invalid(format!("unknown wavelet family '{s}'"))),
        }
    }
}

/// Tensor-product wavelet basis. Orientations `e` range over `{0,1}^d \ {0}`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletBasis {
    family: Family,
    order: usize,
    d: usize,
    regularity: f64,
    lowpass: Vec<f64>,
    highpass: Vec<f64>,
}

pub fn build_basis(family: Family, order: usize, d: usize) -> Result<WaveletBasis> {
    if d == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    let lowpass = match family {
        Family::Daubechies => filters::daubechies(order)?,
    };
    Ok(WaveletBasis {
        family,
        order,
        d,
        regularity: filters::regularity(order)?,
        highpass: filters::highpass(&lowpass),
        lowpass,
    })
}

impl WaveletBasis {
    /// Daubechies basis with six vanishing moments.
    pub fn default_for(d: usize) -> Result<Self> {
        build_basis(Family::Daubechies, 6, d)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Number of vanishing moments.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn regularity(&self) -> f64 {
        self.regularity
    }

    pub fn lowpass(&self) -> &[f64] {
        &self.lowpass
    }

    pub fn highpass(&self) -> &[f64] {
        &self.highpass
    }

    /// Same filters in another dimension.
    pub fn with_dimension(&self, d: usize) -> Self {
        Self { d, ..self.clone() }
    }

    /// Short tag such as `db6` used in file headers.
    pub fn tag(&self) -> String {
        format!("db{}", self.order)
    }

    pub fn from_tag(tag: &str, d: usize) -> Result<Self> {
        let order = tag
            .strip_prefix("db")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::invalid(format!("unknown basis tag '{tag}'")))?;
        build_basis(Family::Daubechies, order, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_filters() {
        let b = build_basis(Family::Daubechies, 1, 1).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!(b.lowpass().iter().all(|v| (v - r).abs() < 1e-15));
        assert!(build_basis(Family::Daubechies, 0, 1).is_err());
        assert_eq!(WaveletBasis::from_tag("db4", 2).unwrap().order(), 4);
    }
}
