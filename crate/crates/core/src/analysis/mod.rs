//! Measurements on synthesised objects: norm sandwiches, distribution
//! bounds, spectra, goodness of fit and graph dimension.

mod bounds;
mod dimension;
mod spectral;

pub use bounds::{
    corpus_constant, ss_bounds, square_function_norm, t1_bounds, t1_bounds_with, weighted_sampling_bound,
    weighted_sampling_constant,
};
pub use dimension::{box_dimension, frostman_energy, DimensionEstimate, DimensionMethod};
pub use spectral::{ecdf_ks, periodogram, periodogram_slope, Band};

/// Parameters echoed by a [`BoundReport`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BoundParams {
    pub p: f64,
    pub s: Option<f64>,
    pub gamma: Option<f64>,
    pub a: Option<f64>,
}

/// `lower <= value <= upper`, with the constant used for the upper side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub lower: f64,
    pub value: f64,
    pub upper: f64,
    /// Multiplicative constant applied to the upper bound.
    pub constant: f64,
    pub params: BoundParams,
}

impl BoundReport {
    /// Both inequalities, up to a few ulps of rounding.
    pub fn passed(&self) -> bool {
        let slack = 4.0 * f64::EPSILON * self.value.abs().max(self.upper.abs()).max(self.lower.abs());
        self.lower <= self.value + slack && self.value <= self.upper + slack
    }

    pub fn lower_holds(&self) -> bool {
        self.lower <= self.value * (1.0 + 4.0 * f64::EPSILON)
    }
}
