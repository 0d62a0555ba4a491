//! Symmetric p-stable random wavelet series with fractional integration.

// `!(x > 0.0)` style tests are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod fft;
pub mod field;
pub mod fracop;
pub mod io;
pub mod quad;
pub mod rng;
pub mod stable;
pub mod synthesis;
pub mod testfn;
pub mod wavelet;

pub use error::{Error, Result};
pub use field::{Grid, SampledField};
pub use stable::{scale_of_sum, StableLaw};
pub use wavelet::{analyze, build_basis, dyadic_cube, synthesize, CoeffField, DyadicIndex, Family, WaveletBasis};
pub use synthesis::{field_y, pair_sample, pair_scale, PairingResult, TruncationSpec};
pub use testfn::{corpus, Shape, TestFunction};
