use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fft;
use crate::field::SampledField;
use crate::stable::StableLaw;

/// Kolmogorov-Smirnov distance between the empirical distribution of
/// `samples` and `law`.
pub fn ecdf_ks(samples: &[f64], law: &StableLaw) -> Result<f64> {
    if samples.len() < 100 {
        return Err(Error::TooFewSamples { needed: 100, got: samples.len() });
    }
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let cdf: Vec<f64> = xs.par_iter().map(|&x| law.cdf(x)).collect::<Result<_>>()?;
    let mut d = 0.0f64;
    for (i, f) in cdf.iter().enumerate() {
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    Ok(d)
}

/// Frequency band `[lo, hi]` in cycles per unit length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
}

impl Band {
    /// From the lowest nonzero frequency up to a quarter of Nyquist.
    pub fn default_for(field: &SampledField) -> Self {
        let len = field.shape()[0] as f64 * field.spacing();
        Self { lo: 1.0 / len, hi: 0.125 / field.spacing() }
    }
}

/// Radially averaged periodogram `|h^d DFT|^2 / L^d` as `(|lambda|, power)`
/// pairs, one per shell of width `1/L`, zero frequency excluded.
pub fn periodogram(field: &SampledField) -> Vec<(f64, f64)> {
    let spec = fft::forward(field);
    let mags = fft::frequency_magnitudes(field);
    let len = field.shape()[0] as f64 * field.spacing();
    let norm = field.cell() * field.cell() / len.powi(field.d() as i32);
    let shells = field.shape()[0];
    let mut power = vec![0.0; shells];
    let mut freq = vec![0.0; shells];
    let mut count = vec![0usize; shells];
    for (c, &lam) in spec.iter().zip(&mags) {
        let s = (lam * len).round() as usize;
        if s == 0 || s >= shells {
            continue;
        }
        power[s] += norm * c.norm_sqr();
        freq[s] += lam;
        count[s] += 1;
    }
    (0..shells)
        .filter(|&s| count[s] > 0)
        .map(|s| (freq[s] / count[s] as f64, power[s] / count[s] as f64))
        .collect()
}

/// Least-squares slope of `log power` against `log |lambda|` over `band`
/// (default [`Band::default_for`]).
pub fn periodogram_slope(field: &SampledField, band: Option<Band>) -> Result<f64> {
    let band = band.unwrap_or_else(|| Band::default_for(field));
    let pts: Vec<(f64, f64)> = periodogram(field)
        .into_iter()
        .filter(|&(f, p)| f >= band.lo && f <= band.hi && p > 0.0)
        .map(|(f, p)| (f.ln(), p.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::EmptyBand { lo: band.lo, hi: band.hi });
    }
    Ok(fit_line(&pts).0)
}

/// Slope and its standard error for `y = a + b x`.
pub(crate) fn fit_line(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let b = sxy / sxx;
    let rss: f64 = pts.iter().map(|p| (p.1 - my - b * (p.0 - mx)).powi(2)).sum();
    let se = if pts.len() > 2 { (rss / (n - 2.0) / sxx).sqrt() } else { 0.0 };
    (b, se)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Grid;

    #[test]
    fn ks_degenerate_and_small() {
        let law = StableLaw::standard(1.5).unwrap();
        assert!((ecdf_ks(&[0.0; 200], &law).unwrap() - 0.5).abs() < 1e-12);
        assert!(matches!(ecdf_ks(&[0.0; 99], &law), Err(Error::TooFewSamples { needed: 100, got: 99 })));
    }

    #[test]
    fn power_law_slope() {
        let g = Grid::new(1, 4096, 1.0 / 512.0).unwrap();
        let l = g.length();
        // sum of cosines with amplitude |k|^{-1}: power ~ lambda^{-2}
        let f = g.sample(|x| {
            (1..400).map(|k| (2.0 * std::f64::consts::PI * k as f64 * x[0] / l).cos() / k as f64).sum()
        });
        let s = periodogram_slope(&f, Some(Band { lo: 0.2, hi: 49.0 })).unwrap();
        assert!((s + 2.0).abs() < 1e-6, "{s}");
        assert!(matches!(
            periodogram_slope(&f, Some(Band { lo: 1e3, hi: 2e3 })),
            Err(Error::EmptyBand { .. })
        ));
    }
}
