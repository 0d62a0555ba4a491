//! Random wavelet series: pairings `<X_gamma, phi>`, the pointwise field
//! `Y_gamma`, and truncation diagnostics.
//!
//! `X_gamma = sum eta_I I_gamma psi_I` with i.i.d. `eta_I ~ SpS(p, sigma)`.
//! Everything here works on a finite window of atoms on a periodic grid; the
//! coarse end of the series is represented by the scaling coefficients of the
//! coarsest retained level.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Grid, SampledField};
use crate::fracop::{modified_apply, riesz_apply};
use crate::rng;
use crate::stable::StableLaw;
use crate::testfn::TestFunction;
use crate::wavelet::coeffs::dyadic_exponent;
use crate::wavelet::{analyze, default_j_min, synthesize, CoeffField, WaveletBasis};

/// Which atoms of the series are kept, on which grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationSpec {
    pub grid: Grid,
    pub j_min: i32,
    pub j_max: i32,
    /// Keep (and randomise) the scaling coefficients at level `j_min`.
    pub with_scaling: bool,
    /// Skip the parameter-window validation. For negative controls only.
    pub unchecked: bool,
}

impl TruncationSpec {
    pub fn new(grid: Grid, j_min: i32, j_max: i32) -> Result<Self> {
        let spec = Self { grid, j_min, j_max, with_scaling: true, unchecked: false };
        spec.validate()?;
        Ok(spec)
    }

    /// `j` from the default scaling level up to the finest scale of the grid.
    pub fn full(grid: Grid) -> Result<Self> {
        let (lo, hi) = Self::levels(&grid)?;
        Self::new(grid, default_j_min(grid.n, grid.spacing)?.max(lo), hi)
    }

    /// Every scale the grid can carry, down to a single scaling coefficient.
    pub fn all_scales(grid: Grid) -> Result<Self> {
        let (lo, hi) = Self::levels(&grid)?;
        Self::new(grid, lo, hi)
    }

    pub fn with_scaling(mut self, keep: bool) -> Self {
        self.with_scaling = keep;
        self
    }

    pub fn allow_outside_window(mut self) -> Self {
        self.unchecked = true;
        self
    }

    /// Coarsest and finest scale representable on `grid`.
    pub fn levels(grid: &Grid) -> Result<(i32, i32)> {
        let q = dyadic_exponent(grid.spacing)?;
        Ok((q - grid.n.trailing_zeros() as i32, q - 1))
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = Self::levels(&self.grid)?;
        if self.j_min > self.j_max || self.j_min < lo || self.j_max > hi {
            return Err(Error::ScaleRange { j_min: self.j_min, j_max: self.j_max, lo, hi });
        }
        Ok(())
    }

    /// Whether every atom of `self` is also in `other`.
    pub fn is_within(&self, other: &TruncationSpec) -> bool {
        self.grid == other.grid
            && self.j_min >= other.j_min
            && self.j_max <= other.j_max
            && (!self.with_scaling || other.with_scaling)
    }

    fn keeps(&self, level: Option<i32>) -> bool {
        match level {
            Some(j) => j >= self.j_min && j <= self.j_max,
            None => self.with_scaling,
        }
    }

    fn window(&self, c: &CoeffField) -> Vec<f64> {
        c.iter().filter(|(j, _)| self.keeps(*j)).map(|(_, v)| v).collect()
    }
}

fn check(ok: bool, what: String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Window(what))
    }
}

/// Hypotheses for `<X_gamma, phi>` to converge: `4/3 <= p <= 2`,
/// `d(1/p - 1/2) < gamma <= d(1 - 1/p)` (for `p = 2`, `0 <= gamma <= d/2`) and
/// `gamma < r`.
pub fn check_pairing_window(gamma: f64, p: f64, d: usize, regularity: f64) -> Result<()> {
    let d = d as f64;
    check(gamma < regularity, format!("gamma < r fails: {gamma} >= {regularity}"))?;
    if p == 2.0 {
        check(gamma >= 0.0, format!("0 <= gamma fails: gamma = {gamma}"))?;
        return check(gamma <= 0.5 * d, format!("gamma <= d/2 fails: {gamma} > {}", 0.5 * d));
    }
    check((4.0 / 3.0..=2.0).contains(&p), format!("4/3 <= p <= 2 fails: p = {p}"))?;
    let lo = d * (1.0 / p - 0.5);
    let hi = d * (1.0 - 1.0 / p);
    check(gamma > lo, format!("d(1/p - 1/2) < gamma fails: {lo} >= {gamma}"))?;
    check(gamma <= hi, format!("gamma <= d(1 - 1/p) fails: {gamma} > {hi}"))
}

/// Hypotheses for `Y_gamma` to converge: `1 < p <= 2`,
/// `d/2 < gamma <= d(1 - 1/p) + 1` (for `p = 2`, `d/2 <= gamma <= d/2 + 1`) and
/// `gamma < r`.
pub fn check_field_window(gamma: f64, p: f64, d: usize, regularity: f64) -> Result<()> {
    let d = d as f64;
    check(gamma < regularity, format!("gamma < r fails: {gamma} >= {regularity}"))?;
    check(p > 1.0 && p <= 2.0, format!("1 < p <= 2 fails: p = {p}"))?;
    let hi = d * (1.0 - 1.0 / p) + 1.0;
    if p == 2.0 {
        check(gamma >= 0.5 * d, format!("d/2 <= gamma fails: {} > {gamma}", 0.5 * d))?;
    } else {
        check(gamma > 0.5 * d, format!("d/2 < gamma fails: {} >= {gamma}", 0.5 * d))?;
    }
    check(gamma <= hi, format!("gamma <= d(1 - 1/p) + 1 fails: {gamma} > {hi}"))
}

/// Law of `a^{d/2 + gamma} <X_gamma, phi(a .)>` for unit-scale coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct PairingResult {
    /// SpS scale of the pairing.
    pub sigma: f64,
    /// `<(I_gamma phi)(a .), psi>` over the whole grid (outside-window atoms included).
    pub coefficients: CoeffField,
    pub p: f64,
    pub a: f64,
}

/// `(I_gamma phi)(a .) = a^gamma I_gamma[phi(a .)]` sampled on `grid`.
fn dilated_potential(phi: &TestFunction, gamma: f64, a: f64, grid: &Grid) -> Result<SampledField> {
    let f = if a == 1.0 { phi.sample(grid)? } else { phi.dilated(a)?.sample(grid)? };
    Ok(riesz_apply(&f, gamma)?.scaled(a.powf(gamma)))
}

/// Exact SpS scale `a^{d/2} (sum |<(I_gamma phi)(a .), psi>|^p)^{1/p}` of the
/// normalised pairing, using `<I_gamma psi, phi> = <psi, I_gamma phi>`.
pub fn pair_scale(
    phi: &TestFunction,
    gamma: f64,
    p: f64,
    a: f64,
    basis: &WaveletBasis,
    trunc: &TruncationSpec,
) -> Result<PairingResult> {
    if !trunc.unchecked {
        check_pairing_window(gamma, p, trunc.grid.d, basis.regularity())?;
    }
    let u = dilated_potential(phi, gamma, a, &trunc.grid)?;
    let coefficients = analyze(&u, basis, Some(trunc.j_min))?;
    let sum: f64 = trunc.window(&coefficients).iter().map(|c| c.abs().powf(p)).sum();
    let d = trunc.grid.d as f64;
    Ok(PairingResult { sigma: a.powf(0.5 * d) * sum.powf(1.0 / p), coefficients, p, a })
}

/// `n` draws of `sum eta_I <I_gamma phi, psi_I>` over the window.
///
/// Draw `i` uses stream `i` of `seed`, one variate per retained coefficient in
/// storage order.
pub fn pair_sample(
    phi: &TestFunction,
    gamma: f64,
    law: &StableLaw,
    basis: &WaveletBasis,
    trunc: &TruncationSpec,
    n: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let pr = pair_scale(phi, gamma, law.p(), 1.0, basis, trunc)?;
    let coeffs = trunc.window(&pr.coefficients);
    let mut out = vec![0.0; n];
    out.par_iter_mut().enumerate().for_each(|(i, v)| {
        let mut r = rng::stream(seed, i as u64);
        *v = coeffs.iter().map(|c| c * law.draw(&mut r)).sum();
    });
    Ok(out)
}

/// i.i.d. coefficients for every position of a coefficient field; atoms
/// outside `trunc` are drawn and then zeroed, so nested windows share draws.
fn random_coefficients(law: &StableLaw, trunc: &TruncationSpec, seed: u64) -> Result<CoeffField> {
    let g = &trunc.grid;
    let mut c = CoeffField::zeros(g.d, g.n, g.spacing, trunc.j_min)?;
    c.data_mut().par_chunks_mut(rng::CHUNK).enumerate().for_each(|(k, chunk)| {
        let mut r = rng::stream(seed, k as u64);
        for v in chunk.iter_mut() {
            *v = law.draw(&mut r);
        }
    });
    let keep: Vec<bool> = c.iter().map(|(j, _)| trunc.keeps(j)).collect();
    for (v, k) in c.data_mut().iter_mut().zip(keep) {
        if !k {
            *v = 0.0;
        }
    }
    Ok(c)
}

/// A realisation of `Y_gamma = sum eta K_gamma psi` on `trunc.grid`, computed as
/// `K_gamma` applied to the synthesised series `sum eta psi`. `Y(0) = 0`.
pub fn field_y(
    gamma: f64,
    law: &StableLaw,
    basis: &WaveletBasis,
    trunc: &TruncationSpec,
    seed: u64,
) -> Result<SampledField> {
    if !trunc.unchecked {
        check_field_window(gamma, law.p(), trunc.grid.d, basis.regularity())?;
    }
    let c = random_coefficients(law, trunc, seed)?;
    let w = synthesize(&c, basis, &trunc.grid)?;
    modified_apply(&w, gamma)
}

/// The Gaussian-type generalised field `I_gamma (sum eta psi)` (no origin
/// correction), used for spectral checks.
pub fn field_x(
    gamma: f64,
    law: &StableLaw,
    basis: &WaveletBasis,
    trunc: &TruncationSpec,
    seed: u64,
) -> Result<SampledField> {
    let c = random_coefficients(law, trunc, seed)?;
    let w = synthesize(&c, basis, &trunc.grid)?;
    riesz_apply(&w, gamma)
}

/// Coefficients `<K_gamma(x, .) - K_gamma(x', .), psi>` for grid points `x`, `x'`
/// (flat indices), over the whole grid.
fn increment_coefficients(
    gamma: f64,
    x: usize,
    x_prime: usize,
    basis: &WaveletBasis,
    trunc: &TruncationSpec,
) -> Result<CoeffField> {
    let mut delta = trunc.grid.zeros();
    let mass = 1.0 / delta.cell();
    delta.data_mut()[x] += mass;
    delta.data_mut()[x_prime] -= mass;
    let g = riesz_apply(&delta, gamma)?;
    analyze(&g, basis, Some(trunc.j_min))
}

/// Exact SpS scale of `Y(x) - Y(x')` for grid points `x`, `x'` given as flat
/// indices into `trunc.grid`.
pub fn increment_scale(
    gamma: f64,
    law: &StableLaw,
    x: usize,
    x_prime: usize,
    basis: &WaveletBasis,
    trunc: &TruncationSpec,
) -> Result<f64> {
    if !trunc.unchecked {
        check_field_window(gamma, law.p(), trunc.grid.d, basis.regularity())?;
    }
    if x == x_prime {
        return Ok(0.0);
    }
    let c = increment_coefficients(gamma, x, x_prime, basis, trunc)?;
    let p = law.p();
    let sum: f64 = trunc.window(&c).iter().map(|v| v.abs().powf(p)).sum();
    Ok(law.sigma() * sum.powf(1.0 / p))
}

/// What the tail diagnostic measures.
#[derive(Debug, Clone)]
pub enum TailTarget {
    /// Coefficients of `I_gamma phi`, as in a pairing.
    Pairing(TestFunction),
    /// Coefficients of `K_gamma(x, .)` for the grid point `x` (flat index),
    /// as in one value of the field.
    Point(usize),
}

/// `sum |c|^p` of the coefficients outside each rung of `ladder`, measured
/// against every scale the grid carries from the widest rung's `j_min` down
/// to the finest. Rungs must be nested and widening.
pub fn tail_diagnostic(
    target: &TailTarget,
    gamma: f64,
    law: &StableLaw,
    basis: &WaveletBasis,
    ladder: &[TruncationSpec],
) -> Result<Vec<f64>> {
    let last = ladder.last().ok_or_else(|| Error::invalid("empty truncation ladder"))?;
    for (i, pair) in ladder.windows(2).enumerate() {
        if !pair[0].is_within(&pair[1]) {
            return Err(Error::NonNested(i + 1));
        }
    }
    let (d, p) = (last.grid.d, law.p());
    if !last.unchecked {
        match target {
            TailTarget::Pairing(_) => check_pairing_window(gamma, p, d, basis.regularity())?,
            TailTarget::Point(_) => check_field_window(gamma, p, d, basis.regularity())?,
        }
    }
    let c = match target {
        TailTarget::Pairing(phi) => analyze(&dilated_potential(phi, gamma, 1.0, &last.grid)?, basis, Some(last.j_min))?,
        TailTarget::Point(x) => increment_coefficients(gamma, *x, 0, basis, last)?,
    };
    let (_, finest) = TruncationSpec::levels(&last.grid)?;
    let reference = TruncationSpec { j_max: finest, with_scaling: true, ..last.clone() };
    let levels: Vec<(Option<i32>, f64)> = c.iter().filter(|(j, _)| reference.keeps(*j)).collect();
    Ok(ladder
        .iter()
        .map(|rung| {
            levels
                .iter()
                .filter(|(j, _)| !rung.keeps(*j))
                .fold(0.0, |acc, (_, v)| acc + v.abs().powf(p))
        })
        .collect())
}
