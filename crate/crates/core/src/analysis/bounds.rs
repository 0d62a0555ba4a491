use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;

use super::{BoundParams, BoundReport};
use crate::error::{Error, Result};
use crate::fft;
use crate::quad;
use crate::field::{Grid, SampledField};
use crate::fracop::{riesz_apply, sobolev_norm};
use crate::synthesis::{check_pairing_window, TruncationSpec};
use crate::testfn::{corpus, TestFunction};
use crate::wavelet::{analyze, WaveletBasis};

/// Relative rounding allowance for inequalities that hold exactly in theory.
const ROUNDING: f64 = 1e-12;

fn check_t1_window(p: f64, s: f64, d: usize, r: f64) -> Result<()> {
    let w = |ok: bool, what: String| if ok { Ok(()) } else { Err(Error::Window(what)) };
    w(s < r, format!("s < r fails: {s} >= {r}"))?;
    if p == 2.0 {
        return w(s >= 0.0, format!("s >= 0 fails: s = {s}"));
    }
    w(p > 1.0 && p < 2.0, format!("1 < p < 2 fails: p = {p}"))?;
    let lo = d as f64 * (1.0 / p - 0.5);
    w(s > lo, format!("d(1/p - 1/2) < s fails: {lo} >= {s}"))
}

/// `l^p` norm of every wavelet and scaling coefficient the grid carries.
fn coefficient_norm(f: &SampledField, p: f64, basis: &WaveletBasis) -> Result<f64> {
    let grid = f.grid().ok_or_else(|| Error::Shape("field grid is not square".into()))?;
    let (lo, _) = TruncationSpec::levels(&grid)?;
    Ok(analyze(f, basis, Some(lo))?.lp_norm(p))
}

/// Grid on which corpus constants are calibrated: side length 4 around the origin.
fn reference_grid(d: usize) -> Result<Grid> {
    match d {
        1 => Grid::new(1, 1024, 1.0 / 256.0),
        2 => Grid::new(2, 128, 1.0 / 32.0),
        3 => Grid::new(3, 32, 1.0 / 8.0),
        _ => Err(Error::invalid(format!("no reference grid for d = {d}"))),
    }
}

type CacheKey = (usize, u64, u64, u64, u64, String);

fn constant_cache() -> &'static Mutex<HashMap<CacheKey, f64>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, f64>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Largest `l^p / ||.||_{H^p_s}` ratio over the test-function corpus sampled
/// on `grid`. Cached per grid, `(p, s)` and basis.
pub fn corpus_constant(grid: &Grid, p: f64, s: f64, basis: &WaveletBasis) -> Result<f64> {
    check_t1_window(p, s, grid.d, basis.regularity())?;
    let key = (grid.n, grid.spacing.to_bits(), grid.d as u64, p.to_bits(), s.to_bits(), basis.tag());
    if let Some(c) = constant_cache().lock().unwrap().get(&key) {
        return Ok(*c);
    }
    let ratios: Vec<f64> = corpus(grid.d)
        .par_iter()
        .map(|phi| {
            let f = phi.sample(grid)?;
            Ok(coefficient_norm(&f, p, basis)? / sobolev_norm(&f, p, s)?)
        })
        .collect::<Result<_>>()?;
    let c = ratios.into_iter().fold(0.0, f64::max);
    constant_cache().lock().unwrap().insert(key, c);
    Ok(c)
}

/// `||f||_2 <= (sum |<f, psi>|^p)^{1/p} <= C ||f||_{H^p_s}` with `C` the corpus
/// constant on the reference grid of the field's dimension.
pub fn t1_bounds(f: &SampledField, p: f64, s: f64, basis: &WaveletBasis) -> Result<BoundReport> {
    let c = corpus_constant(&reference_grid(f.d())?, p, s, basis)?;
    t1_bounds_with(f, p, s, basis, c)
}

/// [`t1_bounds`] with an explicit upper constant.
pub fn t1_bounds_with(f: &SampledField, p: f64, s: f64, basis: &WaveletBasis, constant: f64) -> Result<BoundReport> {
    check_t1_window(p, s, f.d(), basis.regularity())?;
    let value = coefficient_norm(f, p, basis)?;
    Ok(BoundReport {
        lower: f.l2_norm() * (1.0 - ROUNDING),
        value,
        upper: constant * sobolev_norm(f, p, s)?,
        constant,
        params: BoundParams { p, s: Some(s), gamma: None, a: None },
    })
}

/// `|| (sum_I |c_I|^2 w_j 2^{dj} 1_I)^{1/2} ||_p` with `w_j = (1 + 4^{sj}) / 2`.
///
/// Scaling coefficients count as atoms at the coarsest level. With the halved
/// weight the `s = 0`, `p = 2` case is exactly `||f||_2`.
pub fn square_function_norm(f: &SampledField, p: f64, s: f64, basis: &WaveletBasis) -> Result<f64> {
    if !(s >= 0.0 && s <= basis.regularity()) {
        return Err(Error::Window(format!("0 <= s <= r fails: s = {s}, r = {}", basis.regularity())));
    }
    let grid = f.grid().ok_or_else(|| Error::Shape("field grid is not square".into()))?;
    let (lo, hi) = TruncationSpec::levels(&grid)?;
    let c = analyze(f, basis, Some(lo))?;
    let (d, n) = (grid.d, grid.n);
    let q = hi + 1;
    // energy per dyadic cube, level by level
    let mut energy: Vec<Vec<f64>> = (lo..=hi).map(|j| vec![0.0; c.translates(j).pow(d as u32)]).collect();
    for (flat, v) in c.data().iter().enumerate() {
        if *v == 0.0 {
            continue;
        }
        let atom = c.atom(flat);
        let m = c.translates(atom.j);
        let cube = atom.k.iter().fold(0, |acc, &k| acc * m + k);
        let w = 0.5 * (1.0 + 4f64.powf(s * atom.j as f64)) * 2f64.powi(d as i32 * atom.j);
        energy[(atom.j - lo) as usize][cube] += w * v * v;
    }
    let mut idx = vec![0usize; d];
    let mut sum = 0.0;
    for i in 0..n.pow(d as u32) {
        f.multi_index(i, &mut idx);
        let mut sq = 0.0;
        for (l, e) in energy.iter().enumerate() {
            let j = lo + l as i32;
            let m = c.translates(j);
            let shift = q - j;
            let cube = idx.iter().fold(0, |acc, &x| acc * m + (x >> shift));
            sq += e[cube];
        }
        sum += sq.sqrt().powf(p);
    }
    Ok((sum * f.cell()).powf(1.0 / p))
}

/// Order of the B-spline that smooths the cutoff; `chi^` decays like
/// `|mu|^{-1-SPLINE}`, enough for the `|mu|^6` moment.
const SPLINE: i32 = 8;

/// Transform of the one-dimensional cutoff `chi = 1_{[-1/2, 1/2]} * B`, where
/// `B` is the `SPLINE`-fold convolution of uniform densities with total
/// support `[-1/4, 1/4]`. So `chi = 1` on `[-1/4, 1/4]` and `0` outside
/// `(-3/4, 3/4)`.
fn cutoff_hat(mu: f64) -> f64 {
    let sinc = |x: f64| if x == 0.0 { 1.0 } else { x.sin() / x };
    let w = 0.5 / SPLINE as f64;
    sinc(PI * mu) * sinc(PI * mu * w).powi(SPLINE)
}

/// `|cutoff_hat(mu)| <= TAIL_C |mu|^{-1-SPLINE}`.
fn tail_constant() -> f64 {
    let w = 0.5 / SPLINE as f64;
    1.0 / PI * (PI * w).powi(-SPLINE)
}

struct CutoffSpectrum {
    /// `int |mu|^{2k} |chi^(mu)| dmu` for `k = 0..=3`.
    moments: [f64; 4],
    /// `sup_lambda sum_k |chi^(lambda - k)|`.
    periodic_sup: f64,
}

fn cutoff_spectrum() -> &'static CutoffSpectrum {
    static SPEC: OnceLock<CutoffSpectrum> = OnceLock::new();
    SPEC.get_or_init(|| {
        // the zeros of chi^ are at the integers, so unit panels have constant sign
        const CUT: usize = 4000;
        let mut moments = [0.0; 4];
        for (k, mk) in moments.iter_mut().enumerate() {
            let e = 2 * k as i32;
            let body: f64 = (0..CUT)
                .into_par_iter()
                .map(|j| {
                    let (a, b) = (j as f64, j as f64 + 1.0);
                    quad::gauss_kronrod(|m| m.powi(e) * cutoff_hat(m).abs(), a, b, 1e-12 * b.powi(e))
                        .map(|r| r.value)
                        .unwrap_or(f64::NAN)
                })
                .sum();
            // int_CUT^inf C mu^{e - 1 - SPLINE}
            let t = tail_constant() * (CUT as f64).powi(e - SPLINE) / (SPLINE - e) as f64;
            *mk = 2.0 * (body + t);
        }
        // the periodised sum is even and 1-periodic in lambda
        let periodic_sup = (0..=200)
            .map(|i| {
                let lam = 0.5 * i as f64 / 200.0;
                let k = CUT as i64;
                let s: f64 = (-k..=k).map(|j| cutoff_hat(lam - j as f64).abs()).sum();
                s + 2.0 * tail_constant() * (CUT as f64 - 1.0).powi(-SPLINE) / SPLINE as f64
            })
            .fold(0.0, f64::max);
        CutoffSpectrum { moments, periodic_sup }
    })
}

/// `int (1 + |mu|^2)^d prod_i |chi^(mu_i)| dmu`, expanded multinomially.
fn weighted_cutoff_integral(d: usize) -> f64 {
    let m = &cutoff_spectrum().moments;
    // sum over a_1 + ... + a_d <= d of d! / (a_0! ... a_d!) prod M_{2 a_i}
    fn rec(d_left: usize, axes: usize, m: &[f64; 4], coef: f64, fact: &dyn Fn(usize) -> f64) -> f64 {
        if axes == 0 {
            return coef / fact(d_left);
        }
        (0..=d_left).map(|a| rec(d_left - a, axes - 1, m, coef * m[a] / fact(a), fact)).sum()
    }
    let fact = |k: usize| (1..=k).product::<usize>() as f64;
    fact(d) * rec(d, d, m, 1.0, &fact)
}

/// Constant `2^d S^{p-1} int (1 + |mu|^2)^d |chi^(mu)| dmu` of the lattice
/// sampling inequality, where `chi` is a smooth product cutoff equal to 1 on
/// `[-1/4, 1/4]^d` and `S = sup_lambda sum_k |chi^(lambda - k)|`.
pub fn weighted_sampling_constant(d: usize, p: f64) -> Result<f64> {
    if !(1..=3).contains(&d) {
        return Err(Error::invalid(format!("dimension {d} not supported (1..=3)")));
    }
    let s = cutoff_spectrum().periodic_sup.powi(d as i32);
    Ok(2f64.powi(d as i32) * s.powf(p - 1.0) * weighted_cutoff_integral(d))
}

/// `int |f^|^p (1 + |lambda|^2)^{-d} <= C sum_{k in Z^d} |f^(k)|^p (1 + |k|^2)^{-d}`
/// for `f` supported in `[-1/4, 1/4)^d`, with `C` from [`weighted_sampling_constant`].
///
/// The grid must have integer side length so that integer frequencies are DFT bins.
pub fn weighted_sampling_bound(f: &SampledField, p: f64) -> Result<BoundReport> {
    if !(1.0..=2.0).contains(&p) {
        return Err(Error::Window(format!("1 <= p <= 2 fails: p = {p}")));
    }
    let d = f.d();
    let grid = f.grid().ok_or_else(|| Error::Shape("field grid is not square".into()))?;
    let len = grid.length();
    if len < 1.0 || (len - len.round()).abs() > 1e-9 {
        return Err(Error::invalid(format!("grid length {len} must be a positive integer")));
    }
    let mut x = vec![0.0; d];
    let (mut inside, mut outside) = (0.0, 0.0);
    for (i, v) in f.data().iter().enumerate() {
        f.centered_coords_into(i, &mut x);
        if x.iter().all(|&c| (-0.25..0.25).contains(&c)) {
            inside += v.abs();
        } else {
            outside += v.abs();
        }
    }
    if outside > 1e-9 * (inside + outside) {
        return Err(Error::Support(format!(
            "mass outside [-1/4, 1/4)^d is {:.3e} of the total",
            outside / (inside + outside)
        )));
    }
    let lhs = crate::fracop::weighted_fourier_norm(f, p)?.powf(p);
    let spec = fft::forward(f);
    let mags = fft::frequency_magnitudes(f);
    let n = grid.n;
    let l = len.round() as usize;
    let mut idx = vec![0usize; d];
    let mut rhs = 0.0;
    for (i, (c, lam)) in spec.iter().zip(&mags).enumerate() {
        f.multi_index(i, &mut idx);
        if idx.iter().all(|&k| k % l == 0 && k != n / 2) {
            rhs += (f.cell() * c.norm()).powf(p) * (1.0 + lam * lam).powf(-(d as f64));
        }
    }
    let constant = weighted_sampling_constant(d, p)?;
    Ok(BoundReport {
        lower: 0.0,
        value: lhs,
        upper: constant * rhs,
        constant,
        params: BoundParams { p, ..Default::default() },
    })
}

/// Scale bounds for the dilated pairing `a^{d/2 + gamma} <X_gamma, phi(a .)>`:
///
/// `||I_gamma phi||_2 <= sigma(a)
///   <= C (a^{d(1/2-1/p)} ||I_gamma phi||_p + a^{d(1/2-1/p)+s} ||I_{gamma-s} phi||_p)`.
///
/// A larger scale means a smaller distribution function on the positive axis,
/// so `lower`/`upper` here are scales and the CDF bounds run the other way.
/// Both sides are evaluated through `u = (I_gamma phi)(a .)` on the same grid as
/// `sigma(a)`, using `||u||_q = a^{-d/q} ||I_gamma phi||_q` and
/// `(-Delta)^{s/2} u = a^s (I_{gamma-s} phi)(a .)`.
pub fn ss_bounds(
    phi: &TestFunction,
    gamma: f64,
    p: f64,
    s: f64,
    a: f64,
    basis: &WaveletBasis,
    grid: &Grid,
) -> Result<BoundReport> {
    let d = grid.d;
    check_pairing_window(gamma, p, d, basis.regularity())?;
    if s <= gamma {
        return Err(Error::Window(format!("s > gamma fails: {s} <= {gamma}")));
    }
    let constant = corpus_constant(&reference_grid(d)?, p, s, basis)?;
    let trunc = TruncationSpec::all_scales(*grid)?;
    let pr = crate::synthesis::pair_scale(phi, gamma, p, a, basis, &trunc)?;
    let phi_a = if a == 1.0 { phi.sample(grid)? } else { phi.dilated(a)?.sample(grid)? };
    let u = riesz_apply(&phi_a, gamma)?.scaled(a.powf(gamma));
    let norm = a.powf(0.5 * d as f64);
    Ok(BoundReport {
        lower: norm * u.l2_norm() * (1.0 - ROUNDING),
        value: pr.sigma,
        upper: constant * norm * sobolev_norm(&u, p, s)?,
        constant,
        params: BoundParams { p, s: Some(s), gamma: Some(gamma), a: Some(a) },
    })
}
