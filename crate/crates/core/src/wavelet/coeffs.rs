//! Dyadic indices and coefficient storage.
//!
//! Coefficients of a periodised transform are kept densely in the usual
//! Mallat square layout. Along each axis the wavelet of scale `j`,
//! orientation `e` and translate `k` sits at position `e_i * m_j + k_i`, with
//! `m_j = L 2^j` translates per axis; the scaling coefficients of the coarsest
//! level occupy `[0, m_{j_min})^d`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DyadicIndex {
    pub j: i32,
    pub k: Vec<i64>,
    pub e: Vec<u8>,
}

impl DyadicIndex {
    pub fn new(j: i32, k: Vec<i64>, e: Vec<u8>) -> Result<Self> {
        if k.len() != e.len() || k.is_empty() {
            return Err(Error::Shape("translate and orientation lengths differ".into()));
        }
        if e.iter().any(|&v| v > 1) {
            return Err(Error::invalid("orientation entries must be 0 or 1"));
        }
        if e.iter().all(|&v| v == 0) {
            return Err(Error::invalid("orientation e = 0 is reserved for scaling atoms"));
        }
        Ok(Self { j, k, e })
    }

    pub fn d(&self) -> usize {
        self.k.len()
    }
}

/// Axis-aligned cube `lower + [0, side)^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cube {
    pub lower: Vec<f64>,
    pub side: f64,
}

impl Cube {
    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter().zip(&self.lower).all(|(&xi, &lo)| xi >= lo && xi < lo + self.side)
    }

    pub fn volume(&self) -> f64 {
        self.side.powi(self.lower.len() as i32)
    }
}

/// The dyadic cube `2^{-j} (k + [0,1)^d)`.
pub fn dyadic_cube(index: &DyadicIndex) -> Cube {
    let side = 2f64.powi(-index.j);
    Cube {
        lower: index.k.iter().map(|&k| k as f64 * side).collect(),
        side,
    }
}

/// Decoded position in a [`CoeffField`].
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub j: i32,
    pub k: Vec<usize>,
    pub e: Vec<u8>,
}

impl Atom {
    pub fn is_scaling(&self) -> bool {
        self.e.iter().all(|&v| v == 0)
    }
}

/// Wavelet coefficients of a field on the torus `[0, L)^d`, `L = n h`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffField {
    d: usize,
    n: usize,
    /// `h = 2^{-q}`
    q: i32,
    j_min: i32,
    data: Vec<f64>,
}

pub(crate) fn dyadic_exponent(h: f64) -> Result<i32> {
    let q = -h.log2().round();
    if !(h > 0.0) || 2f64.powf(-q) != h || q.abs() > 60.0 {
        return Err(Error::NonDyadicSpacing(h));
    }
    Ok(q as i32)
}

impl CoeffField {
    /// Zero coefficients for an `n^d` grid of spacing `h`, scaling level `j_min`.
    pub fn zeros(d: usize, n: usize, spacing: f64, j_min: i32) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        if !n.is_power_of_two() || n < 2 {
            return Err(Error::NotPowerOfTwo(n));
        }
        let q = dyadic_exponent(spacing)?;
        let levels = n.trailing_zeros() as i32;
        let (lo, hi) = (q - levels, q - 1);
        if j_min < lo || j_min > hi {
            return Err(Error::ScaleRange { j_min, j_max: hi, lo, hi });
        }
        Ok(Self { d, n, q, j_min, data: vec![0.0; n.pow(d as u32)] })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Samples per axis of the underlying grid.
    pub fn side(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        2f64.powi(-self.q)
    }

    pub fn length(&self) -> f64 {
        self.n as f64 * self.spacing()
    }

    pub fn j_min(&self) -> i32 {
        self.j_min
    }

    /// Finest wavelet scale represented on the grid.
    pub fn j_max(&self) -> i32 {
        self.q - 1
    }

    /// Coarsest admissible scaling level for this grid.
    pub fn coarsest_level(&self) -> i32 {
        self.q - self.n.trailing_zeros() as i32
    }

    /// Translates per axis at scale `j`.
    pub fn translates(&self, j: i32) -> usize {
        self.n >> (self.q - j) as u32
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    fn axis_position(&self, flat: usize, ax: usize) -> usize {
        (flat / self.n.pow((self.d - 1 - ax) as u32)) % self.n
    }

    /// Scale of the coefficient at `flat`, or `None` for a scaling coefficient.
    pub fn level_of(&self, flat: usize) -> Option<i32> {
        let c = (0..self.d).map(|ax| self.axis_position(flat, ax)).max().unwrap();
        let m0 = self.translates(self.j_min);
        if c < m0 {
            return None;
        }
        Some(self.j_min + (c / m0).ilog2() as i32)
    }

    pub fn atom(&self, flat: usize) -> Atom {
        let (j, m) = match self.level_of(flat) {
            Some(j) => (j, self.translates(j)),
            None => (self.j_min, self.translates(self.j_min)),
        };
        let mut k = Vec::with_capacity(self.d);
        let mut e = Vec::with_capacity(self.d);
        for ax in 0..self.d {
            let c = self.axis_position(flat, ax);
            let ei = (c >= m) as usize;
            e.push(ei as u8);
            k.push(c - ei * m);
        }
        Atom { j, k, e }
    }

    fn flat_of(&self, j: i32, k: &[i64], e: &[u8]) -> Result<usize> {
        if k.len() != self.d {
            return Err(Error::Shape(format!("index has dimension {}, field has {}", k.len(), self.d)));
        }
        if j < self.j_min || j > self.j_max() {
            return Err(Error::ScaleRange { j_min: j, j_max: j, lo: self.j_min, hi: self.j_max() });
        }
        let m = self.translates(j) as i64;
        let mut flat = 0usize;
        for ax in 0..self.d {
            let kk = k[ax].rem_euclid(m) as usize;
            flat = flat * self.n + e[ax] as usize * m as usize + kk;
        }
        Ok(flat)
    }

    /// Coefficient of `psi_{jk}^e`; translates wrap around the torus.
    pub fn get(&self, idx: &DyadicIndex) -> Result<f64> {
        Ok(self.data[self.flat_of(idx.j, &idx.k, &idx.e)?])
    }

    pub fn set(&mut self, idx: &DyadicIndex, value: f64) -> Result<()> {
        let f = self.flat_of(idx.j, &idx.k, &idx.e)?;
        self.data[f] = value;
        Ok(())
    }

    /// Scaling coefficient at the coarsest level.
    pub fn scaling(&self, k: &[i64]) -> Result<f64> {
        Ok(self.data[self.flat_of(self.j_min, k, &vec![0; self.d])?])
    }

    pub fn set_scaling(&mut self, k: &[i64], value: f64) -> Result<()> {
        let f = self.flat_of(self.j_min, k, &vec![0; self.d])?;
        self.data[f] = value;
        Ok(())
    }

    /// `(scale, value)` for every stored coefficient; scale `None` marks scaling atoms.
    pub fn iter(&self) -> impl Iterator<Item = (Option<i32>, f64)> + '_ {
        self.data.iter().enumerate().map(|(i, &v)| (self.level_of(i), v))
    }

    /// Nonzero wavelet coefficients with their indices.
    pub fn wavelets(&self) -> impl Iterator<Item = (DyadicIndex, f64)> + '_ {
        self.data.iter().enumerate().filter(|(_, v)| **v != 0.0).filter_map(|(i, &v)| {
            let a = self.atom(i);
            (!a.is_scaling()).then(|| {
                (DyadicIndex { j: a.j, k: a.k.iter().map(|&x| x as i64).collect(), e: a.e }, v)
            })
        })
    }

    /// `sum |c|^p` over wavelets with `lo <= j <= hi`, plus scaling
    /// coefficients when `with_scaling`.
    pub fn lp_sum(&self, p: f64, lo: i32, hi: i32, with_scaling: bool) -> f64 {
        self.iter()
            .filter(|(j, _)| match j {
                Some(j) => *j >= lo && *j <= hi,
                None => with_scaling,
            })
            .map(|(_, v)| if p == 2.0 { v * v } else { v.abs().powf(p) })
            .sum()
    }

    /// `(sum |c|^p)^{1/p}` over every stored coefficient.
    pub fn lp_norm(&self, p: f64) -> f64 {
        self.lp_sum(p, i32::MIN, i32::MAX, true).powf(1.0 / p)
    }

    /// Copy with wavelets outside `[lo, hi]` zeroed; scaling coefficients kept
    /// only when `with_scaling`.
    pub fn truncated(&self, lo: i32, hi: i32, with_scaling: bool) -> CoeffField {
        let mut out = self.clone();
        for (i, v) in out.data.iter_mut().enumerate() {
            let keep = match self.level_of(i) {
                Some(j) => j >= lo && j <= hi,
                None => with_scaling,
            };
            if !keep {
                *v = 0.0;
            }
        }
        out
    }

    pub fn scaled(&self, c: f64) -> CoeffField {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v *= c);
        out
    }
}
