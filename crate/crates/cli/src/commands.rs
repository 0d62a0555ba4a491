use std::fmt::Write as _;
use std::path::Path;

use stablewave::analysis::{box_dimension, ecdf_ks, frostman_energy, periodogram_slope, Band};
use stablewave::io::{self, FieldMeta};
use stablewave::stable::empirical_char_fn;
use stablewave::synthesis::{field_y, pair_sample, pair_scale, tail_diagnostic, TailTarget, TruncationSpec};
use stablewave::{Grid, Shape, StableLaw, TestFunction, WaveletBasis};

use crate::{ExportArgs, FieldArgs, Failure, GridArgs, HausdorffArgs, KsArgs, PairArgs, SampleArgs, ShapeArg};
use crate::{SpectrumArgs, TailArgs, TailMode};

type Out = Result<(), Failure>;

fn write_lines(path: &Path, values: &[f64]) -> Out {
    let mut s = String::with_capacity(24 * values.len());
    for v in values {
        let _ = writeln!(s, "{v}");
    }
    io::write_atomic(path, s.as_bytes())?;
    Ok(())
}

pub fn sample_stable(a: &SampleArgs) -> Out {
    let law = StableLaw::new(a.p, a.sigma)?;
    println!("seed={}", a.seed);
    let xs = law.sample(a.n, a.seed)?;
    for xi in [0.5, 1.0, 2.0] {
        if !xs.is_empty() {
            println!("ecf({xi})={:.6} target={:.6}", empirical_char_fn(&xs, xi / a.sigma), law.char_fn(xi / a.sigma));
        }
    }
    match &a.out {
        Some(p) => write_lines(p, &xs)?,
        None if a.n <= 1000 => xs.iter().for_each(|v| println!("{v}")),
        None => {}
    }
    Ok(())
}

fn truncation(g: &GridArgs) -> Result<(Grid, WaveletBasis, TruncationSpec), Failure> {
    let spacing = g.length / g.n as f64;
    let grid = Grid::new(g.d, g.n, spacing)?;
    let basis = WaveletBasis::from_tag(&g.basis, g.d)?;
    let full = TruncationSpec::full(grid)?;
    let mut t = TruncationSpec::new(grid, g.jmin.unwrap_or(full.j_min), g.jmax.unwrap_or(full.j_max))?
        .with_scaling(!g.no_scaling);
    if g.unchecked {
        t = t.allow_outside_window();
    }
    Ok((grid, basis, t))
}

pub fn field(a: &FieldArgs) -> Out {
    let (_, basis, trunc) = truncation(&a.grid)?;
    let law = StableLaw::standard(a.p)?;
    println!("seed={}", a.seed);
    let y = field_y(a.gamma, &law, &basis, &trunc, a.seed)?;
    let meta = FieldMeta::new()
        .with("gamma", a.gamma)
        .with("p", a.p)
        .with("seed", a.seed)
        .with("jmin", trunc.j_min)
        .with("jmax", trunc.j_max)
        .with("basis", basis.tag());
    io::write_field(&y, &meta, &a.out)?;
    println!("wrote {}", a.out.display());
    if let Some(p) = &a.csv {
        io::export_csv(&y, p)?;
        println!("wrote {}", p.display());
    }
    if let Some(p) = &a.pgm {
        io::export_pgm(&y, p)?;
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn test_function(shape: ShapeArg, d: usize, radius: f64) -> Result<TestFunction, Failure> {
    let shape = match shape {
        ShapeArg::Bump => Shape::Bump,
        ShapeArg::Deriv => Shape::DerivBump,
        ShapeArg::Modulated => Shape::Modulated { freq: 1.0 },
        ShapeArg::Impulse => return Ok(TestFunction::impulse(d)),
    };
    Ok(TestFunction::new(shape, vec![0.0; d], radius)?)
}

pub fn pair(a: &PairArgs) -> Out {
    let grid = Grid::new(a.d, a.grid_n, a.length / a.grid_n as f64)?;
    let basis = WaveletBasis::from_tag(&a.basis, a.d)?;
    let mut trunc = TruncationSpec::all_scales(grid)?;
    if a.unchecked {
        trunc = trunc.allow_outside_window();
    }
    let phi = test_function(a.shape, a.d, a.radius)?;
    println!("seed={}", a.seed);
    let pr = pair_scale(&phi, a.gamma, a.p, a.a, &basis, &trunc)?;
    println!("sigma={}", pr.sigma);
    if a.draws > 0 {
        let law = StableLaw::standard(a.p)?;
        let xs = pair_sample(&phi, a.gamma, &law, &basis, &trunc, a.draws, a.seed)?;
        if xs.len() >= 100 {
            let sigma1 = pair_scale(&phi, a.gamma, a.p, 1.0, &basis, &trunc)?.sigma;
            println!("ks={}", ecdf_ks(&xs, &law.with_sigma(sigma1)?)?);
        }
        if let Some(p) = &a.out {
            write_lines(p, &xs)?;
        }
    }
    Ok(())
}

pub fn tails(a: &TailArgs) -> Out {
    let grid = Grid::new(a.d, a.n, a.length / a.n as f64)?;
    let basis = WaveletBasis::from_tag(&a.basis, a.d)?;
    let law = StableLaw::standard(a.p)?;
    let (lo, _) = TruncationSpec::levels(&grid)?;
    let ladder = a
        .ladder
        .iter()
        .map(|&j| {
            let t = TruncationSpec::new(grid, lo, j)?;
            Ok(if a.unchecked { t.allow_outside_window() } else { t })
        })
        .collect::<Result<Vec<_>, stablewave::Error>>()?;
    let target = match a.mode {
        TailMode::Pairing => TailTarget::Pairing(test_function(a.shape, a.d, a.radius)?),
        TailMode::Point => {
            // the grid point at distance `radius` along the first axis
            let k = (a.radius / grid.spacing).round() as usize;
            TailTarget::Point(k * a.n.pow(a.d as u32 - 1))
        }
    };
    let r = tail_diagnostic(&target, a.gamma, &law, &basis, &ladder)?;
    for (i, (j, v)) in a.ladder.iter().zip(&r).enumerate() {
        match i.checked_sub(1).map(|k| r[k]) {
            Some(prev) if prev > 0.0 => println!("jmax={j} residual={v:e} ratio={:.4}", v / prev),
            _ => println!("jmax={j} residual={v:e}"),
        }
    }
    let decreasing = r.windows(2).all(|w| w[1] < w[0] || w[0] == 0.0);
    println!("decreasing={decreasing}");
    Ok(())
}

pub fn spectrum(a: &SpectrumArgs) -> Out {
    let (f, _) = io::read_field(&a.input)?;
    let def = Band::default_for(&f);
    let band = Band { lo: a.lo.unwrap_or(def.lo), hi: a.hi.unwrap_or(def.hi) };
    println!("slope={}", periodogram_slope(&f, Some(band))?);
    Ok(())
}

pub fn hausdorff(a: &HausdorffArgs) -> Out {
    let (f, meta) = io::read_field(&a.input)?;
    if f.d() == 1 {
        let e = box_dimension(&f)?;
        println!("box_dimension={} stderr={}", e.estimate, e.stderr);
    }
    if let Some(g) = meta.parse::<f64>("gamma")? {
        println!("bound={}", 1.5 * f.d() as f64 - g + 1.0);
    }
    for &rho in &a.rho {
        println!("energy(rho={rho})={}", frostman_energy(&f, rho)?);
    }
    Ok(())
}

pub fn ks(a: &KsArgs) -> Out {
    let text = std::fs::read_to_string(&a.input)?;
    let xs: Vec<f64> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.trim().parse().map_err(|_| Failure::Usage(format!("not a number: {l:?}"))))
        .collect::<Result<_, _>>()?;
    let law = StableLaw::new(a.p, a.sigma)?;
    let d = ecdf_ks(&xs, &law)?;
    println!("ks={d} n={} critical95={}", xs.len(), 1.36 / (xs.len() as f64).sqrt());
    Ok(())
}

pub fn export_pgm(a: &ExportArgs) -> Out {
    let (f, _) = io::read_field(&a.input)?;
    io::export_pgm(&f, &a.out)?;
    println!("wrote {}", a.out.display());
    Ok(())
}
