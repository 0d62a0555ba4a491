use stablewave::analysis::{corpus_constant, ss_bounds, t1_bounds_with, weighted_sampling_bound};
use stablewave::fracop::{kernel_norm, laplacian_identity_check, riesz_apply};
use stablewave::{analyze, corpus, synthesize, Grid, SampledField, StableLaw, TestFunction, WaveletBasis};

use crate::{Check, Failure, VerifyArgs};

struct Report {
    all_passed: bool,
}

impl Report {
    fn line(&mut self, name: &str, ok: bool, value: f64, bound: f64) {
        self.all_passed &= ok;
        println!("CHECK {name} {} {value:e} {bound:e}", if ok { "PASS" } else { "FAIL" });
    }

    /// `value <= bound`.
    fn below(&mut self, name: &str, value: f64, bound: f64) {
        self.line(name, value <= bound, value, bound);
    }
}

fn white_noise(grid: &Grid, seed: u64) -> Result<SampledField, Failure> {
    let xs = StableLaw::standard(2.0)?.sample(grid.len(), seed)?;
    Ok(SampledField::new(vec![grid.n; grid.d], grid.spacing, xs)?)
}

pub fn run(a: &VerifyArgs) -> Result<(), Failure> {
    println!("seed={}", a.seed);
    let mut r = Report { all_passed: true };
    let basis = || WaveletBasis::from_tag(&a.basis, a.d);
    match a.check {
        Check::Parseval => {
            let grid = Grid::new(a.d, a.n, 1.0 / a.n as f64)?;
            let f = white_noise(&grid, a.seed)?;
            let b = basis()?;
            let c = analyze(&f, &b, None)?;
            let energy: f64 = c.data().iter().map(|v| v * v).sum();
            let want = f.l2_norm().powi(2);
            r.below("parseval", (energy / want - 1.0).abs(), 1e-12);
            let back = synthesize(&c, &b, &grid)?;
            r.below("roundtrip", back.rel_l2_diff(&f), 1e-12);
        }
        Check::Scaling => {
            // I_gamma[phi(2 .)] on spacing h equals 2^{-gamma} I_gamma phi on spacing 2h
            let fine = Grid::new(a.d, a.n, 4.0 / a.n as f64)?;
            let coarse = Grid::new(a.d, a.n, 8.0 / a.n as f64)?;
            let phi = TestFunction::bump(a.d, 0.6)?;
            let u1 = riesz_apply(&phi.dilated(2.0)?.sample(&fine)?, a.gamma)?;
            let u2 = riesz_apply(&phi.sample(&coarse)?, a.gamma)?.scaled(2f64.powf(-a.gamma));
            let u2 = SampledField::new(u2.shape().to_vec(), fine.spacing, u2.into_data())?;
            r.below("riesz_scaling", u1.rel_l2_diff(&u2), 1e-6);
        }
        Check::Semigroup => {
            let grid = Grid::new(a.d, a.n, 1.0 / a.n as f64)?;
            let f = white_noise(&grid, a.seed)?;
            let lhs = riesz_apply(&riesz_apply(&f, a.alpha)?, a.beta)?;
            let rhs = riesz_apply(&f, a.alpha + a.beta)?;
            r.below("semigroup", lhs.rel_l2_diff(&rhs), 1e-10);
        }
        Check::Laplacian => {
            let grid = Grid::new(a.d, a.n, 1.0 / a.n as f64)?;
            let f = white_noise(&grid, a.seed)?;
            let c = laplacian_identity_check(&f, a.gamma)?;
            r.below("laplacian", c.residual, 1e-10);
            r.line("laplacian_sign", c.sign < 0.0, c.sign, -1.0);
        }
        Check::Kernel => {
            let points = if a.d == 1 { 9 } else { 5 };
            let mut pts = Vec::with_capacity(points);
            for i in 0..points {
                let t = 0.25 * 16f64.powf(i as f64 / (points - 1) as f64);
                let mut x = vec![0.0; a.d];
                x[0] = t;
                pts.push((t.ln(), kernel_norm(&x, a.gamma, a.p)?.ln()));
            }
            let slope = fit_slope(&pts);
            let want = a.gamma - (1.0 - 1.0 / a.p) * a.d as f64;
            r.below("kernel_homogeneity", (slope - want).abs(), 0.02);
        }
        Check::T1 => {
            let b = basis()?;
            let length = 4.0;
            let coarse = Grid::new(a.d, a.n, length / a.n as f64)?;
            let fine = Grid::new(a.d, 2 * a.n, length / (2 * a.n) as f64)?;
            let mut violations = 0;
            for phi in corpus(a.d) {
                let rep = t1_bounds_with(&phi.sample(&coarse)?, a.p, a.s, &b, f64::INFINITY)?;
                violations += usize::from(!rep.lower_holds());
            }
            r.below("t1_lower_violations", violations as f64, 0.0);
            let c1 = corpus_constant(&coarse, a.p, a.s, &b)?;
            let c2 = corpus_constant(&fine, a.p, a.s, &b)?;
            r.below("t1_constant_refinement", (c2 / c1 - 1.0).abs(), 0.1);
        }
        Check::Weighted => {
            let grid = Grid::new(a.d, a.n, 1.0 / a.n as f64)?;
            let f = TestFunction::bump(a.d, 0.2)?.sample(&grid)?;
            let rep = weighted_sampling_bound(&f, a.p)?;
            r.line("weighted_sampling", rep.passed(), rep.value, rep.upper);
        }
        Check::Ssbounds => {
            let b = basis()?;
            let grid = Grid::new(a.d, a.n, 8.0 / a.n as f64)?;
            let phi = TestFunction::deriv_bump(a.d, 0.5)?;
            for &dil in &a.a {
                let rep = ss_bounds(&phi, a.gamma, a.p, a.s, dil, &b, &grid)?;
                let ok = rep.passed();
                r.line(&format!("ss_lower(a={dil})"), ok, rep.lower, rep.value);
                r.line(&format!("ss_upper(a={dil})"), ok, rep.value, rep.upper);
            }
        }
    }
    if r.all_passed {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn fit_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
