use proptest::prelude::*;

use stablewave::analysis::{frostman_energy, t1_bounds_with};
use stablewave::fracop::{bessel_apply, modified_apply, riesz_apply};
use stablewave::stable::empirical_char_fn;
use stablewave::synthesis::{field_y, pair_sample, pair_scale};
use stablewave::wavelet::filters::daubechies;
use stablewave::{
    analyze, scale_of_sum, synthesize, Grid, SampledField, Shape, StableLaw, TestFunction, TruncationSpec,
    WaveletBasis,
};

fn random_field(d: usize, log_n: u32, length: f64, seed: u64, p: f64) -> SampledField {
    let n = 1usize << log_n;
    let g = Grid::new(d, n, length / n as f64).unwrap();
    let xs = StableLaw::standard(p).unwrap().sample(g.len(), seed).unwrap();
    SampledField::new(vec![n; d], g.spacing, xs).unwrap()
}

fn dims() -> impl Strategy<Value = (usize, u32)> {
    prop_oneof![(Just(1usize), 4u32..11), (Just(2usize), 3u32..7), (Just(3usize), 2u32..5)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn char_fn_is_even_and_decreasing(p in 0.05f64..=2.0, sigma in 0.1f64..5.0, a in 0.0f64..10.0, b in 0.0f64..10.0) {
        let law = StableLaw::new(p, sigma).unwrap();
        prop_assert_eq!(law.char_fn(0.0), 1.0);
        prop_assert_eq!(law.char_fn(a), law.char_fn(-a));
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(law.char_fn(hi) <= law.char_fn(lo));
    }

    #[test]
    fn cdf_is_symmetric_and_monotone(p in 0.6f64..=2.0, x in 0.0f64..20.0, dx in 0.0f64..3.0) {
        let law = StableLaw::standard(p).unwrap();
        let f = law.cdf(x).unwrap();
        prop_assert!((law.cdf(-x).unwrap() - (1.0 - f)).abs() < 1e-6);
        prop_assert!(law.cdf(x + dx).unwrap() >= f - 1e-9);
        prop_assert!((0.0..=1.0).contains(&f));
    }

    #[test]
    fn sampling_is_reproducible(p in 0.5f64..=2.0, n in 1usize..10_000, seed in any::<u64>()) {
        let law = StableLaw::standard(p).unwrap();
        let a = law.sample(n, seed).unwrap();
        let b = law.sample(n, seed).unwrap();
        prop_assert!(a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits()));
        // a prefix of a longer run is the shorter run
        let longer = law.sample(n + 5000, seed).unwrap();
        prop_assert!(a.iter().zip(&longer).all(|(x, y)| x.to_bits() == y.to_bits()));
    }

    #[test]
    fn daubechies_filters_are_orthonormal(order in 1usize..=10) {
        let h = daubechies(order).unwrap();
        prop_assert!((h.iter().sum::<f64>() - 2f64.sqrt()).abs() < 1e-12);
        for m in 0..order as isize {
            let s: f64 = (0..h.len() as isize)
                .filter_map(|k| h.get((k + 2 * m) as usize).map(|v| v * h[k as usize]))
                .sum();
            prop_assert!((s - if m == 0 { 1.0 } else { 0.0 }).abs() < 1e-12, "m={} {}", m, s);
        }
    }

    #[test]
    fn transform_is_isometric_and_invertible((d, log_n) in dims(), order in 1usize..=8, seed in any::<u64>(), p in 1.0f64..=2.0) {
        let f = random_field(d, log_n, 1.0, seed, p);
        let basis = stablewave::build_basis(stablewave::Family::Daubechies, order, d).unwrap();
        let c = analyze(&f, &basis, None).unwrap();
        let energy: f64 = c.data().iter().map(|v| v * v).sum();
        let want = f.l2_norm().powi(2);
        prop_assert!((energy / want - 1.0).abs() < 1e-8);
        let back = synthesize(&c, &basis, &f.grid().unwrap()).unwrap();
        prop_assert!(back.max_abs_diff(&f) < 1e-8 * f.data().iter().fold(1.0f64, |m, v| m.max(v.abs())));
    }

    #[test]
    fn riesz_semigroup_and_adjoint((d, log_n) in dims(), a in 0.0f64..0.9, b in 0.0f64..0.9, seed in any::<u64>()) {
        let f = random_field(d, log_n, 1.0, seed, 2.0);
        let g = random_field(d, log_n, 1.0, seed ^ 1, 2.0);
        let two = riesz_apply(&riesz_apply(&f, a).unwrap(), b).unwrap();
        prop_assert!(two.rel_l2_diff(&riesz_apply(&f, a + b).unwrap()) < 1e-12);
        let lhs = riesz_apply(&f, a).unwrap().inner(&g).unwrap();
        let rhs = f.inner(&riesz_apply(&g, a).unwrap()).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1e-300) + 1e-14);
        let inv = bessel_apply(&bessel_apply(&f, a).unwrap(), -a).unwrap();
        prop_assert!(inv.rel_l2_diff(&f) < 1e-12);
        let k = modified_apply(&riesz_apply(&f, b).unwrap(), a).unwrap();
        prop_assert!(k.rel_l2_diff(&modified_apply(&f, a + b).unwrap()) < 1e-10);
    }

    #[test]
    fn riesz_scaling_on_bumps(gamma in 0.1f64..0.95, log_a in 1u32..=2, r in 0.3f64..0.8) {
        let a = (1u32 << log_a) as f64;
        let n = 4096;
        let fine = Grid::new(1, n, 4.0 / n as f64).unwrap();
        let coarse = Grid::new(1, n, 4.0 * a / n as f64).unwrap();
        let phi = TestFunction::bump(1, r).unwrap();
        let u1 = riesz_apply(&phi.dilated(a).unwrap().sample(&fine).unwrap(), gamma).unwrap();
        let u2 = riesz_apply(&phi.sample(&coarse).unwrap(), gamma).unwrap().scaled(a.powf(-gamma));
        let u2 = SampledField::new(vec![n], fine.spacing, u2.into_data()).unwrap();
        prop_assert!(u1.rel_l2_diff(&u2) < 1e-6);
    }

    #[test]
    fn pairing_is_linear_in_amplitude(c in -5.0f64..5.0, gamma in 0.18f64..0.33, seed in any::<u64>()) {
        let b = WaveletBasis::default_for(1).unwrap();
        let t = TruncationSpec::all_scales(Grid::new(1, 128, 4.0 / 128.0).unwrap()).unwrap();
        let phi = TestFunction::deriv_bump(1, 0.5).unwrap();
        let law = StableLaw::standard(1.5).unwrap();
        let s1 = pair_scale(&phi, gamma, 1.5, 1.0, &b, &t).unwrap().sigma;
        let sc = pair_scale(&phi.clone().with_amplitude(c), gamma, 1.5, 1.0, &b, &t).unwrap().sigma;
        prop_assert!((sc - c.abs() * s1).abs() <= 1e-12 * s1.max(1.0));
        let x1 = pair_sample(&phi, gamma, &law, &b, &t, 50, seed).unwrap();
        let xc = pair_sample(&phi.clone().with_amplitude(c), gamma, &law, &b, &t, 50, seed).unwrap();
        for (u, v) in x1.iter().zip(&xc) {
            prop_assert!((v - c * u).abs() <= 1e-10 * (1.0 + u.abs() * c.abs()));
        }
    }

    #[test]
    fn gaussian_pairing_scale_is_l2_norm(gamma in 0.0f64..0.5, r in 0.3f64..0.9, shape in 0usize..3) {
        let b = WaveletBasis::default_for(1).unwrap();
        let g = Grid::new(1, 512, 4.0 / 512.0).unwrap();
        let t = TruncationSpec::all_scales(g).unwrap();
        let shape = [Shape::Bump, Shape::DerivBump, Shape::Modulated { freq: 2.0 }][shape];
        let phi = TestFunction::new(shape, vec![0.1], r).unwrap();
        let sigma = pair_scale(&phi, gamma, 2.0, 1.0, &b, &t).unwrap().sigma;
        let u = riesz_apply(&phi.sample(&g).unwrap(), gamma).unwrap();
        prop_assert!((sigma / u.l2_norm() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn wavelet_lp_norm_dominates_l2(p in 1.05f64..2.0, s_frac in 0.05f64..0.95, idx in 0usize..20) {
        let b = WaveletBasis::default_for(1).unwrap();
        let g = Grid::new(1, 256, 4.0 / 256.0).unwrap();
        let lo = 1.0 / p - 0.5;
        let s = lo + s_frac * (2.0 - lo);
        let f = stablewave::corpus(1)[idx].sample(&g).unwrap();
        let r = t1_bounds_with(&f, p, s, &b, f64::INFINITY).unwrap();
        prop_assert!(r.lower_holds(), "{:?}", r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn fields_vanish_at_origin_and_repeat((d, gamma, p) in prop_oneof![
        (Just(1usize), 0.55f64..1.2, 1.5f64..=2.0),
        (Just(2usize), 1.05f64..1.6, 1.8f64..=2.0),
    ], seed in any::<u64>()) {
        let b = WaveletBasis::default_for(d).unwrap();
        let n = if d == 1 { 1024 } else { 64 };
        let t = TruncationSpec::full(Grid::new(d, n, 1.0 / n as f64).unwrap()).unwrap();
        let law = StableLaw::standard(p).unwrap();
        let y = field_y(gamma, &law, &b, &t, seed).unwrap();
        prop_assert_eq!(y.at_origin(), 0.0);
        let again = field_y(gamma, &law, &b, &t, seed).unwrap();
        prop_assert!(y.data().iter().zip(again.data()).all(|(a, b)| a.to_bits() == b.to_bits()));
    }

    #[test]
    fn energy_increases_with_rho(r1 in 0.1f64..2.5, dr in 0.01f64..1.0, seed in any::<u64>()) {
        let f = random_field(1, 8, 1.0, seed, 2.0);
        let e1 = frostman_energy(&f, r1).unwrap();
        let e2 = frostman_energy(&f, r1 + dr).unwrap();
        prop_assert!(e2 >= e1);
    }

    #[test]
    fn sums_of_stable_draws_are_stable(p in 0.8f64..=2.0, seed in any::<u64>()) {
        let sigmas = [0.3, 0.5, 0.7, 1.0, 1.1, 1.3, 0.2, 0.9, 0.4, 0.6];
        let laws: Vec<StableLaw> = sigmas.iter().map(|&s| StableLaw::new(p, s).unwrap()).collect();
        let n = 40_000;
        let mut sum = vec![0.0; n];
        for (i, law) in laws.iter().enumerate() {
            for (acc, x) in sum.iter_mut().zip(law.sample(n, seed.wrapping_add(i as u64)).unwrap()) {
                *acc += x;
            }
        }
        let total = StableLaw::new(p, scale_of_sum(&laws).unwrap()).unwrap();
        for xi in [0.1, 0.3, 0.6] {
            // 3/sqrt(n) gives about 99% coverage per point; 5/sqrt(n) keeps the
            // family-wise false-failure rate negligible over many cases
            prop_assert!((empirical_char_fn(&sum, xi) - total.char_fn(xi)).abs() < 5.0 / (n as f64).sqrt());
        }
    }
}
