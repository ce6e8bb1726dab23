use num_complex::Complex64 as C64;
use orlicz_tf::field::{make_gaussian, make_hermite, make_random_bandlimited, standard_window, Grid, SampledField};
use orlicz_tf::modspace::{modulation_norm, stft_norm_factorization_check, ModulationSpaceSpec};
use orlicz_tf::young::YoungFunction;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn mixed_window(g: &Grid) -> SampledField {
    let h0 = make_hermite(g, 0);
    let h2 = make_hermite(g, 2);
    h0.combine(C64::new(1.0, 0.0), &h2, C64::new(0.5, 0.0)).unwrap().normalized().unwrap()
}

#[test]
fn window_change_gives_equivalent_norms() {
    let mut intervals = Vec::new();
    for n in [64, 128] {
        let g = Grid::new(1, 8.0, n).unwrap();
        let a = ModulationSpaceSpec::m(YoungFunction::entropy(), YoungFunction::power(1.5).unwrap());
        let b = a.clone().with_window(mixed_window(&g));
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for s in 0..50 {
            let f = make_random_bandlimited(&g, s, 2.0);
            let r = modulation_norm(&f, &a).unwrap() / modulation_norm(&f, &b).unwrap();
            lo = lo.min(r);
            hi = hi.max(r);
        }
        assert!(hi <= 10.0 && lo >= 0.1, "N={n}: [{lo}, {hi}]");
        intervals.push((lo, hi));
    }
    let (a, b) = (intervals[0], intervals[1]);
    assert!((a.0 / b.0 - 1.0).abs() <= 0.2 && (a.1 / b.1 - 1.0).abs() <= 0.2, "{intervals:?}");
}

#[test]
fn m2_norm_is_attained_by_pairing() {
    let g = Grid::new(1, 12.0, 128).unwrap();
    let f = make_random_bandlimited(&g, 21, 2.0);
    let m2 = ModulationSpaceSpec::lebesgue(2.0, 2.0).unwrap();
    let norm = modulation_norm(&f, &m2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut best = 0.0f64;
    for i in 0..200 {
        let r = make_random_bandlimited(&g, 1000 + i, 3.0);
        let sigma = 10f64.powf(rng.random_range(-4.0..=1.0));
        let cand = f.combine(C64::new(1.0, 0.0), &r.scaled(C64::new(f.l2_norm() / r.l2_norm(), 0.0)), C64::new(sigma, 0.0)).unwrap();
        let gnorm = modulation_norm(&cand, &m2).unwrap();
        let pair = f.inner_product(&cand.scaled(C64::new(1.0 / gnorm, 0.0))).unwrap().norm();
        assert!(pair <= norm * (1.0 + 1e-10));
        best = best.max(pair);
    }
    assert!(best * 1.05 >= norm, "{best} {norm}");
}

#[test]
fn factorization_ratio_is_stable() {
    let mut ratios = Vec::new();
    for n in [24, 32] {
        let g = Grid::balanced(1, n).unwrap();
        let f1 = make_gaussian(&g, 1.0, &[], &[]).unwrap();
        let f2 = make_hermite(&g, 1);
        let p1 = YoungFunction::power(1.0).unwrap();
        ratios.push(stft_norm_factorization_check(&f1, &f2, &p1, &p1).unwrap().ratio);
    }
    assert!(ratios[0].max(ratios[1]) / ratios[0].min(ratios[1]) <= 4.0, "{ratios:?}");
}

#[test]
fn factorization_gaussian_l2() {
    let g = Grid::balanced(1, 32).unwrap();
    let f = standard_window(&g);
    let p2 = YoungFunction::power(2.0).unwrap();
    let r = stft_norm_factorization_check(&f, &f, &p2, &p2).unwrap();
    assert!((r.ratio - 1.0).abs() < 5e-2, "{r:?}");
}

#[test]
fn spec_json_round_trip() {
    let spec = ModulationSpaceSpec::w(YoungFunction::entropy(), YoungFunction::power(3.0).unwrap())
        .with_weight(orlicz_tf::weights::Weight::polynomial(1.0, 2));
    let v = spec.to_json().unwrap();
    assert_eq!(v["flavor"], "W");
    assert_eq!(v["window"], "gaussian");
    let back = ModulationSpaceSpec::from_json(&v).unwrap();
    assert_eq!(back.to_json().unwrap(), v);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn norm_is_homogeneous(seed in 0u64..500, c in 0.01f64..100.0) {
        let g = Grid::new(1, 8.0, 64).unwrap();
        let f = make_random_bandlimited(&g, seed, 2.0);
        let spec = ModulationSpaceSpec::m(YoungFunction::entropy(), YoungFunction::power(1.5).unwrap());
        let a = modulation_norm(&f.scaled(C64::new(0.0, c)), &spec).unwrap();
        let b = c * modulation_norm(&f, &spec).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * b);
    }

    #[test]
    fn triangle_inequality(s1 in 0u64..500, s2 in 500u64..1000) {
        let g = Grid::new(1, 8.0, 64).unwrap();
        let f = make_random_bandlimited(&g, s1, 2.0);
        let h = make_random_bandlimited(&g, s2, 2.0);
        let spec = ModulationSpaceSpec::single(YoungFunction::entropy());
        let sum = f.combine(C64::new(1.0, 0.0), &h, C64::new(1.0, 0.0)).unwrap();
        let lhs = modulation_norm(&sum, &spec).unwrap();
        let rhs = modulation_norm(&f, &spec).unwrap() + modulation_norm(&h, &spec).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-9));
    }
}
