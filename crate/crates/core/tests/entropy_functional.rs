use num_complex::Complex64 as C64;
use orlicz_tf::entropy::{continuity_probe, entropy, gaussian_family_scan, window_comparison_constant, ProbeSpace};
use orlicz_tf::field::{make_hermite, make_random_bandlimited, standard_window, Grid, SampledField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn grid() -> Grid {
    Grid::new(1, 12.0, 128).unwrap()
}

#[test]
fn homogeneity_complex_scalars() {
    let g = grid();
    let phi = standard_window(&g);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..20 {
        let f = make_random_bandlimited(&g, i, 2.0);
        let z = C64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let a = entropy(&f.scaled(z), &phi).unwrap().value;
        let b = z.norm_sqr() * entropy(&f, &phi).unwrap().value;
        assert!((a - b).abs() <= 1e-9 * b.abs(), "{a} {b}");
    }
}

#[test]
fn zero_samples_are_finite() {
    let g = grid();
    let phi = standard_window(&g);
    let mut f = make_hermite(&g, 1);
    for v in f.values_mut().iter_mut().step_by(3) {
        *v = C64::new(0.0, 0.0);
    }
    assert!(entropy(&f, &phi).unwrap().value.is_finite());
    let tiny = SampledField::from_fn(&g, |_| C64::new(1e-200, 0.0));
    assert!(entropy(&tiny, &phi).unwrap().value.is_finite());
}

#[test]
fn window_comparison_constant_is_moderate() {
    let g = grid();
    let phi = standard_window(&g);
    let psi = make_hermite(&g, 0).combine(C64::new(1.0, 0.0), &make_hermite(&g, 2), C64::new(1.0, 0.0)).unwrap().normalized().unwrap();
    let signals: Vec<SampledField> = (0..50).map(|s| make_random_bandlimited(&g, 300 + s, 2.5).normalized().unwrap()).collect();
    let c = window_comparison_constant(&signals, &phi, &psi).unwrap();
    assert!(c.is_finite() && c <= 100.0, "{c}");
}

#[test]
fn mphi_probe_goes_to_zero() {
    let g = grid();
    let f = standard_window(&g);
    let dir = make_hermite(&g, 2);
    let amps: Vec<f64> = (1..=10).map(|k| 0.5f64.powi(k)).collect();
    let t = continuity_probe(&f, &dir, &amps, ProbeSpace::MPhi).unwrap();
    assert!(t.monotone, "{t:?}");
    assert!(t.rows.last().unwrap().delta_entropy < 1e-2 * t.rows[0].delta_entropy);
    for r in &t.rows {
        assert!(r.delta_entropy <= t.fitted_constant * r.norm * r.norm * (1.0 + r.norm.ln().abs()) * (1.0 + 1e-12));
    }
}

#[test]
fn family_is_symmetric_in_lambda() {
    let s = gaussian_family_scan(&[0.25, 4.0, 0.5, 2.0], 1, false).unwrap();
    assert!((s.rows[0].entropy - s.rows[1].entropy).abs() < 1e-6);
    assert!((s.rows[2].entropy - s.rows[3].entropy).abs() < 1e-6);
    let csv = s.to_csv();
    assert!(csv.starts_with("lambda,E,M2_norm,MPhi_norm\n"));
    assert_eq!(csv.lines().count(), 5);
}
