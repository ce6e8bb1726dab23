use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use orlicz_tf::field::{make_random_bandlimited, standard_window, Grid, SampledField};
use orlicz_tf::psido::{kernel, random_symbol};
use orlicz_tf::tfa::{stft, QuantizationMatrix};
use proptest::prelude::*;

#[test]
fn stft_magnitude_covariance() {
    let g = Grid::new(1, 12.0, 128).unwrap();
    let n = 128;
    let phi = standard_window(&g);
    let f = make_random_bandlimited(&g, 11, 2.0);
    let (k, m) = (5usize, 3usize);
    let c = k as f64 * g.axis(0).spacing();
    let nu = m as f64 * g.dual().axis(0).spacing();
    let moved = f.translated(&[c]).unwrap().modulated(&[nu]);
    let v = stft(&f, &phi).unwrap();
    let w = stft(&moved, &phi).unwrap();
    let mut err = 0.0f64;
    for j in 0..n {
        for l in 0..n {
            let a = w.values()[j * n + l].norm();
            let b = v.values()[((j + n - k) % n) * n + (l + n - m) % n].norm();
            err = err.max((a - b).abs());
        }
    }
    assert!(err < 1e-12 * v.max_abs(), "{err}");
}

#[test]
fn kernel_symbol_stft_relation() {
    // |V_φK(x,y,ξ,−η)| = (2π)^{−1/2}|V_ψa(x,η,ξ−η,y−x)| for A = 0,
    // φ(x,y) = (ℱ₂ψ)(x,x−y), ψ the 2-d standard Gaussian
    let g = Grid::balanced(1, 32).unwrap();
    let n = 32;
    let a = random_symbol(&g, 5).unwrap();
    let k = kernel(&a, QuantizationMatrix::zero()).unwrap();
    let kf = SampledField::new(g.product(&g), k.entries().to_vec()).unwrap();
    let phi = SampledField::from_fn(kf.grid(), |p| {
        C64::new((-p[0] * p[0] / 2.0 - (p[0] - p[1]).powi(2) / 2.0).exp() / PI.sqrt(), 0.0)
    });
    let psi = SampledField::from_fn(a.grid(), |p| C64::new((-(p[0] * p[0] + p[1] * p[1]) / 2.0).exp() / PI.sqrt(), 0.0));
    let vk = stft(&kf, &phi).unwrap();
    let va = stft(a.field(), &psi).unwrap();
    let idx = |i: [usize; 4]| ((i[0] * n + i[1]) * n + i[2]) * n + i[3];
    let c = (2.0 * PI).powf(-0.5);
    let (mut err, mut peak) = (0.0f64, 0.0f64);
    for jx in 0..n {
        for jy in 0..n {
            for mx in 0..n {
                for me in 0..n {
                    let lhs = vk.values()[idx([jx, jy, mx, (n - me) % n])].norm();
                    let rhs = va.values()[idx([jx, me, (mx + n + n / 2 - me) % n, (jy + n + n / 2 - jx) % n])].norm();
                    err = err.max((lhs - c * rhs).abs());
                    peak = peak.max(c * rhs);
                }
            }
        }
    }
    assert!(err < 1e-6 * peak, "{}", err / peak);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn stft_is_linear(seed in 0u64..1000, re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let g = Grid::new(1, 8.0, 64).unwrap();
        let phi = standard_window(&g);
        let f = make_random_bandlimited(&g, seed, 2.0);
        let h = make_random_bandlimited(&g, seed + 1, 2.0);
        let z = C64::new(re, im);
        let lhs = stft(&f.combine(z, &h, C64::new(1.0, 0.0)).unwrap(), &phi).unwrap();
        let rhs = stft(&f, &phi).unwrap().combine(z, &stft(&h, &phi).unwrap(), C64::new(1.0, 0.0)).unwrap();
        let err = lhs.values().iter().zip(rhs.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-12 * (1.0 + rhs.max_abs()));
    }

    #[test]
    fn moyal_any_signal(seed in 0u64..1000, band in 0.5f64..4.0) {
        let g = Grid::new(1, 12.0, 128).unwrap();
        let phi = standard_window(&g);
        let f = make_random_bandlimited(&g, seed, band);
        let v = stft(&f, &phi).unwrap();
        prop_assert!((v.l2_norm() - f.l2_norm()).abs() <= 1e-8 * f.l2_norm());
    }
}
