use orlicz_tf::field::{make_random_bandlimited, Grid, SampledField};
use orlicz_tf::orlicz::luxemburg_norm;
use orlicz_tf::weights::Weight;
use orlicz_tf::young::YoungFunction;
use proptest::prelude::*;

fn builtin(i: usize) -> YoungFunction {
    match i {
        0 => YoungFunction::power(1.7).unwrap(),
        1 => YoungFunction::power_scaled(3.0).unwrap(),
        2 => YoungFunction::entropy(),
        3 => YoungFunction::tan_example(),
        4 => YoungFunction::log_example(),
        _ => YoungFunction::table(vec![(0.0, 0.0), (0.5, 0.1), (2.0, 1.5)], 2.0).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn young_fenchel(i in 0usize..6, s in 1e-3f64..5.0, t in 1e-3f64..5.0) {
        let y = builtin(i);
        let c = y.conjugate().unwrap();
        let rhs = y.evaluate(s) + c.evaluate(t);
        prop_assert!(s * t <= rhs * (1.0 + 1e-9) + 1e-12, "{} s={s} t={t}", y.name());
    }

    #[test]
    fn convex_along_chords(i in 0usize..6, a in 1e-3f64..1.0, b in 1e-3f64..1.0, th in 0.0f64..1.0) {
        let y = builtin(i);
        let mid = y.evaluate(th * a + (1.0 - th) * b);
        let chord = th * y.evaluate(a) + (1.0 - th) * y.evaluate(b);
        prop_assert!(mid <= chord * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn json_round_trip(i in 0usize..6) {
        let y = builtin(i);
        let text = serde_json::to_string(&y).unwrap();
        let back: YoungFunction = serde_json::from_str(&text).unwrap();
        for t in [1e-3, 0.1, 0.7, 1.3] {
            prop_assert_eq!(back.evaluate(t).to_bits(), y.evaluate(t).to_bits());
        }
    }

    #[test]
    fn luxemburg_is_homogeneous(i in 0usize..6, seed in 0u64..200, c in 0.05f64..20.0) {
        let g = Grid::new(1, 12.0, 128).unwrap();
        let f = make_random_bandlimited(&g, seed, 2.0);
        let y = builtin(i);
        let one = Weight::constant_one(1);
        let a = luxemburg_norm(&f.scaled(num_complex::Complex64::new(c, 0.0)), &y, &one).unwrap();
        let b = c * luxemburg_norm(&f, &y, &one).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * b);
    }
}

#[test]
fn field_csv_and_json_round_trip() {
    let g = Grid::new(1, 12.0, 64).unwrap();
    let f = make_random_bandlimited(&g, 8, 2.0);
    let back = SampledField::from_json(&f.to_json()).unwrap();
    assert_eq!(back, f);
    let back = SampledField::from_csv(&f.to_csv()).unwrap();
    let err = back.values().iter().zip(f.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(err < 1e-15 * f.max_abs().max(1.0));
}
