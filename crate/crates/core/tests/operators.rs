use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use orlicz_tf::field::{make_gaussian, make_random_bandlimited, Grid, PhaseField, SampledField};
use orlicz_tf::modspace::{modulation_norm, ModulationSpaceSpec};
use orlicz_tf::psido::{apply, estimate_operator_norm, kernel, random_symbol};
use orlicz_tf::tfa::{quantization_change, wigner, QuantizationMatrix};
use orlicz_tf::young::YoungFunction;

/// Σ_i c_i e^{−(x−a_i)²/2 − (ξ−b_i)²/2} e^{i u_i x}.
fn atom_symbol(x: f64, xi: f64) -> C64 {
    let atoms = [(0.5, -1.0, 0.3, C64::new(1.0, 0.5)), (-1.5, 0.8, -0.7, C64::new(-0.4, 1.2))];
    atoms
        .iter()
        .map(|&(a, b, u, c)| c * C64::from_polar((-(x - a).powi(2) / 2.0 - (xi - b).powi(2) / 2.0).exp(), u * x))
        .sum()
}

fn oscillatory_sum(g: &Grid, t: f64, f: &SampledField) -> SampledField {
    // (2π)^{−1} Σ_m Σ_l a(x − t(x−y), ξ_l) f(y_m) e^{i(x−y)ξ_l} Δx Δξ
    let ax = g.axis(0);
    let dual = g.dual();
    let dx = ax.dual();
    let w = ax.spacing() * dx.spacing() / (2.0 * PI);
    let xs = ax.points();
    let xis = dual.axis(0).points();
    SampledField::from_fn(g, |p| {
        let x = p[0];
        let mut s = C64::new(0.0, 0.0);
        for (m, &y) in xs.iter().enumerate() {
            let arg = x - t * (x - y);
            for &xi in &xis {
                s += atom_symbol(arg, xi) * f.values()[m] * C64::from_polar(1.0, (x - y) * xi);
            }
        }
        s * w
    })
}

#[test]
fn kernel_matches_oscillatory_sum() {
    let g = Grid::new(1, 10.0, 96).unwrap();
    let a = PhaseField::from_fn(&g, |x, xi| atom_symbol(x[0], xi[0]));
    let f = make_random_bandlimited(&g, 3, 2.0);
    for q in [QuantizationMatrix::zero(), QuantizationMatrix::half(), QuantizationMatrix::identity()] {
        let got = apply(&a, q, &f).unwrap();
        let want = oscillatory_sum(&g, q.t(), &f);
        let err = got.values().iter().zip(want.values()).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max);
        assert!(err < 1e-8 * want.max_abs(), "{q:?}: {err}");
    }
}

#[test]
fn apply_is_linear() {
    let g = Grid::new(1, 10.0, 64).unwrap();
    let a = random_symbol(&g, 2).unwrap();
    let k = kernel(&a, QuantizationMatrix::half()).unwrap();
    let f = make_random_bandlimited(&g, 1, 2.0);
    let h = make_random_bandlimited(&g, 2, 2.0);
    let (al, be) = (C64::new(0.3, -2.0), C64::new(1.5, 0.25));
    let lhs = k.apply(&f.combine(al, &h, be).unwrap()).unwrap();
    let rhs = k.apply(&f).unwrap().combine(al, &k.apply(&h).unwrap(), be).unwrap();
    let err = lhs.values().iter().zip(rhs.values()).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max);
    assert!(err < 1e-12 * rhs.max_abs().max(1.0));
}

#[test]
fn quantization_change_preserves_l2() {
    let g = Grid::new(1, 10.0, 64).unwrap();
    let a = random_symbol(&g, 9).unwrap();
    for (p, q) in [(0.0, 0.5), (0.0, 1.0), (0.5, 1.0)] {
        let b = quantization_change(&a, QuantizationMatrix::t_identity(p).unwrap(), QuantizationMatrix::t_identity(q).unwrap())
            .unwrap();
        assert!((b.l2_norm() - a.l2_norm()).abs() < 1e-10 * a.l2_norm());
    }
}

#[test]
fn quantization_change_norm_equivalence() {
    // ‖a‖ and ‖quantization_change(a, 0, A)‖ in M^{Φ,Ψ} agree within a factor 4
    let spec = ModulationSpaceSpec::m(YoungFunction::entropy(), YoungFunction::power(1.5).unwrap());
    let mut factors = Vec::new();
    for n in [24, 32] {
        let g = Grid::balanced(1, n).unwrap();
        let a = random_symbol(&g, 4).unwrap();
        let b = quantization_change(&a, QuantizationMatrix::zero(), QuantizationMatrix::half()).unwrap();
        let na = modulation_norm(a.field(), &spec).unwrap();
        let nb = modulation_norm(b.field(), &spec).unwrap();
        let f = na.max(nb) / na.min(nb);
        assert!(f <= 4.0, "N={n}: {f}");
        factors.push(f);
    }
    assert!(factors[0].max(factors[1]) / factors[0].min(factors[1]) < 2.0, "{factors:?}");
}

#[test]
fn rank_one_operator_norm() {
    let g = Grid::new(1, 12.0, 128).unwrap();
    let f1 = make_gaussian(&g, 1.0, &[1.0], &[0.5]).unwrap().scaled(C64::new(2.0, 0.0));
    let f2 = make_gaussian(&g, 0.5, &[-1.0], &[]).unwrap();
    let q = QuantizationMatrix::half();
    let k = kernel(&wigner(&f1, &f2, q).unwrap(), q).unwrap();
    let m2 = ModulationSpaceSpec::lebesgue(2.0, 2.0).unwrap();
    let est = estimate_operator_norm(&k, &m2, &m2, None, 4, 7).unwrap();
    let want = (2.0 * PI).powf(-0.5) * f1.l2_norm() * f2.l2_norm();
    assert!((est.lower_bound - want).abs() < 1e-5 * want, "{} {want}", est.lower_bound);
    assert!(est.power_iterations > 0);
}
