//! Luxemburg norms, iterated mixed Orlicz norms, and randomized checks of the
//! Hölder and Young inequalities for Orlicz spaces.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{make_random_atoms, AtomParams, Grid, SampledField, C64};
use crate::weights::Weight;
use crate::young::{geometric_grid, Kind, YoungFunction};

/// inf{λ > 0 : Σ_k cell·Φ(a_k/λ) ≤ 1} for nonnegative samples `a`.
pub fn luxemburg_samples(a: &[f64], cell: f64, phi: &YoungFunction) -> Result<f64> {
    let max = a.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return Ok(0.0);
    }
    if !max.is_finite() {
        return Err(Error::NonFinite("samples must be finite".into()));
    }
    let q = phi.quasi_order();
    let power = |p: f64, c: f64| {
        // Σ cell·c·(a/λ)^{p q} = 1
        let e = p * q;
        let s: f64 = a.iter().map(|v| v.powf(e)).sum::<f64>() * cell * c;
        s.powf(1.0 / e)
    };
    match phi.kind() {
        Kind::Power { p } => return Ok(power(*p, 1.0)),
        Kind::PowerScaled { p } => return Ok(power(*p, 1.0 / p)),
        Kind::Monomial { c, p } => return Ok(power(*p, *c)),
        _ => {}
    }
    let g = |lambda: f64| {
        let inv = 1.0 / lambda;
        let mut s = 0.0;
        for &v in a {
            if v > 0.0 {
                s += phi.evaluate_fast(v * inv);
                if s * cell > 1.0 {
                    return INF_SUM;
                }
            }
        }
        s * cell
    };
    let t2 = phi.landmarks().t2;
    let mut lo = (max / t2).max(1e-300);
    if g(lo) <= 1.0 {
        return Ok(lo);
    }
    let l1: f64 = a.iter().sum::<f64>() * cell;
    let mut hi = (l1 + max).max(lo * 2.0);
    let mut doublings = 0;
    while g(hi) > 1.0 {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > 2000 || !hi.is_finite() {
            return Err(Error::NonFinite("no finite λ satisfies the Luxemburg condition".into()));
        }
    }
    for _ in 0..200 {
        let mid = if hi > 4.0 * lo { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) <= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-13 * hi {
            break;
        }
    }
    Ok(hi)
}

const INF_SUM: f64 = f64::INFINITY;

/// ‖f‖ = inf{λ : ∫Φ(|fω|/λ) ≤ 1}.
pub fn luxemburg_norm(f: &SampledField, phi: &YoungFunction, w: &Weight) -> Result<f64> {
    let a = weighted_abs(f, w)?;
    luxemburg_samples(&a, f.grid().cell_volume(), phi)
}

fn weighted_abs(f: &SampledField, w: &Weight) -> Result<Vec<f64>> {
    let grid = f.grid();
    if w.dim() != grid.dim() {
        return Err(Error::AxisMismatch(format!(
            "weight of dimension {} on a {}-d field",
            w.dim(),
            grid.dim()
        )));
    }
    if w.is_constant_one() {
        return Ok(f.values().iter().map(|v| v.norm()).collect());
    }
    Ok(f
        .values()
        .iter()
        .enumerate()
        .map(|(k, v)| v.norm() * w.evaluate(&grid.point(k)))
        .collect())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Stage {
    pub axes: Vec<usize>,
    pub young: YoungFunction,
}

/// Stages are applied innermost first; the weight multiplies the integrand of
/// the first stage only.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MixedNormSpec {
    pub stages: Vec<Stage>,
    pub weight: Weight,
}

impl MixedNormSpec {
    pub fn new(stages: Vec<(Vec<usize>, YoungFunction)>, weight: Weight) -> Self {
        Self { stages: stages.into_iter().map(|(axes, young)| Stage { axes, young }).collect(), weight }
    }

    fn validate(&self, dim: usize) -> Result<()> {
        let mut seen = vec![false; dim];
        for s in &self.stages {
            if s.axes.is_empty() {
                return Err(Error::AxisMismatch("empty stage".into()));
            }
            for &a in &s.axes {
                if a >= dim || seen[a] {
                    return Err(Error::AxisMismatch(format!("axis {a} is out of range or repeated")));
                }
                seen[a] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::AxisMismatch("stages do not cover every axis".into()));
        }
        if self.weight.dim() != dim {
            return Err(Error::AxisMismatch(format!("weight dimension {} for {dim} axes", self.weight.dim())));
        }
        Ok(())
    }
}

/// Reorders a row-major array so that axes appear in the order `perm`.
fn permute(values: &[f64], shape: &[usize], perm: &[usize]) -> (Vec<f64>, Vec<usize>) {
    let d = shape.len();
    let mut strides = vec![1; d];
    for i in (0..d.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * shape[i + 1];
    }
    let new_shape: Vec<usize> = perm.iter().map(|&p| shape[p]).collect();
    let new_strides: Vec<usize> = perm.iter().map(|&p| strides[p]).collect();
    let mut out = Vec::with_capacity(values.len());
    let mut idx = vec![0usize; d];
    for _ in 0..values.len() {
        let src: usize = idx.iter().zip(&new_strides).map(|(i, s)| i * s).sum();
        out.push(values[src]);
        for a in (0..d).rev() {
            idx[a] += 1;
            if idx[a] < new_shape[a] {
                break;
            }
            idx[a] = 0;
        }
    }
    (out, new_shape)
}

/// Iterated Luxemburg norm of `f` per `spec`.
pub fn mixed_norm(f: &SampledField, spec: &MixedNormSpec) -> Result<f64> {
    let grid = f.grid();
    spec.validate(grid.dim())?;
    let mut data = weighted_abs(f, &spec.weight)?;
    let mut axes: Vec<usize> = (0..grid.dim()).collect();
    let mut shape = grid.shape();
    for stage in &spec.stages {
        let pos: Vec<usize> = stage.axes.iter().map(|a| axes.iter().position(|b| b == a).unwrap()).collect();
        let rest: Vec<usize> = (0..axes.len()).filter(|i| !pos.contains(i)).collect();
        let perm: Vec<usize> = rest.iter().chain(&pos).copied().collect();
        let (p, _) = permute(&data, &shape, &perm);
        let inner: usize = pos.iter().map(|&i| shape[i]).product();
        let cell: f64 = stage.axes.iter().map(|&a| grid.axis(a).spacing()).product();
        data = p
            .par_chunks(inner)
            .map(|chunk| luxemburg_samples(chunk, cell, &stage.young))
            .collect::<Result<Vec<_>>>()?;
        axes = rest.iter().map(|&i| axes[i]).collect();
        shape = rest.iter().map(|&i| shape[i]).collect();
    }
    Ok(data[0])
}

/// (f₁ ∗ f₂)(x) = ∫ f₁(x−y) f₂(y) dy with periodic wraparound.
pub fn convolve(f1: &SampledField, f2: &SampledField) -> Result<SampledField> {
    f1.grid().ensure_matches(f2.grid())?;
    let d = f1.grid().dim() as f64;
    let prod = f1.fourier_transform().multiply(&f2.fourier_transform())?;
    Ok(prod
        .inverse_fourier_transform()
        .scaled(C64::new((2.0 * std::f64::consts::PI).powf(d / 2.0), 0.0)))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InequalityReport {
    pub max_ratio: f64,
    pub holds: bool,
    pub bound: f64,
    pub trials: usize,
    pub seed: u64,
    pub precheck: bool,
    pub young: Value,
}

fn triple_json(p0: &YoungFunction, p1: &YoungFunction, p2: &YoungFunction) -> Value {
    json!({ "phi0": p0, "phi1": p1, "phi2": p2 })
}

/// Φ₀(t₁t₂) ≤ Φ₁(t₁)+Φ₂(t₂) on grid pairs, or Φ₀^{-1}(s) ≥ Φ₁^{-1}(s)Φ₂^{-1}(s)
/// on a log grid of s.
pub fn holder_precheck(p0: &YoungFunction, p1: &YoungFunction, p2: &YoungFunction) -> bool {
    let ts = geometric_grid(1e-4, 1e4, 41);
    let additive = ts.iter().all(|&a| {
        ts.iter().all(|&b| {
            let lhs = p0.evaluate(a * b);
            let rhs = p1.evaluate(a) + p2.evaluate(b);
            lhs <= rhs * (1.0 + 1e-9) + 1e-300
        })
    });
    if additive {
        return true;
    }
    geometric_grid(1e-6, 1e6, 61).iter().all(|&s| {
        p0.essential_inverse(s) * (1.0 + 1e-9) >= p1.essential_inverse(s) * p2.essential_inverse(s)
    })
}

/// Φ₁^{-1}(s)Φ₂^{-1}(s) ≤ sΦ₀^{-1}(s) on a log grid of s.
pub fn young_precheck(p0: &YoungFunction, p1: &YoungFunction, p2: &YoungFunction) -> bool {
    geometric_grid(1e-6, 1e6, 61).iter().all(|&s| {
        p1.essential_inverse(s) * p2.essential_inverse(s) <= s * p0.essential_inverse(s) * (1.0 + 1e-9)
    })
}

/// Grid used by the inequality verifiers.
pub fn inequality_grid() -> Grid {
    Grid::new(1, 12.0, 128).expect("valid grid")
}

/// Random atoms supported (to 1e−13) in [−L/2, L/2], with a log-uniform
/// amplitude in [1e−2, 1e2].
fn random_compact(grid: &Grid, rng: &mut ChaCha8Rng) -> SampledField {
    let l = grid.axis(0).half_extent;
    let params = AtomParams {
        count: rng.random_range(1..=4),
        center_radius: l / 8.0,
        min_width: l / 60.0,
        max_width: l / 24.0,
        freq_radius: 3.0,
    };
    let f = make_random_atoms(grid, rng.random(), &params);
    let amp = 10f64.powf(rng.random_range(-2.0..=2.0));
    let n = f.max_abs();
    f.scaled(C64::new(amp / n, 0.0))
}

/// ‖f₁f₂‖_{Φ₀} / (‖f₁‖_{Φ₁}‖f₂‖_{Φ₂}) over random pairs; holds iff ≤ 2.
pub fn verify_holder(
    p0: &YoungFunction,
    p1: &YoungFunction,
    p2: &YoungFunction,
    trials: usize,
    seed: u64,
) -> Result<InequalityReport> {
    let precheck = holder_precheck(p0, p1, p2);
    let grid = inequality_grid();
    let one = Weight::constant_one(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(SampledField, SampledField)> =
        (0..trials).map(|_| (random_compact(&grid, &mut rng), random_compact(&grid, &mut rng))).collect();
    let ratios = pairs
        .par_iter()
        .map(|(f1, f2)| {
            let num = luxemburg_norm(&f1.multiply(f2)?, p0, &one)?;
            let den = luxemburg_norm(f1, p1, &one)? * luxemburg_norm(f2, p2, &one)?;
            Ok(num / den)
        })
        .collect::<Result<Vec<f64>>>()?;
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    Ok(InequalityReport {
        max_ratio,
        holds: precheck && max_ratio <= 2.0,
        bound: 2.0,
        trials,
        seed,
        precheck,
        young: triple_json(p0, p1, p2),
    })
}

/// ‖f₁∗f₂‖_{Φ₀} / (‖f₁‖_{Φ₁}‖f₂‖_{Φ₂}) over random pairs; holds iff ≤ 2.
pub fn verify_young_convolution(
    p0: &YoungFunction,
    p1: &YoungFunction,
    p2: &YoungFunction,
    trials: usize,
    seed: u64,
) -> Result<InequalityReport> {
    let precheck = young_precheck(p0, p1, p2);
    let grid = inequality_grid();
    let one = Weight::constant_one(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(SampledField, SampledField)> =
        (0..trials).map(|_| (random_compact(&grid, &mut rng), random_compact(&grid, &mut rng))).collect();
    let ratios = pairs
        .par_iter()
        .map(|(f1, f2)| {
            let num = luxemburg_norm(&convolve(f1, f2)?, p0, &one)?;
            let den = luxemburg_norm(f1, p1, &one)? * luxemburg_norm(f2, p2, &one)?;
            Ok(num / den)
        })
        .collect::<Result<Vec<f64>>>()?;
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    Ok(InequalityReport {
        max_ratio,
        holds: precheck && max_ratio <= 2.0,
        bound: 2.0,
        trials,
        seed,
        precheck,
        young: triple_json(p0, p1, p2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_gaussian, make_random_bandlimited, standard_window, PhaseField};
    use crate::tfa::stft;

    fn pw(p: f64) -> YoungFunction {
        YoungFunction::power(p).unwrap()
    }

    #[test]
    fn single_sample() {
        assert_eq!(luxemburg_samples(&[2.0], 1.0, &pw(2.0)).unwrap(), 2.0);
        let t = YoungFunction::table(vec![(0.0, 0.0), (1.0, 1.0)], 1.0).unwrap();
        assert!((luxemburg_samples(&[2.0], 1.0, &t).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn cap_gives_sup() {
        let f = make_random_bandlimited(&inequality_grid(), 1, 2.0);
        let n = luxemburg_norm(&f, &YoungFunction::cap(1.0).unwrap(), &Weight::constant_one(1)).unwrap();
        assert_eq!(n, f.max_abs());
    }

    #[test]
    fn gaussian_l2_norm() {
        let f = standard_window(&Grid::new(1, 12.0, 256).unwrap());
        let n = luxemburg_norm(&f, &pw(2.0), &Weight::constant_one(1)).unwrap();
        assert!((n - 1.0).abs() < 1e-8);
        assert_eq!(luxemburg_norm(&SampledField::zeros(f.grid()), &pw(2.0), &Weight::constant_one(1)).unwrap(), 0.0);
    }

    #[test]
    fn bisection_matches_closed_form() {
        // power(3) through a table-free path: monomial capped far away
        let f = make_random_bandlimited(&inequality_grid(), 4, 2.0);
        let capped = YoungFunction::capped(pw(3.0), 1e6).unwrap();
        let a = luxemburg_norm(&f, &capped, &Weight::constant_one(1)).unwrap();
        assert!((a - f.lp_norm(3.0)).abs() < 1e-10 * a);
    }

    #[test]
    fn mixed_norm_separable_and_swapped() {
        let g = Grid::new(1, 8.0, 64).unwrap();
        let f = make_gaussian(&g, 1.0, &[0.5], &[]).unwrap();
        let h = make_gaussian(&g, 2.0, &[], &[]).unwrap();
        let big = PhaseField::from_fn(&g, |x, xi| {
            let j = ((x[0] + 8.0) / 0.25).round() as usize;
            let m = ((xi[0] + g.dual().axis(0).half_extent) / g.dual().axis(0).spacing()).round() as usize;
            f.values()[j] * h.values()[m]
        });
        let phi = YoungFunction::entropy();
        let psi = pw(1.5);
        let spec = MixedNormSpec::new(vec![(vec![0], phi.clone()), (vec![1], psi.clone())], Weight::constant_one(2));
        let lhs = mixed_norm(big.field(), &spec).unwrap();
        let one = Weight::constant_one(1);
        let hs = SampledField::new(g.dual(), h.values().to_vec()).unwrap();
        let rhs = luxemburg_norm(&f, &phi, &one).unwrap() * luxemburg_norm(&hs, &psi, &one).unwrap();
        assert!((lhs - rhs).abs() < 1e-10 * rhs, "{lhs} {rhs}");
    }

    #[test]
    fn mixed_l2_is_flat_l2() {
        let g = Grid::new(1, 8.0, 64).unwrap();
        let v = stft(&make_random_bandlimited(&g, 2, 2.0), &standard_window(&g)).unwrap();
        let spec = MixedNormSpec::new(vec![(vec![0], pw(2.0)), (vec![1], pw(2.0))], Weight::constant_one(2));
        let a = mixed_norm(v.field(), &spec).unwrap();
        let b = luxemburg_norm(v.field(), &pw(2.0), &Weight::constant_one(2)).unwrap();
        assert!((a - b).abs() < 1e-10 * b);
        let one_stage = MixedNormSpec::new(vec![(vec![0, 1], YoungFunction::entropy())], Weight::constant_one(2));
        let a = mixed_norm(v.field(), &one_stage).unwrap();
        let b = luxemburg_norm(v.field(), &YoungFunction::entropy(), &Weight::constant_one(2)).unwrap();
        assert_eq!(a, b);
        let bad = MixedNormSpec::new(vec![(vec![0], pw(2.0))], Weight::constant_one(2));
        assert!(matches!(mixed_norm(v.field(), &bad), Err(Error::AxisMismatch(_))));
    }

    #[test]
    fn convolution_of_gaussians() {
        // e^{−x²/2} ∗ e^{−x²/2} = √π e^{−x²/4}
        let g = Grid::new(1, 12.0, 256).unwrap();
        let f = SampledField::from_fn(&g, |x| C64::new((-x[0] * x[0] / 2.0).exp(), 0.0));
        let c = convolve(&f, &f).unwrap();
        let e = SampledField::from_fn(&g, |x| C64::new(std::f64::consts::PI.sqrt() * (-x[0] * x[0] / 4.0).exp(), 0.0));
        let err = c.values().iter().zip(e.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-12);
    }

    #[test]
    fn holder_cauchy_schwarz() {
        let r = verify_holder(&pw(1.0), &pw(2.0), &pw(2.0), 50, 1).unwrap();
        assert!(r.precheck && r.holds && r.max_ratio <= 1.0 + 1e-12);
    }

    #[test]
    fn prechecks() {
        let e = YoungFunction::entropy();
        assert!(holder_precheck(&pw(1.0), &e, &e.conjugate().unwrap()));
        assert!(!holder_precheck(&pw(1.0), &pw(2.0), &pw(3.0)));
        assert!(young_precheck(&YoungFunction::cap(1.0).unwrap(), &pw(2.0), &pw(2.0)));
        assert!(!young_precheck(&pw(1.0), &pw(2.0), &pw(2.0)));
    }
}
