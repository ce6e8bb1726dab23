//! Pseudo-differential operators Op_A(a) on a one-dimensional grid, built
//! from their distribution kernels, plus empirical operator-norm bounds.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{make_random_atoms, transform_axes, AtomParams, Grid, LineShift, PhaseField, SampledField};
use crate::modspace::{modulation_norm, ModulationSpaceSpec, Window};
use crate::tfa::{quantization_change, QuantizationMatrix};
use crate::young::Kind;

/// K[j,m] ≈ K_{a,A}(x_j, y_m); Op_A(a)f(x_j) = Σ_m K[j,m] f(y_m) Δ.
#[derive(Clone, Debug)]
pub struct KernelMatrix {
    grid: Grid,
    a: QuantizationMatrix,
    entries: Vec<C64>,
}

impl KernelMatrix {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn quantization(&self) -> QuantizationMatrix {
        self.a
    }

    pub fn n(&self) -> usize {
        self.grid.len()
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn get(&self, j: usize, m: usize) -> C64 {
        self.entries[j * self.n() + m]
    }

    pub fn apply(&self, f: &SampledField) -> Result<SampledField> {
        self.grid.ensure_matches(f.grid())?;
        let n = self.n();
        let h = self.grid.cell_volume();
        let fv = f.values();
        let out: Vec<C64> = self
            .entries
            .par_chunks(n)
            .map(|row| row.iter().zip(fv).map(|(k, v)| k * v).sum::<C64>() * h)
            .collect();
        SampledField::new(self.grid.clone(), out)
    }

    /// Adjoint operator: K*[j,m] = conj(K[m,j]).
    pub fn apply_adjoint(&self, f: &SampledField) -> Result<SampledField> {
        self.grid.ensure_matches(f.grid())?;
        let n = self.n();
        let h = self.grid.cell_volume();
        let fv = f.values();
        let out: Vec<C64> = (0..n)
            .into_par_iter()
            .map(|j| (0..n).map(|m| self.entries[m * n + j].conj() * fv[m]).sum::<C64>() * h)
            .collect();
        SampledField::new(self.grid.clone(), out)
    }
}

/// K_{a,A}(x,y) = (2π)^{−1/2} (ℱ₂⁻¹a)(x − A(x−y), x−y), with the shear
/// evaluated by trigonometric interpolation along x.
pub fn kernel(a: &PhaseField, quant: QuantizationMatrix) -> Result<KernelMatrix> {
    if a.d() != 1 {
        return Err(Error::Unsupported("pseudo-differential operators are implemented for d = 1".into()));
    }
    let grid = a.x_grid();
    let ax = *grid.axis(0);
    let n = ax.n;
    let mut b = a.values().to_vec();
    let zgrid = transform_axes(&mut b, a.grid(), &[1], true);
    let zax = *zgrid.axis(1);
    let t = quant.t();
    let scale = (2.0 * PI).powf(-0.5);
    // cols[k][j] = B(x_j − t z_k, z_k)
    let cols: Vec<Vec<C64>> = (0..n)
        .into_par_iter()
        .map(|k| {
            let mut col: Vec<C64> = (0..n).map(|j| b[j * n + k]).collect();
            if t != 0.0 {
                LineShift::new(&ax, t * zax.point(k)).apply(&mut col);
            }
            col
        })
        .collect();
    let mut entries = vec![C64::new(0.0, 0.0); n * n];
    entries.par_chunks_mut(n).enumerate().for_each(|(j, row)| {
        for (m, r) in row.iter_mut().enumerate() {
            let k = (j + n + n / 2 - m) % n;
            *r = cols[k][j] * scale;
        }
    });
    Ok(KernelMatrix { grid, a: quant, entries })
}

pub fn apply(a: &PhaseField, quant: QuantizationMatrix, f: &SampledField) -> Result<SampledField> {
    kernel(a, quant)?.apply(f)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalculiReport {
    pub max_error: f64,
}

/// ‖Op_{A₁}(a)f − Op_{A₂}(a₂)f‖₂ / ‖f‖₂ with a₂ the transferred symbol.
pub fn calculi_consistency(
    a: &PhaseField,
    a1: QuantizationMatrix,
    a2: QuantizationMatrix,
    f: &SampledField,
) -> Result<CalculiReport> {
    let g1 = apply(a, a1, f)?;
    let g2 = apply(&quantization_change(a, a1, a2)?, a2, f)?;
    let nf = f.l2_norm();
    if nf == 0.0 {
        return Ok(CalculiReport { max_error: 0.0 });
    }
    let diff = g1.combine(C64::new(1.0, 0.0), &g2, C64::new(-1.0, 0.0))?;
    Ok(CalculiReport { max_error: diff.l2_norm() / nf })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorNormEstimate {
    pub lower_bound: f64,
    pub symbol_norm: Option<f64>,
    pub ratio: Option<f64>,
    pub trials: usize,
    pub seed: u64,
    pub power_iterations: usize,
}

/// Trial signals for operator-norm searches; the continuous functions depend
/// only on (seed, i), so bounds at different resolutions are comparable.
pub fn trial_signal(grid: &Grid, seed: u64, i: usize) -> SampledField {
    let params = AtomParams { count: 1 + i % 4, ..AtomParams::default() };
    make_random_atoms(grid, seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(i as u64), &params)
}

fn is_plain_l2(spec: &ModulationSpaceSpec) -> bool {
    let two = |y: &crate::young::YoungFunction| matches!(y.kind(), Kind::Power { p } if *p == 2.0) && y.quasi_order() == 1.0;
    two(&spec.phi)
        && two(&spec.psi)
        && spec.weight.as_ref().is_none_or(|w| w.is_constant_one())
        && matches!(spec.window, Window::Gaussian)
}

/// Lower bound for ‖Op_A(a)‖ from `domain` to `codomain`: the best ratio
/// over random trial signals, refined by power iteration on K*K when both
/// spaces are M² with the Gaussian window (then both norms are L² norms
/// times the same ‖φ‖₂, which cancels).
pub fn estimate_operator_norm(
    k: &KernelMatrix,
    domain: &ModulationSpaceSpec,
    codomain: &ModulationSpaceSpec,
    symbol_norm: Option<f64>,
    trials: usize,
    seed: u64,
) -> Result<OperatorNormEstimate> {
    let grid = k.grid().clone();
    let mut best = 0.0f64;
    let mut best_f: Option<SampledField> = None;
    for i in 0..trials {
        let f = trial_signal(&grid, seed, i);
        let nd = modulation_norm(&f, domain)?;
        if nd == 0.0 {
            continue;
        }
        let r = modulation_norm(&k.apply(&f)?, codomain)? / nd;
        if r > best {
            best = r;
            best_f = Some(f);
        }
    }
    let mut iterations = 0;
    if is_plain_l2(domain) && is_plain_l2(codomain) {
        if let Some(mut v) = best_f {
            for _ in 0..200 {
                let nv = v.l2_norm();
                if nv == 0.0 {
                    break;
                }
                v = v.scaled(C64::new(1.0 / nv, 0.0));
                let kv = k.apply(&v)?;
                let r = kv.l2_norm();
                iterations += 1;
                let prev = best;
                best = best.max(r);
                v = k.apply_adjoint(&kv)?;
                if iterations > 5 && (best - prev).abs() <= 1e-14 * best {
                    break;
                }
            }
        }
    }
    let ratio = symbol_norm.map(|s| best / s);
    Ok(OperatorNormEstimate { lower_bound: best, symbol_norm, ratio, trials, seed, power_iterations: iterations })
}

/// Random smooth symbol: Gabor atoms on phase space whose continuous form
/// depends only on the seed.
pub fn random_symbol(x_grid: &Grid, seed: u64) -> Result<PhaseField> {
    let phase = x_grid.phase_grid();
    let f = make_random_atoms(&phase, seed, &symbol_atoms());
    PhaseField::new(f)
}

pub fn symbol_atoms() -> AtomParams {
    AtomParams { count: 3, center_radius: 2.0, min_width: 0.8, max_width: 1.5, freq_radius: 1.5 }
}

/// Grid for symbol modulation norms: a fixed balanced 2-d grid, so that the
/// symbol norm of a generated symbol does not depend on the operator grid.
pub fn symbol_norm_grid() -> Grid {
    Grid::balanced(2, 32).expect("valid grid")
}

/// ‖a‖ in `spec` for the generated symbol `seed`, on `symbol_norm_grid`.
pub fn random_symbol_norm(seed: u64, spec: &ModulationSpaceSpec) -> Result<f64> {
    let g = symbol_norm_grid();
    modulation_norm(&make_random_atoms(&g, seed, &symbol_atoms()), spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_gaussian, make_random_bandlimited};
    use crate::tfa::wigner;

    fn grid() -> Grid {
        Grid::new(1, 10.0, 128).unwrap()
    }

    fn rel(a: &SampledField, b: &SampledField) -> f64 {
        let d = a.combine(C64::new(1.0, 0.0), b, C64::new(-1.0, 0.0)).unwrap();
        d.l2_norm() / b.l2_norm()
    }

    #[test]
    fn identity_symbol() {
        let g = grid();
        let one = PhaseField::from_fn(&g, |_, _| C64::new(1.0, 0.0));
        for q in [QuantizationMatrix::zero(), QuantizationMatrix::half(), QuantizationMatrix::identity()] {
            let k = kernel(&one, q).unwrap();
            let h = g.cell_volume();
            for j in 0..g.len() {
                for m in 0..g.len() {
                    let want = if j == m { 1.0 / h } else { 0.0 };
                    assert!((k.get(j, m) - want).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn translation_symbol() {
        let g = grid();
        let c = 8.0 * g.axis(0).spacing();
        let a = PhaseField::from_fn(&g, |_, xi| C64::from_polar(1.0, xi[0] * c));
        let f = make_gaussian(&g, 1.0, &[0.5], &[]).unwrap();
        let want = f.translated(&[-c]).unwrap();
        let got = apply(&a, QuantizationMatrix::zero(), &f).unwrap();
        assert!(rel(&got, &want) < 1e-10);
    }

    #[test]
    fn weyl_kernel_symmetry() {
        let g = Grid::new(1, 8.0, 64).unwrap();
        let a = PhaseField::from_fn(&g, |x, xi| C64::new((-(x[0] * x[0]) / 2.0 - xi[0] * xi[0] / 4.0).exp(), 0.0));
        let k = kernel(&a, QuantizationMatrix::half()).unwrap();
        for j in 0..64 {
            for m in 0..64 {
                assert!((k.get(j, m) - k.get(m, j)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn rank_one_identity() {
        let g = grid();
        let f1 = make_gaussian(&g, 1.0, &[1.0], &[0.5]).unwrap();
        let f2 = make_gaussian(&g, 2.0, &[-0.5], &[]).unwrap();
        let f = make_random_bandlimited(&g, 4, 2.0);
        for q in [QuantizationMatrix::zero(), QuantizationMatrix::half(), QuantizationMatrix::identity()] {
            let w = wigner(&f1, &f2, q).unwrap();
            let got = apply(&w, q, &f).unwrap();
            let c = f.inner_product(&f2).unwrap() * (2.0 * PI).powf(-0.5);
            let want = f1.scaled(c);
            assert!(rel(&got, &want) < 1e-6, "{q:?}: {}", rel(&got, &want));
        }
    }

    #[test]
    fn calculi_agree() {
        let g = Grid::new(1, 8.0, 64).unwrap();
        let a = random_symbol(&g, 3).unwrap();
        let f = make_gaussian(&g, 1.0, &[], &[]).unwrap();
        let r = calculi_consistency(&a, QuantizationMatrix::zero(), QuantizationMatrix::half(), &f).unwrap();
        assert!(r.max_error < 1e-7, "{r:?}");
        let r = calculi_consistency(&a, QuantizationMatrix::half(), QuantizationMatrix::half(), &f).unwrap();
        assert_eq!(r.max_error, 0.0);
    }

    #[test]
    fn identity_norm() {
        let g = grid();
        let one = PhaseField::from_fn(&g, |_, _| C64::new(1.0, 0.0));
        let k = kernel(&one, QuantizationMatrix::zero()).unwrap();
        let m2 = ModulationSpaceSpec::lebesgue(2.0, 2.0).unwrap();
        let e = estimate_operator_norm(&k, &m2, &m2, None, 4, 1).unwrap();
        assert!((e.lower_bound - 1.0).abs() < 1e-6, "{e:?}");
    }
}
