//! Short-time Fourier transform and its adjoint, the STFT projection, twisted
//! convolution, A-Wigner distributions and the change-of-quantization
//! multiplier. Window translates wrap periodically on the grid.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{transform_axes, Grid, LineShift, LineTransform, PhaseField, SampledField};

/// A = t·I with t ∈ [0,1]; A* = A.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantizationMatrix {
    t: f64,
}

impl QuantizationMatrix {
    pub fn zero() -> Self {
        Self { t: 0.0 }
    }

    pub fn half() -> Self {
        Self { t: 0.5 }
    }

    pub fn identity() -> Self {
        Self { t: 1.0 }
    }

    pub fn t_identity(t: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Unsupported(format!("A = tI needs t in [0,1], got {t}")));
        }
        Ok(Self { t })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn tag(&self) -> &'static str {
        match self.t {
            t if t == 0.0 => "zero",
            t if t == 0.5 => "half_identity",
            t if t == 1.0 => "identity",
            _ => "t_identity",
        }
    }
}

/// Per-axis tables of the periodic index of y_k − x_j, i.e. (k − j + N/2) mod N.
struct ShiftIndex {
    shape: Vec<usize>,
    strides: Vec<usize>,
}

impl ShiftIndex {
    fn new(grid: &Grid) -> Self {
        let shape = grid.shape();
        let mut strides = vec![1; shape.len()];
        for i in (0..shape.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * shape[i + 1];
        }
        Self { shape, strides }
    }

    /// Flat indices of y_k − x_j for all k, with j given as a multi-index.
    fn differences(&self, j: &[usize], out: &mut [usize]) {
        let d = self.shape.len();
        let mut k = vec![0usize; d];
        for o in out.iter_mut() {
            let mut flat = 0;
            for a in 0..d {
                let n = self.shape[a];
                flat += ((k[a] + n + n / 2 - j[a]) % n) * self.strides[a];
            }
            *o = flat;
            for a in (0..d).rev() {
                k[a] += 1;
                if k[a] < self.shape[a] {
                    break;
                }
                k[a] = 0;
            }
        }
    }
}

/// V_φf(x,ξ) = (2π)^{−d/2} ∫ f(y) conj(φ(y−x)) e^{−i⟨y,ξ⟩} dy.
pub fn stft(f: &SampledField, window: &SampledField) -> Result<PhaseField> {
    let grid = f.grid();
    grid.ensure_matches(window.grid())?;
    let m = grid.len();
    let idx = ShiftIndex::new(grid);
    let axes: Vec<usize> = (0..grid.dim()).collect();
    let fv = f.values();
    let wv = window.values();
    let mut out = vec![C64::new(0.0, 0.0); m * m];
    out.par_chunks_mut(m).enumerate().for_each(|(j, row)| {
        let mut jm = vec![0; grid.dim()];
        grid.unravel(j, &mut jm);
        let mut diff = vec![0usize; m];
        idx.differences(&jm, &mut diff);
        for ((r, &fk), &w) in row.iter_mut().zip(fv).zip(&diff) {
            *r = fk * wv[w].conj();
        }
        transform_axes(row, grid, &axes, false);
    });
    Ok(PhaseField::from_parts(grid, out))
}

/// V_φ*F(y) = (2π)^{−d/2} ∬ F(x,ξ) φ(y−x) e^{i⟨y,ξ⟩} dx dξ.
pub fn stft_adjoint(big_f: &PhaseField, window: &SampledField) -> Result<SampledField> {
    let grid = big_f.x_grid();
    grid.ensure_matches(window.grid())?;
    let m = grid.len();
    let idx = ShiftIndex::new(&grid);
    let xi_grid = big_f.xi_grid();
    let axes: Vec<usize> = (0..grid.dim()).collect();
    let wv = window.values();
    let mut acc = vec![C64::new(0.0, 0.0); m];
    let mut row = vec![C64::new(0.0, 0.0); m];
    let mut diff = vec![0usize; m];
    let mut jm = vec![0; grid.dim()];
    for j in 0..m {
        row.copy_from_slice(&big_f.values()[j * m..(j + 1) * m]);
        transform_axes(&mut row, &xi_grid, &axes, true);
        grid.unravel(j, &mut jm);
        idx.differences(&jm, &mut diff);
        for ((a, r), &w) in acc.iter_mut().zip(&row).zip(&diff) {
            *a += wv[w] * r;
        }
    }
    let h = grid.cell_volume();
    for a in acc.iter_mut() {
        *a *= h;
    }
    Ok(SampledField::from_parts(grid, acc))
}

/// P_φF = ‖φ‖₂^{−2} V_φ V_φ* F.
pub fn stft_projection(big_f: &PhaseField, window: &SampledField) -> Result<PhaseField> {
    let n2 = window.l2_norm().powi(2);
    if n2 == 0.0 {
        return Err(Error::ZeroWindow);
    }
    let g = stft_adjoint(big_f, window)?;
    Ok(stft(&g, window)?.scaled(C64::new(1.0 / n2, 0.0)))
}

/// (F ∗_V G)(x,ξ) = (2π)^{−d/2} ∬ F(x−y, ξ−η) G(y,η) e^{−i⟨y,ξ−η⟩} dy dη,
/// by direct quadrature (d = 1).
pub fn twisted_convolution(f: &PhaseField, g: &PhaseField) -> Result<PhaseField> {
    f.grid().ensure_matches(g.grid())?;
    if f.d() != 1 {
        return Err(Error::Unsupported("twisted convolution is implemented for d = 1".into()));
    }
    let xg = f.x_grid();
    let ax = *xg.axis(0);
    let dual = ax.dual();
    let n = ax.n;
    let h = n / 2;
    // phase[l][r] = e^{−i y_l w_r} with w_r the wrapped frequency difference
    let phase: Vec<C64> = (0..n)
        .flat_map(|l| {
            let y = ax.point(l);
            (0..n).map(move |r| C64::from_polar(1.0, -y * dual.point(r)))
        })
        .collect();
    let fv = f.values();
    let gv = g.values();
    let scale = ax.spacing() * dual.spacing() / (2.0 * PI).sqrt();
    let mut out = vec![C64::new(0.0, 0.0); n * n];
    out.par_chunks_mut(n).enumerate().for_each(|(j, row)| {
        for l in 0..n {
            let fj = (j + n + h - l) % n;
            let frow = &fv[fj * n..(fj + 1) * n];
            let grow = &gv[l * n..(l + 1) * n];
            let prow = &phase[l * n..(l + 1) * n];
            for (m, o) in row.iter_mut().enumerate() {
                let mut s = C64::new(0.0, 0.0);
                for (nn, &gval) in grow.iter().enumerate() {
                    if gval.re == 0.0 && gval.im == 0.0 {
                        continue;
                    }
                    let r = (m + n + h - nn) % n;
                    s += frow[r] * gval * prow[r];
                }
                *o += s;
            }
        }
        for o in row.iter_mut() {
            *o *= scale;
        }
    });
    Ok(PhaseField::from_parts(&xg, out))
}

/// W^A_{f₁,f₂}(x,ξ) = ℱ_y[f₁(x+Ay) conj(f₂(x+(A−I)y))](ξ), with non-grid
/// arguments evaluated by trigonometric interpolation (d = 1).
pub fn wigner(f1: &SampledField, f2: &SampledField, a: QuantizationMatrix) -> Result<PhaseField> {
    let grid = f1.grid();
    grid.ensure_matches(f2.grid())?;
    if grid.dim() != 1 {
        return Err(Error::Unsupported("Wigner distributions are implemented for d = 1".into()));
    }
    let ax = *grid.axis(0);
    let n = ax.n;
    let t = a.t();
    // columns[l][j] = f₁(x_j + t y_l) conj(f₂(x_j + (t−1) y_l))
    let columns: Vec<Vec<C64>> = (0..n)
        .into_par_iter()
        .map(|l| {
            let y = ax.point(l);
            let mut a1 = f1.values().to_vec();
            LineShift::new(&ax, -t * y).apply(&mut a1);
            let mut a2 = f2.values().to_vec();
            LineShift::new(&ax, -(t - 1.0) * y).apply(&mut a2);
            a1.iter().zip(&a2).map(|(u, v)| u * v.conj()).collect()
        })
        .collect();
    let mut out = vec![C64::new(0.0, 0.0); n * n];
    out.par_chunks_mut(n).enumerate().for_each(|(j, row)| {
        for (l, r) in row.iter_mut().enumerate() {
            *r = columns[l][j];
        }
        LineTransform::new(&ax, false).apply(row);
    });
    Ok(PhaseField::from_parts(grid, out))
}

/// Symbol a₂ with Op_{A₂}(a₂) = Op_{A₁}(a₁): â₂(ζ,y) = e^{i(t₁−t₂)⟨y,ζ⟩} â₁(ζ,y).
pub fn quantization_change(a: &PhaseField, a1: QuantizationMatrix, a2: QuantizationMatrix) -> Result<PhaseField> {
    if a.d() != 1 {
        return Err(Error::Unsupported("quantization change is implemented for d = 1".into()));
    }
    let dt = a1.t() - a2.t();
    if dt == 0.0 {
        return Ok(a.clone());
    }
    let grid = a.grid().clone();
    let mut v = a.values().to_vec();
    let spec = transform_axes(&mut v, &grid, &[0, 1], false);
    let (zeta, y) = (*spec.axis(0), *spec.axis(1));
    let n = y.n;
    for (p, row) in v.chunks_exact_mut(n).enumerate() {
        let z = zeta.point(p);
        for (q, val) in row.iter_mut().enumerate() {
            *val *= C64::from_polar(1.0, dt * y.point(q) * z);
        }
    }
    let back = transform_axes(&mut v, &spec, &[0, 1], true);
    debug_assert!(back.matches(&grid));
    Ok(PhaseField::from_parts(&a.x_grid(), v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_gaussian, make_random_atoms, make_random_bandlimited, standard_window, AtomParams};

    fn max_err(a: &PhaseField, b: &PhaseField) -> f64 {
        a.values().iter().zip(b.values()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn stft_of_gaussian_closed_form() {
        let g = Grid::new(1, 12.0, 256).unwrap();
        let phi = standard_window(&g);
        let v = stft(&phi, &phi).unwrap();
        let expect = PhaseField::from_fn(&g, |x, xi| {
            let (x, xi) = (x[0], xi[0]);
            C64::from_polar((2.0 * PI).powf(-0.5) * (-(x * x + xi * xi) / 4.0).exp(), -x * xi / 2.0)
        });
        assert!(max_err(&v, &expect) < 1e-8);
    }

    #[test]
    fn moyal_inversion_and_adjoint() {
        let g = Grid::new(1, 12.0, 128).unwrap();
        let phi = standard_window(&g);
        let f = make_random_bandlimited(&g, 11, 3.0);
        let v = stft(&f, &phi).unwrap();
        assert!((v.l2_norm() - f.l2_norm()).abs() < 1e-10 * f.l2_norm());
        let back = stft_adjoint(&v, &phi).unwrap();
        let err = back.combine(C64::new(1.0, 0.0), &f, C64::new(-1.0, 0.0)).unwrap().l2_norm();
        assert!(err < 1e-10 * f.l2_norm());
        let big = stft(&make_random_bandlimited(&g, 12, 2.0), &make_gaussian(&g, 2.0, &[0.5], &[]).unwrap()).unwrap();
        let lhs = v.inner_product(&big).unwrap();
        let rhs = f.inner_product(&stft_adjoint(&big, &phi).unwrap()).unwrap();
        assert!((lhs - rhs).norm() < 1e-10 * lhs.norm());
        assert_eq!(stft(&SampledField::zeros(&g), &phi).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn projection_is_idempotent() {
        let g = Grid::new(1, 8.0, 64).unwrap();
        let phi = standard_window(&g);
        let big = PhaseField::from_fn(&g, |x, xi| C64::new((-(x[0] * x[0]) - xi[0] * xi[0] / 3.0).exp(), x[0]));
        let p = stft_projection(&big, &phi).unwrap();
        let pp = stft_projection(&p, &phi).unwrap();
        assert!(max_err(&p, &pp) < 1e-10 * p.max_abs());
        assert!(stft_projection(&big, &SampledField::zeros(&g)).is_err());
    }

    #[test]
    fn reproducing_identity() {
        let g = Grid::new(1, 8.0, 64).unwrap();
        let phi = standard_window(&g);
        let f = make_random_atoms(&g, 5, &AtomParams::default());
        let vf = stft(&f, &phi).unwrap();
        let vp = stft(&phi, &phi).unwrap();
        let lhs = twisted_convolution(&vp, &vf).unwrap();
        let rhs = vf.scaled(C64::new(phi.l2_norm().powi(2), 0.0));
        assert!(max_err(&lhs, &rhs) < 1e-6 * rhs.max_abs(), "{}", max_err(&lhs, &rhs));
    }

    #[test]
    fn weyl_wigner_of_gaussian() {
        let g = Grid::new(1, 12.0, 256).unwrap();
        let phi = standard_window(&g);
        let w = wigner(&phi, &phi, QuantizationMatrix::half()).unwrap();
        let expect = PhaseField::from_fn(&g, |x, xi| {
            C64::new((2.0 / PI).sqrt() * (-(x[0] * x[0] + xi[0] * xi[0])).exp(), 0.0)
        });
        assert!(max_err(&w, &expect) < 1e-7, "{}", max_err(&w, &expect));
    }

    #[test]
    fn rihaczek_form() {
        let g = Grid::new(1, 12.0, 256).unwrap();
        let f1 = make_gaussian(&g, 1.3, &[0.5], &[1.0]).unwrap();
        let f2 = make_gaussian(&g, 0.8, &[-0.3], &[0.2]).unwrap();
        let w = wigner(&f1, &f2, QuantizationMatrix::zero()).unwrap();
        let ff2 = f2.fourier_transform();
        let n = g.axis(0).n;
        let expect = PhaseField::from_fn(&g, |_, _| C64::new(0.0, 0.0));
        let mut expect = expect;
        for j in 0..n {
            let x = g.axis(0).point(j);
            for m in 0..n {
                let xi = ff2.grid().axis(0).point(m);
                expect.values_mut()[j * n + m] = f1.values()[j] * ff2.values()[m].conj() * C64::from_polar(1.0, -x * xi);
            }
        }
        assert!(max_err(&w, &expect) < 1e-8);
    }

    #[test]
    fn wigner_transfer_between_quantizations() {
        let g = Grid::new(1, 12.0, 128).unwrap();
        let f1 = make_gaussian(&g, 1.3, &[0.5], &[1.0]).unwrap();
        let f2 = make_gaussian(&g, 0.8, &[-0.3], &[0.2]).unwrap();
        let w0 = wigner(&f1, &f2, QuantizationMatrix::zero()).unwrap();
        let w1 = wigner(&f1, &f2, QuantizationMatrix::half()).unwrap();
        let moved = quantization_change(&w0, QuantizationMatrix::zero(), QuantizationMatrix::half()).unwrap();
        assert!(max_err(&moved, &w1) < 1e-7, "{}", max_err(&moved, &w1));
        let back = quantization_change(&moved, QuantizationMatrix::half(), QuantizationMatrix::zero()).unwrap();
        assert!(max_err(&back, &w0) < 1e-10);
    }
}
