//! The STFT entropy functional E_φ, the Gaussian λ-family scan, the Lieb-type
//! lower bound and continuity probes on M², M^p and M^Φ.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{make_gaussian, standard_window, Grid, SampledField};
use crate::modspace::{modulation_norm, ModulationSpaceSpec};
use crate::tfa::stft;
use crate::young::YoungFunction;

/// Samples of |V_φf|² below this contribute 0 to −|V|² log |V|².
pub const SQUARE_CUTOFF: f64 = 1e-300;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyResult {
    pub value: f64,
    pub l2_norm_f: f64,
    pub l2_norm_window: f64,
    /// Phase point where −|V_φf|² log |V_φf|² is smallest.
    pub integrand_min_location: Vec<f64>,
}

fn xlogx(s: f64) -> f64 {
    if s < SQUARE_CUTOFF {
        0.0
    } else {
        s * s.ln()
    }
}

/// E_φ(f) = −∬|V_φf|² log|V_φf|² + ‖φ‖²‖f‖² log(‖φ‖²‖f‖²).
pub fn entropy(f: &SampledField, window: &SampledField) -> Result<EntropyResult> {
    let nw = window.l2_norm();
    if nw == 0.0 {
        return Err(Error::ZeroWindow);
    }
    let nf = f.l2_norm();
    let v = stft(f, window)?;
    let cell = v.grid().cell_volume();
    let mut sum = 0.0;
    let (mut min_val, mut min_at) = (f64::INFINITY, 0usize);
    for (i, z) in v.values().iter().enumerate() {
        let term = -xlogx(z.norm_sqr());
        sum += term;
        if term < min_val {
            min_val = term;
            min_at = i;
        }
    }
    let value = sum * cell + xlogx(nw * nw * nf * nf);
    if !value.is_finite() {
        return Err(Error::NonFinite("entropy".into()));
    }
    Ok(EntropyResult {
        value,
        l2_norm_f: nf,
        l2_norm_window: nw,
        integrand_min_location: v.grid().point(min_at),
    })
}

/// d·log(π(λ^{1/2} + λ^{−1/2})): the λ-dependence of E(f_λ).
pub fn family_log_term(lambda: f64, d: usize) -> f64 {
    d as f64 * (PI * (lambda.sqrt() + 1.0 / lambda.sqrt())).ln()
}

/// Grid for f_λ with the Gaussian window: covers |V_φf_λ| to below e^{−36}
/// in both x (width ~ λ^{−1/2}) and ξ (width ~ λ^{1/2}).
pub fn family_grid(lambda: f64, d: usize) -> Result<Grid> {
    let l = 12.0 * lambda.sqrt().recip().max(1.0);
    let lp = 12.0 * lambda.sqrt().max(1.0);
    let n = ((2.0 * l * lp / PI).ceil() as usize).max(256).next_power_of_two();
    Grid::new(d, l, n)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub lambda: f64,
    pub n: usize,
    pub half_extent: f64,
    pub entropy: f64,
    /// E(λ) − d·log(π(λ^{1/2}+λ^{−1/2})).
    pub offset: f64,
    pub m2_norm: f64,
    pub mphi_norm: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanTable {
    pub rows: Vec<ScanRow>,
    /// Mean of the offsets.
    pub constant: f64,
    /// max − min of the offsets.
    pub spread: f64,
}

impl ScanTable {
    pub fn entropy_at(&self, lambda: f64) -> Option<f64> {
        self.rows.iter().find(|r| r.lambda == lambda).map(|r| r.entropy)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("lambda,E,M2_norm,MPhi_norm\n");
        for r in &self.rows {
            let mphi = r.mphi_norm.map(|v| format!("{v:.12e}")).unwrap_or_default();
            s.push_str(&format!("{},{:.12e},{:.12e},{}\n", r.lambda, r.entropy, r.m2_norm, mphi));
        }
        s
    }
}

/// E_φ(f_λ) for normalized Gaussians f_λ(x) ∝ e^{−λ|x|²/2}, φ = f_1, each λ
/// on its own `family_grid`. With `with_mphi` the M^Φ norm (Φ = entropy) of
/// f_λ is computed too.
pub fn gaussian_family_scan(lambdas: &[f64], d: usize, with_mphi: bool) -> Result<ScanTable> {
    let mut rows = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Unsupported(format!("λ must be positive, got {lambda}")));
        }
        let grid = family_grid(lambda, d)?;
        let f = make_gaussian(&grid, lambda, &[], &[])?;
        let phi = standard_window(&grid);
        let e = entropy(&f, &phi)?.value;
        let mphi_norm = if with_mphi {
            Some(modulation_norm(&f, &ModulationSpaceSpec::single(YoungFunction::entropy()))?)
        } else {
            None
        };
        rows.push(ScanRow {
            lambda,
            n: grid.axis(0).n,
            half_extent: grid.axis(0).half_extent,
            entropy: e,
            offset: e - family_log_term(lambda, d),
            m2_norm: f.l2_norm() * phi.l2_norm(),
            mphi_norm,
        });
    }
    let offsets: Vec<f64> = rows.iter().map(|r| r.offset).collect();
    let constant = offsets.iter().sum::<f64>() / offsets.len().max(1) as f64;
    let spread = offsets.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - offsets.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(ScanTable { rows, constant, spread: if offsets.is_empty() { 0.0 } else { spread } })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiebReport {
    pub entropy: f64,
    pub bound: f64,
    pub satisfied: bool,
}

/// d(1 + log(π/2)).
pub fn lieb_bound(d: usize) -> f64 {
    d as f64 * (1.0 + (PI / 2.0).ln())
}

/// Rescales f so that ‖f‖₂‖φ‖₂ = 1 and compares E_φ(f) with the bound.
pub fn lieb_bound_check(f: &SampledField, window: &SampledField) -> Result<LiebReport> {
    let s = f.l2_norm() * window.l2_norm();
    if s == 0.0 {
        return Err(Error::Unsupported("the Lieb bound needs nonzero f and window".into()));
    }
    let e = entropy(&f.scaled(C64::new(1.0 / s, 0.0)), window)?.value;
    let bound = lieb_bound(f.grid().dim());
    Ok(LiebReport { entropy: e, bound, satisfied: e >= bound - 1e-6 })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ProbeSpace {
    M2,
    Mp(f64),
    /// M^Φ with Φ = entropy.
    MPhi,
}

impl ProbeSpace {
    pub fn spec(&self) -> Result<ModulationSpaceSpec> {
        match self {
            ProbeSpace::M2 => ModulationSpaceSpec::lebesgue(2.0, 2.0),
            ProbeSpace::Mp(p) => ModulationSpaceSpec::lebesgue(*p, *p),
            ProbeSpace::MPhi => Ok(ModulationSpaceSpec::single(YoungFunction::entropy())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeRow {
    pub amplitude: f64,
    pub norm: f64,
    pub delta_entropy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeTable {
    pub rows: Vec<ProbeRow>,
    /// |ΔE| is nonincreasing along the (decreasing) amplitudes.
    pub monotone: bool,
    /// Smallest C with |ΔE| ≤ C·n²(1 + |log n|), n = ‖εg‖.
    pub fitted_constant: f64,
}

/// |E_φ(f + εg) − E_φ(f)| against ‖εg‖ in `space` for each ε.
pub fn continuity_probe(
    f: &SampledField,
    direction: &SampledField,
    amplitudes: &[f64],
    space: ProbeSpace,
) -> Result<ProbeTable> {
    let window = standard_window(f.grid());
    let e0 = entropy(f, &window)?.value;
    let spec = space.spec()?;
    let base_norm = modulation_norm(direction, &spec)?;
    let mut rows = Vec::with_capacity(amplitudes.len());
    for &eps in amplitudes {
        let g = f.combine(C64::new(1.0, 0.0), direction, C64::new(eps, 0.0))?;
        let de = (entropy(&g, &window)?.value - e0).abs();
        rows.push(ProbeRow { amplitude: eps, norm: eps.abs() * base_norm, delta_entropy: de });
    }
    let monotone = rows.windows(2).all(|w| w[1].delta_entropy <= w[0].delta_entropy);
    let fitted_constant = rows
        .iter()
        .filter(|r| r.norm > 0.0)
        .map(|r| r.delta_entropy / (r.norm * r.norm * (1.0 + r.norm.ln().abs())))
        .fold(0.0, f64::max);
    Ok(ProbeTable { rows, monotone, fitted_constant })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OmegaDecomposition {
    /// Threshold scale λ_f = 1.01·‖f‖_{M^Φ}.
    pub lambda: f64,
    /// −λ²∬_{Ω_k}(|F|/λ)² log(|F|/λ) for Ω₁ = {|F| ≤ λe^{−2/3}},
    /// Ω₂ = {λe^{−2/3} < |F| ≤ λ}, Ω₃ = {|F| > λ}.
    pub parts: [f64; 3],
    /// −log λ · ∬|F|².
    pub log_term: f64,
    /// −∬|F|² log|F|, computed directly.
    pub total: f64,
}

impl OmegaDecomposition {
    pub fn sum(&self) -> f64 {
        self.parts.iter().sum::<f64>() + self.log_term
    }
}

/// Splits −∬|V_φf|² log|V_φf| over the level sets of |V_φf| relative to λ_f.
pub fn omega_decomposition(f: &SampledField) -> Result<OmegaDecomposition> {
    let window = standard_window(f.grid());
    let norm = modulation_norm(f, &ModulationSpaceSpec::single(YoungFunction::entropy()))?;
    if norm == 0.0 {
        return Ok(OmegaDecomposition { lambda: 0.0, parts: [0.0; 3], log_term: 0.0, total: 0.0 });
    }
    let lambda = 1.01 * norm;
    let lo = lambda * (-2.0f64 / 3.0).exp();
    let v = stft(f, &window)?;
    let cell = v.grid().cell_volume();
    let (mut parts, mut mass, mut total) = ([0.0; 3], 0.0, 0.0);
    for z in v.values() {
        let a = z.norm();
        let s = a * a;
        if s < SQUARE_CUTOFF {
            continue;
        }
        let k = if a <= lo {
            0
        } else if a <= lambda {
            1
        } else {
            2
        };
        let r = a / lambda;
        parts[k] -= lambda * lambda * r * r * r.ln();
        mass += s;
        total -= s * a.ln();
    }
    for p in &mut parts {
        *p *= cell;
    }
    Ok(OmegaDecomposition { lambda, parts, log_term: -lambda.ln() * mass * cell, total: total * cell })
}

/// Smallest C with E_φ(f) ≤ C(E_ψ(f) + ‖f‖²) over the given signals.
pub fn window_comparison_constant(signals: &[SampledField], phi: &SampledField, psi: &SampledField) -> Result<f64> {
    let mut c = 0.0f64;
    for f in signals {
        let a = entropy(f, phi)?.value;
        let b = entropy(f, psi)?.value + f.l2_norm().powi(2);
        if b > 0.0 {
            c = c.max(a / b);
        } else if a > 0.0 {
            return Ok(f64::INFINITY);
        }
    }
    Ok(c)
}
