//! Centered uniform grids, sampled complex fields and the unitary Fourier
//! transform ℱf(ξ) = (2π)^{−d/2} ∫ f(x) e^{−i⟨x,ξ⟩} dx on them.
//!
//! An axis with half-extent L and N points has samples x_k = −L + kΔ,
//! Δ = 2L/N, and its dual axis has samples ξ_m = (π/L)(m − N/2). The dual of
//! the dual is the original axis, and the discrete transform is exactly
//! unitary for the Riemann-sum inner product.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub half_extent: f64,
    pub n: usize,
}

impl Axis {
    pub fn new(half_extent: f64, n: usize) -> Result<Self> {
        if !(half_extent > 0.0 && half_extent.is_finite()) {
            return Err(Error::GridMismatch(format!("half extent must be positive, got {half_extent}")));
        }
        if n < 2 || n % 2 != 0 {
            return Err(Error::GridMismatch(format!("point count must be even and at least 2, got {n}")));
        }
        Ok(Self { half_extent, n })
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_extent / self.n as f64
    }

    pub fn point(&self, k: usize) -> f64 {
        -self.half_extent + k as f64 * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.point(k)).collect()
    }

    pub fn dual(&self) -> Axis {
        Axis { half_extent: PI * self.n as f64 / (2.0 * self.half_extent), n: self.n }
    }

    fn matches(&self, other: &Axis) -> bool {
        self.n == other.n && (self.half_extent - other.half_extent).abs() <= 1e-12 * self.half_extent
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    axes: Vec<Axis>,
}

impl Grid {
    /// Isotropic grid [−L, L)^d with N points per axis.
    pub fn new(d: usize, half_extent: f64, n: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::GridMismatch("dimension must be positive".into()));
        }
        let axis = Axis::new(half_extent, n)?;
        Ok(Self { axes: vec![axis; d] })
    }

    pub fn from_axes(axes: Vec<Axis>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::GridMismatch("grid needs at least one axis".into()));
        }
        for a in &axes {
            Axis::new(a.half_extent, a.n)?;
        }
        Ok(Self { axes })
    }

    /// Grid whose dual has the same half-extent, L = √(πN/2).
    pub fn balanced(d: usize, n: usize) -> Result<Self> {
        Self::new(d, (PI * n as f64 / 2.0).sqrt(), n)
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn axis(&self, i: usize) -> &Axis {
        &self.axes[i]
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.n).collect()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.n).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Quadrature weight of one sample.
    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(Axis::spacing).product()
    }

    pub fn dual(&self) -> Grid {
        Grid { axes: self.axes.iter().map(Axis::dual).collect() }
    }

    /// Concatenation of axes, e.g. the phase-space grid `x ⊕ dual(x)`.
    pub fn product(&self, other: &Grid) -> Grid {
        Grid { axes: self.axes.iter().chain(&other.axes).copied().collect() }
    }

    pub fn phase_grid(&self) -> Grid {
        self.product(&self.dual())
    }

    pub fn matches(&self, other: &Grid) -> bool {
        self.axes.len() == other.axes.len() && self.axes.iter().zip(&other.axes).all(|(a, b)| a.matches(b))
    }

    pub fn ensure_matches(&self, other: &Grid) -> Result<()> {
        if self.matches(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{} vs {}", self.describe(), other.describe())))
        }
    }

    /// Multi-index of a flat index; axis 0 varies slowest.
    pub fn unravel(&self, mut flat: usize, out: &mut [usize]) {
        for (i, a) in self.axes.iter().enumerate().rev() {
            out[i] = flat % a.n;
            flat /= a.n;
        }
    }

    pub fn point(&self, flat: usize) -> Vec<f64> {
        let mut idx = vec![0; self.dim()];
        self.unravel(flat, &mut idx);
        idx.iter().zip(&self.axes).map(|(&k, a)| a.point(k)).collect()
    }

    /// `d=1 L=12 N=256`, with comma lists for anisotropic grids.
    pub fn describe(&self) -> String {
        let ls: Vec<String> = self.axes.iter().map(|a| format!("{}", a.half_extent)).collect();
        let ns: Vec<String> = self.axes.iter().map(|a| a.n.to_string()).collect();
        let iso = self.axes.iter().all(|a| *a == self.axes[0]);
        if iso {
            format!("d={} L={} N={}", self.dim(), ls[0], ns[0])
        } else {
            format!("d={} L={} N={}", self.dim(), ls.join(","), ns.join(","))
        }
    }

    fn parse_description(s: &str) -> Result<Grid> {
        let mut d = None;
        let mut ls = None;
        let mut ns = None;
        for tok in s.split_whitespace() {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad grid token \"{tok}\"")))?;
            match k {
                "d" => d = Some(v.parse::<usize>().map_err(|e| Error::Parse(e.to_string()))?),
                "L" => {
                    ls = Some(
                        v.split(',')
                            .map(|x| x.parse::<f64>().map_err(|e| Error::Parse(e.to_string())))
                            .collect::<Result<Vec<_>>>()?,
                    )
                }
                "N" => {
                    ns = Some(
                        v.split(',')
                            .map(|x| x.parse::<usize>().map_err(|e| Error::Parse(e.to_string())))
                            .collect::<Result<Vec<_>>>()?,
                    )
                }
                _ => return Err(Error::Parse(format!("unknown grid key \"{k}\""))),
            }
        }
        let d = d.ok_or_else(|| Error::Parse("grid header missing d".into()))?;
        let ls = ls.ok_or_else(|| Error::Parse("grid header missing L".into()))?;
        let ns = ns.ok_or_else(|| Error::Parse("grid header missing N".into()))?;
        let pick = |v: &Vec<f64>, i: usize| if v.len() == 1 { v[0] } else { v[i] };
        if (ls.len() != 1 && ls.len() != d) || (ns.len() != 1 && ns.len() != d) {
            return Err(Error::Parse("grid header L/N lists do not match d".into()));
        }
        let axes = (0..d)
            .map(|i| Axis::new(pick(&ls, i), if ns.len() == 1 { ns[0] } else { ns[i] }))
            .collect::<Result<Vec<_>>>()?;
        Grid::from_axes(axes)
    }
}

fn planner() -> &'static Mutex<FftPlanner<f64>> {
    static P: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    P.get_or_init(|| Mutex::new(FftPlanner::new()))
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let mut p = planner().lock().expect("fft planner poisoned");
    if inverse {
        p.plan_fft_inverse(n)
    } else {
        p.plan_fft_forward(n)
    }
}

/// Centered transform of one axis, applied to strided lines in place.
struct AxisTransform {
    fft: Arc<dyn Fft<f64>>,
    pre: Vec<f64>,
    post: Vec<C64>,
}

impl AxisTransform {
    fn new(axis: &Axis, inverse: bool) -> Self {
        let n = axis.n;
        let h = n / 2;
        let sign = |k: usize| if k % 2 == 0 { 1.0 } else { -1.0 };
        let c = axis.spacing() / (2.0 * PI).sqrt();
        // forward: F_m = cΔ(−1)^{m−N/2} DFT[(−1)^k f_k]_m
        // inverse: f_k = cΔξ(−1)^k IDFT[(−1)^{m−N/2} F_m]_k
        let (pre, post): (Vec<f64>, Vec<C64>) = if inverse {
            (
                (0..n).map(|m| sign(m + h)).collect(),
                (0..n).map(|k| C64::new(c * sign(k), 0.0)).collect(),
            )
        } else {
            (
                (0..n).map(sign).collect(),
                (0..n).map(|m| C64::new(c * sign(m + h), 0.0)).collect(),
            )
        };
        Self { fft: plan(n, inverse), pre, post }
    }

    fn apply_line(&self, line: &mut [C64], scratch: &mut [C64]) {
        for (v, p) in line.iter_mut().zip(&self.pre) {
            *v *= *p;
        }
        self.fft.process_with_scratch(line, scratch);
        for (v, p) in line.iter_mut().zip(&self.post) {
            *v *= *p;
        }
    }
}

/// Centered Fourier transform of `values` (shape `grid`) along `axes`.
/// Returns the grid with those axes replaced by their duals.
pub(crate) fn transform_axes(values: &mut [C64], grid: &Grid, axes: &[usize], inverse: bool) -> Grid {
    let shape = grid.shape();
    let mut out_axes = grid.axes.clone();
    for &ax in axes {
        let n = shape[ax];
        let stride: usize = shape[ax + 1..].iter().product();
        let outer: usize = shape[..ax].iter().product();
        let t = AxisTransform::new(&grid.axes[ax], inverse);
        let mut scratch = vec![C64::new(0.0, 0.0); t.fft.get_inplace_scratch_len()];
        if stride == 1 {
            for line in values.chunks_exact_mut(n) {
                t.apply_line(line, &mut scratch);
            }
        } else {
            let mut line = vec![C64::new(0.0, 0.0); n];
            for o in 0..outer {
                let base = o * n * stride;
                for i in 0..stride {
                    for (k, v) in line.iter_mut().enumerate() {
                        *v = values[base + k * stride + i];
                    }
                    t.apply_line(&mut line, &mut scratch);
                    for (k, v) in line.iter().enumerate() {
                        values[base + k * stride + i] = *v;
                    }
                }
            }
        }
        out_axes[ax] = grid.axes[ax].dual();
    }
    Grid { axes: out_axes }
}

/// One-dimensional centered transform on a line of samples from `axis`.
pub(crate) struct LineTransform(AxisTransform, Vec<C64>);

impl LineTransform {
    pub(crate) fn new(axis: &Axis, inverse: bool) -> Self {
        let t = AxisTransform::new(axis, inverse);
        let scratch = vec![C64::new(0.0, 0.0); t.fft.get_inplace_scratch_len()];
        Self(t, scratch)
    }

    pub(crate) fn apply(&mut self, line: &mut [C64]) {
        self.0.apply_line(line, &mut self.1);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampledField {
    grid: Grid,
    values: Vec<C64>,
}

impl SampledField {
    pub fn new(grid: Grid, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite("field samples must be finite".into()));
        }
        Ok(Self { grid, values })
    }

    pub(crate) fn from_parts(grid: Grid, values: Vec<C64>) -> Self {
        debug_assert_eq!(grid.len(), values.len());
        Self { grid, values }
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self { grid: grid.clone(), values: vec![C64::new(0.0, 0.0); grid.len()] }
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(&[f64]) -> C64) -> Self {
        let mut idx = vec![0; grid.dim()];
        let mut x = vec![0.0; grid.dim()];
        let values = (0..grid.len())
            .map(|flat| {
                grid.unravel(flat, &mut idx);
                for ((xi, &k), a) in x.iter_mut().zip(&idx).zip(&grid.axes) {
                    *xi = a.point(k);
                }
                f(&x)
            })
            .collect();
        Self { grid: grid.clone(), values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [C64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    /// ⟨f,g⟩ = Σ f_k conj(g_k) Δ^d.
    pub fn inner_product(&self, other: &SampledField) -> Result<C64> {
        self.grid.ensure_matches(&other.grid)?;
        let s: C64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b.conj()).sum();
        Ok(s * self.grid.cell_volume())
    }

    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.cell_volume()).sqrt()
    }

    /// (Σ|f_k|^p Δ^d)^{1/p}; p = ∞ gives max|f_k|.
    pub fn lp_norm(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.max_abs();
        }
        let s: f64 = self.values.iter().map(|v| v.norm().powf(p)).sum();
        (s * self.grid.cell_volume()).powf(1.0 / p)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn scaled(&self, c: C64) -> SampledField {
        Self { grid: self.grid.clone(), values: self.values.iter().map(|v| v * c).collect() }
    }

    /// a·self + b·other.
    pub fn combine(&self, a: C64, other: &SampledField, b: C64) -> Result<SampledField> {
        self.grid.ensure_matches(&other.grid)?;
        let values = self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect();
        Ok(Self { grid: self.grid.clone(), values })
    }

    /// Pointwise product.
    pub fn multiply(&self, other: &SampledField) -> Result<SampledField> {
        self.grid.ensure_matches(&other.grid)?;
        let values = self.values.iter().zip(&other.values).map(|(x, y)| x * y).collect();
        Ok(Self { grid: self.grid.clone(), values })
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> SampledField {
        Self { grid: self.grid.clone(), values: self.values.iter().map(|&v| f(v)).collect() }
    }

    /// Unit L² normalization; errors on the zero field.
    pub fn normalized(&self) -> Result<SampledField> {
        let n = self.l2_norm();
        if n == 0.0 {
            return Err(Error::ZeroWindow);
        }
        Ok(self.scaled(C64::new(1.0 / n, 0.0)))
    }

    /// ℱf on the dual grid.
    pub fn fourier_transform(&self) -> SampledField {
        let axes: Vec<usize> = (0..self.grid.dim()).collect();
        self.fourier_axes(&axes, false)
    }

    /// ℱ^{−1}F on the dual grid.
    pub fn inverse_fourier_transform(&self) -> SampledField {
        let axes: Vec<usize> = (0..self.grid.dim()).collect();
        self.fourier_axes(&axes, true)
    }

    /// Partial (inverse) transform along the listed axes.
    pub fn fourier_axes(&self, axes: &[usize], inverse: bool) -> SampledField {
        let mut values = self.values.clone();
        let grid = transform_axes(&mut values, &self.grid, axes, inverse);
        Self { grid, values }
    }

    /// Periodic translate f(· − c), exact for grid multiples and by
    /// trigonometric interpolation otherwise.
    pub fn translated(&self, c: &[f64]) -> Result<SampledField> {
        if c.len() != self.grid.dim() {
            return Err(Error::AxisMismatch(format!("shift of dimension {} on a {}-d grid", c.len(), self.grid.dim())));
        }
        let mut values = self.values.clone();
        let shape = self.grid.shape();
        for (ax, &ci) in c.iter().enumerate() {
            if ci == 0.0 {
                continue;
            }
            let axis = self.grid.axes[ax];
            let n = shape[ax];
            let stride: usize = shape[ax + 1..].iter().product();
            let outer: usize = shape[..ax].iter().product();
            let mut shifter = LineShift::new(&axis, ci);
            let mut line = vec![C64::new(0.0, 0.0); n];
            for o in 0..outer {
                let base = o * n * stride;
                for i in 0..stride {
                    for (k, v) in line.iter_mut().enumerate() {
                        *v = values[base + k * stride + i];
                    }
                    shifter.apply(&mut line);
                    for (k, v) in line.iter().enumerate() {
                        values[base + k * stride + i] = *v;
                    }
                }
            }
        }
        Ok(Self { grid: self.grid.clone(), values })
    }

    /// Modulation e^{i⟨x,ξ0⟩} f(x).
    pub fn modulated(&self, xi0: &[f64]) -> SampledField {
        let phase = SampledField::from_fn(&self.grid, |x| {
            let s: f64 = x.iter().zip(xi0).map(|(a, b)| a * b).sum();
            C64::from_polar(1.0, s)
        });
        self.multiply(&phase).expect("same grid")
    }

    pub fn to_csv(&self) -> String {
        let mut s = format!("# grid {}\n", self.grid.describe());
        write_rows(&mut s, &self.grid, &self.values);
        s
    }

    pub fn from_csv(text: &str) -> Result<SampledField> {
        let (kind, grid, values) = parse_csv(text)?;
        if kind != "grid" {
            return Err(Error::Parse("expected a `# grid` header".into()));
        }
        SampledField::new(grid, values)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&FieldJson::from_field(self, None)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<SampledField> {
        let j: FieldJson = serde_json::from_str(text)?;
        j.into_field()
    }
}

/// Periodic translation of single lines by a fixed amount.
pub(crate) struct LineShift {
    roll: Option<isize>,
    fwd: LineTransform,
    inv: LineTransform,
    mult: Vec<C64>,
    tmp: Vec<C64>,
}

impl LineShift {
    pub(crate) fn new(axis: &Axis, c: f64) -> Self {
        let h = axis.spacing();
        let steps = c / h;
        let roll = if (steps - steps.round()).abs() < 1e-12 { Some(steps.round() as isize) } else { None };
        let dual = axis.dual();
        let mult = (0..axis.n)
            .map(|m| {
                let xi = dual.point(m);
                if m == 0 {
                    C64::new((xi * c).cos(), 0.0)
                } else {
                    C64::from_polar(1.0, -xi * c)
                }
            })
            .collect();
        Self {
            roll,
            fwd: LineTransform::new(axis, false),
            inv: LineTransform::new(&dual, true),
            mult,
            tmp: vec![C64::new(0.0, 0.0); axis.n],
        }
    }

    pub(crate) fn apply(&mut self, line: &mut [C64]) {
        let n = line.len();
        if let Some(r) = self.roll {
            let r = r.rem_euclid(n as isize) as usize;
            self.tmp.copy_from_slice(line);
            for k in 0..n {
                line[(k + r) % n] = self.tmp[k];
            }
            return;
        }
        self.fwd.apply(line);
        for (v, m) in line.iter_mut().zip(&self.mult) {
            *v *= *m;
        }
        self.inv.apply(line);
    }
}

fn write_rows(s: &mut String, grid: &Grid, values: &[C64]) {
    let mut idx = vec![0; grid.dim()];
    for (flat, v) in values.iter().enumerate() {
        grid.unravel(flat, &mut idx);
        for (&k, a) in idx.iter().zip(grid.axes()) {
            let _ = write!(s, "{:.16e}, ", a.point(k));
        }
        let _ = writeln!(s, "{:.16e}, {:.16e}", v.re, v.im);
    }
}

fn parse_csv(text: &str) -> Result<(String, Grid, Vec<C64>)> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty CSV".into()))?;
    let rest = header
        .strip_prefix('#')
        .ok_or_else(|| Error::Parse("CSV must start with a `#` header".into()))?
        .trim();
    let (kind, desc) = rest.split_once(' ').ok_or_else(|| Error::Parse("malformed CSV header".into()))?;
    let base = Grid::parse_description(desc)?;
    let grid = if kind == "phase" { base.phase_grid() } else { base };
    let mut values = Vec::with_capacity(grid.len());
    for line in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if cols.len() != grid.dim() + 2 {
            return Err(Error::Parse(format!("expected {} columns, got {}", grid.dim() + 2, cols.len())));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse(format!("\"{s}\": {e}")));
        values.push(C64::new(num(cols[grid.dim()])?, num(cols[grid.dim() + 1])?));
    }
    if values.len() != grid.len() {
        return Err(Error::Parse(format!("{} rows for a grid of {} points", values.len(), grid.len())));
    }
    Ok((kind.to_string(), grid, values))
}

#[derive(Serialize, Deserialize)]
struct FieldJson {
    grid: Grid,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    phase_dim: Option<usize>,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl FieldJson {
    fn from_field(f: &SampledField, phase_dim: Option<usize>) -> Self {
        Self {
            grid: f.grid.clone(),
            phase_dim,
            re: f.values.iter().map(|v| v.re).collect(),
            im: f.values.iter().map(|v| v.im).collect(),
        }
    }

    fn into_field(self) -> Result<SampledField> {
        if self.re.len() != self.im.len() {
            return Err(Error::Parse("re and im arrays differ in length".into()));
        }
        let values = self.re.iter().zip(&self.im).map(|(&a, &b)| C64::new(a, b)).collect();
        SampledField::new(Grid::from_axes(self.grid.axes)?, values)
    }
}

/// Samples on a phase-space grid x ⊕ ξ whose last d axes are the duals of the
/// first d. Quadrature weight per sample is Δ^d(2π/(NΔ))^d.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseField {
    field: SampledField,
    d: usize,
}

impl PhaseField {
    pub fn new(field: SampledField) -> Result<Self> {
        let n = field.grid.dim();
        if n % 2 != 0 {
            return Err(Error::AxisMismatch(format!("phase grid needs an even number of axes, got {n}")));
        }
        let d = n / 2;
        for i in 0..d {
            if !field.grid.axes[d + i].matches(&field.grid.axes[i].dual()) {
                return Err(Error::AxisMismatch(format!("axis {} is not the dual of axis {i}", d + i)));
            }
        }
        Ok(Self { field, d })
    }

    pub(crate) fn from_parts(x_grid: &Grid, values: Vec<C64>) -> Self {
        Self { field: SampledField::from_parts(x_grid.phase_grid(), values), d: x_grid.dim() }
    }

    pub fn zeros(x_grid: &Grid) -> Self {
        Self { field: SampledField::zeros(&x_grid.phase_grid()), d: x_grid.dim() }
    }

    /// Samples of a(x, ξ).
    pub fn from_fn(x_grid: &Grid, f: impl Fn(&[f64], &[f64]) -> C64) -> Self {
        let d = x_grid.dim();
        let field = SampledField::from_fn(&x_grid.phase_grid(), |z| f(&z[..d], &z[d..]));
        Self { field, d }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn x_grid(&self) -> Grid {
        Grid { axes: self.field.grid.axes[..self.d].to_vec() }
    }

    pub fn xi_grid(&self) -> Grid {
        Grid { axes: self.field.grid.axes[self.d..].to_vec() }
    }

    pub fn grid(&self) -> &Grid {
        &self.field.grid
    }

    pub fn field(&self) -> &SampledField {
        &self.field
    }

    pub fn into_field(self) -> SampledField {
        self.field
    }

    pub fn values(&self) -> &[C64] {
        &self.field.values
    }

    pub fn values_mut(&mut self) -> &mut [C64] {
        &mut self.field.values
    }

    pub fn inner_product(&self, other: &PhaseField) -> Result<C64> {
        self.field.inner_product(&other.field)
    }

    pub fn l2_norm(&self) -> f64 {
        self.field.l2_norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.field.max_abs()
    }

    pub fn scaled(&self, c: C64) -> PhaseField {
        Self { field: self.field.scaled(c), d: self.d }
    }

    pub fn combine(&self, a: C64, other: &PhaseField, b: C64) -> Result<PhaseField> {
        Ok(Self { field: self.field.combine(a, &other.field, b)?, d: self.d })
    }

    pub fn to_csv(&self) -> String {
        let mut s = format!("# phase {}\n", self.x_grid().describe());
        write_rows(&mut s, &self.field.grid, &self.field.values);
        s
    }

    pub fn from_csv(text: &str) -> Result<PhaseField> {
        let (kind, grid, values) = parse_csv(text)?;
        if kind != "phase" {
            return Err(Error::Parse("expected a `# phase` header".into()));
        }
        PhaseField::new(SampledField::new(grid, values)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&FieldJson::from_field(&self.field, Some(self.d))).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<PhaseField> {
        let j: FieldJson = serde_json::from_str(text)?;
        PhaseField::new(j.into_field()?)
    }
}

/// π^{−d/4}λ^{d/4} e^{−λ|x−x0|²/2} e^{i⟨x,ξ0⟩}.
pub fn make_gaussian(grid: &Grid, lambda: f64, x0: &[f64], xi0: &[f64]) -> Result<SampledField> {
    let d = grid.dim();
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidYoung(format!("Gaussian parameter must be positive, got {lambda}")));
    }
    let x0 = if x0.is_empty() { vec![0.0; d] } else { x0.to_vec() };
    let xi0 = if xi0.is_empty() { vec![0.0; d] } else { xi0.to_vec() };
    if x0.len() != d || xi0.len() != d {
        return Err(Error::AxisMismatch(format!("Gaussian center/frequency must have dimension {d}")));
    }
    for (a, c) in grid.axes().iter().zip(&x0) {
        let gap = a.half_extent - c.abs();
        let tail = (-lambda * gap * gap / 2.0).exp();
        if tail > 1e-12 {
            // Suites build many windows on the same coarse grid; say it once.
            static WARNED: std::sync::Once = std::sync::Once::new();
            WARNED.call_once(|| log::warn!("Gaussian tail {tail:.3e} at the grid boundary exceeds 1e-12; enlarge L"));
        }
    }
    let amp = PI.powf(-(d as f64) / 4.0) * lambda.powf(d as f64 / 4.0);
    Ok(SampledField::from_fn(grid, |x| {
        let r2: f64 = x.iter().zip(&x0).map(|(a, b)| (a - b) * (a - b)).sum();
        let ph: f64 = x.iter().zip(&xi0).map(|(a, b)| a * b).sum();
        C64::from_polar(amp * (-lambda * r2 / 2.0).exp(), ph)
    }))
}

/// The L²-normalized Gaussian window φ(x) = π^{−d/4} e^{−|x|²/2}.
pub fn standard_window(grid: &Grid) -> SampledField {
    make_gaussian(grid, 1.0, &[], &[]).expect("valid parameters")
}

/// Values h_0..h_n of the Hermite functions at x.
pub fn hermite_values(n: usize, x: f64) -> Vec<f64> {
    let mut h = Vec::with_capacity(n + 1);
    h.push(PI.powf(-0.25) * (-x * x / 2.0).exp());
    if n >= 1 {
        h.push(2f64.sqrt() * x * h[0]);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * h[k] - (kf / (kf + 1.0)).sqrt() * h[k - 1];
        h.push(next);
    }
    h
}

/// Hermite function h_n along axis 0, times h_0 along the remaining axes.
pub fn make_hermite(grid: &Grid, n: usize) -> SampledField {
    SampledField::from_fn(grid, |x| {
        let mut v = hermite_values(n, x[0])[n];
        for &xi in &x[1..] {
            v *= hermite_values(0, xi)[0];
        }
        C64::new(v, 0.0)
    })
}

/// Random smooth field: a random spectrum supported on |ξ| ≤ band, tapered
/// by the spatial envelope e^{−|x|²/(2(L/8)²)} so that it decays below 1e−13
/// at the boundary. For fixed L and seed the underlying continuous function
/// does not depend on N.
pub fn make_random_bandlimited(grid: &Grid, seed: u64, band: f64) -> SampledField {
    let d = grid.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ms: Vec<i64> = grid
        .axes()
        .iter()
        .map(|a| ((band * a.half_extent / PI).floor() as i64).min(a.n as i64 / 2 - 1))
        .collect();
    let mut modes: Vec<(Vec<f64>, C64)> = Vec::new();
    let mut off = vec![0i64; d];
    for (o, m) in off.iter_mut().zip(&ms) {
        *o = -m;
    }
    'outer: loop {
        let xi: Vec<f64> = off.iter().zip(grid.axes()).map(|(&o, a)| PI / a.half_extent * o as f64).collect();
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        if xi.iter().map(|v| v * v).sum::<f64>() <= band * band {
            modes.push((xi, C64::new(re, im)));
        }
        for i in (0..d).rev() {
            off[i] += 1;
            if off[i] <= ms[i] {
                continue 'outer;
            }
            off[i] = -ms[i];
        }
        break;
    }
    let widths: Vec<f64> = grid.axes().iter().map(|a| a.half_extent / 8.0).collect();
    SampledField::from_fn(grid, |x| {
        let mut v = C64::new(0.0, 0.0);
        for (xi, c) in &modes {
            let ph: f64 = x.iter().zip(xi).map(|(a, b)| a * b).sum();
            v += c * C64::from_polar(1.0, ph);
        }
        let env: f64 = x.iter().zip(&widths).map(|(a, w)| a * a / (2.0 * w * w)).sum();
        v * (-env).exp()
    })
}

/// Parameters for sums of random Gabor atoms c_j e^{−|x−a_j|²/(2s_j²)} e^{i⟨x,b_j⟩}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomParams {
    pub count: usize,
    /// Centers a_j are uniform in [−center_radius, center_radius]^d.
    pub center_radius: f64,
    /// Widths s_j are uniform in [min_width, max_width].
    pub min_width: f64,
    pub max_width: f64,
    /// Frequencies b_j are uniform in [−freq_radius, freq_radius]^d.
    pub freq_radius: f64,
}

impl Default for AtomParams {
    fn default() -> Self {
        Self { count: 4, center_radius: 2.0, min_width: 0.6, max_width: 1.4, freq_radius: 2.0 }
    }
}

/// Random smooth decaying field built from Gabor atoms; the continuous
/// function depends only on the seed and parameters, not on the grid.
pub fn make_random_atoms(grid: &Grid, seed: u64, p: &AtomParams) -> SampledField {
    let d = grid.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let atoms: Vec<(Vec<f64>, f64, Vec<f64>, C64)> = (0..p.count)
        .map(|_| {
            let a: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..=1.0) * p.center_radius).collect();
            let s = p.min_width + (p.max_width - p.min_width) * rng.random::<f64>();
            let b: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..=1.0) * p.freq_radius).collect();
            let c = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            (a, s, b, c)
        })
        .collect();
    SampledField::from_fn(grid, |x| {
        let mut v = C64::new(0.0, 0.0);
        for (a, s, b, c) in &atoms {
            let r2: f64 = x.iter().zip(a).map(|(u, w)| (u - w) * (u - w)).sum();
            let ph: f64 = x.iter().zip(b).map(|(u, w)| u * w).sum();
            v += c * C64::from_polar((-r2 / (2.0 * s * s)).exp(), ph);
        }
        v
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid {
        Grid::new(1, 12.0, 256).unwrap()
    }

    fn max_diff(a: &SampledField, b: &SampledField) -> f64 {
        a.values().iter().zip(b.values()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn grid_geometry() {
        let g = grid();
        let a = g.axis(0);
        assert_eq!(a.point(0), -12.0);
        assert!((a.spacing() * a.dual().spacing() - 2.0 * PI / 256.0).abs() < 1e-15);
        assert!(g.dual().dual().matches(&g));
        assert!(Axis::new(1.0, 7).is_err());
    }

    #[test]
    fn gaussian_is_normalized() {
        for lambda in [1.0, 4.0] {
            let f = make_gaussian(&grid(), lambda, &[], &[]).unwrap();
            assert!((f.l2_norm() - 1.0).abs() < 1e-10);
        }
        let f = make_gaussian(&grid(), 1.0, &[], &[]).unwrap();
        let g = make_gaussian(&grid(), 1.0, &[], &[2.0]).unwrap();
        for (a, b) in f.values().iter().zip(g.values()) {
            assert!((a.norm() - b.norm()).abs() < 1e-15);
        }
    }

    #[test]
    fn gaussian_is_fourier_invariant() {
        let f = standard_window(&grid());
        let ff = f.fourier_transform();
        let expect = standard_window(ff.grid());
        assert!(max_diff(&ff, &expect) < 1e-10);
        let back = ff.inverse_fourier_transform();
        assert!(back.grid().matches(f.grid()));
        assert!(max_diff(&back, &f) < 1e-12);
    }

    #[test]
    fn translation_becomes_modulation() {
        // ℱ[f(·−a)](ξ) = e^{−iaξ} ℱf(ξ)
        let a = 1.7;
        let f = make_gaussian(&grid(), 1.0, &[a], &[]).unwrap();
        let ff = f.fourier_transform();
        let expect = standard_window(ff.grid()).modulated(&[-a]);
        assert!(max_diff(&ff, &expect) < 1e-9);
    }

    #[test]
    fn hermite_functions() {
        let g = grid();
        assert_eq!(make_hermite(&g, 0), standard_window(&g));
        let h0 = make_hermite(&g, 0);
        let h1 = make_hermite(&g, 1);
        assert!(h0.inner_product(&h1).unwrap().norm() < 1e-12);
        let h3 = make_hermite(&g, 3);
        assert!((h3.l2_norm() - 1.0).abs() < 1e-10);
        assert!(h3.inner_product(&make_hermite(&g, 5)).unwrap().norm() < 1e-12);
    }

    #[test]
    fn inner_product_rejects_mismatch() {
        let a = standard_window(&grid());
        let b = standard_window(&Grid::new(1, 12.0, 128).unwrap());
        assert!(matches!(a.inner_product(&b), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn integer_and_fractional_shifts() {
        let g = grid();
        let f = standard_window(&g);
        let h = g.axis(0).spacing();
        let s = f.translated(&[3.0 * h]).unwrap();
        assert_eq!(s.values()[103], f.values()[100]);
        let s = f.translated(&[0.37]).unwrap();
        let expect = make_gaussian(&g, 1.0, &[0.37], &[]).unwrap();
        assert!(max_diff(&s, &expect) < 1e-12);
    }

    #[test]
    fn random_bandlimited_is_grid_independent() {
        let g1 = Grid::new(1, 12.0, 256).unwrap();
        let g2 = Grid::new(1, 12.0, 512).unwrap();
        let f1 = make_random_bandlimited(&g1, 7, 3.0);
        let f2 = make_random_bandlimited(&g2, 7, 3.0);
        for k in 0..256 {
            assert!((f1.values()[k] - f2.values()[2 * k]).norm() < 1e-12);
        }
        assert!(f1.values()[0].norm() < 1e-12 * f1.max_abs());
    }

    #[test]
    fn csv_and_json_round_trip_exactly() {
        let g = Grid::new(1, 12.0, 16).unwrap();
        let f = make_random_bandlimited(&g, 3, 2.0);
        let back = SampledField::from_csv(&f.to_csv()).unwrap();
        assert_eq!(back, f);
        assert!(f.to_csv().starts_with("# grid d=1 L=12 N=16\n"));
        let back = SampledField::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
        let p = PhaseField::from_fn(&g, |x, xi| C64::new(x[0], xi[0] / 3.0));
        assert_eq!(PhaseField::from_csv(&p.to_csv()).unwrap(), p);
        assert_eq!(PhaseField::from_json(&p.to_json()).unwrap(), p);
        let aniso = Grid::from_axes(vec![Axis::new(3.0, 4).unwrap(), Axis::new(2.5, 6).unwrap()]).unwrap();
        let f = SampledField::from_fn(&aniso, |x| C64::new(x[0] * x[1], 1.0));
        assert_eq!(SampledField::from_csv(&f.to_csv()).unwrap(), f);
    }
}
