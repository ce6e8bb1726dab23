//! Weight functions on ℝⁿ and grid checks of moderateness and of the weight
//! compatibility conditions used by pseudo-differential operators.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::tfa::QuantizationMatrix;

pub type WeightFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum WeightKind {
    ConstantOne,
    /// ⟨x⟩^s = (1+|x|²)^{s/2}.
    Polynomial { s: f64 },
    /// e^{r|x|}.
    Exponential { r: f64 },
    /// Tensor product over consecutive coordinate blocks.
    Product(Vec<Weight>),
    Custom { name: String, func: WeightFn },
}

impl fmt::Debug for WeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightKind::ConstantOne => write!(f, "ConstantOne"),
            WeightKind::Polynomial { s } => write!(f, "Polynomial({s})"),
            WeightKind::Exponential { r } => write!(f, "Exponential({r})"),
            WeightKind::Product(ws) => f.debug_list().entries(ws).finish(),
            WeightKind::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Weight {
    kind: WeightKind,
    dim: usize,
}

impl Weight {
    pub fn constant_one(dim: usize) -> Self {
        Self { kind: WeightKind::ConstantOne, dim }
    }

    pub fn polynomial(s: f64, dim: usize) -> Self {
        Self { kind: WeightKind::Polynomial { s }, dim }
    }

    pub fn exponential(r: f64, dim: usize) -> Self {
        Self { kind: WeightKind::Exponential { r }, dim }
    }

    /// ω(x₁,…,x_k) = ω₁(x₁)⋯ω_k(x_k) where x_j has the dimension of ω_j.
    pub fn product(factors: Vec<Weight>) -> Self {
        let dim = factors.iter().map(|w| w.dim).sum();
        Self { kind: WeightKind::Product(factors), dim }
    }

    pub fn custom(name: impl Into<String>, dim: usize, func: WeightFn) -> Self {
        Self { kind: WeightKind::Custom { name: name.into(), func }, dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    pub fn is_constant_one(&self) -> bool {
        match &self.kind {
            WeightKind::ConstantOne => true,
            WeightKind::Polynomial { s } => *s == 0.0,
            WeightKind::Exponential { r } => *r == 0.0,
            WeightKind::Product(ws) => ws.iter().all(Weight::is_constant_one),
            WeightKind::Custom { .. } => false,
        }
    }

    /// ω(x). Panics if `x` has the wrong dimension.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dim, "weight of dimension {} evaluated at a point of dimension {}", self.dim, x.len());
        match &self.kind {
            WeightKind::ConstantOne => 1.0,
            WeightKind::Polynomial { s } => (1.0 + norm2(x)).powf(0.5 * s),
            WeightKind::Exponential { r } => (r * norm2(x).sqrt()).exp(),
            WeightKind::Product(ws) => {
                let mut off = 0;
                let mut v = 1.0;
                for w in ws {
                    v *= w.evaluate(&x[off..off + w.dim]);
                    off += w.dim;
                }
                v
            }
            WeightKind::Custom { func, .. } => func(x),
        }
    }

    /// A rate r with e^{−r|x|} ≤ ω(x) ≤ e^{r|x|}; `None` for custom weights.
    pub fn growth_rate(&self) -> Option<f64> {
        match &self.kind {
            WeightKind::ConstantOne => Some(0.0),
            WeightKind::Polynomial { s } => Some(s.abs()),
            WeightKind::Exponential { r } => Some(r.abs()),
            WeightKind::Product(ws) => ws.iter().map(Weight::growth_rate).sum(),
            WeightKind::Custom { .. } => None,
        }
    }
}

fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// Centered box [−extent, extent]^n sampled with `points` per axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationGrid {
    pub extent: f64,
    pub points: usize,
}

impl Default for VerificationGrid {
    fn default() -> Self {
        Self { extent: 8.0, points: 33 }
    }
}

impl VerificationGrid {
    fn axis(&self) -> Vec<f64> {
        let n = self.points.max(2);
        (0..n)
            .map(|k| -self.extent + 2.0 * self.extent * k as f64 / (n - 1) as f64)
            .collect()
    }

    fn doubled(&self) -> Self {
        Self { extent: 2.0 * self.extent, points: self.points }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightReport {
    pub holds: bool,
    pub constant: f64,
    pub method: String,
    pub grid: Option<VerificationGrid>,
}

/// Above this many sample points a seeded random sample of the box is used.
const MAX_GRID_POINTS: usize = 2_000_000;

/// Largest value of `f` over the grid box in `dim` dimensions.
fn sup_over_box(dim: usize, grid: &VerificationGrid, f: &dyn Fn(&[f64]) -> f64) -> f64 {
    let axis = grid.axis();
    let n = axis.len();
    let total = (n as f64).powi(dim as i32);
    let mut x = vec![0.0; dim];
    let mut sup = 0.0f64;
    if total <= MAX_GRID_POINTS as f64 {
        let mut idx = vec![0usize; dim];
        loop {
            for (xi, &i) in x.iter_mut().zip(&idx) {
                *xi = axis[i];
            }
            sup = sup.max(f(&x));
            let mut k = 0;
            loop {
                if k == dim {
                    return sup;
                }
                idx[k] += 1;
                if idx[k] < n {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..MAX_GRID_POINTS {
        for xi in x.iter_mut() {
            *xi = axis[rng.random_range(0..n)];
        }
        sup = sup.max(f(&x));
    }
    sup
}

/// Reports bounded when the sup is finite and does not grow by more than 25%
/// when the box extent is doubled.
fn sampled_report(dim: usize, grid: &VerificationGrid, f: &dyn Fn(&[f64]) -> f64) -> WeightReport {
    let base = sup_over_box(dim, grid, f);
    let ext = sup_over_box(dim, &grid.doubled(), f);
    let holds = base.is_finite() && ext.is_finite() && ext <= 1.25 * base;
    WeightReport { holds, constant: base, method: "sampled".into(), grid: Some(*grid) }
}

/// ω(x+y) ≤ C ω(x) v(y).
pub fn check_moderate(w: &Weight, v: &Weight, grid: &VerificationGrid) -> Result<WeightReport> {
    if w.dim != v.dim {
        return Err(Error::AxisMismatch(format!("weight dimensions {} and {}", w.dim, v.dim)));
    }
    let analytic = |constant: f64| WeightReport { holds: true, constant, method: "analytic".into(), grid: None };
    let v_at_least_one = matches!(v.kind, WeightKind::ConstantOne)
        || matches!(v.kind, WeightKind::Polynomial { s } if s >= 0.0)
        || matches!(v.kind, WeightKind::Exponential { r } if r >= 0.0);
    match (&w.kind, &v.kind) {
        (WeightKind::ConstantOne, _) if v_at_least_one => return Ok(analytic(1.0)),
        (WeightKind::Polynomial { s }, WeightKind::Polynomial { s: t }) if *t >= s.abs() => {
            // Peetre: ⟨x+y⟩^s ≤ 2^{|s|/2} ⟨x⟩^s ⟨y⟩^{|s|}
            return Ok(analytic(2f64.powf(0.5 * s.abs())));
        }
        (WeightKind::Exponential { r }, WeightKind::Exponential { r: t }) if *t >= r.abs() => {
            return Ok(analytic(1.0));
        }
        _ => {}
    }
    let n = w.dim;
    let f = |z: &[f64]| {
        let (x, y) = z.split_at(n);
        let s: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        w.evaluate(&s) / (w.evaluate(x) * v.evaluate(y))
    };
    Ok(sampled_report(2 * n, grid, &f))
}

/// ω₂(x,ξ) ≤ C ω₁(y,η) ω₀(x−A(x−y), A*ξ+(I−A*)η, ξ−η, y−x).
pub fn check_pseudo_weight_condition(
    w0: &Weight,
    w1: &Weight,
    w2: &Weight,
    a: QuantizationMatrix,
    grid: &VerificationGrid,
) -> Result<WeightReport> {
    let d = w1.dim / 2;
    if w1.dim != 2 * d || w2.dim != 2 * d || w0.dim != 4 * d || d == 0 {
        return Err(Error::AxisMismatch(format!(
            "expected ω0 on R^4d and ω1, ω2 on R^2d, got dimensions {}, {}, {}",
            w0.dim, w1.dim, w2.dim
        )));
    }
    if w0.is_constant_one() && w1.is_constant_one() && w2.is_constant_one() {
        return Ok(WeightReport { holds: true, constant: 1.0, method: "analytic".into(), grid: None });
    }
    let t = a.t();
    let f = |z: &[f64]| {
        let (x, rest) = z.split_at(d);
        let (xi, rest) = rest.split_at(d);
        let (y, eta) = rest.split_at(d);
        let mut arg0 = Vec::with_capacity(4 * d);
        arg0.extend((0..d).map(|i| x[i] - t * (x[i] - y[i])));
        arg0.extend((0..d).map(|i| t * xi[i] + (1.0 - t) * eta[i]));
        arg0.extend((0..d).map(|i| xi[i] - eta[i]));
        arg0.extend((0..d).map(|i| y[i] - x[i]));
        let xx: Vec<f64> = x.iter().chain(xi).copied().collect();
        let yy: Vec<f64> = y.iter().chain(eta).copied().collect();
        w2.evaluate(&xx) / (w1.evaluate(&yy) * w0.evaluate(&arg0))
    };
    Ok(sampled_report(4 * d, grid, &f))
}

/// ω(x,ξ,η,y) ≤ C ω₁(x−Ay, ξ+(I−A*)η) ω₂(x+(I−A)y, ξ−A*η).
pub fn check_wigner_weight_condition(
    w: &Weight,
    w1: &Weight,
    w2: &Weight,
    a: QuantizationMatrix,
    grid: &VerificationGrid,
) -> Result<WeightReport> {
    let d = w1.dim / 2;
    if w1.dim != 2 * d || w2.dim != 2 * d || w.dim != 4 * d || d == 0 {
        return Err(Error::AxisMismatch(format!(
            "expected ω on R^4d and ω1, ω2 on R^2d, got dimensions {}, {}, {}",
            w.dim, w1.dim, w2.dim
        )));
    }
    if w.is_constant_one() && w1.is_constant_one() && w2.is_constant_one() {
        return Ok(WeightReport { holds: true, constant: 1.0, method: "analytic".into(), grid: None });
    }
    let t = a.t();
    let f = |z: &[f64]| {
        let (x, rest) = z.split_at(d);
        let (xi, rest) = rest.split_at(d);
        let (eta, y) = rest.split_at(d);
        let mut a1 = Vec::with_capacity(2 * d);
        a1.extend((0..d).map(|i| x[i] - t * y[i]));
        a1.extend((0..d).map(|i| xi[i] + (1.0 - t) * eta[i]));
        let mut a2 = Vec::with_capacity(2 * d);
        a2.extend((0..d).map(|i| x[i] + (1.0 - t) * y[i]));
        a2.extend((0..d).map(|i| xi[i] - t * eta[i]));
        w.evaluate(z) / (w1.evaluate(&a1) * w2.evaluate(&a2))
    };
    Ok(sampled_report(4 * d, grid, &f))
}

impl TryFrom<&Weight> for Value {
    type Error = Error;

    fn try_from(w: &Weight) -> Result<Value> {
        Ok(match &w.kind {
            WeightKind::ConstantOne => json!({ "kind": "constant_one", "dim": w.dim }),
            WeightKind::Polynomial { s } => json!({ "kind": "polynomial", "s": s, "dim": w.dim }),
            WeightKind::Exponential { r } => json!({ "kind": "exponential", "r": r, "dim": w.dim }),
            WeightKind::Product(ws) => json!({
                "kind": "product",
                "factors": ws.iter().map(Value::try_from).collect::<Result<Vec<_>>>()?,
                "dim": w.dim,
            }),
            WeightKind::Custom { name, .. } => {
                return Err(Error::Unsupported(format!("custom weight \"{name}\" is not serializable")))
            }
        })
    }
}

impl TryFrom<&Value> for Weight {
    type Error = Error;

    fn try_from(v: &Value) -> Result<Weight> {
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("weight: missing \"kind\"".into()))?;
        let dim = || -> Result<usize> {
            v.get("dim")
                .and_then(Value::as_u64)
                .map(|d| d as usize)
                .ok_or_else(|| Error::Parse(format!("{kind} weight: missing \"dim\"")))
        };
        let num = |name: &str| -> Result<f64> {
            v.get(name)
                .and_then(Value::as_f64)
                .ok_or_else(|| Error::Parse(format!("{kind} weight: missing \"{name}\"")))
        };
        match kind {
            "constant_one" => Ok(Weight::constant_one(dim()?)),
            "polynomial" => Ok(Weight::polynomial(num("s")?, dim()?)),
            "exponential" => Ok(Weight::exponential(num("r")?, dim()?)),
            "product" => {
                let factors = v
                    .get("factors")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Parse("product weight: missing \"factors\"".into()))?
                    .iter()
                    .map(Weight::try_from)
                    .collect::<Result<Vec<_>>>()?;
                let w = Weight::product(factors);
                if let Some(d) = v.get("dim").and_then(Value::as_u64) {
                    if d as usize != w.dim {
                        return Err(Error::Parse(format!("product weight: dim {d} but factors sum to {}", w.dim)));
                    }
                }
                Ok(w)
            }
            other => Err(Error::Parse(format!("unknown weight kind \"{other}\""))),
        }
    }
}

impl Serialize for Weight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Value::try_from(self).map_err(serde::ser::Error::custom)?.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Weight::try_from(&v).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluates() {
        assert!((Weight::polynomial(2.0, 2).evaluate(&[1.0, 1.0]) - 3.0).abs() < 1e-15);
        let e = Weight::exponential(1.0, 2).evaluate(&[3.0, 4.0]);
        assert!((e - 5f64.exp()).abs() < 1e-12);
        assert_eq!(Weight::constant_one(3).evaluate(&[1.0, -2.0, 7.0]), 1.0);
    }

    #[test]
    fn product_is_tensor() {
        let p = Weight::product(vec![Weight::polynomial(2.0, 1), Weight::exponential(0.5, 1)]);
        assert_eq!(p.dim(), 2);
        let expect = 5.0 * (0.5f64 * 3.0).exp();
        assert_eq!(p.evaluate(&[2.0, -3.0]), expect);
    }

    #[test]
    fn moderate_examples() {
        let g = VerificationGrid::default();
        let r = check_moderate(&Weight::polynomial(2.0, 2), &Weight::polynomial(2.0, 2), &g).unwrap();
        assert!(r.holds && r.constant <= 2.0);
        let r = check_moderate(&Weight::exponential(1.0, 1), &Weight::exponential(1.0, 1), &g).unwrap();
        assert!(r.holds && r.constant == 1.0);
        let r = check_moderate(&Weight::exponential(2.0, 1), &Weight::exponential(1.0, 1), &g).unwrap();
        assert!(!r.holds);
        // sampled path agrees with Peetre
        let p2 = Weight::custom("peetre", 1, Arc::new(|x: &[f64]| 1.0 + x[0] * x[0]));
        let r = check_moderate(&p2, &Weight::polynomial(2.0, 1), &g).unwrap();
        assert!(r.holds && r.constant <= 2.0 && r.method == "sampled");
    }

    #[test]
    fn pseudo_weight_examples() {
        let g = VerificationGrid::default();
        let one2 = Weight::constant_one(2);
        let a = QuantizationMatrix::zero();
        let r = check_pseudo_weight_condition(&Weight::constant_one(4), &one2, &one2, a, &g).unwrap();
        assert!(r.holds && r.constant == 1.0);
        let s = 1.5;
        let w0 = Weight::product(vec![one2.clone(), Weight::polynomial(2.0 * s, 2)]);
        let w = Weight::polynomial(s, 2);
        let r = check_pseudo_weight_condition(&w0, &w, &w, a, &g).unwrap();
        assert!(r.holds, "{r:?}");
        let r = check_pseudo_weight_condition(&Weight::constant_one(4), &one2, &Weight::polynomial(4.0, 2), a, &g).unwrap();
        assert!(!r.holds);
    }

    #[test]
    fn json_round_trip() {
        let w = Weight::product(vec![Weight::polynomial(2.0, 2), Weight::exponential(1.0, 1)]);
        let s = serde_json::to_string(&w).unwrap();
        let back: Weight = serde_json::from_str(&s).unwrap();
        assert_eq!(back.dim(), 3);
        assert_eq!(back.evaluate(&[1.0, 2.0, 3.0]), w.evaluate(&[1.0, 2.0, 3.0]));
        let p: Weight = serde_json::from_str(r#"{"kind":"polynomial","s":2.0,"dim":2}"#).unwrap();
        assert_eq!(p.evaluate(&[1.0, 1.0]), 3.0);
    }
}
