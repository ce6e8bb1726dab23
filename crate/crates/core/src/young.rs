//! Young and quasi-Young functions Φ: [0,∞] → [0,∞].
//!
//! A [`YoungFunction`] is a kind (the Young function Φ₀) together with a
//! quasi-order p₀ ∈ (0,1]; it evaluates as Φ(t) = Φ₀(t^{p₀}). The value ∞ is
//! represented by `f64::INFINITY`.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};

const INF: f64 = f64::INFINITY;

/// Splice point of the entropy kind: −t² log t is convex exactly on [0, e^{−3/2}].
pub fn entropy_splice() -> f64 {
    (-1.5f64).exp()
}

fn entropy_tail_slope() -> f64 {
    2.0 * entropy_splice()
}

#[derive(Clone, Debug)]
pub enum Kind {
    /// t^p, p ≥ 1.
    Power { p: f64 },
    /// t^p / p, p ≥ 1.
    PowerScaled { p: f64 },
    /// c·t^p, c > 0, p ≥ 1.
    Monomial { c: f64, p: f64 },
    /// 0 on [0,a], ∞ beyond.
    Cap { a: f64 },
    /// −t² log t near the origin, continued by its tangent line.
    Entropy,
    /// tan t on [0, π/2), ∞ beyond.
    TanExample,
    /// −t / ln t on (0,1), ∞ for t ≥ 1.
    LogExample,
    /// Convex piecewise-linear interpolation with a linear tail.
    Table(Arc<Table>),
    /// `inner` on [0,a], ∞ beyond.
    Capped { inner: Box<YoungFunction>, a: f64 },
    /// Numeric Legendre transform of `base`.
    Conjugate(Arc<NumericConjugate>),
}

#[derive(Clone, Debug)]
pub struct Table {
    knots: Vec<(f64, f64)>,
    tail_slope: f64,
}

impl Table {
    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn tail_slope(&self) -> f64 {
        self.tail_slope
    }

    fn eval(&self, t: f64) -> f64 {
        let k = &self.knots;
        let (tl, vl) = k[k.len() - 1];
        if t >= tl {
            if t.is_infinite() {
                return INF;
            }
            return vl + self.tail_slope * (t - tl);
        }
        let i = k.partition_point(|&(x, _)| x <= t);
        let (t0, v0) = k[i - 1];
        let (t1, v1) = k[i];
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }

    fn slopes(&self) -> Vec<f64> {
        self.knots
            .windows(2)
            .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Landmarks {
    /// Zero point: Φ(t) = 0 for t < t1.
    pub t1: f64,
    /// Infinity point: Φ(t) = ∞ for t > t2.
    pub t2: f64,
    /// Supremum of the finite values of Φ.
    pub s0: f64,
}

#[derive(Clone, Debug)]
pub struct YoungFunction {
    kind: Kind,
    quasi_order: f64,
}

impl YoungFunction {
    /// Φ(t) = t^p. For 0 < p < 1 this is stored as the quasi-Young function of
    /// order p built on Φ₀(t) = t.
    pub fn power(p: f64) -> Result<Self> {
        check_positive("p", p)?;
        if p < 1.0 {
            return Ok(Self::young(Kind::Power { p: 1.0 }).quasi(p));
        }
        Ok(Self::young(Kind::Power { p }))
    }

    /// Φ(t) = t^p / p.
    pub fn power_scaled(p: f64) -> Result<Self> {
        check_positive("p", p)?;
        if p < 1.0 {
            return Ok(Self::young(Kind::Monomial { c: 1.0 / p, p: 1.0 }).quasi(p));
        }
        Ok(Self::young(Kind::PowerScaled { p }))
    }

    /// Φ(t) = c·t^p with p ≥ 1.
    pub fn monomial(c: f64, p: f64) -> Result<Self> {
        check_positive("c", c)?;
        check_positive("p", p)?;
        if p < 1.0 {
            return Err(Error::NotConvex(format!("monomial exponent {p} < 1")));
        }
        Ok(Self::young(Kind::Monomial { c, p }))
    }

    pub fn cap(a: f64) -> Result<Self> {
        check_positive("a", a)?;
        Ok(Self::young(Kind::Cap { a }))
    }

    pub fn entropy() -> Self {
        Self::young(Kind::Entropy)
    }

    pub fn tan_example() -> Self {
        Self::young(Kind::TanExample)
    }

    pub fn log_example() -> Self {
        Self::young(Kind::LogExample)
    }

    /// Piecewise-linear Young function through `knots`, continued linearly
    /// with slope `tail_slope`. The first knot must be (0, 0) and the
    /// interpolant must be convex.
    pub fn table(knots: Vec<(f64, f64)>, tail_slope: f64) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::InvalidYoung("table needs at least one knot".into()));
        }
        if knots[0] != (0.0, 0.0) {
            return Err(Error::InvalidYoung("first table knot must be (0, 0)".into()));
        }
        for w in knots.windows(2) {
            if !(w[1].0 > w[0].0) || !w[1].0.is_finite() {
                return Err(Error::InvalidYoung("table knots must be strictly increasing".into()));
            }
        }
        if knots.iter().any(|&(_, v)| !(v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidYoung("table values must be finite and nonnegative".into()));
        }
        if !(tail_slope > 0.0) || !tail_slope.is_finite() {
            return Err(Error::InvalidYoung("tail slope must be positive and finite".into()));
        }
        let table = Table { knots, tail_slope };
        let mut slopes = table.slopes();
        slopes.push(tail_slope);
        for w in slopes.windows(2) {
            if w[1] < w[0] - 1e-12 * (1.0 + w[0].abs()) {
                return Err(Error::NotConvex(format!(
                    "table slope decreases from {} to {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(Self::young(Kind::Table(Arc::new(table))))
    }

    /// `inner` on [0,a] and ∞ beyond.
    pub fn capped(inner: YoungFunction, a: f64) -> Result<Self> {
        check_positive("a", a)?;
        if inner.quasi_order != 1.0 {
            return Err(Error::InvalidYoung("capped needs a Young inner function".into()));
        }
        Ok(Self::young(Kind::Capped { inner: Box::new(inner), a }))
    }

    /// Φ(t^{p₀}) for p₀ ∈ (0,1]; orders compose multiplicatively.
    pub fn with_quasi_order(self, p0: f64) -> Result<Self> {
        if !(p0 > 0.0 && p0 <= 1.0) {
            return Err(Error::InvalidYoung(format!("quasi order {p0} not in (0,1]")));
        }
        Ok(self.quasi(p0))
    }

    fn quasi(mut self, p0: f64) -> Self {
        self.quasi_order *= p0;
        self
    }

    fn young(kind: Kind) -> Self {
        Self { kind, quasi_order: 1.0 }
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    pub fn quasi_order(&self) -> f64 {
        self.quasi_order
    }

    pub fn is_young(&self) -> bool {
        self.quasi_order == 1.0
    }

    pub fn name(&self) -> &'static str {
        match &self.kind {
            Kind::Power { .. } => "power",
            Kind::PowerScaled { .. } => "power_scaled",
            Kind::Monomial { .. } => "monomial",
            Kind::Cap { .. } => "cap",
            Kind::Entropy => "entropy",
            Kind::TanExample => "tan_example",
            Kind::LogExample => "log_example",
            Kind::Table(_) => "table",
            Kind::Capped { .. } => "capped",
            Kind::Conjugate(_) => "conjugate",
        }
    }

    #[inline]
    fn arg(&self, t: f64) -> f64 {
        if self.quasi_order == 1.0 {
            t
        } else {
            t.powf(self.quasi_order)
        }
    }

    /// Exact value Φ(t) for t ∈ [0,∞].
    pub fn evaluate(&self, t: f64) -> f64 {
        kind_eval(&self.kind, self.arg(t), false)
    }

    /// Value used for bulk evaluation. Identical to [`evaluate`](Self::evaluate)
    /// except for numeric conjugates, which use a cached interpolation table
    /// accurate to roughly 1e−10 relative.
    pub fn evaluate_fast(&self, t: f64) -> f64 {
        kind_eval(&self.kind, self.arg(t), true)
    }

    pub fn landmarks(&self) -> Landmarks {
        let l = kind_landmarks(&self.kind);
        if self.quasi_order == 1.0 {
            return l;
        }
        let inv = 1.0 / self.quasi_order;
        Landmarks { t1: l.t1.powf(inv), t2: l.t2.powf(inv), s0: l.s0 }
    }

    /// Legendre conjugate Φ*(t) = sup_s (st − Φ(s)).
    pub fn conjugate(&self) -> Result<Self> {
        if self.quasi_order != 1.0 {
            return Err(Error::InvalidYoung(
                "conjugation is defined for Young functions only (quasi order 1)".into(),
            ));
        }
        let conj = match &self.kind {
            Kind::Power { p } | Kind::Monomial { p, .. } if *p == 1.0 => {
                let c = match self.kind {
                    Kind::Monomial { c, .. } => c,
                    _ => 1.0,
                };
                Self::cap(c)?
            }
            Kind::PowerScaled { p } if *p == 1.0 => Self::cap(1.0)?,
            Kind::Power { p } => monomial_conjugate(1.0, *p)?,
            Kind::Monomial { c, p } => monomial_conjugate(*c, *p)?,
            Kind::PowerScaled { p } => Self::power_scaled(*p / (*p - 1.0))?,
            Kind::Cap { a } => Self::monomial(*a, 1.0)?,
            Kind::Table(t) => table_conjugate(t)?,
            _ => Self::young(Kind::Conjugate(Arc::new(NumericConjugate::new(self.clone())))),
        };
        Ok(conj)
    }

    /// Essential inverse Φ^{-&}(s).
    pub fn essential_inverse(&self, s: f64) -> f64 {
        let t0 = kind_inverse(&self.kind, s);
        if self.quasi_order == 1.0 {
            t0
        } else {
            t0.powf(1.0 / self.quasi_order)
        }
    }

    /// Δ₂ condition Φ(2t) ≤ CΦ(t), globally or on (0,r].
    pub fn check_delta2(&self, mode: Delta2Mode) -> Delta2Report {
        if let Some(r) = self.delta2_analytic(mode) {
            return r;
        }
        let ratio = |t: f64| dominated_ratio(self.evaluate(2.0 * t), self.evaluate(t));
        let (lo, hi) = match mode {
            Delta2Mode::Global => (1e-10, 1e10),
            Delta2Mode::Local(r) => (r * 1e-10, r),
        };
        let base = grid_sup(&ratio, lo, hi, 400);
        let (elo, ehi) = match mode {
            Delta2Mode::Global => (lo * 1e-2, hi * 1e2),
            Delta2Mode::Local(r) => (lo * 1e-2, r),
        };
        let ext = grid_sup(&ratio, elo, ehi, 800);
        let holds = base.is_finite() && ext.is_finite() && ext <= 1.05 * base + 1e-12;
        Delta2Report {
            holds,
            constant: ext.max(base),
            method: "sampled".into(),
            grid: Some(SampleGrid { lo: elo, hi: ehi, points: 800 }),
        }
    }

    fn delta2_analytic(&self, mode: Delta2Mode) -> Option<Delta2Report> {
        let analytic = |holds: bool, constant: f64| Delta2Report {
            holds,
            constant,
            method: "analytic".into(),
            grid: None,
        };
        match &self.kind {
            Kind::Power { p } | Kind::PowerScaled { p } | Kind::Monomial { p, .. } => {
                Some(analytic(true, 2f64.powf(p * self.quasi_order)))
            }
            Kind::Cap { .. } => {
                let t1 = self.landmarks().t1;
                match mode {
                    Delta2Mode::Global => Some(analytic(false, INF)),
                    Delta2Mode::Local(r) if r <= t1 / 2.0 => Some(analytic(true, 1.0)),
                    Delta2Mode::Local(_) => Some(analytic(false, INF)),
                }
            }
            _ => None,
        }
    }

    /// Decides whether Φ is p-steered.
    pub fn check_p_steered(&self, p: f64) -> SteeringReport {
        let ratio = |t: f64| dominated_ratio(self.evaluate(t), t.powf(p));
        let growth = sup_near_origin(&ratio, 1e-12, 0.1, 60);
        if !growth.bounded {
            return SteeringReport {
                steered: true,
                branch: Some(SteeringBranch::LimsupInfinite),
                convex_below: None,
            };
        }
        let psi = |t: f64| self.evaluate(t.powf(1.0 / p));
        for k in 1..=6 {
            let r0 = 10f64.powi(-k);
            if midpoint_convex_near_origin(&psi, r0) {
                return SteeringReport {
                    steered: true,
                    branch: Some(SteeringBranch::YoungAfterPower),
                    convex_below: Some(r0),
                };
            }
        }
        SteeringReport { steered: false, branch: None, convex_below: None }
    }
}

impl fmt::Display for YoungFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Value::from(self.clone()))
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidYoung(format!("{name} must be positive and finite, got {v}")))
    }
}

fn monomial_conjugate(c: f64, p: f64) -> Result<YoungFunction> {
    // sup_s (st − c s^p) is attained at s = (t/(cp))^{1/(p−1)}.
    let q = p / (p - 1.0);
    YoungFunction::monomial((p - 1.0) * c * (c * p).powf(-q), q)
}

fn table_conjugate(t: &Table) -> Result<YoungFunction> {
    let mut slopes = t.slopes();
    slopes.push(t.tail_slope);
    let mut knots = vec![(0.0, 0.0)];
    for (k, &sigma) in slopes.iter().enumerate() {
        let (tk, vk) = t.knots[k];
        let value = (sigma * tk - vk).max(0.0);
        let last = *knots.last().unwrap();
        if sigma > last.0 {
            knots.push((sigma, value));
        }
    }
    let tl = t.knots[t.knots.len() - 1].0;
    let inner = YoungFunction::table(knots, tl.max(f64::MIN_POSITIVE))?;
    YoungFunction::capped(inner, t.tail_slope)
}

fn kind_eval(kind: &Kind, t: f64, fast: bool) -> f64 {
    if t.is_nan() {
        return f64::NAN;
    }
    if t <= 0.0 {
        return 0.0;
    }
    match kind {
        Kind::Power { p } => t.powf(*p),
        Kind::PowerScaled { p } => t.powf(*p) / p,
        Kind::Monomial { c, p } => c * t.powf(*p),
        Kind::Cap { a } => {
            if t <= *a {
                0.0
            } else {
                INF
            }
        }
        Kind::Entropy => {
            let ts = entropy_splice();
            if t <= ts {
                -t * t * t.ln()
            } else if t.is_finite() {
                1.5 * (-3.0f64).exp() + entropy_tail_slope() * (t - ts)
            } else {
                INF
            }
        }
        Kind::TanExample => {
            if t < FRAC_PI_2 {
                t.tan()
            } else {
                INF
            }
        }
        Kind::LogExample => {
            if t < 1.0 {
                -t / t.ln()
            } else {
                INF
            }
        }
        Kind::Table(tab) => tab.eval(t),
        Kind::Capped { inner, a } => {
            if t <= *a {
                if fast {
                    inner.evaluate_fast(t)
                } else {
                    inner.evaluate(t)
                }
            } else {
                INF
            }
        }
        Kind::Conjugate(nc) => {
            if fast {
                nc.eval_fast(t)
            } else {
                nc.eval_exact(t)
            }
        }
    }
}

fn kind_landmarks(kind: &Kind) -> Landmarks {
    let unbounded = Landmarks { t1: 0.0, t2: INF, s0: INF };
    match kind {
        Kind::Power { .. } | Kind::PowerScaled { .. } | Kind::Monomial { .. } | Kind::Entropy => {
            unbounded
        }
        Kind::Cap { a } => Landmarks { t1: *a, t2: *a, s0: 0.0 },
        Kind::TanExample => Landmarks { t1: 0.0, t2: FRAC_PI_2, s0: INF },
        Kind::LogExample => Landmarks { t1: 0.0, t2: 1.0, s0: INF },
        Kind::Table(t) => {
            let t1 = t
                .knots
                .iter()
                .rev()
                .find(|&&(_, v)| v == 0.0)
                .map(|&(x, _)| x)
                .unwrap_or(0.0);
            Landmarks { t1, t2: INF, s0: INF }
        }
        Kind::Capped { inner, a } => {
            let l = inner.landmarks();
            let t1 = l.t1.min(*a);
            if *a < l.t2 {
                Landmarks { t1, t2: *a, s0: inner.evaluate(*a) }
            } else {
                Landmarks { t1, t2: l.t2, s0: l.s0 }
            }
        }
        Kind::Conjugate(nc) => nc.landmarks,
    }
}

/// Right derivative of a Young kind at 0.
fn kind_d0(y: &YoungFunction) -> f64 {
    match &y.kind {
        Kind::Power { p } | Kind::PowerScaled { p } => {
            if *p == 1.0 {
                1.0
            } else {
                0.0
            }
        }
        Kind::Monomial { c, p } => {
            if *p == 1.0 {
                *c
            } else {
                0.0
            }
        }
        Kind::Cap { .. } | Kind::Entropy | Kind::LogExample => 0.0,
        Kind::TanExample => 1.0,
        Kind::Table(t) => t.slopes().first().copied().unwrap_or(t.tail_slope),
        Kind::Capped { inner, .. } => kind_d0(inner),
        Kind::Conjugate(nc) => nc.base.landmarks().t1,
    }
}

/// lim Φ(t)/t as t → ∞.
fn kind_slope_inf(y: &YoungFunction) -> f64 {
    match &y.kind {
        Kind::Power { p } | Kind::PowerScaled { p } => {
            if *p == 1.0 {
                1.0
            } else {
                INF
            }
        }
        Kind::Monomial { c, p } => {
            if *p == 1.0 {
                *c
            } else {
                INF
            }
        }
        Kind::Entropy => entropy_tail_slope(),
        Kind::Table(t) => t.tail_slope,
        Kind::Cap { .. } | Kind::TanExample | Kind::LogExample | Kind::Capped { .. } => INF,
        Kind::Conjugate(nc) => nc.base.landmarks().t2,
    }
}

fn kind_inverse(kind: &Kind, s: f64) -> f64 {
    if s.is_nan() {
        return f64::NAN;
    }
    if s <= 0.0 {
        return 0.0;
    }
    let l = kind_landmarks(kind);
    if s >= l.s0 {
        return l.t2;
    }
    match kind {
        Kind::Power { p } => s.powf(1.0 / p),
        Kind::PowerScaled { p } => (s * p).powf(1.0 / p),
        Kind::Monomial { c, p } => (s / c).powf(1.0 / p),
        Kind::TanExample => s.atan(),
        _ => {
            let f = |t: f64| kind_eval(kind, t, false);
            let mut lo = l.t1;
            let mut hi = if l.t2.is_finite() {
                l.t2
            } else {
                let mut h = lo.max(1.0);
                while f(h) < s && h < 1e300 {
                    h *= 2.0;
                }
                h
            };
            for _ in 0..400 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if f(mid) < s {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo <= 1e-16 * hi {
                    break;
                }
            }
            0.5 * (lo + hi)
        }
    }
}

/// Numeric Legendre transform with a lazily built interpolation table.
#[derive(Debug)]
pub struct NumericConjugate {
    base: YoungFunction,
    landmarks: Landmarks,
    table: OnceLock<HermiteTable>,
}

impl NumericConjugate {
    fn new(base: YoungFunction) -> Self {
        let t1 = kind_d0(&base);
        let t2 = kind_slope_inf(&base);
        let mut nc = Self {
            base,
            landmarks: Landmarks { t1, t2, s0: INF },
            table: OnceLock::new(),
        };
        if t2.is_finite() {
            nc.landmarks.s0 = nc.sup(t2, false).0;
        }
        nc
    }

    pub fn base(&self) -> &YoungFunction {
        &self.base
    }

    fn eval_exact(&self, t: f64) -> f64 {
        if t > self.landmarks.t2 {
            return INF;
        }
        if t <= self.landmarks.t1 {
            return 0.0;
        }
        self.sup(t, false).0
    }

    fn eval_fast(&self, t: f64) -> f64 {
        if t > self.landmarks.t2 {
            return INF;
        }
        if t <= self.landmarks.t1 {
            return 0.0;
        }
        let table = self.table.get_or_init(|| HermiteTable::build(self));
        table.eval(t).unwrap_or_else(|| self.eval_exact(t))
    }

    /// Returns (sup_s (st − Φ(s)), argmax).
    fn sup(&self, t: f64, fast: bool) -> (f64, f64) {
        if t.is_infinite() {
            return (INF, INF);
        }
        let phi = |s: f64| {
            if fast {
                self.base.evaluate_fast(s)
            } else {
                self.base.evaluate(s)
            }
        };
        let g = |s: f64| {
            let v = phi(s);
            if v.is_infinite() {
                -INF
            } else {
                s * t - v
            }
        };
        let bl = self.base.landmarks();
        let hi = if bl.t2.is_finite() {
            bl.t2
        } else {
            let mut s = bl.t1.max(1.0);
            while g(2.0 * s) > g(s) && s < 1e300 {
                s *= 2.0;
            }
            if s >= 1e300 {
                return (INF, INF);
            }
            2.0 * s
        };
        let lo = bl.t1.max(hi * 1e-308);
        let (mut a, mut b) = (lo.ln(), hi.ln());
        let gr = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = b - gr * (b - a);
        let mut d = a + gr * (b - a);
        let mut gc = g(c.exp());
        let mut gd = g(d.exp());
        for _ in 0..200 {
            if b - a <= 1e-13 {
                break;
            }
            if gc >= gd {
                b = d;
                d = c;
                gd = gc;
                c = b - gr * (b - a);
                gc = g(c.exp());
            } else {
                a = c;
                c = d;
                gc = gd;
                d = a + gr * (b - a);
                gd = g(d.exp());
            }
        }
        let mut best = (0.0, 0.0);
        for s in [c.exp(), d.exp(), hi, lo] {
            let v = g(s);
            if v > best.0 {
                best = (v, s);
            }
        }
        best
    }
}

/// Cubic Hermite interpolation of Φ* on log-spaced knots, using the argmax as
/// the exact derivative.
#[derive(Debug)]
struct HermiteTable {
    ts: Vec<f64>,
    vs: Vec<f64>,
    ds: Vec<f64>,
    ln_lo: f64,
    inv_step: f64,
    alpha: f64,
}

impl HermiteTable {
    const RATIO: f64 = 1.002;

    fn build(nc: &NumericConjugate) -> Self {
        let l = nc.landmarks;
        let hi = if l.t2.is_finite() { l.t2 } else { 1e6 };
        let lo = if l.t1 > 0.0 { l.t1 } else { hi * 1e-12 };
        let step = Self::RATIO.ln();
        let n = ((hi / lo).ln() / step).ceil().max(2.0) as usize + 1;
        let step = (hi / lo).ln() / (n - 1) as f64;
        let mut ts = Vec::with_capacity(n);
        let mut vs = Vec::with_capacity(n);
        let mut ds = Vec::with_capacity(n);
        for k in 0..n {
            let t = if k == n - 1 { hi } else { lo * (k as f64 * step).exp() };
            let (v, s) = nc.sup(t, true);
            if !v.is_finite() || !s.is_finite() {
                break;
            }
            ts.push(t);
            vs.push(v);
            ds.push(s);
        }
        let alpha = if !vs.is_empty() && vs[0] > 0.0 { ts[0] * ds[0] / vs[0] } else { 0.0 };
        Self { ts, vs, ds, ln_lo: lo.ln(), inv_step: 1.0 / step, alpha }
    }

    fn eval(&self, t: f64) -> Option<f64> {
        let n = self.ts.len();
        if n < 2 || t > self.ts[n - 1] {
            return None;
        }
        if t < self.ts[0] {
            if self.vs[0] == 0.0 {
                return Some(0.0);
            }
            return Some(self.vs[0] * (t / self.ts[0]).powf(self.alpha));
        }
        let mut i = (((t.ln() - self.ln_lo) * self.inv_step).floor().max(0.0) as usize).min(n - 2);
        while i > 0 && self.ts[i] > t {
            i -= 1;
        }
        while i < n - 2 && self.ts[i + 1] < t {
            i += 1;
        }
        let (t0, t1) = (self.ts[i], self.ts[i + 1]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        let s2 = s * s;
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s2 * (3.0 - 2.0 * s);
        let h11 = s2 * (s - 1.0);
        let v = h00 * self.vs[i] + h10 * h * self.ds[i] + h01 * self.vs[i + 1] + h11 * h * self.ds[i + 1];
        Some(v.max(0.0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Delta2Mode {
    Global,
    Local(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Delta2Report {
    pub holds: bool,
    pub constant: f64,
    pub method: String,
    pub grid: Option<SampleGrid>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SteeringBranch {
    LimsupInfinite,
    YoungAfterPower,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SteeringReport {
    pub steered: bool,
    pub branch: Option<SteeringBranch>,
    /// Radius on which t ↦ Φ(t^{1/p}) tested convex.
    pub convex_below: Option<f64>,
}

/// Ratio a/b for the relation a ≤ C·b: 0/0 and ∞/∞ count as 0, x/0 with x > 0
/// and ∞/finite as ∞.
pub fn dominated_ratio(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    if a.is_infinite() {
        return if b.is_infinite() { 0.0 } else { INF };
    }
    if b == 0.0 {
        return INF;
    }
    a / b
}

fn grid_sup(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
    geometric_grid(lo, hi, n).into_iter().map(f).fold(0.0, f64::max)
}

/// `n` geometrically spaced points from `lo` to `hi` inclusive.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![hi];
    }
    let step = (hi / lo).ln() / (n - 1) as f64;
    (0..n)
        .map(|k| if k == n - 1 { hi } else { lo * (k as f64 * step).exp() })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NearOriginSup {
    pub bounded: bool,
    pub constant: f64,
    pub grid: SampleGrid,
}

/// Decides whether `ratio` stays bounded as t → 0 by sampling it on a
/// geometric grid in [lo, hi]. The ratio counts as unbounded when it is
/// infinite somewhere or still grows like a positive power of 1/t (or of
/// log(1/t)) at the small end of the grid.
pub fn sup_near_origin(ratio: &dyn Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> NearOriginSup {
    let ts = geometric_grid(lo, hi, n);
    let rs: Vec<f64> = ts.iter().map(|&t| ratio(t)).map(|r| if r.is_nan() { 0.0 } else { r }).collect();
    let constant = rs.iter().copied().fold(0.0, f64::max);
    let grid = SampleGrid { lo, hi, points: n };
    if constant.is_infinite() {
        return NearOriginSup { bounded: false, constant, grid };
    }
    let k = 6.min(n);
    let head = &rs[..k];
    let growing = head.iter().all(|&r| r > 0.0) && head.windows(2).all(|w| w[0] > w[1]);
    if growing {
        let slope = (head[0].ln() - head[k - 1].ln()) / (ts[k - 1].ln() - ts[0].ln());
        if slope > 1e-3 {
            return NearOriginSup { bounded: false, constant, grid };
        }
    }
    NearOriginSup { bounded: true, constant, grid }
}

fn midpoint_convex_near_origin(psi: &dyn Fn(f64) -> f64, r0: f64) -> bool {
    let mut ts = vec![0.0];
    ts.extend(geometric_grid(r0 * 1e-6, r0, 40));
    let vs: Vec<f64> = ts.iter().map(|&t| psi(t)).collect();
    for i in 0..ts.len() {
        for j in i + 1..ts.len() {
            let (a, b) = (vs[i], vs[j]);
            if !a.is_finite() || !b.is_finite() {
                continue;
            }
            let m = psi(0.5 * (ts[i] + ts[j]));
            if m > 0.5 * (a + b) + 1e-12 * (1.0 + a + b) {
                return false;
            }
        }
    }
    true
}

impl From<YoungFunction> for Value {
    fn from(y: YoungFunction) -> Value {
        let params = match &y.kind {
            Kind::Power { p } | Kind::PowerScaled { p } => json!({ "p": p }),
            Kind::Monomial { c, p } => json!({ "c": c, "p": p }),
            Kind::Cap { a } => json!({ "a": a }),
            Kind::Entropy | Kind::TanExample | Kind::LogExample => json!({}),
            Kind::Table(t) => json!({
                "knots": t.knots.iter().map(|&(a, b)| vec![a, b]).collect::<Vec<_>>(),
                "tail_slope": t.tail_slope,
            }),
            Kind::Capped { inner, a } => json!({ "inner": Value::from((**inner).clone()), "a": a }),
            Kind::Conjugate(nc) => json!({ "base": Value::from(nc.base.clone()) }),
        };
        json!({ "kind": y.name(), "params": params, "quasi_order": y.quasi_order })
    }
}

impl TryFrom<Value> for YoungFunction {
    type Error = Error;

    fn try_from(v: Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("Young function must be an object".into()))?;
        let kind = obj
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("missing \"kind\"".into()))?;
        let empty = Map::new();
        let params = obj.get("params").and_then(Value::as_object).unwrap_or(&empty);
        let num = |name: &str| -> Result<f64> {
            params
                .get(name)
                .and_then(Value::as_f64)
                .ok_or_else(|| Error::Parse(format!("{kind}: missing numeric parameter \"{name}\"")))
        };
        let sub = |name: &str| -> Result<YoungFunction> {
            let v = params
                .get(name)
                .ok_or_else(|| Error::Parse(format!("{kind}: missing \"{name}\"")))?;
            YoungFunction::try_from(v.clone())
        };
        let y = match kind {
            "power" => YoungFunction::power(num("p")?)?,
            "power_scaled" => YoungFunction::power_scaled(num("p")?)?,
            "monomial" => YoungFunction::monomial(num("c")?, num("p")?)?,
            "cap" => YoungFunction::cap(num("a")?)?,
            "entropy" => YoungFunction::entropy(),
            "tan_example" => YoungFunction::tan_example(),
            "log_example" => YoungFunction::log_example(),
            "table" => {
                let knots = params
                    .get("knots")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Parse("table: missing \"knots\"".into()))?
                    .iter()
                    .map(|k| match k.as_array().map(|a| a.as_slice()) {
                        Some([a, b]) => match (a.as_f64(), b.as_f64()) {
                            (Some(a), Some(b)) => Ok((a, b)),
                            _ => Err(Error::Parse("table knot must be [t, value]".into())),
                        },
                        _ => Err(Error::Parse("table knot must be [t, value]".into())),
                    })
                    .collect::<Result<Vec<_>>>()?;
                YoungFunction::table(knots, num("tail_slope")?)?
            }
            "capped" => YoungFunction::capped(sub("inner")?, num("a")?)?,
            "conjugate" => sub("base")?.conjugate()?,
            other => return Err(Error::Parse(format!("unknown Young kind \"{other}\""))),
        };
        match obj.get("quasi_order") {
            None | Some(Value::Null) => Ok(y),
            Some(q) => {
                let q = q.as_f64().ok_or_else(|| Error::Parse("quasi_order must be a number".into()))?;
                y.with_quasi_order(q)
            }
        }
    }
}

impl Serialize for YoungFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Value::from(self.clone()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for YoungFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        YoungFunction::try_from(v).map_err(serde::de::Error::custom)
    }
}
