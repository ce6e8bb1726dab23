//! Orlicz modulation-space norms M^{Φ,Ψ}_{(ω)} and W^{Φ,Ψ}_{(ω)}, embedding
//! checks, and hypothesis checkers for the Wigner and pseudo-differential
//! continuity theorems.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{standard_window, SampledField};
use crate::orlicz::{mixed_norm, MixedNormSpec};
use crate::tfa::stft;
use crate::weights::Weight;
use crate::young::{dominated_ratio, sup_near_origin, Delta2Mode, NearOriginSup, YoungFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Flavor {
    /// x-axes inner (Φ), ξ-axes outer (Ψ).
    M,
    /// ξ-axes inner (Ψ), x-axes outer (Φ).
    W,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Window {
    /// π^{−d/4} e^{−|x|²/2} on the signal's grid.
    Gaussian,
    Field(SampledField),
}

#[derive(Clone, Debug)]
pub struct ModulationSpaceSpec {
    pub phi: YoungFunction,
    pub psi: YoungFunction,
    /// Weight on phase space; `None` means constant one.
    pub weight: Option<Weight>,
    pub flavor: Flavor,
    pub window: Window,
}

impl ModulationSpaceSpec {
    pub fn m(phi: YoungFunction, psi: YoungFunction) -> Self {
        Self { phi, psi, weight: None, flavor: Flavor::M, window: Window::Gaussian }
    }

    pub fn w(phi: YoungFunction, psi: YoungFunction) -> Self {
        Self { phi, psi, weight: None, flavor: Flavor::W, window: Window::Gaussian }
    }

    /// M^Φ = M^{Φ,Φ}.
    pub fn single(phi: YoungFunction) -> Self {
        Self::m(phi.clone(), phi)
    }

    /// M^{p,q} with p, q ∈ [1,∞]; ∞ uses cap(1).
    pub fn lebesgue(p: f64, q: f64) -> Result<Self> {
        Ok(Self::m(lebesgue_young(p)?, lebesgue_young(q)?))
    }

    pub fn with_weight(mut self, w: Weight) -> Self {
        self.weight = Some(w);
        self
    }

    pub fn with_window(mut self, window: SampledField) -> Self {
        self.window = Window::Field(window);
        self
    }

    pub fn window_on(&self, f: &SampledField) -> Result<SampledField> {
        match &self.window {
            Window::Gaussian => Ok(standard_window(f.grid())),
            Window::Field(w) => {
                f.grid().ensure_matches(w.grid())?;
                Ok(w.clone())
            }
        }
    }

    /// Mixed norm spec on the phase space of a d-dimensional signal.
    pub fn mixed_spec(&self, d: usize) -> MixedNormSpec {
        let x: Vec<usize> = (0..d).collect();
        let xi: Vec<usize> = (d..2 * d).collect();
        let stages = match self.flavor {
            Flavor::M => vec![(x, self.phi.clone()), (xi, self.psi.clone())],
            Flavor::W => vec![(xi, self.psi.clone()), (x, self.phi.clone())],
        };
        MixedNormSpec::new(stages, self.weight.clone().unwrap_or_else(|| Weight::constant_one(2 * d)))
    }

    pub fn to_json(&self) -> Result<Value> {
        let window = match self.window {
            Window::Gaussian => "gaussian",
            Window::Field(_) => return Err(Error::Unsupported("only the gaussian window is serializable".into())),
        };
        let mut v = json!({
            "phi": self.phi,
            "psi": self.psi,
            "flavor": match self.flavor { Flavor::M => "M", Flavor::W => "W" },
            "window": window,
        });
        if let Some(w) = &self.weight {
            v["weight"] = Value::try_from(w)?;
        }
        Ok(v)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let phi: YoungFunction = serde_json::from_value(v.get("phi").cloned().ok_or_else(|| Error::Parse("missing \"phi\"".into()))?)?;
        let psi = match v.get("psi") {
            Some(p) => serde_json::from_value(p.clone())?,
            None => phi.clone(),
        };
        let flavor = match v.get("flavor").and_then(Value::as_str).unwrap_or("M") {
            "M" => Flavor::M,
            "W" => Flavor::W,
            other => return Err(Error::Parse(format!("unknown flavor \"{other}\""))),
        };
        match v.get("window").and_then(Value::as_str).unwrap_or("gaussian") {
            "gaussian" => {}
            other => return Err(Error::Parse(format!("unknown window \"{other}\""))),
        }
        let weight = v.get("weight").map(Weight::try_from).transpose()?;
        Ok(Self { phi, psi, weight, flavor, window: Window::Gaussian })
    }
}

/// Young function whose Luxemburg norm is the L^p norm; p = ∞ gives cap(1).
pub fn lebesgue_young(p: f64) -> Result<YoungFunction> {
    if p.is_infinite() {
        YoungFunction::cap(1.0)
    } else {
        YoungFunction::power(p)
    }
}

/// ‖V_φf‖ in the mixed Orlicz norm of `spec`.
pub fn modulation_norm(f: &SampledField, spec: &ModulationSpaceSpec) -> Result<f64> {
    let window = spec.window_on(f)?;
    if window.l2_norm() == 0.0 {
        return Err(Error::ZeroWindow);
    }
    let v = stft(f, &window)?;
    mixed_norm(v.field(), &spec.mixed_spec(f.grid().dim()))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EmbeddingReport {
    pub embeds: bool,
    /// sup of Φ₂/Φ₁ near the origin.
    pub phi: NearOriginSup,
    /// sup of Ψ₂/Ψ₁ near the origin.
    pub psi: NearOriginSup,
}

/// M^{Φ₁,Ψ₁} ⊆ M^{Φ₂,Ψ₂} iff Φ₂ ≲ Φ₁ and Ψ₂ ≲ Ψ₁ on (0,t₀].
pub fn check_embedding(
    phi1: &YoungFunction,
    psi1: &YoungFunction,
    phi2: &YoungFunction,
    psi2: &YoungFunction,
    t0: f64,
) -> EmbeddingReport {
    let phi = sup_near_origin(&|t| dominated_ratio(phi2.evaluate(t), phi1.evaluate(t)), 1e-8, t0, 60);
    let psi = sup_near_origin(&|t| dominated_ratio(psi2.evaluate(t), psi1.evaluate(t)), 1e-8, t0, 60);
    EmbeddingReport { embeds: phi.bounded && psi.bounded, phi, psi }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub pass: bool,
    pub constant: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub pass: bool,
    pub conditions: Vec<Condition>,
}

impl HypothesisReport {
    fn from_conditions(conditions: Vec<Condition>) -> Self {
        Self { pass: conditions.iter().all(|c| c.pass), conditions }
    }
}

/// Conjugate exponent p′ with 1/p + 1/p′ = 1.
pub fn dual_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

fn recip(p: f64) -> f64 {
    if p.is_infinite() {
        0.0
    } else {
        1.0 / p
    }
}

/// Shared checks for the steered/Δ₂/growth hypotheses with steering exponent
/// `steer`, lower growth exponent `growth` and inverse-product exponent `e`.
fn function_conditions(
    labels: [&str; 4],
    funcs: [&YoungFunction; 4],
    steer: f64,
    growth: f64,
    e: f64,
    r: f64,
) -> Vec<Condition> {
    let mut out = Vec::new();
    for (label, f) in labels.iter().zip(funcs) {
        out.push(Condition { name: format!("{label} is Young"), pass: f.is_young(), constant: None });
        let s = f.check_p_steered(steer);
        out.push(Condition { name: format!("{label} is {steer}-steered"), pass: s.steered, constant: None });
        let d2 = f.check_delta2(Delta2Mode::Local(r));
        out.push(Condition {
            name: format!("{label} satisfies local Delta2 on (0,{r}]"),
            pass: d2.holds,
            constant: Some(d2.constant),
        });
        let (pass, constant) = if growth.is_infinite() {
            (r < 1.0, 0.0)
        } else {
            let g = sup_near_origin(&|t| dominated_ratio(t.powf(growth), f.evaluate(t)), 1e-8, r, 60);
            (g.bounded, g.constant)
        };
        out.push(Condition {
            name: format!("{label}(t) >~ t^{growth} near 0"),
            pass,
            constant: Some(constant),
        });
    }
    for (a, b, la, lb) in [(funcs[0], funcs[2], labels[0], labels[2]), (funcs[1], funcs[3], labels[1], labels[3])] {
        let g = sup_near_origin(
            &|s| dominated_ratio(a.essential_inverse(s) * b.essential_inverse(s), s.powf(e)),
            1e-8,
            r,
            60,
        );
        out.push(Condition {
            name: format!("{la}^-& {lb}^-& <~ s^{e} near 0"),
            pass: g.bounded,
            constant: Some(g.constant),
        });
    }
    out
}

/// Hypotheses of the continuity theorem for Op_A(a), a ∈ M^{p,q}, from
/// M^{Φ₁,Ψ₁} to M^{Φ₂*,Ψ₂*}.
pub fn check_pseudo_hypotheses(
    p: f64,
    q: f64,
    phi1: &YoungFunction,
    psi1: &YoungFunction,
    phi2: &YoungFunction,
    psi2: &YoungFunction,
    r: f64,
) -> HypothesisReport {
    let mut c = vec![Condition { name: "q <= p".into(), pass: q <= p, constant: None }];
    let labels = ["Phi1", "Psi1", "Phi2", "Psi2"];
    let funcs = [phi1, psi1, phi2, psi2];
    if p == 1.0 {
        for (l, f) in labels.iter().zip(funcs) {
            c.push(Condition { name: format!("{l} is Young"), pass: f.is_young(), constant: None });
        }
    } else {
        let pp = dual_exponent(p);
        let qp = dual_exponent(q);
        c.extend(function_conditions(labels, funcs, pp, qp, recip(pp) + recip(qp), r));
    }
    HypothesisReport::from_conditions(c)
}

/// Hypotheses of the continuity theorem for (f₁,f₂) ↦ W^A_{f₁,f₂} into M^{p,q}.
pub fn check_wigner_hypotheses(
    p: f64,
    q: f64,
    phi1: &YoungFunction,
    psi1: &YoungFunction,
    phi2: &YoungFunction,
    psi2: &YoungFunction,
    r: f64,
) -> HypothesisReport {
    let mut c = vec![Condition { name: "p <= q".into(), pass: p <= q, constant: None }];
    let labels = ["Phi1", "Psi1", "Phi2", "Psi2"];
    let funcs = [phi1, psi1, phi2, psi2];
    if p.is_infinite() {
        for (l, f) in labels.iter().zip(funcs) {
            c.push(Condition { name: format!("{l} is Young"), pass: f.is_young(), constant: None });
        }
    } else {
        c.extend(function_conditions(labels, funcs, p, q, recip(p) + recip(q), r));
    }
    HypothesisReport::from_conditions(c)
}

/// Direct exponent inequalities for Op(a): M^{p₁,q₁} → M^{p₂′,q₂′}, a ∈ M^{p,q}.
pub fn lebesgue_exponent_oracle(p: f64, q: f64, p1: f64, q1: f64, p2: f64, q2: f64) -> bool {
    let lhs = recip(dual_exponent(p)) + recip(dual_exponent(q));
    let qp = dual_exponent(q);
    let eps = 1e-12;
    lhs <= recip(p1) + recip(p2) + eps
        && lhs <= recip(q1) + recip(q2) + eps
        && [p1, q1, p2, q2].iter().all(|&e| e <= qp)
        && q <= p
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FactorizationReport {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

/// ‖V_{f₁}f₂‖_{M^{Φ,Ψ}} against ‖f₁‖_{M^{Φ,Ψ}}‖f₂‖_{W^{Ψ,Φ}}, unit weights.
/// The left side needs the STFT of a phase-space field, so the grid is
/// limited to N ≤ 48 points per axis.
pub fn stft_norm_factorization_check(
    f1: &SampledField,
    f2: &SampledField,
    phi: &YoungFunction,
    psi: &YoungFunction,
) -> Result<FactorizationReport> {
    f1.grid().ensure_matches(f2.grid())?;
    if let Some(a) = f1.grid().axes().iter().find(|a| a.n > 48) {
        return Err(Error::ResolutionGuard(format!("N = {} exceeds 48 for the phase-space STFT", a.n)));
    }
    let v = stft(f2, f1)?;
    let lhs = modulation_norm(v.field(), &ModulationSpaceSpec::m(phi.clone(), psi.clone()))?;
    let a = modulation_norm(f1, &ModulationSpaceSpec::m(phi.clone(), psi.clone()))?;
    let b = modulation_norm(f2, &ModulationSpaceSpec::w(psi.clone(), phi.clone()))?;
    let rhs = a * b;
    let ratio = if rhs == 0.0 && lhs == 0.0 { 0.0 } else { lhs / rhs };
    Ok(FactorizationReport { lhs, rhs, ratio })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_hermite, make_random_bandlimited, Grid};

    fn pw(p: f64) -> YoungFunction {
        YoungFunction::power(p).unwrap()
    }

    #[test]
    fn m22_is_moyal() {
        let g = Grid::new(1, 12.0, 128).unwrap();
        let f = make_random_bandlimited(&g, 9, 3.0);
        let n = modulation_norm(&f, &ModulationSpaceSpec::lebesgue(2.0, 2.0).unwrap()).unwrap();
        assert!((n - f.l2_norm()).abs() < 1e-8 * n);
    }

    #[test]
    fn m11_of_gaussian() {
        let g = Grid::new(1, 12.0, 256).unwrap();
        let phi = standard_window(&g);
        let n = modulation_norm(&phi, &ModulationSpaceSpec::lebesgue(1.0, 1.0).unwrap()).unwrap();
        assert!((n - (8.0 * std::f64::consts::PI).sqrt()).abs() < 1e-6);
    }

    #[test]
    fn w_equals_m_for_equal_functions() {
        let g = Grid::new(1, 8.0, 64).unwrap();
        let f = make_random_bandlimited(&g, 3, 2.0);
        let e = pw(3.0);
        let a = modulation_norm(&f, &ModulationSpaceSpec::m(e.clone(), e.clone())).unwrap();
        let b = modulation_norm(&f, &ModulationSpaceSpec::w(e.clone(), e)).unwrap();
        assert!((a - b).abs() < 1e-10 * a);
    }

    #[test]
    fn embedding_examples() {
        let e = YoungFunction::entropy();
        assert!(check_embedding(&e, &e, &pw(2.0), &pw(2.0), 0.1).embeds);
        assert!(!check_embedding(&pw(2.0), &pw(2.0), &e, &e, 0.1).embeds);
        assert!(check_embedding(&pw(1.5), &pw(1.5), &pw(3.0), &pw(3.0), 0.1).embeds);
        assert!(!check_embedding(&pw(3.0), &pw(3.0), &pw(1.5), &pw(1.5), 0.1).embeds);
    }

    #[test]
    fn hypothesis_examples() {
        let e = YoungFunction::entropy();
        let r = check_pseudo_hypotheses(3.0, 1.5, &e, &e, &e, &e, 0.1);
        assert!(r.pass, "{:#?}", r.conditions.iter().filter(|c| !c.pass).collect::<Vec<_>>());
        let p2 = pw(2.0);
        assert!(check_pseudo_hypotheses(2.0, 2.0, &p2, &p2, &p2, &p2, 0.1).pass);
        assert!(!check_pseudo_hypotheses(1.0, 2.0, &p2, &p2, &p2, &p2, 0.1).pass);
        assert!(lebesgue_exponent_oracle(2.0, 2.0, 2.0, 2.0, 2.0, 2.0));
        let p4 = pw(4.0);
        assert!(check_wigner_hypotheses(2.0, 2.0, &p2, &p2, &p2, &p2, 0.1).pass);
        assert!(!check_wigner_hypotheses(2.0, 2.0, &p4, &p4, &p2, &p2, 0.1).pass);
        assert!(!check_wigner_hypotheses(3.0, 2.0, &p2, &p2, &p2, &p2, 0.1).pass);
    }

    #[test]
    fn factorization_l2() {
        let g = Grid::balanced(1, 24).unwrap();
        let f = standard_window(&g);
        let r = stft_norm_factorization_check(&f, &f, &pw(2.0), &pw(2.0)).unwrap();
        assert!((r.ratio - 1.0).abs() < 5e-2, "{r:?}");
        let z = SampledField::zeros(&g);
        let r = stft_norm_factorization_check(&f, &z, &pw(1.0), &pw(1.0)).unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
        let big = Grid::new(1, 8.0, 64).unwrap();
        let h = make_hermite(&big, 1);
        assert!(matches!(
            stft_norm_factorization_check(&h, &h, &pw(1.0), &pw(1.0)),
            Err(Error::ResolutionGuard(_))
        ));
    }
}
