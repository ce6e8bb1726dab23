//! Verification checks with pinned grids and tolerances. Each check returns
//! its measurements; `run_check` fixes the parameters used for acceptance.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::entropy::{family_log_term, gaussian_family_scan, lieb_bound, lieb_bound_check};
use crate::error::Result;
use crate::field::{make_gaussian, make_hermite, make_random_bandlimited, standard_window, Grid, PhaseField};
use crate::modspace::{
    check_embedding, check_pseudo_hypotheses, dual_exponent, lebesgue_exponent_oracle, ModulationSpaceSpec,
};
use crate::orlicz::{verify_holder, verify_young_convolution};
use crate::psido::{apply, calculi_consistency, estimate_operator_norm, kernel, random_symbol, random_symbol_norm};
use crate::tfa::{quantization_change, stft, stft_adjoint, stft_projection, twisted_convolution, wigner, QuantizationMatrix};
use crate::young::{geometric_grid, YoungFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub relation: Relation,
    pub pass: bool,
}

impl Measurement {
    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, tolerance, relation: Relation::AtMost, pass: value <= tolerance }
    }

    pub fn at_least(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, tolerance, relation: Relation::AtLeast, pass: value >= tolerance }
    }

    /// A yes/no outcome recorded as 1/0 against tolerance 1.
    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Self::at_least(name, if ok { 1.0 } else { 0.0 }, 1.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: usize,
    pub name: String,
    pub pass: bool,
    pub measurements: Vec<Measurement>,
    pub detail: Value,
    pub elapsed_ms: u128,
}

impl CheckResult {
    fn new(id: usize, measurements: Vec<Measurement>, detail: Value) -> Self {
        Self {
            id,
            name: CRITERIA[id - 1].to_string(),
            pass: measurements.iter().all(|m| m.pass),
            measurements,
            detail,
            elapsed_ms: 0,
        }
    }

    pub fn summary_line(&self) -> String {
        let worst = self
            .measurements
            .iter()
            .find(|m| !m.pass)
            .or_else(|| self.measurements.first())
            .map(|m| {
                let rel = match m.relation {
                    Relation::AtMost => "<=",
                    Relation::AtLeast => ">=",
                };
                format!("{} = {:.3e} (need {rel} {:.3e})", m.name, m.value, m.tolerance)
            })
            .unwrap_or_default();
        format!(
            "[{}] {:>2} {}: {} ({} ms)",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            worst,
            self.elapsed_ms
        )
    }
}

pub const CRITERIA: [&str; 14] = [
    "moyal identity",
    "closed-form gaussian stft",
    "inversion and projection",
    "reproducing identity via twisted convolution",
    "holder and young-orlicz inequalities",
    "conjugate closed form and biconjugation",
    "rank-one operator and duality pairing",
    "calculi transform consistency",
    "entropy lambda-scan",
    "lieb bound",
    "discontinuity witness",
    "hypothesis checkers",
    "boundedness ratio stability",
    "embedding lattice",
];

fn max_abs_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn random_phase_field(grid: &Grid, rng: &mut ChaCha8Rng) -> PhaseField {
    let mut f = PhaseField::zeros(grid);
    for v in f.values_mut() {
        *v = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
    }
    f
}

/// 1. |‖V_φf‖₂ − ‖f‖₂‖φ‖₂| / (‖f‖₂‖φ‖₂) over random band-limited f.
pub fn check_moyal(n: usize, l: f64, trials: usize, seed: u64) -> Result<CheckResult> {
    let g = Grid::new(1, l, n)?;
    let phi = standard_window(&g);
    let mut worst = 0.0f64;
    for i in 0..trials {
        let f = make_random_bandlimited(&g, seed.wrapping_add(i as u64), 3.0);
        let want = f.l2_norm() * phi.l2_norm();
        let got = stft(&f, &phi)?.l2_norm();
        worst = worst.max((got - want).abs() / want);
    }
    Ok(CheckResult::new(
        1,
        vec![Measurement::at_most("max relative error", worst, 1e-8)],
        json!({"N": n, "L": l, "trials": trials, "seed": seed}),
    ))
}

/// 2. V_φφ against (2π)^{−1/2} e^{−ixξ/2} e^{−(x²+ξ²)/4}.
pub fn check_closed_form_stft(n: usize, l: f64) -> Result<CheckResult> {
    let g = Grid::new(1, l, n)?;
    let phi = standard_window(&g);
    let v = stft(&phi, &phi)?;
    let want = PhaseField::from_fn(&g, |x, xi| {
        let (x, xi) = (x[0], xi[0]);
        C64::from_polar((2.0 * PI).powf(-0.5) * (-(x * x + xi * xi) / 4.0).exp(), -x * xi / 2.0)
    });
    let err = max_abs_diff(v.values(), want.values());
    Ok(CheckResult::new(2, vec![Measurement::at_most("max abs deviation", err, 1e-8)], json!({"N": n, "L": l})))
}

/// 3. ‖V_φ*V_φf/‖φ‖² − f‖/‖f‖ and ‖P²F − PF‖/‖F‖ on random phase fields.
pub fn check_inversion_projection(n: usize, l: f64, trials: usize, seed: u64) -> Result<CheckResult> {
    let g = Grid::new(1, l, n)?;
    let phi = standard_window(&g);
    let mut rec = 0.0f64;
    for i in 0..trials {
        let f = make_random_bandlimited(&g, seed.wrapping_add(i as u64), 3.0);
        let back = stft_adjoint(&stft(&f, &phi)?, &phi)?.scaled(C64::new(phi.l2_norm().powi(-2), 0.0));
        let d = back.combine(C64::new(1.0, 0.0), &f, C64::new(-1.0, 0.0))?;
        rec = rec.max(d.l2_norm() / f.l2_norm());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut proj = 0.0f64;
    for _ in 0..trials {
        let big = random_phase_field(&g, &mut rng);
        let p1 = stft_projection(&big, &phi)?;
        let p2 = stft_projection(&p1, &phi)?;
        let d = p2.combine(C64::new(1.0, 0.0), &p1, C64::new(-1.0, 0.0))?;
        proj = proj.max(d.l2_norm() / big.l2_norm());
    }
    Ok(CheckResult::new(
        3,
        vec![
            Measurement::at_most("reconstruction relative error", rec, 1e-8),
            Measurement::at_most("projection idempotence", proj, 1e-8),
        ],
        json!({"N": n, "L": l, "trials": trials, "seed": seed}),
    ))
}

/// 4. V_φφ ∗_V V_φf = ‖φ‖² V_φf.
pub fn check_reproducing(n: usize, l: f64, seed: u64) -> Result<CheckResult> {
    let g = Grid::new(1, l, n)?;
    let phi = standard_window(&g);
    let f = make_random_bandlimited(&g, seed, 2.0);
    let vf = stft(&f, &phi)?;
    let lhs = twisted_convolution(&stft(&phi, &phi)?, &vf)?;
    let rhs = vf.scaled(C64::new(phi.l2_norm().powi(2), 0.0));
    let err = max_abs_diff(lhs.values(), rhs.values()) / rhs.max_abs();
    Ok(CheckResult::new(
        4,
        vec![Measurement::at_most("relative error", err, 1e-6)],
        json!({"N": n, "L": l, "seed": seed}),
    ))
}

pub fn holder_triples() -> Result<Vec<[YoungFunction; 3]>> {
    let e = YoungFunction::entropy();
    let p = YoungFunction::power;
    Ok(vec![
        [p(1.0)?, e.clone(), e.conjugate()?],
        [p(1.0)?, p(2.0)?, p(2.0)?],
        [p(1.0)?, p(3.0)?, p(1.5)?],
        [p(2.0)?, p(4.0)?, p(4.0)?],
    ])
}

pub fn young_triples() -> Result<Vec<[YoungFunction; 3]>> {
    let e = YoungFunction::entropy();
    let p = YoungFunction::power;
    Ok(vec![
        [YoungFunction::cap(2.0)?, e.clone(), e.conjugate()?],
        [YoungFunction::cap(1.0)?, p(2.0)?, p(2.0)?],
        [p(1.0)?, p(1.0)?, p(1.0)?],
        [p(2.0)?, p(1.0)?, p(2.0)?],
    ])
}

/// 5. Hölder and Young–Orlicz ratios over random pairs for each triple.
pub fn check_inequalities(trials: usize, seed: u64) -> Result<CheckResult> {
    let mut ms = Vec::new();
    let mut detail = Vec::new();
    for (i, [p0, p1, p2]) in holder_triples()?.iter().enumerate() {
        let r = verify_holder(p0, p1, p2, trials, seed.wrapping_add(i as u64))?;
        ms.push(Measurement::flag(format!("holder {} precheck", i + 1), r.precheck));
        ms.push(Measurement::at_most(format!("holder {} max ratio", i + 1), r.max_ratio, r.bound));
        detail.push(serde_json::to_value(&r)?);
    }
    for (i, [p0, p1, p2]) in young_triples()?.iter().enumerate() {
        let r = verify_young_convolution(p0, p1, p2, trials, seed.wrapping_add(100 + i as u64))?;
        ms.push(Measurement::flag(format!("young {} precheck", i + 1), r.precheck));
        ms.push(Measurement::at_most(format!("young {} max ratio", i + 1), r.max_ratio, r.bound));
        detail.push(serde_json::to_value(&r)?);
    }
    Ok(CheckResult::new(5, ms, json!({"trials": trials, "seed": seed, "reports": detail})))
}

pub fn builtin_young_functions() -> Result<Vec<YoungFunction>> {
    Ok(vec![
        YoungFunction::power(1.0)?,
        YoungFunction::power(2.0)?,
        YoungFunction::power(3.0)?,
        YoungFunction::power_scaled(3.0)?,
        YoungFunction::cap(1.0)?,
        YoungFunction::entropy(),
        YoungFunction::tan_example(),
        YoungFunction::log_example(),
        YoungFunction::table(vec![(0.0, 0.0), (1.0, 0.5), (2.0, 2.0)], 3.0)?,
    ])
}

/// Closed form of the conjugate of log_example.
pub fn log_example_conjugate(t: f64) -> f64 {
    let r = (0.25 + t).sqrt();
    (t + 0.5 - r) * (-(0.5 + r) / t).exp()
}

fn rel_err(got: f64, want: f64) -> f64 {
    if got == want {
        0.0
    } else {
        (got - want).abs() / want.abs().max(1e-300)
    }
}

/// 6. Numeric Legendre transform of log_example against its closed form,
/// and Φ** = Φ for the built-in kinds.
pub fn check_conjugates() -> Result<CheckResult> {
    let c = YoungFunction::log_example().conjugate()?;
    let mut worst = 0.0f64;
    let mut skipped = 0;
    for t in geometric_grid(1e-3, 1e-1, 41) {
        let want = log_example_conjugate(t);
        // below this the closed form itself underflows
        if want > 1e-290 {
            worst = worst.max(rel_err(c.evaluate(t), want));
        } else {
            skipped += 1;
        }
    }
    let mut bi = 0.0f64;
    let mut per_kind = Vec::new();
    for y in builtin_young_functions()? {
        let yy = y.conjugate()?.conjugate()?;
        let mut w = 0.0f64;
        for t in geometric_grid(1e-2, 4.0, 23) {
            let want = y.evaluate(t);
            let got = yy.evaluate(t);
            let e = if want.is_infinite() || got.is_infinite() {
                if want == got { 0.0 } else { f64::INFINITY }
            } else if want < 1e-290 {
                got.abs()
            } else {
                rel_err(got, want)
            };
            w = w.max(e);
        }
        per_kind.push(json!({"kind": y.name(), "max_rel_error": w}));
        bi = bi.max(w);
    }
    Ok(CheckResult::new(
        6,
        vec![
            Measurement::at_most("log_example conjugate relative error", worst, 1e-6),
            Measurement::at_most("biconjugation relative error", bi, 1e-6),
        ],
        json!({"underflow_points_skipped": skipped, "biconjugation": per_kind}),
    ))
}

/// 7. Op_A(W^A_{f₁,f₂})f = (2π)^{−1/2}⟨f,f₂⟩f₁ and
/// ⟨Op_A(a)f, g⟩ = (2π)^{−1/2}⟨a, W^A_{g,f}⟩ for A ∈ {0, ½I, I}.
pub fn check_rank_one_duality(n: usize, l: f64, seed: u64) -> Result<CheckResult> {
    let g = Grid::new(1, l, n)?;
    let c = (2.0 * PI).powf(-0.5);
    let f1 = make_gaussian(&g, 1.0, &[1.0], &[0.5])?;
    let f2 = make_gaussian(&g, 2.0, &[-0.5], &[-1.0])?;
    let f = make_random_bandlimited(&g, seed, 2.0);
    let h = make_random_bandlimited(&g, seed.wrapping_add(1), 2.0);
    let a = random_symbol(&g, seed)?;
    let (mut rank, mut dual) = (0.0f64, 0.0f64);
    for q in [QuantizationMatrix::zero(), QuantizationMatrix::half(), QuantizationMatrix::identity()] {
        let got = apply(&wigner(&f1, &f2, q)?, q, &f)?;
        let want = f1.scaled(f.inner_product(&f2)? * c);
        let d = got.combine(C64::new(1.0, 0.0), &want, C64::new(-1.0, 0.0))?;
        rank = rank.max(d.l2_norm() / want.l2_norm());
        let lhs = apply(&a, q, &f)?.inner_product(&h)?;
        let rhs = a.inner_product(&wigner(&h, &f, q)?)? * c;
        dual = dual.max((lhs - rhs).norm() / rhs.norm());
    }
    Ok(CheckResult::new(
        7,
        vec![
            Measurement::at_most("rank-one relative error", rank, 1e-6),
            Measurement::at_most("duality pairing relative error", dual, 1e-7),
        ],
        json!({"N": n, "L": l, "seed": seed}),
    ))
}

/// 8. Kohn–Nirenberg ↔ Weyl (and ↔ adjoint form) symbol transfers, plus the
/// Wigner transfer W^0 → W^{1/2}.
pub fn check_calculi(n: usize, l: f64, seed: u64) -> Result<CheckResult> {
    let g = Grid::new(1, l, n)?;
    let a = random_symbol(&g, seed)?;
    let f = make_random_bandlimited(&g, seed, 2.0);
    let (z, h, i) = (QuantizationMatrix::zero(), QuantizationMatrix::half(), QuantizationMatrix::identity());
    let mut round = 0.0f64;
    for (p, q) in [(z, h), (h, z), (z, i), (h, i)] {
        round = round.max(calculi_consistency(&a, p, q, &f)?.max_error);
    }
    let f1 = make_gaussian(&g, 1.3, &[0.5], &[1.0])?;
    let f2 = make_random_bandlimited(&g, seed.wrapping_add(7), 2.0);
    let w0 = wigner(&f1, &f2, z)?;
    let wh = wigner(&f1, &f2, h)?;
    let moved = quantization_change(&w0, z, h)?;
    let transfer = max_abs_diff(moved.values(), wh.values()) / wh.max_abs();
    Ok(CheckResult::new(
        8,
        vec![
            Measurement::at_most("operator round-trip relative error", round, 1e-6),
            Measurement::at_most("wigner transfer relative error", transfer, 1e-7),
        ],
        json!({"N": n, "L": l, "seed": seed}),
    ))
}

/// 9. E(λ) − log(π(√λ + 1/√λ)) is constant over λ ∈ {1/8,…,8}.
pub fn check_entropy_scan() -> Result<CheckResult> {
    let lambdas = [0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0];
    let s = gaussian_family_scan(&lambdas, 1, false)?;
    let e4 = s.entropy_at(4.0).unwrap_or(f64::NAN);
    let e1 = s.entropy_at(1.0).unwrap_or(f64::NAN);
    let diff = ((e4 - e1) - 1.25f64.ln()).abs();
    Ok(CheckResult::new(
        9,
        vec![
            Measurement::at_most("|E(4) - E(1) - log(5/4)|", diff, 1e-5),
            Measurement::at_most("offset spread", s.spread, 1e-4),
        ],
        json!({
            "constant": s.constant,
            "constant_minus_one": s.constant - 1.0,
            "constant_minus_quarter": s.constant - 0.25,
            "rows": s.rows,
        }),
    ))
}

/// 10. E_φ(f) ≥ d(1 + log(π/2)) for normalized random and Hermite signals.
pub fn check_lieb(n: usize, l: f64, trials: usize, seed: u64) -> Result<CheckResult> {
    let g = Grid::new(1, l, n)?;
    let phi = standard_window(&g);
    let mut min_margin = f64::INFINITY;
    let mut violations = Vec::new();
    let mut signals: Vec<(String, crate::field::SampledField)> = (0..trials)
        .map(|i| (format!("random {i}"), make_random_bandlimited(&g, seed.wrapping_add(i as u64), 3.0)))
        .collect();
    for k in 0..8 {
        signals.push((format!("hermite {k}"), make_hermite(&g, k)));
    }
    for (name, f) in &signals {
        let r = lieb_bound_check(f, &phi)?;
        min_margin = min_margin.min(r.entropy - r.bound);
        if !r.satisfied {
            violations.push(json!({"signal": name, "entropy": r.entropy}));
        }
    }
    Ok(CheckResult::new(
        10,
        vec![
            Measurement::at_least("min E - bound", min_margin, -1e-6),
            Measurement::at_most("violations", violations.len() as f64, 0.0),
        ],
        json!({"bound": lieb_bound(1), "signals": signals.len(), "violations": violations, "seed": seed}),
    ))
}

/// 11. On the λ-family with unit M² norm, E grows by the log term while the
/// M^Φ norm (Φ = entropy) increases strictly.
pub fn check_discontinuity() -> Result<CheckResult> {
    let s = gaussian_family_scan(&[1.0, 4.0, 16.0, 64.0], 1, true)?;
    let gain = s.entropy_at(64.0).unwrap_or(f64::NAN) - s.entropy_at(1.0).unwrap_or(f64::NAN);
    let m2_dev = s.rows.iter().map(|r| (r.m2_norm - 1.0).abs()).fold(0.0, f64::max);
    let mphi: Vec<f64> = s.rows.iter().map(|r| r.mphi_norm.unwrap_or(f64::NAN)).collect();
    let increasing = mphi.windows(2).all(|w| w[1] > w[0]);
    Ok(CheckResult::new(
        11,
        vec![
            Measurement::at_least("E(64) - E(1)", gain, 1.3),
            Measurement::at_most("max |M2 norm - 1|", m2_dev, 1e-8),
            Measurement::flag("M^Phi norm strictly increasing", increasing),
        ],
        json!({
            "closed_form_gain": family_log_term(64.0, 1) - family_log_term(1.0, 1),
            "mphi_norms": mphi,
            "rows": s.rows,
        }),
    ))
}

const EXPONENTS: [f64; 6] = [1.0, 4.0 / 3.0, 1.5, 2.0, 3.0, 4.0];

/// 12. The example tuple (p, q) = (3, 3/2) with all functions entropy passes
/// the pseudo-differential hypotheses, and for power functions the checker
/// agrees with the exponent inequalities on random tuples.
pub fn check_hypotheses(tuples: usize, seed: u64) -> Result<CheckResult> {
    let e = YoungFunction::entropy();
    let example = check_pseudo_hypotheses(3.0, 1.5, &e, &e, &e, &e, 0.1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let outer: Vec<f64> = EXPONENTS.iter().copied().chain([f64::INFINITY]).collect();
    let (mut agree, mut admissible) = (0usize, 0usize);
    let mut rows = Vec::new();
    for _ in 0..tuples {
        let p = outer[rng.random_range(0..outer.len())];
        let q = outer[rng.random_range(0..outer.len())];
        let pick = |rng: &mut ChaCha8Rng| EXPONENTS[rng.random_range(0..EXPONENTS.len())];
        let (p1, q1, p2, q2) = (pick(&mut rng), pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let pw = |x: f64| YoungFunction::power(x);
        let r = check_pseudo_hypotheses(p, q, &pw(p1)?, &pw(q1)?, &pw(p2)?, &pw(q2)?, 0.1);
        let oracle = lebesgue_exponent_oracle(p, q, p1, q1, p2, q2);
        agree += usize::from(r.pass == oracle);
        admissible += usize::from(oracle);
        rows.push(json!({
            "p": p, "q": q, "p1": p1, "q1": q1, "p2": p2, "q2": q2,
            "q_dual": dual_exponent(q), "checker": r.pass, "oracle": oracle,
        }));
    }
    Ok(CheckResult::new(
        12,
        vec![
            Measurement::flag("example tuple passes", example.pass),
            Measurement::at_least("checker/oracle agreement", agree as f64, tuples as f64),
        ],
        json!({"example": example, "admissible": admissible, "tuples": rows, "seed": seed}),
    ))
}

/// Lower bound of ‖Op(a)‖ on M^entropy for symbol `seed` on a grid with N
/// points, divided by ‖a‖_{M^{3,3/2}}.
pub fn boundedness_ratio(n: usize, l: f64, seed: u64, trials: usize, symbol_norm: f64) -> Result<f64> {
    let g = Grid::new(1, l, n)?;
    let a = random_symbol(&g, seed)?;
    let k = kernel(&a, QuantizationMatrix::zero())?;
    let space = ModulationSpaceSpec::single(YoungFunction::entropy());
    let est = estimate_operator_norm(&k, &space, &space, Some(symbol_norm), trials, seed)?;
    Ok(est.ratio.unwrap_or(f64::NAN))
}

/// 13. Operator-norm/symbol-norm ratios at N and 2N agree within a factor 2.
pub fn check_boundedness(symbols: usize, n: usize, l: f64, trials: usize, seed: u64) -> Result<CheckResult> {
    let sym_spec = ModulationSpaceSpec::lebesgue(3.0, 1.5)?;
    let mut worst = 1.0f64;
    let mut rows = Vec::new();
    for s in 0..symbols {
        let sseed = seed.wrapping_add(s as u64);
        let sn = random_symbol_norm(sseed, &sym_spec)?;
        let r1 = boundedness_ratio(n, l, sseed, trials, sn)?;
        let r2 = boundedness_ratio(2 * n, l, sseed, trials, sn)?;
        let factor = r1.max(r2) / r1.min(r2);
        worst = if factor.is_nan() { f64::INFINITY } else { worst.max(factor) };
        rows.push(json!({"symbol_seed": sseed, "symbol_norm": sn, "ratio_n": r1, "ratio_2n": r2, "factor": factor}));
    }
    Ok(CheckResult::new(
        13,
        vec![Measurement::at_most("max ratio variation factor", worst, 2.0)],
        json!({"N": [n, 2 * n], "L": l, "trials": trials, "seed": seed, "symbols": rows}),
    ))
}

/// 14. M^p ⊆ M^Φ ⊆ M² for p < 2 (Φ = entropy), reverse inclusions rejected.
pub fn check_embeddings() -> Result<CheckResult> {
    let e = YoungFunction::entropy();
    let two = YoungFunction::power(2.0)?;
    let mut ms = Vec::new();
    for p in [1.0, 1.5, 1.9] {
        let pp = YoungFunction::power(p)?;
        ms.push(Measurement::flag(format!("M^{p} in M^Phi"), check_embedding(&pp, &pp, &e, &e, 0.1).embeds));
        ms.push(Measurement::flag(format!("M^Phi not in M^{p}"), !check_embedding(&e, &e, &pp, &pp, 0.1).embeds));
    }
    ms.push(Measurement::flag("M^Phi in M^2", check_embedding(&e, &e, &two, &two, 0.1).embeds));
    ms.push(Measurement::flag("M^2 not in M^Phi", !check_embedding(&two, &two, &e, &e, 0.1).embeds));
    Ok(CheckResult::new(14, ms, json!({"t0": 0.1})))
}

/// Acceptance parameters for criterion `id` (1-based).
pub fn run_check(id: usize, seed: u64) -> Result<CheckResult> {
    let start = Instant::now();
    let mut r = match id {
        1 => check_moyal(256, 12.0, 100, seed)?,
        2 => check_closed_form_stft(256, 12.0)?,
        3 => check_inversion_projection(256, 12.0, 10, seed)?,
        4 => check_reproducing(64, 8.0, seed)?,
        5 => check_inequalities(1000, seed)?,
        6 => check_conjugates()?,
        7 => check_rank_one_duality(128, 10.0, seed)?,
        8 => check_calculi(128, 10.0, seed)?,
        9 => check_entropy_scan()?,
        10 => check_lieb(256, 12.0, 50, seed)?,
        11 => check_discontinuity()?,
        12 => check_hypotheses(20, seed)?,
        13 => check_boundedness(20, 128, 12.0, 6, seed)?,
        14 => check_embeddings()?,
        _ => return Err(crate::Error::Unsupported(format!("no acceptance criterion {id}"))),
    };
    r.elapsed_ms = start.elapsed().as_millis();
    Ok(r)
}

/// All criteria in order; an evaluation error is reported as a failed check.
pub fn run_all(seed: u64) -> Vec<CheckResult> {
    (1..=CRITERIA.len())
        .map(|id| {
            run_check(id, seed).unwrap_or_else(|e| {
                let mut r = CheckResult::new(id, vec![Measurement::flag("evaluation", false)], json!({"error": e.to_string()}));
                r.pass = false;
                r
            })
        })
        .collect()
}
