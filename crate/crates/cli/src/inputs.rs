//! Parsers for the compact command-line descriptions of signals, symbols,
//! Young functions, weights and spaces.

use std::fmt;
use std::path::Path;

use anyhow::{anyhow, Context, Result};
use num_complex::Complex64 as C64;
use orlicz_tf::field::{
    make_gaussian, make_hermite, make_random_atoms, make_random_bandlimited, AtomParams, Grid, PhaseField, SampledField,
};
use orlicz_tf::modspace::ModulationSpaceSpec;
use orlicz_tf::psido::random_symbol;
use orlicz_tf::tfa::QuantizationMatrix;
use orlicz_tf::weights::Weight;
use orlicz_tf::young::YoungFunction;
use serde_json::{json, Value};

use crate::YoungArgs;

/// Invalid input on the command line; reported with exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

fn num(s: &str, what: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| usage(format!("{what}: expected a number, got \"{s}\"")))
}

/// `name`, `name:param` or a JSON object.
pub fn parse_young(s: &str) -> Result<YoungFunction> {
    let s = s.trim();
    let v = if s.starts_with('{') {
        serde_json::from_str::<Value>(s).map_err(|e| usage(format!("Young function JSON: {e}")))?
    } else {
        let (name, param) = match s.split_once(':') {
            Some((n, p)) => (n, Some(num(p, n)?)),
            None => (s, None),
        };
        let params = match (name, param) {
            ("cap", Some(a)) => json!({ "a": a }),
            ("cap", None) => json!({ "a": 1.0 }),
            (_, Some(p)) => json!({ "p": p }),
            (_, None) => json!({}),
        };
        json!({ "kind": name, "params": params })
    };
    YoungFunction::try_from(v).map_err(|e| usage(e.to_string()))
}

pub fn young_from_args(a: &YoungArgs) -> Result<YoungFunction> {
    if a.kind.trim().starts_with('{') || a.kind.contains(':') {
        return parse_young(&a.kind);
    }
    let params = match a.kind.as_str() {
        "cap" => json!({ "a": a.a.unwrap_or(1.0) }),
        "power" | "power_scaled" => json!({ "p": a.p.ok_or_else(|| usage(format!("{} needs --p", a.kind)))? }),
        "monomial" => json!({ "c": a.a.unwrap_or(1.0), "p": a.p.ok_or_else(|| usage("monomial needs --p"))? }),
        _ => json!({}),
    };
    YoungFunction::try_from(json!({ "kind": a.kind, "params": params })).map_err(|e| usage(e.to_string()))
}

pub fn parse_quant(s: &str) -> Result<QuantizationMatrix> {
    match s.trim() {
        "0" | "zero" | "kn" => Ok(QuantizationMatrix::zero()),
        "half" | "0.5" | "weyl" => Ok(QuantizationMatrix::half()),
        "1" | "identity" => Ok(QuantizationMatrix::identity()),
        other => QuantizationMatrix::t_identity(num(other, "A")?).map_err(|e| usage(e.to_string())),
    }
}

pub fn parse_weight(s: &str, dim: usize) -> Result<Weight> {
    if s.trim().starts_with('{') {
        let v: Value = serde_json::from_str(s).map_err(|e| usage(format!("weight JSON: {e}")))?;
        return Weight::try_from(&v).map_err(|e| usage(e.to_string()));
    }
    match s.split_once(':') {
        Some(("polynomial", v)) => Ok(Weight::polynomial(num(v, "polynomial")?, dim)),
        Some(("exponential", v)) => Ok(Weight::exponential(num(v, "exponential")?, dim)),
        None if s == "one" => Ok(Weight::constant_one(dim)),
        _ => Err(usage(format!("unknown weight \"{s}\""))),
    }
}

/// M2, Mp:p, Mpq:p,q, entropy, or ModulationSpaceSpec JSON.
pub fn parse_space(s: &str) -> Result<ModulationSpaceSpec> {
    let s = s.trim();
    if s.starts_with('{') {
        let v: Value = serde_json::from_str(s).map_err(|e| usage(format!("space JSON: {e}")))?;
        return ModulationSpaceSpec::from_json(&v).map_err(|e| usage(e.to_string()));
    }
    let lebesgue = |p: f64, q: f64| ModulationSpaceSpec::lebesgue(p, q).map_err(|e| usage(e.to_string()));
    match s.split_once(':') {
        None if s == "M2" => lebesgue(2.0, 2.0),
        None if s == "entropy" || s == "MPhi" => Ok(ModulationSpaceSpec::single(YoungFunction::entropy())),
        Some(("Mp", p)) => {
            let p = num(p, "Mp")?;
            lebesgue(p, p)
        }
        Some(("Mpq", pq)) => match pq.split_once(',') {
            Some((p, q)) => lebesgue(num(p, "Mpq")?, num(q, "Mpq")?),
            None => Err(usage("Mpq needs p,q")),
        },
        _ => Err(usage(format!("unknown space \"{s}\""))),
    }
}

fn read_field(path: &Path) -> Result<SampledField> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let f = if path.extension().is_some_and(|e| e == "json") {
        SampledField::from_json(&text)
    } else {
        SampledField::from_csv(&text)
    };
    f.map_err(|e| usage(format!("{}: {e}", path.display())))
}

pub fn read_phase(path: &Path) -> Result<PhaseField> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let f = if path.extension().is_some_and(|e| e == "json") {
        PhaseField::from_json(&text)
    } else {
        PhaseField::from_csv(&text)
    };
    f.map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// gaussian[:λ[:x0[:ξ0]]], hermite:n, bandlimited[:band], atoms, zero, file:PATH.
/// Files carry their own grid, which must match `grid`.
pub fn parse_signal(s: &str, grid: &Grid, seed: u64) -> Result<SampledField> {
    let s = s.trim();
    if let Some(path) = s.strip_prefix("file:") {
        let f = read_field(Path::new(path))?;
        if !f.grid().matches(grid) {
            return Err(usage(format!("{path}: grid {} does not match {}", f.grid().describe(), grid.describe())));
        }
        return Ok(f);
    }
    let mut parts = s.split(':');
    let name = parts.next().unwrap_or_default();
    let rest: Vec<f64> = parts.map(|p| num(p, name)).collect::<Result<_>>()?;
    let d = grid.dim();
    let f = match name {
        "gaussian" => {
            let lambda = rest.first().copied().unwrap_or(1.0);
            let x0 = rest.get(1).map(|&v| vec![v; d]).unwrap_or_default();
            let xi0 = rest.get(2).map(|&v| vec![v; d]).unwrap_or_default();
            make_gaussian(grid, lambda, &x0, &xi0).map_err(|e| usage(e.to_string()))?
        }
        "hermite" => {
            if d != 1 {
                return Err(usage("hermite signals are one-dimensional"));
            }
            make_hermite(grid, rest.first().copied().unwrap_or(0.0) as usize)
        }
        "bandlimited" => make_random_bandlimited(grid, seed, rest.first().copied().unwrap_or(3.0)),
        "atoms" => make_random_atoms(grid, seed, &AtomParams::default()),
        "zero" => SampledField::zeros(grid),
        _ => return Err(usage(format!("unknown signal \"{s}\""))),
    };
    Ok(f)
}

/// one, random, translation:c, file:PATH.
pub fn parse_symbol(s: &str, grid: &Grid, seed: u64) -> Result<PhaseField> {
    let s = s.trim();
    if let Some(path) = s.strip_prefix("file:") {
        let a = read_phase(Path::new(path))?;
        if !a.x_grid().matches(grid) {
            return Err(usage(format!("{path}: grid does not match {}", grid.describe())));
        }
        return Ok(a);
    }
    match s.split_once(':') {
        None if s == "one" => Ok(PhaseField::from_fn(grid, |_, _| C64::new(1.0, 0.0))),
        None if s == "random" => Ok(random_symbol(grid, seed)?),
        Some(("translation", c)) => {
            let c = num(c, "translation")?;
            Ok(PhaseField::from_fn(grid, |_, xi| C64::from_polar(1.0, xi.iter().sum::<f64>() * c)))
        }
        _ => Err(usage(format!("unknown symbol \"{s}\""))),
    }
}

pub fn grid(d: usize, l: f64, n: usize) -> Result<Grid> {
    Grid::new(d, l, n).map_err(|e| usage(e.to_string()))
}

pub fn require_1d(d: usize, what: &str) -> Result<()> {
    if d == 1 {
        Ok(())
    } else {
        Err(usage(format!("{what} is implemented for d = 1")))
    }
}

pub fn ensure_positive_window(w: &SampledField) -> Result<()> {
    if w.l2_norm() == 0.0 {
        Err(anyhow!("window has zero L2 norm"))
    } else {
        Ok(())
    }
}
