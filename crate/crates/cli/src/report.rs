//! Run reports: a versioned JSON record of the command, every input, the
//! results with their tolerances, and the wall time.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use orlicz_tf::suite::{CheckResult, Relation};
use serde::Serialize;
use serde_json::Value;

use crate::Format;

pub const SCHEMA: u32 = 1;

#[derive(Serialize, Debug, Clone)]
pub struct Config {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L")]
    pub l: f64,
    pub d: usize,
    pub seed: u64,
    pub trials: Option<usize>,
    pub tol: Option<f64>,
    pub format: Format,
    pub out: Option<String>,
    /// Subcommand-specific inputs.
    pub args: Value,
}

#[derive(Serialize, Debug, Clone)]
pub struct ResultRecord {
    pub name: String,
    pub value: Value,
    pub tolerance: Option<f64>,
    /// "<=" or ">=" when the record is a claim.
    pub relation: Option<&'static str>,
    pub pass: Option<bool>,
}

impl ResultRecord {
    /// A reported quantity that is not compared against anything.
    pub fn value(name: impl Into<String>, value: impl Serialize) -> Self {
        Self {
            name: name.into(),
            value: serde_json::to_value(value).unwrap_or(Value::Null),
            tolerance: None,
            relation: None,
            pass: None,
        }
    }

    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value: serde_json::to_value(value).unwrap_or(Value::Null),
            tolerance: Some(tolerance),
            relation: Some("<="),
            pass: Some(value <= tolerance),
        }
    }

    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Self {
            name: name.into(),
            value: Value::Bool(ok),
            tolerance: None,
            relation: None,
            pass: Some(ok),
        }
    }

    /// Measurements of a suite check; `tol` replaces "<=" tolerances.
    pub fn from_check(c: &CheckResult, tol: Option<f64>) -> Vec<Self> {
        c.measurements
            .iter()
            .map(|m| {
                let (tolerance, pass) = match (m.relation, tol) {
                    (Relation::AtMost, Some(t)) => (t, m.value <= t),
                    _ => (m.tolerance, m.pass),
                };
                Self {
                    name: format!("{} {}: {}", c.id, c.name, m.name),
                    value: serde_json::to_value(m.value).unwrap_or(Value::Null),
                    tolerance: Some(tolerance),
                    relation: Some(match m.relation {
                        Relation::AtMost => "<=",
                        Relation::AtLeast => ">=",
                    }),
                    pass: Some(pass),
                }
            })
            .collect()
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    pub config: Config,
    pub results: Vec<ResultRecord>,
    /// Extra structured output (tables, per-trial details).
    pub data: Value,
    pub timing_ms: u128,
}

impl RunReport {
    pub fn failed(&self) -> bool {
        self.results.iter().any(|r| r.pass == Some(false))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn results_csv(&self) -> String {
        let mut s = String::from("name,value,tolerance,relation,pass\n");
        for r in &self.results {
            let value = match &r.value {
                Value::String(v) => v.clone(),
                other => other.to_string(),
            };
            s.push_str(&format!(
                "\"{}\",\"{}\",{},{},{}\n",
                r.name.replace('"', "'"),
                value.replace('"', "'"),
                r.tolerance.map(|t| t.to_string()).unwrap_or_default(),
                r.relation.unwrap_or(""),
                r.pass.map(|p| p.to_string()).unwrap_or_default()
            ));
        }
        s
    }
}

pub fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
                // A closed pipe (`| head`) is not a failure of the computation.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => Ok(r?),
            }
        }
    }
}
