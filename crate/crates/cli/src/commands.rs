use std::process::ExitCode;
use std::time::Instant;

use anyhow::Result;
use num_complex::Complex64 as C64;
use orlicz_tf::entropy::{continuity_probe, entropy, gaussian_family_scan, lieb_bound_check, ProbeSpace};
use orlicz_tf::field::{standard_window, Grid, PhaseField};
use orlicz_tf::modspace::{modulation_norm, ModulationSpaceSpec};
use orlicz_tf::orlicz::{luxemburg_norm, mixed_norm, verify_holder, verify_young_convolution, MixedNormSpec};
use orlicz_tf::psido::{calculi_consistency, estimate_operator_norm, kernel, random_symbol_norm};
use orlicz_tf::suite::{self, holder_triples, log_example_conjugate, young_triples};
use orlicz_tf::tfa::{stft, stft_projection, twisted_convolution, wigner};
use orlicz_tf::weights::Weight;
use orlicz_tf::young::{Delta2Mode, Kind};
use serde_json::{json, Value};

use crate::inputs::{
    ensure_positive_window, grid, UsageError, parse_quant, parse_signal, parse_space, parse_symbol, parse_weight, parse_young,
    read_phase, require_1d, usage, young_from_args,
};
use crate::report::{write_output, Config, ResultRecord, RunReport};
use crate::{Cli, Command, EntropyOp, Format, NormOp, PsidoOp, TransformOp, VerifyOp, YoungOp};

struct Outcome {
    command: String,
    args: Value,
    results: Vec<ResultRecord>,
    data: Value,
    /// Table written instead of the results when the format is CSV.
    table: Option<String>,
}

impl Outcome {
    fn new(command: &str, args: Value) -> Self {
        Self { command: command.into(), args, results: Vec::new(), data: Value::Null, table: None }
    }
}

/// Grid defaults per command; everything else uses N = 256, L = 12.
fn default_grid(cmd: &Command) -> (usize, f64) {
    match cmd {
        Command::Transform { op: TransformOp::Twisted { .. } } => (64, 8.0),
        Command::Verify { op: VerifyOp::Reproducing } => (64, 8.0),
        Command::Verify { op: VerifyOp::RankOne } => (128, 10.0),
        Command::Psido { .. } => (128, 12.0),
        _ => (256, 12.0),
    }
}

pub fn run(cli: &Cli) -> Result<ExitCode> {
    let start = Instant::now();
    let g = &cli.global;
    let (n0, l0) = default_grid(&cli.command);
    let (n, l) = (g.n.unwrap_or(n0), g.l.unwrap_or(l0));
    let format = g.format.unwrap_or_else(|| match &g.out {
        Some(p) if p.extension().is_some_and(|e| e == "csv") => Format::Csv,
        _ => Format::Json,
    });
    let ctx = Ctx { n, l, d: g.d, seed: g.seed, trials: g.trials, tol: g.tol };
    let computed = match &cli.command {
        Command::Young { op } => young(op, &ctx),
        Command::Norm { op } => norm(op, &ctx),
        Command::Transform { op } => transform(op, &ctx),
        Command::Psido { op } => psido(op, &ctx),
        Command::Entropy { op } => entropy_cmd(op, &ctx),
        Command::Verify { op } => verify(*op, &ctx),
    };
    let outcome = match computed {
        Ok(o) => o,
        Err(e) if e.downcast_ref::<UsageError>().is_some() => return Err(e),
        // Numerical failures still produce a report carrying the failing record.
        Err(e) => {
            let mut o = Outcome::new(&command_name(&cli.command), Value::Null);
            o.results.push(ResultRecord { pass: Some(false), ..ResultRecord::value("error", format!("{e:#}")) });
            o
        }
    };
    let report = RunReport {
        schema: crate::report::SCHEMA,
        command: outcome.command,
        config: Config {
            n,
            l,
            d: g.d,
            seed: g.seed,
            trials: g.trials,
            tol: g.tol,
            format,
            out: g.out.as_ref().map(|p| p.display().to_string()),
            args: outcome.args,
        },
        results: outcome.results,
        data: outcome.data,
        timing_ms: start.elapsed().as_millis(),
    };
    match format {
        Format::Json => write_output(g.out.as_deref(), &report.to_json())?,
        Format::Csv => {
            let text = outcome.table.unwrap_or_else(|| report.results_csv());
            write_output(g.out.as_deref(), &text)?;
            if g.out.is_some() {
                write_output(None, &report.to_json())?;
            }
        }
    }
    if report.failed() {
        for r in report.results.iter().filter(|r| r.pass == Some(false)) {
            eprintln!("FAIL {}: {} (tolerance {:?})", r.name, r.value, r.tolerance);
        }
        Ok(ExitCode::from(1))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

fn command_name(cmd: &Command) -> String {
    let (group, op) = match cmd {
        Command::Young { op } => ("young", format!("{op:?}")),
        Command::Norm { op } => ("norm", format!("{op:?}")),
        Command::Transform { op } => ("transform", format!("{op:?}")),
        Command::Psido { op } => ("psido", format!("{op:?}")),
        Command::Entropy { op } => ("entropy", format!("{op:?}")),
        Command::Verify { op } => ("verify", format!("{op:?}")),
    };
    // Debug names are CamelCase variants; the command line uses kebab-case.
    let mut name = String::new();
    for (i, c) in op.chars().take_while(|c| c.is_alphanumeric()).enumerate() {
        if c.is_uppercase() && i > 0 {
            name.push('-');
        }
        name.push(c.to_ascii_lowercase());
    }
    format!("{group} {name}")
}

struct Ctx {
    n: usize,
    l: f64,
    d: usize,
    seed: u64,
    trials: Option<usize>,
    tol: Option<f64>,
}

impl Ctx {
    fn grid(&self) -> Result<Grid> {
        grid(self.d, self.l, self.n)
    }

    fn grid_1d(&self, what: &str) -> Result<Grid> {
        require_1d(self.d, what)?;
        grid(1, self.l, self.n)
    }
}

fn at_points(at: &[f64]) -> Result<&[f64]> {
    if at.is_empty() {
        Err(usage("--at needs at least one value"))
    } else {
        Ok(at)
    }
}

fn young(op: &YoungOp, _ctx: &Ctx) -> Result<Outcome> {
    match op {
        YoungOp::Evaluate(a) => {
            let y = young_from_args(a)?;
            let mut o = Outcome::new("young evaluate", json!({"young": y, "at": a.at}));
            for &t in at_points(&a.at)? {
                o.results.push(ResultRecord::value(format!("phi({t})"), y.evaluate(t)));
            }
            Ok(o)
        }
        YoungOp::Conjugate(a) => {
            let y = young_from_args(a)?;
            let c = y.conjugate().map_err(|e| usage(e.to_string()))?;
            let mut o = Outcome::new("young conjugate", json!({"young": y, "at": a.at}));
            let tol = _ctx.tol.unwrap_or(1e-6);
            for &t in at_points(&a.at)? {
                let v = c.evaluate(t);
                o.results.push(ResultRecord::value(format!("conjugate({t})"), v));
                if matches!(y.kind(), Kind::LogExample) && y.quasi_order() == 1.0 {
                    let want = log_example_conjugate(t);
                    if want > 1e-290 {
                        let rel = (v - want).abs() / want;
                        o.results.push(ResultRecord::at_most(format!("closed form relative error at {t}"), rel, tol));
                    } else {
                        o.results.push(ResultRecord::value(format!("closed form at {t} underflows"), want));
                    }
                }
            }
            Ok(o)
        }
        YoungOp::Inverse(a) => {
            let y = young_from_args(a)?;
            let mut o = Outcome::new("young inverse", json!({"young": y, "at": a.at}));
            for &s in at_points(&a.at)? {
                o.results.push(ResultRecord::value(format!("inverse({s})"), y.essential_inverse(s)));
            }
            Ok(o)
        }
        YoungOp::Classify { young: a, r, steer } => {
            let y = young_from_args(a)?;
            let mut o = Outcome::new("young classify", json!({"young": y, "r": r, "steer": steer}));
            o.results.push(ResultRecord::value("young", y.is_young()));
            o.results.push(ResultRecord::value("landmarks", y.landmarks()));
            o.results.push(ResultRecord::value("delta2 global", y.check_delta2(Delta2Mode::Global)));
            o.results.push(ResultRecord::value(format!("delta2 local({r})"), y.check_delta2(Delta2Mode::Local(*r))));
            if let Some(p) = steer {
                o.results.push(ResultRecord::value(format!("{p}-steered"), y.check_p_steered(*p)));
            }
            Ok(o)
        }
    }
}

fn norm(op: &NormOp, ctx: &Ctx) -> Result<Outcome> {
    match op {
        NormOp::Luxemburg { signal, phi, weight } => {
            let g = ctx.grid()?;
            let f = parse_signal(&signal.signal, &g, ctx.seed)?;
            let y = parse_young(phi)?;
            let w = match weight {
                Some(s) => parse_weight(s, ctx.d)?,
                None => Weight::constant_one(ctx.d),
            };
            let mut o = Outcome::new("norm luxemburg", json!({"signal": signal.signal, "phi": y, "weight": w}));
            o.results.push(ResultRecord::value("luxemburg norm", luxemburg_norm(&f, &y, &w)?));
            Ok(o)
        }
        NormOp::Mixed { signal, phi, psi, phase, spec } => {
            let field: PhaseField = match phase {
                Some(p) => read_phase(p)?,
                None => {
                    let g = ctx.grid()?;
                    stft(&parse_signal(&signal.signal, &g, ctx.seed)?, &standard_window(&g))?
                }
            };
            let d = field.d();
            let spec = match spec {
                Some(s) => serde_json::from_str::<MixedNormSpec>(s).map_err(|e| usage(format!("mixed spec: {e}")))?,
                None => MixedNormSpec::new(
                    vec![((0..d).collect(), parse_young(phi)?), ((d..2 * d).collect(), parse_young(psi)?)],
                    Weight::constant_one(2 * d),
                ),
            };
            let source = phase.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| signal.signal.clone());
            let mut o = Outcome::new("norm mixed", json!({"source": source, "spec": spec}));
            o.results.push(ResultRecord::value("mixed norm", mixed_norm(field.field(), &spec)?));
            Ok(o)
        }
        NormOp::Modulation { signal, space } => {
            let g = ctx.grid()?;
            let f = parse_signal(&signal.signal, &g, ctx.seed)?;
            let spec = parse_space(space)?;
            let mut o = Outcome::new("norm modulation", json!({"signal": signal.signal, "space": spec.to_json()?}));
            o.results.push(ResultRecord::value("modulation norm", modulation_norm(&f, &spec)?));
            Ok(o)
        }
    }
}

fn phase_summary(o: &mut Outcome, v: &PhaseField) {
    o.results.push(ResultRecord::value("l2 norm", v.l2_norm()));
    o.results.push(ResultRecord::value("max abs", v.max_abs()));
    o.table = Some(v.to_csv());
}

fn transform(op: &TransformOp, ctx: &Ctx) -> Result<Outcome> {
    match op {
        TransformOp::Stft { signal, window } => {
            let g = ctx.grid()?;
            let f = parse_signal(&signal.signal, &g, ctx.seed)?;
            let w = parse_signal(window, &g, ctx.seed)?;
            ensure_positive_window(&w)?;
            let v = stft(&f, &w)?;
            let mut o = Outcome::new("transform stft", json!({"signal": signal.signal, "window": window}));
            let want = f.l2_norm() * w.l2_norm();
            let moyal = if want == 0.0 { v.l2_norm() } else { (v.l2_norm() - want).abs() / want };
            o.results.push(ResultRecord::at_most("moyal relative error", moyal, ctx.tol.unwrap_or(1e-8)));
            phase_summary(&mut o, &v);
            Ok(o)
        }
        TransformOp::Wigner { signal, signal2, quant } => {
            let g = ctx.grid_1d("wigner")?;
            let f1 = parse_signal(&signal.signal, &g, ctx.seed)?;
            let f2 = parse_signal(signal2, &g, ctx.seed.wrapping_add(1))?;
            let a = parse_quant(&quant.a)?;
            let w = wigner(&f1, &f2, a)?;
            let mut o = Outcome::new(
                "transform wigner",
                json!({"signal": signal.signal, "signal2": signal2, "A": a.t()}),
            );
            phase_summary(&mut o, &w);
            Ok(o)
        }
        TransformOp::Twisted { signal, signal2, window } => {
            let g = ctx.grid_1d("twisted convolution")?;
            let w = parse_signal(window, &g, ctx.seed)?;
            ensure_positive_window(&w)?;
            let f = stft(&parse_signal(&signal.signal, &g, ctx.seed)?, &w)?;
            let h = stft(&parse_signal(signal2, &g, ctx.seed.wrapping_add(1))?, &w)?;
            let t = twisted_convolution(&f, &h)?;
            let mut o = Outcome::new(
                "transform twisted",
                json!({"signal": signal.signal, "signal2": signal2, "window": window}),
            );
            phase_summary(&mut o, &t);
            Ok(o)
        }
        TransformOp::Project { signal, window, window2 } => {
            let g = ctx.grid()?;
            let w = parse_signal(window, &g, ctx.seed)?;
            let w2 = parse_signal(window2, &g, ctx.seed)?;
            ensure_positive_window(&w)?;
            ensure_positive_window(&w2)?;
            let big = stft(&parse_signal(&signal.signal, &g, ctx.seed)?, &w2)?;
            let p = stft_projection(&big, &w)?;
            let pp = stft_projection(&p, &w)?;
            let diff = pp.combine(C64::new(1.0, 0.0), &p, C64::new(-1.0, 0.0))?.l2_norm();
            let rel = if big.l2_norm() == 0.0 { diff } else { diff / big.l2_norm() };
            let mut o = Outcome::new(
                "transform project",
                json!({"signal": signal.signal, "window": window, "window2": window2}),
            );
            o.results.push(ResultRecord::at_most("idempotence |P^2F - PF| / |F|", rel, ctx.tol.unwrap_or(1e-8)));
            phase_summary(&mut o, &p);
            Ok(o)
        }
    }
}

fn kernel_csv(k: &orlicz_tf::psido::KernelMatrix) -> String {
    let ax = k.grid().axis(0);
    let n = k.n();
    let mut s = format!("# kernel {}\nx,y,re,im\n", k.grid().describe());
    for j in 0..n {
        for m in 0..n {
            let v = k.get(j, m);
            s.push_str(&format!("{:.16e},{:.16e},{:.16e},{:.16e}\n", ax.point(j), ax.point(m), v.re, v.im));
        }
    }
    s
}

fn psido(op: &PsidoOp, ctx: &Ctx) -> Result<Outcome> {
    let g = ctx.grid_1d("pseudo-differential operators")?;
    match op {
        PsidoOp::Kernel { symbol, quant } => {
            let a = parse_symbol(&symbol.symbol, &g, ctx.seed)?;
            let q = parse_quant(&quant.a)?;
            let k = kernel(&a, q)?;
            let mut o = Outcome::new("psido kernel", json!({"symbol": symbol.symbol, "A": q.t()}));
            let max = k.entries().iter().map(|v| v.norm()).fold(0.0, f64::max);
            o.results.push(ResultRecord::value("max abs entry", max));
            o.table = Some(kernel_csv(&k));
            Ok(o)
        }
        PsidoOp::Apply { symbol, quant, signal } => {
            let a = parse_symbol(&symbol.symbol, &g, ctx.seed)?;
            let q = parse_quant(&quant.a)?;
            let f = parse_signal(&signal.signal, &g, ctx.seed)?;
            let out = kernel(&a, q)?.apply(&f)?;
            let mut o = Outcome::new(
                "psido apply",
                json!({"symbol": symbol.symbol, "A": q.t(), "signal": signal.signal}),
            );
            o.results.push(ResultRecord::value("input l2 norm", f.l2_norm()));
            o.results.push(ResultRecord::value("output l2 norm", out.l2_norm()));
            o.table = Some(out.to_csv());
            Ok(o)
        }
        PsidoOp::Opnorm { symbol, quant, domain, codomain, p, q } => {
            let a = parse_symbol(&symbol.symbol, &g, ctx.seed)?;
            let quantm = parse_quant(&quant.a)?;
            let dom = parse_space(domain)?;
            let cod = match codomain {
                Some(c) => parse_space(c)?,
                None => dom.clone(),
            };
            let symbol_norm = match (p, q) {
                (Some(p), Some(q)) if symbol.symbol.trim() == "random" => {
                    Some(random_symbol_norm(ctx.seed, &ModulationSpaceSpec::lebesgue(*p, *q)?)?)
                }
                (Some(_), Some(_)) => return Err(usage("symbol norms are available for --symbol random only")),
                (None, None) => None,
                _ => return Err(usage("give both --p and --q")),
            };
            let trials = ctx.trials.unwrap_or(8);
            let est = estimate_operator_norm(&kernel(&a, quantm)?, &dom, &cod, symbol_norm, trials, ctx.seed)?;
            let mut o = Outcome::new(
                "psido opnorm",
                json!({
                    "symbol_spec": symbol.symbol, "A": quantm.t(), "domain": dom.to_json()?,
                    "codomain": cod.to_json()?, "p": p, "q": q, "trials": trials, "seed": ctx.seed,
                }),
            );
            o.results.push(ResultRecord::value("lower_bound", est.lower_bound));
            if let Some(r) = est.ratio {
                o.results.push(ResultRecord::value("ratio", r));
            }
            o.data = serde_json::to_value(&est)?;
            Ok(o)
        }
        PsidoOp::Calculi { symbol, a1, a2, signal } => {
            let a = parse_symbol(&symbol.symbol, &g, ctx.seed)?;
            let (q1, q2) = (parse_quant(a1)?, parse_quant(a2)?);
            let f = parse_signal(&signal.signal, &g, ctx.seed)?;
            let r = calculi_consistency(&a, q1, q2, &f)?;
            let mut o = Outcome::new(
                "psido calculi",
                json!({"symbol": symbol.symbol, "A1": q1.t(), "A2": q2.t(), "signal": signal.signal}),
            );
            o.results.push(ResultRecord::at_most("max_error", r.max_error, ctx.tol.unwrap_or(1e-6)));
            Ok(o)
        }
    }
}

fn parse_probe_space(s: &str) -> Result<ProbeSpace> {
    match s.split_once(':') {
        None if s == "M2" => Ok(ProbeSpace::M2),
        None if s == "MPhi" => Ok(ProbeSpace::MPhi),
        Some(("Mp", p)) => Ok(ProbeSpace::Mp(p.parse().map_err(|_| usage(format!("bad exponent \"{p}\"")))?)),
        _ => Err(usage(format!("unknown probe space \"{s}\""))),
    }
}

fn entropy_cmd(op: &EntropyOp, ctx: &Ctx) -> Result<Outcome> {
    match op {
        EntropyOp::Eval { signal, window } => {
            let g = ctx.grid()?;
            let f = parse_signal(&signal.signal, &g, ctx.seed)?;
            let w = parse_signal(window, &g, ctx.seed)?;
            let e = entropy(&f, &w)?;
            let mut o = Outcome::new("entropy eval", json!({"signal": signal.signal, "window": window}));
            o.results.push(ResultRecord::value("entropy", e.value));
            o.data = serde_json::to_value(&e)?;
            Ok(o)
        }
        EntropyOp::Scan { lambdas, mphi } => {
            if lambdas.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
                return Err(usage("lambdas must be positive"));
            }
            let s = gaussian_family_scan(lambdas, ctx.d, *mphi)?;
            let mut o = Outcome::new("entropy scan", json!({"lambdas": lambdas, "mphi": mphi}));
            for r in &s.rows {
                o.results.push(ResultRecord::value(format!("E({})", r.lambda), r.entropy));
            }
            if let (Some(e4), Some(e1)) = (s.entropy_at(4.0), s.entropy_at(1.0)) {
                let dev = ((e4 - e1) - ctx.d as f64 * 1.25f64.ln()).abs();
                o.results.push(ResultRecord::at_most("|E(4) - E(1) - d log(5/4)|", dev, ctx.tol.unwrap_or(1e-5)));
            }
            o.results.push(ResultRecord::value("constant", s.constant));
            o.results.push(ResultRecord::value("spread", s.spread));
            o.table = Some(s.to_csv());
            o.data = serde_json::to_value(&s)?;
            Ok(o)
        }
        EntropyOp::Lieb { signal, window } => {
            let g = ctx.grid()?;
            let f = parse_signal(&signal.signal, &g, ctx.seed)?;
            let w = parse_signal(window, &g, ctx.seed)?;
            let r = lieb_bound_check(&f, &w)?;
            let mut o = Outcome::new("entropy lieb", json!({"signal": signal.signal, "window": window}));
            o.results.push(ResultRecord::value("entropy", r.entropy));
            o.results.push(ResultRecord::value("bound", r.bound));
            o.results.push(ResultRecord::flag("satisfied", r.satisfied));
            Ok(o)
        }
        EntropyOp::Probe { signal, direction, space, amplitudes } => {
            let g = ctx.grid()?;
            let f = parse_signal(&signal.signal, &g, ctx.seed)?;
            let dir = parse_signal(direction, &g, ctx.seed.wrapping_add(1))?;
            let sp = parse_probe_space(space)?;
            let t = continuity_probe(&f, &dir, amplitudes, sp)?;
            let mut o = Outcome::new(
                "entropy probe",
                json!({"signal": signal.signal, "direction": direction, "space": space, "amplitudes": amplitudes}),
            );
            o.results.push(ResultRecord::value("monotone", t.monotone));
            o.results.push(ResultRecord::value("fitted_constant", t.fitted_constant));
            let mut csv = String::from("amplitude,norm,delta_entropy\n");
            for r in &t.rows {
                csv.push_str(&format!("{},{:.12e},{:.12e}\n", r.amplitude, r.norm, r.delta_entropy));
            }
            o.table = Some(csv);
            o.data = serde_json::to_value(&t)?;
            Ok(o)
        }
    }
}

fn inequality_records(o: &mut Outcome, label: &str, r: &orlicz_tf::orlicz::InequalityReport, i: usize) {
    o.results.push(ResultRecord::flag(format!("{label} {} precheck", i + 1), r.precheck));
    o.results.push(ResultRecord::at_most(format!("{label} {} max ratio", i + 1), r.max_ratio, r.bound));
}

fn verify(op: VerifyOp, ctx: &Ctx) -> Result<Outcome> {
    let checks = |o: &mut Outcome, cs: Vec<suite::CheckResult>| {
        for c in &cs {
            o.results.extend(ResultRecord::from_check(c, ctx.tol));
        }
        o.data = serde_json::to_value(&cs).unwrap_or(Value::Null);
    };
    let one_d = || require_1d(ctx.d, "verify");
    Ok(match op {
        VerifyOp::Holder | VerifyOp::YoungConv => {
            let trials = ctx.trials.unwrap_or(1000);
            let holder = matches!(op, VerifyOp::Holder);
            let (name, triples) =
                if holder { ("verify holder", holder_triples()?) } else { ("verify young-conv", young_triples()?) };
            let mut o = Outcome::new(name, json!({"trials": trials}));
            let mut reports = Vec::new();
            for (i, [p0, p1, p2]) in triples.iter().enumerate() {
                let seed = ctx.seed.wrapping_add(i as u64);
                let r = if holder {
                    verify_holder(p0, p1, p2, trials, seed)?
                } else {
                    verify_young_convolution(p0, p1, p2, trials, seed)?
                };
                inequality_records(&mut o, if holder { "holder" } else { "young" }, &r, i);
                reports.push(r);
            }
            o.data = serde_json::to_value(&reports)?;
            o
        }
        VerifyOp::Moyal => {
            one_d()?;
            let trials = ctx.trials.unwrap_or(100);
            let mut o = Outcome::new("verify moyal", json!({"trials": trials}));
            checks(&mut o, vec![suite::check_moyal(ctx.n, ctx.l, trials, ctx.seed)?]);
            o
        }
        VerifyOp::Reproducing => {
            one_d()?;
            let mut o = Outcome::new("verify reproducing", json!({}));
            checks(&mut o, vec![suite::check_reproducing(ctx.n, ctx.l, ctx.seed)?]);
            o
        }
        VerifyOp::Projection => {
            one_d()?;
            let trials = ctx.trials.unwrap_or(10);
            let mut o = Outcome::new("verify projection", json!({"trials": trials}));
            checks(&mut o, vec![suite::check_inversion_projection(ctx.n, ctx.l, trials, ctx.seed)?]);
            o
        }
        VerifyOp::RankOne => {
            one_d()?;
            let mut o = Outcome::new("verify rank-one", json!({}));
            checks(&mut o, vec![suite::check_rank_one_duality(ctx.n, ctx.l, ctx.seed)?]);
            o
        }
        VerifyOp::Hypotheses => {
            let trials = ctx.trials.unwrap_or(20);
            let mut o = Outcome::new("verify hypotheses", json!({"tuples": trials}));
            checks(&mut o, vec![suite::check_hypotheses(trials, ctx.seed)?, suite::check_embeddings()?]);
            o
        }
        VerifyOp::All => {
            let mut o = Outcome::new("verify all", json!({"grids": "pinned per criterion"}));
            let cs = suite::run_all(ctx.seed);
            for c in &cs {
                eprintln!("{}", c.summary_line());
            }
            checks(&mut o, cs);
            o
        }
    })
}
