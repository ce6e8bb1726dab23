mod commands;
mod inputs;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "orlicz-tf", version, about = "Orlicz modulation spaces, time-frequency transforms and pseudo-differential operators")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Grid points per axis (even).
    #[arg(long = "N", global = true)]
    pub n: Option<usize>,
    /// Grid half-extent: points are −L + kΔ with Δ = 2L/N.
    #[arg(long = "L", global = true)]
    pub l: Option<f64>,
    /// Signal dimension.
    #[arg(long = "d", global = true, default_value_t = 1)]
    pub d: usize,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Overrides the comparison tolerance of the command.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Output file; defaults to stdout.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Young functions: evaluation, conjugates, essential inverses, classification.
    Young {
        #[command(subcommand)]
        op: YoungOp,
    },
    /// Luxemburg, mixed and modulation-space norms.
    Norm {
        #[command(subcommand)]
        op: NormOp,
    },
    /// STFT, Wigner distributions, twisted convolution and the STFT projection.
    Transform {
        #[command(subcommand)]
        op: TransformOp,
    },
    /// Pseudo-differential operators.
    Psido {
        #[command(subcommand)]
        op: PsidoOp,
    },
    /// The STFT entropy functional.
    Entropy {
        #[command(subcommand)]
        op: EntropyOp,
    },
    /// Verification suites.
    Verify {
        #[command(subcommand)]
        op: VerifyOp,
    },
}

#[derive(Args, Debug, Clone)]
pub struct YoungArgs {
    /// Kind name (power, power_scaled, monomial, cap, entropy, tan_example,
    /// log_example, table, capped), `name:param` or a JSON object.
    #[arg(long)]
    pub kind: String,
    /// Exponent for power-type kinds.
    #[arg(long)]
    pub p: Option<f64>,
    /// Threshold for cap.
    #[arg(long)]
    pub a: Option<f64>,
    /// Comma-separated arguments.
    #[arg(long, value_delimiter = ',')]
    pub at: Vec<f64>,
}

#[derive(Subcommand, Debug)]
pub enum YoungOp {
    Evaluate(YoungArgs),
    Conjugate(YoungArgs),
    Inverse(YoungArgs),
    Classify {
        #[command(flatten)]
        young: YoungArgs,
        /// Local Δ₂ radius.
        #[arg(long, default_value_t = 0.1)]
        r: f64,
        /// Steering exponent to test.
        #[arg(long)]
        steer: Option<f64>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct SignalArgs {
    /// gaussian[:λ[:x0[:ξ0]]], hermite:n, bandlimited[:band], atoms, zero, file:PATH
    #[arg(long, default_value = "bandlimited:3")]
    pub signal: String,
}

#[derive(Subcommand, Debug)]
pub enum NormOp {
    Luxemburg {
        #[command(flatten)]
        signal: SignalArgs,
        /// Young function (see `young --kind`).
        #[arg(long, default_value = "power:2")]
        phi: String,
        /// Weight: polynomial:s or exponential:r.
        #[arg(long)]
        weight: Option<String>,
    },
    /// Mixed norm of the STFT (x-axes with Φ, then ξ-axes with Ψ), or of a
    /// phase-field file, or with an explicit stage JSON.
    Mixed {
        #[command(flatten)]
        signal: SignalArgs,
        #[arg(long, default_value = "power:2")]
        phi: String,
        #[arg(long, default_value = "power:2")]
        psi: String,
        /// Phase-field CSV/JSON instead of the STFT of the signal.
        #[arg(long)]
        phase: Option<std::path::PathBuf>,
        /// MixedNormSpec JSON {"stages":[{"axes":[..],"young":{..}}],"weight":{..}}.
        #[arg(long)]
        spec: Option<String>,
    },
    Modulation {
        #[command(flatten)]
        signal: SignalArgs,
        /// M2, Mp:p, Mpq:p,q, entropy, or ModulationSpaceSpec JSON.
        #[arg(long, default_value = "M2")]
        space: String,
    },
}

#[derive(Args, Debug, Clone)]
pub struct QuantArgs {
    /// Quantization A = t·I: 0, half, 1 or a number in [0,1].
    #[arg(long = "A", default_value = "half")]
    pub a: String,
}

#[derive(Subcommand, Debug)]
pub enum TransformOp {
    Stft {
        #[command(flatten)]
        signal: SignalArgs,
        #[arg(long, default_value = "gaussian")]
        window: String,
    },
    Wigner {
        #[command(flatten)]
        signal: SignalArgs,
        #[arg(long, default_value = "gaussian")]
        signal2: String,
        #[command(flatten)]
        quant: QuantArgs,
    },
    /// V_φf ∗_V V_φg (direct O(N⁴) sum).
    Twisted {
        #[command(flatten)]
        signal: SignalArgs,
        #[arg(long, default_value = "gaussian")]
        signal2: String,
        #[arg(long, default_value = "gaussian")]
        window: String,
    },
    /// P_φ applied to the STFT of the signal with window `window2`.
    Project {
        #[command(flatten)]
        signal: SignalArgs,
        #[arg(long, default_value = "gaussian")]
        window: String,
        #[arg(long, default_value = "hermite:1")]
        window2: String,
    },
}

#[derive(Args, Debug, Clone)]
pub struct SymbolArgs {
    /// one, random, translation:c, file:PATH
    #[arg(long, default_value = "random")]
    pub symbol: String,
}

#[derive(Subcommand, Debug)]
pub enum PsidoOp {
    Kernel {
        #[command(flatten)]
        symbol: SymbolArgs,
        #[command(flatten)]
        quant: QuantArgs,
    },
    Apply {
        #[command(flatten)]
        symbol: SymbolArgs,
        #[command(flatten)]
        quant: QuantArgs,
        #[command(flatten)]
        signal: SignalArgs,
    },
    Opnorm {
        #[command(flatten)]
        symbol: SymbolArgs,
        #[command(flatten)]
        quant: QuantArgs,
        #[arg(long, default_value = "M2")]
        domain: String,
        /// Defaults to the domain.
        #[arg(long)]
        codomain: Option<String>,
        /// Symbol space M^{p,q} for the ratio (random symbols only).
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
    },
    Calculi {
        #[command(flatten)]
        symbol: SymbolArgs,
        #[arg(long = "A1", default_value = "0")]
        a1: String,
        #[arg(long = "A2", default_value = "half")]
        a2: String,
        #[command(flatten)]
        signal: SignalArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum EntropyOp {
    Eval {
        #[command(flatten)]
        signal: SignalArgs,
        #[arg(long, default_value = "gaussian")]
        window: String,
    },
    Scan {
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.25, 1.0, 4.0])]
        lambdas: Vec<f64>,
        /// Also compute the M^Φ norm (Φ = entropy) of each f_λ.
        #[arg(long)]
        mphi: bool,
    },
    Lieb {
        #[command(flatten)]
        signal: SignalArgs,
        #[arg(long, default_value = "gaussian")]
        window: String,
    },
    Probe {
        #[command(flatten)]
        signal: SignalArgs,
        #[arg(long, default_value = "hermite:2")]
        direction: String,
        /// M2, Mp:p or MPhi.
        #[arg(long, default_value = "MPhi")]
        space: String,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 0.25, 0.125, 0.0625, 0.03125])]
        amplitudes: Vec<f64>,
    },
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum VerifyOp {
    Holder,
    YoungConv,
    Moyal,
    Reproducing,
    Projection,
    RankOne,
    Hypotheses,
    /// Every acceptance criterion with its pinned parameters.
    All,
}

fn init_threads() {
    if let Some(n) = std::env::var("ORLICZ_TF_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    init_threads();
    match commands::run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<inputs::UsageError>() {
                Some(_) => ExitCode::from(2),
                None => ExitCode::from(1),
            }
        }
    }
}
