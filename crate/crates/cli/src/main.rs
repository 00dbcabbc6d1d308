use std::fs::File;
use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ctlab_cli::config::{Command, ConfigError, Format, Number, RunConfig};
use ctlab_cli::output::write_record;
use ctlab_cli::{run, RunError, THREADS_ENV};
use serde_json::json;

#[derive(Parser)]
#[command(name = "ctlab", version, about = "Maximal-estimate experiments along Hölder curves")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Clone, Copy)]
enum Sub {
    /// Sharp Sobolev exponent lookup.
    Atlas,
    /// Q(R) sweep and slope fit for a counterexample family.
    Sweep,
    /// Witness lower bound at a single R.
    Lowerbound,
    /// Kernel majorant and Schur checks.
    Kernelcheck,
    /// Evaluate the evolution along the curve.
    Eval,
}

impl From<Sub> for Command {
    fn from(s: Sub) -> Self {
        match s {
            Sub::Atlas => Command::Atlas,
            Sub::Sweep => Command::Sweep,
            Sub::Lowerbound => Command::Lowerbound,
            Sub::Kernelcheck => Command::Kernelcheck,
            Sub::Eval => Command::Eval,
        }
    }
}

#[derive(Args)]
struct Opts {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Accepts decimals or `p/q`.
    #[arg(long, global = true)]
    alpha: Option<String>,
    #[arg(long, global = true)]
    gamma: Option<String>,
    #[arg(long, global = true)]
    m: Option<String>,
    #[arg(long, global = true)]
    b: Option<f64>,
    #[arg(long, global = true)]
    c: Option<f64>,
    #[arg(long, global = true)]
    s: Option<f64>,
    #[arg(long, global = true)]
    family: Option<String>,
    #[arg(long, global = true)]
    curve: Option<String>,
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    scales: Option<Vec<f64>>,
    #[arg(long, global = true, value_delimiter = ',')]
    gammas: Option<Vec<String>>,
    #[arg(long = "schur-scales", global = true, value_delimiter = ',')]
    schur_scales: Option<Vec<f64>>,
    #[arg(long, global = true)]
    count: Option<usize>,
    #[arg(long, global = true)]
    calibrate: bool,
    #[arg(long, global = true)]
    continuity: bool,
    #[arg(long, global = true)]
    witness: Option<String>,
    #[arg(long, global = true)]
    nodes: Option<usize>,
    #[arg(long, global = true)]
    amplitude: Option<f64>,
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    xs: Option<Vec<f64>>,
    #[arg(long, global = true, value_delimiter = ',')]
    ts: Option<Vec<f64>>,
    #[arg(long, global = true)]
    propagator: Option<String>,
}

fn number(text: String) -> Number {
    match text.trim().parse::<f64>() {
        Ok(v) if !text.contains('/') => Number::Float(v),
        _ => Number::Text(text),
    }
}

fn assemble(cli: Cli) -> Result<RunConfig, ConfigError> {
    let command = Command::from(cli.command);
    let o = cli.opts;
    let mut cfg = match &o.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ConfigError::new("config", format!("{}: {e}", path.display())))?;
            RunConfig::from_json(&text, &path.display().to_string())?
        }
        None => RunConfig::new(command),
    };
    cfg.command = command;
    let p = &mut cfg.params;
    if let Some(v) = o.alpha {
        p.alpha = Some(number(v));
    }
    if let Some(v) = o.gamma {
        p.gamma = Some(number(v));
    }
    if let Some(v) = o.m {
        p.m = Some(number(v));
    }
    p.b = o.b.or(p.b);
    p.c = o.c.or(p.c);
    p.s = o.s.or(p.s);
    p.family = o.family.or(p.family.take());
    p.curve = o.curve.or(p.curve.take());
    if let Some(v) = o.scales {
        cfg.scales = v;
    }
    if let Some(v) = o.gammas {
        cfg.gammas = v.into_iter().map(number).collect();
    }
    if let Some(v) = o.schur_scales {
        cfg.schur_scales = v;
    }
    if let Some(v) = o.xs {
        cfg.xs = v;
    }
    if let Some(v) = o.ts {
        cfg.ts = v;
    }
    cfg.seed = o.seed.or(cfg.seed);
    cfg.tolerance = o.tolerance.or(cfg.tolerance);
    cfg.count = o.count.or(cfg.count);
    cfg.nodes = o.nodes.or(cfg.nodes);
    cfg.amplitude = o.amplitude.or(cfg.amplitude);
    cfg.witness = o.witness.or(cfg.witness.take());
    cfg.propagator = o.propagator.or(cfg.propagator.take());
    cfg.calibrate |= o.calibrate;
    cfg.continuity |= o.continuity;
    cfg.out = o.out.or(cfg.out.take());
    if let Some(f) = o.format {
        cfg.format = f;
    }
    Ok(cfg)
}

fn fail(code: u8, kind: &str, field: Option<&str>, reason: &str) -> ExitCode {
    let body = json!({ "error": kind, "field": field, "reason": reason });
    eprintln!("{body}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cfg = match assemble(cli) {
        Ok(c) => c,
        Err(e) => return fail(2, "config", Some(&e.field), &e.reason),
    };
    let record = match run(&cfg) {
        Ok(r) => r,
        Err(RunError::Config(e)) => return fail(2, "config", Some(&e.field), &e.reason),
        Err(RunError::Internal(e)) => return fail(3, "internal", None, &e),
    };
    let written = match &cfg.out {
        Some(path) => File::create(path)
            .map_err(anyhow::Error::from)
            .and_then(|f| write_record(&record, cfg.format, BufWriter::new(f))),
        None => write_record(&record, cfg.format, io::stdout().lock()),
    };
    if let Err(e) = written {
        return fail(3, "internal", None, &e.to_string());
    }
    if record.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
