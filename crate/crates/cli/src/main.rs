use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use zetasum_cli::config::{Spacing, TGrid};
use zetasum_cli::emit::render;
use zetasum_cli::registry::{lookup, registry};
use zetasum_cli::{all_passed, run_suite, ExperimentConfig, OutFormat, PrecisionOpt};
use zetasum_core::kernel::oracle::oracle_recompute;
use zetasum_core::{PhaseKind, SumSpec};

#[derive(Parser)]
#[command(name = "zetasum", version, about = "Evaluate zeta-type exponential sums and check their growth")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Prec {
    Standard,
    Extended,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Cmd {
    /// Run one suite and write its records
    Run {
        #[arg(long)]
        suite: Option<String>,
        /// TOML file with an experiment config; flags override it
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        t_min: Option<f64>,
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        /// comma-separated
        #[arg(long, value_delimiter = ',')]
        sigma: Option<Vec<f64>>,
        /// comma-separated
        #[arg(long, value_delimiter = ',')]
        delta: Option<Vec<f64>>,
        #[arg(long, requires = "delta3")]
        delta2: Option<f64>,
        #[arg(long, requires = "delta2")]
        delta3: Option<f64>,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, value_enum)]
        precision: Option<Prec>,
        #[arg(long)]
        seed: Option<u64>,
        /// write here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// List registered suites
    ListSuites,
    /// Recompute a single sum term by term in double-double
    Oracle {
        /// JSON: {"phase": "F1", "sigma": 0.5, "t": 100, "lo": 1, "hi": 100, "conjugate": false}
        #[arg(long)]
        spec: String,
    },
}

#[derive(Deserialize)]
struct OracleSpec {
    phase: String,
    sigma: f64,
    t: f64,
    lo: u64,
    hi: u64,
    #[serde(default)]
    conjugate: bool,
}

#[derive(Serialize)]
struct OracleOut {
    re: f64,
    im: f64,
    re_lo: f64,
    im_lo: f64,
    terms: u64,
    empty: bool,
}

enum Failure {
    Usage(anyhow::Error),
    Claims,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

fn run(cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::ListSuites => {
            for c in registry() {
                println!("{}\t{}", c.id, c.anchor);
            }
            Ok(())
        }
        Cmd::Oracle { spec } => {
            let s: OracleSpec = serde_json::from_str(&spec).context("parsing --spec")?;
            let phase = PhaseKind::parse(&s.phase).with_context(|| format!("unknown phase '{}'", s.phase))?;
            let mut spec = SumSpec::new(phase, s.sigma, s.t, s.lo, s.hi);
            spec.conjugate = s.conjugate;
            let v = oracle_recompute(&spec).map_err(anyhow::Error::from)?;
            let out = OracleOut {
                re: v.value.re.hi,
                im: v.value.im.hi,
                re_lo: v.value.re.lo,
                im_lo: v.value.im.lo,
                terms: v.terms,
                empty: v.empty,
            };
            println!("{}", serde_json::to_string(&out).context("serializing")?);
            Ok(())
        }
        Cmd::Run {
            suite,
            config,
            t_min,
            t_max,
            points,
            sigma,
            delta,
            delta2,
            delta3,
            threads,
            precision,
            seed,
            out,
            format,
        } => {
            let mut cfg = match (&config, &suite) {
                (Some(p), _) => {
                    let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                    ExperimentConfig::from_toml(&text)?
                }
                (None, Some(id)) => ExperimentConfig::for_suite(id)?,
                (None, None) => return Err(anyhow::anyhow!("give --suite or --config").into()),
            };
            if let Some(id) = suite {
                if id != cfg.suite {
                    lookup(&id)?;
                    cfg.suite = id;
                }
            }
            if t_min.is_some() || t_max.is_some() || points.is_some() {
                let base = cfg.t_grid.unwrap_or(TGrid { t_min: 1e3, t_max: 1e6, points: 10, spacing: Spacing::Log });
                cfg.t_grid = Some(TGrid {
                    t_min: t_min.unwrap_or(base.t_min),
                    t_max: t_max.unwrap_or(base.t_max),
                    points: points.unwrap_or(base.points),
                    spacing: Spacing::Log,
                });
            }
            if let Some(s) = sigma {
                cfg.sigma_list = s;
            }
            if let Some(d) = delta {
                cfg.delta_list = d;
            }
            if let (Some(d2), Some(d3)) = (delta2, delta3) {
                cfg.delta_pairs = vec![[d2, d3]];
            }
            if let Some(n) = threads {
                cfg.threads = n;
            }
            if let Some(p) = precision {
                cfg.precision = match p {
                    Prec::Standard => PrecisionOpt::Standard,
                    Prec::Extended => PrecisionOpt::Extended,
                };
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(f) = format {
                cfg.out_format = match f {
                    Format::Csv => OutFormat::Csv,
                    Format::Json => OutFormat::Json,
                };
            }
            cfg.out_path = out;
            cfg.validate()?;
            let recs = run_suite(&cfg)?;
            if cfg.out_path.is_none() {
                print!("{}", render(&recs, cfg.out_format));
            }
            for r in &recs {
                eprintln!("{} [{}]: {}", r.claim_id, r.label, r.verdict.as_str());
                for n in &r.notes {
                    eprintln!("  note: {n}");
                }
            }
            if all_passed(&recs) {
                Ok(())
            } else {
                Err(Failure::Claims)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Claims) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
