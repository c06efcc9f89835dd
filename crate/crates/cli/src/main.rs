//! `su2ym`: enumerate constant SU(2) Yang-Mills potentials for a given current.
//!
//! Exit status: 0 on success, 2 on invalid input, 3 on numerical failure or an
//! oracle discrepancy.

mod job;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use su2ym_core::atlas::{atlas, atlas_minima};
use su2ym_core::classify::{certify, solve_all, solve_canonical, SolveOptions};
use su2ym_core::linalg::Signature;
use su2ym_core::verify::OracleConfig;
use su2ym_core::Execution;

use job::{parse_job, read_input, Format, FrameArg, JobOptions};
use render::Extras;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] su2ym_core::Error),
    #[error("oracle disagrees with the enumeration")]
    Discrepancy,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Core(_) => 2,
            CliError::Discrepancy => 3,
        }
    }
}

#[derive(Parser)]
#[command(name = "su2ym", version, about = "Constant SU(2) Yang-Mills solutions in R^{p,q}")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve one job document (JSON with `signature`, `current`, `options`).
    Solve(SolveArgs),
    /// Sweep the dispatch table at representative values.
    Atlas(AtlasArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Job file, or `-` for stdin.
    input: Option<PathBuf>,
    /// Relative rank tolerance of the decomposition.
    #[arg(long)]
    tol_rank: Option<f64>,
    /// Conditioning threshold for warnings.
    #[arg(long)]
    tol_cond: Option<f64>,
    #[arg(long, value_enum)]
    frame: Option<FrameArg>,
    /// Cross-check the enumeration with the multi-start oracle.
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    seed: Option<u64>,
    /// Oracle start count.
    #[arg(long)]
    starts: Option<usize>,
    /// Number of members to sample from each family.
    #[arg(long)]
    sample_families: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AtlasFormat {
    Tsv,
    Json,
}

#[derive(Args)]
struct AtlasArgs {
    /// Signatures as `p,q;p,q;...`. Without it every row runs at its minimal signature.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long, value_enum, default_value = "tsv")]
    format: AtlasFormat,
    /// Run sequentially.
    #[arg(long)]
    sequential: bool,
}

fn parse_grid(s: &str) -> Result<Vec<Signature>, CliError> {
    s.split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (p, q) = t
                .split_once(',')
                .ok_or_else(|| CliError::Input(format!("signature `{t}` is not `p,q`")))?;
            let parse = |v: &str| {
                v.trim()
                    .parse::<usize>()
                    .map_err(|_| CliError::Input(format!("signature `{t}` is not `p,q`")))
            };
            Ok(Signature::new(parse(p)?, parse(q)?)?)
        })
        .collect()
}

fn run_solve(args: SolveArgs) -> Result<(), CliError> {
    let text = read_input(args.input.as_deref())?;
    let job = parse_job(&text)?;
    let flags = JobOptions {
        tol_rank: args.tol_rank,
        tol_cond: args.tol_cond,
        frame: args.frame,
        oracle: args.oracle.then_some(true),
        seed: args.seed,
        starts: args.starts,
        sample_families: args.sample_families,
        format: args.format,
    };
    let o = job.options.clone().overlay(flags);
    let opts: SolveOptions = o.solve_options()?;
    let frame = o.frame.unwrap_or_default();
    let (canonical, report) = match frame {
        FrameArg::Canonical => {
            let (c, r) = solve_canonical(&job.current, job.sig, &opts)?;
            (Some(c), r)
        }
        FrameArg::Original => (None, solve_all(&job.current, job.sig, &opts)?),
    };
    let checks = if o.oracle.unwrap_or(false) {
        let mut cfg = OracleConfig::default();
        if let Some(s) = o.seed {
            cfg.seed = s;
        }
        if let Some(n) = o.starts {
            cfg.n_starts = n;
        }
        Some(certify(&report, &cfg, 1e-7)?)
    } else {
        None
    };
    let n = o.sample_families.unwrap_or(0);
    let extras = Extras {
        samples: report.families.iter().map(|f| render::sample_family(f, &report, n)).collect(),
        oracle: checks.as_deref(),
        transform: canonical.as_ref().map(|c| (&c.q, &c.p)),
    };
    match o.format.unwrap_or_default() {
        Format::Text => print!("{}", render::solve_text(&report, &extras)),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&render::solve_json(&report, &extras)).expect("json values serialize")
        ),
    }
    if checks.is_some_and(|c| c.iter().any(|c| !c.report.is_match())) {
        return Err(CliError::Discrepancy);
    }
    Ok(())
}

fn run_atlas(args: AtlasArgs) -> Result<(), CliError> {
    let opts = SolveOptions::default();
    let exec = if args.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let entries = match &args.grid {
        Some(g) => atlas(&parse_grid(g)?, &opts, exec)?,
        None => atlas_minima(&opts, exec)?,
    };
    match args.format {
        AtlasFormat::Tsv => print!("{}", render::atlas_tsv(&entries)),
        AtlasFormat::Json => println!(
            "{}",
            serde_json::to_string_pretty(&render::atlas_json(&entries)).expect("json values serialize")
        ),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Solve(a) => run_solve(a),
        Cmd::Atlas(a) => run_atlas(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("su2ym: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
