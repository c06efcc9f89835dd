use std::io::Read;
use std::path::Path;

use clap::ValueEnum;
use serde::Deserialize;

use su2ym_core::classify::SolveOptions;
use su2ym_core::hsvd::RankTolerance;
use su2ym_core::linalg::{RealMatrix, Signature};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum FrameArg {
    Canonical,
    #[default]
    Original,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SigSpec {
    p: usize,
    q: usize,
}

/// Options accepted inside the job document; command-line flags take precedence.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobOptions {
    pub tol_rank: Option<f64>,
    pub tol_cond: Option<f64>,
    pub frame: Option<FrameArg>,
    pub oracle: Option<bool>,
    pub seed: Option<u64>,
    pub starts: Option<usize>,
    pub sample_families: Option<usize>,
    pub format: Option<Format>,
}

impl JobOptions {
    /// Fields set in `over` replace those in `self`.
    pub fn overlay(self, over: JobOptions) -> JobOptions {
        JobOptions {
            tol_rank: over.tol_rank.or(self.tol_rank),
            tol_cond: over.tol_cond.or(self.tol_cond),
            frame: over.frame.or(self.frame),
            oracle: over.oracle.or(self.oracle),
            seed: over.seed.or(self.seed),
            starts: over.starts.or(self.starts),
            sample_families: over.sample_families.or(self.sample_families),
            format: over.format.or(self.format),
        }
    }

    pub fn solve_options(&self) -> Result<SolveOptions, CliError> {
        let mut rank = RankTolerance::default();
        for (v, slot) in [(self.tol_rank, &mut rank.rank), (self.tol_cond, &mut rank.cond)] {
            if let Some(t) = v {
                if !(t > 0.0 && t.is_finite()) {
                    return Err(CliError::Input(format!("tolerance {t} must be positive")));
                }
                *slot = t;
            }
        }
        Ok(SolveOptions {
            rank,
            ..SolveOptions::default()
        })
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawJob {
    signature: SigSpec,
    current: Vec<Vec<f64>>,
    #[serde(default)]
    options: JobOptions,
}

/// A validated job.
#[derive(Debug, Clone)]
pub struct JobSpec {
    pub sig: Signature,
    pub current: RealMatrix,
    pub options: JobOptions,
}

pub fn parse_job(text: &str) -> Result<JobSpec, CliError> {
    let raw: RawJob = serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed job: {e}")))?;
    let sig = Signature::new(raw.signature.p, raw.signature.q)?;
    if raw.current.len() != sig.n() {
        return Err(CliError::Input(format!(
            "current has {} rows, signature {sig} needs {}",
            raw.current.len(),
            sig.n()
        )));
    }
    if let Some((i, r)) = raw.current.iter().enumerate().find(|(_, r)| r.len() != 3) {
        return Err(CliError::Input(format!("row {} has {} entries, expected 3", i + 1, r.len())));
    }
    let current = RealMatrix::from_rows(&raw.current)?;
    Ok(JobSpec {
        sig,
        current,
        options: raw.options,
    })
}

pub fn read_input(path: Option<&Path>) -> Result<String, CliError> {
    let mut s = String::new();
    match path {
        None => std::io::stdin().read_to_string(&mut s).map(|_| ()),
        Some(p) if p.as_os_str() == "-" => std::io::stdin().read_to_string(&mut s).map(|_| ()),
        Some(p) => std::fs::read_to_string(p).map(|t| s = t),
    }
    .map_err(|e| CliError::Input(format!("cannot read input: {e}")))?;
    Ok(s)
}
