//! Residuals of the full system and a multi-start Newton oracle for the reduced systems.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cubic::{PairSolutions, SolutionSet, SystemKind};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::linalg::{RealMatrix, Signature};

/// Residuals `[A_mu, [A^mu, A^nu]] - J^nu` for every `(nu, k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub max_abs: f64,
    /// Row-major over `(nu, k)`, `3 n` entries.
    pub per_equation: Vec<f64>,
}

fn cross(u: &[f64], v: &[f64]) -> [f64; 3] {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

fn check_shape(m: &RealMatrix, sig: Signature, what: &str) -> Result<()> {
    if m.rows() != sig.n() || m.cols() != 3 {
        return Err(Error::Dimension(format!(
            "{what} must be {}x3 for signature {sig}, got {}x{}",
            sig.n(),
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// Left-hand side `sum_mu eta_mu A^mu x (A^mu x A^nu)` of the constant system.
pub fn yang_mills_lhs(a: &RealMatrix, sig: Signature) -> Result<RealMatrix> {
    check_shape(a, sig, "potential")?;
    let n = sig.n();
    let mut out = RealMatrix::zeros(n, 3);
    for nu in 0..n {
        let mut acc = [0.0; 3];
        for mu in 0..n {
            if mu == nu {
                continue;
            }
            let inner = cross(a.row(mu), a.row(nu));
            let outer = cross(a.row(mu), &inner);
            for k in 0..3 {
                acc[k] += sig.eta(mu) * outer[k];
            }
        }
        for k in 0..3 {
            out[(nu, k)] = acc[k];
        }
    }
    Ok(out)
}

/// Evaluates the residual of potential `a` against current `j`.
pub fn residual(a: &RealMatrix, j: &RealMatrix, sig: Signature) -> Result<ResidualReport> {
    check_shape(j, sig, "current")?;
    let lhs = yang_mills_lhs(a, sig)?;
    let per_equation: Vec<f64> = lhs.as_slice().iter().zip(j.as_slice()).map(|(l, r)| l - r).collect();
    let max_abs = per_equation.iter().fold(0.0, |m: f64, x| m.max(x.abs()));
    Ok(ResidualReport { max_abs, per_equation })
}

/// Settings for [`oracle_solve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub seed: u64,
    pub n_starts: usize,
    /// Accepted residual, relative to `max(1, max j)`.
    pub tol: f64,
    pub execution: Execution,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            seed: 0x5eed,
            n_starts: 256,
            tol: 1e-10,
            execution: Execution::default(),
        }
    }
}

pub const MIN_STARTS: usize = 64;

/// Deduplicated, lexicographically sorted roots found by the oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub system: SystemKind,
    pub jvals: Vec<f64>,
    pub roots: Vec<Vec<f64>>,
    pub starts_used: usize,
    pub seed: u64,
}

// The reduced systems, written out independently of the solver module. Pair
// systems are padded with a trivial third equation so everything is 3x3.
type V3 = [f64; 3];

fn eval(system: SystemKind, b: &V3, j: &V3) -> V3 {
    let sq = |x: f64| x * x;
    match system {
        SystemKind::Pair => [b[0] * sq(b[1]) - j[0], b[1] * sq(b[0]) - j[1], b[2]],
        SystemKind::Euclid => [
            b[0] * (sq(b[1]) + sq(b[2])) - j[0],
            b[1] * (sq(b[2]) + sq(b[0])) - j[1],
            b[2] * (sq(b[0]) + sq(b[1])) - j[2],
        ],
        SystemKind::Hyper => [
            b[0] * (sq(b[1]) - sq(b[2])) - j[0],
            b[1] * (sq(b[0]) - sq(b[2])) - j[1],
            b[2] * (sq(b[0]) + sq(b[1])) - j[2],
        ],
    }
}

fn jac(system: SystemKind, b: &V3) -> [V3; 3] {
    let [x, y, z] = *b;
    match system {
        SystemKind::Pair => [[y * y, 2.0 * x * y, 0.0], [2.0 * x * y, x * x, 0.0], [0.0, 0.0, 1.0]],
        SystemKind::Euclid => [
            [y * y + z * z, 2.0 * x * y, 2.0 * x * z],
            [2.0 * x * y, z * z + x * x, 2.0 * y * z],
            [2.0 * x * z, 2.0 * y * z, x * x + y * y],
        ],
        SystemKind::Hyper => [
            [y * y - z * z, 2.0 * x * y, -2.0 * x * z],
            [2.0 * x * y, x * x - z * z, -2.0 * y * z],
            [2.0 * x * z, 2.0 * y * z, x * x + y * y],
        ],
    }
}

fn det3(m: &[V3; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Newton step by Cramer's rule; `None` if the Jacobian is numerically singular.
fn newton_step(system: SystemKind, b: &V3, f: &V3) -> Option<V3> {
    let m = jac(system, b);
    let det = det3(&m);
    let scale = m.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
    if !det.is_finite() || det.abs() <= 1e-300 || det.abs() <= f64::EPSILON * scale.powi(3) * 1e-6 {
        return None;
    }
    let mut s = [0.0; 3];
    for (c, sc) in s.iter_mut().enumerate() {
        let mut mc = m;
        for r in 0..3 {
            mc[r][c] = f[r];
        }
        *sc = det3(&mc) / det;
    }
    Some(s)
}

fn norm2(v: &V3) -> f64 {
    v.iter().map(|x| x * x).sum()
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m: f64, x| m.max(x.abs()))
}

fn sub_scaled(b: &V3, s: &V3, lambda: f64) -> V3 {
    [b[0] - lambda * s[0], b[1] - lambda * s[1], b[2] - lambda * s[2]]
}

/// Damped Newton from one start; `None` if the start does not converge.
fn run_start(system: SystemKind, j: &V3, start: &V3, tol: f64) -> Option<V3> {
    let mut b = *start;
    let mut f = eval(system, &b, j);
    let mut converged = false;
    for _ in 0..200 {
        if inf_norm(&f) <= tol {
            converged = true;
            break;
        }
        let step = newton_step(system, &b, &f)?;
        let base = norm2(&f);
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let cand = sub_scaled(&b, &step, lambda);
            let fc = eval(system, &cand, j);
            if norm2(&fc) < base {
                b = cand;
                f = fc;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            return None;
        }
    }
    if !converged {
        return None;
    }
    // keep refining while the residual still drops; matters near double roots
    for _ in 0..80 {
        let Some(step) = newton_step(system, &b, &f) else { break };
        let cand = sub_scaled(&b, &step, 1.0);
        let fc = eval(system, &cand, j);
        if norm2(&fc) >= norm2(&f) {
            break;
        }
        b = cand;
        f = fc;
    }
    Some(b)
}

/// Multi-start damped Newton search for all roots of a reduced system.
///
/// Starts are four grid points per axis on `[-r, r]` (`r = 2 max(1, max_j^(1/3))`)
/// followed by seeded uniform points in the same cube. Roots closer than
/// `1e-6 * r` are merged; the result does not depend on the execution mode.
pub fn oracle_solve(system: SystemKind, jvals: &[f64], cfg: &OracleConfig) -> Result<OracleResult> {
    if cfg.n_starts < MIN_STARTS {
        return Err(Error::TooFewStarts {
            min: MIN_STARTS,
            got: cfg.n_starts,
        });
    }
    let dim = system.dim();
    if jvals.len() != dim {
        return Err(Error::Dimension(format!(
            "{} system needs {dim} values, got {}",
            system.name(),
            jvals.len()
        )));
    }
    if !(cfg.tol > 0.0) {
        return Err(Error::InvalidTolerance(cfg.tol));
    }
    let jmax = jvals.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let r = 2.0 * jmax.cbrt().max(1.0);
    let grid = [-0.75 * r, -0.25 * r, 0.25 * r, 0.75 * r];
    let mut starts: Vec<Vec<f64>> = Vec::with_capacity(cfg.n_starts);
    let total = 4usize.pow(dim as u32);
    for idx in 0..total.min(cfg.n_starts) {
        let mut v = Vec::with_capacity(dim);
        let mut k = idx;
        for _ in 0..dim {
            v.push(grid[k % 4]);
            k /= 4;
        }
        starts.push(v);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    while starts.len() < cfg.n_starts {
        starts.push((0..dim).map(|_| rng.random_range(-r..r)).collect());
    }
    let tol = cfg.tol * jmax.max(1.0);
    let pad = |v: &[f64]| -> V3 {
        let mut out = [0.0; 3];
        out[..v.len()].copy_from_slice(v);
        out
    };
    let j3 = pad(jvals);
    let found = cfg.execution.map(&starts, |s| run_start(system, &j3, &pad(s), tol));
    let mut hits: Vec<Vec<f64>> = found.into_iter().flatten().map(|b| b[..dim].to_vec()).collect();
    hits.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let radius = 1e-6 * r;
    let mut roots: Vec<Vec<f64>> = Vec::new();
    for h in hits {
        let dup = roots
            .iter()
            .any(|k| k.iter().zip(&h).all(|(a, b)| (a - b).abs() <= radius));
        if !dup {
            roots.push(h);
        }
    }
    Ok(OracleResult {
        system,
        jvals: jvals.to_vec(),
        roots,
        starts_used: starts.len(),
        seed: cfg.seed,
    })
}

/// Anything that yields isolated solution points for [`cross_check`].
pub trait IsolatedPoints {
    fn points(&self) -> Vec<Vec<f64>>;
    fn warnings(&self) -> Vec<String> {
        Vec::new()
    }
}

impl IsolatedPoints for SolutionSet {
    fn points(&self) -> Vec<Vec<f64>> {
        self.solutions.iter().map(|s| s.b.to_vec()).collect()
    }

    fn warnings(&self) -> Vec<String> {
        self.near_degenerate.clone()
    }
}

impl IsolatedPoints for PairSolutions {
    fn points(&self) -> Vec<Vec<f64>> {
        self.solution.iter().map(|s| s.to_vec()).collect()
    }
}

impl IsolatedPoints for [Vec<f64>] {
    fn points(&self) -> Vec<Vec<f64>> {
        self.to_vec()
    }
}

impl IsolatedPoints for Vec<Vec<f64>> {
    fn points(&self) -> Vec<Vec<f64>> {
        self.clone()
    }
}

/// Outcome of comparing enumerated solutions with oracle roots.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchReport {
    /// `(enumerated index, oracle index, max-abs distance)`.
    pub matched: Vec<(usize, usize, f64)>,
    pub missing_from_oracle: Vec<Vec<f64>>,
    pub extra_oracle_roots: Vec<Vec<f64>>,
    pub warnings: Vec<String>,
}

impl MatchReport {
    pub fn is_match(&self) -> bool {
        self.missing_from_oracle.is_empty() && self.extra_oracle_roots.is_empty()
    }

    pub fn count(&self) -> usize {
        self.matched.len()
    }
}

impl fmt::Display for MatchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_match() {
            write!(f, "match, count {}", self.count())?;
        } else {
            write!(f, "discrepancy:")?;
            for p in &self.missing_from_oracle {
                write!(f, " enumerated {p:?} not found by oracle;")?;
            }
            for p in &self.extra_oracle_roots {
                write!(f, " extra oracle root {p:?};")?;
            }
        }
        for w in &self.warnings {
            write!(f, " [{w}]")?;
        }
        Ok(())
    }
}

/// Unmatched oracle roots this close to a matched point are treated as copies of it.
pub const CLUSTER_RADIUS: f64 = 1e-3;

/// Pairs enumerated points with oracle roots one to one within `tol * max(1, |point|)`.
pub fn cross_check<S: IsolatedPoints + ?Sized>(enumerated: &S, oracle: &OracleResult, tol: f64) -> MatchReport {
    let pts = enumerated.points();
    let mut used = vec![false; oracle.roots.len()];
    let mut matched = Vec::new();
    let mut missing = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        let scale = inf_norm(p).max(1.0);
        let best = oracle
            .roots
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, r)| (k, r.iter().zip(p).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((k, d)) if d <= tol * scale => {
                used[k] = true;
                matched.push((i, k, d));
            }
            _ => missing.push(p.clone()),
        }
    }
    // Newton converges slowly onto multiple roots and leaves a cluster of copies.
    let mut warnings = enumerated.warnings();
    let mut extra = Vec::new();
    for (r, _) in oracle.roots.iter().zip(&used).filter(|(_, &u)| !u) {
        let near = matched.iter().any(|&(i, _, _)| {
            let p = &pts[i];
            let d = r.iter().zip(p).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            d <= CLUSTER_RADIUS * inf_norm(p).max(1.0)
        });
        if near {
            warnings.push(format!("oracle root {r:?} merged into a multiple root"));
        } else {
            extra.push(r.clone());
        }
    }
    MatchReport {
        matched,
        missing_from_oracle: missing,
        extra_oracle_roots: extra,
        warnings,
    }
}
