//! Reduced systems behind each class, used to certify enumerations against the oracle.

use std::fmt;

use super::{ClassKey, SolutionReport};
use crate::cubic::SystemKind;
use crate::error::Result;
use crate::linalg::{RealMatrix, Signature};
use crate::verify::{cross_check, oracle_solve, MatchReport, OracleConfig, OracleResult};

/// Canonical entry `Psi[row][col] = sign * b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Slot {
    pub row: usize,
    pub col: usize,
    pub sign: f64,
}

const fn slot(row: usize, col: usize, sign: f64) -> Slot {
    Slot { row, col, sign }
}

/// A sparsity pattern of canonical potentials on which the full system reduces to
/// one of the three small systems.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedShape {
    pub system: SystemKind,
    pub jvals: Vec<f64>,
    pub slots: Vec<Slot>,
}

impl ReducedShape {
    /// Reduced unknowns of `psi`, or `None` if `psi` has support outside the slots.
    pub fn extract(&self, psi: &RealMatrix) -> Option<Vec<f64>> {
        let tol = 1e-12 * psi.max_abs().max(1.0);
        for r in 0..psi.rows() {
            for c in 0..psi.cols() {
                let inside = self.slots.iter().any(|s| s.row == r && s.col == c);
                if !inside && psi[(r, c)].abs() > tol {
                    return None;
                }
            }
        }
        Some(self.slots.iter().map(|s| s.sign * psi[(s.row, s.col)]).collect())
    }

    pub fn embed(&self, b: &[f64], sig: Signature) -> RealMatrix {
        let mut a = RealMatrix::zeros(sig.n(), 3);
        for (s, v) in self.slots.iter().zip(b) {
            a[(s.row, s.col)] = s.sign * v;
        }
        a
    }
}

impl fmt::Display for ReducedShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} j={:?} on", self.system.name(), self.jvals)?;
        for s in &self.slots {
            let sign = if s.sign < 0.0 { "-" } else { "+" };
            write!(f, " {sign}[{},{}]", s.row + 1, s.col + 1)?;
        }
        Ok(())
    }
}

/// Reduced systems whose isolated roots must all appear among the enumerated solutions.
pub fn reduced_shapes(key: &ClassKey, sig: Signature) -> Vec<ReducedShape> {
    let (p, q) = (sig.p(), sig.q());
    let j = &key.jvals;
    let c = key.current;
    let shape = |system, jvals: Vec<f64>, slots: Vec<Slot>| ReducedShape { system, jvals, slots };
    let euclid_p = |jv: Vec<f64>| shape(SystemKind::Euclid, jv, (0..3).map(|i| slot(i, i, -1.0)).collect());
    let euclid_q = |jv: Vec<f64>| shape(SystemKind::Euclid, jv, (0..3).map(|i| slot(p + i, i, 1.0)).collect());
    let hyper_p = |jv: Vec<f64>| {
        shape(
            SystemKind::Hyper,
            jv,
            vec![slot(0, 0, -1.0), slot(1, 1, -1.0), slot(p, 2, -1.0)],
        )
    };
    let hyper_q = |jv: Vec<f64>| {
        shape(
            SystemKind::Hyper,
            jv,
            vec![slot(p, 0, 1.0), slot(p + 1, 1, 1.0), slot(0, 2, 1.0)],
        )
    };
    let rotated_q = |jv: Vec<f64>| {
        shape(
            SystemKind::Hyper,
            jv,
            vec![slot(p, 1, 1.0), slot(p + 1, 2, 1.0), slot(0, 0, 1.0)],
        )
    };
    let mut out = Vec::new();
    match (c.d, c.x, c.y) {
        (0, 3, 0) => out.push(euclid_p(j.clone())),
        (0, 0, 3) => out.push(euclid_q(j.clone())),
        (0, 2, 1) => out.push(hyper_p(j.clone())),
        (0, 1, 2) => out.push(rotated_q(vec![j[1], j[2], j[0]])),
        (0, 2, 0) => {
            out.push(hyper_p(vec![j[0], j[1], 0.0]));
            if p >= 3 {
                out.push(euclid_p(vec![j[0], j[1], 0.0]));
            }
        }
        (0, 0, 2) => {
            out.push(hyper_q(vec![j[0], j[1], 0.0]));
            if q >= 3 {
                out.push(euclid_q(vec![j[0], j[1], 0.0]));
            }
        }
        (0, 1, 1) => {
            out.push(shape(SystemKind::Pair, j.clone(), vec![slot(0, 0, 1.0), slot(p, 1, -1.0)]));
            if p >= 2 {
                out.push(shape(
                    SystemKind::Hyper,
                    vec![0.0, j[0], j[1]],
                    vec![slot(1, 2, 1.0), slot(0, 0, -1.0), slot(p, 1, -1.0)],
                ));
            }
            if q >= 2 {
                out.push(shape(
                    SystemKind::Hyper,
                    vec![0.0, j[1], j[0]],
                    vec![slot(p + 1, 2, 1.0), slot(p, 1, 1.0), slot(0, 0, 1.0)],
                ));
            }
        }
        (0, 1, 0) => {
            if q >= 2 {
                out.push(rotated_q(vec![0.0, 0.0, j[0]]));
            }
            if p >= 2 {
                out.push(hyper_p(vec![j[0], 0.0, 0.0]));
            }
        }
        (0, 0, 1) => {
            if p >= 2 {
                out.push(shape(
                    SystemKind::Hyper,
                    vec![0.0, 0.0, j[0]],
                    vec![slot(0, 1, 1.0), slot(1, 2, 1.0), slot(p, 0, -1.0)],
                ));
            }
            if q >= 2 {
                out.push(hyper_q(vec![j[0], 0.0, 0.0]));
            }
        }
        _ => {}
    }
    out
}

/// Oracle comparison on one reduced shape.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeCheck {
    pub shape: ReducedShape,
    pub oracle: OracleResult,
    pub report: MatchReport,
}

/// Compares the enumerated solutions that live on each reduced shape with the oracle roots.
pub fn certify(report: &SolutionReport, cfg: &OracleConfig, tol: f64) -> Result<Vec<ShapeCheck>> {
    reduced_shapes(&report.class, report.sig)
        .into_iter()
        .map(|shape| {
            let pts: Vec<Vec<f64>> = report.exact.iter().filter_map(|s| shape.extract(&s.canonical)).collect();
            let oracle = oracle_solve(shape.system, &shape.jvals, cfg)?;
            let m = cross_check(&pts, &oracle, tol);
            Ok(ShapeCheck {
                shape,
                oracle,
                report: m,
            })
        })
        .collect()
}
