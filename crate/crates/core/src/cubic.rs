//! Real cubic roots and closed-form solutions of the reduced systems
//!
//! * pair:   `b1 b2^2 = j1`, `b2 b1^2 = j2`
//! * euclid: `b1 (b2^2 + b3^2) = j1` and cyclic
//! * hyper:  `b1 (b2^2 - b3^2) = j1`, `b2 (b1^2 - b3^2) = j2`, `b3 (b1^2 + b2^2) = j3`

use std::f64::consts::{PI, SQRT_2};
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::RealMatrix;

/// Relative tolerances for degeneracy loci.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Degeneracy {
    /// Inputs this close to a locus are treated as lying on it.
    pub snap: f64,
    /// Inputs this close to a locus are flagged.
    pub near: f64,
}

impl Default for Degeneracy {
    fn default() -> Self {
        Degeneracy {
            snap: 1e-9,
            near: 1e-6,
        }
    }
}

impl Degeneracy {
    /// Relative distance between two nonnegative quantities.
    pub fn rel(a: f64, b: f64) -> f64 {
        let s = a.abs().max(b.abs());
        if s == 0.0 {
            0.0
        } else {
            (a - b).abs() / s
        }
    }

    pub(crate) fn equal(&self, a: f64, b: f64) -> bool {
        Self::rel(a, b) <= self.snap
    }

    pub(crate) fn flag(&self, a: f64, b: f64, what: &str, flags: &mut Vec<String>) {
        let r = Self::rel(a, b);
        if r > 0.0 && r <= self.near {
            flags.push(format!("near-degenerate: {what} (relative gap {r:.3e})"));
        }
    }
}

/// Real roots of `c3 t^3 + c2 t^2 + c1 t + c0`, ascending, repeated roots collapsed.
pub fn solve_cubic_real(c3: f64, c2: f64, c1: f64, c0: f64) -> Result<Vec<f64>> {
    let scale = c3.abs().max(c2.abs()).max(c1.abs()).max(c0.abs());
    if scale == 0.0 {
        return Err(Error::ZeroPolynomial);
    }
    let small = |c: f64| c.abs() <= 1e-15 * scale;
    let mut roots = if !small(c3) {
        cubic_roots(c2 / c3, c1 / c3, c0 / c3)
    } else if !small(c2) {
        quadratic_roots(c2, c1, c0)
    } else if !small(c1) {
        vec![-c0 / c1]
    } else {
        Vec::new()
    };
    let poly = |t: f64| ((c3 * t + c2) * t + c1) * t + c0;
    let dpoly = |t: f64| (3.0 * c3 * t + 2.0 * c2) * t + c1;
    for r in roots.iter_mut() {
        let d = dpoly(*r);
        if d != 0.0 {
            let cand = *r - poly(*r) / d;
            if cand.is_finite() && poly(cand).abs() <= poly(*r).abs() {
                *r = cand;
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-10 * a.abs().max(b.abs()).max(1.0));
    Ok(roots)
}

fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let disc = b * b - 4.0 * a * c;
    let mag = b * b + (4.0 * a * c).abs();
    if disc < -1e-14 * mag {
        return Vec::new();
    }
    if disc.abs() <= 1e-14 * mag {
        return vec![-b / (2.0 * a)];
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    if q == 0.0 {
        return vec![0.0];
    }
    vec![q / a, c / q]
}

/// Roots of the monic cubic `t^3 + a t^2 + b t + c`.
fn cubic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let disc = 4.0 * p * p * p + 27.0 * q * q;
    let mag = 4.0 * p.abs().powi(3) + 27.0 * q * q;
    let us: Vec<f64> = if mag == 0.0 {
        vec![0.0]
    } else if disc.abs() <= 1e-12 * mag {
        if p.abs() <= 1e-300 {
            vec![0.0]
        } else {
            vec![3.0 * q / p, -1.5 * q / p]
        }
    } else if disc < 0.0 {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (2.0 * p) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        (0..3).map(|k| m * (theta - 2.0 * PI * k as f64 / 3.0).cos()).collect()
    } else {
        let sq = (q * q / 4.0 + p * p * p / 27.0).sqrt();
        let s = (-q / 2.0 - q.signum() * sq).cbrt();
        let s = if q == 0.0 { (sq).cbrt() } else { s };
        if s == 0.0 {
            vec![0.0]
        } else {
            vec![s - p / (3.0 * s)]
        }
    };
    us.into_iter().map(|u| u - shift).collect()
}

/// One of the three reduced systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemKind {
    Pair,
    Euclid,
    Hyper,
}

impl SystemKind {
    pub fn dim(self) -> usize {
        match self {
            SystemKind::Pair => 2,
            _ => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SystemKind::Pair => "pair",
            SystemKind::Euclid => "euclid",
            SystemKind::Hyper => "hyper",
        }
    }

    /// Left-hand side minus right-hand side.
    pub fn residual(self, b: &[f64], j: &[f64]) -> Vec<f64> {
        match self {
            SystemKind::Pair => vec![b[0] * b[1] * b[1] - j[0], b[1] * b[0] * b[0] - j[1]],
            SystemKind::Euclid => vec![
                b[0] * (b[1] * b[1] + b[2] * b[2]) - j[0],
                b[1] * (b[0] * b[0] + b[2] * b[2]) - j[1],
                b[2] * (b[0] * b[0] + b[1] * b[1]) - j[2],
            ],
            SystemKind::Hyper => vec![
                b[0] * (b[1] * b[1] - b[2] * b[2]) - j[0],
                b[1] * (b[0] * b[0] - b[2] * b[2]) - j[1],
                b[2] * (b[0] * b[0] + b[1] * b[1]) - j[2],
            ],
        }
    }

    fn jacobian(self, b: &[f64]) -> RealMatrix {
        let rows: Vec<Vec<f64>> = match self {
            SystemKind::Pair => vec![
                vec![b[1] * b[1], 2.0 * b[0] * b[1]],
                vec![2.0 * b[0] * b[1], b[0] * b[0]],
            ],
            SystemKind::Euclid => vec![
                vec![b[1] * b[1] + b[2] * b[2], 2.0 * b[0] * b[1], 2.0 * b[0] * b[2]],
                vec![2.0 * b[0] * b[1], b[0] * b[0] + b[2] * b[2], 2.0 * b[1] * b[2]],
                vec![2.0 * b[0] * b[2], 2.0 * b[1] * b[2], b[0] * b[0] + b[1] * b[1]],
            ],
            SystemKind::Hyper => vec![
                vec![b[1] * b[1] - b[2] * b[2], 2.0 * b[0] * b[1], -2.0 * b[0] * b[2]],
                vec![2.0 * b[0] * b[1], b[0] * b[0] - b[2] * b[2], -2.0 * b[1] * b[2]],
                vec![2.0 * b[0] * b[2], 2.0 * b[1] * b[2], b[0] * b[0] + b[1] * b[1]],
            ],
        };
        RealMatrix::from_rows(&rows).unwrap_or_else(|_| RealMatrix::zeros(self.dim(), self.dim()))
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Newton refinement that only accepts steps reducing the residual.
fn polish(kind: SystemKind, b: &mut [f64], j: &[f64]) {
    let mut res = max_abs(&kind.residual(b, j));
    for _ in 0..6 {
        if res == 0.0 {
            break;
        }
        let f = kind.residual(b, j);
        let rhs = match RealMatrix::from_row_major(f.len(), 1, f) {
            Ok(m) => m,
            Err(_) => break,
        };
        let step = match kind.jacobian(b).solve(&rhs) {
            Ok(s) => s,
            Err(_) => break,
        };
        let cand: Vec<f64> = b.iter().enumerate().map(|(i, x)| x - step[(i, 0)]).collect();
        let r = max_abs(&kind.residual(&cand, j));
        if !(r < res) {
            break;
        }
        b.copy_from_slice(&cand);
        res = r;
    }
}

/// Which component a one-parameter family leaves free.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreeDomain {
    Real,
    RealNonzero,
}

impl fmt::Display for FreeDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FreeDomain::Real => write!(f, "R"),
            FreeDomain::RealNonzero => write!(f, "R\\{{0}}"),
        }
    }
}

/// One-parameter family: component `free` arbitrary, the others zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionFamily {
    pub free: usize,
    pub domain: FreeDomain,
    pub dim: usize,
}

impl SolutionFamily {
    pub fn member(&self, t: f64) -> Vec<f64> {
        let mut b = vec![0.0; self.dim];
        b[self.free] = t;
        b
    }
}

/// An isolated solution of a triple system.
#[derive(Debug, Clone, PartialEq)]
pub struct TripleSolution {
    pub b: [f64; 3],
    /// `(b1 b2 b3)^(2/3)`, present when no component vanishes.
    pub k: Option<f64>,
    pub branch: String,
    /// Solutions sharing a group form a conserved-quantity pair.
    pub pair_group: Option<u8>,
}

impl TripleSolution {
    fn new(b: [f64; 3], branch: impl Into<String>, pair_group: Option<u8>) -> Self {
        let prod = b[0] * b[1] * b[2];
        let k = (prod != 0.0).then(|| prod.abs().cbrt().powi(2));
        TripleSolution {
            b,
            k,
            branch: branch.into(),
            pair_group,
        }
    }
}

/// Solutions and families of a triple system.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSet {
    pub kind: SystemKind,
    pub jvals: [f64; 3],
    pub case: String,
    pub solutions: Vec<TripleSolution>,
    pub families: Vec<SolutionFamily>,
    pub near_degenerate: Vec<String>,
}

impl SolutionSet {
    fn new(kind: SystemKind, j: [f64; 3], case: impl Into<String>) -> Self {
        SolutionSet {
            kind,
            jvals: j,
            case: case.into(),
            solutions: Vec::new(),
            families: Vec::new(),
            near_degenerate: Vec::new(),
        }
    }

    fn push(&mut self, mut b: [f64; 3], branch: impl Into<String>, group: Option<u8>) {
        polish(self.kind, &mut b, &self.jvals);
        self.solutions.push(TripleSolution::new(b, branch, group));
    }

    /// Index pairs of solutions linked by a conserved quantity.
    /// A solution alone in its group is paired with itself.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut groups: Vec<u8> = self.solutions.iter().filter_map(|s| s.pair_group).collect();
        groups.sort_unstable();
        groups.dedup();
        for g in groups {
            let idx: Vec<usize> = (0..self.solutions.len())
                .filter(|&i| self.solutions[i].pair_group == Some(g))
                .collect();
            match idx.as_slice() {
                [a] => out.push((*a, *a)),
                [a, b] => out.push((*a, *b)),
                _ => {}
            }
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty() && self.families.is_empty()
    }
}

/// Solutions of the pair system.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSolutions {
    pub jvals: [f64; 2],
    pub solution: Option<[f64; 2]>,
    pub families: Vec<SolutionFamily>,
}

fn check_nonnegative(system: &'static str, j: &[f64]) -> Result<()> {
    for &value in j {
        if !(value >= 0.0) || !value.is_finite() {
            return Err(Error::NegativeInput { system, value });
        }
    }
    Ok(())
}

fn families(dim: usize, n: usize) -> Vec<SolutionFamily> {
    (0..n)
        .map(|free| SolutionFamily {
            free,
            domain: FreeDomain::Real,
            dim,
        })
        .collect()
}

/// Solves `b1 b2^2 = j1`, `b2 b1^2 = j2` for nonnegative `j`.
pub fn solve_pair(j1: f64, j2: f64) -> Result<PairSolutions> {
    check_nonnegative("pair", &[j1, j2])?;
    let mut out = PairSolutions {
        jvals: [j1, j2],
        solution: None,
        families: Vec::new(),
    };
    match (j1 == 0.0, j2 == 0.0) {
        (true, true) => out.families = families(2, 2),
        (false, false) => out.solution = Some([(j2 * j2 / j1).cbrt(), (j1 * j1 / j2).cbrt()]),
        _ => {}
    }
    Ok(out)
}

/// Case labels of the euclid system for descending inputs `a >= b >= c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EuclidCase {
    AllZero,
    OneNonzero,
    OneZero,
    AllEqual,
    /// The two larger values agree.
    TopPairEqual,
    /// The two smaller values agree.
    BottomPairEqual,
    AllDistinct,
}

/// Classifies euclid inputs; the system is symmetric so only the sorted values matter.
pub fn euclid_case(j: [f64; 3], tol: &Degeneracy, flags: &mut Vec<String>) -> EuclidCase {
    let mut s = j;
    s.sort_by(|a, b| b.total_cmp(a));
    let [a, b, c] = s;
    let zero = |x: f64| x <= tol.snap * a;
    let zeros = [a, b, c].iter().filter(|&&x| zero(x)).count();
    match zeros {
        3 => return EuclidCase::AllZero,
        2 => return EuclidCase::OneNonzero,
        1 => return EuclidCase::OneZero,
        _ => {}
    }
    if c / a <= tol.near {
        flags.push(format!("near-degenerate: smallest value {c:e} is almost zero"));
    }
    if tol.equal(a, c) {
        return EuclidCase::AllEqual;
    }
    let top = tol.equal(a, b);
    let bottom = tol.equal(b, c);
    let case = match (top, bottom) {
        (true, true) => {
            if Degeneracy::rel(a, b) <= Degeneracy::rel(b, c) {
                EuclidCase::TopPairEqual
            } else {
                EuclidCase::BottomPairEqual
            }
        }
        (true, false) => EuclidCase::TopPairEqual,
        (false, true) => EuclidCase::BottomPairEqual,
        (false, false) => EuclidCase::AllDistinct,
    };
    tol.flag(a, c, "all three values almost equal", flags);
    if case != EuclidCase::TopPairEqual {
        tol.flag(a, b, "two larger values almost equal", flags);
    }
    if case != EuclidCase::BottomPairEqual {
        tol.flag(b, c, "two smaller values almost equal", flags);
    }
    case
}

/// Solves the euclid system for nonnegative `j`.
pub fn solve_euclid_triple(j1: f64, j2: f64, j3: f64) -> Result<SolutionSet> {
    solve_euclid_triple_with(j1, j2, j3, &Degeneracy::default())
}

pub fn solve_euclid_triple_with(j1: f64, j2: f64, j3: f64, tol: &Degeneracy) -> Result<SolutionSet> {
    check_nonnegative("euclid", &[j1, j2, j3])?;
    let j = [j1, j2, j3];
    let mut flags = Vec::new();
    let case = euclid_case(j, tol, &mut flags);
    // order[k] is the input index holding the k-th largest value
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| j[b].total_cmp(&j[a]).then(a.cmp(&b)));
    let [a, b, c] = [j[order[0]], j[order[1]], j[order[2]]];
    let unsort = |s: [f64; 3]| {
        let mut out = [0.0; 3];
        for k in 0..3 {
            out[order[k]] = s[k];
        }
        out
    };
    let mut set = SolutionSet::new(SystemKind::Euclid, j, format!("{case:?}"));
    set.near_degenerate = flags;
    match case {
        EuclidCase::AllZero => set.families = families(3, 3),
        EuclidCase::OneNonzero => {}
        EuclidCase::OneZero => {
            let z = (0..3).find(|&i| j[i] <= tol.snap * a).unwrap_or(order[2]);
            let (u, v) = ((z + 1) % 3, (z + 2) % 3);
            let mut s = [0.0; 3];
            s[u] = (j[v] * j[v] / j[u]).cbrt();
            s[v] = (j[u] * j[u] / j[v]).cbrt();
            set.push(s, "unique", None);
        }
        EuclidCase::AllEqual => {
            let m = ((a + b + c) / 3.0 / 2.0).cbrt();
            set.push([m, m, m], "symmetric", Some(0));
        }
        EuclidCase::TopPairEqual => {
            // b1 = b2 for the equal pair, b3 = z b1 for the smaller value
            let m = 0.5 * (a + b);
            let r = (m * m - c * c).max(0.0).sqrt();
            for (sgn, z) in [("+", (m + r) / c), ("-", (m - r) / c)] {
                let b1 = (c / (2.0 * z)).cbrt();
                set.push(unsort([b1, b1, z * b1]), format!("z{sgn}"), Some(0));
            }
        }
        EuclidCase::BottomPairEqual => {
            let m = 0.5 * (b + c);
            let s = (a + (a * a + 8.0 * m * m).sqrt()) / (2.0 * m);
            let r = (s * s - 4.0).max(0.0).sqrt();
            let b3 = (m / s).cbrt();
            for (sgn, w) in [("+", (s + r) / 2.0), ("-", (s - r) / 2.0)] {
                set.push(unsort([b3, b3 / w, w * b3]), format!("w{sgn}"), Some(0));
            }
        }
        EuclidCase::AllDistinct => {
            // the most separated pair carries the y-substitution
            let (p1, p2, p3) = (a, c, b);
            let roots = solve_cubic_real(p1 * p2, -(p1 * p1 + p2 * p2 + p3 * p3), 0.0, 4.0 * p3 * p3)?;
            let t0 = *roots.last().ok_or_else(|| Error::ConservedUndefined("resolvent has no real root".into()))?;
            let r = (t0 * t0 - 4.0).max(0.0).sqrt();
            for (sgn, y) in [("+", (t0 + r) / 2.0), ("-", (t0 - r) / 2.0)] {
                let z = (y * (p1 - p2 * y) / (p2 - p1 * y)).max(0.0).sqrt();
                let b1 = (p3 / (t0 * y * z)).cbrt();
                // sorted slots: a <- p1, b <- p3, c <- p2
                set.push(unsort([b1, z * b1, y * b1]), format!("y{sgn}"), Some(0));
            }
        }
    }
    Ok(set)
}

/// Case labels of the hyper system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HyperCase {
    AllZero,
    ThirdOnly,
    Empty,
    ThirdZero,
    FirstZero,
    SecondZero,
    PairEqualBelow,
    PairEqualAt,
    PairEqualAbove,
    DistinctAbove,
    DistinctOn,
    DistinctBelow,
}

pub fn hyper_case(j: [f64; 3], tol: &Degeneracy, flags: &mut Vec<String>) -> HyperCase {
    let [j1, j2, j3] = j;
    let top = j1.max(j2).max(j3);
    let zero = |x: f64| x <= tol.snap * top;
    match (zero(j1), zero(j2), zero(j3)) {
        (true, true, true) => return HyperCase::AllZero,
        (true, true, false) => return HyperCase::ThirdOnly,
        (true, false, true) | (false, true, true) => return HyperCase::Empty,
        (false, false, true) => return HyperCase::ThirdZero,
        (true, false, false) => {
            tol.flag(j3, j2, "j3 almost equal to j2", flags);
            return HyperCase::FirstZero;
        }
        (false, true, false) => {
            tol.flag(j3, j1, "j3 almost equal to j1", flags);
            return HyperCase::SecondZero;
        }
        _ => {}
    }
    for (v, name) in [(j1, "j1"), (j2, "j2"), (j3, "j3")] {
        if v / top <= tol.near {
            flags.push(format!("near-degenerate: {name} = {v:e} is almost zero"));
        }
    }
    if tol.equal(j1, j2) {
        let m = 0.5 * (j1 + j2);
        let crit = j3 / (2.0 * SQRT_2);
        tol.flag(m, crit, "j1 = j2 almost equal to j3/(2 sqrt 2)", flags);
        if tol.equal(m, crit) {
            HyperCase::PairEqualAt
        } else if m < crit {
            HyperCase::PairEqualBelow
        } else {
            HyperCase::PairEqualAbove
        }
    } else {
        tol.flag(j1, j2, "j1 almost equal to j2", flags);
        let lhs = j3.powf(2.0 / 3.0);
        let rhs = j1.powf(2.0 / 3.0) + j2.powf(2.0 / 3.0);
        tol.flag(lhs, rhs, "j3^(2/3) almost equal to j1^(2/3) + j2^(2/3)", flags);
        if tol.equal(lhs, rhs) {
            HyperCase::DistinctOn
        } else if lhs > rhs {
            HyperCase::DistinctAbove
        } else {
            HyperCase::DistinctBelow
        }
    }
}

/// Solves the hyper system for nonnegative `j`.
pub fn solve_hyper_triple(j1: f64, j2: f64, j3: f64) -> Result<SolutionSet> {
    solve_hyper_triple_with(j1, j2, j3, &Degeneracy::default())
}

pub fn solve_hyper_triple_with(j1: f64, j2: f64, j3: f64, tol: &Degeneracy) -> Result<SolutionSet> {
    check_nonnegative("hyper", &[j1, j2, j3])?;
    let j = [j1, j2, j3];
    let mut flags = Vec::new();
    let case = hyper_case(j, tol, &mut flags);
    let mut set = SolutionSet::new(SystemKind::Hyper, j, format!("{case:?}"));
    set.near_degenerate = flags;
    match case {
        HyperCase::AllZero => set.families = families(3, 3),
        HyperCase::Empty => {}
        HyperCase::ThirdOnly => {
            let c = (j3 / 2.0).cbrt();
            set.push([c, c, c], "++", Some(0));
            set.push([-c, -c, c], "--", Some(0));
            set.push([-c, c, c], "-+", Some(1));
            set.push([c, -c, c], "+-", Some(1));
        }
        HyperCase::ThirdZero => {
            set.push([(j2 * j2 / j1).cbrt(), (j1 * j1 / j2).cbrt(), 0.0], "unique", None);
        }
        HyperCase::FirstZero => first_zero(&mut set, j2, j3, tol, false),
        HyperCase::SecondZero => first_zero(&mut set, j1, j3, tol, true),
        HyperCase::PairEqualBelow | HyperCase::PairEqualAt | HyperCase::PairEqualAbove => {
            let m = 0.5 * (j1 + j2);
            let r = (m * m + j3 * j3).sqrt();
            for (sgn, z) in [("+", (r - m) / j3), ("-", (-m - r) / j3)] {
                let b1 = (j3 / (2.0 * z)).cbrt();
                set.push([b1, b1, z * b1], format!("b{sgn}"), Some(0));
            }
            if case != HyperCase::PairEqualAbove {
                let disc = if case == HyperCase::PairEqualAt {
                    0.0
                } else {
                    (j3 * j3 - 8.0 * m * m).max(0.0).sqrt()
                };
                let mut ss = vec![("+", (j3 + disc) / (2.0 * m))];
                if case == HyperCase::PairEqualBelow {
                    ss.push(("-", (j3 - disc) / (2.0 * m)));
                }
                for (g, (ssgn, s)) in ss.into_iter().enumerate() {
                    let c3 = (m / s).cbrt();
                    let r = (s * s + 4.0).sqrt();
                    for (wsgn, w) in [("+", (s + r) / 2.0), ("-", (s - r) / 2.0)] {
                        set.push([c3 / w, -w * c3, c3], format!("c{ssgn}{wsgn}"), Some(1 + g as u8));
                    }
                }
            }
        }
        HyperCase::DistinctAbove | HyperCase::DistinctOn | HyperCase::DistinctBelow => {
            let c2 = j3 * j3 - j1 * j1 - j2 * j2;
            let c0 = -4.0 * j3 * j3;
            let c3 = j1 * j2;
            let roots = solve_cubic_real(c3, c2, 0.0, c0)?;
            let t1 = *roots
                .last()
                .ok_or_else(|| Error::ConservedUndefined("resolvent has no real root".into()))?;
            let mut ts = vec![t1];
            match case {
                HyperCase::DistinctOn => ts.push((-c2 / c3 - t1) / 2.0),
                HyperCase::DistinctAbove => {
                    let neg: Vec<f64> = roots.iter().copied().filter(|&t| t < -2.0).collect();
                    if neg.len() >= 2 {
                        ts.extend(neg.iter().take(2));
                    } else {
                        set.near_degenerate
                            .push("near-degenerate: resolvent negative roots coalesced".into());
                        ts.push((-c2 / c3 - t1) / 2.0);
                    }
                }
                _ => {}
            }
            let a = j2 / j1;
            for (k, &t) in ts.iter().enumerate() {
                let r = (t * t - 4.0).max(0.0).sqrt();
                for (sgn, y) in [("+", (t + r) / 2.0), ("-", (t - r) / 2.0)] {
                    let z2 = (y * (a * y - 1.0) / (a - y)).max(0.0);
                    let lambda = (y * (1.0 - y * y) / (a - y)).signum();
                    let z = lambda * z2.sqrt();
                    let b1 = (j3 / (t * y * z)).cbrt();
                    set.push([b1, y * b1, z * b1], format!("d{sgn}{}", k + 1), Some(k as u8));
                }
            }
        }
    }
    Ok(set)
}

/// The `j1 = 0` case; `swapped` handles `j2 = 0` by exchanging the first two slots.
fn first_zero(set: &mut SolutionSet, jb: f64, j3: f64, tol: &Degeneracy, swapped: bool) {
    let map = |b: [f64; 3]| if swapped { [b[1], b[0], b[2]] } else { b };
    set.push(map([0.0, -(j3 * j3 / jb).cbrt(), (jb * jb / j3).cbrt()]), "unique", None);
    if j3 > jb && !tol.equal(j3, jb) {
        let p = ((j3 - jb) / 2.0).cbrt();
        let m = ((j3 + jb) / 2.0).cbrt();
        let e1 = ((j3 + jb) / (2.0 * p)).sqrt();
        let e2 = ((j3 - jb) / (2.0 * m)).sqrt();
        set.push(map([e1, p, p]), "e1+", Some(0));
        set.push(map([-e2, -m, m]), "e2-", Some(0));
        set.push(map([e2, -m, m]), "e2+", Some(1));
        set.push(map([-e1, p, p]), "e1-", Some(1));
    }
}

/// Conserved quantity of a solution pair.
///
/// Euclid: `K = b1 b1' = b2 b2' = b3 b3'`. Hyper: `K = -b1 b1' = -b2 b2' = b3 b3'`.
/// Errors if a component vanishes or the three products disagree beyond `tol` (relative).
pub fn conserved_k(a: &TripleSolution, b: &TripleSolution, kind: SystemKind, tol: f64) -> Result<f64> {
    let signs = match kind {
        SystemKind::Euclid => [1.0, 1.0, 1.0],
        SystemKind::Hyper => [-1.0, -1.0, 1.0],
        SystemKind::Pair => {
            return Err(Error::ConservedUndefined("pair system has no conserved quantity".into()))
        }
    };
    if a.b.iter().chain(&b.b).any(|&x| x == 0.0) {
        return Err(Error::ConservedUndefined("a component vanishes".into()));
    }
    let prods: Vec<f64> = (0..3).map(|i| signs[i] * a.b[i] * b.b[i]).collect();
    let k = prods[2];
    let spread = prods.iter().fold(0.0f64, |m, p| m.max((p - k).abs()));
    if spread > tol * k.abs().max(1.0) {
        return Err(Error::ConservedUndefined(format!(
            "component products disagree: {prods:?}"
        )));
    }
    Ok(k)
}
