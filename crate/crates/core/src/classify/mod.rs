//! Classification of currents and enumeration of all constant potentials.
//!
//! A current is brought to its canonical form, its class `(d, x, y)` and sub-case are
//! read off the canonical values, and the matching rows of [`TABLE`] build the
//! canonical potentials. The potentials are then mapped back to the input frame.

mod reduced;
mod strength;
mod table;

use std::fmt;

pub use reduced::{certify, reduced_shapes, ReducedShape, ShapeCheck, Slot};
pub use strength::{strength_of, Strength};
pub use table::{Bound, Condition, Dims, TableRow, TABLE};

use crate::constants::b_star;
use crate::cubic::{euclid_case, hyper_case, Degeneracy, EuclidCase, FreeDomain, HyperCase};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::hsvd::{canonical_params, canonicalize_current, CanonicalForm, RankTolerance};
use crate::linalg::{pseudo_inverse_of, RealMatrix, Signature};
use crate::verify::{residual, ResidualReport};
use table::{Build, Ctx};

/// Block parameters `(d, x, y)` of a current or a potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassParams {
    pub d: usize,
    pub x: usize,
    pub y: usize,
}

impl ClassParams {
    pub const fn new(d: usize, x: usize, y: usize) -> Self {
        ClassParams { d, x, y }
    }

    pub fn rank(&self) -> usize {
        self.d + self.x + self.y
    }
}

impl fmt::Display for ClassParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.d, self.x, self.y)
    }
}

/// Predicate on the canonical values that selects table rows within a class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subcase {
    /// The class has no further split.
    None,
    Zero,
    AllEqual,
    TopPairEqual,
    BottomPairEqual,
    AllDistinct,
    /// Equal pair below the critical ratio; `special` marks the ratio `B*`.
    PairEqualBelow { special: bool },
    PairEqualAt,
    PairEqualAbove,
    DistinctAbove,
    DistinctOn,
    DistinctBelow,
    PairEqual,
    SecondLarger,
    FirstLarger,
    PairUnequal,
}

/// Class of a current together with its canonical values.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassKey {
    pub current: ClassParams,
    pub subcase: Subcase,
    /// Canonical values: the `x` block followed by the `y` block, each descending.
    pub jvals: Vec<f64>,
    /// Near-degeneracy notes.
    pub flags: Vec<String>,
}

impl ClassKey {
    /// Builds a key from canonical values, evaluating the sub-case predicate.
    pub fn from_values(d: usize, values_x: &[f64], values_y: &[f64], tol: &Degeneracy) -> Result<Self> {
        let current = ClassParams::new(d, values_x.len(), values_y.len());
        if current.rank() > 3 {
            return Err(Error::InconsistentKey(format!("class {current} has rank above 3")));
        }
        let jvals: Vec<f64> = values_x.iter().chain(values_y).copied().collect();
        if let Some(&v) = jvals.iter().find(|v| !v.is_finite() || **v <= 0.0) {
            return Err(Error::InconsistentKey(format!("canonical value {v} is not positive")));
        }
        let mut flags = Vec::new();
        let subcase = subcase_of(current, &jvals, tol, &mut flags);
        Ok(ClassKey {
            current,
            subcase,
            jvals,
            flags,
        })
    }

    fn from_canonical(canon: &CanonicalForm, tol: &Degeneracy) -> Result<Self> {
        Self::from_values(canon.d, &canon.values_x, &canon.values_y, tol)
    }

    /// Human-readable predicate, written in the indices of this class.
    pub fn subcase_label(&self) -> String {
        subcase_label(self.current, self.subcase)
    }

    /// The canonical current of this key in the given signature.
    pub fn canonical_current(&self, sig: Signature) -> Result<RealMatrix> {
        let (vx, vy) = self.jvals.split_at(self.current.x);
        Ok(CanonicalForm::new(sig, 3, vx, vy, self.current.d)?.sigma)
    }

    /// Checks that the key fits the signature.
    pub fn check(&self, sig: Signature) -> Result<()> {
        let c = self.current;
        if c.rank() > 3 || self.jvals.len() != c.x + c.y {
            return Err(Error::InconsistentKey(format!(
                "class {c} with {} values",
                self.jvals.len()
            )));
        }
        if c.x + c.d > sig.p() || c.y + c.d > sig.q() {
            return Err(Error::InconsistentKey(format!("class {c} does not fit signature {sig}")));
        }
        Ok(())
    }
}

impl fmt::Display for ClassKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.current, self.subcase_label())
    }
}

fn subcase_of(c: ClassParams, j: &[f64], tol: &Degeneracy, flags: &mut Vec<String>) -> Subcase {
    match (c.d, c.x, c.y) {
        (0, 0, 0) => Subcase::Zero,
        (0, 3, 0) | (0, 0, 3) => match euclid_case([j[0], j[1], j[2]], tol, flags) {
            EuclidCase::AllEqual => Subcase::AllEqual,
            EuclidCase::TopPairEqual => Subcase::TopPairEqual,
            EuclidCase::BottomPairEqual => Subcase::BottomPairEqual,
            _ => Subcase::AllDistinct,
        },
        (0, 2, 1) => hyper_subcase([j[0], j[1], j[2]], tol, flags),
        (0, 1, 2) => hyper_subcase([j[1], j[2], j[0]], tol, flags),
        (0, 1, 1) => {
            tol.flag(j[0], j[1], "j1 almost equal to j2", flags);
            if tol.equal(j[0], j[1]) {
                Subcase::PairEqual
            } else if j[1] > j[0] {
                Subcase::SecondLarger
            } else {
                Subcase::FirstLarger
            }
        }
        (1, 1, 1) => {
            tol.flag(j[0], j[1], "j1 almost equal to j2", flags);
            if tol.equal(j[0], j[1]) {
                Subcase::PairEqual
            } else {
                Subcase::PairUnequal
            }
        }
        _ => Subcase::None,
    }
}

fn hyper_subcase(h: [f64; 3], tol: &Degeneracy, flags: &mut Vec<String>) -> Subcase {
    match hyper_case(h, tol, flags) {
        HyperCase::PairEqualBelow => {
            let m = 0.5 * (h[0] + h[1]);
            let r = Degeneracy::rel(h[2] / m, b_star());
            if r > tol.near && r <= 1e3 * tol.near {
                flags.push(format!("near-degenerate: ratio close to B* (relative gap {r:.3e})"));
            }
            Subcase::PairEqualBelow { special: r <= tol.near }
        }
        HyperCase::PairEqualAt => Subcase::PairEqualAt,
        HyperCase::PairEqualAbove => Subcase::PairEqualAbove,
        HyperCase::DistinctAbove => Subcase::DistinctAbove,
        HyperCase::DistinctOn => Subcase::DistinctOn,
        _ => Subcase::DistinctBelow,
    }
}

fn subcase_label(c: ClassParams, s: Subcase) -> String {
    // (0,1,2) solves the hyper system with the values rotated, so its labels rotate too.
    let (a, b, k) = if (c.d, c.x, c.y) == (0, 1, 2) {
        ("j2", "j3", "j1")
    } else {
        ("j1", "j2", "j3")
    };
    match s {
        Subcase::None => "any".into(),
        Subcase::Zero => "zero".into(),
        Subcase::AllEqual => "j1=j2=j3".into(),
        Subcase::TopPairEqual => "j1=j2>j3".into(),
        Subcase::BottomPairEqual => "j1>j2=j3".into(),
        Subcase::AllDistinct => "all different".into(),
        Subcase::PairEqualBelow { special } => {
            let op = if special { "=" } else { "!=" };
            format!("{a}={b}<{k}/(2sqrt2), {k}/{a}{op}B*")
        }
        Subcase::PairEqualAt => format!("{a}={b}={k}/(2sqrt2)"),
        Subcase::PairEqualAbove => format!("{a}={b}>{k}/(2sqrt2)"),
        Subcase::DistinctAbove => format!("{a}!={b}, {k}^(2/3)>{a}^(2/3)+{b}^(2/3)"),
        Subcase::DistinctOn => format!("{a}!={b}, {k}^(2/3)={a}^(2/3)+{b}^(2/3)"),
        Subcase::DistinctBelow => format!("{a}!={b}, {k}^(2/3)<{a}^(2/3)+{b}^(2/3)"),
        Subcase::PairEqual => "j1=j2".into(),
        Subcase::SecondLarger => "j2>j1".into(),
        Subcase::FirstLarger => "j1>j2".into(),
        Subcase::PairUnequal => "j1!=j2".into(),
    }
}

/// Tolerances for a full solve.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolveOptions {
    pub rank: RankTolerance,
    pub degeneracy: Degeneracy,
}

/// Coordinate frame of a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    Canonical,
    Original,
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Frame::Canonical => "canonical",
            Frame::Original => "original",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    pub a: RealMatrix,
    pub params: ClassParams,
    pub frame: Frame,
}

/// One isolated solution.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub potential: Potential,
    /// The same solution in the canonical frame.
    pub canonical: RealMatrix,
    pub strength: Strength,
    pub residual: ResidualReport,
    pub branch: String,
    pub row: &'static str,
}

/// Shapes of the one-parameter families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    /// A single timelike column, `J = 0`.
    Timelike,
    /// A single spacelike column, `J = 0`.
    Spacelike,
    NullTimelike,
    NullSpacelike,
    DoubleNullTimelike,
    DoubleNullSpacelike,
}

impl FamilyKind {
    pub fn parameter(self) -> &'static str {
        "a1"
    }

    pub fn domain(self) -> FreeDomain {
        FreeDomain::RealNonzero
    }

    pub fn generator(self) -> &'static str {
        match self {
            FamilyKind::Timelike => "Psi[1][1] = a1",
            FamilyKind::Spacelike => "Psi[p+1][1] = a1",
            FamilyKind::NullTimelike => "Psi[1][1] = Psi[p+1][1] = -1/a1^2, Psi[2][2] = a1",
            FamilyKind::NullSpacelike => "Psi[1][1] = Psi[p+1][1] = 1/a1^2, Psi[p+2][2] = a1",
            FamilyKind::DoubleNullTimelike => {
                "Psi[1][1] = Psi[p+1][1] = Psi[2][2] = Psi[p+2][2] = -1/a1^2, Psi[3][3] = a1"
            }
            FamilyKind::DoubleNullSpacelike => {
                "Psi[1][1] = Psi[p+1][1] = Psi[2][2] = Psi[p+2][2] = 1/a1^2, Psi[p+3][3] = a1"
            }
        }
    }

    /// Member of the family in the canonical frame.
    pub fn canonical_member(self, t: f64, sig: Signature) -> Result<RealMatrix> {
        if t == 0.0 || !t.is_finite() {
            return Err(Error::InconsistentKey(format!("family parameter {t} outside R\\{{0}}")));
        }
        let p = sig.p();
        let mut a = RealMatrix::zeros(sig.n(), 3);
        let nulls = |a: &mut RealMatrix, k: usize, beta: f64| {
            for c in 0..k {
                a[(c, c)] = beta;
                a[(p + c, c)] = beta;
            }
        };
        match self {
            FamilyKind::Timelike => a[(0, 0)] = t,
            FamilyKind::Spacelike => a[(p, 0)] = t,
            FamilyKind::NullTimelike => {
                nulls(&mut a, 1, -1.0 / (t * t));
                a[(1, 1)] = t;
            }
            FamilyKind::NullSpacelike => {
                nulls(&mut a, 1, 1.0 / (t * t));
                a[(p + 1, 1)] = t;
            }
            FamilyKind::DoubleNullTimelike => {
                nulls(&mut a, 2, -1.0 / (t * t));
                a[(2, 2)] = t;
            }
            FamilyKind::DoubleNullSpacelike => {
                nulls(&mut a, 2, 1.0 / (t * t));
                a[(p + 2, 2)] = t;
            }
        }
        Ok(a)
    }
}

/// A one-parameter family of solutions, kept symbolic.
#[derive(Debug, Clone, PartialEq)]
pub struct Family {
    pub row: &'static str,
    pub kind: FamilyKind,
    pub params: ClassParams,
    pub frame: Frame,
    sig: Signature,
    // Left and right factors mapping canonical members into `frame`.
    transform: Option<(RealMatrix, RealMatrix)>,
}

impl Family {
    pub fn parameter(&self) -> &'static str {
        self.kind.parameter()
    }

    pub fn domain(&self) -> FreeDomain {
        self.kind.domain()
    }

    pub fn description(&self) -> String {
        let mut s = format!("{}, {} in {}", self.kind.generator(), self.parameter(), self.domain());
        if self.transform.is_some() {
            s.push_str(", mapped by A = Q^-1 Psi P^-1");
        }
        s
    }

    /// Member at parameter `t`, in this family's frame.
    pub fn member(&self, t: f64) -> Result<RealMatrix> {
        let psi = self.kind.canonical_member(t, self.sig)?;
        match &self.transform {
            None => Ok(psi),
            Some((l, r)) => l.matmul(&psi)?.matmul(r),
        }
    }
}

/// Number of isolated solutions, or the marker for families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountLabel {
    Empty,
    Finite(usize),
    Infinite,
}

impl fmt::Display for CountLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountLabel::Empty => f.write_str("0"),
            CountLabel::Finite(n) => write!(f, "{n}"),
            CountLabel::Infinite => f.write_str("∞"),
        }
    }
}

/// Every solution of one current.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionReport {
    pub sig: Signature,
    pub class: ClassKey,
    pub frame: Frame,
    /// The current in `frame`.
    pub current: RealMatrix,
    pub exact: Vec<Solution>,
    pub families: Vec<Family>,
    /// Identifiers of the table rows that produced this report.
    pub rows: Vec<&'static str>,
    pub notes: Vec<String>,
    pub warnings: Vec<String>,
}

impl SolutionReport {
    pub fn count_label(&self) -> CountLabel {
        if !self.families.is_empty() {
            CountLabel::Infinite
        } else if self.exact.is_empty() {
            CountLabel::Empty
        } else {
            CountLabel::Finite(self.exact.len())
        }
    }

    /// Largest residual over the isolated solutions.
    pub fn max_residual(&self) -> f64 {
        self.exact.iter().map(|s| s.residual.max_abs).fold(0.0, f64::max)
    }

    /// Number of distinct `F^2` values among the isolated solutions.
    pub fn distinct_f2(&self, rel: f64) -> usize {
        let mut v: Vec<f64> = self.exact.iter().map(|s| s.strength.f2).collect();
        v.sort_by(f64::total_cmp);
        let scale = v.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        let mut count = 0;
        let mut last = f64::NEG_INFINITY;
        for x in v {
            if x - last > rel * scale {
                count += 1;
                last = x;
            }
        }
        count
    }
}

const STABILIZER_NOTE: &str = "solutions are listed up to the stabilizer of the canonical current: \
for Q1 in O(p,q) and P1 in SO(3) with Q1 Sigma P1 = Sigma, Q1^-1 Psi P1^-1 is again a solution";

/// Class of a current.
pub fn class_of(j: &RealMatrix, sig: Signature, opts: &SolveOptions) -> Result<ClassKey> {
    let cc = canonicalize_current(j, sig, &opts.rank)?;
    ClassKey::from_canonical(&cc.decomposition.canon, &opts.degeneracy)
}

/// Table rows that apply to a key.
pub fn matching_rows(key: &ClassKey, sig: Signature) -> Vec<&'static TableRow> {
    TABLE
        .iter()
        .filter(|r| r.matches(key.current, key.subcase, sig))
        .collect()
}

/// All solutions for the canonical current of `key`, in the canonical frame.
pub fn enumerate_canonical(key: &ClassKey, sig: Signature, opts: &SolveOptions) -> Result<SolutionReport> {
    key.check(sig)?;
    let current = key.canonical_current(sig)?;
    let rows = matching_rows(key, sig);
    if rows.is_empty() {
        return Err(Error::InconsistentKey(format!(
            "no table row for class {} ({}) at signature {sig}",
            key.current,
            key.subcase_label()
        )));
    }
    let cx = Ctx {
        j: &key.jvals,
        sig,
        tol: &opts.degeneracy,
    };
    let jscale = current.max_abs().max(1.0);
    let mut exact = Vec::new();
    let mut families = Vec::new();
    let mut warnings = Vec::new();
    for row in &rows {
        match row.build {
            Build::Empty => {}
            Build::Exact(f) => {
                for e in f(&cx)? {
                    let res = residual(&e.a, &current, sig)?;
                    if res.max_abs > 1e-9 * jscale {
                        warnings.push(format!(
                            "row {}: branch {} has residual {:.3e}",
                            row.id, e.branch, res.max_abs
                        ));
                    }
                    let params = match canonical_params(&e.a, sig, &opts.rank) {
                        Ok((x, y, d)) => ClassParams::new(d, x, y),
                        Err(_) => row.potential.unwrap_or(ClassParams::new(0, 0, 0)),
                    };
                    exact.push(Solution {
                        strength: strength_of(&e.a, sig)?,
                        canonical: e.a.clone(),
                        potential: Potential {
                            a: e.a,
                            params,
                            frame: Frame::Canonical,
                        },
                        residual: res,
                        branch: e.branch,
                        row: row.id,
                    });
                }
            }
            Build::Family(kind) => families.push(Family {
                row: row.id,
                kind,
                params: row.potential.unwrap_or(ClassParams::new(0, 0, 0)),
                frame: Frame::Canonical,
                sig,
                transform: None,
            }),
        }
    }
    let mut notes = vec![STABILIZER_NOTE.to_string()];
    notes.extend(key.flags.iter().cloned());
    Ok(SolutionReport {
        sig,
        class: key.clone(),
        frame: Frame::Canonical,
        current,
        exact,
        families,
        rows: rows.iter().map(|r| r.id).collect(),
        notes,
        warnings,
    })
}

/// Maps a canonical report to the frame with `J = Q^-1 Sigma P^-1`.
pub fn to_original_frame(report: &SolutionReport, q: &RealMatrix, p: &RealMatrix) -> Result<SolutionReport> {
    let qi = pseudo_inverse_of(q, report.sig)?;
    let pi = p.transpose();
    let j = qi.matmul(&report.current)?.matmul(&pi)?;
    transform_report(report, &qi, &pi, j)
}

fn transform_report(report: &SolutionReport, qi: &RealMatrix, pi: &RealMatrix, j: RealMatrix) -> Result<SolutionReport> {
    if report.frame != Frame::Canonical {
        return Err(Error::InconsistentKey("report is not in the canonical frame".into()));
    }
    let sig = report.sig;
    let jscale = j.max_abs().max(1.0);
    let mut warnings = report.warnings.clone();
    let mut exact = Vec::with_capacity(report.exact.len());
    for s in &report.exact {
        let a = qi.matmul(&s.canonical)?.matmul(pi)?;
        let res = residual(&a, &j, sig)?;
        let bound = (10.0 * s.residual.max_abs).max(1e-9 * jscale);
        if res.max_abs > bound {
            warnings.push(format!(
                "row {}: branch {} has original-frame residual {:.3e}",
                s.row, s.branch, res.max_abs
            ));
        }
        exact.push(Solution {
            strength: strength_of(&a, sig)?,
            canonical: s.canonical.clone(),
            potential: Potential {
                a,
                params: s.potential.params,
                frame: Frame::Original,
            },
            residual: res,
            branch: s.branch.clone(),
            row: s.row,
        });
    }
    let families = report
        .families
        .iter()
        .map(|f| Family {
            frame: Frame::Original,
            transform: Some((qi.clone(), pi.clone())),
            ..f.clone()
        })
        .collect();
    Ok(SolutionReport {
        sig,
        class: report.class.clone(),
        frame: Frame::Original,
        current: j,
        exact,
        families,
        rows: report.rows.clone(),
        notes: report.notes.clone(),
        warnings,
    })
}

/// Canonical form and the frame change of a current.
#[derive(Debug, Clone, PartialEq)]
pub struct Canonicalized {
    pub key: ClassKey,
    pub q: RealMatrix,
    pub p: RealMatrix,
    pub warnings: Vec<String>,
}

pub fn canonicalize(j: &RealMatrix, sig: Signature, opts: &SolveOptions) -> Result<Canonicalized> {
    let cc = canonicalize_current(j, sig, &opts.rank)?;
    let key = ClassKey::from_canonical(&cc.decomposition.canon, &opts.degeneracy)?;
    Ok(Canonicalized {
        key,
        q: cc.q,
        p: cc.p,
        warnings: cc.decomposition.condition_warnings,
    })
}

/// All solutions of one current, in the canonical frame.
pub fn solve_canonical(j: &RealMatrix, sig: Signature, opts: &SolveOptions) -> Result<(Canonicalized, SolutionReport)> {
    let c = canonicalize(j, sig, opts)?;
    let mut report = enumerate_canonical(&c.key, sig, opts)?;
    report.warnings.extend(c.warnings.iter().cloned());
    Ok((c, report))
}

/// All solutions of one current, in the input frame.
pub fn solve_all(j: &RealMatrix, sig: Signature, opts: &SolveOptions) -> Result<SolutionReport> {
    let (c, report) = solve_canonical(j, sig, opts)?;
    let qi = pseudo_inverse_of(&c.q, sig)?;
    let pi = c.p.transpose();
    transform_report(&report, &qi, &pi, j.clone())
}

/// Solves many currents; results keep the input order.
pub fn solve_batch(
    items: &[(RealMatrix, Signature)],
    opts: &SolveOptions,
    execution: Execution,
) -> Vec<Result<SolutionReport>> {
    execution.map(items, |(j, sig)| solve_all(j, *sig, opts))
}
