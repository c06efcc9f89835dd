//! Dispatch table: one row per (current class, condition, potential class) combination.

use std::fmt;

use super::{ClassParams, FamilyKind, Subcase};
use crate::cubic::{solve_euclid_triple_with, solve_hyper_triple_with, solve_pair, Degeneracy};
use crate::error::Result;
use crate::linalg::{RealMatrix, Signature};

/// Constraint on one signature count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    AtLeast(usize),
    Exactly(usize),
}

impl Bound {
    pub fn admits(self, v: usize) -> bool {
        match self {
            Bound::AtLeast(k) => v >= k,
            Bound::Exactly(k) => v == k,
        }
    }
}

/// Signature constraint of a row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dims {
    pub p: Bound,
    pub q: Bound,
}

impl Dims {
    pub fn admits(&self, sig: Signature) -> bool {
        self.p.admits(sig.p()) && self.q.admits(sig.q())
    }
}

impl fmt::Display for Dims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one = |name: &str, b: Bound| match b {
            Bound::AtLeast(k) => format!("{name}>={k}"),
            Bound::Exactly(k) => format!("{name}={k}"),
        };
        write!(f, "{},{}", one("p", self.p), one("q", self.q))
    }
}

/// Extra predicate a row places on the canonical values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    Any,
    Is(Subcase),
}

impl Condition {
    pub fn admits(&self, s: Subcase) -> bool {
        match self {
            Condition::Any => true,
            Condition::Is(c) => *c == s,
        }
    }
}

pub(crate) struct Ctx<'a> {
    pub j: &'a [f64],
    pub sig: Signature,
    pub tol: &'a Degeneracy,
}

pub(crate) struct Exact {
    pub a: RealMatrix,
    pub branch: String,
}

type Builder = fn(&Ctx) -> Result<Vec<Exact>>;

#[derive(Clone, Copy)]
pub(crate) enum Build {
    Empty,
    Exact(Builder),
    Family(FamilyKind),
}

/// One row of the dispatch table.
#[derive(Clone, Copy)]
pub struct TableRow {
    pub id: &'static str,
    pub current: ClassParams,
    pub condition: Condition,
    /// Class of the emitted potentials; `None` for rows without solutions.
    pub potential: Option<ClassParams>,
    pub dims: Dims,
    pub(crate) build: Build,
}

impl TableRow {
    pub fn is_empty(&self) -> bool {
        matches!(self.build, Build::Empty)
    }

    pub fn is_family(&self) -> bool {
        matches!(self.build, Build::Family(_))
    }

    pub fn matches(&self, current: ClassParams, subcase: Subcase, sig: Signature) -> bool {
        self.current == current && self.condition.admits(subcase) && self.dims.admits(sig)
    }
}

impl PartialEq for TableRow {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl fmt::Debug for TableRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TableRow")
            .field("id", &self.id)
            .field("current", &self.current)
            .field("condition", &self.condition)
            .field("potential", &self.potential)
            .field("dims", &self.dims)
            .finish()
    }
}

const fn c(d: usize, x: usize, y: usize) -> ClassParams {
    ClassParams { d, x, y }
}

const fn dims(p: Bound, q: Bound) -> Dims {
    Dims { p, q }
}

use Bound::{AtLeast as Ge, Exactly as Ex};
use Condition::{Any, Is};

const fn row(
    id: &'static str,
    current: ClassParams,
    condition: Condition,
    potential: Option<ClassParams>,
    dims: Dims,
    build: Build,
) -> TableRow {
    TableRow {
        id,
        current,
        condition,
        potential,
        dims,
        build,
    }
}

/// All rows, grouped by current class.
pub static TABLE: [TableRow; 53] = [
    // full rank, all values in one block
    row("030-equal", c(0, 3, 0), Is(Subcase::AllEqual), Some(c(0, 3, 0)), dims(Ge(3), Ge(1)), Build::Exact(euclid_p)),
    row("030-top-pair", c(0, 3, 0), Is(Subcase::TopPairEqual), Some(c(0, 3, 0)), dims(Ge(3), Ge(1)), Build::Exact(euclid_p)),
    row("030-bottom-pair", c(0, 3, 0), Is(Subcase::BottomPairEqual), Some(c(0, 3, 0)), dims(Ge(3), Ge(1)), Build::Exact(euclid_p)),
    row("030-distinct", c(0, 3, 0), Is(Subcase::AllDistinct), Some(c(0, 3, 0)), dims(Ge(3), Ge(1)), Build::Exact(euclid_p)),
    row("003-equal", c(0, 0, 3), Is(Subcase::AllEqual), Some(c(0, 0, 3)), dims(Ge(1), Ge(3)), Build::Exact(euclid_q)),
    row("003-top-pair", c(0, 0, 3), Is(Subcase::TopPairEqual), Some(c(0, 0, 3)), dims(Ge(1), Ge(3)), Build::Exact(euclid_q)),
    row("003-bottom-pair", c(0, 0, 3), Is(Subcase::BottomPairEqual), Some(c(0, 0, 3)), dims(Ge(1), Ge(3)), Build::Exact(euclid_q)),
    row("003-distinct", c(0, 0, 3), Is(Subcase::AllDistinct), Some(c(0, 0, 3)), dims(Ge(1), Ge(3)), Build::Exact(euclid_q)),
    // full rank, mixed blocks
    row("021-pair-below-special", c(0, 2, 1), Is(Subcase::PairEqualBelow { special: true }), Some(c(0, 2, 1)), dims(Ge(2), Ge(1)), Build::Exact(hyper_21)),
    row("021-pair-below", c(0, 2, 1), Is(Subcase::PairEqualBelow { special: false }), Some(c(0, 2, 1)), dims(Ge(2), Ge(1)), Build::Exact(hyper_21)),
    row("021-pair-at", c(0, 2, 1), Is(Subcase::PairEqualAt), Some(c(0, 2, 1)), dims(Ge(2), Ge(1)), Build::Exact(hyper_21)),
    row("021-pair-above", c(0, 2, 1), Is(Subcase::PairEqualAbove), Some(c(0, 2, 1)), dims(Ge(2), Ge(1)), Build::Exact(hyper_21)),
    row("021-distinct-above", c(0, 2, 1), Is(Subcase::DistinctAbove), Some(c(0, 2, 1)), dims(Ge(2), Ge(1)), Build::Exact(hyper_21)),
    row("021-distinct-on", c(0, 2, 1), Is(Subcase::DistinctOn), Some(c(0, 2, 1)), dims(Ge(2), Ge(1)), Build::Exact(hyper_21)),
    row("021-distinct-below", c(0, 2, 1), Is(Subcase::DistinctBelow), Some(c(0, 2, 1)), dims(Ge(2), Ge(1)), Build::Exact(hyper_21)),
    row("012-pair-below-special", c(0, 1, 2), Is(Subcase::PairEqualBelow { special: true }), Some(c(0, 1, 2)), dims(Ge(1), Ge(2)), Build::Exact(hyper_12)),
    row("012-pair-below", c(0, 1, 2), Is(Subcase::PairEqualBelow { special: false }), Some(c(0, 1, 2)), dims(Ge(1), Ge(2)), Build::Exact(hyper_12)),
    row("012-pair-at", c(0, 1, 2), Is(Subcase::PairEqualAt), Some(c(0, 1, 2)), dims(Ge(1), Ge(2)), Build::Exact(hyper_12)),
    row("012-pair-above", c(0, 1, 2), Is(Subcase::PairEqualAbove), Some(c(0, 1, 2)), dims(Ge(1), Ge(2)), Build::Exact(hyper_12)),
    row("012-distinct-above", c(0, 1, 2), Is(Subcase::DistinctAbove), Some(c(0, 1, 2)), dims(Ge(1), Ge(2)), Build::Exact(hyper_12)),
    row("012-distinct-on", c(0, 1, 2), Is(Subcase::DistinctOn), Some(c(0, 1, 2)), dims(Ge(1), Ge(2)), Build::Exact(hyper_12)),
    row("012-distinct-below", c(0, 1, 2), Is(Subcase::DistinctBelow), Some(c(0, 1, 2)), dims(Ge(1), Ge(2)), Build::Exact(hyper_12)),
    // rank below three, no null block
    row("020", c(0, 2, 0), Any, Some(c(0, 2, 0)), dims(Ge(2), Ge(1)), Build::Exact(pair_20)),
    row("002", c(0, 0, 2), Any, Some(c(0, 0, 2)), dims(Ge(1), Ge(2)), Build::Exact(pair_02)),
    row("011", c(0, 1, 1), Any, Some(c(0, 1, 1)), dims(Ge(1), Ge(1)), Build::Exact(pair_11)),
    row("011-equal", c(0, 1, 1), Is(Subcase::PairEqual), Some(c(1, 1, 1)), dims(Ge(2), Ge(2)), Build::Exact(null_11)),
    row("011-second-larger", c(0, 1, 1), Is(Subcase::SecondLarger), Some(c(0, 2, 1)), dims(Ge(2), Ge(1)), Build::Exact(extra_11_p)),
    row("011-first-larger", c(0, 1, 1), Is(Subcase::FirstLarger), Some(c(0, 1, 2)), dims(Ge(1), Ge(2)), Build::Exact(extra_11_q)),
    row("010-q1", c(0, 1, 0), Any, None, dims(Ge(1), Ex(1)), Build::Empty),
    row("010", c(0, 1, 0), Any, Some(c(0, 1, 2)), dims(Ge(1), Ge(2)), Build::Exact(hyper_10)),
    row("001-p1", c(0, 0, 1), Any, None, dims(Ex(1), Ge(1)), Build::Empty),
    row("001", c(0, 0, 1), Any, Some(c(0, 2, 1)), dims(Ge(2), Ge(1)), Build::Exact(hyper_01)),
    row("000-zero", c(0, 0, 0), Any, Some(c(0, 0, 0)), dims(Ge(1), Ge(1)), Build::Exact(zero_potential)),
    row("000-timelike", c(0, 0, 0), Any, Some(c(0, 1, 0)), dims(Ge(1), Ge(1)), Build::Family(FamilyKind::Timelike)),
    row("000-spacelike", c(0, 0, 0), Any, Some(c(0, 0, 1)), dims(Ge(1), Ge(1)), Build::Family(FamilyKind::Spacelike)),
    row("000-null1", c(0, 0, 0), Any, Some(c(1, 0, 0)), dims(Ge(1), Ge(1)), Build::Exact(null_1)),
    row("000-null2", c(0, 0, 0), Any, Some(c(2, 0, 0)), dims(Ge(2), Ge(2)), Build::Exact(null_2)),
    row("000-null3", c(0, 0, 0), Any, Some(c(3, 0, 0)), dims(Ge(3), Ge(3)), Build::Exact(null_3)),
    // currents with a null block
    row("120", c(1, 2, 0), Any, Some(c(1, 2, 0)), dims(Ge(3), Ge(1)), Build::Exact(null_120)),
    row("102", c(1, 0, 2), Any, Some(c(1, 0, 2)), dims(Ge(1), Ge(3)), Build::Exact(null_102)),
    row("111-equal", c(1, 1, 1), Is(Subcase::PairEqual), None, dims(Ge(2), Ge(2)), Build::Empty),
    row("111", c(1, 1, 1), Is(Subcase::PairUnequal), Some(c(1, 1, 1)), dims(Ge(2), Ge(2)), Build::Exact(null_111)),
    row("110", c(1, 1, 0), Any, None, dims(Ge(2), Ge(1)), Build::Empty),
    row("101", c(1, 0, 1), Any, None, dims(Ge(1), Ge(2)), Build::Empty),
    row("100-p1q1", c(1, 0, 0), Any, None, dims(Ex(1), Ex(1)), Build::Empty),
    row("100-timelike", c(1, 0, 0), Any, Some(c(1, 1, 0)), dims(Ge(2), Ge(1)), Build::Family(FamilyKind::NullTimelike)),
    row("100-spacelike", c(1, 0, 0), Any, Some(c(1, 0, 1)), dims(Ge(1), Ge(2)), Build::Family(FamilyKind::NullSpacelike)),
    row("210", c(2, 1, 0), Any, None, dims(Ge(3), Ge(2)), Build::Empty),
    row("201", c(2, 0, 1), Any, None, dims(Ge(2), Ge(3)), Build::Empty),
    row("200-p2q2", c(2, 0, 0), Any, None, dims(Ex(2), Ex(2)), Build::Empty),
    row("200-timelike", c(2, 0, 0), Any, Some(c(2, 1, 0)), dims(Ge(3), Ge(2)), Build::Family(FamilyKind::DoubleNullTimelike)),
    row("200-spacelike", c(2, 0, 0), Any, Some(c(2, 0, 1)), dims(Ge(2), Ge(3)), Build::Family(FamilyKind::DoubleNullSpacelike)),
    row("300", c(3, 0, 0), Any, None, dims(Ge(3), Ge(3)), Build::Empty),
];

fn psi(sig: Signature) -> RealMatrix {
    RealMatrix::zeros(sig.n(), 3)
}

fn exact(a: RealMatrix, branch: impl Into<String>) -> Exact {
    Exact {
        a,
        branch: branch.into(),
    }
}

fn euclid_p(cx: &Ctx) -> Result<Vec<Exact>> {
    let set = solve_euclid_triple_with(cx.j[0], cx.j[1], cx.j[2], cx.tol)?;
    Ok(set
        .solutions
        .iter()
        .map(|s| {
            let mut a = psi(cx.sig);
            for i in 0..3 {
                a[(i, i)] = -s.b[i];
            }
            exact(a, &s.branch)
        })
        .collect())
}

fn euclid_q(cx: &Ctx) -> Result<Vec<Exact>> {
    let p = cx.sig.p();
    let set = solve_euclid_triple_with(cx.j[0], cx.j[1], cx.j[2], cx.tol)?;
    Ok(set
        .solutions
        .iter()
        .map(|s| {
            let mut a = psi(cx.sig);
            for i in 0..3 {
                a[(p + i, i)] = s.b[i];
            }
            exact(a, &s.branch)
        })
        .collect())
}

fn hyper_21(cx: &Ctx) -> Result<Vec<Exact>> {
    let p = cx.sig.p();
    let set = solve_hyper_triple_with(cx.j[0], cx.j[1], cx.j[2], cx.tol)?;
    Ok(set
        .solutions
        .iter()
        .map(|s| {
            let mut a = psi(cx.sig);
            a[(0, 0)] = -s.b[0];
            a[(1, 1)] = -s.b[1];
            a[(p, 2)] = -s.b[2];
            exact(a, &s.branch)
        })
        .collect())
}

fn hyper_12(cx: &Ctx) -> Result<Vec<Exact>> {
    let p = cx.sig.p();
    let set = solve_hyper_triple_with(cx.j[1], cx.j[2], cx.j[0], cx.tol)?;
    Ok(set
        .solutions
        .iter()
        .map(|s| {
            let mut a = psi(cx.sig);
            a[(0, 0)] = s.b[2];
            a[(p, 1)] = s.b[0];
            a[(p + 1, 2)] = s.b[1];
            exact(a, &s.branch)
        })
        .collect())
}

fn pair_values(cx: &Ctx) -> Result<[f64; 2]> {
    let sol = solve_pair(cx.j[0], cx.j[1])?;
    Ok(sol.solution.unwrap_or([0.0, 0.0]))
}

fn pair_20(cx: &Ctx) -> Result<Vec<Exact>> {
    let [b1, b2] = pair_values(cx)?;
    let mut a = psi(cx.sig);
    a[(0, 0)] = -b1;
    a[(1, 1)] = -b2;
    Ok(vec![exact(a, "unique")])
}

fn pair_02(cx: &Ctx) -> Result<Vec<Exact>> {
    let p = cx.sig.p();
    let [b1, b2] = pair_values(cx)?;
    let mut a = psi(cx.sig);
    a[(p, 0)] = b1;
    a[(p + 1, 1)] = b2;
    Ok(vec![exact(a, "unique")])
}

fn pair_11(cx: &Ctx) -> Result<Vec<Exact>> {
    let p = cx.sig.p();
    let [b1, b2] = pair_values(cx)?;
    let mut a = psi(cx.sig);
    a[(0, 0)] = b1;
    a[(p, 1)] = -b2;
    Ok(vec![exact(a, "unique")])
}

fn null_11(cx: &Ctx) -> Result<Vec<Exact>> {
    let p = cx.sig.p();
    let [b1, b2] = pair_values(cx)?;
    let mut a = psi(cx.sig);
    a[(0, 0)] = b1;
    a[(p, 1)] = -b2;
    a[(1, 2)] = 1.0;
    a[(p + 1, 2)] = 1.0;
    Ok(vec![exact(a, "null")])
}

// The extra solutions of the j1 = 0 hyper case, embedded in two different shapes.
fn extra_11_p(cx: &Ctx) -> Result<Vec<Exact>> {
    let p = cx.sig.p();
    let set = solve_hyper_triple_with(0.0, cx.j[0], cx.j[1], cx.tol)?;
    Ok(set
        .solutions
        .iter()
        .filter(|s| s.b[0] != 0.0)
        .map(|s| {
            let mut a = psi(cx.sig);
            a[(0, 0)] = -s.b[1];
            a[(1, 2)] = s.b[0];
            a[(p, 1)] = -s.b[2];
            exact(a, &s.branch)
        })
        .collect())
}

fn extra_11_q(cx: &Ctx) -> Result<Vec<Exact>> {
    let p = cx.sig.p();
    let set = solve_hyper_triple_with(0.0, cx.j[1], cx.j[0], cx.tol)?;
    Ok(set
        .solutions
        .iter()
        .filter(|s| s.b[0] != 0.0)
        .map(|s| {
            let mut a = psi(cx.sig);
            a[(0, 0)] = s.b[2];
            a[(p, 1)] = s.b[1];
            a[(p + 1, 2)] = s.b[0];
            exact(a, &s.branch)
        })
        .collect())
}

fn hyper_10(cx: &Ctx) -> Result<Vec<Exact>> {
    let p = cx.sig.p();
    let set = solve_hyper_triple_with(0.0, 0.0, cx.j[0], cx.tol)?;
    Ok(set
        .solutions
        .iter()
        .map(|s| {
            let mut a = psi(cx.sig);
            a[(0, 0)] = s.b[2];
            a[(p, 1)] = s.b[0];
            a[(p + 1, 2)] = s.b[1];
            exact(a, &s.branch)
        })
        .collect())
}

fn hyper_01(cx: &Ctx) -> Result<Vec<Exact>> {
    let p = cx.sig.p();
    let set = solve_hyper_triple_with(0.0, 0.0, cx.j[0], cx.tol)?;
    Ok(set
        .solutions
        .iter()
        .map(|s| {
            let mut a = psi(cx.sig);
            a[(p, 0)] = -s.b[2];
            a[(0, 1)] = s.b[0];
            a[(1, 2)] = s.b[1];
            exact(a, &s.branch)
        })
        .collect())
}

fn zero_potential(cx: &Ctx) -> Result<Vec<Exact>> {
    Ok(vec![exact(psi(cx.sig), "zero")])
}

fn null_block(cx: &Ctx, d: usize) -> Vec<Exact> {
    let p = cx.sig.p();
    let mut a = psi(cx.sig);
    for k in 0..d {
        a[(k, k)] = 1.0;
        a[(p + k, k)] = 1.0;
    }
    vec![exact(a, format!("null{d}"))]
}

fn null_1(cx: &Ctx) -> Result<Vec<Exact>> {
    Ok(null_block(cx, 1))
}

fn null_2(cx: &Ctx) -> Result<Vec<Exact>> {
    Ok(null_block(cx, 2))
}

fn null_3(cx: &Ctx) -> Result<Vec<Exact>> {
    Ok(null_block(cx, 3))
}

fn null_120(cx: &Ctx) -> Result<Vec<Exact>> {
    let p = cx.sig.p();
    let [b1, b2] = pair_values(cx)?;
    let beta = -1.0 / (b1 * b1 + b2 * b2);
    let mut a = psi(cx.sig);
    a[(0, 0)] = -b1;
    a[(1, 1)] = -b2;
    a[(2, 2)] = beta;
    a[(p, 2)] = beta;
    Ok(vec![exact(a, "unique")])
}

fn null_102(cx: &Ctx) -> Result<Vec<Exact>> {
    let p = cx.sig.p();
    let [b1, b2] = pair_values(cx)?;
    let beta = 1.0 / (b1 * b1 + b2 * b2);
    let mut a = psi(cx.sig);
    a[(0, 2)] = beta;
    a[(p, 0)] = b1;
    a[(p + 1, 1)] = b2;
    a[(p + 2, 2)] = beta;
    Ok(vec![exact(a, "unique")])
}

fn null_111(cx: &Ctx) -> Result<Vec<Exact>> {
    let p = cx.sig.p();
    let [b1, b2] = pair_values(cx)?;
    let (a1, a2) = (b1, -b2);
    let beta = -1.0 / (a1 * a1 - a2 * a2);
    let mut a = psi(cx.sig);
    a[(0, 0)] = a1;
    a[(1, 2)] = beta;
    a[(p, 1)] = a2;
    a[(p + 1, 2)] = beta;
    Ok(vec![exact(a, "unique")])
}
