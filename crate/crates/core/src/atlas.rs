//! Sweep of the dispatch table at representative values.

use crate::classify::{enumerate_canonical, Bound, ClassKey, ClassParams, Condition, SolveOptions, Subcase, TableRow, TABLE};
use crate::constants::b_star;
use crate::error::Result;
use crate::exec::Execution;
use crate::linalg::Signature;

/// Relative gap below which two `F^2` values count as one.
pub const F2_CLUSTER: f64 = 1e-6;

/// Outcome of one table row at one signature.
#[derive(Debug, Clone, PartialEq)]
pub struct AtlasEntry {
    pub sig: Signature,
    pub row: &'static TableRow,
    pub key: ClassKey,
    /// `∅`, `∞`, `A=0` or the number of isolated solutions.
    pub count: String,
    /// Distinct measured classes of the emitted potentials.
    pub measured: Vec<ClassParams>,
    /// Distinct `F^2` values, ascending; empty for rows without solutions.
    pub f2: Vec<f64>,
}

/// Canonical values used for a row.
pub fn representative_key(row: &TableRow, opts: &SolveOptions) -> Result<ClassKey> {
    let c = row.current;
    let on = |a: f64, b: f64| (a.powf(2.0 / 3.0) + b.powf(2.0 / 3.0)).powf(1.5);
    let hyper = |s: Subcase| -> [f64; 3] {
        match s {
            Subcase::PairEqualBelow { special: true } => [1.0, 1.0, b_star()],
            Subcase::PairEqualBelow { special: false } => [1.0, 1.0, 4.0],
            Subcase::PairEqualAt => [1.0, 1.0, 2.0 * 2f64.sqrt()],
            Subcase::PairEqualAbove => [1.0, 1.0, 2.0],
            Subcase::DistinctAbove => [1.0, 0.3, 5.0],
            Subcase::DistinctOn => [1.0, 0.3, on(1.0, 0.3)],
            _ => [1.0, 0.3, 0.5],
        }
    };
    let euclid = |s: Subcase| -> Vec<f64> {
        match s {
            Subcase::AllEqual => vec![2.0, 2.0, 2.0],
            Subcase::TopPairEqual => vec![3.0, 3.0, 1.0],
            Subcase::BottomPairEqual => vec![3.0, 1.0, 1.0],
            _ => vec![3.0, 2.0, 1.0],
        }
    };
    let s = match row.condition {
        Condition::Any => Subcase::None,
        Condition::Is(s) => s,
    };
    let (vx, vy): (Vec<f64>, Vec<f64>) = match (c.d, c.x, c.y) {
        (0, 3, 0) => (euclid(s), vec![]),
        (0, 0, 3) => (vec![], euclid(s)),
        (0, 2, 1) => {
            let h = hyper(s);
            (vec![h[0], h[1]], vec![h[2]])
        }
        (0, 1, 2) => {
            let h = hyper(s);
            (vec![h[2]], vec![h[0], h[1]])
        }
        (0, 1, 1) | (1, 1, 1) => match s {
            Subcase::PairEqual => (vec![1.2], vec![1.2]),
            Subcase::FirstLarger | Subcase::PairUnequal => (vec![2.5], vec![1.2]),
            _ => (vec![1.2], vec![2.5]),
        },
        (_, x, y) => {
            let vals = [2.0, 1.0, 0.5];
            (vals[..x].to_vec(), vals[..y].to_vec())
        }
    };
    ClassKey::from_values(c.d, &vx, &vy, &opts.degeneracy)
}

/// Smallest signature a row admits.
pub fn minimal_signature(row: &TableRow) -> Signature {
    let v = |b: Bound| match b {
        Bound::AtLeast(k) | Bound::Exactly(k) => k,
    };
    Signature::new(v(row.dims.p), v(row.dims.q)).expect("table bounds are positive")
}

fn evaluate(row: &'static TableRow, sig: Signature, opts: &SolveOptions) -> Result<AtlasEntry> {
    let key = representative_key(row, opts)?;
    let report = enumerate_canonical(&key, sig, opts)?;
    let mine: Vec<_> = report.exact.iter().filter(|s| s.row == row.id).collect();
    let mut f2: Vec<f64> = mine.iter().map(|s| s.strength.f2).collect();
    let mut measured: Vec<ClassParams> = mine.iter().map(|s| s.potential.params).collect();
    let count = if row.is_empty() {
        "∅".to_string()
    } else if row.is_family() {
        if let Some(fam) = report.families.iter().find(|f| f.row == row.id) {
            for t in [0.7, 1.3] {
                let a = fam.member(t)?;
                f2.push(crate::classify::strength_of(&a, sig)?.f2);
            }
            measured.push(fam.params);
        }
        "∞".to_string()
    } else if row.potential == Some(ClassParams::new(0, 0, 0)) {
        "A=0".to_string()
    } else {
        mine.len().to_string()
    };
    measured.sort();
    measured.dedup();
    Ok(AtlasEntry {
        sig,
        row,
        key,
        count,
        measured,
        f2: distinct(f2),
    })
}

fn distinct(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    let scale = v.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let mut out: Vec<f64> = Vec::new();
    for x in v {
        match out.last() {
            Some(&l) if x - l <= F2_CLUSTER * scale => {}
            _ => out.push(if x.abs() <= F2_CLUSTER * scale { 0.0 } else { x }),
        }
    }
    out
}

/// Every row admitted by each signature of the grid, in table order per signature.
pub fn atlas(grid: &[Signature], opts: &SolveOptions, execution: Execution) -> Result<Vec<AtlasEntry>> {
    let jobs: Vec<(&'static TableRow, Signature)> = grid
        .iter()
        .flat_map(|&s| TABLE.iter().filter(move |r| r.dims.admits(s)).map(move |r| (r, s)))
        .collect();
    execution.map(&jobs, |&(r, s)| evaluate(r, s, opts)).into_iter().collect()
}

/// Every row at its own minimal signature, in table order.
pub fn atlas_minima(opts: &SolveOptions, execution: Execution) -> Result<Vec<AtlasEntry>> {
    let jobs: Vec<&'static TableRow> = TABLE.iter().collect();
    execution
        .map(&jobs, |&r| evaluate(r, minimal_signature(r), opts))
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> SolveOptions {
        SolveOptions::default()
    }

    #[test]
    fn representative_keys_select_their_rows() {
        for row in TABLE.iter() {
            let key = representative_key(row, &opts()).unwrap();
            assert_eq!(key.current, row.current, "{}", row.id);
            assert!(row.condition.admits(key.subcase), "{} got {:?}", row.id, key.subcase);
        }
    }

    #[test]
    fn empty_grid_gives_empty_atlas() {
        assert!(atlas(&[], &opts(), Execution::Sequential).unwrap().is_empty());
    }

    #[test]
    fn minimal_signature_table() {
        let e = atlas_minima(&opts(), Execution::Parallel).unwrap();
        assert_eq!(e.len(), TABLE.len());
        for x in &e {
            if let Some(p) = x.row.potential {
                assert_eq!(x.measured, vec![p], "{}", x.row.id);
            }
        }
    }

    #[test]
    fn three_three_has_triple_null() {
        let s = Signature::new(3, 3).unwrap();
        let e = atlas(&[s], &opts(), Execution::Sequential).unwrap();
        let row = e.iter().find(|x| x.row.id == "000-null3").unwrap();
        assert_eq!(row.count, "1");
        assert_eq!(row.f2, vec![0.0]);
    }
}
