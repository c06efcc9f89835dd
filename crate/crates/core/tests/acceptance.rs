//! Acceptance suite: one pass/fail line per criterion, non-zero exit on failure.

use std::f64::consts::SQRT_2;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use su2ym_core::atlas::{atlas, atlas_minima};
use su2ym_core::classify::{enumerate_canonical, solve_all, strength_of, ClassKey, SolveOptions, TABLE};
use su2ym_core::constants::{b_star, crossing_gap, s_star, z_plus_star};
use su2ym_core::cubic::{
    conserved_k, euclid_case, hyper_case, solve_euclid_triple, solve_hyper_triple, Degeneracy, EuclidCase,
    HyperCase, SolutionSet, SystemKind,
};
use su2ym_core::group::{random_pseudo_orthogonal, random_rotation};
use su2ym_core::hsvd::{hsvd, RankTolerance};
use su2ym_core::linalg::{metric, pseudo_inverse_of, sym_eigen, RealMatrix, Signature};
use su2ym_core::verify::{cross_check, oracle_solve, residual, yang_mills_lhs, OracleConfig};
use su2ym_core::Execution;

const RESIDUAL_TOL: f64 = 1e-9;
const RESIDUAL_BUDGET_SECS: f64 = 60.0;
const ORACLE_CASES: usize = 1000;
const ORACLE_MATCH_TOL: f64 = 1e-7;
const K_TOL: f64 = 1e-9;
const CONSTANT_DIGITS_TOL: f64 = 5e-6;
const COINCIDENCE_TOL: f64 = 1e-6;
const F2_TOL: f64 = 1e-9;
const HSVD_CASES: usize = 10_000;
const HSVD_RECON_TOL: f64 = 1e-8;
const HSVD_METRIC_TOL: f64 = 1e-9;
const HSVD_ORTHO_TOL: f64 = 1e-10;
const INVARIANCE_TOL: f64 = 1e-9;

const SIGNATURES: [(usize, usize); 8] = [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1), (2, 3), (3, 3)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn sig(p: usize, q: usize) -> Signature {
    Signature::new(p, q).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> RealMatrix {
    let data: Vec<f64> = (0..n * 3).map(|_| rng.random_range(-2.0..2.0)).collect();
    RealMatrix::from_row_major(n, 3, data).unwrap()
}

fn transformed(sigma: &RealMatrix, s: Signature, rng: &mut ChaCha8Rng) -> RealMatrix {
    let q = random_pseudo_orthogonal(s, 0.5, rng);
    let p = random_rotation(rng);
    let qi = pseudo_inverse_of(&q, s).unwrap();
    qi.matmul(sigma).unwrap().matmul(&p.transpose()).unwrap()
}

// 1. Residuals of every emitted solution on random and structured currents.
fn residuals() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let opts = SolveOptions::default();
    let mut jobs = Vec::new();
    for &(p, q) in &SIGNATURES {
        let s = sig(p, q);
        for _ in 0..70 {
            jobs.push((random_matrix(s.n(), &mut rng), s));
        }
        for row in TABLE.iter().filter(|r| r.dims.admits(s)) {
            let key = su2ym_core::atlas::representative_key(row, &opts).unwrap();
            let sigma = key.canonical_current(s).unwrap();
            jobs.push((transformed(&sigma, s, &mut rng), s));
        }
    }
    let mut worst = 0.0f64;
    let mut solutions = 0;
    let mut failures = Vec::new();
    for (j, s) in &jobs {
        match solve_all(j, *s, &opts) {
            Ok(r) => {
                let bound = RESIDUAL_TOL * j.max_abs().max(1.0);
                for sol in &r.exact {
                    solutions += 1;
                    worst = worst.max(sol.residual.max_abs / j.max_abs().max(1.0));
                    if sol.residual.max_abs > bound {
                        failures.push(format!("{s} {}: {:.3e}", sol.row, sol.residual.max_abs));
                    }
                }
            }
            Err(e) => failures.push(format!("{s}: {e}")),
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        pass: failures.is_empty() && jobs.len() >= 500 && secs <= RESIDUAL_BUDGET_SECS,
        detail: format!(
            "{} currents, {solutions} solutions, worst scaled residual {worst:.2e} (tol {RESIDUAL_TOL:e}), {secs:.1}s{}",
            jobs.len(),
            if failures.is_empty() { String::new() } else { format!(", failures: {:?}", &failures[..failures.len().min(5)]) }
        ),
    }
}

// 2. Solution counts of all table rows, against the published columns.
const EXPECTED_COUNTS: [(&str, &str); 53] = [
    ("030-equal", "1"), ("030-top-pair", "2"), ("030-bottom-pair", "2"), ("030-distinct", "2"),
    ("003-equal", "1"), ("003-top-pair", "2"), ("003-bottom-pair", "2"), ("003-distinct", "2"),
    ("021-pair-below-special", "6"), ("021-pair-below", "6"), ("021-pair-at", "4"), ("021-pair-above", "2"),
    ("021-distinct-above", "6"), ("021-distinct-on", "4"), ("021-distinct-below", "2"),
    ("012-pair-below-special", "6"), ("012-pair-below", "6"), ("012-pair-at", "4"), ("012-pair-above", "2"),
    ("012-distinct-above", "6"), ("012-distinct-on", "4"), ("012-distinct-below", "2"),
    ("020", "1"), ("002", "1"), ("011", "1"), ("011-equal", "1"), ("011-second-larger", "4"),
    ("011-first-larger", "4"), ("010-q1", "∅"), ("010", "4"), ("001-p1", "∅"), ("001", "4"),
    ("000-zero", "A=0"), ("000-timelike", "∞"), ("000-spacelike", "∞"), ("000-null1", "1"),
    ("000-null2", "1"), ("000-null3", "1"),
    ("120", "1"), ("102", "1"), ("111-equal", "∅"), ("111", "1"), ("110", "∅"), ("101", "∅"),
    ("100-p1q1", "∅"), ("100-timelike", "∞"), ("100-spacelike", "∞"), ("210", "∅"), ("201", "∅"),
    ("200-p2q2", "∅"), ("200-timelike", "∞"), ("200-spacelike", "∞"), ("300", "∅"),
];

const EXPECTED_PLANE: [&str; 8] = ["1", "∅", "∅", "A=0", "∞", "∞", "1", "∅"];

fn tables() -> Outcome {
    let opts = SolveOptions::default();
    let entries = atlas_minima(&opts, Execution::Parallel).unwrap();
    let mut bad = Vec::new();
    let mut per_table = [0usize; 4];
    let mut totals = [0usize; 4];
    for (e, (id, want)) in entries.iter().zip(EXPECTED_COUNTS.iter()) {
        let c = e.row.current;
        let t = if c.d > 0 {
            3
        } else if c.rank() == 3 {
            1
        } else {
            2
        };
        totals[t] += 1;
        if e.row.id == *id && e.count == *want {
            per_table[t] += 1;
        } else {
            bad.push(format!("{} got {} want {want}", e.row.id, e.count));
        }
    }
    let plane = atlas(&[sig(1, 1)], &opts, Execution::Sequential).unwrap();
    totals[0] = EXPECTED_PLANE.len();
    per_table[0] = plane.iter().zip(EXPECTED_PLANE).filter(|(e, w)| e.count == *w).count();
    if plane.len() != EXPECTED_PLANE.len() {
        bad.push(format!("(1,1) sweep has {} rows", plane.len()));
    }
    let pass = bad.is_empty() && per_table == totals && entries.len() == EXPECTED_COUNTS.len();
    Outcome {
        pass,
        detail: format!(
            "rows reproduced: plane {}/{}, full rank {}/{}, lower rank {}/{}, null block {}/{}{}",
            per_table[0], totals[0], per_table[1], totals[1], per_table[2], totals[2], per_table[3], totals[3],
            if bad.is_empty() { String::new() } else { format!(", mismatches: {bad:?}") }
        ),
    }
}

#[derive(Clone, Copy, Debug)]
enum Sample {
    Hyper(HyperCase),
    Euclid(EuclidCase),
}

fn sample_values(s: Sample, rng: &mut ChaCha8Rng) -> [f64; 3] {
    let m = rng.random_range(0.2..5.0);
    match s {
        Sample::Hyper(c) => {
            let (a, b) = loop {
                let a: f64 = rng.random_range(0.2..5.0);
                let b: f64 = rng.random_range(0.2..5.0);
                if rel(a, b) > 1e-2 {
                    break (a, b);
                }
            };
            let on = (a.powf(2.0 / 3.0) + b.powf(2.0 / 3.0)).powf(1.5);
            match c {
                HyperCase::PairEqualBelow => [m, m, m * 2.0 * SQRT_2 * rng.random_range(1.05..6.0)],
                HyperCase::PairEqualAt => [m, m, m * 2.0 * SQRT_2],
                HyperCase::PairEqualAbove => [m, m, m * 2.0 * SQRT_2 * rng.random_range(0.05..0.95)],
                HyperCase::DistinctAbove => [a, b, on * rng.random_range(1.05..4.0)],
                HyperCase::DistinctOn => [a, b, on],
                _ => [a, b, on * rng.random_range(0.05..0.95)],
            }
        }
        Sample::Euclid(c) => {
            let lo = m * rng.random_range(0.05..0.95);
            let mid = lo + (m - lo) * rng.random_range(0.05..0.95);
            let mut v = match c {
                EuclidCase::AllEqual => [m, m, m],
                EuclidCase::TopPairEqual => [m, m, lo],
                EuclidCase::BottomPairEqual => [m, lo, lo],
                _ => [m, mid, lo],
            };
            // the system is symmetric; shuffle positions
            for i in (1..3).rev() {
                let k = rng.random_range(0..=i);
                v.swap(i, k);
            }
            v
        }
    }
}

fn solve(s: Sample, j: [f64; 3]) -> SolutionSet {
    match s {
        Sample::Hyper(_) => solve_hyper_triple(j[0], j[1], j[2]).unwrap(),
        Sample::Euclid(_) => solve_euclid_triple(j[0], j[1], j[2]).unwrap(),
    }
}

fn case_matches(s: Sample, j: [f64; 3]) -> bool {
    let tol = Degeneracy::default();
    match s {
        Sample::Hyper(c) => hyper_case(j, &tol, &mut Vec::new()) == c,
        Sample::Euclid(c) => euclid_case(j, &tol, &mut Vec::new()) == c,
    }
}

const HYPER_CASES: [HyperCase; 6] = [
    HyperCase::PairEqualBelow,
    HyperCase::PairEqualAt,
    HyperCase::PairEqualAbove,
    HyperCase::DistinctAbove,
    HyperCase::DistinctOn,
    HyperCase::DistinctBelow,
];
const EUCLID_CASES: [EuclidCase; 4] = [
    EuclidCase::AllEqual,
    EuclidCase::TopPairEqual,
    EuclidCase::BottomPairEqual,
    EuclidCase::AllDistinct,
];

fn samples() -> Vec<Sample> {
    HYPER_CASES
        .iter()
        .map(|&c| Sample::Hyper(c))
        .chain(EUCLID_CASES.iter().map(|&c| Sample::Euclid(c)))
        .collect()
}

// 3. Enumerated solutions biject with the oracle roots.
fn oracle() -> Outcome {
    let cfg = OracleConfig {
        execution: Execution::Sequential,
        ..OracleConfig::default()
    };
    let mut lines = Vec::new();
    let mut pass = true;
    for (k, s) in samples().into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + k as u64);
        let cases: Vec<[f64; 3]> = (0..ORACLE_CASES).map(|_| sample_values(s, &mut rng)).collect();
        let results = Execution::Parallel.map(&cases, |j| {
            let set = solve(s, *j);
            let system = match s {
                Sample::Hyper(_) => SystemKind::Hyper,
                Sample::Euclid(_) => SystemKind::Euclid,
            };
            let o = oracle_solve(system, j, &cfg).unwrap();
            let m = cross_check(&set, &o, ORACLE_MATCH_TOL);
            (case_matches(s, *j), set.solutions.len(), m.is_match(), format!("{j:?}: {m}"))
        });
        let mut counts: Vec<usize> = results.iter().map(|r| r.1).collect();
        counts.sort();
        counts.dedup();
        let allowed: &[usize] = match s {
            Sample::Hyper(_) => &[2, 4, 6],
            Sample::Euclid(_) => &[1, 2],
        };
        let wrong_case = results.iter().filter(|r| !r.0).count();
        let mismatches: Vec<&String> = results.iter().filter(|r| !r.2).map(|r| &r.3).collect();
        let ok = wrong_case == 0 && mismatches.is_empty() && counts.iter().all(|c| allowed.contains(c));
        pass &= ok;
        lines.push(format!(
            "{s:?} {}/{} counts {counts:?}{}",
            ORACLE_CASES - mismatches.len(),
            ORACLE_CASES,
            mismatches.first().map(|m| format!(" first mismatch {m}")).unwrap_or_default()
        ));
    }
    Outcome {
        pass,
        detail: lines.join("; "),
    }
}

// 4. Conserved quantity of every pair and the branch-parameter identities.
fn identities() -> Outcome {
    let mut worst = 0.0f64;
    let mut pairs = 0;
    let mut errors = Vec::new();
    let mut note = |what: &str, j: [f64; 3], r: f64, worst: &mut f64| {
        *worst = worst.max(r);
        if r > K_TOL && errors.len() < 5 {
            errors.push(format!("{what} at {j:?}: {r:.2e}"));
        }
    };
    for (k, s) in samples().into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(200 + k as u64);
        for _ in 0..ORACLE_CASES {
            let j = sample_values(s, &mut rng);
            let set = solve(s, j);
            let hyper = matches!(s, Sample::Hyper(_));
            let mut s_values = Vec::new();
            for (a, b) in set.pairs() {
                pairs += 1;
                let (x, y) = (&set.solutions[a], &set.solutions[b]);
                let kk = match conserved_k(x, y, set.kind, K_TOL) {
                    Ok(v) => v,
                    Err(e) => {
                        note(&format!("K {e}"), j, f64::INFINITY, &mut worst);
                        continue;
                    }
                };
                let prod = (x.b[0] * x.b[1] * x.b[2]).abs().powf(2.0 / 3.0);
                note("K vs (b1 b2 b3)^(2/3)", j, rel(kk, prod), &mut worst);
                let ratio = |v: &[f64; 3], i: usize| v[i] / v[0];
                let zsign = if hyper { -1.0 } else { 1.0 };
                note("y+ y- = 1", j, (ratio(&x.b, 1) * ratio(&y.b, 1) - 1.0).abs(), &mut worst);
                note("z+ z- = -+1", j, (ratio(&x.b, 2) * ratio(&y.b, 2) - zsign).abs(), &mut worst);
                if hyper {
                    let t = ratio(&x.b, 1) + ratio(&y.b, 1);
                    if x.branch.starts_with('c') {
                        let w = (x.b[2] / x.b[0], y.b[2] / y.b[0]);
                        note("w+ w- = -1", j, (w.0 * w.1 + 1.0).abs(), &mut worst);
                        let sv = w.0 + w.1;
                        note("K = (j1/s)^(2/3)", j, rel(kk, (j[0] / sv).powf(2.0 / 3.0)), &mut worst);
                        s_values.push(sv);
                    } else if x.branch.starts_with('b') {
                        note("K = (j3/2)^(2/3)", j, rel(kk, (j[2] / 2.0).powf(2.0 / 3.0)), &mut worst);
                    } else {
                        let f = j[0] * j[1] * t.powi(3) + (j[2] * j[2] - j[0] * j[0] - j[1] * j[1]) * t * t
                            - 4.0 * j[2] * j[2];
                        let scale = (j[0] * j[1] * t.abs().powi(3)).max(4.0 * j[2] * j[2]);
                        note("resolvent(t) = 0", j, f.abs() / scale, &mut worst);
                        note("K = (j3/t)^(2/3)", j, rel(kk, (j[2] / t).powf(2.0 / 3.0)), &mut worst);
                    }
                } else {
                    let t = ratio(&x.b, 1) + ratio(&y.b, 1);
                    note("K = (j3/t0)^(2/3)", j, rel(kk, (j[2] / t).abs().powf(2.0 / 3.0)), &mut worst);
                }
            }
            if s_values.len() == 2 {
                note("s+ s- = 2", j, (s_values[0] * s_values[1] - 2.0).abs() / 2.0, &mut worst);
            }
        }
    }
    Outcome {
        pass: errors.is_empty() && pairs > 0,
        detail: format!("{pairs} pairs, worst defect {worst:.2e} (tol {K_TOL:e}){}", if errors.is_empty() {
            String::new()
        } else {
            format!(", failures: {errors:?}")
        }),
    }
}

// 5. Special constants and the coincidence of two invariant branches.
fn constants() -> Outcome {
    let (s, b, z) = (s_star(), b_star(), z_plus_star());
    let digits = rel(s, 7.39438) <= CONSTANT_DIGITS_TOL
        && rel(b, 7.66486) <= CONSTANT_DIGITS_TOL
        && rel(z, 0.878009) <= CONSTANT_DIGITS_TOL;
    let defining = rel((s * s + 2.0) / s, b) <= 1e-12 && rel((-1.0 + (1.0 + b * b).sqrt()) / b, z) <= 1e-12;
    let opts = SolveOptions::default();
    let key = ClassKey::from_values(0, &[1.0, 1.0], &[b], &opts.degeneracy).unwrap();
    let report = enumerate_canonical(&key, sig(2, 1), &opts).unwrap();
    let f = |name: &str| report.exact.iter().find(|x| x.branch == name).map(|x| x.strength.f2);
    let (fb, fc) = (f("b+").unwrap(), f("c++").unwrap());
    let coincide = rel(fb, fc);
    let distinct = report.distinct_f2(COINCIDENCE_TOL);
    let gap = crossing_gap(b).abs() / fb.abs();
    Outcome {
        pass: digits && defining && coincide <= COINCIDENCE_TOL && gap <= COINCIDENCE_TOL && distinct == 3,
        detail: format!(
            "s*={s:.6} B*={b:.6} z+*={z:.7}; F2 coincidence {coincide:.2e} (tol {COINCIDENCE_TOL:e}), {distinct} distinct F2 among {} solutions",
            report.exact.len()
        ),
    }
}

// 6. Closed-form F^2 values.
fn strength_spots() -> Outcome {
    let opts = SolveOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    let key = ClassKey::from_values(0, &[2.0, 2.0, 2.0], &[], &opts.degeneracy).unwrap();
    let r = enumerate_canonical(&key, sig(3, 1), &opts).unwrap();
    worst = worst.max((r.exact[0].strength.f2 + 1.5).abs());
    let mut checked = 1;
    for _ in 0..200 {
        let (j1, j2): (f64, f64) = (rng.random_range(0.1..5.0), rng.random_range(0.1..5.0));
        let want = 0.5 * ((j1 * j2) * (j1 * j2)).cbrt();
        let j = RealMatrix::from_rows(&[vec![j1, 0.0, 0.0], vec![0.0, j2, 0.0]]).unwrap();
        let plane = solve_all(&j, sig(1, 1), &opts).unwrap();
        worst = worst.max((plane.exact[0].strength.f2 - want).abs());
        if rel(j1, j2) > 1e-3 {
            let (a, b) = if j1 > j2 { (j1, j2) } else { (j2, j1) };
            let key = ClassKey::from_values(1, &[a], &[b], &opts.degeneracy).unwrap();
            let r = enumerate_canonical(&key, sig(2, 2), &opts).unwrap();
            worst = worst.max((r.exact[0].strength.f2 - want).abs());
            checked += 1;
        }
        checked += 1;
    }
    Outcome {
        pass: worst <= F2_TOL,
        detail: format!("{checked} spot checks, worst deviation {worst:.2e} (tol {F2_TOL:e})"),
    }
}

fn rank_of(s: &RealMatrix, tol: f64) -> (usize, usize) {
    let e = sym_eigen(s, 1e-10).unwrap();
    let scale = e.values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    let pos = e.values.iter().filter(|&&v| v > tol * scale).count();
    let neg = e.values.iter().filter(|&&v| v < -tol * scale).count();
    (pos, neg)
}

// 7. Decomposition properties on random matrices, including rank-deficient and null ones.
fn hsvd_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let tol = RankTolerance::default();
    let mut worst = [0.0f64; 3];
    let mut fails = Vec::new();
    for i in 0..HSVD_CASES {
        let n = rng.random_range(2..=8);
        let p = rng.random_range(1..n);
        let s = sig(p, n - p);
        let a = if i % 4 == 3 {
            let d = rng.random_range(0..=p.min(n - p).min(3));
            let x = rng.random_range(0..=(p - d).min(3 - d));
            let y = rng.random_range(0..=(n - p - d).min(3 - d - x));
            let vx: Vec<f64> = (0..x).map(|_| rng.random_range(0.1..3.0)).collect();
            let vy: Vec<f64> = (0..y).map(|_| rng.random_range(0.1..3.0)).collect();
            let c = su2ym_core::hsvd::CanonicalForm::new(s, 3, &vx, &vy, d).unwrap();
            transformed(&c.sigma, s, &mut rng)
        } else {
            random_matrix(n, &mut rng)
        };
        let h = match hsvd(&a, s, &tol) {
            Ok(h) => h,
            Err(e) => {
                fails.push(format!("{s}: {e}"));
                continue;
            }
        };
        let eta = metric(s);
        let recon = h.l.transpose().matmul(&a).unwrap().matmul(&h.r).unwrap();
        let d0 = recon.max_abs_diff(&h.canon.sigma).unwrap();
        let d1 = h.l.transpose().matmul(&eta).unwrap().matmul(&h.l).unwrap().max_abs_diff(&eta).unwrap();
        let d2 = h.r.transpose().matmul(&h.r).unwrap().max_abs_diff(&RealMatrix::identity(3)).unwrap();
        let w = a.transpose().matmul(&eta).unwrap().matmul(&a).unwrap();
        let (x, y) = rank_of(&w, tol.rank);
        let ata = a.transpose().matmul(&a).unwrap();
        let (r, _) = rank_of(&ata, tol.rank);
        let params_ok = (h.canon.x, h.canon.y, h.canon.d) == (x, y, r - x - y);
        worst[0] = worst[0].max(d0);
        worst[1] = worst[1].max(d1);
        worst[2] = worst[2].max(d2);
        if d0 > HSVD_RECON_TOL || d1 > HSVD_METRIC_TOL || d2 > HSVD_ORTHO_TOL || !params_ok {
            if fails.len() < 5 {
                fails.push(format!(
                    "{s} case {i}: recon {d0:.2e} metric {d1:.2e} ortho {d2:.2e} params ({},{},{}) vs ({x},{y},{})",
                    h.canon.x,
                    h.canon.y,
                    h.canon.d,
                    r - x - y
                ));
            } else {
                fails.push(String::new());
            }
        }
    }
    Outcome {
        pass: fails.is_empty(),
        detail: format!(
            "{HSVD_CASES} matrices, worst recon {:.2e} metric {:.2e} ortho {:.2e}{}",
            worst[0],
            worst[1],
            worst[2],
            if fails.is_empty() { String::new() } else { format!(", {} failures: {:?}", fails.len(), &fails[..fails.len().min(5)]) }
        ),
    }
}

// 8. The system and F^2 under frame changes.
fn invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let opts = SolveOptions::default();
    let mut worst = [0.0f64; 3];
    let mut cases = 0;
    for &(p, q) in &SIGNATURES {
        let s = sig(p, q);
        for _ in 0..50 {
            let a = random_matrix(s.n(), &mut rng);
            let j = random_matrix(s.n(), &mut rng);
            let qm = random_pseudo_orthogonal(s, 0.5, &mut rng);
            let pm = random_rotation(&mut rng);
            let a2 = qm.matmul(&a).unwrap().matmul(&pm).unwrap();
            let j2 = qm.matmul(&j).unwrap().matmul(&pm).unwrap();
            let r1 = residual(&a, &j, s).unwrap();
            let r2 = residual(&a2, &j2, s).unwrap();
            let lhs = yang_mills_lhs(&a, s).unwrap();
            let moved = qm.matmul(&lhs).unwrap().matmul(&pm).unwrap().sub(&j2).unwrap();
            let r2m = RealMatrix::from_row_major(s.n(), 3, r2.per_equation.clone()).unwrap();
            let scale = moved.max_abs().max(r1.max_abs).max(1.0);
            worst[0] = worst[0].max(r2m.max_abs_diff(&moved).unwrap() / scale);
            let f1 = strength_of(&a, s).unwrap().f2;
            let f2 = strength_of(&a2, s).unwrap().f2;
            worst[1] = worst[1].max((f1 - f2).abs() / f1.abs().max(1.0));
            cases += 1;
        }
        let key = su2ym_core::atlas::representative_key(
            TABLE.iter().find(|r| r.dims.admits(s) && !r.is_empty() && !r.is_family() && r.current.rank() > 0).unwrap(),
            &opts,
        )
        .unwrap();
        let canon = enumerate_canonical(&key, s, &opts).unwrap();
        for sol in &canon.exact {
            let qm = random_pseudo_orthogonal(s, 0.5, &mut rng);
            let pm = random_rotation(&mut rng);
            let a2 = qm.matmul(&sol.canonical).unwrap().matmul(&pm).unwrap();
            let j2 = qm.matmul(&canon.current).unwrap().matmul(&pm).unwrap();
            worst[2] = worst[2].max(residual(&a2, &j2, s).unwrap().max_abs);
            let f2 = strength_of(&a2, s).unwrap().f2;
            worst[1] = worst[1].max((sol.strength.f2 - f2).abs() / sol.strength.f2.abs().max(1.0));
        }
    }
    Outcome {
        pass: worst.iter().all(|&w| w <= INVARIANCE_TOL),
        detail: format!(
            "{cases} random pairs; residual equivariance {:.2e}, F2 invariance {:.2e}, transformed-solution residual {:.2e} (tol {INVARIANCE_TOL:e})",
            worst[0], worst[1], worst[2]
        ),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 residual certification", residuals),
        ("2 table reproduction", tables),
        ("3 oracle equivalence", oracle),
        ("4 conserved quantities", identities),
        ("5 special constants", constants),
        ("6 closed-form F2", strength_spots),
        ("7 HSVD properties", hsvd_suite),
        ("8 invariance", invariance),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let t = Instant::now();
        let o = run();
        println!(
            "[{}] criterion {name}: {} ({:.1}s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
        if !o.pass {
            failed += 1;
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
