use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use su2ym_core::classify::{class_of, solve_all, solve_batch, strength_of, ClassKey, SolveOptions};
use su2ym_core::cubic::{solve_euclid_triple, solve_hyper_triple, solve_pair, Degeneracy};
use su2ym_core::group::{random_pseudo_orthogonal, random_rotation};
use su2ym_core::hsvd::{hsvd, RankTolerance};
use su2ym_core::linalg::{metric, pseudo_inverse_of, RealMatrix, Signature};
use su2ym_core::verify::{residual, yang_mills_lhs};
use su2ym_core::Execution;

fn signature() -> impl Strategy<Value = Signature> {
    (1usize..=3, 1usize..=3).prop_map(|(p, q)| Signature::new(p, q).unwrap())
}

fn matrix(s: Signature) -> impl Strategy<Value = RealMatrix> {
    prop::collection::vec(-3.0f64..3.0, s.n() * 3).prop_map(move |v| RealMatrix::from_row_major(s.n(), 3, v).unwrap())
}

fn with_matrix() -> impl Strategy<Value = (Signature, RealMatrix)> {
    signature().prop_flat_map(|s| (Just(s), matrix(s)))
}

fn positive() -> impl Strategy<Value = f64> {
    0.05f64..8.0
}

fn frame(s: Signature, seed: u64) -> (RealMatrix, RealMatrix) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (random_pseudo_orthogonal(s, 0.5, &mut rng), random_rotation(&mut rng))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn hsvd_factors((s, a) in with_matrix()) {
        let h = hsvd(&a, s, &RankTolerance::default()).unwrap();
        let eta = metric(s);
        let lhs = h.l.transpose().matmul(&a).unwrap().matmul(&h.r).unwrap();
        prop_assert!(lhs.max_abs_diff(&h.canon.sigma).unwrap() <= 1e-8 * a.max_abs().max(1.0));
        let g = h.l.transpose().matmul(&eta).unwrap().matmul(&h.l).unwrap();
        prop_assert!(g.max_abs_diff(&eta).unwrap() <= 1e-9 * h.l.max_abs().powi(2).max(1.0));
        let o = h.r.transpose().matmul(&h.r).unwrap();
        prop_assert!(o.max_abs_diff(&RealMatrix::identity(3)).unwrap() <= 1e-10);
        prop_assert!(h.canon.x + h.canon.d <= s.p() && h.canon.y + h.canon.d <= s.q());
    }

    #[test]
    fn class_is_frame_invariant((s, j) in with_matrix(), seed in any::<u64>()) {
        let opts = SolveOptions::default();
        let (q, p) = frame(s, seed);
        let moved = q.matmul(&j).unwrap().matmul(&p).unwrap();
        let (k1, k2) = (class_of(&j, s, &opts).unwrap(), class_of(&moved, s, &opts).unwrap());
        prop_assert_eq!(k1.current, k2.current);
        for (a, b) in k1.jvals.iter().zip(&k2.jvals) {
            prop_assert!((a - b).abs() <= 1e-7 * a.abs().max(1.0));
        }
    }

    #[test]
    fn lhs_is_equivariant((s, a) in with_matrix(), seed in any::<u64>()) {
        let (q, p) = frame(s, seed);
        let moved = q.matmul(&a).unwrap().matmul(&p).unwrap();
        let want = q.matmul(&yang_mills_lhs(&a, s).unwrap()).unwrap().matmul(&p).unwrap();
        let got = yang_mills_lhs(&moved, s).unwrap();
        prop_assert!(got.max_abs_diff(&want).unwrap() <= 1e-9 * want.max_abs().max(1.0));
        let f1 = strength_of(&a, s).unwrap().f2;
        let f2 = strength_of(&moved, s).unwrap().f2;
        prop_assert!((f1 - f2).abs() <= 1e-9 * f1.abs().max(1.0));
    }

    #[test]
    fn every_solution_solves((s, j) in with_matrix()) {
        let r = solve_all(&j, s, &SolveOptions::default()).unwrap();
        let tol = 1e-9 * j.max_abs().max(1.0);
        for sol in &r.exact {
            prop_assert!(residual(&sol.potential.a, &j, s).unwrap().max_abs <= tol);
        }
        for f in &r.families {
            for t in [1.0, -0.7, 2.5] {
                let a = f.member(t).unwrap();
                prop_assert!(residual(&a, &j, s).unwrap().max_abs <= tol);
            }
        }
    }

    #[test]
    fn canonical_keys_round_trip(d in 0usize..=1, mut vx in prop::collection::vec(positive(), 0..=2),
                                 vy in prop::collection::vec(positive(), 0..=1), seed in any::<u64>()) {
        prop_assume!(d + vx.len() + vy.len() <= 3);
        vx.sort_by(|a, b| b.total_cmp(a));
        let s = Signature::new(3, 2).unwrap();
        let opts = SolveOptions::default();
        let key = ClassKey::from_values(d, &vx, &vy, &Degeneracy::default()).unwrap();
        let sigma = key.canonical_current(s).unwrap();
        let (q, p) = frame(s, seed);
        let j = pseudo_inverse_of(&q, s).unwrap().matmul(&sigma).unwrap().matmul(&p.transpose()).unwrap();
        let back = class_of(&j, s, &opts).unwrap();
        prop_assert_eq!(back.current, key.current);
        for (a, b) in back.jvals.iter().zip(&key.jvals) {
            prop_assert!((a - b).abs() <= 1e-7 * a.abs().max(1.0));
        }
    }

    #[test]
    fn hyper_counts_and_pairs(j1 in positive(), j2 in positive(), j3 in positive()) {
        let set = solve_hyper_triple(j1, j2, j3).unwrap();
        prop_assert!([2, 4, 6].contains(&set.solutions.len()), "{} solutions", set.solutions.len());
        for s in &set.solutions {
            let b = s.b;
            let f = [
                b[0] * (b[1] * b[1] - b[2] * b[2]) - j1,
                b[1] * (b[0] * b[0] - b[2] * b[2]) - j2,
                b[2] * (b[0] * b[0] + b[1] * b[1]) - j3,
            ];
            prop_assert!(f.iter().all(|v| v.abs() <= 1e-9 * j3.max(j1).max(j2).max(1.0)));
        }
    }

    #[test]
    fn euclid_counts(j1 in positive(), j2 in positive(), j3 in positive()) {
        let set = solve_euclid_triple(j1, j2, j3).unwrap();
        prop_assert!([1, 2].contains(&set.solutions.len()));
        for s in &set.solutions {
            let b = s.b;
            for i in 0..3 {
                let (u, v) = ((i + 1) % 3, (i + 2) % 3);
                let f = b[i] * (b[u] * b[u] + b[v] * b[v]) - [j1, j2, j3][i];
                prop_assert!(f.abs() <= 1e-9 * j1.max(j2).max(j3).max(1.0));
            }
        }
    }

    #[test]
    fn pair_is_unique(j1 in positive(), j2 in positive()) {
        let p = solve_pair(j1, j2).unwrap();
        let b = p.solution.unwrap();
        prop_assert!((b[0] * b[1] * b[1] - j1).abs() <= 1e-10 * j1.max(1.0));
        prop_assert!((b[1] * b[0] * b[0] - j2).abs() <= 1e-10 * j2.max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn batch_modes_agree(items in prop::collection::vec(with_matrix(), 1..12)) {
        let opts = SolveOptions::default();
        let items: Vec<(RealMatrix, Signature)> = items.into_iter().map(|(s, j)| (j, s)).collect();
        let seq = solve_batch(&items, &opts, Execution::Sequential);
        let par = solve_batch(&items, &opts, Execution::Parallel);
        for (a, b) in seq.iter().zip(&par) {
            let (a, b) = (a.as_ref().unwrap(), b.as_ref().unwrap());
            prop_assert_eq!(a.exact.len(), b.exact.len());
            for (x, y) in a.exact.iter().zip(&b.exact) {
                prop_assert_eq!(&x.potential.a, &y.potential.a);
            }
        }
    }
}
