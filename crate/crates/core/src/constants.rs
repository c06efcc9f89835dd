//! Special ratio at which two invariant branches of the hyper system coincide.
//!
//! For `j1 = j2 = 1 < j3 / (2 sqrt 2)` the hyper system has six solutions. The
//! invariant `F^2` of the `b+` branch crosses that of the `c+-` pair at a single
//! ratio `B* = j3 / j1`, found here by bisection.

use std::sync::OnceLock;

use crate::cubic::solve_hyper_triple;

/// `F^2` of a hyper solution embedded with two timelike and one spacelike column.
pub fn hyper_f2(b: [f64; 3]) -> f64 {
    let [x, y, z] = b.map(|v| v * v);
    -0.5 * (x * y - x * z - y * z)
}

fn branch_f2(ratio: f64, branch: &str) -> Option<f64> {
    let set = solve_hyper_triple(1.0, 1.0, ratio).ok()?;
    set.solutions.iter().find(|s| s.branch == branch).map(|s| hyper_f2(s.b))
}

/// Difference of the two crossing `F^2` branches at `j = (1, 1, ratio)`.
pub fn crossing_gap(ratio: f64) -> f64 {
    match (branch_f2(ratio, "b+"), branch_f2(ratio, "c++")) {
        (Some(a), Some(b)) => a - b,
        _ => f64::NAN,
    }
}

/// `B*`, the ratio `j3 / j1` of the coincidence.
pub fn b_star() -> f64 {
    static B: OnceLock<f64> = OnceLock::new();
    *B.get_or_init(|| {
        let (mut lo, mut hi) = (5.0, 12.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if crossing_gap(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 4.0 * f64::EPSILON * hi {
                break;
            }
        }
        0.5 * (lo + hi)
    })
}

/// `s* = (B* + sqrt(B*^2 - 8)) / 2`, so that `B* = (s*^2 + 2) / s*`.
pub fn s_star() -> f64 {
    let b = b_star();
    0.5 * (b + (b * b - 8.0).sqrt())
}

/// `z+* = (-1 + sqrt(1 + B*^2)) / B*`.
pub fn z_plus_star() -> f64 {
    let b = b_star();
    (-1.0 + (1.0 + b * b).sqrt()) / b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn approximate_values() {
        assert!((s_star() - 7.39438).abs() < 5e-5);
        assert!((b_star() - 7.66486).abs() < 5e-5);
        assert!((z_plus_star() - 0.878009).abs() < 5e-6);
        assert!(b_star() > 2.0 * 2f64.sqrt());
        let s = s_star();
        assert!(((s * s + 2.0) / s - b_star()).abs() < 1e-12);
    }

    #[test]
    fn branches_cross_once() {
        assert!(crossing_gap(5.0) < 0.0);
        assert!(crossing_gap(12.0) > 0.0);
        let b = b_star();
        let f = branch_f2(b, "b+").unwrap();
        assert!(crossing_gap(b).abs() <= 1e-6 * f);
    }
}
