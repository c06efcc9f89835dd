use crate::error::{Error, Result};
use crate::linalg::{RealMatrix, Signature};

/// Field strength `F^{mu nu}_c = -(A^mu x A^nu)_c` of a constant potential and the invariant `F^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Strength {
    n: usize,
    /// Entries for `mu < nu` in lexicographic order.
    upper: Vec<[f64; 3]>,
    /// Coefficient of the identity in `F_{mu nu} F^{mu nu}`.
    pub f2: f64,
}

impl Strength {
    fn index(&self, mu: usize, nu: usize) -> usize {
        // position of (mu, nu), mu < nu, in row-major upper-triangle order
        mu * self.n - mu * (mu + 1) / 2 + (nu - mu - 1)
    }

    /// `F^{mu nu}_c`, antisymmetric in `(mu, nu)`.
    pub fn component(&self, mu: usize, nu: usize, c: usize) -> f64 {
        use std::cmp::Ordering::*;
        match mu.cmp(&nu) {
            Equal => 0.0,
            Less => self.upper[self.index(mu, nu)][c],
            Greater => -self.upper[self.index(nu, mu)][c],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Components with `mu < nu` whose magnitude exceeds `tol`.
    pub fn nonzero(&self, tol: f64) -> Vec<(usize, usize, usize, f64)> {
        let mut out = Vec::new();
        for mu in 0..self.n {
            for nu in (mu + 1)..self.n {
                for c in 0..3 {
                    let v = self.component(mu, nu, c);
                    if v.abs() > tol {
                        out.push((mu, nu, c, v));
                    }
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.upper
            .iter()
            .flat_map(|v| v.iter())
            .fold(0.0, |m: f64, x| m.max(x.abs()))
    }
}

/// Computes the strength of a constant potential.
pub fn strength_of(a: &RealMatrix, sig: Signature) -> Result<Strength> {
    let n = sig.n();
    if a.rows() != n || a.cols() != 3 {
        return Err(Error::Dimension(format!(
            "potential must be {n}x3 for signature {sig}, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let mut upper = Vec::with_capacity(n * (n - 1) / 2);
    let mut f2 = 0.0;
    for mu in 0..n {
        for nu in (mu + 1)..n {
            let (u, v) = (a.row(mu), a.row(nu));
            let f = [
                -(u[1] * v[2] - u[2] * v[1]),
                -(u[2] * v[0] - u[0] * v[2]),
                -(u[0] * v[1] - u[1] * v[0]),
            ];
            f2 += sig.eta(mu) * sig.eta(nu) * f.iter().map(|x| x * x).sum::<f64>();
            upper.push(f);
        }
    }
    Ok(Strength {
        n,
        upper,
        f2: -0.5 * f2,
    })
}
