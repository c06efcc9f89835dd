//! Random elements of `SO(3)`, `O(k)` and `O(p,q)`, for tests and synthetic inputs.

use rand::Rng;

use crate::linalg::{RealMatrix, Signature};

/// Random orthogonal `k x k` matrix by Gram-Schmidt on uniform entries.
pub fn random_orthogonal<R: Rng + ?Sized>(k: usize, rng: &mut R) -> RealMatrix {
    loop {
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity(k);
        let mut ok = true;
        for _ in 0..k {
            let mut v: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
            for _ in 0..2 {
                for c in &cols {
                    let d: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
                    v.iter_mut().zip(c).for_each(|(a, b)| *a -= d * b);
                }
            }
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n < 1e-3 {
                ok = false;
                break;
            }
            v.iter_mut().for_each(|x| *x /= n);
            cols.push(v);
        }
        if ok {
            let mut m = RealMatrix::zeros(k, k);
            for (j, c) in cols.iter().enumerate() {
                m.set_column(j, c);
            }
            return m;
        }
    }
}

/// Random proper rotation in three dimensions.
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> RealMatrix {
    let mut m = random_orthogonal(3, rng);
    if m.det3().unwrap_or(1.0) < 0.0 {
        for i in 0..3 {
            m[(i, 0)] = -m[(i, 0)];
        }
    }
    m
}

/// Random pseudo-orthogonal matrix `K1 * B * K2` with `K1, K2` block orthogonal
/// and `B` a product of boosts with rapidities in `[-max_rapidity, max_rapidity]`.
pub fn random_pseudo_orthogonal<R: Rng + ?Sized>(sig: Signature, max_rapidity: f64, rng: &mut R) -> RealMatrix {
    let block = |rng: &mut R| {
        let (p, q) = (sig.p(), sig.q());
        let op = random_orthogonal(p, rng);
        let oq = random_orthogonal(q, rng);
        let mut m = RealMatrix::zeros(sig.n(), sig.n());
        for i in 0..p {
            for j in 0..p {
                m[(i, j)] = op[(i, j)];
            }
        }
        for i in 0..q {
            for j in 0..q {
                m[(p + i, p + j)] = oq[(i, j)];
            }
        }
        m
    };
    let k1 = block(rng);
    let k2 = block(rng);
    let mut b = RealMatrix::identity(sig.n());
    for i in 0..sig.p().min(sig.q()) {
        let t: f64 = if max_rapidity > 0.0 {
            rng.random_range(-max_rapidity..max_rapidity)
        } else {
            0.0
        };
        let (a, c) = (i, sig.p() + i);
        b[(a, a)] = t.cosh();
        b[(c, c)] = t.cosh();
        b[(a, c)] = t.sinh();
        b[(c, a)] = t.sinh();
    }
    &(&k1 * &b) * &k2
}
