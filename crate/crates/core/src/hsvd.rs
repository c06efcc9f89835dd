//! Hyperbolic singular value decomposition `L^T A R = Sigma` with `L` in `O(p,q)`
//! and `R` in `O(N)`.

use crate::error::{Error, Result};
use crate::linalg::{eta_rows, metric, normalize_sign, sym_eigen, RealMatrix, Signature};

/// Rank threshold and condition-warning threshold, both relative to `max(1, |W|_max)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankTolerance {
    pub rank: f64,
    pub cond: f64,
}

impl Default for RankTolerance {
    fn default() -> Self {
        RankTolerance {
            rank: 1e-9,
            cond: 1e-6,
        }
    }
}

impl RankTolerance {
    pub fn with_rank(rank: f64) -> Self {
        RankTolerance {
            rank,
            cond: rank.max(1e-6),
        }
    }

    fn validate(&self) -> Result<()> {
        for t in [self.rank, self.cond] {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::InvalidTolerance(t));
            }
        }
        Ok(())
    }
}

/// The block-canonical matrix `Sigma` together with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalForm {
    pub sigma: RealMatrix,
    pub x: usize,
    pub y: usize,
    pub d: usize,
    pub values_x: Vec<f64>,
    pub values_y: Vec<f64>,
}

impl CanonicalForm {
    /// Builds the canonical layout for the given signature and values.
    ///
    /// Columns are ordered `X`, `Y`, `I_d`, zeros; the identity block is repeated
    /// in the rows just after `X` and just after `Y`.
    pub fn new(sig: Signature, cols: usize, values_x: &[f64], values_y: &[f64], d: usize) -> Result<Self> {
        let (p, _) = (sig.p(), sig.q());
        let x = values_x.len();
        let y = values_y.len();
        if x + y + d > cols || x + d > sig.p() || y + d > sig.q() {
            return Err(Error::Dimension(format!(
                "parameters (x, y, d) = ({x}, {y}, {d}) do not fit signature {sig} with {cols} columns"
            )));
        }
        let mut sigma = RealMatrix::zeros(sig.n(), cols);
        for (i, &v) in values_x.iter().enumerate() {
            sigma[(i, i)] = v;
        }
        for (i, &v) in values_y.iter().enumerate() {
            sigma[(p + i, x + i)] = v;
        }
        for k in 0..d {
            sigma[(x + k, x + y + k)] = 1.0;
            sigma[(p + y + k, x + y + k)] = 1.0;
        }
        Ok(CanonicalForm {
            sigma,
            x,
            y,
            d,
            values_x: values_x.to_vec(),
            values_y: values_y.to_vec(),
        })
    }

    /// Hyperbolic singular values: `values_x` followed by `values_y`.
    pub fn values(&self) -> Vec<f64> {
        self.values_x.iter().chain(&self.values_y).copied().collect()
    }
}

/// Result of [`hsvd`].
#[derive(Debug, Clone, PartialEq)]
pub struct HsvdDecomposition {
    pub l: RealMatrix,
    pub r: RealMatrix,
    pub canon: CanonicalForm,
    /// Eigenvalues of `A^T eta A` lying between the rank and condition thresholds.
    pub condition_warnings: Vec<String>,
}

/// Parameters `(x, y, d)` of `A` without building the factors.
pub fn canonical_params(a: &RealMatrix, sig: Signature, tol: &RankTolerance) -> Result<(usize, usize, usize)> {
    check_rows(a, sig)?;
    tol.validate()?;
    let w = gram_eta(a, sig)?;
    let ew = sym_eigen(&w, 1e-9)?;
    let th = tol.rank * w.max_abs().max(1.0);
    let x = ew.values.iter().filter(|&&v| v > th).count();
    let y = ew.values.iter().filter(|&&v| v < -th).count();
    let rank = matrix_rank(a, tol)?;
    Ok((x, y, rank.saturating_sub(x + y)))
}

fn matrix_rank(a: &RealMatrix, tol: &RankTolerance) -> Result<usize> {
    let g = a.transpose().matmul(a)?;
    let e = sym_eigen(&g, 1e-9)?;
    let th = tol.rank * g.max_abs().max(1.0);
    Ok(e.values.iter().filter(|&&v| v > th).count())
}

fn check_rows(a: &RealMatrix, sig: Signature) -> Result<()> {
    if a.rows() != sig.n() {
        return Err(Error::Dimension(format!(
            "matrix has {} rows but signature {sig} needs {}",
            a.rows(),
            sig.n()
        )));
    }
    Ok(())
}

fn gram_eta(a: &RealMatrix, sig: Signature) -> Result<RealMatrix> {
    let mut w = a.transpose().matmul(&eta_rows(sig, a))?;
    for i in 0..w.rows() {
        for j in (i + 1)..w.cols() {
            let m = 0.5 * (w[(i, j)] + w[(j, i)]);
            w[(i, j)] = m;
            w[(j, i)] = m;
        }
    }
    Ok(w)
}

fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

fn eta_dot(sig: Signature, u: &[f64], v: &[f64]) -> f64 {
    u.iter()
        .zip(v)
        .enumerate()
        .map(|(i, (a, b))| sig.eta(i) * a * b)
        .sum()
}

/// Computes the hyperbolic SVD of an `n x N` matrix.
pub fn hsvd(a: &RealMatrix, sig: Signature, tol: &RankTolerance) -> Result<HsvdDecomposition> {
    check_rows(a, sig)?;
    tol.validate()?;
    let n = sig.n();
    let cols = a.cols();
    let w = gram_eta(a, sig)?;
    let scale = w.max_abs().max(1.0);
    let th = tol.rank * scale;
    let ew = sym_eigen(&w, 1e-9)?;

    let mut warnings = Vec::new();
    for &v in &ew.values {
        if v.abs() > th && v.abs() <= tol.cond * scale {
            warnings.push(format!(
                "eigenvalue {v:e} of A^T eta A is close to the rank threshold {th:e}"
            ));
        }
    }

    let pos: Vec<usize> = (0..cols).filter(|&i| ew.values[i] > th).collect();
    let mut neg: Vec<usize> = (0..cols).filter(|&i| ew.values[i] < -th).collect();
    neg.sort_by(|&i, &j| ew.values[i].total_cmp(&ew.values[j]));
    let zero: Vec<usize> = (0..cols).filter(|&i| ew.values[i].abs() <= th).collect();

    let ar = |r: &[f64]| -> Vec<f64> {
        (0..n).map(|mu| dot(a.row(mu), r)).collect()
    };

    // Non-isotropic directions.
    let mut u_pos = Vec::new();
    let mut vals_x = Vec::new();
    let mut r_cols = Vec::new();
    for &i in &pos {
        let r = ew.vectors.column(i);
        let s = ew.values[i].sqrt();
        u_pos.push(ar(&r).iter().map(|v| v / s).collect::<Vec<_>>());
        vals_x.push(s);
        r_cols.push(r);
    }
    let mut u_neg = Vec::new();
    let mut vals_y = Vec::new();
    for &i in &neg {
        let r = ew.vectors.column(i);
        let s = (-ew.values[i]).sqrt();
        u_neg.push(ar(&r).iter().map(|v| v / s).collect::<Vec<_>>());
        vals_y.push(s);
        r_cols.push(r);
    }

    // Split the null space of W into isotropic and kernel directions.
    let z = zero.len();
    let mut iso_r = Vec::new();
    let mut ker_r = Vec::new();
    if z > 0 {
        let zb: Vec<Vec<f64>> = zero.iter().map(|&i| ew.vectors.column(i)).collect();
        let az: Vec<Vec<f64>> = zb.iter().map(|r| ar(r)).collect();
        let mut g = RealMatrix::zeros(z, z);
        for i in 0..z {
            for j in 0..z {
                g[(i, j)] = dot(&az[i], &az[j]);
            }
        }
        let ata = a.transpose().matmul(a)?;
        let rank_th = tol.rank * ata.max_abs().max(1.0);
        let eg = sym_eigen(&g, 1e-9)?;
        for k in 0..z {
            let coef = eg.vectors.column(k);
            let mut r = vec![0.0; cols];
            for (c, zr) in coef.iter().zip(&zb) {
                for (ri, zi) in r.iter_mut().zip(zr) {
                    *ri += c * zi;
                }
            }
            normalize_sign(&mut r);
            if eg.values[k] > rank_th {
                iso_r.push(r);
            } else {
                ker_r.push(r);
            }
        }
    }
    let d = iso_r.len();
    let x = u_pos.len();
    let y = u_neg.len();
    if x + d > sig.p() || y + d > sig.q() {
        return Err(Error::Completion(format!(
            "parameters (x, y, d) = ({x}, {y}, {d}) exceed signature {sig}"
        )));
    }

    // Paired null columns: A r_k = m+_k + m-_k with m+ timelike unit, m- spacelike unit.
    let mut m_plus = Vec::new();
    let mut m_minus = Vec::new();
    if d > 0 {
        let v: Vec<Vec<f64>> = iso_r.iter().map(|r| ar(r)).collect();
        let signed: Vec<(f64, &Vec<f64>)> = u_pos
            .iter()
            .map(|u| (1.0, u))
            .chain(u_neg.iter().map(|u| (-1.0, u)))
            .collect();
        // w0_k = eta v_k projected eta-orthogonally off span(u).
        let mut w0: Vec<Vec<f64>> = v
            .iter()
            .map(|vk| {
                let mut e: Vec<f64> = vk.iter().enumerate().map(|(i, x)| sig.eta(i) * x).collect();
                for (eps, u) in &signed {
                    let c = eps * eta_dot(sig, u, &e);
                    for (ei, ui) in e.iter_mut().zip(u.iter()) {
                        *ei -= c * ui;
                    }
                }
                e
            })
            .collect();
        // Solve G X = I for the dual basis, G = V^T V (Euclidean).
        let mut gm = RealMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                gm[(i, j)] = eta_dot(sig, &v[i], &w0[j]);
            }
        }
        let ginv = gm.inverse().map_err(|_| {
            Error::Completion("isotropic directions have a singular pairing".into())
        })?;
        let mut w1 = vec![vec![0.0; n]; d];
        for k in 0..d {
            for l in 0..d {
                let c = 2.0 * ginv[(l, k)];
                for i in 0..n {
                    w1[k][i] += c * w0[l][i];
                }
            }
        }
        // Make the dual vectors isotropic: w = w1 - 1/4 sum_l <w1_k, w1_l> v_l.
        let mut wd = w1.clone();
        for k in 0..d {
            for l in 0..d {
                let s = eta_dot(sig, &w1[k], &w1[l]);
                for i in 0..n {
                    wd[k][i] -= 0.25 * s * v[l][i];
                }
            }
        }
        w0.clear();
        for k in 0..d {
            m_plus.push((0..n).map(|i| 0.5 * (v[k][i] + wd[k][i])).collect::<Vec<_>>());
            m_minus.push((0..n).map(|i| 0.5 * (v[k][i] - wd[k][i])).collect::<Vec<_>>());
        }
    }

    // Complete to a full eta-orthonormal basis.
    let mut built: Vec<Vec<f64>> = Vec::new();
    built.extend(u_pos.iter().cloned());
    built.extend(m_plus.iter().cloned());
    built.extend(u_neg.iter().cloned());
    built.extend(m_minus.iter().cloned());
    let (extra_pos, extra_neg) = complete_basis(sig, &built, sig.p() - x - d, sig.q() - y - d)?;

    let mut m = RealMatrix::zeros(n, n);
    let mut col = 0;
    for c in u_pos.iter().chain(&m_plus).chain(&extra_pos) {
        m.set_column(col, c);
        col += 1;
    }
    for c in u_neg.iter().chain(&m_minus).chain(&extra_neg) {
        m.set_column(col, c);
        col += 1;
    }
    // Nearly null columns give large boosts; polish M^T eta M = eta to first order.
    for _ in 0..2 {
        let f = m.transpose().matmul(&eta_rows(sig, &m))?.sub(&metric(sig))?;
        if f.max_abs() <= f64::EPSILON {
            break;
        }
        let corr = RealMatrix::identity(n).sub(&eta_rows(sig, &f).scale(0.5))?;
        m = m.matmul(&corr)?;
    }
    // L = eta M eta satisfies L^T = M^{-1}.
    let l =eta_rows(sig, &eta_rows(sig, &m.transpose()).transpose());

    let mut r = RealMatrix::zeros(cols, cols);
    for (k, c) in r_cols.iter().chain(&iso_r).chain(&ker_r).enumerate() {
        r.set_column(k, c);
    }
    let canon = CanonicalForm::new(sig, cols, &vals_x, &vals_y, d)?;
    Ok(HsvdDecomposition {
        l,
        r,
        canon,
        condition_warnings: warnings,
    })
}

/// Finds `np` timelike and `nq` spacelike unit vectors eta-orthogonal to `built`
/// and to each other.
fn complete_basis(sig: Signature, built: &[Vec<f64>], np: usize, nq: usize) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let n = sig.n();
    let k = built.len();
    if np + nq == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    // Euclidean null space of the rows (eta c)^T.
    let mut g = RealMatrix::zeros(n, n);
    for c in built {
        let e: Vec<f64> = c.iter().enumerate().map(|(i, x)| sig.eta(i) * x).collect();
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] += e[i] * e[j];
            }
        }
    }
    let eg = sym_eigen(&g, 1e-9)?;
    let basis: Vec<Vec<f64>> = (k..n).map(|i| eg.vectors.column(i)).collect();
    let m = basis.len();
    let mut s = RealMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            s[(i, j)] = eta_dot(sig, &basis[i], &basis[j]);
        }
    }
    let es = sym_eigen(&s, 1e-9)?;
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (idx, &lam) in es.values.iter().enumerate() {
        if lam.abs() < 1e-8 {
            return Err(Error::Completion(format!(
                "complementary direction {idx} is nearly null (norm {lam:e})"
            )));
        }
        let coef = es.vectors.column(idx);
        let mut v = vec![0.0; n];
        for (c, b) in coef.iter().zip(&basis) {
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi += c * bi;
            }
        }
        let s = lam.abs().sqrt();
        v.iter_mut().for_each(|x| *x /= s);
        if lam > 0.0 {
            pos.push(v);
        } else {
            neg.push(v);
        }
    }
    if pos.len() != np || neg.len() != nq {
        return Err(Error::Completion(format!(
            "complement has inertia ({}, {}), expected ({np}, {nq})",
            pos.len(),
            neg.len()
        )));
    }
    Ok((pos, neg))
}

/// Canonicalized current: `Q J P = Sigma^J` with `Q` in `O(p,q)` and `P` in `SO(3)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalCurrent {
    pub decomposition: HsvdDecomposition,
    pub q: RealMatrix,
    pub p: RealMatrix,
}

impl CanonicalCurrent {
    pub fn sigma(&self) -> &RealMatrix {
        &self.decomposition.canon.sigma
    }
}

/// Brings a current to canonical form using a proper rotation on the right.
pub fn canonicalize_current(j: &RealMatrix, sig: Signature, tol: &RankTolerance) -> Result<CanonicalCurrent> {
    if j.cols() != 3 {
        return Err(Error::Dimension(format!("current must have 3 columns, got {}", j.cols())));
    }
    let dec = hsvd(j, sig, tol)?;
    let mut q = dec.l.transpose();
    let mut p = dec.r.clone();
    if p.det3()? < 0.0 {
        p = p.scale(-1.0);
        q = q.scale(-1.0);
    }
    Ok(CanonicalCurrent {
        decomposition: dec,
        q,
        p,
    })
}
