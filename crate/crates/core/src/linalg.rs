//! Small dense real matrices, the indefinite metric and a Jacobi eigensolver.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use crate::error::{Error, Result};

/// Default tolerance for orthogonality checks.
pub const DEFAULT_TOL: f64 = 1e-10;

const JACOBI_SWEEPS: usize = 50;
const JACOBI_THRESHOLD: f64 = 1e-13;

/// Metric signature: `p` entries `+1` followed by `q` entries `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    p: usize,
    q: usize,
}

impl Signature {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::InvalidSignature { p, q });
        }
        Ok(Signature { p, q })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.p + self.q
    }

    /// Diagonal metric entry for index `mu`.
    pub fn eta(&self, mu: usize) -> f64 {
        if mu < self.p {
            1.0
        } else {
            -1.0
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

/// Row-major dense matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RealMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Builds a matrix from row-major data, rejecting non-finite entries.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries cannot fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(k) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: k / cols.max(1),
                col: k % cols.max(1),
            });
        }
        Ok(RealMatrix { rows, cols, data })
    }

    /// Builds a matrix from a slice of equally long rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Self::from_row_major(rows.len(), cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[f64]) {
        for (i, &x) in v.iter().enumerate().take(self.rows) {
            self[(i, j)] = x;
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &RealMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: f64) -> Self {
        RealMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn sub(&self, other: &RealMatrix) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(RealMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn add(&self, other: &RealMatrix) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(RealMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    fn check_same_shape(&self, other: &RealMatrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "shape {}x{} differs from {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    /// Largest absolute entry (0 for an empty matrix).
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Max-abs distance to another matrix of the same shape.
    pub fn max_abs_diff(&self, other: &RealMatrix) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest absolute asymmetry `|s_ij - s_ji|`.
    pub fn symmetry_defect(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols.min(self.rows) {
                d = d.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        d
    }

    /// Determinant of a 3x3 matrix by cofactor expansion.
    pub fn det3(&self) -> Result<f64> {
        if self.rows != 3 || self.cols != 3 {
            return Err(Error::Dimension("det3 needs a 3x3 matrix".into()));
        }
        let m = |i, j| self[(i, j)];
        Ok(m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
            - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
            + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)))
    }

    /// Determinant by partial-pivot elimination.
    pub fn det(&self) -> Result<f64> {
        if self.rows != self.cols {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for k in 0..n {
            let piv = (k..n)
                .max_by(|&i, &j| a[i * n + k].abs().total_cmp(&a[j * n + k].abs()))
                .unwrap_or(k);
            if a[piv * n + k] == 0.0 {
                return Ok(0.0);
            }
            if piv != k {
                for j in 0..n {
                    a.swap(k * n + j, piv * n + j);
                }
                det = -det;
            }
            let d = a[k * n + k];
            det *= d;
            for i in (k + 1)..n {
                let f = a[i * n + k] / d;
                for j in k..n {
                    a[i * n + j] -= f * a[k * n + j];
                }
            }
        }
        Ok(det)
    }

    /// Solves `self * X = rhs` by Gaussian elimination with partial pivoting.
    pub fn solve(&self, rhs: &RealMatrix) -> Result<RealMatrix> {
        if self.rows != self.cols || rhs.rows != self.rows {
            return Err(Error::Dimension("solve needs a square system".into()));
        }
        let n = self.rows;
        let m = rhs.cols;
        let mut a = self.data.clone();
        let mut b = rhs.data.clone();
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for k in 0..n {
            let piv = (k..n)
                .max_by(|&i, &j| a[i * n + k].abs().total_cmp(&a[j * n + k].abs()))
                .unwrap_or(k);
            if a[piv * n + k].abs() <= 1e-14 * scale {
                return Err(Error::Singular);
            }
            if piv != k {
                for j in 0..n {
                    a.swap(k * n + j, piv * n + j);
                }
                for j in 0..m {
                    b.swap(k * m + j, piv * m + j);
                }
            }
            let d = a[k * n + k];
            for i in (k + 1)..n {
                let f = a[i * n + k] / d;
                if f == 0.0 {
                    continue;
                }
                for j in k..n {
                    a[i * n + j] -= f * a[k * n + j];
                }
                for j in 0..m {
                    b[i * m + j] -= f * b[k * m + j];
                }
            }
        }
        for k in (0..n).rev() {
            for j in 0..m {
                let mut s = b[k * m + j];
                for i in (k + 1)..n {
                    s -= a[k * n + i] * b[i * m + j];
                }
                b[k * m + j] = s / a[k * n + k];
            }
        }
        RealMatrix::from_row_major(n, m, b)
    }

    pub fn inverse(&self) -> Result<RealMatrix> {
        self.solve(&RealMatrix::identity(self.rows))
    }
}

impl Index<(usize, usize)> for RealMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RealMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &RealMatrix {
    type Output = RealMatrix;

    /// Panics on a shape mismatch; use [`RealMatrix::matmul`] to get an error instead.
    fn mul(self, rhs: &RealMatrix) -> RealMatrix {
        self.matmul(rhs).expect("matrix shapes must agree")
    }
}

impl fmt::Display for RealMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| format!("{v:>12.6}")).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// The metric `diag(1, ..., 1, -1, ..., -1)`.
pub fn metric(sig: Signature) -> RealMatrix {
    let d: Vec<f64> = (0..sig.n()).map(|mu| sig.eta(mu)).collect();
    RealMatrix::diagonal(&d)
}

/// Multiplies rows by the metric, i.e. computes `eta * a`.
pub fn eta_rows(sig: Signature, a: &RealMatrix) -> RealMatrix {
    let mut out = a.clone();
    for i in 0..a.rows().min(sig.n()) {
        if sig.eta(i) < 0.0 {
            for j in 0..a.cols() {
                out[(i, j)] = -out[(i, j)];
            }
        }
    }
    out
}

/// Eigen-decomposition of a symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymEigen {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, matching `values`.
    pub vectors: RealMatrix,
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// Rejects matrices whose asymmetry exceeds `tol * max(1, max|s|)`.
/// Eigenvectors are sign-normalized so that their largest component is positive,
/// and ties keep the original index order.
pub fn sym_eigen(s: &RealMatrix, tol: f64) -> Result<SymEigen> {
    if s.rows() != s.cols() {
        return Err(Error::Dimension("eigendecomposition of a non-square matrix".into()));
    }
    if !(tol >= 0.0) {
        return Err(Error::InvalidTolerance(tol));
    }
    let n = s.rows();
    let defect = s.symmetry_defect();
    if defect > tol * s.max_abs().max(1.0) {
        return Err(Error::NotSymmetric { defect });
    }
    let mut a = s.clone();
    for i in 0..n {
        for j in (i + 1)..n {
            let m = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = m;
            a[(j, i)] = m;
        }
    }
    let norm = a.frobenius();
    let mut v = RealMatrix::identity(n);
    let off = |a: &RealMatrix| -> f64 {
        let mut t = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    t += a[(i, j)] * a[(i, j)];
                }
            }
        }
        t.sqrt()
    };
    let mut converged = off(&a) <= JACOBI_THRESHOLD * norm;
    let mut sweep = 0;
    while !converged && sweep < JACOBI_SWEEPS {
        for pi in 0..n {
            for qi in (pi + 1)..n {
                let apq = a[(pi, qi)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(qi, qi)] - a[(pi, pi)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let akp = a[(k, pi)];
                    let akq = a[(k, qi)];
                    a[(k, pi)] = c * akp - sn * akq;
                    a[(k, qi)] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(pi, k)];
                    let aqk = a[(qi, k)];
                    a[(pi, k)] = c * apk - sn * aqk;
                    a[(qi, k)] = sn * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, pi)];
                    let vkq = v[(k, qi)];
                    v[(k, pi)] = c * vkp - sn * vkq;
                    v[(k, qi)] = sn * vkp + c * vkq;
                }
            }
        }
        sweep += 1;
        converged = off(&a) <= JACOBI_THRESHOLD * norm;
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps: JACOBI_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = RealMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        let mut vec = v.column(i);
        normalize_sign(&mut vec);
        vectors.set_column(col, &vec);
    }
    Ok(SymEigen { values, vectors })
}

/// Flips `v` so that its largest-magnitude component is positive.
pub(crate) fn normalize_sign(v: &mut [f64]) {
    let mut best = 0.0;
    let mut sign = 1.0;
    for &x in v.iter() {
        if x.abs() > best + 1e-12 {
            best = x.abs();
            sign = x.signum();
        }
    }
    if sign < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Checks `Q^T eta Q = eta` entrywise within `tol`.
pub fn is_pseudo_orthogonal(q: &RealMatrix, sig: Signature, tol: f64) -> Result<bool> {
    Ok(pseudo_orthogonality_defect(q, sig)? <= tol)
}

/// Max-abs entry of `Q^T eta Q - eta`.
pub fn pseudo_orthogonality_defect(q: &RealMatrix, sig: Signature) -> Result<f64> {
    let n = sig.n();
    if q.rows() != n || q.cols() != n {
        return Err(Error::Dimension(format!(
            "expected {n}x{n} matrix for signature {sig}, got {}x{}",
            q.rows(),
            q.cols()
        )));
    }
    let g = q.transpose().matmul(&eta_rows(sig, q))?;
    g.max_abs_diff(&metric(sig))
}

/// Max-abs entry of `R^T R - I`.
pub fn orthogonality_defect(r: &RealMatrix) -> Result<f64> {
    if r.rows() != r.cols() {
        return Err(Error::Dimension("orthogonality of a non-square matrix".into()));
    }
    r.transpose().matmul(r)?.max_abs_diff(&RealMatrix::identity(r.rows()))
}

/// `eta Q^T eta`, the inverse of a pseudo-orthogonal `Q`.
pub fn pseudo_inverse_of(q: &RealMatrix, sig: Signature) -> Result<RealMatrix> {
    if q.rows() != sig.n() || q.cols() != sig.n() {
        return Err(Error::Dimension("pseudo-orthogonal inverse needs an n x n matrix".into()));
    }
    let t = eta_rows(sig, &q.transpose());
    Ok(eta_rows(sig, &t.transpose()).transpose())
}
