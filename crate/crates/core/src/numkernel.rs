//! Dense complex linear algebra with explicit tolerance semantics.
//!
//! Matrices are small (a few dozen rows at most) and stored row-major. Decompositions
//! are delegated to `nalgebra`; this module owns the tolerance rules so that every
//! caller counts rank the same way.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Cx = Complex64;

pub(crate) const ZERO: Cx = Cx::new(0.0, 0.0);
pub(crate) const ONE: Cx = Cx::new(1.0, 0.0);

/// Relative threshold used when counting singular values.
///
/// A singular value `s` counts towards the rank when
/// `s > rank_rel * s_max * max(rows, cols)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerance {
    pub rank_rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rank_rel: 1e-10 }
    }
}

impl Tolerance {
    pub fn new(rank_rel: f64) -> Self {
        Tolerance { rank_rel }
    }

    fn threshold(&self, sigma_max: f64, rows: usize, cols: usize) -> f64 {
        self.rank_rel * sigma_max * rows.max(cols) as f64
    }
}

pub(crate) fn is_finite(z: Cx) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct CVector {
    entries: Vec<Cx>,
}

impl CVector {
    pub fn new(entries: Vec<Cx>) -> Self {
        CVector { entries }
    }

    pub fn zeros(dim: usize) -> Self {
        CVector { entries: vec![ZERO; dim] }
    }

    /// The `k`-th standard basis vector of `C^dim`.
    pub fn unit(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.entries[k] = ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Cx] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Cx> {
        self.entries
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self, other>`, linear in `self` and conjugate-linear in `other`.
    pub fn inner(&self, other: &CVector) -> Cx {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    pub fn scale(&self, s: Cx) -> CVector {
        CVector::new(self.entries.iter().map(|z| z * s).collect())
    }

    pub fn conj(&self) -> CVector {
        CVector::new(self.entries.iter().map(|z| z.conj()).collect())
    }

    pub fn add(&self, other: &CVector) -> CVector {
        CVector::new(self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &CVector) -> CVector {
        CVector::new(self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect())
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|z| is_finite(*z))
    }
}

impl std::ops::Index<usize> for CVector {
    type Output = Cx;
    fn index(&self, i: usize) -> &Cx {
        &self.entries[i]
    }
}

/// `det [[<a,a>, <a,b>], [<b,a>, <b,b>]] / (|a|^2 |b|^2)`, which is 0 for parallel
/// vectors and 1 for orthogonal ones. Returns 0 if either vector vanishes.
pub fn normalized_gram_det(a: &CVector, b: &CVector) -> f64 {
    let aa = a.inner(a).re;
    let bb = b.inner(b).re;
    if aa == 0.0 || bb == 0.0 {
        return 0.0;
    }
    let ab = a.inner(b);
    ((aa * bb - ab.norm_sqr()) / (aa * bb)).max(0.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Cx>,
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Cx>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid("matrix dimensions must be positive"));
        }
        if data.len() != rows * cols {
            return Err(Error::invalid(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(CMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cx) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    /// Builds the `dim x columns.len()` matrix whose columns are the given vectors.
    pub fn from_columns(dim: usize, columns: &[CVector]) -> Result<Self> {
        if columns.iter().any(|c| c.dim() != dim) {
            return Err(Error::invalid("all columns must have the same dimension"));
        }
        let m = CMatrix::from_fn(dim, columns.len(), |i, j| columns[j][i]);
        CMatrix::new(dim, columns.len(), m.data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Cx] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Cx {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, z: Cx) {
        self.data[i * self.cols + j] = z;
    }

    pub fn column(&self, j: usize) -> CVector {
        CVector::new((0..self.rows).map(|i| self.get(i, j)).collect())
    }

    pub fn select_columns(&self, idx: &[usize]) -> CMatrix {
        CMatrix::from_fn(self.rows, idx.len(), |i, j| self.get(i, idx[j]))
    }

    pub fn transpose(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn conj(&self) -> CMatrix {
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn matmul(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.cols != other.rows {
            return Err(Error::invalid("inner dimensions do not agree"));
        }
        Ok(CMatrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| self.get(i, k) * other.get(k, j)).sum()
        }))
    }

    pub fn mul_vec(&self, v: &CVector) -> Result<CVector> {
        if self.cols != v.dim() {
            return Err(Error::invalid("vector dimension does not match matrix"));
        }
        Ok(CVector::new(
            (0..self.rows)
                .map(|i| (0..self.cols).map(|k| self.get(i, k) * v[k]).sum())
                .collect(),
        ))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| is_finite(*z))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn to_dmatrix(&self) -> DMatrix<Cx> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    fn check_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::invalid("matrix has non-finite entries"))
        }
    }
}

/// Singular values, largest first.
pub fn singular_values(m: &CMatrix) -> Result<Vec<f64>> {
    m.check_finite()?;
    let mut sv: Vec<f64> = m.to_dmatrix().singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

fn rank_from_singular_values(sv: &[f64], rows: usize, cols: usize, tol: &Tolerance) -> usize {
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    let thr = tol.threshold(smax, rows, cols);
    sv.iter().filter(|&&s| s > thr).count()
}

pub fn rank(m: &CMatrix, tol: &Tolerance) -> Result<usize> {
    let sv = singular_values(m)?;
    Ok(rank_from_singular_values(&sv, m.rows, m.cols, tol))
}

/// Orthonormal basis of the numerical null space `{v : M v ≈ 0}`.
///
/// The number of basis vectors is always `cols - rank(M, tol)`.
pub fn null_space_basis(m: &CMatrix, tol: &Tolerance) -> Result<Vec<CVector>> {
    m.check_finite()?;
    let n = m.cols;
    // Pad with zero rows so the decomposition returns a complete set of right
    // singular vectors.
    let mut a = m.to_dmatrix();
    if m.rows < n {
        a = a.resize_vertically(n, ZERO);
    }
    let svd = a.svd(false, true);
    let v_t = svd.v_t.as_ref().expect("right singular vectors requested");
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let rank = {
        let mut sorted = sv.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        rank_from_singular_values(&sorted, m.rows, m.cols, tol)
    };
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&i, &j| sv[i].total_cmp(&sv[j]));
    let nullity = n - rank;
    let raw: Vec<CVector> = order
        .iter()
        .take(nullity)
        .map(|&i| CVector::new((0..n).map(|k| v_t[(i, k)].conj()).collect()))
        .collect();
    Ok(orthonormalize(raw))
}

/// Modified Gram–Schmidt, applied twice. Vectors that collapse are dropped.
pub(crate) fn orthonormalize(vs: Vec<CVector>) -> Vec<CVector> {
    let mut out: Vec<CVector> = Vec::with_capacity(vs.len());
    for mut v in vs {
        for _ in 0..2 {
            for q in &out {
                let c = v.inner(q);
                v = v.sub(&q.scale(c));
            }
        }
        let nv = v.norm();
        if nv > 1e-8 {
            out.push(v.scale(Cx::new(1.0 / nv, 0.0)));
        }
    }
    out
}

/// Determinant by LU factorization with partial pivoting.
pub fn determinant(m: &CMatrix) -> Result<Cx> {
    if m.rows != m.cols {
        return Err(Error::invalid("determinant requires a square matrix"));
    }
    m.check_finite()?;
    Ok(m.to_dmatrix().lu().determinant())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    #[test]
    fn rank_of_zero_and_identity() {
        let tol = Tolerance::default();
        assert_eq!(rank(&CMatrix::zeros(3, 3), &tol).unwrap(), 0);
        assert_eq!(rank(&CMatrix::identity(4), &tol).unwrap(), 4);
    }

    #[test]
    fn rank_of_outer_product_is_one() {
        let u = [c(1.0, 2.0), c(-0.5, 0.3), c(0.7, -1.1)];
        let v = [c(0.2, 0.9), c(1.5, -0.4), c(-2.0, 0.1)];
        let m = CMatrix::from_fn(3, 3, |i, j| u[i] * v[j]);
        assert_eq!(rank(&m, &Tolerance::default()).unwrap(), 1);
    }

    #[test]
    fn non_finite_entries_are_rejected() {
        let mut m = CMatrix::identity(2);
        m.set(0, 1, c(f64::NAN, 0.0));
        assert!(matches!(rank(&m, &Tolerance::default()), Err(Error::InvalidInput(_))));
        assert!(matches!(null_space_basis(&m, &Tolerance::default()), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn null_space_examples() {
        let tol = Tolerance::default();
        assert!(null_space_basis(&CMatrix::identity(3), &tol).unwrap().is_empty());

        let z = null_space_basis(&CMatrix::zeros(2, 2), &tol).unwrap();
        assert_eq!(z.len(), 2);
        assert!(z[0].inner(&z[1]).norm() < 1e-12);

        let row = CMatrix::new(1, 2, vec![ONE, ONE]).unwrap();
        let b = null_space_basis(&row, &tol).unwrap();
        assert_eq!(b.len(), 1);
        // proportional to (1, -1)/sqrt 2
        let v = &b[0];
        assert!((v.norm() - 1.0).abs() < 1e-12);
        assert!((v[0] + v[1]).norm() < 1e-12);
        assert!((v[0].norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn determinant_examples() {
        assert!((determinant(&CMatrix::identity(5)).unwrap() - ONE).norm() < 1e-15);
        let d = CMatrix::new(2, 2, vec![c(0.0, 2.0), ZERO, ZERO, c(3.0, 0.0)]).unwrap();
        assert!((determinant(&d).unwrap() - c(0.0, 6.0)).norm() < 1e-14);
        assert!(matches!(determinant(&CMatrix::zeros(2, 3)), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn gram_det_limits() {
        let e1 = CVector::unit(2, 0);
        let e2 = CVector::unit(2, 1);
        assert!((normalized_gram_det(&e1, &e2) - 1.0).abs() < 1e-15);
        assert!(normalized_gram_det(&e1, &e1.scale(c(0.0, 3.0))) < 1e-15);
        assert_eq!(normalized_gram_det(&e1, &CVector::zeros(2)), 0.0);
    }
}
