use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{CMatrix, CVector, Cx, ONE, ZERO};
use crate::phases::PhaseSet;

/// A finite system `g_1, ..., g_m` in `C^d`, stored as the `d x m` matrix of columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SystemRepr", into = "SystemRepr")]
pub struct VectorSystem {
    f: CMatrix,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemRepr {
    d: usize,
    vectors: Vec<Vec<Cx>>,
}

impl TryFrom<SystemRepr> for VectorSystem {
    type Error = Error;
    fn try_from(r: SystemRepr) -> Result<Self> {
        let cols = r.vectors.into_iter().map(CVector::new).collect::<Vec<_>>();
        VectorSystem::from_columns(r.d, cols)
    }
}

impl From<VectorSystem> for SystemRepr {
    fn from(s: VectorSystem) -> Self {
        SystemRepr {
            d: s.d(),
            vectors: (0..s.m()).map(|j| s.column(j).into_entries()).collect(),
        }
    }
}

impl VectorSystem {
    pub fn new(f: CMatrix) -> Result<Self> {
        if !f.is_finite() {
            return Err(Error::invalid("system has non-finite entries"));
        }
        Ok(VectorSystem { f })
    }

    pub fn from_columns(d: usize, columns: Vec<CVector>) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        if columns.is_empty() {
            return Err(Error::invalid("system must contain at least one vector"));
        }
        if let Some(j) = columns.iter().position(|c| c.dim() != d) {
            return Err(Error::invalid(format!(
                "vector {j} has length {}, expected {d}",
                columns[j].dim()
            )));
        }
        VectorSystem::new(CMatrix::from_columns(d, &columns)?)
    }

    /// The standard basis `e_1, ..., e_d`.
    pub fn standard_basis(d: usize) -> Result<Self> {
        VectorSystem::from_columns(d, (0..d).map(|k| CVector::unit(d, k)).collect())
    }

    pub fn d(&self) -> usize {
        self.f.rows()
    }

    pub fn m(&self) -> usize {
        self.f.cols()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.f
    }

    pub fn column(&self, j: usize) -> CVector {
        self.f.column(j)
    }

    pub fn columns(&self) -> Vec<CVector> {
        (0..self.m()).map(|j| self.column(j)).collect()
    }

    /// Indices of columns that are exactly zero.
    pub fn zero_columns(&self) -> Vec<usize> {
        (0..self.m())
            .filter(|&j| (0..self.d()).all(|i| self.f.get(i, j) == ZERO))
            .collect()
    }

    pub fn max_column_norm(&self) -> f64 {
        (0..self.m()).map(|j| self.column(j).norm()).fold(0.0, f64::max)
    }

    pub fn subsystem(&self, idx: &[usize]) -> Result<VectorSystem> {
        if idx.iter().any(|&j| j >= self.m()) {
            return Err(Error::invalid("column index out of range"));
        }
        VectorSystem::from_columns(self.d(), idx.iter().map(|&j| self.column(j)).collect())
    }

    /// `T g_1, ..., T g_m` for a `d x d` matrix `T`.
    pub fn transform(&self, t: &CMatrix) -> Result<VectorSystem> {
        if t.rows() != self.d() || t.cols() != self.d() {
            return Err(Error::invalid("transform must be d x d"));
        }
        VectorSystem::new(t.matmul(&self.f)?)
    }

    /// `c_1 g_1, ..., c_m g_m`.
    pub fn rescale_columns(&self, c: &[Cx]) -> Result<VectorSystem> {
        if c.len() != self.m() {
            return Err(Error::invalid("one scale factor per column required"));
        }
        VectorSystem::new(CMatrix::from_fn(self.d(), self.m(), |i, j| self.f.get(i, j) * c[j]))
    }

    /// Appends a column.
    pub fn with_column(&self, g: CVector) -> Result<VectorSystem> {
        let mut cols = self.columns();
        cols.push(g);
        VectorSystem::from_columns(self.d(), cols)
    }
}

/// `G(a, b, c) = {(1, 0), (a, 1), (b, 1), (c, 1)}` in `C^2`.
pub fn c2_system(a: Cx, b: Cx, c: Cx) -> VectorSystem {
    let cols = vec![
        CVector::new(vec![ONE, ZERO]),
        CVector::new(vec![a, ONE]),
        CVector::new(vec![b, ONE]),
        CVector::new(vec![c, ONE]),
    ];
    VectorSystem::from_columns(2, cols).expect("fixed shape")
}

/// A phase assignment `θ ∈ Θ^m`, as indices into a [`PhaseSet`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Assignment {
    pub indices: Vec<usize>,
}

impl Assignment {
    pub fn new(indices: Vec<usize>) -> Self {
        Assignment { indices }
    }

    /// The assignment at lexicographic position `k` among `n^m`, first index most significant.
    pub fn from_index(mut k: u64, n: usize, m: usize) -> Self {
        let mut indices = vec![0; m];
        for slot in indices.iter_mut().rev() {
            *slot = (k % n as u64) as usize;
            k /= n as u64;
        }
        Assignment { indices }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.indices.windows(2).all(|w| w[0] == w[1])
    }

    pub fn validate(&self, t: &PhaseSet, m: usize) -> Result<()> {
        if self.indices.len() != m {
            return Err(Error::invalid(format!(
                "assignment has length {}, expected {m}",
                self.indices.len()
            )));
        }
        if self.indices.iter().any(|&k| k >= t.len()) {
            return Err(Error::invalid("assignment index exceeds phase set size"));
        }
        Ok(())
    }

    pub fn values(&self, t: &PhaseSet) -> Vec<Cx> {
        self.indices.iter().map(|&k| t.get(k)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let s = c2_system(Cx::new(0.5, -1.0), ZERO, Cx::new(2.0, 0.0));
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.starts_with(r#"{"d":2,"vectors":[[[1.0,0.0],[0.0,0.0]]"#));
        let back: VectorSystem = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn json_rejects_ragged_vectors() {
        let bad = r#"{"d":2,"vectors":[[[1,0]]]}"#;
        assert!(serde_json::from_str::<VectorSystem>(bad).is_err());
        let empty = r#"{"d":2,"vectors":[]}"#;
        assert!(serde_json::from_str::<VectorSystem>(empty).is_err());
    }

    #[test]
    fn assignment_indexing_is_lexicographic() {
        assert_eq!(Assignment::from_index(0, 3, 3).indices, vec![0, 0, 0]);
        assert_eq!(Assignment::from_index(1, 3, 3).indices, vec![0, 0, 1]);
        assert_eq!(Assignment::from_index(3, 3, 3).indices, vec![0, 1, 0]);
        assert_eq!(Assignment::from_index(26, 3, 3).indices, vec![2, 2, 2]);
    }

    #[test]
    fn zero_columns_are_reported() {
        let s = VectorSystem::from_columns(2, vec![CVector::unit(2, 0), CVector::zeros(2)]).unwrap();
        assert_eq!(s.zero_columns(), vec![1]);
    }
}
