use std::ops::Deref;

use super::state::{check_dim, Amplitude, StateVector};
use crate::error::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-12;
const IDEMPOTENT_TOL: f64 = 1e-10;

/// Dense Hermitian matrix, stored row-major.
///
/// Construction symmetrizes the input as `(A + A^dagger)/2` after checking it
/// is Hermitian to within `1e-12`, so stored entries satisfy the symmetry
/// exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    dim: usize,
    entries: Vec<Amplitude>,
}

impl HermitianOperator {
    pub fn new(dim: usize, entries: Vec<Amplitude>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Malformed("operator must have dim >= 1".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::Malformed(format!(
                "operator of dim {dim} needs {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        if entries.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::Malformed("operator has non-finite entry".into()));
        }
        let mut residual = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                residual = residual.max((entries[i * dim + j] - entries[j * dim + i].conj()).norm());
            }
        }
        if residual > HERMITIAN_TOL {
            return Err(Error::NotHermitian { residual });
        }
        let mut sym = entries.clone();
        for i in 0..dim {
            for j in 0..dim {
                sym[i * dim + j] = (entries[i * dim + j] + entries[j * dim + i].conj()) * 0.5;
            }
        }
        Ok(Self { dim, entries: sym })
    }

    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::new(dim, entries.iter().map(|&x| Amplitude::new(x, 0.0)).collect())
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let dim = values.len();
        let mut entries = vec![Amplitude::new(0.0, 0.0); dim * dim];
        for (i, &v) in values.iter().enumerate() {
            entries[i * dim + i] = Amplitude::new(v, 0.0);
        }
        Self::new(dim, entries)
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![Amplitude::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Amplitude::new(1.0, 0.0);
        }
        Self { dim, entries }
    }

    /// `|s><s|`.
    pub fn outer(state: &StateVector) -> Self {
        let dim = state.dim();
        let a = state.amplitudes();
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(a[i] * a[j].conj());
            }
        }
        Self { dim, entries }
    }

    pub(crate) fn from_entries_unchecked(dim: usize, entries: Vec<Amplitude>) -> Self {
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Amplitude] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> Amplitude {
        self.entries[i * self.dim + j]
    }

    pub fn apply(&self, v: &[Amplitude]) -> Result<Vec<Amplitude>> {
        check_dim(self.dim, v.len())?;
        Ok(self.apply_raw(v))
    }

    pub(crate) fn apply_raw(&self, v: &[Amplitude]) -> Vec<Amplitude> {
        self.entries
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `<bra|self|ket>`.
    pub fn sandwich(&self, bra: &StateVector, ket: &StateVector) -> Result<Amplitude> {
        check_dim(self.dim, bra.dim())?;
        check_dim(self.dim, ket.dim())?;
        let applied = self.apply_raw(ket.amplitudes());
        Ok(super::state::inner_raw(bra.amplitudes(), &applied))
    }

    pub fn add(&self, other: &HermitianOperator) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        Ok(Self {
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a * factor).collect(),
        }
    }

    /// Kronecker product; `self` is the most significant factor.
    pub fn tensor(&self, other: &HermitianOperator) -> Self {
        let (m, n) = (self.dim, other.dim);
        let dim = m * n;
        let mut entries = vec![Amplitude::new(0.0, 0.0); dim * dim];
        for i1 in 0..m {
            for j1 in 0..m {
                let a = self.entries[i1 * m + j1];
                for i2 in 0..n {
                    for j2 in 0..n {
                        entries[(i1 * n + i2) * dim + j1 * n + j2] = a * other.entries[i2 * n + j2];
                    }
                }
            }
        }
        Self { dim, entries }
    }

    /// Embeds `self` as `I ⊗ .. ⊗ self ⊗ .. ⊗ I` acting on factor `index` of a
    /// tensor product with the given factor dimensions.
    pub fn embed(&self, index: usize, factor_dims: &[usize]) -> Result<Self> {
        let Some(&own) = factor_dims.get(index) else {
            return Err(Error::Malformed(format!(
                "factor index {index} out of range for {} factors",
                factor_dims.len()
            )));
        };
        check_dim(own, self.dim)?;
        let before: usize = factor_dims[..index].iter().product();
        let after: usize = factor_dims[index + 1..].iter().product();
        Ok(HermitianOperator::identity(before)
            .tensor(self)
            .tensor(&HermitianOperator::identity(after)))
    }

    pub fn matmul(&self, other: &HermitianOperator) -> Vec<Amplitude> {
        let n = self.dim;
        let mut out = vec![Amplitude::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == Amplitude::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * other.entries[k * n + j];
                }
            }
        }
        out
    }

    /// Largest entrywise distance to `other`.
    pub fn max_abs_diff(&self, other: &HermitianOperator) -> f64 {
        max_abs_diff(&self.entries, &other.entries)
    }
}

pub(crate) fn max_abs_diff(a: &[Amplitude], b: &[Amplitude]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Hermitian idempotent operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector(HermitianOperator);

impl Projector {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let square = op.matmul(&op);
        let residual = max_abs_diff(&square, op.entries());
        if residual > IDEMPOTENT_TOL {
            return Err(Error::Malformed(format!(
                "operator is not idempotent (residual {residual:.3e})"
            )));
        }
        Ok(Self(op))
    }

    /// Rank-one projector onto `state`.
    pub fn onto(state: &StateVector) -> Self {
        Self(HermitianOperator::outer(state))
    }

    pub(crate) fn from_operator_unchecked(op: HermitianOperator) -> Self {
        Self(op)
    }

    pub fn as_operator(&self) -> &HermitianOperator {
        &self.0
    }

    pub fn into_operator(self) -> HermitianOperator {
        self.0
    }

    /// Unit vector spanning the range of a rank-one projector, taken from
    /// its largest column. Phase is arbitrary.
    pub fn range_vector(&self) -> Result<StateVector> {
        let n = self.0.dim;
        let j = (0..n)
            .max_by(|&a, &b| self.0.entry(a, a).re.total_cmp(&self.0.entry(b, b).re))
            .unwrap_or(0);
        StateVector::new((0..n).map(|i| self.0.entry(i, j)).collect())
    }

    /// Trace, i.e. the rank up to roundoff.
    pub fn rank(&self) -> usize {
        let tr: f64 = (0..self.0.dim).map(|i| self.0.entry(i, i).re).sum();
        tr.round() as usize
    }
}

impl Deref for Projector {
    type Target = HermitianOperator;

    fn deref(&self) -> &HermitianOperator {
        &self.0
    }
}
