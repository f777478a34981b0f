//! Hermitian eigendecomposition with a deterministic ordering and phase
//! convention, so repeated solves of the same input give identical vectors.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::model::Complex64;
use crate::rates::CMatrix;

/// Relative tolerance on `‖M − Mᴴ‖_F / ‖M‖_F`.
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct HermitianEig {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the unit eigenvector for `values[k]`.
    pub vectors: CMatrix,
}

impl HermitianEig {
    pub fn min_eigenvalue(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// Unit eigenvector of the largest eigenvalue.
    pub fn principal_vector(&self) -> DVector<Complex64> {
        self.vectors.column(self.vectors.ncols() - 1).into_owned()
    }

    pub fn reconstruct(&self) -> CMatrix {
        let d = DMatrix::from_diagonal(&DVector::from_iterator(
            self.values.len(),
            self.values.iter().map(|&v| Complex64::new(v, 0.0)),
        ));
        &self.vectors * d * self.vectors.adjoint()
    }
}

pub fn hermitian_eig(m: &CMatrix) -> Result<HermitianEig> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::Dimension(format!("eigendecomposition of a {:?} matrix", m.shape())));
    }
    if m.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NonFinite("hermitian_eig"));
    }
    let norm = m.norm();
    let asym = (m - m.adjoint()).norm();
    if asym > HERMITIAN_TOLERANCE * norm {
        return Err(Error::NotHermitian(asym / norm));
    }
    if n == 0 {
        return Ok(HermitianEig { values: vec![], vectors: CMatrix::zeros(0, 0) });
    }
    let sym = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));

    let mut vectors = CMatrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for (k, &src) in order.iter().enumerate() {
        values.push(eig.eigenvalues[src]);
        let mut v = eig.eigenvectors.column(src).into_owned();
        // Rotate so the first component of (near-)maximal modulus is real positive.
        let peak = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if let Some(pivot) = v.iter().find(|z| z.norm() >= peak * (1.0 - 1e-9)).copied() {
            v *= pivot.conj() / pivot.norm();
        }
        vectors.set_column(k, &v);
    }
    Ok(HermitianEig { values, vectors })
}
