//! Symmetric positive-definite factorization with a conditioning guard.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::{Error, Result};

/// Condition estimates above this are logged.
pub const WARN_CONDITION: f64 = 1e10;
/// Condition estimates above this are rejected.
pub const MAX_CONDITION: f64 = 1e14;

/// Cholesky factor of `A = D R D`, where `D` holds the square roots of the
/// diagonal of `A` and `R` is the correlation-scaled matrix. Factoring `R`
/// keeps the guard scale-free: rescaling variables never changes the verdict.
pub(crate) struct SpdFactor {
    chol: Cholesky<f64, Dyn>,
    scale: DVector<f64>,
}

impl SpdFactor {
    /// `nodes` names the variables behind `a`, for error messages only.
    pub(crate) fn new(a: &DMatrix<f64>, nodes: &[usize]) -> Result<Self> {
        let k = a.nrows();
        let scale = DVector::from_iterator(k, (0..k).map(|r| a[(r, r)].sqrt()));
        if scale.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
            return Err(Error::Singular {
                nodes: nodes.to_vec(),
            });
        }
        let r = DMatrix::from_fn(k, k, |i, j| a[(i, j)] / (scale[i] * scale[j]));
        let chol = Cholesky::new(r).ok_or_else(|| Error::Singular {
            nodes: nodes.to_vec(),
        })?;
        let diag = chol.l_dirty().diagonal();
        let (lo, hi) = diag.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &d| {
            (lo.min(d), hi.max(d))
        });
        // (max/min pivot)² bounds the 2-norm condition number from below.
        let condition = (hi / lo).powi(2);
        if !(condition <= MAX_CONDITION) {
            return Err(Error::IllConditioned {
                nodes: nodes.to_vec(),
                condition,
            });
        }
        if condition > WARN_CONDITION {
            log::warn!(
                "near-singular design for {} variables (condition estimate {condition:.3e})",
                k
            );
        }
        Ok(SpdFactor { chol, scale })
    }

    pub(crate) fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        let scaled = b.component_div(&self.scale);
        self.chol.solve(&scaled).component_div(&self.scale)
    }

    pub(crate) fn solve_matrix(&self, b: &DMatrix<f64>) -> DMatrix<f64> {
        let mut out = b.clone();
        for c in 0..out.ncols() {
            let col = self.solve(&b.column(c).into_owned());
            out.set_column(c, &col);
        }
        out
    }

    pub(crate) fn inverse(&self) -> DMatrix<f64> {
        let k = self.scale.len();
        let r_inv = self.chol.inverse();
        DMatrix::from_fn(k, k, |i, j| r_inv[(i, j)] / (self.scale[i] * self.scale[j]))
    }

    /// Diagonal entry `k` of `A⁻¹`.
    pub(crate) fn inverse_diagonal(&self, k: usize) -> f64 {
        let mut e = DVector::zeros(self.scale.len());
        e[k] = 1.0;
        self.solve(&e)[k]
    }
}

/// Submatrix of `a` on the given rows and columns.
pub(crate) fn submatrix(a: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |r, c| a[(rows[r], cols[c])])
}
