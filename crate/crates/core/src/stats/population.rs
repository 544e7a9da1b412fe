//! Exact population regression quantities derived from a precision matrix.

use nalgebra::DMatrix;

use super::linalg::{submatrix, SpdFactor};
use crate::error::{Error, Result};

fn sorted_union(base: &[usize], extra: &[usize]) -> Vec<usize> {
    let mut m: Vec<usize> = base.iter().chain(extra).copied().collect();
    m.sort_unstable();
    m.dedup();
    m
}

/// Precision matrix of the marginal on `nodes`:
/// `Θ_MM − Θ_M¬M (Θ_¬M¬M)⁻¹ Θ_¬MM`, rows and columns in ascending node order.
pub fn schur_complement(theta: &DMatrix<f64>, nodes: &[usize]) -> Result<DMatrix<f64>> {
    let p = theta.nrows();
    let m = sorted_union(nodes, &[]);
    if m.is_empty() {
        return Err(Error::InvalidInput(
            "Schur complement of an empty node set".into(),
        ));
    }
    if m.iter().any(|&v| v >= p) {
        return Err(Error::InvalidInput(format!(
            "node index out of range for {p} nodes"
        )));
    }
    let rest: Vec<usize> = (0..p).filter(|v| m.binary_search(v).is_err()).collect();
    let block = submatrix(theta, &m, &m);
    if rest.is_empty() {
        return Ok(block);
    }
    let factor = SpdFactor::new(&submatrix(theta, &rest, &rest), &rest)?;
    let cross = submatrix(theta, &rest, &m);
    let correction = cross.transpose() * factor.solve_matrix(&cross);
    let out = block - correction;
    Ok((&out + out.transpose()) * 0.5)
}

/// Population coefficient of `i` when regressing `j` on `{i} ∪ S`.
pub fn population_beta(theta: &DMatrix<f64>, i: usize, j: usize, cond: &[usize]) -> Result<f64> {
    if i == j || cond.contains(&i) || cond.contains(&j) {
        return Err(Error::InvalidInput(format!(
            "coefficient of {} on {} needs distinct nodes outside the conditioning set",
            i + 1,
            j + 1
        )));
    }
    let m = sorted_union(cond, &[i, j]);
    let marginal = schur_complement(theta, &m)?;
    let (im, jm) = (m.binary_search(&i).unwrap(), m.binary_search(&j).unwrap());
    Ok(-marginal[(im, jm)] / marginal[(jm, jm)])
}

/// Population residual variance of `j` regressed on `S`.
pub fn population_residual_variance(theta: &DMatrix<f64>, j: usize, cond: &[usize]) -> Result<f64> {
    if cond.contains(&j) {
        return Err(Error::InvalidInput(format!(
            "node {} appears in its own conditioning set",
            j + 1
        )));
    }
    let m = sorted_union(cond, &[j]);
    let marginal = schur_complement(theta, &m)?;
    let jm = m.binary_search(&j).unwrap();
    Ok(1.0 / marginal[(jm, jm)])
}
