//! Sample moments and ordinary least squares on mean-centered data.

use nalgebra::{DMatrix, DVector};

use super::linalg::{submatrix, SpdFactor};
use crate::error::{Error, Result};

/// Unbiased sample covariance (mean-centered, divided by `n − 1`).
pub fn sample_covariance(data: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = data.nrows();
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    let means = data.row_mean();
    let mut centered = data.clone();
    for mut row in centered.row_iter_mut() {
        row -= &means;
    }
    let cov = centered.transpose() * &centered / (n - 1) as f64;
    Ok((&cov + cov.transpose()) * 0.5)
}

/// OLS fit of one variable on a set of regressors.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionResult {
    /// Coefficients in the order of the regressor list.
    pub coefficients: Vec<f64>,
    /// Unbiased residual variance, `RSS / df`.
    pub residual_variance: f64,
    /// `n − |M| − 1`.
    pub df: usize,
}

/// Sample size and covariance of one dataset; every regression and test
/// statistic is a function of these two quantities.
#[derive(Debug, Clone)]
pub struct SampleMoments {
    n: usize,
    cov: DMatrix<f64>,
}

impl SampleMoments {
    pub fn from_data(data: &DMatrix<f64>) -> Result<Self> {
        Ok(SampleMoments {
            n: data.nrows(),
            cov: sample_covariance(data)?,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.cov.nrows()
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// Regresses `target` on `regressors`. Also returns the factor of the
    /// regressor covariance block for reuse by the coefficient test.
    pub(crate) fn fit(
        &self,
        target: usize,
        regressors: &[usize],
    ) -> Result<(RegressionResult, Option<SpdFactor>)> {
        let p = self.p();
        if target >= p || regressors.iter().any(|&r| r >= p) {
            return Err(Error::InvalidInput(format!(
                "variable index out of range for {p} columns"
            )));
        }
        if regressors.contains(&target) {
            return Err(Error::InvalidInput(format!(
                "target {} appears among its regressors",
                target + 1
            )));
        }
        let k = regressors.len();
        let needed = k + 2;
        if self.n < needed {
            return Err(Error::InsufficientData {
                needed,
                got: self.n,
            });
        }
        let df = self.n - k - 1;
        let scale = (self.n - 1) as f64 / df as f64;
        let var_target = self.cov[(target, target)];
        if k == 0 {
            return Ok((
                RegressionResult {
                    coefficients: Vec::new(),
                    residual_variance: var_target,
                    df,
                },
                None,
            ));
        }
        let gram = submatrix(&self.cov, regressors, regressors);
        let factor = SpdFactor::new(&gram, regressors)?;
        let cross = DVector::from_iterator(k, regressors.iter().map(|&r| self.cov[(r, target)]));
        let beta = factor.solve(&cross);
        let explained = cross.dot(&beta);
        let residual_variance = ((var_target - explained) * scale).max(0.0);
        Ok((
            RegressionResult {
                coefficients: beta.iter().copied().collect(),
                residual_variance,
                df,
            },
            Some(factor),
        ))
    }

    pub fn regress(&self, target: usize, regressors: &[usize]) -> Result<RegressionResult> {
        self.fit(target, regressors).map(|(r, _)| r)
    }
}

/// Regresses column `target` of `data` on the columns in `regressors`.
pub fn regress(
    data: &DMatrix<f64>,
    target: usize,
    regressors: &[usize],
) -> Result<RegressionResult> {
    SampleMoments::from_data(data)?.regress(target, regressors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use crate::sem::LinearSem;
    use approx::assert_abs_diff_eq;
    use rand::Rng as _;
    use rand_distr::StandardNormal;

    #[test]
    fn covariance_examples() {
        let same = DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 1.0, 2.0, 3.0]);
        assert_eq!(sample_covariance(&same).unwrap(), DMatrix::zeros(3, 3));
        let two = DMatrix::from_row_slice(2, 1, &[0.0, 2.0]);
        assert_eq!(sample_covariance(&two).unwrap()[(0, 0)], 2.0);
        assert!(matches!(
            sample_covariance(&DMatrix::zeros(1, 3)),
            Err(Error::InsufficientData { .. })
        ));
    }

    #[test]
    fn covariance_converges_to_population() {
        let sem = LinearSem::from_edges(
            3,
            &[(0, 1, 0.8), (1, 2, -0.5), (0, 2, 0.3)],
            vec![1.0, 0.5, 2.0],
        )
        .unwrap();
        let data = sem.sample(100_000, &mut rng::stream(5, &[]));
        let emp = sample_covariance(&data).unwrap();
        let pop = sem.covariance_matrix();
        for (a, b) in emp.iter().zip(pop.iter()) {
            assert!((a - b).abs() < 0.05, "{a} vs {b}");
        }
    }

    #[test]
    fn empty_regressor_set_gives_sample_variance() {
        let data = DMatrix::from_row_slice(4, 2, &[1.0, 0.0, 2.0, 5.0, 3.0, 1.0, 6.0, 2.0]);
        let r = regress(&data, 1, &[]).unwrap();
        assert!(r.coefficients.is_empty());
        assert_eq!(r.df, 3);
        assert_abs_diff_eq!(
            r.residual_variance,
            sample_covariance(&data).unwrap()[(1, 1)],
            epsilon = 1e-14
        );
    }

    #[test]
    fn recovers_planted_coefficient() {
        let mut rng = rng::stream(1, &[]);
        let n = 10_000;
        let mut data = DMatrix::zeros(n, 2);
        for r in 0..n {
            let x: f64 = rng.sample(StandardNormal);
            let e: f64 = rng.sample(StandardNormal);
            data[(r, 0)] = x;
            data[(r, 1)] = 2.0 * x + 1e-3 * e;
        }
        let r = regress(&data, 1, &[0]).unwrap();
        assert!((r.coefficients[0] - 2.0).abs() < 0.01);
        assert!(r.residual_variance < 1e-5);
    }

    #[test]
    fn matches_direct_least_squares() {
        // Solve the centered normal equations from raw data as an independent route.
        let mut rng = rng::stream(2, &[]);
        let n = 50;
        let data = DMatrix::from_fn(n, 4, |_, _| rng.sample::<f64, _>(StandardNormal));
        let regs = [0usize, 2, 3];
        let r = regress(&data, 1, &regs).unwrap();
        let mut x = DMatrix::zeros(n, 4);
        let mut y = DVector::zeros(n);
        for row in 0..n {
            x[(row, 0)] = 1.0;
            for (c, &reg) in regs.iter().enumerate() {
                x[(row, c + 1)] = data[(row, reg)];
            }
            y[row] = data[(row, 1)];
        }
        let xtx = x.transpose() * &x;
        let coef = xtx.lu().solve(&(x.transpose() * &y)).unwrap();
        for c in 0..3 {
            assert_abs_diff_eq!(r.coefficients[c], coef[c + 1], epsilon = 1e-10);
        }
        let resid = &y - &x * &coef;
        assert_abs_diff_eq!(
            r.residual_variance,
            resid.norm_squared() / (n - 4) as f64,
            epsilon = 1e-10
        );
    }

    #[test]
    fn duplicate_regressor_is_singular() {
        let mut rng = rng::stream(3, &[]);
        let data = DMatrix::from_fn(100, 3, |_, _| rng.sample::<f64, _>(StandardNormal));
        let err = regress(&data, 2, &[0, 0]).unwrap_err();
        assert!(
            matches!(err, Error::Singular { .. } | Error::IllConditioned { .. }),
            "{err:?}"
        );
        assert!(regress(&data, 2, &[2]).is_err());
    }
}
