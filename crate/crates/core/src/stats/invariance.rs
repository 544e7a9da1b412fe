//! Two-sample invariance tests and the partial-correlation zero test.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::linalg::SpdFactor;
use super::regression::SampleMoments;
use super::special::{f_cdf, f_sf, normal_two_sided_p};
use crate::error::{Error, Result};

/// Reference law of a test statistic under the null hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum NullDistribution {
    F { d1: f64, d2: f64 },
    StandardNormal,
}

/// Outcome of one hypothesis test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvarianceTest {
    pub statistic: f64,
    pub null: NullDistribution,
    pub p_value: f64,
    /// `p_value < alpha`.
    pub reject: bool,
}

impl InvarianceTest {
    fn new(statistic: f64, null: NullDistribution, p_value: f64, alpha: f64) -> Self {
        let p_value = p_value.clamp(0.0, 1.0);
        InvarianceTest {
            statistic,
            null,
            p_value,
            reject: p_value < alpha,
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "significance level {alpha} outside (0, 1)"
        )))
    }
}

fn check_columns(first: &SampleMoments, second: &SampleMoments) -> Result<()> {
    if first.p() != second.p() {
        return Err(Error::InvalidInput(format!(
            "datasets have {} and {} columns",
            first.p(),
            second.p()
        )));
    }
    Ok(())
}

/// Tests `β_{i,j|S}⁽¹⁾ = β_{i,j|S}⁽²⁾`.
///
/// The statistic is the Wald form `(β̂⁽¹⁾ − β̂⁽²⁾)² / (V⁽¹⁾ + V⁽²⁾)`, where
/// `V⁽ᵏ⁾` is the `i`-th diagonal entry of `σ̂²_{j|M} (X_Mᵀ X_M)⁻¹` on centered
/// data and `M = {i} ∪ S`; the null law is `F(1, n₁ + n₂ − 2|S| − 2)`.
pub fn coefficient_test(
    first: &SampleMoments,
    second: &SampleMoments,
    i: usize,
    j: usize,
    cond: &[usize],
    alpha: f64,
) -> Result<InvarianceTest> {
    check_alpha(alpha)?;
    check_columns(first, second)?;
    if i == j || cond.contains(&i) || cond.contains(&j) {
        return Err(Error::InvalidInput(format!(
            "coefficient test of {} on {} needs distinct nodes outside the conditioning set",
            i + 1,
            j + 1
        )));
    }
    let mut regressors = Vec::with_capacity(cond.len() + 1);
    regressors.push(i);
    regressors.extend_from_slice(cond);
    let mut betas = [0.0; 2];
    let mut variances = [0.0; 2];
    for (k, moments) in [first, second].into_iter().enumerate() {
        let needed = cond.len() + 3;
        if moments.n() < needed {
            return Err(Error::InsufficientData {
                needed,
                got: moments.n(),
            });
        }
        let (fit, factor) = moments.fit(j, &regressors)?;
        let factor: SpdFactor = factor.expect("nonempty regressor set");
        betas[k] = fit.coefficients[0];
        let scatter_scale = (moments.n() - 1) as f64;
        variances[k] = fit.residual_variance * factor.inverse_diagonal(0) / scatter_scale;
    }
    let diff = betas[0] - betas[1];
    let var = variances[0] + variances[1];
    let statistic = if diff == 0.0 {
        0.0
    } else if var > 0.0 {
        diff * diff / var
    } else {
        f64::INFINITY
    };
    let d2 = (first.n() + second.n()) as f64 - 2.0 * cond.len() as f64 - 2.0;
    let null = NullDistribution::F { d1: 1.0, d2 };
    Ok(InvarianceTest::new(
        statistic,
        null,
        f_sf(statistic, 1.0, d2),
        alpha,
    ))
}

/// Tests `σ_{j|S}⁽¹⁾ = σ_{j|S}⁽²⁾` with `F̂ = σ̂²⁽¹⁾ / σ̂²⁽²⁾` against
/// `F(n₁ − |S| − 1, n₂ − |S| − 1)`, two-sided.
pub fn variance_test(
    first: &SampleMoments,
    second: &SampleMoments,
    j: usize,
    cond: &[usize],
    alpha: f64,
) -> Result<InvarianceTest> {
    check_alpha(alpha)?;
    check_columns(first, second)?;
    let r1 = first.regress(j, cond)?;
    let r2 = second.regress(j, cond)?;
    if !(r2.residual_variance > 0.0) {
        return Err(Error::Degenerate(format!(
            "zero residual variance for node {} in the second dataset",
            j + 1
        )));
    }
    let statistic = r1.residual_variance / r2.residual_variance;
    let (d1, d2) = (r1.df as f64, r2.df as f64);
    let lower = f_cdf(statistic, d1, d2);
    let upper = f_sf(statistic, d1, d2);
    let p_value = (2.0 * lower.min(upper)).min(1.0);
    Ok(InvarianceTest::new(
        statistic,
        NullDistribution::F { d1, d2 },
        p_value,
        alpha,
    ))
}

/// Inverse sample covariance, guarded against singularity.
fn sample_precision(moments: &SampleMoments) -> Result<DMatrix<f64>> {
    let p = moments.p();
    let needed = p + 2;
    if moments.n() < needed {
        return Err(Error::InsufficientData {
            needed,
            got: moments.n(),
        });
    }
    let nodes: Vec<usize> = (0..p).collect();
    Ok(SpdFactor::new(moments.covariance(), &nodes)?.inverse())
}

/// Tests `Θ⁽¹⁾_ij = Θ⁽²⁾_ij` given precomputed sample precision matrices.
pub(crate) fn precision_entry_test_from(
    theta1: &DMatrix<f64>,
    n1: usize,
    theta2: &DMatrix<f64>,
    n2: usize,
    i: usize,
    j: usize,
    alpha: f64,
) -> InvarianceTest {
    let p = theta1.nrows();
    let spread =
        |t: &DMatrix<f64>, n: usize| (t[(i, i)] * t[(j, j)] + t[(i, j)].powi(2)) / n as f64;
    let diff = theta1[(i, j)] - theta2[(i, j)];
    let var = spread(theta1, n1) + spread(theta2, n2);
    let statistic = if diff == 0.0 { 0.0 } else { diff * diff / var };
    let d2 = (n1 + n2) as f64 - 2.0 * p as f64 + 2.0;
    InvarianceTest::new(
        statistic,
        NullDistribution::F { d1: 1.0, d2 },
        f_sf(statistic, 1.0, d2),
        alpha,
    )
}

/// Tests equality of one off-diagonal precision entry across datasets with
/// `Q̂` against `F(1, n₁ + n₂ − 2p + 2)`.
pub fn precision_entry_test(
    first: &SampleMoments,
    second: &SampleMoments,
    i: usize,
    j: usize,
    alpha: f64,
) -> Result<InvarianceTest> {
    check_alpha(alpha)?;
    check_columns(first, second)?;
    if i == j || i >= first.p() || j >= first.p() {
        return Err(Error::InvalidInput(format!(
            "bad precision entry ({}, {})",
            i + 1,
            j + 1
        )));
    }
    let t1 = sample_precision(first)?;
    let t2 = sample_precision(second)?;
    Ok(precision_entry_test_from(
        &t1,
        first.n(),
        &t2,
        second.n(),
        i,
        j,
        alpha,
    ))
}

/// Fisher-z test of a zero partial correlation given precomputed precision.
pub(crate) fn partial_correlation_test_from(
    theta: &DMatrix<f64>,
    n: usize,
    i: usize,
    j: usize,
    alpha: f64,
) -> Result<InvarianceTest> {
    let p = theta.nrows();
    let rho = -theta[(i, j)] / (theta[(i, i)] * theta[(j, j)]).sqrt();
    if !(rho.abs() < 1.0) {
        return Err(Error::Degenerate(format!(
            "partial correlation of {} and {} is {rho}",
            i + 1,
            j + 1
        )));
    }
    let effective = n as f64 - (p as f64 - 2.0) - 3.0;
    if effective <= 0.0 {
        return Err(Error::InsufficientData {
            needed: p + 2,
            got: n,
        });
    }
    let z = rho.atanh() * effective.sqrt();
    Ok(InvarianceTest::new(
        z,
        NullDistribution::StandardNormal,
        normal_two_sided_p(z),
        alpha,
    ))
}

/// Tests `ρ_{ij | rest} = 0` within one dataset.
pub fn partial_correlation_test(
    moments: &SampleMoments,
    i: usize,
    j: usize,
    alpha: f64,
) -> Result<InvarianceTest> {
    check_alpha(alpha)?;
    if i == j || i >= moments.p() || j >= moments.p() {
        return Err(Error::InvalidInput(format!(
            "bad variable pair ({}, {})",
            i + 1,
            j + 1
        )));
    }
    let theta = sample_precision(moments)?;
    partial_correlation_test_from(&theta, moments.n(), i, j, alpha)
}

pub(crate) fn precision_of(moments: &SampleMoments) -> Result<DMatrix<f64>> {
    sample_precision(moments)
}

/// Data-matrix entry point for [`coefficient_test`].
pub fn test_beta_invariance(
    data1: &DMatrix<f64>,
    data2: &DMatrix<f64>,
    i: usize,
    j: usize,
    cond: &[usize],
    alpha: f64,
) -> Result<InvarianceTest> {
    coefficient_test(
        &SampleMoments::from_data(data1)?,
        &SampleMoments::from_data(data2)?,
        i,
        j,
        cond,
        alpha,
    )
}

/// Data-matrix entry point for [`variance_test`].
pub fn test_variance_invariance(
    data1: &DMatrix<f64>,
    data2: &DMatrix<f64>,
    j: usize,
    cond: &[usize],
    alpha: f64,
) -> Result<InvarianceTest> {
    variance_test(
        &SampleMoments::from_data(data1)?,
        &SampleMoments::from_data(data2)?,
        j,
        cond,
        alpha,
    )
}

/// Data-matrix entry point for [`precision_entry_test`].
pub fn test_precision_entry(
    data1: &DMatrix<f64>,
    data2: &DMatrix<f64>,
    i: usize,
    j: usize,
    alpha: f64,
) -> Result<InvarianceTest> {
    precision_entry_test(
        &SampleMoments::from_data(data1)?,
        &SampleMoments::from_data(data2)?,
        i,
        j,
        alpha,
    )
}

/// Data-matrix entry point for [`partial_correlation_test`].
pub fn test_partial_correlation(
    data: &DMatrix<f64>,
    i: usize,
    j: usize,
    alpha: f64,
) -> Result<InvarianceTest> {
    partial_correlation_test(&SampleMoments::from_data(data)?, i, j, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use crate::sem::LinearSem;

    fn chain() -> LinearSem {
        LinearSem::from_edges(3, &[(0, 1, 0.5), (1, 2, 0.5)], vec![1.0; 3]).unwrap()
    }

    #[test]
    fn identical_data_never_rejects() {
        let data = chain().sample(300, &mut rng::stream(1, &[]));
        let t = test_beta_invariance(&data, &data, 0, 2, &[1], 0.05).unwrap();
        assert_eq!(t.statistic, 0.0);
        assert_eq!(t.p_value, 1.0);
        assert!(!t.reject);

        let f = test_variance_invariance(&data, &data, 2, &[0, 1], 0.05).unwrap();
        assert_eq!(f.statistic, 1.0);
        assert!((f.p_value - 1.0).abs() < 1e-12);
        assert!(!f.reject);

        let q = test_precision_entry(&data, &data, 0, 1, 0.05).unwrap();
        assert_eq!(q.statistic, 0.0);
        assert!(!q.reject);
    }

    #[test]
    fn null_parameters() {
        let a = chain().sample(100, &mut rng::stream(2, &[]));
        let b = chain().sample(80, &mut rng::stream(3, &[]));
        let t = test_beta_invariance(&a, &b, 0, 2, &[1], 0.05).unwrap();
        assert_eq!(t.null, NullDistribution::F { d1: 1.0, d2: 176.0 });
        let f = test_variance_invariance(&a, &b, 2, &[1], 0.05).unwrap();
        assert_eq!(f.null, NullDistribution::F { d1: 98.0, d2: 78.0 });
        let q = test_precision_entry(&a, &b, 0, 1, 0.05).unwrap();
        assert_eq!(q.null, NullDistribution::F { d1: 1.0, d2: 176.0 });
    }

    #[test]
    fn detects_large_differences() {
        let other =
            LinearSem::from_edges(3, &[(0, 1, 1.25), (1, 2, 0.5)], vec![1.0, 1.0, 2.0]).unwrap();
        let a = chain().sample(10_000, &mut rng::stream(4, &[]));
        let b = other.sample(10_000, &mut rng::stream(5, &[]));
        assert!(
            test_beta_invariance(&a, &b, 0, 1, &[], 0.05)
                .unwrap()
                .reject
        );
        assert!(
            test_variance_invariance(&a, &b, 2, &[1], 0.05)
                .unwrap()
                .reject
        );
        assert!(test_precision_entry(&a, &b, 0, 1, 0.05).unwrap().reject);
        // Weight on 2 → 3 is unchanged.
        assert!(
            !test_beta_invariance(&a, &b, 1, 2, &[], 0.001)
                .unwrap()
                .reject
        );
    }

    #[test]
    fn partial_correlation_on_chain() {
        let data = chain().sample(20_000, &mut rng::stream(6, &[]));
        assert!(test_partial_correlation(&data, 0, 1, 0.05).unwrap().reject);
        let t = test_partial_correlation(&data, 0, 2, 0.001).unwrap();
        assert!(!t.reject, "{t:?}");
        assert_eq!(t.null, NullDistribution::StandardNormal);
    }

    #[test]
    fn error_paths() {
        let data = chain().sample(50, &mut rng::stream(7, &[]));
        assert!(test_beta_invariance(&data, &data, 0, 0, &[], 0.05).is_err());
        assert!(test_beta_invariance(&data, &data, 0, 1, &[0], 0.05).is_err());
        assert!(test_beta_invariance(&data, &data, 0, 1, &[], 1.5).is_err());
        let tiny = data.rows(0, 3).into_owned();
        assert!(matches!(
            test_beta_invariance(&tiny, &data, 0, 2, &[1], 0.05),
            Err(Error::InsufficientData { .. })
        ));
        let flat = DMatrix::from_fn(50, 3, |r, c| if c == 2 { 1.0 } else { data[(r, c)] });
        assert!(matches!(
            test_variance_invariance(&data, &flat, 2, &[], 0.05),
            Err(Error::Degenerate(_))
        ));
        let four_cols = DMatrix::zeros(50, 4);
        assert!(test_beta_invariance(&data, &four_cols, 0, 1, &[], 0.05).is_err());
        assert!(test_precision_entry(&tiny, &tiny, 0, 1, 0.05).is_err());
    }
}
