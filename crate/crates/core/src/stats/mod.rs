//! Regression, Schur complements, distribution tails and invariance tests.

mod invariance;
mod linalg;
mod population;
mod regression;
mod special;

pub use invariance::{
    coefficient_test, partial_correlation_test, precision_entry_test, test_beta_invariance,
    test_partial_correlation, test_precision_entry, test_variance_invariance, variance_test,
    InvarianceTest, NullDistribution,
};
pub(crate) use invariance::{
    partial_correlation_test_from, precision_entry_test_from, precision_of,
};
pub use linalg::{MAX_CONDITION, WARN_CONDITION};
pub use population::{population_beta, population_residual_variance, schur_complement};
pub use regression::{regress, sample_covariance, RegressionResult, SampleMoments};
pub use special::{beta_reg, f_cdf, f_sf, normal_two_sided_critical, normal_two_sided_p};
