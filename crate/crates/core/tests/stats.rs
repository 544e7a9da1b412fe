use dci_core::rng;
use dci_core::sem::{random_sem_pair, GenConfig, LinearSem};
use dci_core::stats::{
    coefficient_test, f_cdf, f_sf, population_beta, population_residual_variance,
    precision_entry_test, regress, schur_complement, test_beta_invariance,
    test_partial_correlation, test_precision_entry, test_variance_invariance, variance_test,
    SampleMoments,
};
use dci_core::Error;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::seq::index;
use rand::Rng as _;
use statrs::distribution::{ContinuousCDF, FisherSnedecor};

fn random_sem(p: usize, seed: u64) -> LinearSem {
    let gen = GenConfig::bernoulli(p, 3.0, 0.2).with_changed_variances(p / 2);
    random_sem_pair(&gen, &mut rng::stream(seed, &[0]))
        .unwrap()
        .second
}

fn sub(m: &DMatrix<f64>, idx: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(idx.len(), idx.len(), |r, c| m[(idx[r], idx[c])])
}

/// Least squares on explicitly centered columns via SVD.
fn ols(data: &DMatrix<f64>, target: usize, regressors: &[usize]) -> (Vec<f64>, f64) {
    let n = data.nrows();
    let centered = |c: usize| {
        let col = data.column(c);
        let mean = col.mean();
        col.map(|v| v - mean)
    };
    let y = centered(target);
    let x = DMatrix::from_fn(n, regressors.len(), |r, k| centered(regressors[k])[r]);
    let beta = x.clone().svd(true, true).solve(&y, 1e-14).unwrap();
    let resid = &y - &x * &beta;
    let rss = resid.dot(&resid);
    (
        beta.iter().copied().collect(),
        rss / (n - regressors.len() - 1) as f64,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn schur_complement_is_marginal_precision(p in 2usize..9, seed in any::<u64>()) {
        let m = random_sem(p, seed);
        let theta = m.precision_matrix();
        let sigma = m.covariance_matrix();
        let mut rng = rng::stream(seed, &[1]);
        let k = rng.random_range(1..=p);
        let mut nodes: Vec<usize> = index::sample(&mut rng, p, k).into_vec();
        nodes.sort_unstable();
        let expected = sub(&sigma, &nodes).try_inverse().unwrap();
        let got = schur_complement(&theta, &nodes).unwrap();
        prop_assert!((&got - &expected).norm() <= 1e-10 * expected.norm());
    }

    #[test]
    fn population_beta_recovers_weight_given_parents(p in 3usize..9, seed in any::<u64>()) {
        let m = random_sem(p, seed);
        let theta = m.precision_matrix();
        let mut rng = rng::stream(seed, &[2]);
        for j in 1..p {
            for i in 0..j {
                // S covers pa(j) \ {i} and otherwise holds arbitrary earlier nodes.
                let mut cond: Vec<usize> = (0..j)
                    .filter(|&v| v != i && (m.weights()[(v, j)] != 0.0 || rng.random_bool(0.4)))
                    .collect();
                cond.sort_unstable();
                let beta = population_beta(&theta, i, j, &cond).unwrap();
                prop_assert!((beta - m.weights()[(i, j)]).abs() <= 1e-9);
                let with_i: Vec<usize> = {
                    let mut c = cond.clone();
                    c.push(i);
                    c.sort_unstable();
                    c
                };
                let var = population_residual_variance(&theta, j, &with_i).unwrap();
                prop_assert!((var - m.noise_variances()[j]).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn population_beta_matches_covariance_regression(p in 3usize..9, seed in any::<u64>()) {
        let m = random_sem(p, seed);
        let theta = m.precision_matrix();
        let sigma = m.covariance_matrix();
        let mut rng = rng::stream(seed, &[3]);
        let picks = index::sample(&mut rng, p, p).into_vec();
        let (i, j) = (picks[0], picks[1]);
        let k = rng.random_range(0..=p - 2);
        let cond: Vec<usize> = picks[2..2 + k].to_vec();
        let mut regressors = vec![i];
        regressors.extend(&cond);
        let cross = DVector::from_iterator(regressors.len(), regressors.iter().map(|&r| sigma[(r, j)]));
        let coef = sub(&sigma, &regressors).lu().solve(&cross).unwrap();
        let beta = population_beta(&theta, i, j, &cond).unwrap();
        prop_assert!((beta - coef[0]).abs() <= 1e-9);
        let var = population_residual_variance(&theta, j, &regressors).unwrap();
        prop_assert!((var - (sigma[(j, j)] - cross.dot(&coef))).abs() <= 1e-9);
    }

    #[test]
    fn f_cdf_reciprocal_and_range(x in 1e-3f64..1e3, d1 in 1.0f64..500.0, d2 in 1.0f64..500.0) {
        let c = f_cdf(x, d1, d2);
        prop_assert!((0.0..=1.0).contains(&c));
        prop_assert!((c + f_cdf(1.0 / x, d2, d1) - 1.0).abs() <= 1e-10);
        prop_assert!((c + f_sf(x, d1, d2) - 1.0).abs() <= 1e-12);
        prop_assert!(f_cdf(x * 1.01, d1, d2) >= c);
    }

    #[test]
    fn f_cdf_matches_statrs(x in 0.05f64..20.0, d1 in 1.0f64..200.0, d2 in 1.0f64..200.0) {
        let reference = FisherSnedecor::new(d1, d2).unwrap().cdf(x);
        prop_assert!((f_cdf(x, d1, d2) - reference).abs() <= 1e-8);
    }
}

#[test]
fn regression_matches_direct_least_squares() {
    for seed in 0..20u64 {
        let m = random_sem(6, seed);
        let data = m.sample(500, &mut rng::stream(seed, &[4]));
        let regressors = [0, 2, 3];
        let fit = regress(&data, 5, &regressors).unwrap();
        let (beta, var) = ols(&data, 5, &regressors);
        for (a, b) in fit.coefficients.iter().zip(&beta) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
        assert!((fit.residual_variance - var).abs() < 1e-9);
        assert_eq!(fit.df, 500 - 3 - 1);
    }
}

#[test]
fn regression_converges_to_population() {
    let n = 100_000;
    for seed in 0..5u64 {
        let m = random_sem(7, seed);
        let theta = m.precision_matrix();
        let data = m.sample(n, &mut rng::stream(seed, &[5]));
        let mut rng = rng::stream(seed, &[6]);
        let picks = index::sample(&mut rng, 7, 5).into_vec();
        let (i, j, cond) = (picks[0], picks[1], &picks[2..]);
        let mut regressors = vec![i];
        regressors.extend_from_slice(cond);
        let fit = regress(&data, j, &regressors).unwrap();
        let beta = population_beta(&theta, i, j, cond).unwrap();
        let var = population_residual_variance(&theta, j, &regressors).unwrap();
        assert!((fit.coefficients[0] - beta).abs() < 0.05);
        assert!((fit.residual_variance - var).abs() < 0.05);
    }
}

#[test]
fn statistics_are_scale_invariant() {
    let first =
        LinearSem::from_edges(4, &[(0, 1, 0.8), (1, 3, -0.5), (2, 3, 0.4)], vec![1.0; 4]).unwrap();
    let second = LinearSem::from_edges(
        4,
        &[(0, 1, 0.5), (1, 3, -0.5), (2, 3, 0.7)],
        vec![1.0, 1.0, 1.0, 1.3],
    )
    .unwrap();
    let d1 = first.sample(400, &mut rng::stream(8, &[1]));
    let d2 = second.sample(300, &mut rng::stream(8, &[2]));
    let (s1, s2) = (&d1 * 2.0, &d2 * 2.0);
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(1.0);
    for cond in [vec![], vec![2], vec![0, 2]] {
        let a = test_beta_invariance(&d1, &d2, 1, 3, &cond, 0.05).unwrap();
        let b = test_beta_invariance(&s1, &s2, 1, 3, &cond, 0.05).unwrap();
        assert!(close(a.statistic, b.statistic));
        let a = test_variance_invariance(&d1, &d2, 3, &cond, 0.05).unwrap();
        let b = test_variance_invariance(&s1, &s2, 3, &cond, 0.05).unwrap();
        assert!(close(a.statistic, b.statistic));
    }
    let a = test_precision_entry(&d1, &d2, 2, 3, 0.05).unwrap();
    let b = test_precision_entry(&s1, &s2, 2, 3, 0.05).unwrap();
    assert!(close(a.statistic, b.statistic));
    let a = test_partial_correlation(&d1, 0, 1, 0.05).unwrap();
    let b = test_partial_correlation(&s1, 0, 1, 0.05).unwrap();
    assert!(close(a.statistic, b.statistic));
}

#[test]
fn tests_detect_large_changes() {
    let first = LinearSem::from_edges(3, &[(0, 1, 1.0), (1, 2, 0.5)], vec![1.0; 3]).unwrap();
    let second =
        LinearSem::from_edges(3, &[(0, 1, 0.2), (1, 2, 0.5)], vec![1.0, 1.0, 2.0]).unwrap();
    let m1 = SampleMoments::from_data(&first.sample(5000, &mut rng::stream(1, &[1]))).unwrap();
    let m2 = SampleMoments::from_data(&second.sample(5000, &mut rng::stream(1, &[2]))).unwrap();
    assert!(coefficient_test(&m1, &m2, 0, 1, &[], 0.05).unwrap().reject);
    assert!(variance_test(&m1, &m2, 2, &[1], 0.05).unwrap().reject);
    assert!(precision_entry_test(&m1, &m2, 0, 1, 0.05).unwrap().reject);
}

#[test]
fn degenerate_and_invalid_inputs() {
    let constant = DMatrix::from_element(20, 3, 1.0);
    let noisy = random_sem(3, 1).sample(20, &mut rng::stream(2, &[0]));
    assert!(matches!(
        test_variance_invariance(&noisy, &constant, 0, &[], 0.05),
        Err(Error::Degenerate(_))
    ));
    assert!(test_beta_invariance(&noisy, &noisy, 0, 0, &[], 0.05).is_err());
    assert!(test_beta_invariance(&noisy, &noisy, 0, 1, &[1], 0.05).is_err());
    assert!(test_beta_invariance(&noisy, &noisy, 0, 1, &[], 1.5).is_err());
    let tiny = noisy.rows(0, 3).into_owned();
    assert!(matches!(
        test_beta_invariance(&tiny, &tiny, 0, 1, &[2], 0.05),
        Err(Error::InsufficientData { .. })
    ));
    let narrow = noisy.columns(0, 2).into_owned();
    assert!(test_variance_invariance(&noisy, &narrow, 0, &[], 0.05).is_err());
}
