//! Invariance decisions, either from hypothesis tests on data or from exact
//! population quantities.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::sem::SemPair;
use crate::stats::{
    coefficient_test, population_beta, population_residual_variance, variance_test, SampleMoments,
};

/// One invariance decision.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Probe {
    pub invariant: bool,
    /// Test statistic, or the absolute population difference.
    pub statistic: f64,
    pub p_value: Option<f64>,
}

pub(crate) trait Oracle {
    /// Is `β_{i,j|S}` the same in both models?
    fn coefficient(&self, i: usize, j: usize, cond: &[usize]) -> Result<Probe>;
    /// Is `σ²_{j|S}` the same in both models?
    fn variance(&self, j: usize, cond: &[usize]) -> Result<Probe>;
    /// Population oracles fail loudly on errors and orientation conflicts.
    fn exact(&self) -> bool;
}

/// Two datasets reduced to their sample moments.
#[derive(Debug, Clone)]
pub struct DatasetPair {
    pub first: SampleMoments,
    pub second: SampleMoments,
}

impl DatasetPair {
    pub fn new(data1: &DMatrix<f64>, data2: &DMatrix<f64>) -> Result<Self> {
        if data1.ncols() != data2.ncols() {
            return Err(Error::InvalidInput(format!(
                "datasets have {} and {} columns",
                data1.ncols(),
                data2.ncols()
            )));
        }
        Ok(DatasetPair {
            first: SampleMoments::from_data(data1)?,
            second: SampleMoments::from_data(data2)?,
        })
    }

    pub fn p(&self) -> usize {
        self.first.p()
    }
}

pub(crate) struct SampleOracle<'a> {
    pub data: &'a DatasetPair,
    pub alpha: f64,
}

impl Oracle for SampleOracle<'_> {
    fn coefficient(&self, i: usize, j: usize, cond: &[usize]) -> Result<Probe> {
        let t = coefficient_test(&self.data.first, &self.data.second, i, j, cond, self.alpha)?;
        Ok(Probe {
            invariant: !t.reject,
            statistic: t.statistic,
            p_value: Some(t.p_value),
        })
    }

    fn variance(&self, j: usize, cond: &[usize]) -> Result<Probe> {
        let t = variance_test(&self.data.first, &self.data.second, j, cond, self.alpha)?;
        Ok(Probe {
            invariant: !t.reject,
            statistic: t.statistic,
            p_value: Some(t.p_value),
        })
    }

    fn exact(&self) -> bool {
        false
    }
}

pub(crate) struct PopulationOracle {
    pub theta1: DMatrix<f64>,
    pub theta2: DMatrix<f64>,
    pub tol: f64,
}

impl PopulationOracle {
    pub fn new(pair: &SemPair, tol: f64) -> Self {
        PopulationOracle {
            theta1: pair.first.precision_matrix(),
            theta2: pair.second.precision_matrix(),
            tol,
        }
    }

    fn probe(&self, a: f64, b: f64) -> Probe {
        let diff = (a - b).abs();
        Probe {
            invariant: diff <= self.tol,
            statistic: diff,
            p_value: None,
        }
    }
}

impl Oracle for PopulationOracle {
    fn coefficient(&self, i: usize, j: usize, cond: &[usize]) -> Result<Probe> {
        Ok(self.probe(
            population_beta(&self.theta1, i, j, cond)?,
            population_beta(&self.theta2, i, j, cond)?,
        ))
    }

    fn variance(&self, j: usize, cond: &[usize]) -> Result<Probe> {
        Ok(self.probe(
            population_residual_variance(&self.theta1, j, cond)?,
            population_residual_variance(&self.theta2, j, cond)?,
        ))
    }

    fn exact(&self) -> bool {
        true
    }
}
