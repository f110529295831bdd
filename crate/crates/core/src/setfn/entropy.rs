//! Joint distributions of binary variables and their entropy functions.

use rand::Rng;
use rand_distr::Exp1;

use super::TableFunction;
use crate::error::{Error, Result};
use crate::setcalc::GroundSet;

pub const MAX_VARIABLES: usize = 6;

const SUM_TOLERANCE: f64 = 1e-12;
const CLAMP_BELOW: f64 = 1e-15;

/// A probability mass function over `m` binary variables; outcome `x`
/// assigns bit `i` of `x` to variable `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    variables: usize,
    pmf: Vec<f64>,
}

impl JointDistribution {
    pub fn new(variables: usize, pmf: Vec<f64>) -> Result<Self> {
        if variables == 0 || variables > MAX_VARIABLES {
            return Err(Error::Distribution(format!(
                "variable count {variables} outside 1..={MAX_VARIABLES}"
            )));
        }
        if pmf.len() != 1 << variables {
            return Err(Error::Distribution(format!(
                "expected {} probabilities, got {}",
                1 << variables,
                pmf.len()
            )));
        }
        if pmf.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::Distribution("probabilities must be nonnegative".into()));
        }
        let total: f64 = pmf.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::Distribution(format!("probabilities sum to {total}")));
        }
        Ok(Self { variables, pmf })
    }

    /// Independent uniform bits.
    pub fn uniform(variables: usize) -> Result<Self> {
        let n = 1usize << variables.min(MAX_VARIABLES + 1);
        Self::new(variables, vec![1.0 / n as f64; n])
    }

    /// All mass on a single outcome.
    pub fn point_mass(variables: usize, outcome: usize) -> Result<Self> {
        let n = 1usize << variables.min(MAX_VARIABLES + 1);
        if outcome >= n {
            return Err(Error::Distribution(format!("outcome {outcome} out of range")));
        }
        let mut pmf = vec![0.0; n];
        pmf[outcome] = 1.0;
        Self::new(variables, pmf)
    }

    /// Flat-Dirichlet sample: exponential weights normalized to one, tiny
    /// entries clamped to zero and the rest renormalized.
    pub fn random<R: Rng + ?Sized>(variables: usize, rng: &mut R) -> Result<Self> {
        let n = 1usize << variables.min(MAX_VARIABLES + 1);
        let mut w: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|p| *p /= total);
        w.iter_mut().filter(|p| **p < CLAMP_BELOW).for_each(|p| *p = 0.0);
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|p| *p /= total);
        Self::new(variables, w)
    }

    pub fn variables(&self) -> usize {
        self.variables
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }
}

/// The entropy function `A ↦ H(Z_A)` in bits.
pub fn entropy_oracle(dist: &JointDistribution) -> TableFunction {
    let m = dist.variables;
    let n = 1usize << m;
    let mut values = vec![0.0; n];
    let mut marginal = vec![0.0; n];
    for (a, value) in values.iter_mut().enumerate().skip(1) {
        marginal.iter_mut().for_each(|p| *p = 0.0);
        for (x, p) in dist.pmf.iter().enumerate() {
            marginal[x & a] += p;
        }
        let h: f64 = marginal
            .iter()
            .filter(|p| **p > 0.0)
            .map(|p| -p * p.log2())
            .sum();
        *value = h.max(0.0);
    }
    let ground = GroundSet::new(m).expect("variable count validated");
    TableFunction::new(&ground, values).expect("entropy table is valid")
}
