//! Seeded random instances. These are random, not certified-hard, problems.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonians::{CouplingMatrix, IsingProblem};
use crate::integrator::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightDistribution {
    /// Uniform on `(−1, 1)`.
    Uniform,
    /// Standard normal.
    Gaussian,
    /// `±1` with equal probability.
    #[serde(rename = "pm1")]
    PlusMinusOne,
}

impl std::str::FromStr for WeightDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(WeightDistribution::Uniform),
            "gaussian" => Ok(WeightDistribution::Gaussian),
            "pm1" | "pm" | "+-1" => Ok(WeightDistribution::PlusMinusOne),
            _ => Err(Error::invalid(format!("unknown distribution `{s}` (uniform, gaussian, pm1)"))),
        }
    }
}

/// Couplings on each unordered pair with probability `density`, weights
/// i.i.d. from `dist`, and no field.
pub fn gen_random_couplings(n: usize, density: f64, dist: WeightDistribution, seed: u64) -> Result<CouplingMatrix> {
    if n < 2 {
        return Err(Error::invalid("random instances need n ≥ 2"));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::invalid(format!("density {density} outside (0, 1]")));
    }
    let mut rng = RngStream::new(seed, 0);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            // draw the inclusion coin even at density 1 so the weight
            // stream does not depend on the density
            if !rng.bernoulli(density) {
                continue;
            }
            let w = match dist {
                WeightDistribution::Uniform => loop {
                    let u = rng.uniform_in(-1.0, 1.0);
                    if u != -1.0 {
                        break u;
                    }
                },
                WeightDistribution::Gaussian => rng.gaussian(),
                WeightDistribution::PlusMinusOne => {
                    if rng.bernoulli(0.5) {
                        1.0
                    } else {
                        -1.0
                    }
                }
            };
            edges.push((i, j, w));
        }
    }
    CouplingMatrix::new(n, edges)
}

pub fn gen_random_ising(n: usize, density: f64, dist: WeightDistribution, seed: u64) -> Result<IsingProblem> {
    Ok(IsingProblem::without_field(gen_random_couplings(n, density, dist, seed)?))
}
