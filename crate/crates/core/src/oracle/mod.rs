//! Exhaustive reference solvers for small instances.
//!
//! Binary and discrete-phase enumerations are exact (ties resolved at a
//! `1e-9` energy tolerance). The continuous XY oracle is only certified as
//! the best value over a phase grid followed by local refinement.

mod ising;
mod tsp;
mod xy;

use serde::{Deserialize, Serialize};

use crate::dynamics::RunResult;

pub use ising::{brute_force_ising, DEFAULT_MAX_ISING_N, MAX_LISTED_OPTIMIZERS};
pub use tsp::{brute_force_tsp, MAX_TSP_CITIES};
pub use xy::{brute_force_potts, brute_force_xy, refine_xy, XyOracleOptions, MAX_POTTS_CONFIGS, MAX_XY_N};

/// Energies within this distance of the minimum count as optimal.
pub const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult<C> {
    pub optimal_energy: f64,
    /// All optima for discrete searches (up to a cap), one representative
    /// for continuous ones.
    pub optimizers: Vec<C>,
    /// Number of configurations evaluated.
    pub explored: u64,
    /// Number of optimal configurations found, which may exceed
    /// `optimizers.len()` when the list was capped.
    pub degeneracy: u64,
}

/// Fraction of runs whose best energy is within `tolerance` of the optimum.
///
/// Returns 0 for an empty slice.
pub fn success_probability<C>(results: &[RunResult], oracle: &OracleResult<C>, tolerance: f64) -> f64 {
    success_fraction(results.iter().map(|r| r.best_energy), oracle.optimal_energy, tolerance)
}

pub(crate) fn success_fraction(energies: impl Iterator<Item = f64>, optimum: f64, tolerance: f64) -> f64 {
    let (mut hits, mut total) = (0usize, 0usize);
    for e in energies {
        total += 1;
        if e <= optimum + tolerance {
            hits += 1;
        }
    }
    if total == 0 {
        0.0
    } else {
        hits as f64 / total as f64
    }
}
