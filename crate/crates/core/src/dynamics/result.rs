use serde::{Deserialize, Serialize};

use super::OscillatorState;
use crate::hamiltonians::Configuration;

/// One trajectory sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub step: usize,
    pub energy: f64,
    pub amplitude_spread: f64,
}

/// Outcome of a single seeded solver run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub solver: String,
    pub best_config: Configuration,
    /// Lowest energy over all readouts, re-evaluated on `best_config`.
    pub best_energy: f64,
    pub final_config: Configuration,
    pub final_energy: f64,
    pub converged: bool,
    /// Every amplitude ended below `1e-9`.
    #[serde(default)]
    pub below_threshold: bool,
    pub steps_taken: usize,
    /// Stationarity residual at the final state.
    pub final_residual: f64,
    pub amplitude_spread: f64,
    /// Seconds; excluded from every determinism check.
    pub wall_time: f64,
    pub seed: u64,
    pub stream: u64,
    pub final_state: OscillatorState,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub samples: Vec<Sample>,
}
