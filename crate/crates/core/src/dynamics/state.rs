use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::readout::{readout, ReadoutTarget};
use crate::error::Result;
use crate::hamiltonians::Configuration;

/// Snapshot of an oscillator network.
///
/// `pumps` holds the per-site control variable of the machine that
/// produced the state: the injection rate `γ_i` for the gain-dissipative
/// network, the carrier gain `G_i` for lasers, the error variable `e_i` for
/// the CIM bistable mode and the reservoir injection `Γ_i` for the
/// Lang–Kobayashi model. Phase-only models leave it empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillatorState {
    pub amplitudes: Vec<Complex64>,
    pub pumps: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reservoirs: Option<Vec<f64>>,
    pub time: f64,
}

impl OscillatorState {
    pub fn n(&self) -> usize {
        self.amplitudes.len()
    }

    /// `|Ψ_i|²` per site.
    pub fn occupations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }

    /// `max_i |ρ_i − mean ρ|`.
    pub fn amplitude_spread(&self) -> f64 {
        occupation_spread(self.amplitudes.iter().map(|z| z.norm_sqr()))
    }

    pub fn readout(&self, target: ReadoutTarget) -> Result<Configuration> {
        readout(&self.amplitudes, target)
    }
}

pub(crate) fn occupation_spread(rho: impl Iterator<Item = f64> + Clone) -> f64 {
    let (sum, count) = rho.clone().fold((0.0, 0usize), |(s, c), r| (s + r, c + 1));
    if count == 0 {
        return 0.0;
    }
    let mean = sum / count as f64;
    rho.map(|r| (r - mean).abs()).fold(0.0, f64::max)
}
