use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::hamiltonians::{BinaryConfig, CouplingMatrix, IsingProblem};

/// Weighted graph whose maximum cut is sought. Weights are non-negative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxCutInstance {
    graph: CouplingMatrix,
}

impl MaxCutInstance {
    pub fn new(graph: CouplingMatrix) -> Result<Self> {
        if let Some(&(i, j, w)) = graph.edges().iter().find(|e| e.2 < 0.0) {
            return Err(Error::invalid(format!("negative weight {w} on edge ({i}, {j})")));
        }
        Ok(MaxCutInstance { graph })
    }

    pub fn graph(&self) -> &CouplingMatrix {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }
}

/// Ising form of MaxCut: `J = −w`, `h = 0`, and `offset = ½ Σ w`.
///
/// For every configuration `cut = offset − ½ E` where `E` is the Ising
/// energy, so the maximum cut is `offset − ½ E_min`.
pub fn maxcut_to_ising(instance: &MaxCutInstance) -> Result<(IsingProblem, f64)> {
    let couplings = instance.graph.scaled(-1.0)?;
    let offset = 0.5 * instance.graph.total_weight();
    Ok((IsingProblem::without_field(couplings), offset))
}

/// Cut value implied by an Ising energy of the mapped problem.
pub fn cut_from_energy(offset: f64, energy: f64) -> f64 {
    offset - 0.5 * energy
}

/// Total weight of edges whose endpoints carry opposite spins.
pub fn cut_value(instance: &MaxCutInstance, config: &BinaryConfig) -> Result<f64> {
    check_len(instance.n(), config.len())?;
    let s = config.spins();
    Ok(instance
        .graph
        .edges()
        .iter()
        .filter(|&&(i, j, _)| s[i] != s[j])
        .map(|e| e.2)
        .sum())
}
