use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Assignment of ±1 spins.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct BinaryConfig(Vec<i8>);

impl BinaryConfig {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if let Some(pos) = spins.iter().position(|&s| s != 1 && s != -1) {
            return Err(Error::invalid(format!("spin {pos} is {}, expected ±1", spins[pos])));
        }
        Ok(BinaryConfig(spins))
    }

    /// All spins `+1`.
    pub fn all_up(n: usize) -> Self {
        BinaryConfig(vec![1; n])
    }

    /// Config whose spin `i` is `-1` iff bit `i` of `bits` is set.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        BinaryConfig((0..n).map(|i| if bits >> i & 1 == 1 { -1 } else { 1 }).collect())
    }

    /// Spin `+1` where the predicate holds, `-1` elsewhere.
    pub fn from_signs(values: impl IntoIterator<Item = bool>) -> Self {
        BinaryConfig(values.into_iter().map(|up| if up { 1 } else { -1 }).collect())
    }

    pub fn spins(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn flipped(&self) -> Self {
        BinaryConfig(self.0.iter().map(|s| -s).collect())
    }

    /// Multiplies every spin by `sign` (which must itself be ±1).
    pub fn gauged(&self, sign: i8) -> Self {
        BinaryConfig(self.0.iter().map(|s| s * sign).collect())
    }

    pub fn into_inner(self) -> Vec<i8> {
        self.0
    }
}

impl TryFrom<Vec<i8>> for BinaryConfig {
    type Error = Error;
    fn try_from(v: Vec<i8>) -> Result<Self> {
        BinaryConfig::new(v)
    }
}

impl From<BinaryConfig> for Vec<i8> {
    fn from(c: BinaryConfig) -> Self {
        c.0
    }
}

/// Phase assignment, every entry reduced into `[0, 2π)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct PhaseConfig(Vec<f64>);

/// Reduces an angle into `[0, 2π)`.
pub fn canonical_phase(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    // rem_euclid can return TAU itself for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

impl PhaseConfig {
    /// Canonicalizes arbitrary finite angles.
    pub fn new(phases: Vec<f64>) -> Result<Self> {
        if let Some(pos) = phases.iter().position(|p| !p.is_finite()) {
            return Err(Error::invalid(format!("phase {pos} is not finite")));
        }
        Ok(PhaseConfig(phases.into_iter().map(canonical_phase).collect()))
    }

    pub fn zeros(n: usize) -> Self {
        PhaseConfig(vec![0.0; n])
    }

    pub fn phases(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Adds `offset` to every phase.
    pub fn rotated(&self, offset: f64) -> Self {
        PhaseConfig(self.0.iter().map(|p| canonical_phase(p + offset)).collect())
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl TryFrom<Vec<f64>> for PhaseConfig {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        PhaseConfig::new(v)
    }
}

impl From<PhaseConfig> for Vec<f64> {
    fn from(c: PhaseConfig) -> Self {
        c.0
    }
}

/// A readout of either kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Configuration {
    Binary(BinaryConfig),
    Phase(PhaseConfig),
}

impl Configuration {
    pub fn len(&self) -> usize {
        match self {
            Configuration::Binary(c) => c.len(),
            Configuration::Phase(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_binary(&self) -> Option<&BinaryConfig> {
        match self {
            Configuration::Binary(c) => Some(c),
            Configuration::Phase(_) => None,
        }
    }

    pub fn as_phase(&self) -> Option<&PhaseConfig> {
        match self {
            Configuration::Phase(c) => Some(c),
            Configuration::Binary(_) => None,
        }
    }
}

/// Rounds every phase to the nearest multiple of `2π / n_states`.
///
/// Exact ties go to the smaller multiple. The result is canonical, so a
/// phase just below `2π` snaps to `0`.
pub fn potts_project(config: &PhaseConfig, n_states: usize) -> Result<PhaseConfig> {
    if n_states < 2 {
        return Err(Error::invalid("potts projection needs at least 2 states"));
    }
    let step = TAU / n_states as f64;
    let phases = config
        .0
        .iter()
        .map(|&theta| {
            let k = theta / step;
            let lower = k.floor();
            let idx = if k - lower > 0.5 { lower + 1.0 } else { lower };
            let idx = (idx as usize) % n_states;
            idx as f64 * step
        })
        .collect();
    Ok(PhaseConfig(phases))
}

/// `+1 → 0`, `-1 → π`.
pub fn binary_to_phase(config: &BinaryConfig) -> PhaseConfig {
    PhaseConfig(config.0.iter().map(|&s| if s > 0 { 0.0 } else { PI }).collect())
}

/// `+1` where `cos θ ≥ 0`, else `-1`.
pub fn phase_to_binary(config: &PhaseConfig) -> BinaryConfig {
    BinaryConfig::from_signs(config.0.iter().map(|t| t.cos() >= 0.0 || is_quarter_turn(*t)))
}

// cos(π/2) and cos(3π/2) evaluate to ±6e-17, not zero
fn is_quarter_turn(theta: f64) -> bool {
    (theta - PI / 2.0).abs() < 1e-15 || (theta - 1.5 * PI).abs() < 1e-15
}
