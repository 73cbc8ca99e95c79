use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonians::{potts_project, BinaryConfig, Configuration, PhaseConfig};

/// What a readout converts amplitudes into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReadoutTarget {
    /// Sign of the in-phase part; zero reads as `+1`.
    Binary,
    /// `arg Ψ_i` reduced into `[0, 2π)`.
    Phase,
    /// Phase snapped to the nearest of `n` equally spaced values.
    Potts(usize),
}

pub fn readout(amplitudes: &[Complex64], target: ReadoutTarget) -> Result<Configuration> {
    if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::invalid("cannot read out non-finite amplitudes"));
    }
    Ok(match target {
        ReadoutTarget::Binary => Configuration::Binary(binary_readout(amplitudes.iter().map(|z| z.re))),
        ReadoutTarget::Phase => Configuration::Phase(phase_readout(amplitudes)),
        ReadoutTarget::Potts(n) => Configuration::Phase(potts_project(&phase_readout(amplitudes), n)?),
    })
}

pub(crate) fn binary_readout(in_phase: impl Iterator<Item = f64>) -> BinaryConfig {
    BinaryConfig::from_signs(in_phase.map(|x| x >= 0.0))
}

pub(crate) fn phase_readout(amplitudes: &[Complex64]) -> PhaseConfig {
    PhaseConfig::new(amplitudes.iter().map(|z| z.arg()).collect()).expect("finite phases")
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn binary_signs() {
        let amps = [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)];
        let c = readout(&amps, ReadoutTarget::Binary).unwrap();
        assert_eq!(c.as_binary().unwrap().spins(), &[1, -1]);
    }

    #[test]
    fn imaginary_unit_phase() {
        let c = readout(&[Complex64::new(0.0, 1.0)], ReadoutTarget::Phase).unwrap();
        assert!((c.as_phase().unwrap().phases()[0] - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn zero_amplitude_reads_up() {
        let c = readout(&[Complex64::new(0.0, 0.0)], ReadoutTarget::Binary).unwrap();
        assert_eq!(c.as_binary().unwrap().spins(), &[1]);
        let c = readout(&[Complex64::new(-0.0, 0.0)], ReadoutTarget::Binary).unwrap();
        assert_eq!(c.as_binary().unwrap().spins(), &[1]);
    }

    #[test]
    fn potts_target() {
        let z = Complex64::from_polar(1.0, 2.0 * PI / 3.0 + 0.05);
        let c = readout(&[z], ReadoutTarget::Potts(3)).unwrap();
        assert!((c.as_phase().unwrap().phases()[0] - 2.0 * PI / 3.0).abs() < 1e-12);
    }
}
