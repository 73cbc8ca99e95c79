//! Spin-problem types and exact energy evaluation.
//!
//! Sign conventions follow the usual minimisation form: ferromagnetic
//! couplings (`J > 0`) lower the energy of aligned spins or phases.

mod config;
mod coupling;
mod energy;
mod problems;

pub use config::{
    binary_to_phase, canonical_phase, phase_to_binary, potts_project, BinaryConfig, Configuration,
    PhaseConfig,
};
pub use coupling::CouplingMatrix;
pub use energy::{hermitian_xy_energy, hermitian_xy_form, hobo_energy, ising_energy, xy_energy};
pub(crate) use energy::{ising_energy_unchecked, xy_energy_raw};
pub use problems::{HermitianXYProblem, HoboProblem, IsingProblem, PottsProblem, XYProblem};
