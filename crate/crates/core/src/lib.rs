//! Ground-state search for Ising, XY and Potts Hamiltonians by integrating
//! the equations of motion of analogue optimisation machines.
//!
//! The crate is organised bottom-up:
//!
//! - [`hamiltonians`]: problem types and exact energies.
//! - [`mappings`]: MaxCut, TSP and phase-retrieval compilers.
//! - [`integrator`]: RK4 / Euler–Maruyama kernels, schedules, seeded RNG.
//! - [`dynamics`]: gain-dissipative, CIM, Kuramoto, Hopfield, laser and
//!   Lang–Kobayashi solvers plus a conservative DNLS simulator.
//! - [`oracle`]: exhaustive reference solvers for small instances.
//! - [`harness`]: file formats, generators, benchmarks.
// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod harness;
pub mod hamiltonians;
pub mod integrator;
pub mod mappings;
pub mod oracle;

pub use error::{Error, Result};
pub use hamiltonians::*;
pub use dynamics::{OscillatorState, RunResult};
pub use integrator::{Ramp, RngStream, SolverSchedule};
