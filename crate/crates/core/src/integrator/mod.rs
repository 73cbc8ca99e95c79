//! Fixed-step integration kernels, schedules and seeded randomness.

mod rng;
mod schedule;
mod stepper;

pub use rng::{derive_seed, RngStream};
pub use schedule::{ramp_value, ConvergenceDetector, Ramp, SolverSchedule};
pub use stepper::{step_deterministic, step_stochastic, EulerMaruyama, FnField, Rk4, VectorField};
