//! Fixed instances shared by the criterion benchmarks.

use spinflow_core::harness::{gen_random_couplings, gen_random_ising, WeightDistribution};
use spinflow_core::{IsingProblem, SolverSchedule, XYProblem};

pub fn ising(n: usize, seed: u64) -> IsingProblem {
    gen_random_ising(n, 1.0, WeightDistribution::PlusMinusOne, seed).expect("valid instance")
}

pub fn xy(n: usize, seed: u64) -> XYProblem {
    XYProblem::new(gen_random_couplings(n, 1.0, WeightDistribution::Gaussian, seed).expect("valid instance"))
}

/// Fixed-length schedule with convergence checks effectively disabled.
pub fn fixed_schedule(steps: usize) -> SolverSchedule {
    SolverSchedule {
        dt: 0.01,
        max_steps: steps,
        convergence_tolerance: 1e-300,
        ..SolverSchedule::default()
    }
}
