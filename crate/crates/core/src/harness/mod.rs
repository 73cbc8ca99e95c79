//! Instance I/O, generators, solver dispatch and benchmarks.

mod bench;
mod document;
mod formats;
mod generate;
mod solve;

pub use bench::{
    load_instances, oracle_energy, run_benchmark, BenchConfig, BenchInstance, BenchOptions, BenchRow, BenchmarkReport,
    GenerateSpec, InstanceSpec, SolverSummary,
};
pub use document::{
    load_json, load_problem, parse_problem, save_json, to_json, Problem, ProblemDocument, ProblemType, Provenance,
};
pub use formats::{
    format_coupling, format_phase_retrieval, format_tsp, load_coupling, parse_coupling, parse_phase_retrieval,
    parse_tsp, save_coupling,
};
pub use generate::{gen_random_couplings, gen_random_ising, WeightDistribution};
pub use solve::{solve_once, solve_restarts, BestRun, RestartOutcome, SolveConfig, SolveReport, SolverKind};

/// Environment variable naming a default solve-config file.
pub const SCHEDULE_ENV: &str = "SPINFLOW_SCHEDULE";
